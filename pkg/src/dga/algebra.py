"""DG algebras and bimodules as validated structure-constant tables.

Basis elements are indexed globally in (degree, local index) order and all
products, actions and differentials are sparse coefficient vectors.  Every
constructor re-checks the graded identities exactly: associativity, unit
laws and Leibniz for algebras; the module axioms and commuting actions for
bimodules.  Basis element 0 in degree 0 must be the unit, which pins down
the complement of the unit line used by the bar machinery.

Windowed algebras (finite slices of infinite ones, like a free algebra)
store products only when the target degree is certified; asking for a
product outside the window raises instead of returning a guess.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complex import ChainComplex, GradedMap
from .field import Field
from .linalg import SparseMatrix, Vec, solve, vec_axpy
from .status import ValidationError, Window, WindowError, window_contains

MultTable = dict[tuple[int, int], Vec]


class _Graded:
    """Shared global-index bookkeeping over an underlying complex."""

    underlying: ChainComplex

    def _init_index(self):
        self.degrees = self.underlying.support()
        self.basis: list[tuple[int, int]] = []
        self.offset: dict[int, int] = {}
        for n in self.degrees:
            self.offset[n] = len(self.basis)
            for i in range(self.underlying.dim(n)):
                self.basis.append((n, i))
        self.gid = {key: g for g, key in enumerate(self.basis)}

    @property
    def field(self) -> Field:
        return self.underlying.field

    @property
    def window(self) -> Window | None:
        return self.underlying.window

    def degree_of(self, g: int) -> int:
        return self.basis[g][0]

    def in_window(self, degree: int) -> bool:
        return window_contains(self.window, degree)

    def d_local(self, vec: Vec, degree: int) -> Vec:
        """Differential applied to a local coordinate vector in a degree."""
        return self.underlying.diff(degree).mul_vec(vec)

    def label(self, g: int) -> str:
        n, i = self.basis[g]
        return self.underlying.label(n, i)


class DGAlgebra(_Graded):
    """Unital associative DG algebra given by exact structure constants.

    ``mult[(i, j)]`` is the coefficient vector of ``e_i * e_j`` over the
    basis of degree ``deg(i) + deg(j)``; missing in-window entries mean the
    product is zero.  ``weights`` optionally grades the basis by a
    multiplicative weight (used to split Hochschild towers into blocks).
    """

    def __init__(self, underlying: ChainComplex, mult: MultTable, weights=None, name=""):
        self.underlying = underlying
        self._init_index()
        self.name = name
        if (0, 0) not in self.gid:
            raise ValidationError("algebra needs basis element 0 in degree 0 (the unit)")
        self.unit_gid = self.gid[(0, 0)]
        self.mult = {}
        zero = self.field.zero()
        for (i, j), vec in mult.items():
            tgt = self.degree_of(i) + self.degree_of(j)
            if not self.in_window(tgt):
                raise ValidationError(f"product e{i}*e{j} declared outside window")
            cleaned = {k: v for k, v in vec.items() if v != zero}
            for k in cleaned:
                if not 0 <= k < self.underlying.dim(tgt):
                    raise ValidationError(f"product e{i}*e{j} has bad coefficient index {k}")
            if cleaned:
                self.mult[(i, j)] = cleaned
        self.weights = list(weights) if weights is not None else None
        if self.weights is not None:
            if len(self.weights) != len(self.basis):
                raise ValidationError("weights must cover the whole basis")
            if self.weights[self.unit_gid] != 0:
                raise ValidationError("unit must have weight 0")
        violations = self._validate()
        if violations:
            raise ValidationError(
                f"algebra {name or '<anon>'} fails {len(violations)} identities", violations
            )

    # -- products ------------------------------------------------------------

    def unit_vec(self) -> Vec:
        return {0: self.field.one()}

    def product_defined(self, i: int, j: int) -> bool:
        return self.in_window(self.degree_of(i) + self.degree_of(j))

    def mul_basis(self, i: int, j: int) -> Vec:
        tgt = self.degree_of(i) + self.degree_of(j)
        if not self.in_window(tgt):
            raise WindowError(
                f"product of degrees {self.degree_of(i)} and {self.degree_of(j)} leaves the window"
            )
        return self.mult.get((i, j), {})

    def mul_vec(self, v: Vec, vdeg: int, w: Vec, wdeg: int) -> Vec:
        """Product of local coordinate vectors; result in degree vdeg + wdeg."""
        field = self.field
        out: Vec = {}
        for a, ca in v.items():
            gi = self.gid[(vdeg, a)]
            for b, cb in w.items():
                gj = self.gid[(wdeg, b)]
                prod = self.mul_basis(gi, gj)
                if prod:
                    vec_axpy(field, out, field.mul(ca, cb), prod)
        return out

    def d_basis(self, g: int) -> Vec:
        n, i = self.basis[g]
        return self.underlying.diff(n).column(i)

    def homology_class_reps(self, window):
        from .complex import homology

        return homology(self.underlying, window)

    # -- validation ------------------------------------------------------------

    def _validate(self):
        bad = []
        field = self.field
        one = field.one()
        nb = len(self.basis)
        # unit laws
        u = self.unit_gid
        for g in range(nb):
            if self.product_defined(u, g):
                if self.mul_basis(u, g) != {self.basis[g][1]: one}:
                    bad.append(f"unit law fails on 1*{self.label(g)}")
            if self.product_defined(g, u):
                if self.mul_basis(g, u) != {self.basis[g][1]: one}:
                    bad.append(f"unit law fails on {self.label(g)}*1")
        # associativity on every triple whose intermediate degrees stay in window
        for i in range(nb):
            di = self.degree_of(i)
            for j in range(nb):
                dj = self.degree_of(j)
                if not self.in_window(di + dj):
                    continue
                for k in range(nb):
                    dk = self.degree_of(k)
                    if not (self.in_window(dj + dk) and self.in_window(di + dj + dk)):
                        continue
                    left = self.mul_vec(self.mul_basis(i, j), di + dj, {self.basis[k][1]: one}, dk)
                    right = self.mul_vec({self.basis[i][1]: one}, di, self.mul_basis(j, k), dj + dk)
                    if left != right:
                        bad.append(
                            f"associativity fails on ({self.label(i)},{self.label(j)},{self.label(k)})"
                        )
        # graded Leibniz on every pair with product and d-target in window
        for i in range(nb):
            di = self.degree_of(i)
            for j in range(nb):
                dj = self.degree_of(j)
                if not (self.in_window(di + dj) and self.in_window(di + dj + 1)):
                    continue
                lhs = self.d_local(self.mul_basis(i, j), di + dj)
                rhs: Vec = {}
                vec_axpy(
                    field,
                    rhs,
                    one,
                    self.mul_vec(self.d_basis(i), di + 1, {self.basis[j][1]: one}, dj),
                )
                sgn = field.from_int((-1) ** di)
                vec_axpy(
                    field,
                    rhs,
                    sgn,
                    self.mul_vec({self.basis[i][1]: one}, di, self.d_basis(j), dj + 1),
                )
                if lhs != rhs:
                    bad.append(f"Leibniz fails on ({self.label(i)},{self.label(j)})")
        # weight homogeneity when weights are declared
        if self.weights is not None:
            for (i, j), vec in self.mult.items():
                tgt = self.degree_of(i) + self.degree_of(j)
                want = self.weights[i] + self.weights[j]
                for k in vec:
                    if self.weights[self.gid[(tgt, k)]] != want:
                        bad.append(f"weight inhomogeneous product {self.label(i)}*{self.label(j)}")
                        break
            for g in range(nb):
                n = self.degree_of(g)
                for k in self.d_basis(g):
                    if self.weights[self.gid[(n + 1, k)]] != self.weights[g]:
                        bad.append(f"weight inhomogeneous differential on {self.label(g)}")
                        break
        return bad

    def __repr__(self):
        return f"DGAlgebra({self.name or 'anon'}, dims={self.underlying.dims})"


def validate_algebra(underlying, mult, weights=None, name="") -> DGAlgebra:
    """Constructor alias; raises ValidationError listing every violated identity."""
    return DGAlgebra(underlying, mult, weights=weights, name=name)


class DGBimodule(_Graded):
    """DG (R, S)-bimodule with exact left/right action tables."""

    def __init__(
        self, R: DGAlgebra, S: DGAlgebra, underlying: ChainComplex, left, right, weights=None, name=""
    ):
        self.R = R
        self.S = S
        self.underlying = underlying
        self._init_index()
        self.name = name
        zero = self.field.zero()
        self.left = {k: {a: v for a, v in vec.items() if v != zero} for k, vec in left.items()}
        self.left = {k: v for k, v in self.left.items() if v}
        self.right = {k: {a: v for a, v in vec.items() if v != zero} for k, vec in right.items()}
        self.right = {k: v for k, v in self.right.items() if v}
        self.weights = list(weights) if weights is not None else None
        if self.weights is not None and len(self.weights) != len(self.basis):
            raise ValidationError("weights must cover the whole bimodule basis")
        violations = self._validate()
        if violations:
            raise ValidationError(
                f"bimodule {name or '<anon>'} fails {len(violations)} identities", violations
            )

    def act_left_basis(self, rg: int, mg: int) -> Vec:
        tgt = self.R.degree_of(rg) + self.degree_of(mg)
        if not self.in_window(tgt):
            raise WindowError("left action leaves the window")
        return self.left.get((rg, mg), {})

    def act_right_basis(self, mg: int, sg: int) -> Vec:
        tgt = self.degree_of(mg) + self.S.degree_of(sg)
        if not self.in_window(tgt):
            raise WindowError("right action leaves the window")
        return self.right.get((mg, sg), {})

    def act_left(self, r: Vec, rdeg: int, m: Vec, mdeg: int) -> Vec:
        field = self.field
        out: Vec = {}
        for a, ca in r.items():
            rg = self.R.gid[(rdeg, a)]
            for b, cb in m.items():
                mg = self.gid[(mdeg, b)]
                act = self.act_left_basis(rg, mg)
                if act:
                    vec_axpy(field, out, field.mul(ca, cb), act)
        return out

    def act_right(self, m: Vec, mdeg: int, s: Vec, sdeg: int) -> Vec:
        field = self.field
        out: Vec = {}
        for b, cb in m.items():
            mg = self.gid[(mdeg, b)]
            for a, ca in s.items():
                sg = self.S.gid[(sdeg, a)]
                act = self.act_right_basis(mg, sg)
                if act:
                    vec_axpy(field, out, field.mul(cb, ca), act)
        return out

    def _validate(self):
        bad = []
        field = self.field
        one = field.one()
        R, S = self.R, self.S
        for mg, (mdeg, mi) in enumerate(self.basis):
            em = {mi: one}
            if self.in_window(mdeg):
                if self.act_left_basis(R.unit_gid, mg) != em:
                    bad.append(f"left unit action fails on {self.label(mg)}")
                if self.act_right_basis(mg, S.unit_gid) != em:
                    bad.append(f"right unit action fails on {self.label(mg)}")
        # left associativity (r r') m = r (r' m)
        for ra, (rad, _) in enumerate(R.basis):
            for rb, (rbd, rbi) in enumerate(R.basis):
                if not (R.in_window(rad + rbd)):
                    continue
                for mg, (mdeg, mi) in enumerate(self.basis):
                    if not (self.in_window(rbd + mdeg) and self.in_window(rad + rbd + mdeg)):
                        continue
                    lhs = self.act_left(R.mul_basis(ra, rb), rad + rbd, {mi: one}, mdeg)
                    rhs = self.act_left(
                        {R.basis[ra][1]: one}, rad, self.act_left_basis(rb, mg), rbd + mdeg
                    )
                    if lhs != rhs:
                        bad.append(f"left associativity fails on ({ra},{rb},{self.label(mg)})")
        # right associativity m (s s') = (m s) s'
        for mg, (mdeg, mi) in enumerate(self.basis):
            for sa, (sad, sai) in enumerate(S.basis):
                if not self.in_window(mdeg + sad):
                    continue
                for sb, (sbd, _) in enumerate(S.basis):
                    if not (S.in_window(sad + sbd) and self.in_window(mdeg + sad + sbd)):
                        continue
                    lhs = self.act_right({mi: one}, mdeg, S.mul_basis(sa, sb), sad + sbd)
                    rhs = self.act_right(self.act_right_basis(mg, sa), mdeg + sad, {S.basis[sb][1]: one}, sbd)
                    if lhs != rhs:
                        bad.append(f"right associativity fails on ({self.label(mg)},{sa},{sb})")
        # actions commute
        for ra, (rad, rai) in enumerate(R.basis):
            for mg, (mdeg, mi) in enumerate(self.basis):
                if not self.in_window(rad + mdeg):
                    continue
                for sa, (sad, sai) in enumerate(S.basis):
                    if not (self.in_window(mdeg + sad) and self.in_window(rad + mdeg + sad)):
                        continue
                    lhs = self.act_right(self.act_left_basis(ra, mg), rad + mdeg, {sai: one}, sad)
                    rhs = self.act_left({rai: one}, rad, self.act_right_basis(mg, sa), mdeg + sad)
                    if lhs != rhs:
                        bad.append(f"actions do not commute on ({ra},{self.label(mg)},{sa})")
        # Leibniz for both actions
        for ra, (rad, rai) in enumerate(R.basis):
            for mg, (mdeg, mi) in enumerate(self.basis):
                if not (self.in_window(rad + mdeg) and self.in_window(rad + mdeg + 1)):
                    continue
                lhs = self.d_local(self.act_left_basis(ra, mg), rad + mdeg)
                rhs: Vec = {}
                vec_axpy(field, rhs, one, self.act_left(R.d_basis(ra), rad + 1, {mi: one}, mdeg))
                sgn = field.from_int((-1) ** rad)
                vec_axpy(
                    field, rhs, sgn, self.act_left({rai: one}, rad, self.d_local({mi: one}, mdeg), mdeg + 1)
                )
                if lhs != rhs:
                    bad.append(f"left Leibniz fails on ({ra},{self.label(mg)})")
        for mg, (mdeg, mi) in enumerate(self.basis):
            for sa, (sad, sai) in enumerate(S.basis):
                if not (self.in_window(mdeg + sad) and self.in_window(mdeg + sad + 1)):
                    continue
                lhs = self.d_local(self.act_right_basis(mg, sa), mdeg + sad)
                rhs = {}
                vec_axpy(
                    field, rhs, one, self.act_right(self.d_local({mi: one}, mdeg), mdeg + 1, {sai: one}, sad)
                )
                sgn = field.from_int((-1) ** mdeg)
                vec_axpy(field, rhs, sgn, self.act_right({mi: one}, mdeg, S.d_basis(sa), sad + 1))
                if lhs != rhs:
                    bad.append(f"right Leibniz fails on ({self.label(mg)},{sa})")
        # weight homogeneity of actions and differential
        if self.weights is not None:
            rw = R.weights or [0] * len(R.basis)
            sw = S.weights or [0] * len(S.basis)
            for (rg, mg), vec in self.left.items():
                tgt = R.degree_of(rg) + self.degree_of(mg)
                want = rw[rg] + self.weights[mg]
                for k in vec:
                    if self.weights[self.gid[(tgt, k)]] != want:
                        bad.append(f"weight inhomogeneous left action ({rg},{self.label(mg)})")
                        break
            for (mg, sg), vec in self.right.items():
                tgt = self.degree_of(mg) + S.degree_of(sg)
                want = self.weights[mg] + sw[sg]
                for k in vec:
                    if self.weights[self.gid[(tgt, k)]] != want:
                        bad.append(f"weight inhomogeneous right action ({self.label(mg)},{sg})")
                        break
            for g, (n, _) in enumerate(self.basis):
                for k in self.d_basis(g):
                    if self.weights[self.gid[(n + 1, k)]] != self.weights[g]:
                        bad.append(f"weight inhomogeneous differential on {self.label(g)}")
                        break
        return bad

    def d_basis(self, g: int) -> Vec:
        n, i = self.basis[g]
        return self.underlying.diff(n).column(i)

    def __repr__(self):
        return f"DGBimodule({self.name or 'anon'}, dims={self.underlying.dims})"


@dataclass(frozen=True, eq=False)
class PointedBimodule:
    """Bimodule with a chosen degree-0 cocycle, the image of 1 under k -> X."""

    base: DGBimodule
    point: Vec

    def __post_init__(self):
        zero = self.base.field.zero()
        pt = {k: v for k, v in self.point.items() if v != zero}
        object.__setattr__(self, "point", pt)
        if not pt:
            raise ValidationError("the point of a pointed bimodule must be nonzero")
        for k in pt:
            if not 0 <= k < self.base.underlying.dim(0):
                raise ValidationError("point must live in degree 0")
        if self.base.d_local(pt, 0):
            raise ValidationError("the point must be a cocycle")

    @property
    def field(self):
        return self.base.field


class AlgebraMap:
    """Multiplicative unital chain map between DG algebras."""

    def __init__(self, source: DGAlgebra, target: DGAlgebra, components: GradedMap, name=""):
        if components.shift != 0:
            raise ValidationError("algebra maps have degree 0")
        if components.source is not source.underlying or components.target is not target.underlying:
            raise ValidationError("component map must connect the given algebras")
        self.source = source
        self.target = target
        self.components = components
        self.name = name
        bad = self._validate()
        if bad:
            raise ValidationError(f"algebra map fails {len(bad)} identities", bad)

    def apply_basis(self, g: int) -> Vec:
        n, i = self.source.basis[g]
        return self.components.component(n).column(i)

    def apply(self, vec: Vec, degree: int) -> Vec:
        return self.components.component(degree).mul_vec(vec)

    def _validate(self):
        bad = []
        src, tgt = self.source, self.target
        one = src.field.one()
        if self.apply_basis(src.unit_gid) != {0: one}:
            bad.append("unit is not preserved")
        for i, (di, _) in enumerate(src.basis):
            for j, (dj, _) in enumerate(src.basis):
                if not (src.in_window(di + dj) and tgt.in_window(di + dj)):
                    continue
                lhs = self.apply(src.mul_basis(i, j), di + dj)
                rhs = tgt.mul_vec(self.apply_basis(i), di, self.apply_basis(j), dj)
                if lhs != rhs:
                    bad.append(f"multiplicativity fails on ({src.label(i)},{src.label(j)})")
        return bad

    def __repr__(self):
        return f"AlgebraMap({self.name or 'anon'}: {self.source.name} -> {self.target.name})"


# ---------------------------------------------------------------------------
# operations


def square_zero_extension(R: DGAlgebra, M: DGBimodule, name="") -> DGAlgebra:
    """R (+) M with (r, m)(r', m') = (r r', r m' + m r'); products of M vanish.

    Window slices extend degreewise: the result is certified exactly where
    both inputs are.
    """
    if M.R is not R or M.S is not R:
        raise ValidationError("square-zero extension needs an (R, R)-bimodule")
    field = R.field
    from .status import intersect

    window = intersect(R.window, M.window)
    dims = {}
    for n in set(R.underlying.dims) | set(M.underlying.dims):
        if not window_contains(window, n):
            continue  # the extension is only certified on the intersection
        dims[n] = R.underlying.dim(n) + M.underlying.dim(n)
    # basis per degree: R part first, then M part
    d = {}
    for n in dims:
        if not window_contains(window, n + 1) and not window_contains(window, n):
            continue
        entries = []
        rrows = R.underlying.dim(n + 1)
        rcols = R.underlying.dim(n)
        for i, j, v in R.underlying.diff(n).iter_entries():
            entries.append((i, j, v))
        for i, j, v in M.underlying.diff(n).iter_entries():
            entries.append((i + rrows, j + rcols, v))
        if entries or dims.get(n + 1, 0):
            d[n] = SparseMatrix.from_entries(field, dims.get(n + 1, 0), dims.get(n, 0), entries)
    labels = {
        n: [R.underlying.label(n, i) for i in range(R.underlying.dim(n))]
        + [f"m:{M.underlying.label(n, i)}" for i in range(M.underlying.dim(n))]
        for n in dims
    }
    under = ChainComplex(field, dims, d, labels=labels, window=window)
    mult: MultTable = {}
    basis = []
    for n in sorted(dims):
        for i in range(dims[n]):
            basis.append((n, i))

    def shift_vec(vec, n, part):
        off = 0 if part == "R" else R.underlying.dim(n)
        return {off + k: v for k, v in vec.items()}

    for gi, (di, ii) in enumerate(basis):
        i_is_R = ii < R.underlying.dim(di)
        for gj, (dj, jj) in enumerate(basis):
            j_is_R = jj < R.underlying.dim(dj)
            tgt = di + dj
            if not window_contains(window, tgt):
                continue
            if i_is_R and j_is_R:
                rg = R.gid[(di, ii)]
                sg = R.gid[(dj, jj)]
                vec = shift_vec(R.mul_basis(rg, sg), tgt, "R")
            elif i_is_R and not j_is_R:
                rg = R.gid[(di, ii)]
                mg = M.gid[(dj, jj - R.underlying.dim(dj))]
                vec = shift_vec(M.act_left_basis(rg, mg), tgt, "M")
            elif not i_is_R and j_is_R:
                mg = M.gid[(di, ii - R.underlying.dim(di))]
                sg = R.gid[(dj, jj)]
                vec = shift_vec(M.act_right_basis(mg, sg), tgt, "M")
            else:
                vec = {}
            if vec:
                mult[(gi, gj)] = vec
    weights = None
    if R.weights is not None and M.weights is not None:
        weights = []
        for n, i in basis:
            if i < R.underlying.dim(n):
                weights.append(R.weights[R.gid[(n, i)]])
            else:
                weights.append(M.weights[M.gid[(n, i - R.underlying.dim(n))]])
    return DGAlgebra(under, mult, weights=weights, name=name or f"{R.name}+{M.name}")


def is_strict(S: DGAlgebra) -> bool:
    """True iff the degree -1 differential is identically zero."""
    return S.underlying.diff(-1).is_zero()


def is_connective(S: DGAlgebra, window: Window) -> bool:
    """True iff H^n(S) = 0 for all n < 0; complete because support is finite."""
    sup = S.underlying.support()
    neg = [n for n in sup if n < 0]
    wlo = window[0]
    if neg and wlo is not None and wlo > neg[0] - 1:
        raise WindowError(
            f"connectivity window {list(window)} does not cover negative support {neg}"
        )
    if S.window is not None:
        slo, shi = S.window
        if slo is not None or (shi is not None and shi < 0):
            raise WindowError(
                "connectivity needs certification on every negative degree; "
                "this slice is not certified there"
            )
    from .complex import homology_dims

    lo = min(neg[0] - 1, -1) if neg else -1
    h = homology_dims(S.underlying, (lo, -1))
    return all(v == 0 for v in h.values())


def is_homotopy_invertible(S: DGAlgebra, x: Vec) -> tuple[bool, Vec | None]:
    """Degree-0 cocycle x: find a cocycle y with xy - 1 and yx - 1 boundaries.

    One exact linear solve in the coordinates of y and the two preimages.
    """
    field = S.field
    if S.d_local(x, 0):
        raise ValidationError("homotopy invertibility needs a cocycle input")
    n0 = S.underlying.dim(0)
    nm1 = S.underlying.dim(-1)
    n1 = S.underlying.dim(1)
    # unknowns: y (n0), u (nm1), v (nm1)
    cols = n0 + 2 * nm1
    entries = []
    rhs: Vec = {}
    row = 0
    # x*y - d(u) = 1   (in degree 0)
    for b in range(n0):
        col_vec = S.mul_vec(x, 0, {b: field.one()}, 0)
        for k, val in col_vec.items():
            entries.append((row + k, b, val))
    dm1 = S.underlying.diff(-1)
    for i, j, val in dm1.iter_entries():
        entries.append((row + i, n0 + j, field.neg(val)))
    rhs[row + 0] = field.one()
    row += n0
    # y*x - d(v) = 1
    for b in range(n0):
        col_vec = S.mul_vec({b: field.one()}, 0, x, 0)
        for k, val in col_vec.items():
            entries.append((row + k, b, val))
    for i, j, val in dm1.iter_entries():
        entries.append((row + i, n0 + nm1 + j, field.neg(val)))
    rhs[row + 0] = field.one()
    row += n0
    # d(y) = 0
    d0 = S.underlying.diff(0)
    for i, j, val in d0.iter_entries():
        entries.append((row + i, j, val))
    row += n1
    A = SparseMatrix.from_entries(field, row, cols, entries)
    sol = solve(A, rhs)
    if sol is None:
        return False, None
    y = {b: v for b, v in sol.items() if b < n0}
    return True, y


def is_strictly_invertible(S: DGAlgebra, x: Vec) -> tuple[bool, Vec | None]:
    """Solve xy = yx = 1 exactly; honest also for non-strict algebras."""
    field = S.field
    n0 = S.underlying.dim(0)
    entries = []
    rhs: Vec = {}
    for b in range(n0):
        for k, val in S.mul_vec(x, 0, {b: field.one()}, 0).items():
            entries.append((k, b, val))
    rhs[0] = field.one()
    for b in range(n0):
        for k, val in S.mul_vec({b: field.one()}, 0, x, 0).items():
            entries.append((n0 + k, b, val))
    rhs[n0] = field.one()
    A = SparseMatrix.from_entries(field, 2 * n0, n0, entries)
    sol = solve(A, rhs)
    if sol is None:
        return False, None
    return True, sol


def regular_bimodule(R: DGAlgebra, name="") -> DGBimodule:
    """R as an (R, R)-bimodule by multiplication; inherits weights."""
    left = {}
    right = {}
    for i in range(len(R.basis)):
        for j in range(len(R.basis)):
            if not R.product_defined(i, j):
                continue
            vec = R.mul_basis(i, j)
            if vec:
                left[(i, j)] = vec
                right[(i, j)] = vec
    return DGBimodule(
        R, R, R.underlying, left, right, weights=R.weights, name=name or f"{R.name}-reg"
    )


def _phi_weight_compatible(phi: AlgebraMap, M: DGBimodule) -> bool:
    """Weights survive restriction iff phi maps weight-w elements to weight w."""
    if M.weights is None:
        return False
    rw = phi.source.weights or [0] * len(phi.source.basis)
    sw = phi.target.weights
    if sw is None:
        sw = [0] * len(phi.target.basis)
    for rg, (rdeg, _) in enumerate(phi.source.basis):
        for k in phi.apply_basis(rg):
            if sw[phi.target.gid[(rdeg, k)]] != rw[rg]:
                return False
    return True


def restrict_bimodule(phi: AlgebraMap, M: DGBimodule, right_side: str = "S") -> DGBimodule:
    """Pull back the left action along phi: R -> S; r.m := phi(r).m.

    With ``right_side="R"`` the right action is pulled back too, giving the
    (R, R)-bimodule written S_phi when M is S itself.
    """
    R = phi.source
    S = phi.target
    if M.R is not S:
        raise ValidationError("restriction needs a bimodule with left algebra = target of phi")
    left = {}
    for rg, (rdeg, ri) in enumerate(R.basis):
        img = phi.apply_basis(rg)
        if not img:
            continue
        for mg, (mdeg, mi) in enumerate(M.basis):
            if not M.in_window(rdeg + mdeg):
                continue
            vec = M.act_left(img, rdeg, {mi: M.field.one()}, mdeg)
            if vec:
                left[(rg, mg)] = vec
    wts = M.weights if _phi_weight_compatible(phi, M) else None
    if right_side == "S":
        if M.S is not S:
            raise ValidationError("right_side='S' needs an (S, S)- or (*, S)-bimodule")
        return DGBimodule(
            R, M.S, M.underlying, left, dict(M.right), weights=wts, name=f"{M.name}|phi"
        )
    if right_side != "R":
        raise ValidationError("right_side must be 'S' or 'R'")
    if M.S is not S:
        raise ValidationError("right restriction needs a right S-action")
    right = {}
    for mg, (mdeg, mi) in enumerate(M.basis):
        for rg, (rdeg, ri) in enumerate(R.basis):
            if not M.in_window(mdeg + rdeg):
                continue
            img = phi.apply_basis(rg)
            if not img:
                continue
            vec = M.act_right({mi: M.field.one()}, mdeg, img, rdeg)
            if vec:
                right[(mg, rg)] = vec
    return DGBimodule(R, R, M.underlying, left, right, weights=wts, name=f"{M.name}|phi,phi")


def direct_sum_bimodules(A: DGBimodule, B: DGBimodule, name="") -> DGBimodule:
    """A (+) B over the same algebra pair, A-part first in every degree."""
    if A.R is not B.R or A.S is not B.S:
        raise ValidationError("direct sum needs bimodules over the same algebras")
    from .complex import direct_sum

    under = direct_sum(A.underlying, B.underlying)
    gid = {}
    pos = 0
    for n in sorted(under.dims):
        for i in range(under.dim(n)):
            gid[(n, i)] = pos
            pos += 1

    def shifted(part, n, vec):
        off = 0 if part == 0 else A.underlying.dim(n)
        return {off + k: v for k, v in vec.items()}

    left = {}
    right = {}
    for part, M in ((0, A), (1, B)):
        for (rg, mg), vec in M.left.items():
            mdeg, mi = M.basis[mg]
            tgt = M.R.degree_of(rg) + mdeg
            src = gid[(mdeg, mi if part == 0 else A.underlying.dim(mdeg) + mi)]
            left[(rg, src)] = shifted(part, tgt, vec)
        for (mg, sg), vec in M.right.items():
            mdeg, mi = M.basis[mg]
            tgt = mdeg + M.S.degree_of(sg)
            src = gid[(mdeg, mi if part == 0 else A.underlying.dim(mdeg) + mi)]
            right[(src, sg)] = shifted(part, tgt, vec)
    weights = None
    if A.weights is not None and B.weights is not None:
        weights = [0] * len(gid)
        for part, M in ((0, A), (1, B)):
            for mg, (mdeg, mi) in enumerate(M.basis):
                src = gid[(mdeg, mi if part == 0 else A.underlying.dim(mdeg) + mi)]
                weights[src] = M.weights[mg]
    return DGBimodule(A.R, A.S, under, left, right, weights=weights, name=name or f"{A.name}+{B.name}")


def suspend_bimodule(M: DGBimodule, m: int = 1, name="") -> DGBimodule:
    """Shift a bimodule: the left action picks up (-1)^{m |r|}, right none."""
    from .complex import suspend

    under = suspend(M.underlying, m)
    field = M.field
    left = {}
    for (rg, mg), vec in M.left.items():
        sgn = field.from_int((-1) ** (m * M.R.degree_of(rg)))
        left[(rg, mg)] = {k: field.mul(sgn, v) for k, v in vec.items()}
    return DGBimodule(
        M.R, M.S, under, left, dict(M.right), weights=M.weights, name=name or f"S^{m}{M.name}"
    )


def free_bimodule(R: DGAlgebra, C: ChainComplex, S: DGAlgebra, name="") -> DGBimodule:
    """R (x) C (x) S with concatenation actions and the tensor differential.

    Always a valid bimodule; contractible C gives the disk-shaped summands
    the cofibrancy smoke tests are built from.
    """
    if R.window is not None or S.window is not None or C.window is not None:
        raise ValidationError("free bimodule needs complete inputs")
    field = R.field

    def triples_at(n):
        out = []
        for rg, (rd, ri) in enumerate(R.basis):
            for cd in sorted(C.dims):
                sd = n - rd - cd
                if S.underlying.dim(sd) == 0:
                    continue
                for ci in range(C.dim(cd)):
                    for sg, (sdeg, si) in enumerate(S.basis):
                        if sdeg == sd:
                            out.append((rg, (cd, ci), sg))
        return out

    degrees = sorted(
        {
            rd + cd + sd
            for rd in R.underlying.dims
            for cd in C.dims
            for sd in S.underlying.dims
        }
    )
    bases = {}
    index = {}
    for n in degrees:
        tri = triples_at(n)
        if tri:
            bases[n] = tri
            index[n] = {key: pos for pos, key in enumerate(tri)}
    dims = {n: len(b) for n, b in bases.items()}
    d = {}
    for n, tri in bases.items():
        tgt = index.get(n + 1, {})
        entries = []
        for col, (rg, (cd, ci), sg) in enumerate(tri):
            rd = R.degree_of(rg)
            sd = S.degree_of(sg)
            for k, v in R.d_basis(rg).items():
                key = (R.gid[(rd + 1, k)], (cd, ci), sg)
                if key in tgt:
                    entries.append((tgt[key], col, v))
            s1 = field.from_int((-1) ** rd)
            for k, v in C.diff(cd).column(ci).items():
                key = (rg, (cd + 1, k), sg)
                if key in tgt:
                    entries.append((tgt[key], col, field.mul(s1, v)))
            s2 = field.from_int((-1) ** (rd + cd))
            for k, v in S.d_basis(sg).items():
                key = (rg, (cd, ci), S.gid[(sd + 1, k)])
                if key in tgt:
                    entries.append((tgt[key], col, field.mul(s2, v)))
        if entries or dims.get(n + 1, 0):
            d[n] = SparseMatrix.from_entries(field, dims.get(n + 1, 0), dims.get(n, 0), entries)
    labels = {
        n: [
            f"{R.label(rg)}(x){C.label(cd, ci)}(x){S.label(sg)}"
            for (rg, (cd, ci), sg) in tri
        ]
        for n, tri in bases.items()
    }
    under = ChainComplex(field, dims, d, labels=labels)
    under_gid = {}
    pos = 0
    for n in sorted(dims):
        for i in range(dims[n]):
            under_gid[(n, i)] = pos
            pos += 1
    # left: r' . (r (x) c (x) s) = (r'r) (x) c (x) s; right symmetric; no signs
    left_tbl = {}
    right_tbl = {}
    for n, tri in bases.items():
        for pos_local, key3 in enumerate(tri):
            mg = under_gid[(n, pos_local)]
            rg, (cd, ci), sg = key3
            rd = R.degree_of(rg)
            sd = S.degree_of(sg)
            for rg2, (rd2, _) in enumerate(R.basis):
                tgt = index.get(rd2 + n)
                if tgt is None:
                    continue
                prod = R.mul_basis(rg2, rg)
                vec = {}
                for k, v in prod.items():
                    kk = (R.gid[(rd2 + rd, k)], (cd, ci), sg)
                    if kk in tgt:
                        vec[tgt[kk]] = v
                if vec:
                    left_tbl[(rg2, mg)] = vec
            for sg2, (sd2, _) in enumerate(S.basis):
                tgt = index.get(n + sd2)
                if tgt is None:
                    continue
                prod = S.mul_basis(sg, sg2)
                vec = {}
                for k, v in prod.items():
                    kk = (rg, (cd, ci), S.gid[(sd + sd2, k)])
                    if kk in tgt:
                        vec[tgt[kk]] = v
                if vec:
                    right_tbl[(mg, sg2)] = vec
    return DGBimodule(R, S, under, left_tbl, right_tbl, name=name or "free")
