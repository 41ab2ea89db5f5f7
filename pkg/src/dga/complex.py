"""Finitely supported cochain complexes and their exact invariants.

Degree conventions: differentials raise degree by one, and ``d[n]`` is the
matrix of ``d: C^n -> C^{n+1}`` with rows indexed by the target basis.
Sign conventions (fixed once, guarded by the d*d = 0 checks everywhere):

* tensor:      d(a (x) b) = da (x) b + (-1)^|a| a (x) db
* hom:         (df)      = d_N f - (-1)^|f| f d_M
* suspension:  (S^m M)^n = M^{n+m} with differential scaled by (-1)^m
"""

from __future__ import annotations

from dataclasses import dataclass

from .field import Field
from .linalg import SparseMatrix, Vec, nullspace, row_basis
from .status import (
    CERT_EXACT,
    Certificate,
    ValidationError,
    Window,
    WindowError,
    require_window,
    shrink,
    window_contains,
)


@dataclass(frozen=True, eq=False)
class ChainComplex:
    """Graded vector space with a degree +1 differential, d*d = 0 exactly.

    ``window`` is None for complete complexes (zero outside the finite
    support) and a closed interval otherwise; outside a window nothing is
    known, and operations refuse rather than guess.
    """

    field: Field
    dims: dict[int, int]
    d: dict[int, SparseMatrix]
    labels: dict[int, list[str]] | None = None
    window: Window | None = None

    def __post_init__(self):
        dims = {n: k for n, k in self.dims.items() if k}
        object.__setattr__(self, "dims", dims)
        for n, k in dims.items():
            if k < 0:
                raise ValidationError(f"negative dimension {k} in degree {n}")
            if self.window is not None and not window_contains(self.window, n):
                raise ValidationError(f"support degree {n} outside window {list(self.window)}")
        d = {}
        for n, mat in self.d.items():
            if mat is None or mat.is_zero():
                continue
            if mat.nrows != dims.get(n + 1, 0) or mat.ncols != dims.get(n, 0):
                raise ValidationError(
                    f"differential at degree {n} has shape {mat.nrows}x{mat.ncols}, "
                    f"expected {dims.get(n + 1, 0)}x{dims.get(n, 0)}"
                )
            d[n] = mat
        object.__setattr__(self, "d", d)
        for n in list(d):
            if n + 1 in d:
                if not d[n + 1].compose(d[n]).is_zero():
                    raise ValidationError(f"d*d != 0 from degree {n}")

    # -- basic access ------------------------------------------------------

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def diff(self, n: int) -> SparseMatrix:
        mat = self.d.get(n)
        if mat is None:
            return SparseMatrix.zero(self.field, self.dim(n + 1), self.dim(n))
        return mat

    def support(self) -> list[int]:
        return sorted(self.dims)

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def label(self, n: int, i: int) -> str:
        if self.labels and n in self.labels:
            return self.labels[n][i]
        return f"e{n}_{i}"

    def is_zero_complex(self) -> bool:
        return not self.dims


def zero_complex(field: Field) -> ChainComplex:
    return ChainComplex(field, {}, {})


def line_complex(field: Field, degree: int = 0, label: str = "1") -> ChainComplex:
    """The ground field placed in a single degree."""
    return ChainComplex(field, {degree: 1}, {}, labels={degree: [label]})


def disk_complex(field: Field, degree: int) -> ChainComplex:
    """Contractible two-term complex k -> k in degrees (degree, degree+1)."""
    one = field.one()
    d = {degree: SparseMatrix.from_entries(field, 1, 1, [(0, 0, one)])}
    return ChainComplex(field, {degree: 1, degree + 1: 1}, d)


def direct_sum(M: ChainComplex, N: ChainComplex) -> ChainComplex:
    if M.field != N.field:
        raise ValidationError("direct sum over different fields")
    field = M.field
    dims = {}
    for n in set(M.dims) | set(N.dims):
        dims[n] = M.dim(n) + N.dim(n)
    d = {}
    for n in set(M.d) | set(N.d):
        entries = []
        for i, j, v in M.diff(n).iter_entries():
            entries.append((i, j, v))
        rm, cm = M.dim(n + 1), M.dim(n)
        for i, j, v in N.diff(n).iter_entries():
            entries.append((i + rm, j + cm, v))
        d[n] = SparseMatrix.from_entries(field, dims.get(n + 1, 0), dims.get(n, 0), entries)
    from .status import intersect

    return ChainComplex(field, dims, d, window=intersect(M.window, N.window))


# ---------------------------------------------------------------------------
# homology


@dataclass(frozen=True)
class HomologyResult:
    dims: dict[int, int]
    representatives: dict[int, list[Vec]]
    window: Window
    certificate: Certificate = CERT_EXACT

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)


def homology(C: ChainComplex, window: Window) -> HomologyResult:
    """Exact homology dims and cocycle representatives on the window.

    Representatives span a complement of the boundaries inside the cocycles;
    they are chosen deterministically by echelon order.
    """
    lo, hi = window
    if lo > hi:
        raise WindowError(f"empty homology window {list(window)}")
    require_window(shrink(C.window, 1) if C.window else None, window, "homology")
    dims: dict[int, int] = {}
    reps: dict[int, list[Vec]] = {}
    for n in range(lo, hi + 1):
        cycles = nullspace(C.diff(n))
        bound = row_basis(C.field, C.dim(n))
        for j in range(C.dim(n - 1)):
            col = C.diff(n - 1).column(j)
            if col:
                bound.add(col)
        chosen = []
        for z in cycles:
            if bound.add(z):
                chosen.append(z)
        dims[n] = len(chosen)
        reps[n] = chosen
    return HomologyResult(dims, reps, window)


def homology_dims(C: ChainComplex, window: Window) -> dict[int, int]:
    return homology(C, window).dims


def full_window(C: ChainComplex, margin: int = 1) -> Window:
    """A window covering the whole support, padded by margin."""
    sup = C.support()
    if not sup:
        return (0, 0)
    return (sup[0] - margin, sup[-1] + margin)


# ---------------------------------------------------------------------------
# graded maps


@dataclass(frozen=True, eq=False)
class GradedMap:
    """Degree-homogeneous linear map; chain maps have shift 0.

    ``components[n]`` is the matrix of f^n: source^n -> target^{n+shift}.
    The chain-map law d f = (-1)^shift f d is validated exactly on every
    degree where all four matrices are represented.
    """

    source: ChainComplex
    target: ChainComplex
    components: dict[int, SparseMatrix]
    shift: int = 0

    def __post_init__(self):
        comps = {}
        for n, mat in self.components.items():
            if mat is None:
                continue
            want = (self.target.dim(n + self.shift), self.source.dim(n))
            if (mat.nrows, mat.ncols) != want:
                raise ValidationError(
                    f"component at degree {n} has shape {mat.nrows}x{mat.ncols}, expected {want}"
                )
            if not mat.is_zero():
                comps[n] = mat
        object.__setattr__(self, "components", comps)
        sign = self.source.field.from_int((-1) ** self.shift)
        for n in self._check_degrees():
            left = self.target.diff(n + self.shift).compose(self.component(n))
            right = self.component(n + 1).compose(self.source.diff(n)).scale(sign)
            if not left.add(right.neg()).is_zero():
                raise ValidationError(f"chain-map law fails at degree {n}")

    def _check_degrees(self):
        degs = set(self.source.dims) | {n - 1 for n in self.source.dims}
        out = []
        for n in degs:
            if self.source.window is not None and not (
                window_contains(self.source.window, n)
                and window_contains(self.source.window, n + 1)
            ):
                continue
            if self.target.window is not None and not (
                window_contains(self.target.window, n + self.shift)
                and window_contains(self.target.window, n + 1 + self.shift)
            ):
                continue
            out.append(n)
        return sorted(out)

    def component(self, n: int) -> SparseMatrix:
        mat = self.components.get(n)
        if mat is None:
            return SparseMatrix.zero(
                self.source.field, self.target.dim(n + self.shift), self.source.dim(n)
            )
        return mat

    def apply(self, n: int, vec: Vec) -> Vec:
        return self.component(n).mul_vec(vec)


def identity_map(C: ChainComplex) -> GradedMap:
    comps = {n: SparseMatrix.identity(C.field, k) for n, k in C.dims.items()}
    return GradedMap(C, C, comps)


def zero_map(M: ChainComplex, N: ChainComplex, shift: int = 0) -> GradedMap:
    return GradedMap(M, N, {}, shift)


def compose_maps(g: GradedMap, f: GradedMap) -> GradedMap:
    """g after f."""
    comps = {}
    for n in set(f.components) | {n - g.shift for n in g.components}:
        mat = g.component(n + f.shift).compose(f.component(n))
        if not mat.is_zero():
            comps[n] = mat
    return GradedMap(f.source, g.target, comps, f.shift + g.shift)


# ---------------------------------------------------------------------------
# hom complexes, tensor products, suspension


def hom_basis(M: ChainComplex, N: ChainComplex, n: int) -> list[tuple[int, int, int]]:
    """Ordered basis (i, a, b) of Hom(M, N)^n: e_a in M^i maps to e_b in N^{i+n}."""
    out = []
    for i in sorted(M.dims):
        dn = N.dim(i + n)
        if not dn:
            continue
        for a in range(M.dim(i)):
            for b in range(dn):
                out.append((i, a, b))
    return out


def hom_complex(M: ChainComplex, N: ChainComplex) -> ChainComplex:
    """Total Hom complex; degree n part is the degree-n graded maps M -> N."""
    if M.field != N.field:
        raise ValidationError("hom complex over different fields")
    field = M.field
    bases: dict[int, list[tuple[int, int, int]]] = {}
    index: dict[int, dict[tuple[int, int, int], int]] = {}
    degrees = set()
    for i in M.dims:
        for j in N.dims:
            degrees.add(j - i)
    for n in degrees:
        basis = hom_basis(M, N, n)
        if basis:
            bases[n] = basis
            index[n] = {key: pos for pos, key in enumerate(basis)}
    dims = {n: len(b) for n, b in bases.items()}
    d: dict[int, SparseMatrix] = {}
    for n, basis in bases.items():
        tgt_index = index.get(n + 1)
        entries = []
        sgn = field.from_int((-1) ** n)
        for col, (i, a, b) in enumerate(basis):
            # d_N after f
            dN = N.diff(i + n)
            for r, v in dN.column(b).items():
                key = (i, a, r)
                if tgt_index and key in tgt_index:
                    entries.append((tgt_index[key], col, v))
            # (-1)^n f after d_M: contributes at source degree i-1
            dM = M.diff(i - 1)
            for c in range(M.dim(i - 1)):
                v = dM.entry(a, c)
                if v != field.zero():
                    key = (i - 1, c, b)
                    if tgt_index and key in tgt_index:
                        entries.append((tgt_index[key], col, field.neg(field.mul(sgn, v))))
        if dims.get(n + 1, 0) or entries:
            d[n] = SparseMatrix.from_entries(field, dims.get(n + 1, 0), dims.get(n, 0), entries)
    labels = {
        n: [f"[{M.label(i, a)}->{N.label(i + n, b)}]" for (i, a, b) in basis]
        for n, basis in bases.items()
    }
    return ChainComplex(field, dims, d, labels=labels, window=_hom_window(M, N))


def _hom_window(M: ChainComplex, N: ChainComplex) -> Window | None:
    """Hom(M, N)^n is exact when N is certified on supp(M) + n."""
    if M.window is not None:
        raise WindowError("hom_complex needs a complete source; restrict it first")
    if N.window is None:
        return None
    sup = M.support()
    if not sup:
        return None
    lo, hi = N.window
    return (None if lo is None else lo - sup[0], None if hi is None else hi - sup[-1])


def tensor_basis(M: ChainComplex, N: ChainComplex, n: int) -> list[tuple[int, int, int]]:
    """Ordered basis (i, a, b): e_a in M^i tensor e_b in N^{n-i}."""
    out = []
    for i in sorted(M.dims):
        dn = N.dim(n - i)
        if not dn:
            continue
        for a in range(M.dim(i)):
            for b in range(dn):
                out.append((i, a, b))
    return out


def tensor_product(M: ChainComplex, N: ChainComplex) -> ChainComplex:
    if M.field != N.field:
        raise ValidationError("tensor product over different fields")
    field = M.field
    degrees = {i + j for i in M.dims for j in N.dims}
    bases = {}
    index = {}
    for n in degrees:
        basis = tensor_basis(M, N, n)
        if basis:
            bases[n] = basis
            index[n] = {key: pos for pos, key in enumerate(basis)}
    dims = {n: len(b) for n, b in bases.items()}
    d = {}
    for n, basis in bases.items():
        tgt_index = index.get(n + 1, {})
        entries = []
        for col, (i, a, b) in enumerate(basis):
            for r, v in M.diff(i).column(a).items():
                key = (i + 1, r, b)
                if key in tgt_index:
                    entries.append((tgt_index[key], col, v))
            sgn = field.from_int((-1) ** i)
            for r, v in N.diff(n - i).column(b).items():
                key = (i, a, r)
                if key in tgt_index:
                    entries.append((tgt_index[key], col, field.mul(sgn, v)))
        if dims.get(n + 1, 0) or entries:
            d[n] = SparseMatrix.from_entries(field, dims.get(n + 1, 0), dims.get(n, 0), entries)
    labels = {
        n: [f"{M.label(i, a)}(x){N.label(n - i, b)}" for (i, a, b) in basis]
        for n, basis in bases.items()
    }
    window = None
    if M.window is not None or N.window is not None:
        raise WindowError("tensor_product needs complete inputs")
    return ChainComplex(field, dims, d, labels=labels, window=window)


def suspend(M: ChainComplex, m: int = 1) -> ChainComplex:
    """Shift: (S^m M)^n = M^{n+m}, differential scaled by (-1)^m."""
    field = M.field
    dims = {n - m: k for n, k in M.dims.items()}
    sgn = field.from_int((-1) ** m)
    d = {n - m: mat.scale(sgn) for n, mat in M.d.items()}
    labels = None
    if M.labels is not None:
        labels = {n - m: list(v) for n, v in M.labels.items()}
    from .status import shift_window

    window = shift_window(M.window, -m)
    return ChainComplex(field, dims, d, labels=labels, window=window)


def cone(f: GradedMap) -> ChainComplex:
    """Mapping cone of a degree-0 chain map: cone^n = M^{n+1} (+) N^n."""
    if f.shift != 0:
        raise ValidationError("cone needs a degree-0 chain map")
    M, N = f.source, f.target
    field = M.field
    dims = {}
    for n in set(d - 1 for d in M.dims) | set(N.dims):
        k = M.dim(n + 1) + N.dim(n)
        if k:
            dims[n] = k
    d = {}
    for n in dims:
        rows = dims.get(n + 1, 0)
        cols = dims[n]
        mtop = M.dim(n + 2)
        mcur = M.dim(n + 1)
        entries = []
        for i, j, v in M.diff(n + 1).iter_entries():
            entries.append((i, j, field.neg(v)))
        for i, j, v in f.component(n + 1).iter_entries():
            entries.append((i + mtop, j, v))
        for i, j, v in N.diff(n).iter_entries():
            entries.append((i + mtop, j + mcur, v))
        if entries or rows:
            d[n] = SparseMatrix.from_entries(field, rows, cols, entries)
    from .status import intersect

    from .status import shift_window

    win_m = shift_window(M.window, -1)
    return ChainComplex(field, dims, d, window=intersect(win_m, N.window))


def is_quasi_iso(f: GradedMap, window: Window) -> bool:
    """True iff the cone of f is acyclic on the window (exact check)."""
    cn = cone(f)
    h = homology(cn, window)
    return all(v == 0 for v in h.dims.values())


def pi_n_mod_map(M: ChainComplex, N: ChainComplex, n: int):
    """pi_n of the mapping space of module maps M -> N over the ground field.

    Computed as H^{-n} of the Hom complex, which is the derived mapping
    space because every complex over a field is both cofibrant and fibrant.
    Returns (dimension, representatives, basis keys).
    """
    if n < 0:
        raise ValidationError("pi_n is defined for n >= 0; use Ext for negative degrees")
    H = hom_complex(M, N)
    res = homology(H, (-n, -n))
    return res.dim(-n), res.representatives[-n], hom_basis(M, N, -n)
