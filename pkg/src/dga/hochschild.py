"""Bar resolutions and Hochschild / Ext / derivation cohomology.

The cochain side is the normalized reduced complex: a column-s cochain is
a linear map (S Rbar)^{(x)s} -> M (tensored with the module argument for
Ext), graded so that a length-s cochain of internal degree t sits in total
degree s + t.  All differentials come from one suspension-bookkeeping sign
convention, pinned mechanically by the d*d = 0 assertion run on every
assembled instance:

* interior letters carry their degree minus one; prefix signs sum the
  shifted degrees of everything strictly to the left;
* the slotwise differential on a letter is minus the reduced differential;
* merging interior letters i, i+1 multiplies by -(-1)^{|a_i|};
* absorbing a letter into the left outer slot x multiplies by (-1)^{|x|},
  into the right outer slot by -1;
* on cochains of total degree n every face term carries -(-1)^n and the
  left twist an extra (-1)^{n |a_1|}.

Column ranges per total degree are certified from support bounds when the
shifted degrees of Rbar are sign-definite; weight-graded algebras split
into offset blocks that are each computed exactly and capped at a block
horizon; anything else is truncated at a column cutoff.  Truncated results
are certified only by agreement between consecutive cutoffs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import DGAlgebra, DGBimodule
from .complex import ChainComplex, GradedMap, homology
from .linalg import SparseMatrix, Vec, nullspace, row_basis, solve, vec_axpy
from .reports import LESArrow, LESNode, LESReport, resolve_ranks
from .status import (
    CERT_EXACT,
    Certificate,
    EXACT,
    STABILIZED,
    UNSTABLE,
    NODE_UNDETERMINED,
    ScopeError,
    ValidationError,
    Window,
    WindowError,
)


def _sign(field, k: int):
    return field.one() if k % 2 == 0 else field.neg(field.one())


class BarData:
    """Unit complement of an algebra plus cached word enumeration."""

    def __init__(self, R: DGAlgebra):
        self.R = R
        self.elems = [g for g in range(len(R.basis)) if g != R.unit_gid]
        self.loc_of_gid = {g: i for i, g in enumerate(self.elems)}
        self.local_by_degree: dict[int, dict[int, int]] = {}
        for loc, g in enumerate(self.elems):
            deg, i = R.basis[g]
            self.local_by_degree.setdefault(deg, {})[i] = loc
        self._dbar: dict[int, Vec] = {}
        self._merge: dict[tuple[int, int], Vec] = {}
        self._words: dict[tuple, tuple] = {}
        self.sdegs = sorted({R.degree_of(g) - 1 for g in self.elems})
        self.weights = None
        if R.weights is not None:
            wts = [R.weights[g] for g in self.elems]
            if all(w >= 1 for w in wts):
                self.weights = wts

    def letter_degree(self, loc: int) -> int:
        return self.R.degree_of(self.elems[loc])

    def letter_sdeg(self, loc: int) -> int:
        return self.letter_degree(loc) - 1

    def letter_gid(self, loc: int) -> int:
        return self.elems[loc]

    def _project(self, vec: Vec, degree: int) -> Vec:
        table = self.local_by_degree.get(degree, {})
        out = {}
        for i, v in vec.items():
            loc = table.get(i)
            if loc is not None:
                out[loc] = v
        return out

    def dbar(self, loc: int) -> Vec:
        try:
            return self._dbar[loc]
        except KeyError:
            g = self.elems[loc]
            deg = self.R.degree_of(g)
            vec = self._project(self.R.d_basis(g), deg + 1)
            self._dbar[loc] = vec
            return vec

    def merge(self, la: int, lb: int) -> Vec:
        """Projected product of two letters; raises WindowError off-window."""
        key = (la, lb)
        try:
            return self._merge[key]
        except KeyError:
            prod = self.R.mul_basis(self.elems[la], self.elems[lb])
            deg = self.letter_degree(la) + self.letter_degree(lb)
            vec = self._project(prod, deg)
            self._merge[key] = vec
            return vec

    def word_sdeg(self, word: tuple) -> int:
        return sum(self.letter_sdeg(l) for l in word)

    def word_weight(self, word: tuple) -> int:
        return sum(self.weights[l] for l in word)

    def words(self, s: int, sdeg: int, weight: int | None = None) -> tuple:
        """All length-s words of the given shifted degree (and weight)."""
        key = (s, sdeg, weight)
        try:
            return self._words[key]
        except KeyError:
            pass
        if s == 0:
            ok = sdeg == 0 and (weight is None or weight == 0)
            out = ((),) if ok else ()
            self._words[key] = out
            return out
        if not self.elems or (weight is not None and self.weights is None):
            self._words[key] = ()
            return ()
        lo, hi = self.sdegs[0], self.sdegs[-1]
        wlo = whi = 0
        if weight is not None:
            wlo, whi = min(self.weights), max(self.weights)
        acc: list[tuple] = []
        word: list[int] = []

        def rec(remaining, need_sdeg, need_weight):
            if remaining == 0:
                if need_sdeg == 0 and (need_weight is None or need_weight == 0):
                    acc.append(tuple(word))
                return
            if not (lo * remaining <= need_sdeg <= hi * remaining):
                return
            if need_weight is not None and not (
                wlo * remaining <= need_weight <= whi * remaining
            ):
                return
            for loc in range(len(self.elems)):
                nw = None if need_weight is None else need_weight - self.weights[loc]
                word.append(loc)
                rec(remaining - 1, need_sdeg - self.letter_sdeg(loc), nw)
                word.pop()

        rec(s, sdeg, weight)
        out = tuple(acc)
        self._words[key] = out
        return out

    def word_diff(self, word: tuple):
        """Slotwise differential: list of (word', parity, coefficient)."""
        out = []
        pre = 0
        for i, loc in enumerate(word):
            for tgt, v in self.dbar(loc).items():
                w2 = word[:i] + (tgt,) + word[i + 1 :]
                out.append((w2, pre + 1, v))  # +1: suspension flips the sign
            pre += self.letter_sdeg(loc)
        return out


# ---------------------------------------------------------------------------
# cochain towers


@dataclass
class SubTower:
    """One self-contained block of the cochain complex on a degree range."""

    key: tuple
    basis: dict[int, list]
    index: dict[int, dict]
    mats: dict[int, SparseMatrix]

    def dim(self, n: int) -> int:
        return len(self.basis.get(n, []))


class Tower:
    """Assembled cochain complex on a window of total degrees.

    kind 'hh': cochains (S Rbar)^{(x)s} -> M, M an (R, R)-bimodule.
    kind 'ext': cochains (S Rbar)^{(x)s} (x) N -> M for left R-modules
    N, M; this is Hom over R out of the one-sided bar resolution of N.
    """

    def __init__(
        self,
        R,
        M,
        window,
        kind="hh",
        N=None,
        min_s=0,
        cutoff=8,
        weight_cap=None,
        check=True,
    ):
        self.R = R
        self.M = M
        self.N = N
        self.kind = kind
        self.window = window
        self.min_s = min_s
        self.cutoff = cutoff
        self.bar = BarData(R)
        self.field = R.field
        if kind == "hh" and (M.R is not R or M.S is not R):
            raise ValidationError("Hochschild cochains need an (R, R)-bimodule")
        if kind == "ext" and (N is None or N.R is not R or M.R is not R):
            raise ValidationError("Ext cochains need left R-modules N and M")
        self.strategy = self._choose_strategy()
        # word-weight cap: on a windowed slice of a weight-graded algebra,
        # only words of weight <= cap have all letters and merges spellable;
        # the capped basis is a quotient complex whose weight-graded pieces
        # are complete, certified by comparing cap against cap - 1
        self.weight_cap = None
        if self.strategy == "weighted" and R.window is not None:
            auto = max(R.weights) if R.weights else 0
            self.weight_cap = auto if weight_cap is None else min(weight_cap, auto)
        lo, hi = window
        self.range = (lo - 1, hi + 1)
        self.subtowers = self._build()
        if check:
            self._assert_dd_zero()

    # -- strategy --------------------------------------------------------

    def _choose_strategy(self) -> str:
        sdegs = self.bar.sdegs
        sign_definite = not sdegs or sdegs[0] >= 1 or sdegs[-1] <= -1
        if self.R.window is None and sign_definite:
            return "certified"
        n_ok = self.kind != "ext" or self.N.weights is not None
        if self.bar.weights is not None and self.M.weights is not None and n_ok:
            return "weighted"
        if self.R.window is not None:
            # products of a window slice can leave the representation; only
            # the weight-capped quotient is honest, and it needs weights
            raise WindowError(
                "windowed algebra needs weights on itself and its coefficients"
            )
        return "cutoff"

    @property
    def certified(self) -> bool:
        return self.strategy == "certified"

    # -- basis enumeration -------------------------------------------------

    def _column_keys(self, s: int, n: int, weight_offset=None) -> list:
        out = []
        M = self.M
        bar = self.bar
        cap = self.weight_cap
        if self.kind == "hh":
            for mdeg in sorted(M.underlying.dims):
                j = mdeg - n
                for mi in range(M.underlying.dim(mdeg)):
                    mg = M.gid[(mdeg, mi)]
                    if weight_offset is not None:
                        want = M.weights[mg] - weight_offset
                        if want < 0 or (cap is not None and want > cap):
                            continue
                        words = bar.words(s, j, want)
                    else:
                        words = bar.words(s, j)
                    for w in words:
                        out.append((s, w, mg))
            out.sort(key=lambda k: (k[1], k[2]))
            return out
        N = self.N
        for ndeg in sorted(N.underlying.dims):
            for mdeg in sorted(M.underlying.dims):
                j = mdeg - ndeg - n
                for ni in range(N.underlying.dim(ndeg)):
                    ng = N.gid[(ndeg, ni)]
                    for mi in range(M.underlying.dim(mdeg)):
                        mg = M.gid[(mdeg, mi)]
                        if weight_offset is not None:
                            want = M.weights[mg] - N.weights[ng] - weight_offset
                            if want < 0 or (cap is not None and want > cap):
                                continue
                            words = bar.words(s, j, want)
                        else:
                            words = bar.words(s, j)
                        for w in words:
                            out.append((s, w, ng, mg))
        out.sort(key=lambda k: (k[1], k[2], k[3]))
        return out

    def _column_bound(self, degrees) -> int:
        bar = self.bar
        if not bar.elems:
            return self.min_s
        msup = self.M.underlying.support()
        if not msup:
            return self.min_s
        lo, hi = min(degrees), max(degrees)
        if self.kind == "ext":
            nsup = self.N.underlying.support()
            if not nsup:
                return self.min_s
            jlo, jhi = msup[0] - nsup[-1] - hi, msup[-1] - nsup[0] - lo
        else:
            jlo, jhi = msup[0] - hi, msup[-1] - lo
        if bar.sdegs[0] >= 1:
            smax = jhi // bar.sdegs[0] if jhi >= 0 else 0
        else:
            smax = (-jlo) // (-bar.sdegs[-1]) if jlo <= 0 else 0
        return max(self.min_s, smax)

    def _offset_of(self, key) -> int:
        bar, M = self.bar, self.M
        if self.kind == "hh":
            s, w, mg = key
            return M.weights[mg] - bar.word_weight(w)
        s, w, ng, mg = key
        return M.weights[mg] - self.N.weights[ng] - bar.word_weight(w)

    def _build(self):
        lo, hi = self.range
        degrees = range(lo, hi + 1)
        if self.strategy == "certified":
            smax = self._column_bound(degrees)
            basis = {n: [] for n in degrees}
            for n in degrees:
                for s in range(self.min_s, smax + 1):
                    basis[n].extend(self._column_keys(s, n))
            return [self._subtower(("full",), basis)]
        if self.strategy == "cutoff":
            basis = {n: [] for n in degrees}
            for n in degrees:
                for s in range(self.min_s, self.cutoff + 1):
                    basis[n].extend(self._column_keys(s, n))
            return [self._subtower(("columns<=", self.cutoff), basis)]
        # weighted: one exact block per offset discovered within the horizon
        offsets = set()
        for n in degrees:
            for s in range(self.min_s, self.cutoff + 1):
                for key in self._column_keys(s, n):
                    offsets.add(self._offset_of(key))
        max_mw = max(self.M.weights, default=0)
        min_nw = min(self.N.weights, default=0) if self.kind == "ext" else 0
        subs = []
        for c in sorted(offsets):
            s_hi = max_mw - min_nw - c
            if self.weight_cap is not None:
                s_hi = min(s_hi, self.weight_cap)  # word weight >= s
            s_hi = max(self.min_s, s_hi)
            basis = {n: [] for n in degrees}
            for n in degrees:
                for s in range(self.min_s, s_hi + 1):
                    basis[n].extend(self._column_keys(s, n, weight_offset=c))
            subs.append(self._subtower(("offset", c), basis))
        return subs

    def _subtower(self, key, basis) -> SubTower:
        index = {n: {k: p for p, k in enumerate(b)} for n, b in basis.items()}
        mats = {}
        for n in sorted(basis):
            if n + 1 in basis:
                mats[n] = self._matrix(basis, index, n)
        return SubTower(key, basis, index, mats)

    # -- the differential ----------------------------------------------------

    def _matrix(self, basis, index, n: int) -> SparseMatrix:
        field = self.field
        bar = self.bar
        M = self.M
        src = basis[n]
        tgt = basis.get(n + 1, [])
        src_index = index[n]
        tgt_index = index[n + 1]
        entries = []
        neg_sign_n = field.neg(_sign(field, n))  # the -(-1)^n face prefactor

        # postcompose with d_M
        for col, key in enumerate(src):
            mg = key[-1]
            mdeg = M.degree_of(mg)
            for k, v in M.d_basis(mg).items():
                key2 = key[:-1] + (M.gid[(mdeg + 1, k)],)
                row = tgt_index.get(key2)
                if row is not None:
                    entries.append((row, col, v))

        # precompose with the source differential: -(-1)^n f(d(source))
        for row, key in enumerate(tgt):
            s = key[0]
            for w, parity, v in bar.word_diff(key[1]):
                src_key = (s, w) + key[2:]
                col = src_index.get(src_key)
                if col is not None:
                    coeff = field.mul(neg_sign_n, field.mul(_sign(field, parity), v))
                    entries.append((row, col, coeff))
        if self.kind == "ext":
            N = self.N
            for col, key in enumerate(src):
                s, w, ng, mg = key
                ndeg = N.degree_of(ng)
                pre = field.mul(neg_sign_n, _sign(field, bar.word_sdeg(w)))
                for k, v in N.d_basis(ng).items():
                    row = tgt_index.get((s, w, N.gid[(ndeg + 1, k)], mg))
                    if row is not None:
                        entries.append((row, col, field.mul(pre, v)))

        # face terms, iterated over target keys of column length >= 1
        for row, key in enumerate(tgt):
            wprime = key[1]
            if len(wprime) < self.min_s + 1:
                continue
            if self.kind == "hh":
                self._faces_hh(entries, row, key, src_index, n, neg_sign_n)
            else:
                self._faces_ext(entries, row, key, src_index, n, neg_sign_n)
        return SparseMatrix.from_entries(field, len(tgt), len(src), entries)

    def _faces_hh(self, entries, row, key, src_index, n, neg_sign_n):
        field, bar, M = self.field, self.bar, self.M
        _, wprime, mg2 = key
        s = len(wprime) - 1
        mdeg2 = M.degree_of(mg2)
        mi2 = M.basis[mg2][1]
        # left twist: -(-1)^n (-1)^{n|a1|} < a1 . e_mu , e_mg2 >
        a1 = wprime[0]
        rest = wprime[1:]
        a1_deg = bar.letter_degree(a1)
        a1_gid = bar.letter_gid(a1)
        mu_deg = mdeg2 - a1_deg
        base = neg_sign_n if (n * a1_deg) % 2 == 0 else field.neg(neg_sign_n)
        for mi in range(M.underlying.dim(mu_deg)):
            mu = M.gid[(mu_deg, mi)]
            col = src_index.get((s, rest, mu))
            if col is None:
                continue
            v = M.act_left_basis(a1_gid, mu).get(mi2)
            if v is not None:
                entries.append((row, col, field.mul(base, v)))
        # interior merges: prefix * -(-1)^{|a_i|}
        pre = 0
        for i in range(s):
            ai, anext = wprime[i], wprime[i + 1]
            merged = bar.merge(ai, anext)
            if merged:
                coeff = field.mul(
                    neg_sign_n, _sign(field, pre + bar.letter_degree(ai) + 1)
                )
                for b, v in merged.items():
                    col = src_index.get((s, wprime[:i] + (b,) + wprime[i + 2 :], mg2))
                    if col is not None:
                        entries.append((row, col, field.mul(coeff, v)))
            pre += bar.letter_sdeg(ai)
        # right twist: prefix * (-1)
        alast = wprime[-1]
        head = wprime[:-1]
        base = field.mul(neg_sign_n, field.neg(_sign(field, bar.word_sdeg(head))))
        alast_gid = bar.letter_gid(alast)
        mu_deg = mdeg2 - bar.letter_degree(alast)
        for mi in range(M.underlying.dim(mu_deg)):
            mu = M.gid[(mu_deg, mi)]
            col = src_index.get((s, head, mu))
            if col is None:
                continue
            v = M.act_right_basis(mu, alast_gid).get(mi2)
            if v is not None:
                entries.append((row, col, field.mul(base, v)))

    def _faces_ext(self, entries, row, key, src_index, n, neg_sign_n):
        field, bar, M, N = self.field, self.bar, self.M, self.N
        _, wprime, ng2, mg2 = key
        s = len(wprime) - 1
        mdeg2 = M.degree_of(mg2)
        mi2 = M.basis[mg2][1]
        # left twist on the target module
        a1 = wprime[0]
        rest = wprime[1:]
        a1_deg = bar.letter_degree(a1)
        a1_gid = bar.letter_gid(a1)
        mu_deg = mdeg2 - a1_deg
        base = neg_sign_n if (n * a1_deg) % 2 == 0 else field.neg(neg_sign_n)
        for mi in range(M.underlying.dim(mu_deg)):
            mu = M.gid[(mu_deg, mi)]
            col = src_index.get((s, rest, ng2, mu))
            if col is None:
                continue
            v = M.act_left_basis(a1_gid, mu).get(mi2)
            if v is not None:
                entries.append((row, col, field.mul(base, v)))
        # interior merges
        pre = 0
        for i in range(s):
            ai, anext = wprime[i], wprime[i + 1]
            merged = bar.merge(ai, anext)
            if merged:
                coeff = field.mul(
                    neg_sign_n, _sign(field, pre + bar.letter_degree(ai) + 1)
                )
                for b, v in merged.items():
                    col = src_index.get(
                        (s, wprime[:i] + (b,) + wprime[i + 2 :], ng2, mg2)
                    )
                    if col is not None:
                        entries.append((row, col, field.mul(coeff, v)))
            pre += bar.letter_sdeg(ai)
        # absorb the last letter into the module argument
        alast = wprime[-1]
        head = wprime[:-1]
        alast_gid = bar.letter_gid(alast)
        base = field.mul(neg_sign_n, field.neg(_sign(field, bar.word_sdeg(head))))
        ni2 = N.basis[ng2][1]
        nu_deg = N.degree_of(ng2) - bar.letter_degree(alast)
        for ni in range(N.underlying.dim(nu_deg)):
            nu = N.gid[(nu_deg, ni)]
            col = src_index.get((s, head, nu, mg2))
            if col is None:
                continue
            v = N.act_left_basis(alast_gid, nu).get(ni2)
            if v is not None:
                entries.append((row, col, field.mul(base, v)))

    # -- checks and homology ---------------------------------------------------

    def _assert_dd_zero(self):
        for sub in self.subtowers:
            for n in sorted(sub.mats):
                if n + 1 in sub.mats:
                    if not sub.mats[n + 1].compose(sub.mats[n]).is_zero():
                        raise ValidationError(
                            f"assembled cochain differential fails d*d = 0 at degree {n}"
                            f" (block {sub.key})"
                        )

    def dim(self, n: int) -> int:
        return sum(sub.dim(n) for sub in self.subtowers)

    def homology(self, n: int):
        """(dimension, representatives as key -> coefficient dicts)."""
        lo, hi = self.window
        if not (lo <= n <= hi):
            raise WindowError(f"degree {n} outside tower window {list(self.window)}")
        total = 0
        reps = []
        for sub in self.subtowers:
            dn = sub.mats.get(n)
            if dn is None:
                dn = SparseMatrix.zero(self.field, sub.dim(n + 1), sub.dim(n))
            cycles = nullspace(dn)
            bound = row_basis(self.field, sub.dim(n))
            dprev = sub.mats.get(n - 1)
            if dprev is not None:
                for j in range(dprev.ncols):
                    col = dprev.column(j)
                    if col:
                        bound.add(col)
            for z in cycles:
                if bound.add(z):
                    total += 1
                    reps.append({sub.basis[n][i]: v for i, v in z.items()})
        return total, reps

    def homology_dims(self) -> dict[int, int]:
        lo, hi = self.window
        return {n: self.homology(n)[0] for n in range(lo, hi + 1)}


# ---------------------------------------------------------------------------
# cohomology groups with stabilization policy


@dataclass(frozen=True)
class CohomologyGroup:
    degree: int
    dim: int
    representatives: list
    certificate: Certificate
    strategy: str

    def certified(self) -> bool:
        return self.certificate.is_certified()


def _tower_group(make_tower, n: int, cutoff: int, stabilize: bool = True) -> tuple[CohomologyGroup, Tower]:
    """Certification policy: EXACT when the column range is certified and no
    weight cap is active; otherwise compare cutoff vs cutoff + 1 (block or
    column horizon) and, when a word-weight cap truncates a windowed slice,
    additionally compare cap vs cap - 1.  With ``stabilize=False`` truncated
    results are reported UNSTABLE rather than silently trusted."""
    tower = make_tower(cutoff, None)
    dim, reps = tower.homology(n)
    if tower.certified and tower.weight_cap is None:
        return CohomologyGroup(n, dim, reps, CERT_EXACT, tower.strategy), tower
    if not stabilize:
        cert = Certificate(UNSTABLE, cutoff, detail="stabilization disabled")
        return CohomologyGroup(n, dim, reps, cert, tower.strategy), tower
    comparisons = [(make_tower(cutoff + 1, None), f"cutoff {cutoff + 1}")]
    if tower.weight_cap is not None:
        comparisons.append(
            (make_tower(cutoff, tower.weight_cap - 1), f"weight cap {tower.weight_cap - 1}")
        )
    for probe, what in comparisons:
        dim2, _ = probe.homology(n)
        if dim2 != dim:
            cert = Certificate(UNSTABLE, cutoff, detail=f"{dim} here vs {dim2} at {what}")
            return CohomologyGroup(n, dim, reps, cert, tower.strategy), tower
    return CohomologyGroup(n, dim, reps, Certificate(STABILIZED, cutoff), tower.strategy), tower


def hochschild_complex(R: DGAlgebra, M: DGBimodule, window: Window, cutoff: int = 8) -> Tower:
    """Assembled Hochschild cochain tower on a window of total degrees."""
    return Tower(R, M, window, kind="hh", cutoff=cutoff)


def hh_group(
    R: DGAlgebra, M: DGBimodule, n: int, cutoff: int = 8, stabilize: bool = True
) -> CohomologyGroup:
    """HH^n(R, M) with certification status."""
    group, _ = _tower_group(
        lambda c, wc: Tower(R, M, (n, n), kind="hh", cutoff=c, weight_cap=wc),
        n,
        cutoff,
        stabilize,
    )
    return group


def ext_group(
    R: DGAlgebra, N: DGBimodule, M: DGBimodule, n: int, cutoff: int = 8, stabilize: bool = True
) -> CohomologyGroup:
    """Ext^n_R(N, M) over the one-sided bar resolution of N."""
    group, _ = _tower_group(
        lambda c, wc: Tower(R, M, (n, n), kind="ext", N=N, cutoff=c, weight_cap=wc),
        n,
        cutoff,
        stabilize,
    )
    return group


def der_group(
    R: DGAlgebra, M: DGBimodule, n: int, cutoff: int = 8, stabilize: bool = True
) -> CohomologyGroup:
    """Derivation cohomology Der^n = H^{n+1} of the positive-length subcomplex."""
    group, _ = _tower_group(
        lambda c, wc: Tower(R, M, (n + 1, n + 1), kind="hh", min_s=1, cutoff=c, weight_cap=wc),
        n + 1,
        cutoff,
        stabilize,
    )
    return CohomologyGroup(n, group.dim, group.representatives, group.certificate, group.strategy)


# ---------------------------------------------------------------------------
# the derivation long exact sequence


def der_hh_les(R: DGAlgebra, M: DGBimodule, window: Window, cutoff: int = 8) -> LESReport:
    """LES of the positive-length subcomplex: Der^{n-1} -> HH^n -> H^n(M) -> Der^n.

    All three maps are computed outright per block (inclusion, length-zero
    projection, connecting homomorphism), so every interior verdict is a
    genuine check.  Certified and weighted strategies are supported; the
    weighted case sums block ranks, with the coefficient side split by
    weight to match.
    """
    lo, hi = window
    full = Tower(R, M, (lo - 1, hi + 1), kind="hh", cutoff=cutoff)
    sub = Tower(R, M, (lo - 1, hi + 1), kind="hh", min_s=1, cutoff=cutoff)
    field = R.field
    if full.strategy == "cutoff":
        raise ScopeError("der_hh_les needs a certified or weighted instance")

    cert = CERT_EXACT if full.certified and full.weight_cap is None else Certificate(
        STABILIZED, cutoff
    )

    sub_by_key = {s.key: s for s in sub.subtowers}

    def m_weight_part(c):
        """Basis positions of M per degree restricted to weight c (or all)."""
        out = {}
        for n in M.underlying.dims:
            if c is None:
                out[n] = list(range(M.underlying.dim(n)))
            else:
                out[n] = [
                    i
                    for i in range(M.underlying.dim(n))
                    if M.weights[M.gid[(n, i)]] == c
                ]
        return out

    def m_homology_data(part, n):
        """(cycle reps, boundary RowBasis) of the weight part of M at degree n."""
        cols = part.get(n, [])
        col_index = {i: p for p, i in enumerate(cols)}
        mat = M.underlying.diff(n)
        entries = []
        tgt_cols = part.get(n + 1, [])
        tgt_index = {i: p for p, i in enumerate(tgt_cols)}
        for p, i in enumerate(cols):
            for r, v in mat.column(i).items():
                if r in tgt_index:
                    entries.append((tgt_index[r], p, v))
        dmat = SparseMatrix.from_entries(field, len(tgt_cols), len(cols), entries)
        cycles = nullspace(dmat)
        bnd = row_basis(field, len(cols))
        prev = M.underlying.diff(n - 1)
        prev_cols = part.get(n - 1, [])
        for i in prev_cols:
            col = prev.column(i)
            vec = {col_index[r]: v for r, v in col.items() if r in col_index}
            if vec:
                bnd.add(vec)
        reps = []
        probe = row_basis(field, len(cols))
        for rrow in bnd.basis_rows():
            probe.add(rrow)
        for z in cycles:
            if probe.add(z):
                reps.append(z)
        return cols, col_index, reps, bnd

    rank_incl = {n: 0 for n in range(lo, hi + 1)}
    rank_proj = {n: 0 for n in range(lo, hi + 1)}
    rank_conn = {n: 0 for n in range(lo, hi + 1)}
    der_dims = {n: 0 for n in range(lo, hi + 2)}
    hh_dims = {n: 0 for n in range(lo, hi + 1)}
    hm_dims = {n: 0 for n in range(lo, hi + 1)}

    def block_data(sub_t, n):
        dn = sub_t.mats.get(n)
        if dn is None:
            dn = SparseMatrix.zero(field, sub_t.dim(n + 1), sub_t.dim(n))
        cycles = nullspace(dn)
        bnd = row_basis(field, sub_t.dim(n))
        dprev = sub_t.mats.get(n - 1)
        if dprev is not None:
            for j in range(dprev.ncols):
                col = dprev.column(j)
                if col:
                    bnd.add(col)
        reps = []
        probe = row_basis(field, sub_t.dim(n))
        for rrow in bnd.basis_rows():
            probe.add(rrow)
        for z in cycles:
            if probe.add(z):
                reps.append(z)
        return reps, bnd

    empty = SubTower(("empty",), {}, {}, {})
    for fblock in full.subtowers:
        if fblock.key[0] == "offset":
            c = fblock.key[1]
            sblock = sub_by_key.get(("offset", c), empty)
            part = m_weight_part(c)
        else:
            sblock = sub.subtowers[0]
            part = m_weight_part(None)
        for n in range(lo, hi + 2):
            reps, _ = block_data(sblock, n)
            der_dims[n] += len(reps)
        for n in range(lo, hi + 1):
            f_reps, f_bnd = block_data(fblock, n)
            hh_dims[n] += len(f_reps)
            cols, col_index, m_reps, m_bnd = m_homology_data(part, n)
            hm_dims[n] += len(m_reps)
            # inclusion Der^{n-1} = H^n(sub) -> H^n(full)
            s_reps, _ = block_data(sblock, n)
            probe = row_basis(field, fblock.dim(n))
            for rrow in f_bnd.basis_rows():
                probe.add(rrow)
            base = probe.dim()
            for rep in s_reps:
                vec = {}
                for pos, v in rep.items():
                    key = sblock.basis[n][pos]
                    fpos = fblock.index[n].get(key)
                    if fpos is None:
                        raise ValidationError("subcomplex key missing from the full block")
                    vec[fpos] = v
                probe.add(vec)
            rank_incl[n] += probe.dim() - base
            # projection H^n(full) -> H^n(M): the length-zero component
            probe = row_basis(field, len(cols))
            for rrow in m_bnd.basis_rows():
                probe.add(rrow)
            base = probe.dim()
            for rep in f_reps:
                vec = {}
                for pos, v in rep.items():
                    key = fblock.basis[n][pos]
                    if key[0] == 0:
                        i = M.basis[key[-1]][1]
                        vec[col_index[i]] = v
                probe.add(vec)
            rank_proj[n] += probe.dim() - base
            # connecting H^n(M) -> H^{n+1}(sub): lift to length zero, apply D
            s_reps1, s_bnd1 = block_data(sblock, n + 1)
            probe = row_basis(field, sblock.dim(n + 1))
            for rrow in s_bnd1.basis_rows():
                probe.add(rrow)
            base = probe.dim()
            dmat = fblock.mats.get(n)
            for m_rep in m_reps:
                lift = {}
                for p, v in m_rep.items():
                    i = cols[p]
                    key = (0, (), M.gid[(n, i)])
                    fpos = fblock.index[n].get(key)
                    if fpos is not None:
                        lift[fpos] = v
                image = dmat.mul_vec(lift) if dmat is not None else {}
                vec = {}
                for fpos, v in image.items():
                    key = fblock.basis[n + 1][fpos]
                    spos = sblock.index.get(n + 1, {}).get(key)
                    if spos is None:
                        raise ValidationError("connecting image has a length-zero component")
                    vec[spos] = v
                probe.add(vec)
            rank_conn[n] += probe.dim() - base

    # assemble the chain; arrows[i] points nodes[i+1] -> nodes[i]:
    #   Der^hi <- H^hi(M) <- HH^hi <- Der^{hi-1} <- ... <- HH^lo <- Der^{lo-1}
    report = LESReport(title=f"derivation LES for {R.name} with coefficients {M.name}")
    for n in range(hi, lo - 1, -1):
        report.nodes.append(LESNode(f"Der^{n}", der_dims[n + 1], cert))
        report.nodes.append(LESNode(f"H^{n}(M)", hm_dims[n], cert))
        report.nodes.append(LESNode(f"HH^{n}", hh_dims[n], cert))
        report.arrows.append(LESArrow(rank_conn[n], "computed", "connecting"))
        report.arrows.append(LESArrow(rank_proj[n], "computed", "length-zero projection"))
        report.arrows.append(LESArrow(rank_incl[n], "computed", "inclusion"))
    report.nodes.append(LESNode(f"Der^{lo - 1}", der_dims[lo], cert))
    resolve_ranks(report)
    return report


# ---------------------------------------------------------------------------
# bar resolution side


@dataclass
class BarComplex:
    complex: ChainComplex
    augmentation: GradedMap
    columns: int
    certificate: Certificate


def _bar_basis(bar: BarData, R: DGAlgebra, S: DGAlgebra, s: int, n: int):
    """Column-s basis of B(R, R, S) at total degree n: (rg, word, sg)."""
    out = []
    for rg, (rdeg, _) in enumerate(R.basis):
        for sg, (sdeg_m, _) in enumerate(S.basis):
            j = n - rdeg - sdeg_m
            for w in bar.words(s, j):
                out.append((rg, w, sg))
    out.sort(key=lambda k: (k[0], k[1], k[2]))
    return out


def bar_complex(phi, coeff_S: DGAlgebra | None = None, cutoff: int = 8, window: Window = (-6, 2)) -> BarComplex:
    """Two-sided bar complex B(R, R, S) with its augmentation to S.

    ``phi`` is an AlgebraMap R -> S giving the left R-action on S; pass
    ``coeff_S`` to override the coefficient algebra (defaults to phi.target).
    The assembled object is windowed; the augmentation chain-map property
    is validated exactly, which pins the face signs.
    """
    R = phi.source
    S = coeff_S if coeff_S is not None else phi.target
    field = R.field
    bar = BarData(R)
    lo, hi = window
    wlo, whi = lo - 2, hi + 2
    degrees = range(wlo, whi + 1)
    # column range: certified when shifted degrees are sign-definite
    if not bar.sdegs or bar.sdegs[0] >= 1 or bar.sdegs[-1] <= -1:
        certified = True
        rsup = R.underlying.support()
        ssup = S.underlying.support()
        if bar.sdegs:
            if bar.sdegs[0] >= 1:
                smax = max(0, whi - rsup[0] - ssup[0])
            else:
                smax = max(0, rsup[-1] + ssup[-1] - wlo)
        else:
            smax = 0
    else:
        certified = False
        smax = cutoff
    bases = {}
    index = {}
    for n in degrees:
        b = []
        for s in range(smax + 1):
            b.extend(_bar_basis(bar, R, S, s, n))
        bases[n] = b
        index[n] = {key: pos for pos, key in enumerate(b)}
    dims = {n: len(b) for n, b in bases.items() if b}
    mats = {}
    for n in degrees:
        if n + 1 not in index:
            continue
        src = bases[n]
        tgt_index = index[n + 1]
        entries = []
        for col, (rg, w, sg) in enumerate(src):
            rdeg = R.degree_of(rg)
            # d_R on the left slot
            for k, v in R.d_basis(rg).items():
                key = (R.gid[(rdeg + 1, k)], w, sg)
                row = tgt_index.get(key)
                if row is not None:
                    entries.append((row, col, v))
            # slotwise word differential with prefix (-1)^{|r|}
            for w2, parity, v in bar.word_diff(w):
                key = (rg, w2, sg)
                row = tgt_index.get(key)
                if row is not None:
                    coeff = field.mul(_sign(field, rdeg + parity), v)
                    entries.append((row, col, coeff))
            # d_S on the right slot
            sdeg_m = S.degree_of(sg)
            pre = _sign(field, rdeg + bar.word_sdeg(w))
            for k, v in S.d_basis(sg).items():
                key = (rg, w, S.gid[(sdeg_m + 1, k)])
                row = tgt_index.get(key)
                if row is not None:
                    entries.append((row, col, field.mul(pre, v)))
            # faces
            s_len = len(w)
            if s_len >= 1:
                # junction 0: r . a1, full product, sign (-1)^{|r|}
                a1 = w[0]
                prod = R.mul_basis(rg, bar.letter_gid(a1))
                base = _sign(field, rdeg)
                pdeg = rdeg + bar.letter_degree(a1)
                for k, v in prod.items():
                    key = (R.gid[(pdeg, k)], w[1:], sg)
                    row = tgt_index.get(key)
                    if row is not None:
                        entries.append((row, col, field.mul(base, v)))
                # interior junctions
                pre_s = rdeg
                for i in range(s_len - 1):
                    ai, anext = w[i], w[i + 1]
                    merged = bar.merge(ai, anext)
                    if merged:
                        coeff = _sign(field, pre_s + bar.letter_degree(ai) + 1)
                        for b2, v in merged.items():
                            key = (rg, w[:i] + (b2,) + w[i + 2 :], sg)
                            row = tgt_index.get(key)
                            if row is not None:
                                entries.append((row, col, field.mul(coeff, v)))
                    pre_s += bar.letter_sdeg(ai)
                # junction s: a_last absorbed into S via phi
                alast = w[-1]
                head = w[:-1]
                base = field.neg(_sign(field, rdeg + bar.word_sdeg(head)))
                img = phi.apply_basis(bar.letter_gid(alast))
                acted = S.mul_vec(img, bar.letter_degree(alast), {S.basis[sg][1]: field.one()}, S.degree_of(sg))
                adeg = bar.letter_degree(alast) + S.degree_of(sg)
                for k, v in acted.items():
                    key = (rg, head, S.gid[(adeg, k)])
                    row = tgt_index.get(key)
                    if row is not None:
                        entries.append((row, col, field.mul(base, v)))
        mats[n] = SparseMatrix.from_entries(
            field, len(bases.get(n + 1, [])), len(src), entries
        )
    B = ChainComplex(field, dims, {n: m for n, m in mats.items() if not m.is_zero()}, window=(wlo, whi))
    # augmentation: r (x) 1 (x) m -> phi(r) m, zero on longer columns
    comps = {}
    for n in degrees:
        entries = []
        for col, (rg, w, sg) in enumerate(bases[n]):
            if w:
                continue
            img = phi.apply_basis(rg)
            acted = S.mul_vec(img, R.degree_of(rg), {S.basis[sg][1]: field.one()}, S.degree_of(sg))
            for k, v in acted.items():
                entries.append((k, col, v))
        comps[n] = SparseMatrix.from_entries(field, S.underlying.dim(n), len(bases[n]), entries)
    aug = GradedMap(B, S.underlying, comps)  # validates the chain-map law exactly
    cert = CERT_EXACT if certified else Certificate(STABILIZED, cutoff, "compare at cutoff+1")
    return BarComplex(B, aug, smax, cert)


def bar_augmentation_check(phi, cutoff: int = 8, window: Window = (-4, 2)):
    """Is B(R, R, S) -> S a quasi-isomorphism on the window?

    Certified instances give an exact verdict; otherwise the cone homology
    is compared between cutoff and cutoff + 1 and reported as stabilized
    or unstable, never silently passed.
    """
    from .complex import cone, homology_dims

    def cone_dims(c):
        barc = bar_complex(phi, cutoff=c, window=window)
        cn = cone(barc.augmentation)
        return homology_dims(cn, window), barc

    dims, barc = cone_dims(cutoff)
    ok = all(v == 0 for v in dims.values())
    if barc.certificate.status == EXACT:
        return ok, Certificate(EXACT), dims
    dims2, _ = cone_dims(cutoff + 1)
    if dims2 == dims:
        return ok, Certificate(STABILIZED, cutoff), dims
    return ok, Certificate(UNSTABLE, cutoff, f"{dims} vs {dims2}"), dims


# ---------------------------------------------------------------------------
# cup products in degree zero, unit groups, and the edge map


@dataclass
class RingTable:
    """Finite-dimensional ring presented on cohomology representatives."""

    dim: int
    table: dict[tuple[int, int], Vec]  # product of basis classes
    unit: Vec
    certificate: Certificate

    def multiply(self, field, a: Vec, b: Vec) -> Vec:
        out: Vec = {}
        for i, ca in a.items():
            for j, cb in b.items():
                prod = self.table.get((i, j))
                if prod:
                    vec_axpy(field, out, field.mul(ca, cb), prod)
        return out


def _reduce_to_classes(field, sub: SubTower, n: int, reps_full: list[Vec], vec: Vec) -> Vec:
    """Express a cocycle as coefficients over chosen reps modulo coboundaries."""
    dim_n = sub.dim(n)
    bound = []
    mat = sub.mats.get(n - 1)
    if mat is not None:
        for j in range(mat.ncols):
            col = mat.column(j)
            if col:
                bound.append(col)
    cols = []
    for b in bound:
        cols.append(b)
    for r in reps_full:
        cols.append(r)
    A = SparseMatrix.from_entries(
        field,
        dim_n,
        len(cols),
        [(i, j, v) for j, cvec in enumerate(cols) for i, v in cvec.items()],
    )
    sol = solve(A, vec)
    if sol is None:
        raise ValidationError("vector is not a cocycle modulo boundaries as expected")
    out = {}
    for j, v in sol.items():
        if j >= len(bound):
            out[j - len(bound)] = v
    return out


def hh0_ring(R: DGAlgebra, cutoff: int = 8):
    """The ring HH^0(R) via the cochain cup product, plus unit-group data.

    Returns (RingTable for HH^0, RingTable for H^0, edge ring map as a
    matrix over class bases).  Unit enumeration is the caller's job (finite
    fields only); see `unit_group`.
    """
    field = R.field
    tower = Tower(R, regular_bimodule_cached(R), (0, 0), kind="hh", cutoff=cutoff)
    if not tower.certified or len(tower.subtowers) != 1:
        raise ScopeError("hh0_ring needs a certified single-block instance")
    sub = tower.subtowers[0]
    dim0, reps = tower.homology(0)
    reps_pos = [{sub.index[0][k]: v for k, v in rep.items()} for rep in reps]

    M = tower.M

    def cup(f: Vec, g: Vec) -> Vec:
        """Concatenation cup product of two degree-0 cochains (key dicts)."""
        out: Vec = {}
        for kf, cf in f.items():
            sf, wf, mf = kf
            for kg, cg in g.items():
                sg_, wg, mg_ = kg
                w = wf + wg
                prod = R.mul_basis(mf, mg_)
                mdeg = R.degree_of(mf) + R.degree_of(mg_)
                for k, v in prod.items():
                    key = (sf + sg_, w, M.gid[(mdeg, k)])
                    pos = sub.index[0].get(key)
                    if pos is None:
                        if v != field.zero():
                            raise ScopeError("cup product leaves the assembled range")
                        continue
                    coeff = field.mul(field.mul(cf, cg), v)
                    cur = field.add(out.get(pos, field.zero()), coeff)
                    if cur == field.zero():
                        out.pop(pos, None)
                    else:
                        out[pos] = cur
        return out

    table = {}
    for i, f in enumerate(reps):
        for j, g in enumerate(reps):
            prod = cup(f, g)
            table[(i, j)] = _reduce_to_classes(field, sub, 0, reps_pos, prod)
    # the unit class: the length-0 cochain with value 1
    unit_key = (0, (), R.gid[(0, 0)])
    unit_vec = {sub.index[0][unit_key]: field.one()}
    unit = _reduce_to_classes(field, sub, 0, reps_pos, unit_vec)
    hh0 = RingTable(dim0, table, unit, CERT_EXACT)

    # H^0(R) ring on homology representatives
    h = homology(R.underlying, (0, 0))
    h_reps = h.representatives[0]
    hdim = h.dim(0)
    hb = []
    dmat = R.underlying.diff(-1)
    for j in range(dmat.ncols):
        col = dmat.column(j)
        if col:
            hb.append(col)

    def h_reduce(vec: Vec) -> Vec:
        cols = hb + h_reps
        A = SparseMatrix.from_entries(
            field,
            R.underlying.dim(0),
            len(cols),
            [(i, j, v) for j, cvec in enumerate(cols) for i, v in cvec.items()],
        )
        sol = solve(A, vec)
        if sol is None:
            raise ValidationError("not a cocycle modulo boundaries")
        return {j - len(hb): v for j, v in sol.items() if j >= len(hb)}

    h_table = {}
    for i, a in enumerate(h_reps):
        for j, b in enumerate(h_reps):
            h_table[(i, j)] = h_reduce(R.mul_vec(a, 0, b, 0))
    h_unit = h_reduce({0: field.one()})
    h0 = RingTable(hdim, h_table, h_unit, CERT_EXACT)

    # edge ring map: length-zero component, reduced to H^0 classes
    edge_cols = {}
    for i, rep in enumerate(reps):
        vec = {}
        for key, v in rep.items():
            if key[0] == 0:
                vec[R.basis[key[-1]][1]] = v
        edge_cols[i] = h_reduce(vec)
    return hh0, h0, edge_cols


_REGULAR_CACHE = {}


def regular_bimodule_cached(R: DGAlgebra) -> DGBimodule:
    key = id(R)
    if key not in _REGULAR_CACHE:
        from .algebra import regular_bimodule

        _REGULAR_CACHE[key] = regular_bimodule(R)
    return _REGULAR_CACHE[key]


def unit_group(field, ring: RingTable):
    """All invertible elements of a finite-dimensional ring over GF(p).

    Left multiplication being bijective already forces a two-sided inverse
    in a finite-dimensional unital associative algebra.
    Elements are returned as coordinate tuples over the class basis.
    """
    if field.kind != "prime-field":
        raise ScopeError("unit enumeration needs a finite field")
    from itertools import product as iproduct

    from .linalg import rank

    p = field.characteristic
    units = []
    coords = list(range(ring.dim))
    for tup in iproduct(range(p), repeat=ring.dim):
        vec = {i: field.from_int(tup[i]) for i in coords if tup[i]}
        mat = SparseMatrix.from_entries(
            field,
            ring.dim,
            ring.dim,
            [
                (k, j, field.mul(c, v))
                for i, c in vec.items()
                for j in coords
                for k, v in ring.table.get((i, j), {}).items()
            ],
        )
        if rank(mat) == ring.dim:
            units.append(tup)
    return units


def edge_map_rank(R: DGAlgebra, M: DGBimodule, n: int, cutoff: int = 8):
    """Rank of HH^n(R, M) -> H^n(M), the length-zero edge projection.

    Returns (rank, hh_dim, h_dim, certificate).
    """
    group, tower = _tower_group(
        lambda c, wc: Tower(R, M, (n, n), kind="hh", cutoff=c, weight_cap=wc), n, cutoff
    )
    field = R.field
    h = homology(M.underlying, (n, n))
    rb = row_basis(field, M.underlying.dim(n))
    dmat = M.underlying.diff(n - 1)
    for j in range(dmat.ncols):
        col = dmat.column(j)
        if col:
            rb.add(col)
    base = rb.dim()
    for rep in group.representatives:
        vec = {}
        for key, v in rep.items():
            if key[0] == 0:
                vec[M.basis[key[-1]][1]] = v
        rb.add(vec)
    return rb.dim() - base, group.dim, h.dim(n), group.certificate
