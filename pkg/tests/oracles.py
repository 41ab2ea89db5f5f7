"""Independent oracles for the cohomology suite.

These never touch the bar/cochain machinery: the dual-numbers oracle is
the classical 2-periodic bimodule resolution, the free-algebra oracle is
the two-term resolution 0 -> R (x) kx (x) R -> R (x) R -> R -> 0, both
evaluated in closed form on the graded pieces.
"""

from fractions import Fraction


def dual_numbers_hh_dims(field, n_max):
    """HH^n(k[e]/(e^2), R) for n = 0..n_max via the periodic resolution.

    Maps alternate between m -> em - me (zero on R, commutative) and
    m -> em + me = 2em; computed on the basis (1, e).
    """
    two = field.from_int(2)
    zero = field.zero()
    # matrices on coordinates (a, b) for a + be
    ad = [[zero, zero], [zero, zero]]
    norm = [[zero, zero], [two, zero]]  # (a, b) -> (0, 2a)

    def rank2(mat):
        rows = [r for r in mat if any(v != zero for v in r)]
        if not rows:
            return 0
        if len(rows) == 1:
            return 1
        a, b = rows[0], rows[1]
        det = field.sub(field.mul(a[0], b[1]), field.mul(a[1], b[0]))
        return 2 if det != zero else 1

    dims = []
    for n in range(n_max + 1):
        f_in = ad if n % 2 == 1 else (norm if n > 0 else [[zero] * 2] * 2)
        f_out = ad if (n + 1) % 2 == 1 else norm
        dims.append(2 - rank2(f_out) - rank2(f_in))
    return dims


def free_algebra_hh_dims(field, gen_degree, n_lo, n_hi):
    """HH^n(k<x>, k<x>) for |x| = gen_degree via the short resolution.

    Spot 0 holds M^n, spot 1 holds M^{n + d - 1} (the cochain x -> m); the
    only map sends m in M^n to (-1)^{|m| d} x m - m x in M^{n + d}.
    """
    d = gen_degree

    def mdim(m):
        return 1 if m >= 0 and m % d == 0 else 0

    def delta_rank(n):
        # source M^n one-dimensional on x^{n/d}; target M^{n+d}
        if not mdim(n) or not mdim(n + d):
            return 0
        j = n // d
        coeff = field.sub(field.from_int((-1) ** (d * j * d)), field.one())
        # (-1)^{|m| |x|} x m - m x with m = x^j: ((-1)^{dj\cdot d} - 1) x^{j+1}
        return 0 if coeff == field.zero() else 1

    out = {}
    for n in range(n_lo, n_hi + 1):
        spot0 = mdim(n) - delta_rank(n)
        spot1 = mdim(n + d - 1) - delta_rank(n - 1)
        out[n] = spot0 + spot1
    return out


def ext_dual_numbers_dims(n_max):
    """Ext^n_{k[e]}(k, k) = k for n >= 0: the periodic one-sided resolution
    ... -> R -e-> R -e-> R -> k has all induced maps zero on Hom_R(-, k)."""
    return [1] * (n_max + 1)
