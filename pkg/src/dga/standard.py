"""Stock algebras and bimodules used by the test suite and CLI examples."""

from __future__ import annotations

from .algebra import AlgebraMap, DGAlgebra, DGBimodule, PointedBimodule, regular_bimodule
from .complex import ChainComplex, GradedMap
from .field import Field
from .linalg import SparseMatrix
from .status import ValidationError


def ground_algebra(field: Field) -> DGAlgebra:
    """The field itself in degree 0."""
    under = ChainComplex(field, {0: 1}, {}, labels={0: ["1"]})
    one = field.one()
    return DGAlgebra(under, {(0, 0): {0: one}}, name="k")


def dual_numbers(field: Field) -> DGAlgebra:
    """k[e]/(e^2) in degree 0; basis (1, e)."""
    under = ChainComplex(field, {0: 2}, {}, labels={0: ["1", "e"]})
    one = field.one()
    mult = {
        (0, 0): {0: one},
        (0, 1): {1: one},
        (1, 0): {1: one},
        # e*e = 0
    }
    return DGAlgebra(under, mult, weights=[0, 1], name="k[e]")


def truncated_polynomial(field: Field, power: int) -> DGAlgebra:
    """k[t]/(t^power) in degree 0."""
    under = ChainComplex(field, {0: power}, {}, labels={0: [f"t{i}" for i in range(power)]})
    one = field.one()
    mult = {}
    for i in range(power):
        for j in range(power):
            if i + j < power:
                mult[(i, j)] = {i + j: one}
    return DGAlgebra(under, mult, weights=list(range(power)), name=f"k[t]/t^{power}")


def shifted_line_extension(field: Field, degree: int = -1) -> DGAlgebra:
    """k (+) k.u with u in the given degree, u^2 = 0, zero differential.

    The default degree -1 gives the strict, non-connective workhorse.
    """
    if degree == 0:
        raise ValidationError("use dual_numbers for a degree-0 nilpotent")
    under = ChainComplex(field, {0: 1, degree: 1}, {}, labels={0: ["1"], degree: ["u"]})
    one = field.one()
    gid = {key: g for g, key in enumerate(sorted([(0, 0), (degree, 0)]))}
    unit = gid[(0, 0)]
    ug = gid[(degree, 0)]
    mult = {
        (unit, unit): {0: one},
        (unit, ug): {0: one},
        (ug, unit): {0: one},
        # u*u = 0 (degree 2*degree is unsupported, so it must be zero anyway)
    }
    weights = [0, 0]
    weights[ug] = 1
    return DGAlgebra(under, mult, weights=weights, name=f"k+u[{degree}]")


def matrix_algebra_2x2(field: Field) -> DGAlgebra:
    """2x2 matrices in degree 0; basis (E11 + E22, E12, E21, E22)."""
    # the unit must be basis element 0, so use (1, E12, E21, E22)
    under = ChainComplex(field, {0: 4}, {}, labels={0: ["1", "E12", "E21", "E22"]})
    one = field.one()

    # expansion of products in the basis 1, E12, E21, E22, where
    # E11 = 1 - E22
    def emul(a, b):
        # a, b in {"11", "12", "21", "22"}: E_a * E_b
        i, j = a
        k, l = b
        if j != k:
            return {}
        return {("11" if (i, l) == ("1", "1") else i + l): 1}

    def to_basis(d):
        # dict over E11, E12, E21, E22 -> coefficients over (1, E12, E21, E22)
        out = {}
        c11 = d.get("11", 0)
        if c11:
            out[0] = out.get(0, 0) + c11
            out[3] = out.get(3, 0) - c11
        for name, pos in (("12", 1), ("21", 2), ("22", 3)):
            c = d.get(name, 0)
            if c:
                out[pos] = out.get(pos, 0) + c
        return {k: field.from_int(v) for k, v in out.items() if v}

    names = ["", "12", "21", "22"]

    def expand(i):
        # basis element i as a dict over E-matrix units
        if i == 0:
            return {"11": 1, "22": 1}
        return {names[i]: 1}

    mult = {}
    for i in range(4):
        for j in range(4):
            acc = {}
            for a, ca in expand(i).items():
                for b, cb in expand(j).items():
                    for c, cc in emul(a, b).items():
                        acc[c] = acc.get(c, 0) + ca * cb * cc
            vec = to_basis(acc)
            if vec:
                mult[(i, j)] = vec
    return DGAlgebra(under, mult, name="M2")


def free_algebra_one_generator(field: Field, gen_degree: int, weight_cap: int) -> DGAlgebra:
    """k<x> with |x| = gen_degree >= 1, represented on word weights <= cap.

    The object is a window slice of the infinite free algebra, not a
    quotient: products of total weight beyond the cap are out of window.
    Basis element j is x^j, weight j; weights make the Hochschild tower
    split into exactly computable blocks.
    """
    if gen_degree < 1:
        raise ValidationError("free algebra slices need a generator of positive degree")
    if weight_cap < 1:
        raise ValidationError("weight cap must be at least 1")
    dims = {j * gen_degree: 1 for j in range(weight_cap + 1)}
    labels = {j * gen_degree: [f"x^{j}" if j != 1 else "x"] for j in range(weight_cap + 1)}
    # the true object is zero below degree 0, so the slice is certified on
    # every degree up to the cap
    window = (None, weight_cap * gen_degree)
    under = ChainComplex(field, dims, {}, labels=labels, window=window)
    one = field.one()
    mult = {}
    for i in range(weight_cap + 1):
        for j in range(weight_cap + 1):
            if i + j <= weight_cap:
                mult[(i, j)] = {0: one}
    weights = list(range(weight_cap + 1))
    return DGAlgebra(under, mult, weights=weights, name=f"k<x;{gen_degree}>")


def polynomial_forms_interval(field: Field, degree_cap: int) -> DGAlgebra:
    """The quotient Q[t, dt]/(t^{cap+1}): forms on the interval, t-truncated.

    Basis: t^0..t^cap in degree 0 and t^0 dt..t^{cap-1} dt in degree 1.
    Characteristic 0 only; serves as a finite stand-in for the path object
    when only bounded t-degrees are examined.
    """
    if field.characteristic != 0:
        raise ValidationError("polynomial forms need characteristic 0")
    n0 = degree_cap + 1
    n1 = degree_cap
    dims = {0: n0, 1: n1}
    labels = {0: [f"t^{j}" for j in range(n0)], 1: [f"t^{j}dt" for j in range(n1)]}
    # d(t^j) = j t^{j-1} dt
    entries = [(j - 1, j, field.from_int(j)) for j in range(1, n0) if j - 1 < n1]
    d = {0: SparseMatrix.from_entries(field, n1, n0, entries)}
    under = ChainComplex(field, dims, d, labels=labels)
    mult = {}
    for i in range(n0):
        for j in range(n0):
            if i + j < n0:
                mult[(i, j)] = {i + j: field.one()}
    for i in range(n0):
        for j in range(n1):
            if i + j < n1:
                mult[(i, n0 + j)] = {i + j: field.one()}
                mult[(n0 + j, i)] = {i + j: field.one()}
    # dt * dt = 0
    return DGAlgebra(under, mult, name=f"Omega[{degree_cap}]")


def unit_map(field: Field, S: DGAlgebra) -> AlgebraMap:
    """The unit k -> S."""
    k = ground_algebra(field)
    comp = GradedMap(
        k.underlying,
        S.underlying,
        {0: SparseMatrix.from_entries(field, S.underlying.dim(0), 1, [(0, 0, field.one())])},
    )
    return AlgebraMap(k, S, comp, name="unit")


def identity_algebra_map(S: DGAlgebra) -> AlgebraMap:
    from .complex import identity_map

    return AlgebraMap(S, S, identity_map(S.underlying), name="id")


def augmentation_dual_numbers(field: Field) -> AlgebraMap:
    """k[e] -> k, e -> 0."""
    R = dual_numbers(field)
    k = ground_algebra(field)
    comp = GradedMap(
        R.underlying,
        k.underlying,
        {0: SparseMatrix.from_entries(field, 1, 2, [(0, 0, field.one())])},
    )
    return AlgebraMap(R, k, comp, name="aug")


def pointed_regular(R: DGAlgebra, point=None) -> PointedBimodule:
    """R as an (R, R)-pointed bimodule, pointed at the unit by default."""
    M = regular_bimodule(R)
    return PointedBimodule(M, point if point is not None else {0: R.field.one()})


def augmentation_to_ground(R: DGAlgebra) -> AlgebraMap:
    """R -> k killing every non-unit basis element; valid when that is
    actually multiplicative (augmented algebras like k[e] or free slices)."""
    field = R.field
    k = ground_algebra(field)
    comps = {}
    for n, dim in R.underlying.dims.items():
        if n != 0:
            comps[n] = SparseMatrix.zero(field, 0, dim) if k.underlying.dim(n) == 0 else None
        else:
            comps[0] = SparseMatrix.from_entries(field, 1, dim, [(0, 0, field.one())])
    comps = {n: m for n, m in comps.items() if m is not None}
    gmap = GradedMap(R.underlying, k.underlying, comps)
    return AlgebraMap(R, k, gmap, name="aug")


def trivial_module(R: DGAlgebra) -> DGBimodule:
    """The ground field as an (R, R)-bimodule through the augmentation.

    Carries weight zero so weighted towers accept it as a coefficient.
    """
    aug = augmentation_to_ground(R)  # validates that the augmentation exists
    field = R.field
    under = ChainComplex(field, {0: 1}, {}, labels={0: ["1"]})
    one = field.one()
    left = {(R.unit_gid, 0): {0: one}}
    right = {(0, R.unit_gid): {0: one}}
    return DGBimodule(R, R, under, left, right, weights=[0], name=f"k_triv({R.name})")
