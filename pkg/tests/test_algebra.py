import random

import pytest

from dga.algebra import (
    AlgebraMap,
    DGAlgebra,
    DGBimodule,
    PointedBimodule,
    free_bimodule,
    is_connective,
    is_homotopy_invertible,
    is_strict,
    is_strictly_invertible,
    regular_bimodule,
    restrict_bimodule,
    square_zero_extension,
)
from dga.complex import ChainComplex, disk_complex, line_complex
from dga.field import prime_field, rationals
from dga.standard import (
    augmentation_dual_numbers,
    dual_numbers,
    free_algebra_one_generator,
    ground_algebra,
    identity_algebra_map,
    matrix_algebra_2x2,
    polynomial_forms_interval,
    shifted_line_extension,
    truncated_polynomial,
    unit_map,
)
from dga.status import ValidationError, WindowError

from .helpers import random_complex

QQ = rationals()
F2 = prime_field(2)
F3 = prime_field(3)


def test_standard_algebras_validate():
    for field in (QQ, F2, F3):
        ground_algebra(field)
        dual_numbers(field)
        truncated_polynomial(field, 4)
        shifted_line_extension(field, -1)
        shifted_line_extension(field, 1)
        matrix_algebra_2x2(field)
        free_algebra_one_generator(field, 1, 6)
        free_algebra_one_generator(field, 2, 5)
    polynomial_forms_interval(QQ, 4)


def test_validation_rejects_broken_associativity():
    under = ChainComplex(QQ, {0: 2}, {}, labels={0: ["1", "a"]})
    one = QQ.one()
    mult = {(0, 0): {0: one}, (0, 1): {1: one}, (1, 0): {1: one}, (1, 1): {0: one, 1: one}}
    # a*a = 1 + a is associative, so perturb instead: a*a = 1, then
    # (a*a)*a = a but a*(a*a) = a, fine; use a genuinely broken table:
    mult_bad = dict(mult)
    mult_bad[(1, 1)] = {0: one}  # a^2 = 1 stays associative
    DGAlgebra(under, mult_bad)  # sanity: still a valid table (Z/2 group algebra)
    # now break the unit law instead
    mult_bad2 = dict(mult)
    mult_bad2[(0, 1)] = {1: QQ.from_int(2)}
    with pytest.raises(ValidationError) as exc:
        DGAlgebra(under, mult_bad2)
    assert any("unit law" in v for v in exc.value.violations)


def test_validation_reports_associativity_witness():
    # three-dimensional table with one associativity defect
    under = ChainComplex(QQ, {0: 3}, {}, labels={0: ["1", "a", "b"]})
    one = QQ.one()
    mult = {
        (0, 0): {0: one},
        (0, 1): {1: one},
        (0, 2): {2: one},
        (1, 0): {1: one},
        (2, 0): {2: one},
        (1, 1): {2: one},  # a*a = b
        (1, 2): {},  # a*b = 0
        (2, 1): {0: one},  # b*a = 1  -> (a*a)*a = 0 but a*(a*a)... check
        (2, 2): {},
    }
    with pytest.raises(ValidationError) as exc:
        DGAlgebra(under, {k: v for k, v in mult.items() if v})
    assert any("associativity" in v for v in exc.value.violations)


def test_leibniz_guard():
    # complex k -> k with d(1) nonzero cannot carry a unital algebra
    D = disk_complex(QQ, 0)
    one = QQ.one()
    with pytest.raises(ValidationError):
        DGAlgebra(D, {(0, 0): {0: one}})


def test_square_zero_extension_dual_numbers():
    k = ground_algebra(QQ)
    M = regular_bimodule(k)
    E = square_zero_extension(k, M)
    assert E.underlying.dims == {0: 2}
    # product of the two M-elements is zero
    assert E.mul_basis(1, 1) == {}
    # matches the stock dual numbers table
    D = dual_numbers(QQ)
    assert E.mult == D.mult


def test_square_zero_of_zero_module_is_r():
    R = dual_numbers(QQ)
    zero_mod = DGBimodule(R, R, ChainComplex(QQ, {}, {}), {}, {}, name="0")
    E = square_zero_extension(R, zero_mod)
    assert E.underlying.dims == R.underlying.dims
    assert E.mult == R.mult


def test_square_zero_m_times_m_vanishes():
    R = dual_numbers(QQ)
    M = regular_bimodule(R)
    E = square_zero_extension(R, M)
    # M-part basis elements are indices 2, 3 in degree 0
    for i in (2, 3):
        for j in (2, 3):
            assert E.mul_basis(i, j) == {}


def test_is_strict():
    assert is_strict(dual_numbers(QQ))
    assert is_strict(shifted_line_extension(QQ, -1))
    # non-strict: k in degrees -1, 0 with d = id and trivial products
    under = disk_complex(QQ, -1)
    one = QQ.one()
    mult = {(1, 1): {0: one}, (1, 0): {0: one}, (0, 1): {0: one}}
    # basis: (-1,0) gid 0, (0,0) gid 1; unit is gid 1
    S = DGAlgebra(under, mult)
    assert not is_strict(S)


def test_homotopy_invertibility_of_zero():
    # zero is not homotopy invertible whenever [1] != 0 in H^0
    assert not is_homotopy_invertible(dual_numbers(QQ), {})[0]
    assert not is_homotopy_invertible(matrix_algebra_2x2(F3), {})[0]
    # but in an acyclic algebra 1 itself is a boundary, so 0 ~ 1 is invertible
    under = disk_complex(QQ, -1)
    one = QQ.one()
    S = DGAlgebra(under, {(1, 1): {0: one}, (1, 0): {0: one}, (0, 1): {0: one}})
    assert is_homotopy_invertible(S, {})[0]


def test_homotopy_invertible_dual_numbers():
    S = dual_numbers(QQ)
    ok, y = is_homotopy_invertible(S, {0: QQ.one(), 1: QQ.one()})  # 1 + e
    assert ok
    assert y == {0: QQ.one(), 1: QQ.from_int(-1)}  # 1 - e
    ok2, _ = is_homotopy_invertible(S, {1: QQ.one()})  # e
    assert not ok2
    ok3, y3 = is_homotopy_invertible(S, {0: QQ.one()})
    assert ok3 and y3 == {0: QQ.one()}


def test_homotopy_invertible_unit_always():
    for A in (dual_numbers(F3), matrix_algebra_2x2(F2), shifted_line_extension(QQ, -1)):
        ok, y = is_homotopy_invertible(A, {0: A.field.one()})
        assert ok


def test_homotopy_invertibility_boundary_insensitive():
    # in the non-strict disk algebra, 1 + d(u) stays homotopy invertible
    under = disk_complex(QQ, -1)
    one = QQ.one()
    S = DGAlgebra(under, {(1, 1): {0: one}, (1, 0): {0: one}, (0, 1): {0: one}})
    x = {0: QQ.from_int(1 + 1)}  # 1 + d(u) where d(u) = unit-coefficient 1
    ok, _ = is_homotopy_invertible(S, x)
    assert ok
    # and in a strict algebra homotopy invertible implies strictly invertible
    D = dual_numbers(QQ)
    for vec in ({0: one}, {0: one, 1: QQ.from_int(5)}):
        ok_h, _ = is_homotopy_invertible(D, vec)
        ok_s, _ = is_strictly_invertible(D, vec)
        assert ok_h == ok_s


def test_is_connective():
    assert is_connective(dual_numbers(QQ), (-4, 0))
    S = shifted_line_extension(QQ, -1)
    assert not is_connective(S, (-4, 0))
    Spos = shifted_line_extension(QQ, 1)
    assert is_connective(Spos, (-4, 0))
    with pytest.raises(WindowError):
        is_connective(S, (0, 0))


def test_restrict_bimodule_identity_and_unit():
    R = dual_numbers(QQ)
    M = regular_bimodule(R)
    idm = identity_algebra_map(R)
    M2 = restrict_bimodule(idm, M)
    assert M2.left == M.left and M2.right == M.right
    nu = unit_map(QQ, R)
    M3 = restrict_bimodule(nu, M)
    # unit of k acts as identity
    one = QQ.one()
    assert M3.act_left_basis(0, 1) == {1: one}


def test_restrict_bimodule_projection_kills_epsilon():
    phi = augmentation_dual_numbers(QQ)
    k = phi.target
    M = regular_bimodule(k)
    MR = restrict_bimodule(phi, M, right_side="R")
    # e (gid 1 in R) acts by zero on k
    assert MR.act_left_basis(1, 0) == {}
    assert MR.act_right_basis(0, 1) == {}
    one = QQ.one()
    assert MR.act_left_basis(0, 0) == {0: one}


def test_free_bimodule_valid_and_contractible():
    rng = random.Random(2)
    R = dual_numbers(QQ)
    S = shifted_line_extension(QQ, -1)
    for n in (-1, 0, 2):
        F = free_bimodule(R, disk_complex(QQ, n), S)
        from dga.complex import full_window, homology_dims

        h = homology_dims(F.underlying, full_window(F.underlying))
        assert all(v == 0 for v in h.values())


def test_random_structure_guards_square_zero():
    # randomized: square-zero extensions of stock algebras by shifted
    # regular bimodules revalidate from scratch (constructor asserts)
    rng = random.Random(8)
    fields = [QQ, F2, F3]
    for _ in range(20):
        field = rng.choice(fields)
        R = rng.choice([dual_numbers(field), ground_algebra(field), truncated_polynomial(field, 3)])
        M = regular_bimodule(R)
        E = square_zero_extension(R, M)
        assert is_strict(E)
        assert is_connective(E, (-4, 0))


def test_pointed_bimodule_point_must_be_cocycle():
    R = dual_numbers(QQ)
    M = regular_bimodule(R)
    PointedBimodule(M, {0: QQ.one()})
    with pytest.raises(ValidationError):
        PointedBimodule(M, {})


def test_algebra_map_validation():
    R = dual_numbers(QQ)
    k = ground_algebra(QQ)
    from dga.complex import GradedMap
    from dga.linalg import SparseMatrix

    # e -> 1 is not multiplicative (e^2 = 0 but 1 != 0)
    bad = GradedMap(
        R.underlying,
        k.underlying,
        {0: SparseMatrix.from_entries(QQ, 1, 2, [(0, 0, QQ.one()), (0, 1, QQ.one())])},
    )
    with pytest.raises(ValidationError):
        AlgebraMap(R, k, bad)


def test_windowed_free_algebra_products():
    A = free_algebra_one_generator(QQ, 2, 4)
    one = QQ.one()
    assert A.mul_basis(1, 2) == {0: one}  # x * x^2 = x^3
    with pytest.raises(WindowError):
        A.mul_basis(3, 4)  # x^3 * x^4 leaves the weight window
    assert A.weights == [0, 1, 2, 3, 4]
