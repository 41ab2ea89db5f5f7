import pytest

from dga.algebra import (
    DGBimodule,
    PointedBimodule,
    direct_sum_bimodules,
    free_bimodule,
    regular_bimodule,
    restrict_bimodule,
    suspend_bimodule,
)
from dga.complex import ChainComplex, disk_complex
from dga.field import prime_field, rationals
from dga.free_construction import (
    FreeAlgebraQuotient,
    IdealSpan,
    TargetAlgebra,
    TensorAlgebraTrunc,
    adjunction_card_check,
    axiom3_smoke,
    free_functor_F,
    ideal_generation_check,
    is_distinguished,
    universal_extension,
)
from dga.linalg import SparseMatrix
from dga.standard import (
    dual_numbers,
    ground_algebra,
    identity_algebra_map,
    pointed_regular,
    shifted_line_extension,
    unit_map,
)
from dga.status import ScopeError, ValidationError, WindowError

QQ = rationals()
F2 = prime_field(2)


def free_pointed_module(field, extra_degree=None, label="v"):
    """k.1 or k.1 (+) k.v over the ground field, pointed at 1."""
    k = ground_algebra(field)
    one = field.one()
    if extra_degree is None:
        C = ChainComplex(field, {0: 1}, {}, labels={0: ["pt"]})
        basis = [(0, 0)]
    elif extra_degree == 0:
        C = ChainComplex(field, {0: 2}, {}, labels={0: ["pt", label]})
        basis = [(0, 0), (0, 1)]
    else:
        C = ChainComplex(field, {0: 1, extra_degree: 1}, {}, labels={0: ["pt"], extra_degree: [label]})
        basis = sorted([(0, 0), (extra_degree, 0)])
    left = {(0, g): {i: one} for g, (d, i) in enumerate(basis)}
    right = {(g, 0): {i: one} for g, (d, i) in enumerate(basis)}
    M = DGBimodule(k, k, C, left, right)
    point_local = next(i for g, (d, i) in enumerate(basis) if (d, i) == (0, 0))
    return PointedBimodule(M, {0 if (0, 0) == basis[0] or extra_degree != 0 else 0: one}), k


def k_target(field, A):
    return TargetAlgebra(A, unit_map(field, A), unit_map(field, A))


def test_tensor_algebra_word_counts():
    X, _ = free_pointed_module(QQ, 0)
    T = TensorAlgebraTrunc(X, 3, (0, 0))
    assert T.dim(0) == 1 + 2 + 4 + 8
    Xw, _ = free_pointed_module(QQ, -1)
    T2 = TensorAlgebraTrunc(Xw, 2, (-2, 0))
    assert (T2.dim(0), T2.dim(-1), T2.dim(-2)) == (1 + 1 + 1, 1 + 2, 1)


def test_tensor_algebra_leibniz_signs():
    # X containing a disk: d(x (x) y) = dx (x) y + (-1)^{|x|} x (x) dy
    k = ground_algebra(QQ)
    C = disk_complex(QQ, 1)  # generators in degrees 1, 2
    M = free_bimodule(k, C, k)
    X = PointedBimodule(direct_sum_bimodules(restrict_bimodule(identity_algebra_map(k), regular_bimodule(k)), M), {0: QQ.one()})
    T = TensorAlgebraTrunc(X, 2, (0, 5))
    # find the word (a, a) where a is the degree-1 generator; d(a (x) a) must
    # be da (x) a - a (x) da
    a = X.base.gid[(1, 0)]
    w = (a, a)
    pos = T.index[2][w]
    img = T.diff(2).column(pos)
    da = X.base.gid[(2, 0)]
    p1 = T.index[3][(da, a)]
    p2 = T.index[3][(a, da)]
    assert img == {p1: QQ.one(), p2: QQ.from_int(-1)}


def test_ideal_contains_point_squared_relation():
    S = dual_numbers(QQ)
    X = pointed_regular(S)
    T = TensorAlgebraTrunc(X, 3, (-1, 1))
    I = IdealSpan(T)
    # 1 (x) 1 - 1_T is in the span by construction; check membership of the
    # derived relation: (point word) - (empty word)
    pt = X.base.gid[(0, 0)]
    vec = {T.index[0][(pt,)]: QQ.one(), T.index[0][()]: QQ.from_int(-1)}
    assert I.contains(0, vec)


def test_ideal_rank_for_free_generator_matches_enumeration():
    # X = k.1 (+) k.v over F2, L = 3: T^0 has 15 words, reduced words are
    # v^0..v^3, so the ideal slice has rank 11
    X, _ = free_pointed_module(F2, 0)
    T = TensorAlgebraTrunc(X, 3, (0, 0))
    I = IdealSpan(T)
    assert T.dim(0) == 15
    assert I.dim(0) == 11
    F = FreeAlgebraQuotient(X, 3, (0, 0))
    assert F.dim(0) == 4


def test_ideal_slice_for_point_only_module():
    # X = k pointed by the identity: the slice is the kernel of T(k) -> k
    X, _ = free_pointed_module(QQ)
    T = TensorAlgebraTrunc(X, 4, (0, 0))
    I = IdealSpan(T)
    assert I.dim(0) == T.dim(0) - 1


def test_free_functor_collapses_S():
    # F(S) = S for strict S with invertible point (the unit)
    for S in (dual_numbers(QQ), shifted_line_extension(QQ, -1)):
        X = pointed_regular(S)
        res = free_functor_F(X, 4, (-2, 2))
        assert res.certificate.status == "STABILIZED"
        assert res.dims == {n: k for n, k in S.underlying.dims.items()}


def test_free_functor_on_free_generator_counts():
    X, _ = free_pointed_module(QQ, 0)
    for L in (3, 4, 5):
        res = free_functor_F(X, L, (0, 0), stabilize=False)
        assert res.dims == {0: L + 1}


def test_reduce_word_normal_forms():
    S = dual_numbers(QQ)
    X = pointed_regular(S)
    F = FreeAlgebraQuotient(X, 6, (-1, 1))
    pt = X.base.gid[(0, 0)]
    eps = X.base.gid[(0, 1)]
    # 1 (x) 1 (x) 1 reduces to the empty word
    deg, red = F.reduce_word((pt, pt, pt))
    assert deg == 0 and red == {F.rep_index[0][()]: QQ.one()}
    # words already of length <= 1 are their own normal forms
    deg, red = F.reduce_word((eps,))
    assert red == {F.rep_index[0][(eps,)]: QQ.one()}
    # every basis word reduces to length <= 1 (strictly invertible point)
    for n, words in F.T.words_by_degree.items():
        for w in words:
            dd, red = F.reduce_word(w)
            assert all(len(F.reps[dd][pos]) <= 1 for pos in red)
    # reduction is idempotent on representatives
    for n, reps in F.reps.items():
        for w in reps:
            dd, red = F.reduce_word(w)
            assert red == {F.rep_index[dd][w]: QQ.one()}


def test_structural_maps_are_bijective_for_S():
    # the degreewise bijection F(S) -> S via the S structural map
    from dga.linalg import rank

    S = dual_numbers(QQ)
    X = pointed_regular(S)
    F = FreeAlgebraQuotient(X, 6, (-1, 1))
    comps = F.structural_map_S()
    for n, mat in comps.items():
        assert mat.nrows == mat.ncols == S.underlying.dim(n)
        assert rank(mat) == mat.nrows


def test_universal_extension_monomial_images():
    X, _ = free_pointed_module(F2, 0)
    res = free_functor_F(X, 4, (0, 0), stabilize=False)
    A = dual_numbers(F2)
    tgt = k_target(F2, A)
    one = F2.one()
    ext = universal_extension(res.quotient, tgt, {0: {0: one}, 1: {1: one}})
    # v^j -> e^j: only 1 -> 1 and v -> e survive
    dense = ext.components[0].to_dense()
    assert dense[0][0] == one and dense[1][1] == one
    assert all(dense[r][c] == F2.zero() for r in range(2) for c in range(2, 5))


def test_universal_extension_rejects_unpointed():
    X, _ = free_pointed_module(F2, 0)
    res = free_functor_F(X, 3, (0, 0), stabilize=False)
    A = dual_numbers(F2)
    tgt = k_target(F2, A)
    one = F2.one()
    with pytest.raises(ValidationError):
        universal_extension(res.quotient, tgt, {0: {1: one}, 1: {1: one}})


def test_adjunction_cardinalities():
    # the three listed instances over F2
    X0, _ = free_pointed_module(F2)
    rep = adjunction_card_check(X0, k_target(F2, dual_numbers(F2)), 3, (-1, 1))
    assert (rep.pointed_maps, rep.algebra_maps, rep.bijection) == (1, 1, True)

    X1, _ = free_pointed_module(F2, 0)
    rep = adjunction_card_check(X1, k_target(F2, dual_numbers(F2)), 3, (-1, 1))
    assert (rep.pointed_maps, rep.algebra_maps, rep.bijection) == (4, 4, True)

    X2, _ = free_pointed_module(F2, -1, label="w")
    rep = adjunction_card_check(X2, k_target(F2, shifted_line_extension(F2, -1)), 3, (-2, 1))
    assert (rep.pointed_maps, rep.algebra_maps, rep.bijection) == (2, 2, True)


def test_adjunction_rejects_rationals():
    X0, _ = free_pointed_module(QQ)
    with pytest.raises(ScopeError):
        adjunction_card_check(X0, k_target(QQ, dual_numbers(QQ)), 3, (-1, 1))


def test_is_distinguished():
    S = dual_numbers(QQ)
    assert is_distinguished(pointed_regular(S), (-2, 2))
    # S (+) contractible stays distinguished
    phi = identity_algebra_map(S)
    S_rs = restrict_bimodule(phi, regular_bimodule(S))
    X = direct_sum_bimodules(S_rs, free_bimodule(S, disk_complex(QQ, 1), S))
    assert is_distinguished(PointedBimodule(X, {0: QQ.one()}), (-2, 4))
    # S (+) a shifted line is not
    Xbad = direct_sum_bimodules(S_rs, suspend_bimodule(S_rs, 1))
    assert not is_distinguished(PointedBimodule(Xbad, {0: QQ.one()}), (-2, 2))


def test_ideal_generation_lemma():
    for S in (dual_numbers(QQ), shifted_line_extension(QQ, -1)):
        X = pointed_regular(S)
        rep = ideal_generation_check(X, 4, (-2, 2), max_orbit_rounds=10)
        assert rep.matches, (S.name, rep.ideal_homology, rep.orbit_dims)


def test_axiom3_smoke_disk_summand():
    S = dual_numbers(QQ)
    phi = identity_algebra_map(S)
    S_rs = restrict_bimodule(phi, regular_bimodule(S))
    D = free_bimodule(S, disk_complex(QQ, 2), S)
    X = direct_sum_bimodules(S_rs, D)
    PX = PointedBimodule(X, {0: QQ.one()})
    proj = {}
    for n in sorted(X.underlying.dims):
        sdim = S_rs.underlying.dim(n)
        entries = [(i, i, QQ.one()) for i in range(sdim)]
        proj[n] = SparseMatrix.from_entries(QQ, sdim, X.underlying.dim(n), entries)
    rep = axiom3_smoke(PX, proj, pointed_regular(S), 3, (-2, 4))
    assert rep.distinguished and rep.quasi_iso and not rep.skipped


def test_axiom3_smoke_skips_non_distinguished():
    S = dual_numbers(QQ)
    phi = identity_algebra_map(S)
    S_rs = restrict_bimodule(phi, regular_bimodule(S))
    Xbad = direct_sum_bimodules(S_rs, suspend_bimodule(S_rs, 1))
    rep = axiom3_smoke(PointedBimodule(Xbad, {0: QQ.one()}), {}, pointed_regular(S), 3, (-2, 2))
    assert rep.skipped and rep.quasi_iso is None


def test_quotient_relations_hold():
    # images of words with 1.s inserted coincide with the contracted words
    S = dual_numbers(QQ)
    X = pointed_regular(S)
    F = FreeAlgebraQuotient(X, 4, (-1, 1))
    M = X.base
    one = QQ.one()
    pt = M.gid[(0, 0)]
    eps = M.gid[(0, 1)]
    # eps (x) (1 . eps) ~ eps . eps = 0 in the quotient
    d1, r1 = F.reduce_word((eps, eps))  # 1.eps = eps since the point is 1
    # eps.eps = 0, so the class of eps (x) eps must be zero
    assert r1 == {}
