import pytest

from dga.algebra import regular_bimodule, square_zero_extension, suspend_bimodule
from dga.complex import ChainComplex
from dga.field import prime_field, rationals
from dga.standard import (
    dual_numbers,
    free_algebra_one_generator,
    ground_algebra,
    identity_algebra_map,
    matrix_algebra_2x2,
    shifted_line_extension,
    trivial_module,
    truncated_polynomial,
    unit_map,
)
from dga.status import ScopeError
from dga.theorems import (
    fiber_les_assemble,
    free_source_oracle,
    inclusion_map,
    lemma_c_check,
    pi_map_alg,
    semifree_pi0,
    theorem_a_report,
    theorem_b_les_report,
)

QQ = rationals()
F2 = prime_field(2)
F3 = prime_field(3)


def test_pi_map_alg_corollary_route():
    R = free_algebra_one_generator(QQ, 2, 8)
    pg = pi_map_alg(identity_algebra_map(R), 2)
    assert pg.dim == 1 and pg.route == "COROLLARY"
    assert pg.certificate.is_certified()


def test_pi_map_alg_ordinary_targets_vanish():
    for R in (dual_numbers(QQ), truncated_polynomial(F3, 3)):
        for n in (2, 3, 4):
            assert pi_map_alg(identity_algebra_map(R), n).dim == 0


def test_pi_map_alg_initial_source():
    # R = k: HH^{-i}(k, S) = H^{-i}(S) = 0 for connective S
    k = ground_algebra(QQ)
    S = dual_numbers(QQ)
    phi = unit_map(QQ, S)
    for n in (2, 3):
        assert pi_map_alg(phi, n).dim == 0


def test_pi_map_alg_rejects_low_levels_and_nonstrict():
    R = dual_numbers(QQ)
    with pytest.raises(ScopeError):
        pi_map_alg(identity_algebra_map(R), 1)
    from dga.algebra import DGAlgebra
    from dga.complex import disk_complex

    one = QQ.one()
    nonstrict = DGAlgebra(
        disk_complex(QQ, -1), {(1, 1): {0: one}, (1, 0): {0: one}, (0, 1): {0: one}}
    )
    with pytest.raises(ScopeError):
        pi_map_alg(identity_algebra_map(nonstrict), 2)


def test_theorem_b_free_connective_all_exact():
    R = free_algebra_one_generator(QQ, 2, 8)
    V = ChainComplex(QQ, {2: 1}, {})
    rep = theorem_b_les_report(identity_algebra_map(R), 3, free_generators=V)
    assert rep.exact_everywhere_determinable()
    assert all(v.verdict == "EXACT" for v in rep.verdicts)
    # route independence: the oracle and the corollary agree on [R,S] nodes
    for node in rep.nodes:
        if node.name.startswith("[R,S]"):
            assert node.dim is not None


def test_theorem_b_ordinary_all_zero():
    R = dual_numbers(QQ)
    rep = theorem_b_les_report(identity_algebra_map(R), 3)
    assert all(node.dim == 0 for node in rep.nodes)
    assert rep.exact_everywhere_determinable()


def test_theorem_b_nonconnective_free_source():
    # S = R (+) S^3 k_triv: H^{-3}(S) = k forces a nonzero edge rank
    R = free_algebra_one_generator(QQ, 2, 8)
    S = square_zero_extension(R, suspend_bimodule(trivial_module(R), 3))
    phi = inclusion_map(R, S)
    V = ChainComplex(QQ, {2: 1}, {})
    rep = theorem_b_les_report(phi, 4, free_generators=V)
    assert rep.exact_everywhere_determinable()
    dims = {node.name: node.dim for node in rep.nodes}
    assert dims["H^-3(S)"] == 1
    assert dims["HH^-3(R,S)"] == 1
    assert dims["[R,S]_5"] == 1
    # the edge at -3 must have full rank for exactness to hold
    edge_arrow = rep.arrows[rep.nodes.index(next(n for n in rep.nodes if n.name == "H^-3(S)"))]
    assert edge_arrow.rank == 1


def test_theorem_b_symbolic_nodes_undetermined_never_not_exact():
    D = dual_numbers(QQ)
    SD = square_zero_extension(D, suspend_bimodule(regular_bimodule(D), 1))
    rep = theorem_b_les_report(inclusion_map(D, SD), 3)
    assert rep.exact_everywhere_determinable()
    symbolic = [n for n in rep.nodes if n.dim is None]
    assert symbolic, "expected symbolic pi nodes for a non-free non-connective source"


def test_fiber_les_translation_tables():
    R = free_algebra_one_generator(QQ, 2, 8)
    phi = identity_algebra_map(R)
    report, middle, right = fiber_les_assemble(phi, 3)
    from dga.hochschild import hh_group

    Sphi = regular_bimodule(R)
    for i in range(3):
        assert middle[i] == hh_group(R, Sphi, -1 - i, cutoff=8).dim
    assert all(right[i] == 0 for i in range(3))


def test_theorem_a_suite():
    for R in (dual_numbers(F2), ground_algebra(F3), matrix_algebra_2x2(F2), matrix_algebra_2x2(F3)):
        rep = theorem_a_report(R)
        assert rep.h_minus_1 == 0
        assert rep.kernel_order == 1
        assert rep.pi1.group_order == 1
        assert rep.unit_map_injective_on_kernel_test
        assert rep.exact_at_units == "EXACT"


def test_theorem_a_unit_group_orders():
    rep = theorem_a_report(dual_numbers(F2))
    assert (rep.hh0_units, rep.h0_units) == (2, 2)
    rep = theorem_a_report(matrix_algebra_2x2(F3))
    assert (rep.hh0_units, rep.h0_units) == (2, 48)


def test_theorem_a_rejects_rationals():
    with pytest.raises(ScopeError):
        theorem_a_report(dual_numbers(QQ))


def test_lemma_c_suite():
    from dga.algebra import direct_sum_bimodules

    for d, cap in ((2, 8), (3, 6)):
        R = free_algebra_one_generator(QQ, d, cap)
        M = regular_bimodule(R)
        for coeff in (M, direct_sum_bimodules(M, M)):
            for n in (2, 3, 4):
                rep = lemma_c_check(R, coeff, n)
                assert rep.equal, (d, n, rep)
                assert all(c.is_certified() for c in rep.certificates)


def test_lemma_c_nonzero_instance():
    R = free_algebra_one_generator(QQ, 3, 6)
    rep = lemma_c_check(R, regular_bimodule(R), 3)
    assert rep.equal and rep.dim_a == 2


def test_lemma_c_zero_module():
    from dga.algebra import DGBimodule

    R = dual_numbers(QQ)
    zero = DGBimodule(R, R, ChainComplex(QQ, {}, {}), {}, {}, name="0")
    rep = lemma_c_check(R, zero, 2)
    assert rep.equal


def test_free_source_oracle_formulas():
    S = dual_numbers(QQ)
    k_line = ChainComplex(QQ, {0: 1}, {})
    for n in range(0, 4):
        pg = free_source_oracle(k_line, S, None, n)
        assert pg.dim == (2 if n == 0 else 0)
    # acyclic target
    from dga.algebra import DGAlgebra
    from dga.complex import disk_complex

    one = QQ.one()
    acyclic = DGAlgebra(
        disk_complex(QQ, -1), {(1, 1): {0: one}, (1, 0): {0: one}, (0, 1): {0: one}}
    )
    for n in range(0, 3):
        assert free_source_oracle(k_line, acyclic, None, n).dim == 0


def test_free_source_oracle_rejects_nonzero_differential():
    from dga.complex import disk_complex

    with pytest.raises(ScopeError):
        free_source_oracle(disk_complex(QQ, 0), dual_numbers(QQ), None, 1)


def test_semifree_pi0_gap():
    S = shifted_line_extension(QQ, -1)
    rep = semifree_pi0(S)
    assert rep.associative_count == 3
    assert rep.commutative_count == 2
    assert rep.associative_blocks == rep.homology_blocks == (1, 1, 1)
    assert rep.certificate.is_certified()
    repq = semifree_pi0(ground_algebra(QQ))
    assert (repq.associative_count, repq.commutative_count) == (2, 2)


def test_semifree_pi0_scope_errors():
    with pytest.raises(ScopeError):
        semifree_pi0(shifted_line_extension(prime_field(5), -1))
    with pytest.raises(ScopeError):
        semifree_pi0(matrix_algebra_2x2(QQ))  # not commutative


def test_route_independence_corollary_vs_oracle():
    # for the free source with connective target the two routes agree
    R = free_algebra_one_generator(QQ, 2, 8)
    V = ChainComplex(QQ, {2: 1}, {})
    phi = identity_algebra_map(R)
    for n in (2, 3, 4):
        corollary = pi_map_alg(phi, n)
        oracle = free_source_oracle(V, R, phi, n)
        assert corollary.dim == oracle.dim
