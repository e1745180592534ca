import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import digraphs, lam, mixed, mixed_dags, om, vertex_lists
from trekdet.determinant import (
    CONSTANT_ONE,
    DetExpansion,
    ExpansionClass,
    det_acyclic,
    det_pullback_four_step,
    det_polynomial,
    det_rational,
    det_rational_expr,
    result_record,
    trek_separated,
    verify_positivity,
    verify_power_of_two,
)
from trekdet.flows import enumerate_trek_flows
from trekdet.graphs import CyclicGraphError, bidirected_subdivision, lambda_var
from trekdet.oracle import oracle_determinant
from trekdet.polynomial import ONE, Monomial, Polynomial, RationalExpr, rat_equal


def test_single_edge_expansion(edge12):
    exp = det_acyclic(edge12, (1,), (2,))
    (c,) = exp.classes
    assert (c.sign, c.ud_count) == (1, 0)
    assert exp.to_polynomial() == om(1, 1) * lam(1, 2)


def test_full_minor_of_edge(edge12):
    exp = det_acyclic(edge12, (1, 2), (1, 2))
    assert exp.to_polynomial() == om(1, 1) * om(2, 2)
    assert oracle_determinant(edge12, (1, 2), (1, 2)).numerator == om(1, 1) * om(2, 2)


def test_empty_minor_is_one(edge12):
    assert det_acyclic(edge12, (), ()) == CONSTANT_ONE


def test_det_acyclic_rejects_cycles(two_cycle):
    with pytest.raises(CyclicGraphError):
        det_acyclic(two_cycle, (1,), (1,))


def test_size_mismatch(edge12):
    with pytest.raises(ValueError):
        det_rational(edge12, (1,), (1, 2))
    with pytest.raises(ValueError):
        trek_separated(edge12, (1,), ())


def test_two_cycle_rational(two_cycle):
    num, den = det_rational(two_cycle, (1,), (1,))
    expected = RationalExpr(om(1, 1) + lam(2, 1) ** 2 * om(2, 2), (ONE - lam(1, 2) * lam(2, 1)) ** 2)
    assert rat_equal(RationalExpr(num.to_polynomial(), den.to_polynomial()), expected)
    assert den.to_polynomial() == ONE - 2 * lam(1, 2) * lam(2, 1) + lam(1, 2) ** 2 * lam(2, 1) ** 2


def test_two_cycle_denominator_class(two_cycle):
    _, den = det_rational(two_cycle, (1,), (1,))
    cycle = Monomial([lambda_var(1, 2), lambda_var(2, 1)])
    (c,) = [c for c in den.classes if c.monomial == cycle]
    assert (c.sign, c.ud_count, c.coefficient) == (-1, 1, -2)


@given(mixed_dags(4), st.data())
def test_acyclic_denominator_is_one(g, data):
    A, B = data.draw(vertex_lists(g, 2))
    d = bidirected_subdivision(g)
    num, den = det_rational(d, A, B)
    assert den == CONSTANT_ONE
    assert num == det_acyclic(g, A, B)


def test_separation_examples(edge12):
    assert not trek_separated(edge12, (1,), (2,))
    assert trek_separated(mixed(2), (1,), (2,))


def test_expansion_rejects_repeated_monomials():
    m = Monomial([lambda_var(1, 2)])
    with pytest.raises(ValueError):
        DetExpansion((ExpansionClass(m, 1, 0), ExpansionClass(m, -1, 0)))


def test_expansion_records_round_trip(two_cycle):
    _, den = det_rational(two_cycle, (1,), (1,))
    assert DetExpansion.from_records(den.to_records()) == DetExpansion(tuple(den.sorted_classes()))


# -- verification --------------------------------------------------------------


def test_two_cycle_verification(two_cycle):
    for A, B in [((1,), (1,)), ((), ()), ((1,), (2,))]:
        assert verify_positivity(two_cycle, A, B).ok
        assert verify_power_of_two(two_cycle, A, B).ok
    rep = verify_power_of_two(two_cycle, (), ())
    assert rep.classes_checked == 3 and rep.flows_checked == 4


def test_singleton_class_has_no_up_down_cycles(edge12):
    rep = verify_power_of_two(edge12, (1,), (2,))
    assert rep.ok and rep.classes_checked == rep.flows_checked == 1
    assert det_acyclic(edge12, (1,), (2,)).classes[0].ud_count == 0


@settings(max_examples=40)
@given(st.one_of(digraphs(4), mixed_dags(5)), st.data())
def test_positivity_and_power_of_two(g, data):
    A, B = data.draw(vertex_lists(g, 2))
    assert verify_positivity(g, A, B).ok
    assert verify_power_of_two(g, A, B).ok


# -- soundness -----------------------------------------------------------------


@given(mixed_dags(4), st.data())
def test_acyclic_soundness(g, data):
    A, B = data.draw(vertex_lists(g, 3))
    assert det_polynomial(g, A, B) == oracle_determinant(g, A, B).numerator


@settings(max_examples=40)
@given(digraphs(4), st.data())
def test_general_soundness(g, data):
    A, B = data.draw(vertex_lists(g, 2))
    assert rat_equal(det_rational_expr(g, A, B), oracle_determinant(g, A, B))


@settings(max_examples=40)
@given(st.one_of(digraphs(4), mixed_dags(4)), st.data())
def test_zero_consistency(g, data):
    A, B = data.draw(vertex_lists(g, 2))
    num, _ = det_rational(bidirected_subdivision(g), A, B)
    oracle_zero = oracle_determinant(g, A, B).is_zero()
    assert trek_separated(g, A, B) == num.is_zero() == oracle_zero


@given(st.one_of(digraphs(4), mixed_dags(4)), st.data())
def test_transposition_negates_signs(g, data):
    A, B = data.draw(vertex_lists(g, 3))
    if len(A) < 2:
        return
    d = bidirected_subdivision(g)
    swapped = (A[1], A[0]) + A[2:]
    before, _ = det_rational(d, A, B)
    after, _ = det_rational(d, swapped, B)
    flipped = {c.monomial: (-c.sign, c.ud_count) for c in before.classes}
    assert {c.monomial: (c.sign, c.ud_count) for c in after.classes} == flipped


def test_mixed_graph_with_cycle_and_bidirected_edge():
    g = mixed(3, [(1, 2), (2, 1), (2, 3)], [(1, 3)])
    for A, B in [((1,), (3,)), ((1, 2), (2, 3)), ((3,), (3,))]:
        assert rat_equal(det_rational_expr(g, A, B), oracle_determinant(g, A, B))


def test_class_representative_matches_members(figure1):
    A, B = (7,), (8,)
    exp = det_acyclic(figure1, A, B)
    total = sum(1 for _ in enumerate_trek_flows(figure1.directed_part, A, B))
    assert sum(2**c.ud_count for c in exp.classes) == total


def test_result_record_shape(two_cycle):
    rec = result_record(two_cycle, (1,), (1,))
    assert set(rec) == {"acyclic", "is_zero", "numerator_classes", "denominator_classes", "subdivided", "numerator", "denominator"}
    assert rec["acyclic"] is False and rec["is_zero"] is False
    assert Polynomial.from_records(rec["numerator"]) == om(1, 1) + lam(2, 1) ** 2 * om(2, 2)


def test_result_record_pulls_back_mixed_graph():
    g = mixed(2, bidirected=[(1, 2)])
    rec = result_record(g, (1, 2), (1, 2))
    assert rec["subdivided"] is True
    assert Polynomial.from_records(rec["numerator"]) == om(1, 1) * om(2, 2) - om(1, 2) ** 2


@pytest.mark.parametrize("A,B", list(itertools.product(itertools.permutations((1, 2, 3), 2), repeat=2))[:12])
def test_fixed_graph_all_orders(A, B):
    g = mixed(3, [(1, 2), (2, 3), (3, 1)])
    assert rat_equal(det_rational_expr(g, A, B), oracle_determinant(g, A, B))


def _without_squared_bidirected(p):
    return Polynomial(
        {tuple(m): c for m, c in p if not any(v.kind == "omega" and v.i != v.j and e >= 2 for v, e in m.exponents.items())}
    )


@given(mixed_dags(4), st.data())
def test_four_step_rule_drops_exactly_the_squared_bidirected_terms(g, data):
    A, B = data.draw(vertex_lists(g, 3))
    oracle = oracle_determinant(g, A, B).numerator
    four = det_pullback_four_step(g, A, B)
    assert four == _without_squared_bidirected(oracle)
    has_square = _without_squared_bidirected(oracle) != oracle
    assert (four == oracle) == (not has_square)
