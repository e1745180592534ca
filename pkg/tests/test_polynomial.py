import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import lam, mixed, mixed_dags, om
from trekdet.graphs import VariableId, lambda_var, omega_var
from trekdet.polynomial import (
    ONE,
    ZERO,
    Monomial,
    Polynomial,
    PullbackError,
    RationalExpr,
    canonical_string,
    poly_add,
    poly_mul,
    poly_neg,
    rat_equal,
    series_expand,
    subdivision_pullback,
    subdivision_pullback_exact,
)

VARS = [lambda_var(1, 2), lambda_var(2, 1), lambda_var(2, 3), omega_var(1, 1), omega_var(1, 2), omega_var(2, 2)]


@st.composite
def polynomials(draw, max_terms=4):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        mono = Monomial({v: draw(st.integers(0, 2)) for v in draw(st.lists(st.sampled_from(VARS), max_size=3))})
        terms[tuple(mono)] = terms.get(tuple(mono), 0) + draw(st.integers(-5, 5))
    return Polynomial(terms)


def star_lam(s, v):
    return Polynomial.var(VariableId("lambda", s, v))


def star_om(s):
    return Polynomial.var(omega_var(s, s))


# -- ring arithmetic -----------------------------------------------------------


def test_mul_of_variables():
    assert poly_mul(om(1, 1), lam(1, 2)) == Polynomial.from_monomial(Monomial([omega_var(1, 1), lambda_var(1, 2)]))


@given(polynomials())
def test_additive_inverse(p):
    assert poly_add(p, poly_neg(p)).is_zero()


def test_square_of_cycle_factor():
    f = ONE - lam(1, 2) * lam(2, 1)
    expected = ONE - 2 * lam(1, 2) * lam(2, 1) + lam(1, 2) ** 2 * lam(2, 1) ** 2
    assert poly_mul(f, f) == expected
    assert canonical_string(f * f) == "1 - 2*l_1_2*l_2_1 + l_1_2^2*l_2_1^2"


@given(polynomials(), polynomials(), polynomials())
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p + q == q + p
    assert p * q == q * p
    assert p * (q + r) == p * q + p * r
    assert p * ONE == p and p + ZERO == p


@given(polynomials())
def test_no_zero_coefficients_stored(p):
    assert all(c != 0 for _, c in p)
    assert all(e > 0 for m, _ in p for e in m.exponents.values())


def test_large_coefficients_are_exact():
    p = Polynomial.constant(2**62) * Polynomial.constant(2**62)
    assert p.constant_term() == 2**124


def test_power_and_hash():
    p = ONE + lam(1, 2)
    assert p**3 == p * p * p
    assert hash(p * p) == hash(p**2)


# -- rendering -----------------------------------------------------------------


def test_canonical_string_examples():
    assert canonical_string(ZERO) == "0"
    assert canonical_string(om(1, 1) * lam(1, 2)) == "w_1_1*l_1_2"
    assert canonical_string(ONE - 2 * lam(1, 2) * lam(2, 1)) == "1 - 2*l_1_2*l_2_1"


def test_canonical_string_negative_leading_and_constants():
    assert canonical_string(-lam(1, 2) + 3) == "3 - l_1_2"
    assert canonical_string(Polynomial.constant(-1)) == "-1"


@given(polynomials(), polynomials())
def test_canonical_string_injective(p, q):
    assert (canonical_string(p) == canonical_string(q)) == (p == q)


@given(polynomials())
def test_records_round_trip(p):
    assert Polynomial.from_records(p.to_records()) == p


# -- rational expressions ------------------------------------------------------


def test_rat_equal_examples():
    x = lam(1, 2)
    p, q = om(1, 1) + x, ONE + om(2, 2)
    assert rat_equal(RationalExpr(p, ONE), RationalExpr(p * q, q))
    assert rat_equal(RationalExpr(ONE, ONE - x), RationalExpr(ONE + x, ONE - x * x))
    assert not rat_equal(RationalExpr(ONE, ONE), RationalExpr(ZERO, ONE))


def test_zero_denominator_rejected():
    with pytest.raises(ZeroDivisionError):
        RationalExpr(ONE, ZERO)


@given(polynomials(), polynomials(), polynomials())
def test_rat_equal_is_unchanged_by_common_factors(p, q, r):
    q = q * q + 1 if q.is_zero() else q
    r = r + 7 if r.is_zero() else r
    assert rat_equal(RationalExpr(p, q), RationalExpr(p * r, q * r))


def test_rational_arithmetic():
    x = lam(1, 2)
    a = RationalExpr(ONE, ONE - x)
    b = RationalExpr(x, ONE - x)
    assert rat_equal(a - b, RationalExpr(ONE, ONE))
    assert rat_equal(a * RationalExpr(ONE - x, ONE), RationalExpr(ONE, ONE))


def test_series_expand_geometric():
    x = lam(1, 2)
    s = series_expand(RationalExpr(ONE, ONE - x), 4)
    assert s == ONE + x + x**2 + x**3 + x**4


def test_series_grading_ignores_omega():
    s = series_expand(RationalExpr(om(1, 1) ** 3, ONE - lam(1, 2)), 1)
    assert s == om(1, 1) ** 3 * (ONE + lam(1, 2))


# -- subdivision pullback ------------------------------------------------------


def test_four_step_examples():
    g = mixed(2, bidirected=[(1, 2)])
    s = (1, 2)
    assert subdivision_pullback(star_lam(s, 1) * star_om(s) * star_lam(s, 2), g) == om(1, 2)
    assert subdivision_pullback(star_lam(s, 1) ** 2 * star_om(s), g).is_zero()
    assert subdivision_pullback(om(1, 1), g) == om(1, 1)


def test_pullback_rejects_foreign_variables():
    g = mixed(2, bidirected=[(1, 2)])
    with pytest.raises(PullbackError):
        subdivision_pullback(lam(2, 1), g)
    with pytest.raises(PullbackError):
        subdivision_pullback_exact(om(3, 3), g)


def test_exact_pullback_of_subdivided_covariance():
    # on the subdivision, sigma_11 = w_1_1 + w_s * l_s1^2 and sigma_12 = w_s * l_s1 * l_s2
    g = mixed(2, bidirected=[(1, 2)])
    s = (1, 2)
    s11 = om(1, 1) + star_om(s) * star_lam(s, 1) ** 2
    s12 = star_om(s) * star_lam(s, 1) * star_lam(s, 2)
    assert subdivision_pullback_exact(s11, g) == om(1, 1)
    assert subdivision_pullback_exact(s12, g) == om(1, 2)


def test_four_step_loses_squared_bidirected_terms():
    # det of the full 2x2 covariance of 1 <-> 2 is w_1_1*w_2_2 - w_1_2^2
    g = mixed(2, bidirected=[(1, 2)])
    s = (1, 2)
    s11 = om(1, 1) + star_om(s) * star_lam(s, 1) ** 2
    s22 = om(2, 2) + star_om(s) * star_lam(s, 2) ** 2
    s12 = star_om(s) * star_lam(s, 1) * star_lam(s, 2)
    det = s11 * s22 - s12 * s12
    truth = om(1, 1) * om(2, 2) - om(1, 2) ** 2
    assert subdivision_pullback_exact(det, g) == truth
    assert subdivision_pullback(det, g) == om(1, 1) * om(2, 2)


@given(mixed_dags(4))
def test_exact_pullback_inverts_subdivision_on_covariance(g):
    from trekdet.graphs import bidirected_subdivision
    from trekdet.oracle import sigma_matrix

    sub = bidirected_subdivision(g)
    sub_graph = type(g)(sub.vertices, sub.edges)
    big, small = sigma_matrix(sub_graph), sigma_matrix(g)
    for i in g.vertices:
        for j in g.vertices:
            pulled = subdivision_pullback_exact(big.entry(i, j).numerator, g)
            assert pulled == small.entry(i, j).numerator
