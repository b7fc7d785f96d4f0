import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypersusy import families, polynomials
from hypersusy.errors import (
    CutoffExceeded,
    IndexViolation,
    NotProportional,
    QuadratureFailure,
    RecurrenceBreakdown,
)
from hypersusy.numerics import derivative, quad
from hypersusy.polynomials import (
    Poly,
    associated_function,
    classical_ratio,
    gram_matrix,
    norm,
    ode_residual,
    poly_divmod,
    poly_eigenfunction,
)

MATRIX = (
    ("const", -2, 0),
    ("linear", -1, 1),
    ("one_minus_s2", -4, 1),
    ("s2_minus_one", -8, 10),
    ("s2", -3, 2),
    ("s2_plus_one", -4, 1),
)


def matrix_families():
    return [families.make_family(k, a, b) for k, a, b in MATRIX]


def lmax_for(fam, cap=6):
    lam = families.cutoff(fam)
    if math.isinf(float(lam)):
        return cap
    return min(cap, int(math.floor(float(lam) - 1.0)))


# --- Poly basics ------------------------------------------------------------

def test_poly_arithmetic():
    p = Poly([1, 2, 3])
    q = Poly([0, 1])
    assert (p + q).coeffs == (1, 3, 3)
    assert (p * q).coeffs == (0, 1, 2, 3)
    assert (p - p).is_zero
    assert p.deriv().coeffs == (2, 6)
    assert p(2) == 17
    assert np.allclose(p.eval_array(np.array([0.0, 2.0])), [1.0, 17.0])


def test_poly_trims_trailing_zeros():
    assert Poly([1, 0, 0]).coeffs == (1,)
    assert Poly([0, 0]).is_zero


def test_poly_divmod_exact():
    num = Poly([Fraction(-1), Fraction(0), Fraction(2)])  # 2s^2 - 1
    den = Poly([Fraction(1), Fraction(1)])  # s + 1
    q, r = poly_divmod(num, den)
    assert (q * den + r).coeffs == num.coeffs


@settings(max_examples=50, deadline=None)
@given(
    a=st.lists(st.integers(min_value=-9, max_value=9), min_size=1, max_size=5),
    b=st.lists(st.integers(min_value=-9, max_value=9), min_size=1, max_size=5),
)
def test_poly_product_evaluates(a, b):
    p, q = Poly([Fraction(c) for c in a]), Poly([Fraction(c) for c in b])
    s = Fraction(3, 7)
    assert (p * q)(s) == p(s) * q(s)


# --- eigenfunction construction ---------------------------------------------

def test_hermite_type_polynomials():
    f = families.make_family("const", -2, 0)
    assert poly_eigenfunction(f, 0).coeffs == (Fraction(1),)
    assert poly_eigenfunction(f, 1).coeffs == (Fraction(0), Fraction(1))
    assert poly_eigenfunction(f, 2).coeffs == (Fraction(-1, 4), Fraction(0), Fraction(1, 2))


def test_ode_residual_exact_zero():
    for fam in matrix_families():
        for level in range(0, lmax_for(fam) + 1):
            p = poly_eigenfunction(fam, level)
            assert p.degree == level
            assert ode_residual(fam, level, p).is_zero


def test_leading_coefficient_normalization():
    f = families.make_family("one_minus_s2", -4, 1)
    for level in range(0, 5):
        p = poly_eigenfunction(f, level)
        assert p.coeffs[-1] == Fraction(1, math.factorial(level))


def test_cutoff_enforced():
    f = families.make_family("s2", -3, 2)  # cutoff 2
    poly_eigenfunction(f, 1)
    with pytest.raises(CutoffExceeded):
        poly_eigenfunction(f, 2)


def test_degenerate_parameters_break_recurrence():
    carrier = families.make_family("linear", 0, 2)  # every eigenvalue is 0
    with pytest.raises(RecurrenceBreakdown):
        poly_eigenfunction(carrier, 1)


def test_float_mode_residual():
    f = families.make_family("const", -2.2, 0.3)
    for level in range(1, 6):
        p = poly_eigenfunction(f, level)
        res = ode_residual(f, level, p)
        assert res.max_abs() <= 1e-12 * max(1.0, p.max_abs())


# --- associated functions ---------------------------------------------------

def test_assoc_top_order_is_kappa_power():
    for fam in matrix_families():
        l = min(3, lmax_for(fam))
        af = associated_function(fam, l, l)
        assert af.poly.coeffs == (Fraction(1),) or af.poly.coeffs == (1.0,)


def test_assoc_derivative_structure():
    f = families.make_family("const", -2, 0)
    af = associated_function(f, 2, 1)
    assert af.poly.coeffs == (Fraction(0), Fraction(1))
    assert associated_function(f, 2, 0).poly == poly_eigenfunction(f, 2)


def test_assoc_index_violation():
    f = families.make_family("const", -2, 0)
    with pytest.raises(IndexViolation):
        associated_function(f, 2, 3)
    with pytest.raises(IndexViolation):
        associated_function(f, 2, -1)


def test_eval_simple_cases():
    f = families.make_family("one_minus_s2", -4, 1)
    v = associated_function(f, 2, 2).eval(0.0)
    assert abs(v.value - 1.0) < 1e-15
    assert abs(v.deriv) < 1e-15
    g = families.make_family("const", -2, 0)
    v = associated_function(g, 1, 0).eval(3.0)
    assert (v.value, v.deriv) == (3.0, 1.0)


def test_eval_derivative_matches_finite_difference():
    rng = np.random.default_rng(5)
    for fam in matrix_families():
        l = min(3, lmax_for(fam))
        for m in range(0, l + 1):
            af = associated_function(fam, l, m)
            for s in families.sample_points(fam, 5, rng):
                fd = derivative(lambda t: np.vectorize(lambda u: af.eval(float(u)).value)(t),
                                float(s), order=1, h0=1e-2)
                an = af.eval(float(s)).deriv
                assert abs(fd - an) <= 1e-6 * (1.0 + abs(an))


def test_values_vectorized_matches_eval():
    f = families.make_family("s2_plus_one", -4, 1)
    af = associated_function(f, 2, 1)
    pts = np.linspace(-2, 2, 7)
    vals = af.values(pts)
    for s, v in zip(pts, vals):
        assert abs(v - af.eval(float(s)).value) < 1e-13


# --- classical cross-check ---------------------------------------------------

def test_classical_ratio_hermite():
    f = families.make_family("const", -2, 0)
    assert abs(classical_ratio(f, 2) - 8.0) < 1e-8
    assert abs(classical_ratio(f, 0) - 1.0) < 1e-12


def test_classical_ratio_laguerre():
    f = families.make_family("linear", -1, 1)
    assert abs(classical_ratio(f, 1) + 1.0) < 1e-10


def test_classical_ratio_all_kinds():
    for fam in matrix_families():
        for level in range(0, min(4, lmax_for(fam)) + 1):
            classical_ratio(fam, level)


def test_classical_ratio_shifted_argument():
    f = families.make_family("const", -2, 1)
    for level in range(0, 5):
        classical_ratio(f, level)


def test_classical_ratio_deep_quadratic_families():
    # the inverse-argument and complex-parameter identifications, up to the
    # deepest level below the cutoff (1 - alpha)/2 = 5
    f = families.make_family("s2", -9, 2)
    g = families.make_family("s2_plus_one", -9, 2)
    for level in range(0, 5):
        classical_ratio(f, level)
        classical_ratio(g, level)


def test_classical_needs_beta_for_s2():
    f = families.make_family("s2", -3, 0)
    with pytest.raises((NotProportional, RecurrenceBreakdown)):
        classical_ratio(f, 1)


def test_not_proportional_detection():
    f = families.make_family("const", -2, 0)
    good = polynomials.classical_value
    try:
        polynomials.classical_value = lambda fam, level, s: good(fam, level, s) + 0.05 * s
        with pytest.raises(NotProportional):
            classical_ratio(f, 2)
    finally:
        polynomials.classical_value = good


# --- norms and Gram matrices --------------------------------------------------

def test_gaussian_ground_norm():
    f = families.make_family("const", -2, 0)
    assert abs(norm(f, 0, 0) - math.pi ** 0.25) < 1e-12


def test_norm_ratio_identity():
    for fam in matrix_families():
        lmax = min(4, lmax_for(fam))
        for l in range(1, lmax + 1):
            for m in range(0, l):
                lhs = norm(fam, l, m + 1)
                lam_gap = float(families.eigenvalue(fam, l)) - float(families.eigenvalue(fam, m))
                rhs = math.sqrt(lam_gap) * norm(fam, l, m)
                assert abs(lhs - rhs) <= 1e-7 * norm(fam, l, m)


def test_top_norm_is_sigma_moment():
    f = families.make_family("linear", -1, 1)
    lhs = norm(f, 2, 2) ** 2
    rhs = quad(lambda s: np.asarray(f.sigma(s)) ** 2 * families.weight(f, s), 0, math.inf).value
    assert abs(lhs - rhs) < 1e-10


def test_gram_orthogonality_gaussian():
    f = families.make_family("const", -2, 0)
    g = gram_matrix(f, 0, 5)
    d = np.sqrt(np.diag(g))
    normalized = np.abs(g / np.outer(d, d) - np.eye(len(d)))
    assert normalized.max() <= 1e-8


def test_gram_orthogonality_finite_cutoff():
    f = families.make_family("s2_minus_one", -8, 10)
    g = gram_matrix(f, 0, 3)
    d = np.sqrt(np.diag(g))
    normalized = np.abs(g / np.outer(d, d) - np.eye(len(d)))
    assert normalized.max() <= 1e-8
    for l in range(0, 4):
        assert abs(g[l, l] - norm(f, l, 0) ** 2) <= 1e-9 * max(1.0, g[l, l])


def test_divergent_weight_raises_quadrature_failure():
    # beta <= -alpha leaves rho non-integrable at the lower endpoint
    f = families.make_family("s2_minus_one", -8, 1)
    with np.errstate(over="ignore"), pytest.raises(QuadratureFailure):
        norm(f, 0, 0)


def test_assoc_json():
    f = families.make_family("const", -2, 0)
    blob = associated_function(f, 2, 1).to_json()
    assert blob["l"] == 2 and blob["m"] == 1
    assert blob["coeffs"] == ["0", "1"]
    assert Poly.from_json(blob["coeffs"]).coeffs == (Fraction(0), Fraction(1))
