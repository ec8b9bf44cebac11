import cmath

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from conftest import alphas, random_disk
from opuc_sumrules import (
    GridTooCoarse,
    InvalidCoefficient,
    MomentSeq,
    NonpositiveWeight,
    NonUnitPoint,
    NotPositiveDefinite,
    NyquistViolation,
    VerblunskySeq,
    WeightGrid,
    bernstein_szego_weight,
    default_grid_size,
    moments_from_verblunsky,
    moments_from_weight,
    szego_eval,
    verblunsky_from_moments,
)
from opuc_sumrules.opuc import log_norm_product, log_phi_star_abs2, log_phi_star_taylor


def phi_coeffs(alpha):
    """Ascending coefficients of Φ_N built by explicit polynomial arithmetic."""
    phi = np.array([1 + 0j])
    for an in alpha:
        star = np.conj(phi[::-1])
        phi = np.concatenate(([0j], phi)) - np.conj(an) * np.concatenate((star, [0j]))
    return phi


def closed_form_weight(r, theta):
    return (1 - r * r) / np.abs(1 - r * np.exp(1j * theta)) ** 2


# szego_eval


def test_szego_eval_empty():
    p = szego_eval([], 1)
    assert (p.phi, p.phi_star, p.degree) == (1, 1, 0)


def test_szego_eval_one_step_by_hand():
    p = szego_eval([0.5], 1)
    assert p.phi == pytest.approx(0.5, abs=1e-15)
    assert p.phi_star == pytest.approx(0.5, abs=1e-15)


@pytest.mark.parametrize("t", [0.0, 0.7, 2.1, -1.3])
def test_szego_eval_free_case(t):
    z = cmath.exp(1j * t)
    p = szego_eval([0, 0, 0], z)
    assert abs(p.phi - z**3) < 1e-15 and p.phi_star == 1


def test_szego_eval_rejects_off_circle_and_bad_alpha():
    with pytest.raises(NonUnitPoint):
        szego_eval([0.1], 1.01)
    with pytest.raises(InvalidCoefficient):
        szego_eval([1.0], 1)
    with pytest.raises(InvalidCoefficient):
        szego_eval([np.nan], 1)


@given(alphas(max_len=24, radius=0.95), st.floats(0, 2 * np.pi))
def test_reflection_property(alpha, t):
    p = szego_eval(alpha, cmath.exp(1j * t))
    assert abs(abs(p.phi) - abs(p.phi_star)) <= 1e-10


@given(alphas(max_len=12), st.floats(0, 2 * np.pi))
def test_recurrence_matches_explicit_polynomial(alpha, t):
    z = cmath.exp(1j * t)
    coeffs = phi_coeffs(alpha)
    phi = np.polyval(coeffs[::-1], z)
    # Φ* has the reversed conjugate coefficients, so its descending list is conj(ascending Φ)
    star = np.polyval(np.conj(coeffs), z)
    p = szego_eval(alpha, z)
    assert abs(p.phi - phi) < 1e-12 and abs(p.phi_star - star) < 1e-12


# weights


def test_weight_of_empty_is_lebesgue():
    w = bernstein_szego_weight([], 64)
    assert np.all(w.w == 1.0) and w.normalization == 1.0


@pytest.mark.parametrize("r", [0.1, 0.5, -0.7, 0.9])
def test_weight_single_real_coefficient_closed_form(r):
    w = bernstein_szego_weight([r], 256)
    np.testing.assert_allclose(w.w, closed_form_weight(r, w.theta), rtol=1e-13)


def test_weight_normalization_half():
    assert abs(bernstein_szego_weight([0.5], 1024).normalization - 1) <= 1e-10


@given(alphas(max_len=40, radius=0.95), st.floats(0, 2 * np.pi))
def test_blaschke_form_matches_direct_recurrence(alpha, t):
    direct = abs(szego_eval(alpha, cmath.exp(1j * t)).phi_star) ** 2
    assert log_phi_star_abs2(alpha, np.array([t]))[0] == pytest.approx(np.log(direct), abs=1e-10)


def test_weight_survives_long_sequences_without_overflow():
    rng = np.random.default_rng(3)
    a = random_disk(rng, 2000, 0.95)
    w = bernstein_szego_weight(a)
    assert np.all(np.isfinite(w.log_w))


@given(alphas(max_len=32, radius=0.95, min_len=1))
def test_positivity(alpha):
    assert bernstein_szego_weight(alpha).w.min() > 0


def test_weight_grid_preconditions():
    with pytest.raises(GridTooCoarse):
        bernstein_szego_weight([0.1] * 4, 16)
    bernstein_szego_weight([0.1] * 4, 32)
    with pytest.raises(GridTooCoarse):
        bernstein_szego_weight([], 8)
    with pytest.raises(NonpositiveWeight):
        WeightGrid.from_values([1.0, 0.0, 1.0])


def test_default_grid_size():
    assert [default_grid_size(n) for n in (0, 1, 2, 3, 64, 65)] == [16, 16, 16, 32, 512, 1024]


def test_szego_identity_on_resolved_grid(rng):
    # zeros of Φ_N approach the circle; a fine grid resolves the aliasing
    for _ in range(20):
        N = int(rng.integers(1, 13))
        a = random_disk(rng, N, 0.5)
        w = bernstein_szego_weight(a, 1 << 16)
        assert abs(np.mean(w.log_w) - log_norm_product(a)) <= 1e-8


def test_trapezoid_error_tracks_zero_modulus():
    a = 0.5 / (np.arange(64) + 2.0)
    rho = np.abs(np.roots(phi_coeffs(a)[::-1])).max()
    errs = []
    for M in (512, 1024, 2048):
        errs.append(abs(np.mean(bernstein_szego_weight(a, M).log_w) - log_norm_product(a)))
    assert errs[0] > rho ** 512 / 1e3
    assert errs[0] > errs[1] > errs[2]


# Taylor coefficients of log Φ*


@given(alphas(max_len=8, radius=0.9, min_len=1))
def test_taylor_matches_mpmath(alpha):
    coeffs = phi_coeffs(alpha)
    star = [complex(x) for x in np.conj(coeffs)[::-1]]  # ascending coefficients of Φ*
    mpmath.mp.dps = 30

    def f(z):
        return mpmath.log(mpmath.polyval(star[::-1], z))

    ref = mpmath.taylor(f, 0, 3)
    got = log_phi_star_taylor(alpha, 3)[-1]
    for k in range(4):
        assert abs(got[k] - complex(ref[k])) < 1e-11


def test_taylor_prefix_rows():
    a = np.array([0.3, -0.2j, 0.1 + 0.1j])
    full = log_phi_star_taylor(a, 3)
    for n in range(4):
        np.testing.assert_allclose(full[n], log_phi_star_taylor(a[:n], 3)[-1], atol=1e-15)


# moments


def test_moments_of_lebesgue():
    c = moments_from_weight(bernstein_szego_weight([], 64), 5).c
    np.testing.assert_allclose(c, [1, 0, 0, 0, 0, 0], atol=1e-15)


def quad_moment(weight, k):
    re = integrate.quad(lambda t: weight(t) * np.cos(k * t), 0, 2 * np.pi, epsabs=1e-13, limit=200)[0]
    im = integrate.quad(lambda t: -weight(t) * np.sin(k * t), 0, 2 * np.pi, epsabs=1e-13, limit=200)[0]
    return complex(re, im) / (2 * np.pi)


def test_first_moment_half_against_quadrature():
    oracle = quad_moment(lambda t: closed_form_weight(0.5, t), 1)
    assert abs(oracle - 0.5) < 1e-10
    c = moments_from_weight(bernstein_szego_weight([0.5], 1024), 3).c
    assert abs(c[1] - oracle) < 1e-10
    assert abs(c[0] - 1) < 1e-10


def test_first_moment_unaffected_by_second_coefficient():
    def weight(t):
        return np.exp(log_norm_product([0, 0.3]) - log_phi_star_abs2([0, 0.3], np.array([t]))[0])

    assert abs(quad_moment(weight, 1)) < 1e-10
    assert abs(moments_from_weight(bernstein_szego_weight([0, 0.3], 256), 3).c[1]) < 1e-12


def test_moments_nyquist():
    w = bernstein_szego_weight([0.1], 32)
    moments_from_weight(w, 15)
    with pytest.raises(NyquistViolation):
        moments_from_weight(w, 16)


def test_exact_moments_match_fft_on_fine_grid(rng):
    a = random_disk(rng, 6, 0.4)
    fft = moments_from_weight(bernstein_szego_weight(a, 4096), 10).c
    np.testing.assert_allclose(moments_from_verblunsky(a, 10).c, fft, atol=1e-12)


def test_toeplitz_of_moments_is_hermitian_positive(rng):
    T = moments_from_verblunsky(random_disk(rng, 5, 0.9), 8).toeplitz()
    np.testing.assert_allclose(T, T.conj().T)
    assert np.linalg.eigvalsh(T).min() > 0


# inverse problem


def test_verblunsky_from_trivial_moments():
    np.testing.assert_array_equal(verblunsky_from_moments(MomentSeq([1, 0, 0, 0])).values, [0, 0, 0])


def test_verblunsky_round_trip_single():
    c = moments_from_weight(bernstein_szego_weight([0.5], 64), 1)
    assert abs(verblunsky_from_moments(c, 1).values[0] - 0.5) <= 1e-8


def test_round_trip_random_16_via_exact_moments(rng):
    a = random_disk(rng, 16, 0.9)
    back = verblunsky_from_moments(moments_from_verblunsky(a, 16), 16).values
    assert np.max(np.abs(back - a)) <= 1e-8


def test_round_trip_random_on_resolved_grid(rng):
    a = random_disk(rng, 8, 0.6)
    back = verblunsky_from_moments(moments_from_weight(bernstein_szego_weight(a, 1 << 14), 8), 8)
    assert np.max(np.abs(back.values - a)) <= 1e-8


@given(alphas(max_len=16, radius=0.5))
def test_exact_round_trip_property(alpha):
    # Levinson amplifies rounding by roughly prod (1+|a|)/(1-|a|); long runs near
    # 0.9 can exceed 1e8, so the worst case is only pinned on this smaller box
    K = len(alpha)
    back = verblunsky_from_moments(moments_from_verblunsky(alpha, K), K).values
    assert np.max(np.abs(back - alpha), initial=0) <= 1e-8


def test_mass_does_not_matter():
    c = moments_from_verblunsky([0.3, 0.2j], 2).c
    a1 = verblunsky_from_moments(MomentSeq(c), 2).values
    a2 = verblunsky_from_moments(MomentSeq(7.5 * c), 2).values
    np.testing.assert_allclose(a1, a2, atol=1e-15)


def test_degenerate_moments():
    with pytest.raises(NotPositiveDefinite):
        verblunsky_from_moments(MomentSeq([1, 1, 1]))  # point mass at z = 1
    with pytest.raises(NotPositiveDefinite):
        verblunsky_from_moments(MomentSeq([0, 0]))
    with pytest.raises(NyquistViolation):
        verblunsky_from_moments(MomentSeq([1, 0]), 3)


def test_verblunsky_seq_is_immutable():
    s = VerblunskySeq([0.1, 0.2])
    with pytest.raises(ValueError):
        s.values[0] = 0.3
    assert len(s.truncate(1)) == 1
