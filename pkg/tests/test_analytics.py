import math

import mpmath
import numpy as np
import pytest
from scipy import integrate

from noma_as import (AnalyticConfig, EULER_GAMMA, FadingConfig, aia_strong_pdf,
                     euler_gamma, exp_integral_ei, mcg_avg_secondary_rate,
                     prob_h_ge_g, a3_avg_sum_rate, aia_avg_sum_rate,
                     pu_avg_secondary_rate, quadrature_rate,
                     sample_channel_batch, su_avg_secondary_rate)

mpmath.mp.dps = 30


def _cfg(n=2, m=2, k=2, oh=1.0, og=2.0, rho=1e12, b=None, eps=None):
    return AnalyticConfig(n, m, k, oh, og, rho, b, eps)


# --- special functions -------------------------------------------------------

def test_euler_gamma_value():
    assert 0.5772 < euler_gamma() < 0.5773
    assert euler_gamma() == EULER_GAMMA


def test_euler_gamma_harmonic_limit():
    n = 10 ** 7
    harmonic = float(np.sum(1.0 / np.arange(1, n + 1)))
    assert abs(harmonic - math.log(n) - euler_gamma()) < 1e-7


@pytest.mark.parametrize("x", [
    -700.0, -100.0, -40.1, -39.9, -10.0, -2.0, -1.0001, -0.9999, -0.5,
    -1e-3, -1e-8, -1e-100, -1e-300, 1e-300, 1e-8, 0.5, 1.0, 5.0, 10.0,
    39.9, 40.1, 100.0, 700.0,
])
def test_ei_against_mpmath(x):
    got = exp_integral_ei(x)
    ref = float(mpmath.ei(x))
    assert abs(got - ref) <= 1e-12 * max(1.0, abs(ref))


def test_ei_known_value():
    assert exp_integral_ei(-1.0) == pytest.approx(-0.21938393439552026, abs=1e-14)


def test_ei_small_argument_expansion():
    x = 1e-8
    assert exp_integral_ei(-x) - (EULER_GAMMA + math.log(x)) == pytest.approx(0.0, abs=1e-7)


def test_ei_asymptotic_magnitude():
    assert abs(exp_integral_ei(-10.0)) < 5e-6
    assert exp_integral_ei(-10.0) < 0.0


def test_ei_domain_error():
    with pytest.raises(ValueError):
        exp_integral_ei(0.0)


# --- strong-gain-first average sum rate --------------------------------------

def test_a3_rate_single_antenna_hand_value():
    got = a3_avg_sum_rate(_cfg(1, 1, 1, 1.0, 1.0, 1000.0))
    expected = (math.log(1000.0) - EULER_GAMMA + math.log(2.0)) / math.log(2.0)
    assert got.value == pytest.approx(expected, abs=1e-12)
    assert got.terms == 1


def test_a3_rate_independent_of_split():
    a = a3_avg_sum_rate(_cfg(b=0.2))
    b = a3_avg_sum_rate(_cfg(b=0.4))
    assert a.value == b.value


def test_a3_rate_symmetry_under_population_exchange():
    # swapping (NM, omega_h) with (NK, omega_g) leaves the formula unchanged
    a = a3_avg_sum_rate(_cfg(1, 4, 2, 0.7, 3.0, 1e10))
    b = a3_avg_sum_rate(_cfg(1, 2, 4, 3.0, 0.7, 1e10))
    assert a.value == pytest.approx(b.value, rel=1e-12)


def test_a3_rate_vs_quadrature_single_antenna():
    oh, og, rho, b = 1.0, 2.0, 1e12, 0.4
    # density of max(h, g) for one antenna everywhere
    pdf = lambda x: (oh * math.exp(-oh * x) + og * math.exp(-og * x)
                     - (oh + og) * math.exp(-(oh + og) * x))
    numeric = math.log2(1.0 / b) + quadrature_rate(pdf, b, rho)
    closed = a3_avg_sum_rate(_cfg(1, 1, 1, oh, og, rho)).value
    assert closed == pytest.approx(numeric, abs=1e-6)


def test_a3_rate_rejects_oversized_sums():
    with pytest.raises(ValueError):
        a3_avg_sum_rate(_cfg(20, 2, 2))


# --- weak-gain-first density and average sum rate ----------------------------

def test_aia_pdf_reduces_to_max_density_for_single_row():
    cfg = _cfg(1, 3, 2, 1.0, 2.0)
    xs = np.linspace(1e-3, 6.0, 200)
    fh = 3 * 1.0 * np.exp(-xs) * (1 - np.exp(-xs)) ** 2
    Fh = (1 - np.exp(-xs)) ** 3
    fg = 2 * 2.0 * np.exp(-2 * xs) * (1 - np.exp(-2 * xs))
    Fg = (1 - np.exp(-2 * xs)) ** 2
    expected = fh * Fg + fg * Fh
    assert np.max(np.abs(aia_strong_pdf(xs, cfg) - expected)) < 1e-9


def test_aia_pdf_nonnegative_and_normalized():
    for n, m, k in [(1, 1, 1), (2, 2, 2), (3, 2, 1), (4, 2, 2)]:
        cfg = _cfg(n, m, k, 1.0, 2.0)
        xs = np.linspace(0.0, 20.0, 2000)
        assert np.all(aia_strong_pdf(xs, cfg) > -1e-12)
        mass, _ = integrate.quad(lambda x: aia_strong_pdf(x, cfg), 0, np.inf, limit=300)
        assert mass == pytest.approx(1.0, abs=1e-6)


def test_aia_pdf_domain_error():
    with pytest.raises(ValueError):
        aia_strong_pdf(-0.1, _cfg())


def test_aia_pdf_matches_simulated_histogram():
    cfg = _cfg(2, 2, 2, 512000.0, 8.0e6, 1e12)
    fading = FadingConfig(n_bs=2, d1=80.0, d2=200.0)
    h, g = sample_channel_batch(fading, seed=33, start=0, count=1_000_000)
    hn, gn = h.max(axis=2), g.max(axis=2)
    rows = np.minimum(hn, gn).argmax(axis=1)
    t = np.arange(rows.size)
    gamma_s = np.maximum(hn[t, rows], gn[t, rows])
    edges = np.linspace(0.0, 1.2e-5, 49)
    counts, _ = np.histogram(gamma_s, bins=edges)
    centers = 0.5 * (edges[:-1] + edges[1:])
    # integrate the density across each bin (Simpson) and allow 5-sigma
    # Poisson noise plus a tiny absolute floor
    for lo, hi, c in zip(edges[:-1], edges[1:], counts):
        xs = np.linspace(lo, hi, 9)
        p = integrate.simpson(aia_strong_pdf(xs, cfg), x=xs)
        expected = p * gamma_s.size
        tol = 5.0 * math.sqrt(max(expected, 1.0)) + 5.0
        assert abs(c - expected) <= tol, (lo, hi, c, expected)


def test_aia_rate_consistent_with_quadrature():
    for n, m, k, oh, og in [(2, 2, 2, 1.0, 2.0), (1, 2, 2, 1.0, 2.0),
                            (3, 2, 1, 0.5, 2.0)]:
        cfg = _cfg(n, m, k, oh, og, 1e12, b=0.4)
        numeric = math.log2(1.0 / 0.4) + quadrature_rate(
            lambda x: aia_strong_pdf(x, cfg), 0.4, 1e12)
        closed = aia_avg_sum_rate(cfg).value
        assert abs(closed - numeric) <= 1e-3


def test_aia_rate_equals_a3_rate_for_single_row():
    cfg = _cfg(1, 2, 2, 1.0, 2.0, 1e12, b=0.4)
    assert aia_avg_sum_rate(cfg).value == pytest.approx(
        a3_avg_sum_rate(cfg).value, abs=1e-6)


def test_aia_rate_needs_split():
    with pytest.raises(ValueError):
        aia_avg_sum_rate(_cfg(b=None))


def test_composition_cap():
    with pytest.raises(ValueError):
        aia_avg_sum_rate(_cfg(60, 3, 3, b=0.4))


# --- crossing probability -----------------------------------------------------

def test_prob_symmetric_is_exactly_half():
    assert prob_h_ge_g(_cfg(2, 2, 2, 3.7, 3.7)) == 0.5
    assert prob_h_ge_g(_cfg(3, 2, 2, 512000.0, 512000.0)) == 0.5


def test_prob_single_antenna_closed_form():
    # P(h >= g) = omega_g / (omega_h + omega_g) for plain exponentials
    assert prob_h_ge_g(_cfg(1, 1, 1, 1.0, 2.0)) == pytest.approx(2.0 / 3.0, abs=1e-15)


def test_prob_complement_sums_to_one():
    for cfg in [_cfg(2, 2, 2, 512000.0, 8e6), _cfg(4, 2, 2, 1.0, 5.0),
                _cfg(3, 1, 2, 0.3, 11.0)]:
        p = prob_h_ge_g(cfg)
        assert 0.0 <= p <= 1.0
        assert p + (1.0 - p) == 1.0


def test_prob_matches_empirical_frequency():
    fading = FadingConfig(n_bs=2, d1=100.0, d2=160.0)
    cfg = AnalyticConfig.from_fading(fading)
    h, g = sample_channel_batch(fading, seed=17, start=0, count=200_000)
    freq = np.mean(h.max(axis=(1, 2)) >= g.max(axis=(1, 2)))
    p = prob_h_ge_g(cfg)
    se = math.sqrt(p * (1 - p) / 200_000)
    assert abs(freq - p) < 3 * se


# --- QoS-mode average secondary rates ----------------------------------------

def test_secondary_rate_gains_one_bit_per_snr_doubling():
    base = _cfg(4, 2, 2, 512000.0, 8e6, 1e13, eps=31.0)
    doubled = _cfg(4, 2, 2, 512000.0, 8e6, 2e13, eps=31.0)
    for fn in (pu_avg_secondary_rate, su_avg_secondary_rate):
        assert fn(doubled).value - fn(base).value == pytest.approx(1.0, abs=1e-9)


def test_secondary_rate_zero_qos_limit():
    # with no primary floor everything goes to the secondary user: the
    # average approaches E[log2(1 + rho * best-row gain)]
    oh, og, rho = 512000.0, 8e6, 1e13
    cfg = _cfg(4, 2, 2, oh, og, rho, eps=0.0)
    closed = pu_avg_secondary_rate(cfg).value
    pdf = lambda x: 2 * oh * math.exp(-oh * x) * (1 - math.exp(-oh * x))
    numeric = quadrature_rate(pdf, 1.0, rho)
    assert abs(closed - numeric) <= 1e-3


def test_su_equals_pu_in_fully_symmetric_single_row():
    cfg = _cfg(1, 2, 2, 2.0, 2.0, 1e12, eps=3.0)
    assert su_avg_secondary_rate(cfg).value == pu_avg_secondary_rate(cfg).value


def test_secondary_rate_singular_pair_is_continuous():
    # i*omega_h == eps*j*omega_g for (i=1, j=2): removable singularity
    cfg = _cfg(2, 2, 2, 2.0, 1.0, 1e12, eps=1.0)
    val = pu_avg_secondary_rate(cfg).value
    assert math.isfinite(val)
    nearby = pu_avg_secondary_rate(_cfg(2, 2, 2, 2.0 * (1 + 1e-7), 1.0, 1e12, eps=1.0)).value
    assert val == pytest.approx(nearby, rel=1e-5)


def test_pu_su_crossing_with_distance():
    # secondary-first wins while UE1 is the near user, primary-first wins
    # once UE1 moves far away
    def rates(d1):
        cfg = _cfg(4, 2, 2, d1 ** 3, 200.0 ** 3, 1e13, eps=31.0)
        return pu_avg_secondary_rate(cfg).value, su_avg_secondary_rate(cfg).value

    pu_near, su_near = rates(80.0)
    pu_far, su_far = rates(320.0)
    assert su_near > pu_near
    assert pu_far > su_far


def test_mcg_mixture_collapses():
    su_like = _cfg(2, 2, 2, 1e-9, 1.0, 1e12, eps=3.0)    # UE1 gain dominates
    pu_like = _cfg(2, 2, 2, 1.0, 1e-9, 1e12, eps=3.0)    # UE2 gain dominates
    assert mcg_avg_secondary_rate(su_like).value == pytest.approx(
        su_avg_secondary_rate(su_like).value, rel=1e-9)
    assert mcg_avg_secondary_rate(pu_like).value == pytest.approx(
        pu_avg_secondary_rate(pu_like).value, rel=1e-9)


def test_mcg_is_between_pu_and_su():
    cfg = _cfg(4, 2, 2, 150.0 ** 3, 200.0 ** 3, 1e13, eps=31.0)
    lo = min(pu_avg_secondary_rate(cfg).value, su_avg_secondary_rate(cfg).value)
    hi = max(pu_avg_secondary_rate(cfg).value, su_avg_secondary_rate(cfg).value)
    assert lo <= mcg_avg_secondary_rate(cfg).value <= hi


def test_secondary_rate_needs_epsilon():
    with pytest.raises(ValueError):
        pu_avg_secondary_rate(_cfg(eps=None))


# --- quadrature oracle ---------------------------------------------------------

def test_quadrature_exponential_identity():
    om, b, rho = 512000.0, 0.4, 1e13
    pdf = lambda x: om * math.exp(-om * x)
    x0 = om / (b * rho)
    closed = float(-mpmath.e ** x0 * mpmath.ei(-x0) / mpmath.log(2))
    assert quadrature_rate(pdf, b, rho) == pytest.approx(closed, abs=1e-8)


def test_quadrature_concentration_limit():
    # when b*rho/omega is small the mean gain dominates the log argument
    om, b, rho = 1.0, 1e-3, 1.0
    pdf = lambda x: om * math.exp(-om * x)
    got = quadrature_rate(pdf, b, rho)
    assert got == pytest.approx(math.log2(1.0 + b * rho / om), rel=0.01)


def test_quadrature_rejects_zero_density():
    with pytest.raises(ValueError):
        quadrature_rate(lambda x: 0.0, 0.4, 1e12)


# --- cross-cutting invariants ---------------------------------------------------

def test_closed_forms_monotone_in_snr():
    rhos = 10.0 ** np.arange(8, 15)
    for maker, extract in [
        (lambda r: a3_avg_sum_rate(_cfg(2, 2, 2, 512000.0, 8e6, r)), None),
        (lambda r: aia_avg_sum_rate(_cfg(2, 2, 2, 512000.0, 8e6, r, b=0.4)), None),
        (lambda r: pu_avg_secondary_rate(_cfg(4, 2, 2, 512000.0, 8e6, r, eps=31.0)), None),
        (lambda r: su_avg_secondary_rate(_cfg(4, 2, 2, 512000.0, 8e6, r, eps=31.0)), None),
        (lambda r: mcg_avg_secondary_rate(_cfg(4, 2, 2, 512000.0, 8e6, r, eps=31.0)), None),
    ]:
        values = [maker(r).value for r in rhos]
        assert all(b >= a for a, b in zip(values, values[1:])), values


def test_results_reproducible_bit_for_bit():
    cfg = _cfg(3, 2, 2, 512000.0, 8e6, 1e13, b=0.3, eps=7.0)
    assert a3_avg_sum_rate(cfg).value == a3_avg_sum_rate(cfg).value
    assert aia_avg_sum_rate(cfg).value == aia_avg_sum_rate(cfg).value
    assert pu_avg_secondary_rate(cfg).value == pu_avg_secondary_rate(cfg).value
    assert prob_h_ge_g(cfg) == prob_h_ge_g(cfg)


def test_analytic_config_validation():
    with pytest.raises(ValueError):
        AnalyticConfig(0, 2, 2, 1.0, 1.0, 1e12)
    with pytest.raises(ValueError):
        AnalyticConfig(2, 2, 2, -1.0, 1.0, 1e12)
    with pytest.raises(ValueError):
        AnalyticConfig(2, 2, 2, 1.0, 1.0, 1e12, b=1.5)
    with pytest.raises(ValueError):
        AnalyticConfig(2, 2, 2, 1.0, 1.0, 1e12, epsilon=-1.0)
