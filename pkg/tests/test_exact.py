import numpy as np
import pytest

from ditwave import (
    AccuracyError, DomainError, InitialCondition, PulseSpec, exact_square_packet,
    harmonic_from_free, propagator_quadrature,
)
from ditwave.exact import PropagatorParams, kernel

FREE = lambda t: PropagatorParams("free", t)
HARM = lambda t, w=1.0: PropagatorParams("harmonic", t, w)


@pytest.mark.parametrize("kw", [
    dict(t=0.0), dict(t=-1.0), dict(t=np.nan), dict(kind="lens"),
    dict(kind="harmonic", omega=0.0), dict(kind="harmonic", omega=1.0, t=np.pi),
    dict(kind="harmonic", omega=2.0, t=np.pi + 1e-11),
])
def test_params_validation(kw):
    with pytest.raises(DomainError):
        PropagatorParams(**kw)


def test_harmonic_kernel_tends_to_free():
    x, xp = np.array([0.3, -0.2]), np.array([0.1, 0.4])
    np.testing.assert_allclose(kernel(HARM(0.01, 1e-4), x, xp), kernel(FREE(0.01), x, xp), rtol=1e-9)


def test_short_time_limit():
    # each edge at distance d adds a Fresnel tail of size sqrt(t / 2 pi) / d
    for t in (1e-8, 1e-6, 1e-4):
        tail = np.sqrt(t / (2 * np.pi))
        assert abs(exact_square_packet(0.0, t) - 1) == pytest.approx(4 * tail, rel=1e-2)
        assert abs(exact_square_packet(2.0, t)) <= tail * (1 / 1.5 + 1 / 2.5)


def test_nonpositive_time_rejected():
    with pytest.raises(DomainError):
        exact_square_packet(0.0, 0.0)


def test_center_value_against_quadrature():
    ref = propagator_quadrature(InitialCondition.square(), FREE(0.1), 0.0)
    assert exact_square_packet(0.0, 0.1) == pytest.approx(ref, abs=1e-8)


def test_quadrature_short_time_is_initial_value():
    t = 1e-5
    q = propagator_quadrature(PulseSpec(), FREE(t), 0.0)
    assert abs(q - 1) <= 4.05 * np.sqrt(t / (2 * np.pi))


def test_quadrature_reports_non_convergence():
    with pytest.raises(AccuracyError) as info:
        propagator_quadrature(PulseSpec(), FREE(1e-3), 0.3, tol=1e-15, max_levels=2)
    assert info.value.residual > 0


def test_packet_is_even():
    x = np.linspace(0, 3, 301)
    for t in (1e-4, 1e-3, 0.05, 0.7, 3.0):
        assert np.max(np.abs(exact_square_packet(x, t) - exact_square_packet(-x, t))) <= 1e-12


def test_norm_in_window_at_short_times():
    for t in (1e-4, 5e-4, 1e-3):
        R = 10 + 5 * t
        x = np.linspace(-R, R, 400001)
        assert np.trapezoid(np.abs(exact_square_packet(x, t)) ** 2, x) == pytest.approx(1.0, abs=1e-4)


def test_norm_deficit_follows_the_fresnel_tail():
    # |psi|^2 ~ (2t/pi) sin^2(x/2t) / x^2 far out, so the window |x| <= R
    # misses about 2t/(pi R) of the probability
    for t in (0.01, 0.1, 0.5, 1.0):
        R = 10 + 5 * t
        x = np.linspace(-R, R, 400001)
        deficit = 1 - np.trapezoid(np.abs(exact_square_packet(x, t)) ** 2, x)
        assert deficit == pytest.approx(2 * t / (np.pi * R), rel=0.1)


def test_probe_lattice_against_quadrature():
    x = np.linspace(-2, 2, 21)
    for t in (1e-3, 1e-2, 0.1, 0.5, 1.0):
        ref = propagator_quadrature(PulseSpec(), FREE(t), x)
        assert np.max(np.abs(exact_square_packet(x, t) - ref)) <= 1e-8


def test_quarter_period_is_a_fourier_transform():
    # x_hat(pi/2) = p: |psi(x)| = |int e^{-i x y} psi0(y) dy| / sqrt(2 pi)
    x = np.linspace(-20, 20, 41) + 0.013
    got = np.abs(propagator_quadrature(PulseSpec(), HARM(np.pi / 2), x))
    np.testing.assert_allclose(got, np.abs(2 * np.sin(x / 2) / x) / np.sqrt(2 * np.pi), atol=1e-9)


def test_quadrature_of_callable_with_pieces():
    tri = PulseSpec(0.0, 1.0, "triangular")
    a = propagator_quadrature(tri, FREE(0.05), [0.0, 0.4])
    b = propagator_quadrature((tri, tri.pieces()), FREE(0.05), [0.0, 0.4])
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_harmonic_from_free_small_omega():
    x = np.linspace(-1.5, 1.5, 61)
    np.testing.assert_allclose(harmonic_from_free(x, 0.02, 0.0), exact_square_packet(x, 0.02))
    np.testing.assert_allclose(harmonic_from_free(x, 0.02, 1e-6), exact_square_packet(x, 0.02), atol=1e-9)


def test_harmonic_from_free_at_origin():
    ref = propagator_quadrature(PulseSpec(), HARM(0.1), 0.0)
    assert harmonic_from_free(0.0, 0.1, 1.0) == pytest.approx(ref, abs=1e-7)


@pytest.mark.parametrize("t", [0.1, 1.0, 2.0, 3.0, 4.0])
def test_lens_relation_against_quadrature(t):
    # t = 2, 3 have cos < 0; t = 4 is past the first focus
    x = np.linspace(-2, 2, 17)
    ref = propagator_quadrature(PulseSpec(), HARM(t), x)
    np.testing.assert_allclose(harmonic_from_free(x, t, 1.0), ref, atol=1e-7)


def test_lens_relation_other_frequency():
    x = np.linspace(-1, 1, 9)
    ref = propagator_quadrature(PulseSpec(), HARM(0.3, 2.5), x)
    np.testing.assert_allclose(harmonic_from_free(x, 0.3, 2.5), ref, atol=1e-7)


def test_parity_revival():
    x = np.linspace(-2, 2, 401) + 1e-3
    psi = harmonic_from_free(x, np.pi, 1.0)
    np.testing.assert_allclose(np.abs(psi), PulseSpec()(-x), atol=1e-12)
    assert psi[200] == pytest.approx(-1j)  # one focus passed: phase -pi/2


def test_focal_time_rejected():
    with pytest.raises(DomainError):
        harmonic_from_free(0.0, np.pi / 2, 1.0)
