import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mmkit import spectral
from mmkit.errors import DisconnectedSpaceError, InvalidArgumentError
from mmkit.space import MMSpace, gen_cycle, gen_gauss_interval

from conftest import planar_space


def test_two_point_operator(two_point):
    L = spectral.assemble_laplacian(two_point)
    f = np.array([1.0, 0.0])
    assert np.allclose(L @ f, [2.0, -2.0])
    assert np.allclose(L @ np.ones(2), 0.0)


def test_two_point_eigenvalues(two_point):
    s = spectral.eigenpairs(two_point, 1)
    assert np.allclose(s.eigenvalues, [0.0, 4.0])


def test_eigenpairs_rejects_large_m(two_point):
    with pytest.raises(InvalidArgumentError):
        spectral.eigenpairs(two_point, 2)


def test_disconnected_space_named_components():
    d = np.array([[0.0, 1, 2, 3], [1, 0, 1, 2], [2, 1, 0, 1], [3, 2, 1, 0]])
    sp = MMSpace(n=4, dist=d, measure=np.full(4, 0.25), edges=((0, 1, 1.0), (2, 3, 1.0)))
    with pytest.raises(DisconnectedSpaceError) as exc:
        spectral.assemble_laplacian(sp)
    assert [0, 1] in exc.value.components and [2, 3] in exc.value.components


def test_cycle_laplacian_reproduces_cosine():
    c = gen_cycle(256, 2 * math.pi)
    theta = 2 * math.pi * np.arange(256) / 256
    f = np.cos(theta)
    L = spectral.assemble_laplacian(c)
    assert np.max(np.abs(L @ f - f)) < 1e-3


def test_cycle_spectrum_fourier_modes():
    c = gen_cycle(256, 2 * math.pi)
    vals = spectral.eigenpairs(c, 4).eigenvalues
    assert np.allclose(vals, [0, 1, 1, 4, 4], atol=1e-2)


def test_gauss_spectrum_is_ornstein_uhlenbeck():
    g = gen_gauss_interval(400, 1.0, 5.0)
    vals = spectral.eigenpairs(g, 3).eigenvalues
    for k in range(1, 4):
        assert vals[k] == pytest.approx(k, rel=0.02)


def test_spectrum_mu_orthonormal():
    rng = np.random.default_rng(5)
    sp = planar_space(rng, 8)
    s = spectral.eigenpairs(sp, 7)
    gram = s.eigenfunctions @ np.diag(sp.measure) @ s.eigenfunctions.T
    assert np.allclose(gram, np.eye(8), atol=1e-8)
    assert np.all(np.diff(s.eigenvalues) >= -1e-9)
    # eigenfunction 0 is constant up to sign
    assert np.ptp(s.eigenfunctions[0]) < 1e-8


def test_rayleigh_at_eigenfunction(two_point):
    s = spectral.eigenpairs(two_point, 1)
    assert spectral.rayleigh(two_point, s.eigenfunctions[1]) == pytest.approx(4.0, abs=1e-9)
    assert spectral.rayleigh(two_point, np.ones(2)) == pytest.approx(0.0, abs=1e-12)
    assert spectral.rayleigh(two_point, np.array([1.0, -1.0])) == pytest.approx(4.0)


def test_rayleigh_rejects_zero(two_point):
    with pytest.raises(InvalidArgumentError):
        spectral.rayleigh(two_point, np.zeros(2))


@given(st.integers(0, 2**31 - 1))
@settings(max_examples=25, deadline=None)
def test_rayleigh_minmax_on_mean_zero(seed):
    """Rayleigh quotient of any mu-mean-zero function dominates lambda_1."""
    rng = np.random.default_rng(seed)
    sp = planar_space(rng, 6)
    f = rng.normal(size=6)
    f -= spectral.mu_inner(sp, f, np.ones(6))
    if spectral.mu_norm2(sp, f) < 1e-9:
        return
    lam1 = spectral.eigenpairs(sp, 1).eigenvalues[1]
    assert spectral.rayleigh(sp, f) >= lam1 - 1e-9


@given(st.integers(0, 2**31 - 1))
@settings(max_examples=25, deadline=None)
def test_self_adjointness(seed):
    rng = np.random.default_rng(seed)
    sp = planar_space(rng, 7)
    L = spectral.assemble_laplacian(sp)
    f, g = rng.normal(size=7), rng.normal(size=7)
    assert spectral.mu_inner(sp, L @ f, g) == pytest.approx(
        spectral.mu_inner(sp, f, L @ g), abs=1e-9
    )


def test_heat_identity_and_ergodic_limit(two_point):
    f = np.array([3.0, -1.0])
    assert np.allclose(spectral.heat_apply(two_point, f, 0.0).values, f)
    far = spectral.heat_apply(two_point, f, 50.0).values
    assert np.allclose(far, spectral.mu_inner(two_point, f, np.ones(2)), atol=1e-9)


def test_heat_semigroup_law_and_conservation():
    rng = np.random.default_rng(9)
    sp = planar_space(rng, 9)
    f = rng.normal(size=9)
    one = np.ones(9)
    a = spectral.heat_apply(sp, spectral.heat_apply(sp, f, 0.3).values, 0.2).values
    b = spectral.heat_apply(sp, f, 0.5).values
    assert np.allclose(a, b, atol=1e-9)
    assert spectral.mu_inner(sp, b, one) == pytest.approx(spectral.mu_inner(sp, f, one), abs=1e-9)
    # contraction into the initial range
    assert b.min() >= f.min() - 1e-9 and b.max() <= f.max() + 1e-9


def test_heat_rejects_negative_time(two_point):
    with pytest.raises(InvalidArgumentError):
        spectral.heat_apply(two_point, np.zeros(2), -0.1)


def test_grad_l1_conventions(two_point):
    assert np.allclose(spectral.grad_l1(two_point, np.zeros(2)), 0.0)
    g = spectral.grad_l1(two_point, np.array([0.0, 1.0]))
    assert np.allclose(g, [2.0, 2.0])


def test_grad_l1_cycle_calibration():
    """On the fine cycle the halved gradient of sin matches |cos| <= 1."""
    c = gen_cycle(256, 2 * math.pi)
    theta = 2 * math.pi * np.arange(256) / 256
    g = spectral.grad_l1(c, np.sin(theta))
    assert np.max(g) / 2.0 == pytest.approx(1.0, rel=0.05)


def test_eigenvalue_convergence_second_order():
    errs = []
    for n in (64, 128, 256):
        lam1 = spectral.eigenpairs(gen_cycle(n, 2 * math.pi), 1).eigenvalues[1]
        errs.append(abs(lam1 - 1.0))
    assert errs[0] / errs[1] >= 3.0
    assert errs[1] / errs[2] >= 3.0


def test_bakry_ledoux_on_cycle():
    c = gen_cycle(256, 2 * math.pi)
    theta = 2 * math.pi * np.arange(256) / 256
    rep = spectral.check_bakry_ledoux(c, np.sin(theta), 0.1, K=0.0)
    assert rep.verdict == "pass"
    assert rep.ratio >= -1e-2
    assert rep.provenance["gradient"] == "edge-sum-halved"


def test_bakry_ledoux_t_zero(two_point):
    rep = spectral.check_bakry_ledoux(two_point, np.array([1.0, -1.0]), 0.0)
    assert rep.lhs == pytest.approx(0.0)


def test_bakry_ledoux_rejects_positive_curvature(two_point):
    with pytest.raises(InvalidArgumentError):
        spectral.bakry_ledoux_c(0.1, K=1.0)


def test_ledoux_l1_on_models():
    c = gen_cycle(256, 2 * math.pi)
    theta = 2 * math.pi * np.arange(256) / 256
    smoothed = spectral.heat_apply(c, (np.cos(theta) > 0).astype(float), 0.02).values
    rep = spectral.check_ledoux_l1(c, smoothed, 0.01)
    assert rep.verdict == "pass"
    trivial = spectral.check_ledoux_l1(c, np.ones(256), 0.3)
    assert trivial.lhs == pytest.approx(0.0, abs=1e-12)
