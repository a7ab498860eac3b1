import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from subdiffinv.errors import DomainError, EmptyCandidates, NonOrthogonalData, ShapeError
from subdiffinv.forward import SourceProfile, solve_forward
from subdiffinv.fraccalc import TimeGrid
from subdiffinv.inverse import (
    changes_sign,
    classify_modes,
    delta,
    hypotheses_basis,
    lower_bound_scan,
    pick_t0,
    sign_criterion,
    solve_inverse,
)
from subdiffinv.mlf import ml_classical, ml_deficit
from subdiffinv.profiles import builtin_profile, omega
from subdiffinv.spectral import dirichlet_laplacian_1d


@pytest.fixture(scope="module")
def example1():
    op = dirichlet_laplacian_1d(8, 64)
    g = builtin_profile("example1", TimeGrid(1.0, 4096), 0.5)
    return op, g


# {{{ determinant


def test_delta_exponential_case():
    g = builtin_profile("const", TimeGrid(1.0, 256))
    r = delta(1.0, 1.0, 0.5, 1.0, g)
    assert r.delta == pytest.approx(1 - math.exp(-1), abs=1e-14)
    assert r.scaled == pytest.approx(0.6321205588, abs=1e-10)


@given(lam=st.floats(0.5, 300), rho=st.sampled_from([0.25, 0.5, 0.75, 1.0]),
       t0=st.floats(0.05, 0.95), c=st.floats(0.1, 10))
def test_delta_constant_profile(lam, rho, t0, c):
    g = SourceProfile(TimeGrid(1.0, 256), np.full(257, c))
    r = delta(lam, rho, t0, 1.0, g)
    assert r.delta == pytest.approx(c * ml_deficit(rho, lam) / lam, rel=1e-12, abs=1e-16)


def test_delta_vanishes_for_example1(example1):
    op, g = example1
    assert abs(delta(1.0, 0.5, 0.5, 1.0, g).delta) <= 1e-6


@pytest.mark.parametrize("t0", [0.0, 1.0, -0.1, 1.5])
def test_delta_rejects_observation_time(t0):
    g = builtin_profile("const", TimeGrid(1.0, 256))
    with pytest.raises(DomainError):
        delta(1.0, 0.5, t0, 1.0, g)


def test_delta_rejects_mismatched_horizon():
    g = builtin_profile("const", TimeGrid(1.0, 256))
    with pytest.raises(DomainError):
        delta(1.0, 0.5, 0.5, 2.0, g)


# }}}


# {{{ partition


def test_constant_profile_has_no_degenerate_modes():
    op = dirichlet_laplacian_1d(32, 256)
    g = builtin_profile("const", TimeGrid(1.0, 512))
    for rho in (0.25, 0.5, 1.0):
        assert classify_modes(op, g, rho, 0.5, 1.0).K0_rho == ()


def test_example1_partition(example1):
    op, g = example1
    part = classify_modes(op, g, 0.5, 0.5, 1.0)
    assert part.K0_rho == (1,)
    assert part.K_rho == tuple(range(2, 9))
    assert min(r.scaled for r in part.records[1:]) >= 0.01
    assert part.near_degenerate == ()


def test_rho_one_lemma_regime():
    op = dirichlet_laplacian_1d(16, 128)
    g = builtin_profile("1+t", TimeGrid(1.0, 512))
    assert classify_modes(op, g, 1.0, 0.6, 1.0).K0_rho == ()


def test_gray_zone_is_flagged(example1):
    op, g = example1
    scaled1 = classify_modes(op, g, 0.5, 0.5, 1.0).records[0].scaled
    # choose tau so mode 1 sits between the threshold and ten times it
    tau = scaled1 / (3.0 * g.sup_norm)
    part = classify_modes(op, g, 0.5, 0.5, 1.0, tau=tau)
    assert part.K0_rho == () and part.near_degenerate == (1,)


def test_tau_must_be_positive(example1):
    op, g = example1
    with pytest.raises(DomainError):
        classify_modes(op, g, 0.5, 0.5, 1.0, tau=0.0)


# }}}


# {{{ inversion


@pytest.mark.parametrize("rho", [0.3, 0.7, 1.0])
def test_constant_profile_recovery(op16, rho):
    g = builtin_profile("const", TimeGrid(1.0, 512))
    fstar = np.random.default_rng(0).normal(size=16)
    psi = fstar / op16.eigenvalues
    res = solve_inverse(op16, g, rho, 0.5, 1.0, psi)
    assert np.max(np.abs(res.f - fstar)) <= 1e-8
    assert res.verdict == "Unique" and res.basis == "theorem"


def test_zero_data_gives_bitwise_zero(op16):
    g = builtin_profile("2+sin(2pi t)", TimeGrid(1.0, 1024))
    res = solve_inverse(op16, g, 0.5, 0.4, 1.0, np.zeros(16))
    assert res.verdict == "Unique"
    assert np.all(res.f == 0.0) and np.all(res.u.u == 0.0)


def test_example1_family(example1):
    op, g = example1
    c1 = math.sqrt(math.pi / 2)
    trivial = solve_inverse(op, g, 0.5, 0.5, 1.0, np.zeros(8))
    assert trivial.verdict == "NonUniqueFamily" and trivial.free_modes == (1,)
    assert not np.any(trivial.f)
    fam = solve_inverse(op, g, 0.5, 0.5, 1.0, np.zeros(8), free_values={1: c1})
    np.testing.assert_array_equal(fam.f, np.r_[c1, np.zeros(7)])
    assert np.max(np.abs(fam.u.u[0] - c1 * omega(g.grid.nodes))) <= 5e-4
    assert fam.basis == "empirical (outside lemma hypotheses)"


def test_nonorthogonal_data_is_rejected(example1):
    op, g = example1
    psi = np.zeros(8)
    psi[0], psi[3] = 1e-2, 1.0
    with pytest.raises(NonOrthogonalData) as info:
        solve_inverse(op, g, 0.5, 0.5, 1.0, psi)
    assert info.value.k == 1 and info.value.psi_k == 1e-2


def test_free_values_only_on_degenerate_modes(example1):
    op, g = example1
    with pytest.raises(DomainError):
        solve_inverse(op, g, 0.5, 0.5, 1.0, np.zeros(8), free_values={2: 1.0})


def test_data_shape(op16):
    g = builtin_profile("const", TimeGrid(1.0, 256))
    with pytest.raises(ShapeError):
        solve_inverse(op16, g, 0.5, 0.5, 1.0, np.zeros(5))


def test_reconstruction_identity(op16):
    g = builtin_profile("2+sin(2pi t)", TimeGrid(1.0, 1024))
    psi = np.random.default_rng(4).normal(size=16) / np.arange(1, 17) ** 3
    res = solve_inverse(op16, g, 0.6, 0.37, 1.0, psi)
    ut0 = res.u.at(0.37)
    assert np.all(np.abs(ut0 - psi) <= 1e-6 * (1 + np.abs(psi)))
    assert res.data_mismatch() <= 1e-6


@given(c=st.floats(-1e3, 1e3), seed=st.integers(0, 1000))
def test_scaling_equivariance(c, seed):
    op = dirichlet_laplacian_1d(8, 64)
    g = builtin_profile("1+t", TimeGrid(1.0, 256))
    psi = np.random.default_rng(seed).normal(size=8)
    a = solve_inverse(op, g, 0.5, 0.5, 1.0, psi).f
    b = solve_inverse(op, g, 0.5, 0.5, 1.0, c * psi).f
    np.testing.assert_allclose(b, c * a, rtol=1e-12, atol=1e-300)


@given(
    coeffs=st.lists(st.floats(-1, 1), min_size=3, max_size=3),
    base=st.floats(0.2, 3.0),
    rho=st.sampled_from([0.25, 0.5, 0.75, 1.0]),
    t0=st.floats(0.1, 0.9),
)
def test_positive_profiles_are_unique(coeffs, base, rho, t0):
    # base + |trigonometric polynomial| stays >= base > 0
    def fn(t):
        return base + np.abs(sum(a * np.cos((j + 1) * np.pi * t) for j, a in enumerate(coeffs)))

    op = dirichlet_laplacian_1d(16, 128)
    g = SourceProfile.from_function(fn, TimeGrid(1.0, 256))
    assert not changes_sign(g)
    res = solve_inverse(op, g, rho, t0, 1.0, np.ones(16))
    assert res.verdict == "Unique"
    assert lower_bound_scan(op, g, rho, t0, 1.0).min > 0


def test_amplification_is_eigenvalue():
    op = dirichlet_laplacian_1d(32, 256)
    g = builtin_profile("const", TimeGrid(1.0, 512))
    psi = np.random.default_rng(2).uniform(0.5, 1.5, 32)
    res = solve_inverse(op, g, 0.5, 0.5, 1.0, psi)
    assert np.max(np.abs(res.amplification - op.eigenvalues)) <= 1e-8
    assert res.amplification_growth == pytest.approx(1.0, abs=1e-10)


def test_result_json(example1):
    op, g = example1
    out = solve_inverse(op, g, 0.5, 0.5, 1.0, np.zeros(8)).to_json()
    assert out["verdict"] == "NonUniqueFamily" and out["K0"] == [1]
    assert len(out["partition_table"]) == 8
    assert all(a is None for a in out["amplification"])


# }}}


# {{{ scans and observation time


def test_constant_scan():
    op = dirichlet_laplacian_1d(64, 512)
    g = builtin_profile("const", TimeGrid(1.0, 512))
    scan = lower_bound_scan(op, g, 0.5, 0.5, 1.0)
    np.testing.assert_allclose(scan.scaled, 1 - ml_classical(0.5, op.eigenvalues), atol=1e-12)
    assert scan.min == pytest.approx(0.5724164238, abs=1e-10)
    assert scan.argmin == 1 and np.all(np.diff(scan.scaled) > 0)
    assert scan.constant == scan.min


def test_example1_scan_minimum(example1):
    op, g = example1
    scan = lower_bound_scan(op, g, 0.5, 0.5, 1.0)
    assert scan.argmin == 1 and scan.min <= 1e-5
    assert scan.constant is None


def test_rho_one_sign_changing_scan(op64):
    g = builtin_profile("t-0.3", TimeGrid(1.0, 2048))
    scan = lower_bound_scan(op64, g, 1.0, 0.65, 1.0)
    assert scan.tail_min(2) > 0.05


def test_pick_t0_sign_criterion():
    g = builtin_profile("t-0.3", TimeGrid(1.0, 2048))
    ranked = pick_t0(g, 1.0, 1.0, [0.1, 0.65])
    assert ranked[0].t0 == 0.65 and ranked[0].acceptable and ranked[0].scan_min > 0
    assert not ranked[1].sign_ok
    assert sign_criterion(g, 1.0, 0.65) and not sign_criterion(g, 1.0, 0.1)


def test_pick_t0_constant_profile():
    g = builtin_profile("const", TimeGrid(1.0, 256))
    ranked = pick_t0(g, 0.5, 1.0, [0.2, 0.5, 0.8])
    assert all(c.acceptable for c in ranked)
    assert [c.scan_min for c in ranked] == sorted((c.scan_min for c in ranked), reverse=True)


def test_pick_t0_example1(example1):
    op, g = example1
    ranked = pick_t0(g, 0.5, 1.0, [0.5, 0.25], op=op)
    by_t0 = {c.t0: c for c in ranked}
    assert by_t0[0.5].degenerate == (1,) and not by_t0[0.5].acceptable
    assert ranked[0].t0 == 0.25 and by_t0[0.25].scan_min > 1e-6


def test_pick_t0_requires_candidates():
    g = builtin_profile("const", TimeGrid(1.0, 256))
    with pytest.raises(EmptyCandidates):
        pick_t0(g, 0.5, 1.0, [])


def test_hypotheses_labels():
    grid = TimeGrid(1.0, 256)
    assert hypotheses_basis(builtin_profile("1+t", grid), 0.5, 0.5, 1.0) == "theorem"
    assert hypotheses_basis(builtin_profile("t-0.3", grid), 1.0, 0.65, 1.0) == "lemma"
    assert hypotheses_basis(builtin_profile("t-0.3", grid), 1.0, 0.1, 1.0).startswith("empirical")
    assert hypotheses_basis(builtin_profile("t-0.3", grid), 0.5, 0.65, 1.0).startswith("empirical")


# }}}
