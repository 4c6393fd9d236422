"""Model generators, propagation, steady states, and the maps between models."""

import math

import numpy as np
import pytest

from liosym import (
    CoefficientVector,
    DegenerateKernelError,
    ModelParams,
    TransformSequence,
    apply_sequence,
    build_generator,
    evolve,
    expectation_invariance_check,
    fock_projector,
    form_invariance,
    map_cl_to_hpz,
    map_kl_to_cl,
    model_coefficients,
    model_generator,
    momentum,
    number,
    position,
    stability_abscissa,
    steady_state,
    ten_generators,
    thermal_b,
    thermal_state,
    vacuum_projector,
)


def test_model_coefficients_kl():
    c = model_coefficients(ModelParams("KL", 1.0, 0.1, 1.0))
    assert c == CoefficientVector(2.0, 0.0, 0.0, 0.1, -0.2, 0.0, 0.0)


def test_model_coefficients_cl_and_hpz():
    c = model_coefficients(ModelParams("CL", 1.0, 0.1, 1.0))
    assert c == CoefficientVector(2.0, 0.0, -0.1, 0.1, -0.2, -0.2, 0.0)
    c = model_coefficients(ModelParams("HPZ", 1.0, 0.1, 1.0, 0.3))
    # d enters g2 directly, with no gamma prefactor
    assert c == CoefficientVector(2.0, 0.0, -0.1, 0.1, -0.2, -0.2, -0.3)


def test_params_validation():
    with pytest.raises(ValueError, match="unknown model"):
        ModelParams("XY", 1.0, 0.1, 1.0)
    with pytest.raises(ValueError, match="omega0"):
        ModelParams("KL", 0.0, 0.1, 1.0)
    with pytest.raises(ValueError, match="gamma"):
        ModelParams("KL", 1.0, -0.1, 1.0)
    with pytest.raises(ValueError, match="must be positive"):
        ModelParams("KL", 1.0, 0.1, 0.0)
    with pytest.raises(ValueError, match="no diffusion"):
        ModelParams("KL", 1.0, 0.1, 1.0, 0.3)
    with pytest.raises(ValueError, match="no diffusion"):
        ModelParams("CL", 1.0, 0.1, 1.0, 0.3)


def test_thermal_b():
    with pytest.raises(ValueError):
        thermal_b(1.0, -1.0)
    assert thermal_b(1.0, 0.0) == 0.5
    # coth(ln 3 / 2) = 2 exactly
    assert abs(thermal_b(1.0, 1.0 / math.log(3.0)) - 1.0) < 1e-14
    assert abs(thermal_b(1.0, 100.0) - 100.0) < 0.01


def test_evolve_input_validation():
    n = 6
    K = model_generator(ModelParams("KL", 1.0, 0.4, 1.0), n)
    rho0 = vacuum_projector(n)
    with pytest.raises(ValueError, match="nonempty"):
        evolve(K, rho0, [])
    with pytest.raises(ValueError, match="nondecreasing"):
        evolve(K, rho0, [0.0, 2.0, 1.0])
    with pytest.raises(ValueError, match="nondecreasing"):
        evolve(K, rho0, [-1.0, 0.0])
    with pytest.raises(ValueError, match="1-d"):
        evolve(K, rho0, [[0.0, 1.0]])
    with pytest.raises(ValueError, match="shape"):
        evolve(K, vacuum_projector(n + 1), [0.0, 1.0])


def test_evolve_at_t0_returns_the_initial_state():
    n = 8
    K = model_generator(ModelParams("CL", 1.0, 0.4, 1.0), n)
    rho0 = fock_projector(1, n)
    traj = evolve(K, rho0, [0.0])
    assert np.abs(traj.states[0] - rho0).max() == 0.0
    assert traj.moments["n"][0] == pytest.approx(1.0, abs=1e-12)


def test_evolve_semigroup_split():
    n = 12
    K = model_generator(ModelParams("KL", 1.0, 0.4, 0.8), n)
    rho0 = fock_projector(1, n)
    traj = evolve(K, rho0, [0.0, 1.0, 2.0])
    resumed = evolve(K, traj.states[1], [0.0, 1.0])
    assert np.abs(resumed.states[1] - traj.states[2]).max() < 1e-12


def test_evolve_relaxes_to_the_thermal_state():
    n = 20
    p = ModelParams("KL", 1.0, 0.5, 0.8)
    K = model_generator(p, n)
    traj = evolve(K, fock_projector(1, n), [0.0, 60.0])
    rho = traj.states[-1]
    lam = (2 * p.b - 1) / (2 * p.b + 1)
    pops = np.diag(rho).real
    target = (1 - lam) * lam ** np.arange(n)
    assert np.abs(pops - target).max() < 1e-6
    assert np.abs(rho - np.diag(np.diag(rho))).max() < 1e-8
    assert np.abs(rho - steady_state(K)).max() < 1e-6


def test_evolve_warns_when_truncation_leaks():
    # cutoff 8 cannot hold the b = 1 thermal tail over gamma*t = 20
    n = 8
    K = model_generator(ModelParams("KL", 1.0, 0.4, 1.0), n)
    with pytest.warns(UserWarning, match="truncation leakage"):
        traj = evolve(K, vacuum_projector(n), [0.0, 50.0])
    assert traj.max_trace_violation > 1e-8


def test_steady_state_kl_is_the_gibbs_state():
    n = 30
    K = model_generator(ModelParams("KL", 1.0, 0.4, 1.0), n)
    rho, info = steady_state(K, return_info=True)
    lam = 1.0 / 3.0
    pops = np.diag(rho).real
    target = (1 - lam) * lam ** np.arange(n)
    assert np.abs(pops - target).max() < 1e-8
    assert info["residual"] < 1e-10
    assert abs(info["eigenvalue"]) < 1e-8
    assert info["min_eig"] > -1e-12


def test_steady_state_moments():
    n = 30
    gens = ten_generators(n)
    x2_op = position(n) @ position(n)
    p2_op = momentum(n) @ momentum(n)
    for p, want_x2, want_p2 in [
        (ModelParams("KL", 1.0, 0.4, 1.0), 1.0, 1.0),
        (ModelParams("CL", 1.0, 0.4, 1.0), 1.0, 1.0),
        (ModelParams("HPZ", 1.0, 0.4, 1.0, 0.5), 1.25, 1.0),
    ]:
        rho = steady_state(model_generator(p, n, gens))
        assert abs(np.trace(x2_op @ rho).real - want_x2) < 1e-8, p.model
        assert abs(np.trace(p2_op @ rho).real - want_p2) < 1e-8, p.model


def test_steady_state_rejects_a_degenerate_kernel():
    # pure rotation: every Fock projector is stationary
    n = 6
    K = build_generator(CoefficientVector(2, 0, 0, 0, 0, 0, 0),
                        ten_generators(n), n)
    with pytest.raises(DegenerateKernelError, match="dimensional"):
        steady_state(K)


def test_stability_abscissa():
    n = 20
    gens = ten_generators(n)
    for p in [
        ModelParams("KL", 1.0, 0.4, 0.9),
        ModelParams("CL", 1.0, 0.4, 0.9),
        ModelParams("HPZ", 1.0, 0.4, 0.9, 0.1),
    ]:
        assert stability_abscissa(model_generator(p, n, gens)) < 1e-6, p.model
    # d comparable to gamma: the truncated shear block turns unstable,
    # a cutoff artifact that grows with n rather than shrinking
    bad = ModelParams("HPZ", 1.0, 0.4, 1.0, 0.5)
    assert stability_abscissa(model_generator(bad, n, gens)) > 1e-3


def test_form_invariance_thermal():
    p = ModelParams("KL", 1.0, 0.4, 1.0)
    new, seq = form_invariance("thermal", p, math.log(1.5))
    assert new.b == pytest.approx(1.5, abs=1e-14)
    assert (new.model, new.omega0, new.gamma) == ("KL", 1.0, 0.4)
    got = apply_sequence(seq, model_coefficients(p))
    assert np.allclose(got, model_coefficients(new), atol=1e-12)

    # on HPZ the diffusion coefficient picks up the same factor
    p = ModelParams("HPZ", 1.0, 0.4, 1.0, 0.5)
    new, seq = form_invariance("thermal", p, math.log(1.5))
    assert new.b == pytest.approx(1.5, abs=1e-14)
    assert new.d == pytest.approx(0.75, abs=1e-14)
    got = apply_sequence(seq, model_coefficients(p))
    assert np.allclose(got, model_coefficients(new), atol=1e-12)


def test_form_invariance_translate():
    p = ModelParams("CL", 1.0, 0.4, 1.0)
    new, seq = form_invariance("translate", p, 1.0)
    assert new.b == pytest.approx(1.5, abs=1e-14)
    got = apply_sequence(seq, model_coefficients(p))
    assert np.allclose(got, model_coefficients(new), atol=1e-12)
    with pytest.raises(ValueError, match="CL only"):
        form_invariance("translate", ModelParams("KL", 1.0, 0.4, 1.0), 1.0)


def test_form_invariance_hpz():
    p = ModelParams("HPZ", 1.0, 0.4, 1.0, 0.5)
    new, seq = form_invariance("hpz", p, (math.log(2.0), 0.5))
    assert new.b == pytest.approx(2.25, abs=1e-14)
    assert new.d / (2 * new.omega0) == pytest.approx(0.25, abs=1e-14)
    got = apply_sequence(seq, model_coefficients(p))
    assert np.allclose(got, model_coefficients(new), atol=1e-12)
    with pytest.raises(ValueError, match="HPZ only"):
        form_invariance("hpz", ModelParams("CL", 1.0, 0.4, 1.0),
                        (0.1, 0.1))


def test_form_invariance_unknown_kind():
    with pytest.raises(ValueError, match="unknown invariance"):
        form_invariance("squeeze", ModelParams("KL", 1.0, 0.4, 1.0), 0.1)


def test_map_kl_to_cl():
    p = ModelParams("KL", 1.0, 0.6, 1.0)
    new, seq = map_kl_to_cl(p)
    ch = math.sqrt(1.09)
    assert new.model == "CL"
    assert new.omega0 == pytest.approx(ch, abs=1e-14)
    assert new.b == pytest.approx(1.0 / ch, abs=1e-14)
    assert new.gamma == p.gamma
    got = apply_sequence(seq, model_coefficients(p))
    assert np.allclose(got, model_coefficients(new), atol=1e-12)
    with pytest.raises(ValueError, match="expects a KL"):
        map_kl_to_cl(new)


def test_map_kl_to_cl_weak_damping_limit():
    p = ModelParams("KL", 1.0, 1e-12, 1.0)
    new, _ = map_kl_to_cl(p)
    assert abs(new.omega0 - 1.0) < 1e-12
    assert abs(new.b - 1.0) < 1e-12
    assert new.gamma == p.gamma


def test_map_cl_to_hpz():
    p = ModelParams("CL", 1.0, 0.4, 1.0)
    new, seq = map_cl_to_hpz(p, 0.5)
    assert new.model == "HPZ"
    assert new.b == pytest.approx(1.25, abs=1e-14)
    assert new.d == pytest.approx(-1.0, abs=1e-14)
    got = apply_sequence(seq, model_coefficients(p))
    assert np.allclose(got, model_coefficients(new), atol=1e-12)
    with pytest.raises(ValueError, match="expects a CL"):
        map_cl_to_hpz(ModelParams("KL", 1.0, 0.4, 1.0), 0.5)


def test_map_cl_to_hpz_warns_outside_the_positivity_bound():
    # bound at b = 1 is sqrt(3); the map itself still goes through
    p = ModelParams("CL", 1.0, 0.4, 1.0)
    with pytest.warns(UserWarning, match="positivity bound"):
        new, _ = map_cl_to_hpz(p, 1.8)
    assert new.d == pytest.approx(-3.6, abs=1e-14)


def test_expectation_invariance_for_unitary_steps():
    n = 14
    rho = thermal_state(1.0, n)
    o = number(n)
    for name in ("iL0", "O0"):
        before, after = expectation_invariance_check(
            TransformSequence([(name, 0.4)]), o, rho)
        assert abs(after - before) < 1e-9, name


def test_expectation_changes_under_a_conserving_step():
    n = 20
    rho = thermal_state(1.0, n)
    seq = TransformSequence([("L1+", 0.4)])
    x2 = position(n) @ position(n)
    before, after = expectation_invariance_check(seq, x2, rho)
    assert abs(after - before) > 0.1
    # the number operator happens to be blind to this shear
    before, after = expectation_invariance_check(seq, number(n), rho)
    assert abs(after - before) < 1e-9
