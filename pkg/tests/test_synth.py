import numpy as np
import pytest

from dmdd import fit_delayed, forecast_delayed
from dmdd.errors import AliasError, DegenerateSpectrum, DimensionMismatch, InputError
from dmdd.synth import (
    SyntheticSpec,
    gen_linear,
    gen_observed_rotation,
    gen_sinusoids,
    generate,
    quasi_periodic_spec,
)


def test_zero_generator():
    traj, eigs = gen_linear(np.zeros((2, 2)), [1.0, 2.0], 5)
    np.testing.assert_array_equal(traj.values, [[1, 0, 0, 0, 0], [2, 0, 0, 0, 0]])
    np.testing.assert_array_equal(eigs, [0, 0])


def test_identity_generator_is_constant():
    traj, _ = gen_linear(np.eye(3), [1.0, -2.0, 0.5], 7)
    np.testing.assert_array_equal(traj.values, np.tile([[1.0], [-2.0], [0.5]], 7))


def test_diag_generator_powers():
    traj, eigs = gen_linear(np.diag([0.9, 0.5]), [1.0, 1.0], 30)
    k = np.arange(30)
    assert np.max(np.abs(traj.values - np.vstack([0.9 ** k, 0.5 ** k]))) <= 1e-12
    np.testing.assert_array_equal(sorted(eigs.real), [0.5, 0.9])


def test_linear_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        gen_linear(np.eye(2), [1.0, 2.0, 3.0], 4)


def test_constant_sinusoid():
    traj, oracle = gen_sinusoids([(1.0, 0.0, np.pi / 2)], 50, 10)
    np.testing.assert_allclose(traj.values, 1, atol=1e-15)
    np.testing.assert_allclose(oracle([100, 1000]), 1, atol=1e-15)


def test_quarter_period_sinusoid():
    f = 8.0
    traj, _ = gen_sinusoids([(1.0, np.pi * f / 2, 0.0)], f, 8)
    np.testing.assert_allclose(traj.values[0], [0, 1, 0, -1, 0, 1, 0, -1], atol=1e-12)


def test_nyquist():
    with pytest.raises(AliasError):
        gen_sinusoids([(1.0, np.pi * 50, 0.0)], 50, 10)
    with pytest.raises(AliasError):
        gen_observed_rotation(200.0, 50, 10)


def test_sinusoid_mixture_recovered_by_delayed_fit():
    comps = [(1.0, 3.0, 0.2), (0.5, 11.0, -1.0), (0.25, 23.0, 2.0)]
    traj, _ = gen_sinusoids(comps, 50, 100)
    lam = fit_delayed(traj, 10).inner.eigenvalues
    expected = np.exp(1j * np.array([w / 50 for _, w, _ in comps]))
    for e in np.concatenate([expected, expected.conj()]):
        assert np.min(np.abs(lam - e)) <= 1e-8
    np.testing.assert_allclose(np.abs(lam), 1, atol=1e-8)


def test_multichannel_sinusoids():
    traj, oracle = gen_sinusoids([[(1.0, 2.0, 0.0)], [(2.0, 3.0, 0.5), (1.0, 1.0, 0.0)]], 10, 20)
    assert traj.dim == 2
    np.testing.assert_array_equal(oracle(np.arange(1, 21)), traj.values)


def test_rotation_trivial_cases():
    traj, Z = gen_observed_rotation(0.0, 10, 6)
    np.testing.assert_array_equal(traj.values, np.ones((1, 6)))
    f = 4.0
    traj, Z = gen_observed_rotation(np.pi * f / 2, f, 8)
    np.testing.assert_allclose(traj.values[0], [1, 0, -1, 0, 1, 0, -1, 0], atol=1e-12)
    assert Z.shape == (2, 8)


def test_rotation_needs_delays():
    f, w, n = 50.0, 7.0, 60
    traj, _ = gen_observed_rotation(w, f, n)
    truth, _ = gen_observed_rotation(w, f, n + 20)
    gt = truth.values[:, n:]
    err1 = np.mean((forecast_delayed(fit_delayed(traj, 1), 20) - gt) ** 2)
    assert err1 <= 1e-8
    try:
        err0 = np.mean((forecast_delayed(fit_delayed(traj, 0), 20) - gt) ** 2)
    except DegenerateSpectrum:
        err0 = np.inf
    assert err0 > 1e-8


def test_rotation_delay_map_is_linear():
    traj, _ = gen_observed_rotation(5.0, 50.0, 80, z1=(0.3, -1.2))
    y = traj.values[0]
    lhs = np.column_stack([y[1:-1], y[:-2]])
    coef, *_ = np.linalg.lstsq(lhs, y[2:], rcond=None)
    assert np.max(np.abs(lhs @ coef - y[2:])) <= 1e-10


@pytest.mark.parametrize("spec", [
    SyntheticSpec("linear_system", {"A": [[0.9, 0.1], [0.0, 0.8]], "x1": [1, 1]}, 30, 0.01, 3),
    SyntheticSpec("sinusoid_mixture", {"components": [[1, 3, 0]], "sample_rate_hz": 50}, 40, 0.1, 5),
    SyntheticSpec("observed_rotation", {"omega": 4.0, "sample_rate_hz": 50}, 40, 0.05, 9),
    quasi_periodic_spec(noise_std=1e-3, seed=4),
])
def test_determinism_and_json(spec):
    a, ca = generate(spec, 10)
    b, cb = generate(SyntheticSpec.from_json(spec.to_json()), 10)
    assert a.values.tobytes() == b.values.tobytes()
    assert ca.tobytes() == cb.tobytes()
    assert ca.shape == (a.dim, 10)


def test_noise_free_continuations():
    spec = SyntheticSpec("linear_system", {"A": [[0.5]], "x1": [1.0]}, 4)
    traj, cont = generate(spec, 3)
    np.testing.assert_allclose(cont, [[0.5 ** 4, 0.5 ** 5, 0.5 ** 6]], rtol=1e-15)
    spec = SyntheticSpec("observed_rotation", {"omega": np.pi * 2, "sample_rate_hz": 4}, 5)
    _, cont = generate(spec, 3)
    np.testing.assert_allclose(cont, [[0, -1, 0]], atol=1e-12)


def test_invalid_specs():
    with pytest.raises(InputError):
        SyntheticSpec("chaos")
    with pytest.raises(InputError):
        SyntheticSpec("linear_system", frames=2)
    with pytest.raises(InputError):
        generate(SyntheticSpec("observed_rotation", {"omega": 1.0}))
