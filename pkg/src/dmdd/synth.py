"""Synthetic trajectories with known dynamics.

Three signal families are available, each with an exact reference to check
fitted models against:

``linear_system``
    ``x_{k+1} = A x_k`` (plus optional process noise); reference spectrum
    ``eig(A)``.
``sinusoid_mixture``
    ``y_k = sum_j A_j sin(w_j (k - 1) / f + phi_j)`` per channel (plus
    observation noise); reference is the same sum at any frame.
``observed_rotation``
    first coordinate of a planar rotation by ``w / f`` per frame; the hidden
    2-D state is returned too.

Noise is ``noise_std * standard_normal`` drawn from
``numpy.random.default_rng(seed)`` (PCG64 bit generator, ziggurat normals),
so a spec and its seed determine a trajectory bit for bit.
"""

import json
from dataclasses import dataclass, field
from typing import Callable, Sequence, Tuple

import numpy as np

from .embedding import Trajectory
from .errors import AliasError, DimensionMismatch, InputError

KINDS = ("linear_system", "sinusoid_mixture", "observed_rotation")


def _rng(seed):
    return np.random.default_rng(seed)


def gen_linear(
    A,
    x1,
    n: int,
    noise_std: float = 0.0,
    seed: int = 0,
    sample_rate_hz: float = 1.0,
) -> Tuple[Trajectory, np.ndarray]:
    """Iterate ``x_{k+1} = A x_k + noise`` for ``n`` frames.

    Returns the trajectory and the eigenvalues of ``A``.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    x = np.asarray(x1, dtype=float).ravel()
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] != x.size:
        raise DimensionMismatch(f"generator {A.shape} does not act on a state of size {x.size}")
    X = np.empty((x.size, n))
    X[:, 0] = x
    rng = _rng(seed) if noise_std > 0 else None
    for k in range(1, n):
        X[:, k] = A @ X[:, k - 1]
        if rng is not None:
            X[:, k] += noise_std * rng.standard_normal(x.size)
    return Trajectory(X, sample_rate_hz), np.linalg.eigvals(A)


def _channels(components) -> list:
    comps = [list(c) for c in components]
    if comps and np.ndim(comps[0][0]) == 0:
        comps = [comps]
    out = []
    for ch in comps:
        arr = np.asarray(ch, dtype=float).reshape(-1, 3)
        out.append(arr)
    return out


def _check_nyquist(omegas, f_hz):
    for w in np.ravel(omegas):
        if not abs(w) < np.pi * f_hz:
            raise AliasError(
                f"angular frequency {w} rad/s is not below the Nyquist limit {np.pi * f_hz:g}"
            )


def gen_sinusoids(
    components,
    f_hz: float,
    n: int,
    noise_std: float = 0.0,
    seed: int = 0,
) -> Tuple[Trajectory, Callable[[Sequence[int]], np.ndarray]]:
    """Sum of sinusoids sampled at ``f_hz``.

    ``components`` is a list of ``(amplitude, omega, phase)`` triples with
    ``omega`` in rad/s, giving a single channel, or a list of such lists,
    one per channel.

    Returns the trajectory and ``oracle(frames)``, which evaluates the clean
    signal at 1-based frame indices (any, including past ``n``) as an
    ``m x len(frames)`` array.
    """
    chans = _channels(components)
    for ch in chans:
        _check_nyquist(ch[:, 1], f_hz)

    def oracle(frames) -> np.ndarray:
        t = (np.asarray(frames, dtype=float) - 1) / f_hz
        rows = []
        for ch in chans:
            amp, w, ph = ch[:, 0:1], ch[:, 1:2], ch[:, 2:3]
            rows.append(np.sum(amp * np.sin(w * t[None, :] + ph), axis=0))
        return np.array(rows).reshape(len(chans), t.size)

    Y = oracle(np.arange(1, n + 1))
    if noise_std > 0:
        Y = Y + noise_std * _rng(seed).standard_normal(Y.shape)
    return Trajectory(Y, f_hz), oracle


def rotation_matrix(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


def gen_observed_rotation(
    omega: float,
    f_hz: float,
    n: int,
    z1=(1.0, 0.0),
    noise_std: float = 0.0,
    seed: int = 0,
) -> Tuple[Trajectory, np.ndarray]:
    """Scalar observation of a hidden planar rotation.

    The hidden state turns by ``omega / f_hz`` radians per frame; only its
    first coordinate is observed. Returns the observed trajectory and the
    ``2 x n`` hidden state sequence.
    """
    _check_nyquist([omega], f_hz)
    theta = omega / f_hz
    k = np.arange(n)
    c, s = np.cos(theta * k), np.sin(theta * k)
    z1 = np.asarray(z1, dtype=float)
    # closed form R^k z1, free of accumulated rounding
    Z = np.vstack([c * z1[0] - s * z1[1], s * z1[0] + c * z1[1]])
    y = Z[0:1].copy()
    if noise_std > 0:
        y += noise_std * _rng(seed).standard_normal(y.shape)
    return Trajectory(y, f_hz), Z


@dataclass(frozen=True)
class SyntheticSpec:
    """Serializable recipe for one synthetic trajectory.

    ``params`` by kind:

    * ``linear_system``: ``A`` (nested list), ``x1``, optional ``sample_rate_hz``
    * ``sinusoid_mixture``: ``components`` (triples, or per-channel lists of
      triples) and ``sample_rate_hz``
    * ``observed_rotation``: ``omega``, ``sample_rate_hz``, optional ``z1``
    """

    kind: str
    params: dict = field(default_factory=dict)
    frames: int = 100
    noise_std: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown synthetic kind {self.kind!r}; expected one of {KINDS}")
        if self.frames < 3:
            raise InputError(f"synthetic trajectories need at least 3 frames, got {self.frames}")
        if self.noise_std < 0:
            raise InputError("noise_std must be non-negative")

    def to_dict(self) -> dict:
        return {
            "frames": self.frames,
            "kind": self.kind,
            "noise_std": self.noise_std,
            "params": self.params,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "SyntheticSpec":
        try:
            return cls(
                kind=doc["kind"],
                params=dict(doc.get("params", {})),
                frames=int(doc.get("frames", 100)),
                noise_std=float(doc.get("noise_std", 0.0)),
                seed=int(doc.get("seed", 0)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"invalid synthetic spec: {exc}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "SyntheticSpec":
        return cls.from_dict(json.loads(text))


def generate(spec: SyntheticSpec, horizon: int = 0) -> Tuple[Trajectory, np.ndarray]:
    """Build the trajectory of ``spec`` and its ``horizon``-frame continuation.

    The continuation is the noise-free evolution of the generator past the
    last frame. For ``linear_system`` it starts from the last generated
    state, so it is the best possible forecast also under process noise.
    """
    p = spec.params
    try:
        if spec.kind == "linear_system":
            f = float(p.get("sample_rate_hz", 1.0))
            traj, _ = gen_linear(p["A"], p["x1"], spec.frames, spec.noise_std, spec.seed, f)
            A = np.atleast_2d(np.asarray(p["A"], dtype=float))
            cont = np.empty((traj.dim, horizon))
            x = traj.values[:, -1]
            for j in range(horizon):
                x = A @ x
                cont[:, j] = x
        elif spec.kind == "sinusoid_mixture":
            traj, oracle = gen_sinusoids(
                p["components"], float(p["sample_rate_hz"]), spec.frames,
                spec.noise_std, spec.seed,
            )
            cont = oracle(np.arange(spec.frames + 1, spec.frames + horizon + 1))
        else:
            omega, f = float(p["omega"]), float(p["sample_rate_hz"])
            z1 = p.get("z1", (1.0, 0.0))
            traj, _ = gen_observed_rotation(
                omega, f, spec.frames + horizon, z1, 0.0, spec.seed
            )
            clean = traj.values
            traj, _ = gen_observed_rotation(omega, f, spec.frames, z1, spec.noise_std, spec.seed)
            cont = clean[:, spec.frames:]
    except KeyError as exc:
        raise InputError(f"{spec.kind} spec is missing parameter {exc}") from None
    return traj, np.asarray(cont).reshape(traj.dim, horizon)


def load_spec(path) -> SyntheticSpec:
    with open(path, encoding="utf-8") as fh:
        try:
            return SyntheticSpec.from_dict(json.load(fh))
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid JSON ({exc})") from exc


def quasi_periodic_spec(
    channels: int = 3,
    frames: int = 100,
    n_freqs: int = 8,
    decay: float = 0.7,
    f_hz: float = 50.0,
    band_hz=(0.3, 6.0),
    noise_std: float = 0.0,
    seed: int = 0,
) -> SyntheticSpec:
    """Multichannel quasi-periodic ``sinusoid_mixture`` recipe.

    All channels share ``n_freqs`` frequencies drawn uniformly from
    ``band_hz``; amplitudes fall off geometrically by ``decay`` per
    frequency and phases are channel specific, loosely imitating the
    harmonic content of joint trajectories. The draw uses ``seed``, which is
    also the noise seed of the returned spec.
    """
    rng = _rng(seed)
    freqs = np.sort(rng.uniform(band_hz[0], band_hz[1], n_freqs))
    comps = []
    for _ in range(channels):
        phase = rng.uniform(0, 2 * np.pi, n_freqs)
        amp = decay ** np.arange(n_freqs) * rng.uniform(0.5, 1.0, n_freqs)
        comps.append([[float(a), float(2 * np.pi * f), float(p)]
                      for a, f, p in zip(amp, freqs, phase)])
    return SyntheticSpec(
        "sinusoid_mixture",
        {"components": comps, "sample_rate_hz": f_hz},
        frames,
        noise_std,
        seed,
    )
