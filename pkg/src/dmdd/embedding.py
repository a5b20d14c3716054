"""Trajectories and their delay (Hankel) embedding.

A trajectory is stored as an ``m x n`` array whose column ``j`` is the
snapshot at frame ``j`` (frames are numbered from 1 in the docs, from 0 in
code). Embedding with ``d`` delays stacks ``d + 1`` shifted copies::

    [ x_1      ...  x_{n-d}   ]
    [ x_2      ...  x_{n-d+1} ]
    [  :              :       ]
    [ x_{d+1}  ...  x_n       ]

so the bottom block of every column is its newest frame.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, TooManyDelays


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Real multivariate time series, observables x frames."""

    values: np.ndarray
    sample_rate_hz: float = 1.0

    def __post_init__(self):
        values = _frozen(self.values)
        if values.ndim == 1:
            values = _frozen(values[None, :])
        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
            raise DimensionMismatch(f"trajectory values must be m x n, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("trajectory contains non-finite entries")
        if not self.sample_rate_hz > 0:
            raise ValueError(f"sample rate must be positive, got {self.sample_rate_hz}")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "sample_rate_hz", float(self.sample_rate_hz))

    @property
    def dim(self) -> int:
        return self.values.shape[0]

    @property
    def frames(self) -> int:
        return self.values.shape[1]

    def head(self, frames: int) -> "Trajectory":
        return Trajectory(self.values[:, :frames], self.sample_rate_hz)


@dataclass(frozen=True, eq=False)
class EmbeddedTrajectory:
    values: np.ndarray
    base_dim: int
    delays: int
    sample_rate_hz: float = 1.0

    @property
    def dim(self) -> int:
        return self.values.shape[0]

    @property
    def frames(self) -> int:
        return self.values.shape[1]


def max_delays(frames: int) -> int:
    """Largest delay count that leaves at least two embedded columns."""
    return frames - 2


def hankel_embed(traj, delays: int) -> EmbeddedTrajectory:
    """Stack ``delays + 1`` shifted copies of ``traj``.

    Parameters
    ----------
    traj : Trajectory or array_like, shape (m, n)
    delays : int
        Number of delays ``d``, ``0 <= d <= n - 2``.

    Returns
    -------
    EmbeddedTrajectory
        Values of shape ``((d + 1) * m, n - d)``. Entries are copies; block
        ``b`` of column ``j`` is frame ``j + b``.
    """
    if not isinstance(traj, Trajectory):
        traj = Trajectory(traj)
    X = traj.values
    m, n = X.shape
    d = int(delays)
    if d < 0:
        raise ValueError(f"delay count must be non-negative, got {delays}")
    if d > max_delays(n):
        raise TooManyDelays(d, max_delays(n))
    cols = n - d
    H = np.empty(((d + 1) * m, cols))
    for b in range(d + 1):
        H[b * m:(b + 1) * m] = X[:, b:b + cols]
    H.setflags(write=False)
    return EmbeddedTrajectory(H, m, d, traj.sample_rate_hz)


def extract_block(state, block_index: int, m: int) -> np.ndarray:
    """Return rows ``block_index * m`` to ``block_index * m + m - 1`` of a stacked state."""
    state = np.asarray(state)
    if state.ndim != 1 or m < 1 or state.shape[0] % m:
        raise DimensionMismatch(
            f"stacked state of length {state.shape} is not a multiple of block size {m}"
        )
    blocks = state.shape[0] // m
    if not 0 <= block_index < blocks:
        raise DimensionMismatch(f"block {block_index} out of range for {blocks} blocks")
    return state[block_index * m:(block_index + 1) * m].copy()


def latest_frame(state, m: int, d: int) -> np.ndarray:
    """Newest frame (bottom block) of a stacked state with ``d`` delays."""
    state = np.asarray(state)
    if state.ndim != 1 or state.shape[0] != (d + 1) * m:
        raise DimensionMismatch(
            f"expected stacked state of length {(d + 1) * m}, got {state.shape}"
        )
    return extract_block(state, d, m)
