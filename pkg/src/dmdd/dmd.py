"""Exact dynamic mode decomposition and its delay-embedded variant.

The fit follows the exact DMD recipe on the snapshot pairs
``X = [x_1 ... x_{n-1}]``, ``Y = [x_2 ... x_n]``:

1. reduced SVD ``X = U S V*``
2. projected operator ``A~ = U* Y V S^-1`` and its eigenpairs ``(lam_i, w_i)``
3. modes ``theta_i = Y V S^-1 w_i / lam_i`` for the nonzero ``lam_i`` only
4. amplitudes ``a = Lam^-1 Theta^+ x_2``

States are then evaluated as ``x_k = Re(Theta Lam^(k-1) a)`` for ``k >= 2``,
which reproduces ``Theta Theta^+ x_2`` at ``k = 2``.
"""

import json
import warnings
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from .embedding import Trajectory, hankel_embed, latest_frame
from .errors import (
    ConjugacyWarning,
    DegenerateSpectrum,
    FormatError,
    InputError,
    TooFewSnapshots,
    TooManyDelays,
    UnsupportedIndex,
)
from .linalg import DEFAULT_RANK_TOL, eig_dense, pinv, reduced_svd

MODEL_FORMAT = "dmdd.model/1"


@dataclass(frozen=True)
class FitOptions:
    """Numerical thresholds for :func:`fit`.

    rank_tol
        Relative singular value cutoff for the reduced SVD.
    zero_eig_tol
        Eigenvalues with modulus at or below this are treated as zero and
        dropped together with their modes.
    max_imag_residual
        Relative size of the imaginary part of a predicted state above which a
        :class:`~dmdd.errors.ConjugacyWarning` is issued.
    """

    rank_tol: float = DEFAULT_RANK_TOL
    zero_eig_tol: float = 1e-12
    max_imag_residual: float = 1e-6

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not value >= 0:
                raise ValueError(f"{name} must be non-negative, got {value}")


@dataclass(frozen=True, eq=False)
class DmdModel:
    modes: np.ndarray
    eigenvalues: np.ndarray
    amplitudes: np.ndarray
    n_snapshots: int
    options: FitOptions = field(default_factory=FitOptions)

    @property
    def dim(self) -> int:
        return self.modes.shape[0]

    @property
    def rank(self) -> int:
        return self.eigenvalues.shape[0]


@dataclass(frozen=True, eq=False)
class DelayedDmdModel:
    """A :class:`DmdModel` fitted on the delay embedding of a trajectory."""

    inner: DmdModel
    base_dim: int
    delays: int
    n_frames: int
    sample_rate_hz: float = 1.0
    channel_labels: Optional[tuple] = None

    @property
    def last_input_frame_index(self) -> int:
        return self.n_frames


def _values(data) -> np.ndarray:
    values = getattr(data, "values", data)
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        values = values[None, :]
    return values


def fit(data, options: Optional[FitOptions] = None) -> DmdModel:
    """Fit exact DMD to a trajectory.

    Parameters
    ----------
    data : Trajectory, EmbeddedTrajectory or array_like, shape (dim, n)
        Snapshots as columns, ``n >= 3``.
    options : FitOptions, optional

    Returns
    -------
    DmdModel
        Modes are unit-norm columns; eigenvalues are ordered by descending
        modulus.
    """
    opts = options or FitOptions()
    D = _values(data)
    n = D.shape[1]
    if n < 3:
        raise TooFewSnapshots(f"exact DMD needs at least 3 snapshots, got {n}")
    X, Y = D[:, :-1], D[:, 1:]

    svd = reduced_svd(X, opts.rank_tol)
    YVS = (Y @ svd.V) / svd.singular_values
    S = svd.U.conj().T @ YVS
    eig = eig_dense(S)

    keep = np.abs(eig.eigenvalues) > opts.zero_eig_tol
    if not np.any(keep):
        raise DegenerateSpectrum(
            f"all {eig.eigenvalues.size} eigenvalues are below {opts.zero_eig_tol:g}"
        )
    lam = eig.eigenvalues[keep]
    modes = (YVS @ eig.eigenvectors[:, keep]) / lam
    modes = modes / np.linalg.norm(modes, axis=0)
    amplitudes = (pinv(modes, opts.rank_tol) @ D[:, 1]) / lam
    return DmdModel(modes, lam, amplitudes, n, opts)


def _powers(eigenvalues: np.ndarray, exponents: np.ndarray) -> np.ndarray:
    # polar form so each power is computed directly, not by accumulation
    r = np.abs(eigenvalues)[:, None]
    phi = np.angle(eigenvalues)[:, None]
    p = np.asarray(exponents, dtype=float)[None, :]
    with np.errstate(over="ignore", invalid="ignore"):
        return r ** p * np.exp(1j * phi * p)


def _evaluate(model: DmdModel, ks) -> np.ndarray:
    ks = np.atleast_1d(np.asarray(ks))
    if ks.size and (ks.min() < 2 or not np.all(ks == np.round(ks))):
        raise UnsupportedIndex(
            f"states can only be evaluated at integer frames k >= 2, got {ks.min()}"
        )
    with np.errstate(over="ignore", invalid="ignore"):
        Z = model.modes @ (_powers(model.eigenvalues, ks - 1) * model.amplitudes[:, None])
    real, imag = Z.real, np.abs(Z.imag)
    if real.size:
        bound = model.options.max_imag_residual * (1 + np.abs(real).max(axis=0))
        bad = imag.max(axis=0) > bound
        if np.any(bad):
            warnings.warn(
                f"predicted states at {int(bad.sum())} frame(s) keep an imaginary part "
                f"up to {imag.max():.3g}; the fitted spectrum is not conjugate-closed",
                ConjugacyWarning,
                stacklevel=3,
            )
    return real


def predict_state(model: DmdModel, k: int) -> np.ndarray:
    """Real part of ``Theta Lam^(k-1) a``, the model's state at frame ``k >= 2``."""
    return _evaluate(model, [k])[:, 0]


def reconstruct(model: DmdModel, start: int = 2, stop: Optional[int] = None) -> np.ndarray:
    """States for frames ``start..stop`` inclusive (default: 2..n)."""
    stop = model.n_snapshots if stop is None else stop
    return _evaluate(model, np.arange(start, stop + 1))


def forecast(model: DmdModel, horizon: int) -> np.ndarray:
    """The ``horizon`` states following the last fitted snapshot."""
    if horizon < 1:
        raise InputError(f"horizon must be at least 1, got {horizon}")
    n = model.n_snapshots
    return _evaluate(model, np.arange(n + 1, n + horizon + 1))


def fit_delayed(traj, delays: int, options: Optional[FitOptions] = None) -> DelayedDmdModel:
    """Fit exact DMD on the ``delays``-fold Hankel embedding of ``traj``."""
    if not isinstance(traj, Trajectory):
        traj = Trajectory(traj)
    n = traj.frames
    if delays < 0:
        raise ValueError(f"delay count must be non-negative, got {delays}")
    if delays > n - 3:
        raise TooManyDelays(delays, n - 3)
    inner = fit(hankel_embed(traj, delays), options)
    return DelayedDmdModel(inner, traj.dim, int(delays), n, traj.sample_rate_hz)


def forecast_delayed(
    model: DelayedDmdModel, horizon: int, average_blocks: bool = False
) -> np.ndarray:
    """Forecast the ``horizon`` frames following the fitted trajectory.

    Column ``j`` (0-based) is the estimate of frame ``n + j + 1``. By default
    it is read from the newest block of the corresponding stacked state. With
    ``average_blocks=True`` every one of the ``d + 1`` stacked states that
    contains the frame contributes and the estimates are averaged.
    """
    if horizon < 1:
        raise InputError(f"horizon must be at least 1, got {horizon}")
    m, d, n = model.base_dim, model.delays, model.n_frames
    if not average_blocks:
        stacked = forecast(model.inner, horizon)
        return np.column_stack([latest_frame(s, m, d) for s in stacked.T])
    # frame t sits in block b of embedded column t - b
    first = n + 1 - d
    stacked = _evaluate(model.inner, np.arange(first, n + horizon + 1))
    out = np.zeros((m, horizon))
    for j in range(horizon):
        t = n + 1 + j
        for b in range(d + 1):
            out[:, j] += stacked[b * m:(b + 1) * m, t - b - first]
    return out / (d + 1)


def reconstruct_delayed(model: DelayedDmdModel) -> np.ndarray:
    """Model estimate of original frames ``2..n``, shape ``(m, n - 1)``.

    Frames ``2..d+2`` come from the blocks of embedded column 2; every later
    frame is the newest block of the embedded column that ends on it.
    """
    m, d = model.base_dim, model.delays
    stacked = reconstruct(model.inner)
    head = stacked[:, 0].reshape(d + 1, m).T
    tail = stacked[d * m:, 1:]
    return np.hstack([head, tail])


# -- serialization ---------------------------------------------------------


def _complex_list(z) -> list:
    return [[float(v.real), float(v.imag)] for v in np.asarray(z, dtype=complex).ravel()]


def _complex_array(pairs, name) -> np.ndarray:
    arr = np.asarray(pairs, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise FormatError(f"field {name!r} must be a list of [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def model_to_dict(model) -> dict:
    """JSON-ready description of a fitted model.

    Complex numbers are ``[re, im]`` pairs and ``modes`` is flattened column
    by column. A plain :class:`DmdModel` is written as a zero-delay model.
    """
    if isinstance(model, DmdModel):
        model = DelayedDmdModel(model, model.dim, 0, model.n_snapshots)
    inner = model.inner
    return {
        "format": MODEL_FORMAT,
        "dim": inner.dim,
        "base_dim": model.base_dim,
        "delays": model.delays,
        "n_snapshots": inner.n_snapshots,
        "last_input_frame_index": model.n_frames,
        "sample_rate_hz": model.sample_rate_hz,
        "channel_labels": list(model.channel_labels) if model.channel_labels else None,
        "rank": inner.rank,
        "eigenvalues": _complex_list(inner.eigenvalues),
        "amplitudes": _complex_list(inner.amplitudes),
        "modes": _complex_list(inner.modes.T),
        "options": asdict(inner.options),
    }


def model_from_dict(doc: dict) -> DelayedDmdModel:
    if doc.get("format") != MODEL_FORMAT:
        raise FormatError(f"not a {MODEL_FORMAT} document")
    try:
        dim, rank = int(doc["dim"]), int(doc["rank"])
        lam = _complex_array(doc["eigenvalues"], "eigenvalues")
        amps = _complex_array(doc["amplitudes"], "amplitudes")
        modes = _complex_array(doc["modes"], "modes")
        if lam.size != rank or amps.size != rank or modes.size != dim * rank:
            raise FormatError("model arrays disagree with the declared dim and rank")
        inner = DmdModel(
            modes.reshape(rank, dim).T,
            lam,
            amps,
            int(doc["n_snapshots"]),
            FitOptions(**doc["options"]),
        )
        labels = doc.get("channel_labels")
        model = DelayedDmdModel(
            inner,
            int(doc["base_dim"]),
            int(doc["delays"]),
            int(doc["last_input_frame_index"]),
            float(doc.get("sample_rate_hz", 1.0)),
            tuple(labels) if labels else None,
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"malformed model document: {exc}") from exc
    if model.base_dim * (model.delays + 1) != dim:
        raise FormatError("dim must equal base_dim * (delays + 1)")
    return model


def save_model(model, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model), fh, indent=1)
        fh.write("\n")


def load_model(path) -> DelayedDmdModel:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: invalid JSON ({exc})") from exc
    return model_from_dict(doc)


def with_labels(model: DelayedDmdModel, labels: Sequence[str]) -> DelayedDmdModel:
    return DelayedDmdModel(
        model.inner, model.base_dim, model.delays, model.n_frames,
        model.sample_rate_hz, tuple(labels),
    )
