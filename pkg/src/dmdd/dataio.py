"""Reading, windowing and transforming multivariate recordings.

Files are CSV, one row per frame and one column per observable, with an
optional header row of channel labels. For 3-D marker data, marker ``i``
occupies the three consecutive channels ``3i, 3i+1, 3i+2``.
"""

import csv
import warnings
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Union

import numpy as np

from .embedding import Trajectory
from .errors import (
    EmptyWindowsWarning,
    FormatError,
    ParseError,
    TooFewFrames,
    UnknownChannel,
    WindowConfigError,
)


@dataclass(frozen=True, eq=False)
class Dataset:
    name: str
    trajectory: Trajectory
    channel_labels: tuple

    def __post_init__(self):
        labels = tuple(str(s) for s in self.channel_labels)
        if len(labels) != self.trajectory.dim:
            raise FormatError(
                f"{len(labels)} labels for {self.trajectory.dim} channels in {self.name!r}"
            )
        object.__setattr__(self, "channel_labels", labels)

    @classmethod
    def from_trajectory(cls, name: str, traj: Trajectory, labels=None) -> "Dataset":
        if labels is None:
            labels = [f"ch{i}" for i in range(traj.dim)]
        return cls(name, traj, tuple(labels))


@dataclass(frozen=True, eq=False)
class ExperimentWindow:
    input: Trajectory
    ground_truth: np.ndarray
    offset: int


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def load_csv(path, sample_rate_hz: float = 1.0, name: Optional[str] = None) -> Dataset:
    """Load a frames-as-rows CSV file into a :class:`Dataset`."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh)]
    while rows and not any(c.strip() for c in rows[-1]):
        rows.pop()

    labels = None
    first_data_row = 0
    if rows and not any(_is_number(c) for c in rows[0]):
        labels = [c.strip() for c in rows[0]]
        first_data_row = 1

    width = len(rows[0]) if rows else 0
    values = []
    for i, row in enumerate(rows[first_data_row:], start=first_data_row + 1):
        if len(row) != width:
            raise FormatError(f"{path}: row {i} has {len(row)} columns, expected {width}")
        try:
            values.append([float(c) for c in row])
        except ValueError:
            j = next(j for j, c in enumerate(row) if not _is_number(c))
            raise ParseError(
                f"{path}: non-numeric cell {row[j]!r} at row {i}, column {j + 1}"
            ) from None

    if len(values) < 2:
        raise TooFewFrames(f"{path}: need at least 2 frames, found {len(values)}")
    data = np.array(values).T
    if not np.all(np.isfinite(data)):
        raise ParseError(f"{path}: non-finite values are not supported")
    traj = Trajectory(data, sample_rate_hz)
    stem = name if name is not None else str(path).rsplit("/", 1)[-1].rsplit(".", 1)[0]
    return Dataset.from_trajectory(stem, traj, labels)


def format_float(x: float) -> str:
    return repr(float(x))


def write_matrix_csv(path, values: np.ndarray, labels: Optional[Sequence[str]] = None) -> None:
    """Write an ``m x n`` matrix as ``n`` rows of ``m`` shortest-roundtrip numbers."""
    values = np.atleast_2d(np.asarray(values, dtype=float))
    if hasattr(path, "write"):
        _write_rows(path, values, labels)
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        _write_rows(fh, values, labels)


def _write_rows(fh, values, labels):
    w = csv.writer(fh, lineterminator="\n")
    if labels is not None:
        w.writerow(labels)
    for col in values.T:
        w.writerow([format_float(v) for v in col])


def save_csv(data: Union[Dataset, Trajectory], path, header: bool = True) -> None:
    if isinstance(data, Dataset):
        write_matrix_csv(path, data.trajectory.values, data.channel_labels if header else None)
    else:
        write_matrix_csv(path, data.values)


def window_split(
    ds: Union[Dataset, Trajectory], total_len: int, input_len: int, horizon: int
) -> List[ExperimentWindow]:
    """Cut consecutive, non-overlapping sub-sequences of ``total_len`` frames.

    Each sub-sequence starts with ``input_len`` input frames followed by
    ``horizon`` ground-truth frames. Windows start at frame 0 and a trailing
    remainder shorter than ``total_len`` is dropped.
    """
    traj = ds.trajectory if isinstance(ds, Dataset) else ds
    if min(total_len, input_len, horizon) < 1:
        raise WindowConfigError("window lengths must be positive")
    if input_len + horizon > total_len:
        raise WindowConfigError(
            f"input ({input_len}) + horizon ({horizon}) exceeds window length {total_len}"
        )
    n = traj.frames
    count = n // total_len
    if count == 0:
        warnings.warn(
            f"{n} frames are too few for a single {total_len}-frame window",
            EmptyWindowsWarning,
            stacklevel=2,
        )
    out = []
    for k in range(count):
        start = k * total_len
        split = start + input_len
        out.append(
            ExperimentWindow(
                Trajectory(traj.values[:, start:split], traj.sample_rate_hz),
                traj.values[:, split:split + horizon].copy(),
                start,
            )
        )
    return out


def second_difference(data: Union[Dataset, Trajectory]):
    """Central second difference scaled to units per second squared.

    ``a_k = (x_{k+1} - 2 x_k + x_{k-1}) * f**2`` for the interior frames,
    so the result has two frames fewer than the input.
    """
    traj = data.trajectory if isinstance(data, Dataset) else data
    X = traj.values
    if X.shape[1] < 3:
        raise TooFewFrames(f"second difference needs at least 3 frames, got {X.shape[1]}")
    f = traj.sample_rate_hz
    acc = Trajectory((X[:, 2:] - 2 * X[:, 1:-1] + X[:, :-2]) * f * f, f)
    if isinstance(data, Dataset):
        return Dataset(data.name, acc, data.channel_labels)
    return acc


def _marker_channels(ds: Dataset, marker, coords: int) -> List[int]:
    m = ds.trajectory.dim
    if isinstance(marker, (int, np.integer)):
        if not 0 <= marker < m // coords:
            raise UnknownChannel(f"marker {marker} out of range for {m // coords} markers")
        return list(range(marker * coords, (marker + 1) * coords))
    hits = [
        i for i, lab in enumerate(ds.channel_labels)
        if lab.startswith(marker) and lab[len(marker):len(marker) + 1] in ("_", ".", ":", " ")
    ]
    if len(hits) != coords:
        raise UnknownChannel(f"marker {marker!r} does not match {coords} channels")
    return hits


def select_channels(
    ds: Dataset,
    channels: Optional[Iterable] = None,
    markers: Optional[Iterable] = None,
    coords_per_marker: int = 3,
) -> Dataset:
    """Restrict a dataset to some channels and/or markers.

    ``channels`` are indices or labels. ``markers`` are marker indices or
    marker names (a name ``RHand`` matches labels such as ``RHand_x``). The
    selection keeps the dataset's own channel order.
    """
    picked = set()
    for c in channels or ():
        if isinstance(c, (int, np.integer)):
            if not 0 <= c < ds.trajectory.dim:
                raise UnknownChannel(f"channel {c} out of range")
            picked.add(int(c))
        else:
            try:
                picked.add(ds.channel_labels.index(c))
            except ValueError:
                raise UnknownChannel(f"unknown channel label {c!r}") from None
    for mk in markers or ():
        picked.update(_marker_channels(ds, mk, coords_per_marker))
    if not picked:
        raise UnknownChannel("empty channel selection")
    idx = sorted(picked)
    traj = Trajectory(ds.trajectory.values[idx], ds.trajectory.sample_rate_hz)
    return Dataset(ds.name, traj, tuple(ds.channel_labels[i] for i in idx))
