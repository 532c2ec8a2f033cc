"""Multi-view dataset ingestion, validation, normalization, and bias augmentation.

A dataset is a list of per-view feature matrices (features x instances) over the
same set of instances, optionally with ground-truth cluster labels.  Views are
stored dense, float64, and read-only once constructed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "DataError",
    "MultiViewDataset",
    "AugmentedViews",
    "load_dataset",
    "normalize_views",
    "augment",
]


class DataError(ValueError):
    """Raised when a dataset file or matrix violates the input contract."""


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class MultiViewDataset:
    """Feature matrices of one instance set observed through several views.

    Parameters
    ----------
    views : sequence of ndarray
        View ``v`` has shape ``(D_v, N)``: one row per feature, one column per
        instance.  All views must agree on ``N`` and contain only finite values.
    labels : ndarray, optional
        Length-``N`` integer cluster ids, 0-based and covering a contiguous
        range (every id in ``[0, max]`` occurs at least once).
    names : sequence of str, optional
        One identifier per view, for logs and reports.
    """

    views: tuple[np.ndarray, ...]
    labels: np.ndarray | None = None
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        views = tuple(np.ascontiguousarray(v, dtype=np.float64) for v in self.views)
        if len(views) == 0:
            raise DataError("dataset needs at least one view")
        for i, v in enumerate(views):
            if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
                raise DataError(
                    f"view {i} must be a non-empty 2-d matrix, got shape {v.shape}"
                )
        n = views[0].shape[1]
        for i, v in enumerate(views):
            if v.shape[1] != n:
                raise DataError(
                    f"column count mismatch: view 0 has {n} instances, "
                    f"view {i} has {v.shape[1]}"
                )
            if not np.all(np.isfinite(v)):
                raise DataError(f"view {i} contains non-finite entries")
        object.__setattr__(self, "views", tuple(_freeze(v) for v in views))

        if self.labels is not None:
            labels = np.asarray(self.labels)
            if labels.ndim != 1 or labels.shape[0] != n:
                raise DataError(
                    f"labels must be a length-{n} vector, got shape {labels.shape}"
                )
            if not np.issubdtype(labels.dtype, np.integer):
                if not np.all(labels == np.floor(labels)):
                    raise DataError("labels must be integers")
            labels = labels.astype(np.int64)
            if labels.min() < 0:
                raise DataError("labels must be non-negative")
            present = np.unique(labels)
            if present.size != labels.max() + 1:
                raise DataError("labels must cover a contiguous range starting at 0")
            object.__setattr__(self, "labels", _freeze(labels))

        if self.names is not None:
            names = tuple(str(s) for s in self.names)
            if len(names) != len(views):
                raise DataError(
                    f"got {len(names)} view names for {len(views)} views"
                )
            object.__setattr__(self, "names", names)

    @property
    def n_views(self) -> int:
        return len(self.views)

    @property
    def n_instances(self) -> int:
        return self.views[0].shape[1]

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(v.shape[0] for v in self.views)


@dataclass(frozen=True)
class AugmentedViews:
    """Views with a constant all-ones feature appended as the last row.

    The constant feature lets a multiplicative model across views express every
    lower-order interaction (including purely linear terms) through the weight
    rows paired with it.
    """

    z_views: tuple[np.ndarray, ...]

    def __post_init__(self):
        z_views = tuple(np.ascontiguousarray(z, dtype=np.float64) for z in self.z_views)
        if len(z_views) == 0:
            raise DataError("need at least one augmented view")
        n = z_views[0].shape[1]
        for i, z in enumerate(z_views):
            if z.ndim != 2 or z.shape[0] < 2 or z.shape[1] != n:
                raise DataError(f"augmented view {i} has inconsistent shape {z.shape}")
            if not np.all(z[-1] == 1.0):
                raise DataError(f"augmented view {i}: last row must be all ones")
            if not np.all(np.isfinite(z)):
                raise DataError(f"augmented view {i} contains non-finite entries")
        object.__setattr__(self, "z_views", tuple(_freeze(z) for z in z_views))

    @property
    def n_views(self) -> int:
        return len(self.z_views)

    @property
    def n_instances(self) -> int:
        return self.z_views[0].shape[1]


def _read_matrix(path: Path) -> np.ndarray:
    """Parse a delimited text matrix: one feature per line, comma- or
    whitespace-separated numeric fields, one field per instance."""
    if not path.is_file():
        raise DataError(f"matrix file not found: {path}")
    rows: list[list[float]] = []
    width = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            tokens = line.replace(",", " ").split()
            if not tokens:
                continue
            row = []
            for col, tok in enumerate(tokens, start=1):
                try:
                    row.append(float(tok))
                except ValueError:
                    raise DataError(
                        f"{path}:{lineno}: non-numeric token '{tok}' in field {col}"
                    ) from None
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise DataError(
                    f"{path}:{lineno}: ragged row ({len(row)} fields, expected {width})"
                )
            rows.append(row)
    if not rows:
        raise DataError(f"{path}: empty matrix file")
    mat = np.array(rows, dtype=np.float64)
    if not np.all(np.isfinite(mat)):
        raise DataError(f"{path}: matrix contains a non-finite value")
    return mat


def _read_labels(path: Path, n: int) -> np.ndarray:
    if not path.is_file():
        raise DataError(f"labels file not found: {path}")
    values: list[int] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            tok = line.strip()
            if not tok:
                continue
            try:
                values.append(int(tok))
            except ValueError:
                raise DataError(
                    f"{path}:{lineno}: non-integer label '{tok}'"
                ) from None
    if len(values) != n:
        raise DataError(f"{path}: expected {n} labels, found {len(values)}")
    return np.array(values, dtype=np.int64)


def load_dataset(manifest_path: str | Path) -> MultiViewDataset:
    """Load a dataset described by a JSON manifest.

    The manifest is an object ``{"views": [...], "labels": ..., "names": [...]}``
    where ``views`` lists per-view matrix files, ``labels`` (optional) names a
    file with one integer per instance, and ``names`` (optional) gives view
    identifiers.  Relative paths are resolved against the manifest's directory.
    """
    path = Path(manifest_path)
    if not path.is_file():
        raise DataError(f"manifest not found: {path}")
    try:
        manifest = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid manifest JSON ({exc})") from None
    if not isinstance(manifest, dict) or not isinstance(manifest.get("views"), list):
        raise DataError(f"{path}: manifest must be an object with a 'views' list")
    view_paths = manifest["views"]
    if not view_paths:
        raise DataError(f"{path}: manifest lists no views")

    base = path.parent
    views = [_read_matrix(base / p) for p in view_paths]
    n = views[0].shape[1]
    for p, v in zip(view_paths, views):
        if v.shape[1] != n:
            raise DataError(
                f"column count mismatch: {view_paths[0]} has {n} columns, "
                f"{p} has {v.shape[1]}"
            )

    labels = None
    if manifest.get("labels"):
        labels = _read_labels(base / manifest["labels"], n)
    names = manifest.get("names")
    if names is not None:
        names = tuple(names)
    return MultiViewDataset(tuple(views), labels=labels, names=names)


def normalize_views(dataset: MultiViewDataset) -> MultiViewDataset:
    """Scale each view by one scalar so its squared entries sum to one.

    Relative proportions within a view are preserved; labels and names carry
    over unchanged.  An all-zero view cannot be normalized and is rejected.
    """
    scaled = []
    for i, v in enumerate(dataset.views):
        total = float(np.sum(v * v))
        if total == 0.0:
            raise DataError(f"degenerate view {i}: all entries are zero")
        scaled.append(v / np.sqrt(total))
    return MultiViewDataset(tuple(scaled), labels=dataset.labels, names=dataset.names)


def augment(dataset: MultiViewDataset) -> AugmentedViews:
    """Append the constant all-ones feature as the last row of every view."""
    n = dataset.n_instances
    return AugmentedViews(
        tuple(np.vstack([v, np.ones((1, n))]) for v in dataset.views)
    )
