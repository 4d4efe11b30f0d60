"""
Dataset and Report I/O
=======================

Reading and writing partially labelled datasets and result files.

Dataset CSV layout: header row, feature columns x1..xp, optional `label`
column holding 1..g for labelled rows and an empty cell for unlabelled rows.
Reals are written with 17 significant digits so doubles round-trip exactly.

Features:
- Strict CSV validation with row / column locations in error messages
- JSON writer that understands numpy scalars and arrays
- Truth sidecar for simulated datasets
"""

import json
import math
import re
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd

from mixture_core import MISSING_LABEL, LabelRangeError, MixtureParams, SemiDataset

FLOAT_FORMAT = '%.17g'
LABEL_COLUMN = 'label'

PathLike = Union[str, Path]


class DatasetFormatError(ValueError):
    """Malformed dataset file; row and column are 1-based file coordinates (header = row 1)."""

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[str] = None):
        location = []
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column '{column}'")
        super().__init__(f"{', '.join(location)}: {message}" if location else message)
        self.row = row
        self.column = column


# =============================================================================
# DATASET CSV
# =============================================================================

def _feature_columns(columns) -> list:
    features = [c for c in columns if c != LABEL_COLUMN]
    expected = [f"x{j}" for j in range(1, len(features) + 1)]
    if not features:
        raise DatasetFormatError("no feature columns (expected x1..xp)", row=1)
    if features != expected:
        raise DatasetFormatError(
            f"feature columns must be {', '.join(expected)} in order, got {', '.join(features)}", row=1
        )
    if list(columns).count(LABEL_COLUMN) > 1:
        raise DatasetFormatError("duplicate label column", row=1)
    return features


def read_dataset(path: PathLike, g: Optional[int] = None) -> SemiDataset:
    """
    Load a dataset CSV.

    Args:
        path: CSV file
        g: if given, labels must lie in 1..g

    Raises:
        DatasetFormatError: unreadable, ragged or non-numeric content
        LabelRangeError: a label outside 1..g
    """
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skip_blank_lines=True)
    except pd.errors.EmptyDataError:
        raise DatasetFormatError("file is empty (a header row is required)", row=1)
    except pd.errors.ParserError as e:
        match = re.search(r"line (\d+)", str(e))
        raise DatasetFormatError(f"inconsistent number of fields ({e})",
                                 row=int(match.group(1)) if match else None)
    except OSError as e:
        raise DatasetFormatError(f"cannot read file: {e}")

    features = _feature_columns(frame.columns)
    n, p = len(frame), len(features)
    X = np.empty((n, p))
    labels = np.full(n, MISSING_LABEL, dtype=np.int64)

    for i, record in enumerate(frame.itertuples(index=False, name=None)):
        row = i + 2
        cells = dict(zip(frame.columns, record))
        for j, column in enumerate(features):
            text = cells[column]
            if not isinstance(text, str) or not text.strip():
                raise DatasetFormatError("missing feature value", row=row, column=column)
            try:
                value = float(text)
            except ValueError:
                raise DatasetFormatError(f"'{text}' is not a number", row=row, column=column)
            if not math.isfinite(value):
                raise DatasetFormatError(f"'{text}' is not finite", row=row, column=column)
            X[i, j] = value

        text = cells.get(LABEL_COLUMN, '')
        text = text.strip() if isinstance(text, str) else ''
        if text:
            try:
                label = int(text)
            except ValueError:
                raise DatasetFormatError(f"label '{text}' is not an integer", row=row, column=LABEL_COLUMN)
            if label < 1 or (g is not None and label > g):
                bound = f"1..{g}" if g is not None else ">= 1"
                raise LabelRangeError(f"row {row}, column '{LABEL_COLUMN}': label {label} outside {bound}")
            labels[i] = label

    return SemiDataset(X, labels)


def write_dataset(path: PathLike, data: SemiDataset):
    """Write a dataset CSV; unlabelled rows get an empty label cell."""
    columns = {f"x{j + 1}": data.features[:, j] for j in range(data.p)}
    frame = pd.DataFrame(columns)
    frame[LABEL_COLUMN] = [str(int(v)) if v != MISSING_LABEL else '' for v in data.labels]
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)


# =============================================================================
# JSON RESULTS
# =============================================================================

def _json_default(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def _clean(value):
    """Replace non-finite floats with None so the output is strict JSON."""
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, (float, np.floating)) and not math.isfinite(value):
        return None
    return value


def write_json(path: PathLike, payload: dict):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w') as f:
        json.dump(_clean(payload), f, indent=2, sort_keys=True, default=_json_default)
        f.write('\n')


def read_json(path: PathLike) -> dict:
    with open(path, 'r') as f:
        return json.load(f)


def write_plot_data(path: PathLike, frame: pd.DataFrame):
    """Plot-data CSV with full-precision reals."""
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)


def truth_sidecar_path(dataset_path: PathLike) -> Path:
    dataset_path = Path(dataset_path)
    return dataset_path.with_name(dataset_path.stem + '.truth.json')


def write_truth_sidecar(dataset_path: PathLike, true_labels, true_params: MixtureParams,
                        mechanism: dict, seed: int) -> Path:
    """Write <dataset>.truth.json next to a simulated dataset."""
    path = truth_sidecar_path(dataset_path)
    write_json(path, {
        'seed': int(seed),
        'mechanism': mechanism,
        'true_params': true_params.to_dict(),
        'true_labels': [int(v) for v in true_labels],
    })
    return path


if __name__ == "__main__":
    import tempfile

    demo = SemiDataset([[0.1, 0.2], [1.0 / 3.0, -2.5], [4.0, 5.0]], [1, 0, 2])
    with tempfile.TemporaryDirectory() as tmp:
        target = Path(tmp) / "demo.csv"
        write_dataset(target, demo)
        print(target.read_text())
        print(read_dataset(target).labels)
