# src/artifacts/csv_io.py
# CSV artifacts with exact, reproducible float formatting: tables, stored ensembles and long-format sweeps.

import csv
import os
from typing import Any, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.cli.errors import OutputError, ShapeError, TouchstoneParseError
from src.config import config
from src.domain.network import NetworkRecord, SweepDataset
from src.utils.logger import logger

SWEEP_HEADER = ["stir", "freq_hz", "row", "col", "re", "im"]


def format_value(value: Any, float_format: Optional[str] = None) -> str:
    """Floats with a round-trip exact format (``FLOAT_FORMAT``); booleans as 0/1; None as empty."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), float_format or config.FLOAT_FORMAT)
    return str(value)


def _ensure_parent(path: str) -> None:
    parent = os.path.dirname(os.path.abspath(path))
    try:
        os.makedirs(parent, exist_ok=True)
    except OSError as e:
        raise OutputError(f"Cannot create directory {parent!r}: {e}") from e


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """
    Writes a CSV table with LF line endings. Returns the path.

    Raises:
        OutputError: If the file cannot be written.
    """
    _ensure_parent(path)
    count = 0
    try:
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([format_value(v) for v in row])
                count += 1
    except OSError as e:
        raise OutputError(f"Cannot write {path!r}: {e}") from e
    logger.info(f"Wrote {count} rows to {path}.")
    return path


def read_csv(path: str) -> Tuple[List[str], List[List[str]]]:
    """
    (header, rows) of a CSV file.

    Raises:
        OutputError: If the file cannot be read or is empty.
    """
    try:
        with open(path, "r", newline="", encoding="utf-8") as handle:
            lines = list(csv.reader(handle))
    except OSError as e:
        raise OutputError(f"Cannot read {path!r}: {e}") from e
    if not lines:
        raise OutputError(f"{path!r} is empty.")
    return lines[0], lines[1:]


# --- Stored ensembles ---

def ensemble_header(N: int) -> List[str]:
    return ["index"] + [f"s_{k}_{l}_{part}" for k in range(1, N + 1) for l in range(1, N + 1) for part in ("re", "im")]


def write_ensemble_csv(path: str, samples: np.ndarray) -> str:
    """One row per sample: the index and every entry S_kl as (re, im), row-major."""
    samples = np.asarray(samples, dtype=complex)
    if samples.ndim != 3 or samples.shape[1] != samples.shape[2]:
        raise ShapeError(f"Expected an (M, N, N) ensemble, got shape {samples.shape}.")
    N = samples.shape[1]

    def rows():
        for index, matrix in enumerate(samples):
            flat = matrix.ravel()
            values = np.empty(2 * flat.size)
            values[0::2], values[1::2] = flat.real, flat.imag
            yield [index] + values.tolist()

    return write_csv(path, ensemble_header(N), rows())


def read_ensemble_csv(path: str) -> np.ndarray:
    """
    Reads an ensemble written by ``write_ensemble_csv`` back into an (M, N, N) array.

    Raises:
        ShapeError: If the columns do not describe a square matrix.
    """
    header, rows = read_csv(path)
    N = int(round(np.sqrt((len(header) - 1) / 2)))
    if header != ensemble_header(N):
        raise ShapeError(f"{path!r} is not an ensemble CSV (unexpected header).")
    values = np.array([[float(x) for x in row[1:]] for row in rows], dtype=float).reshape(len(rows), N * N, 2)
    return (values[..., 0] + 1j * values[..., 1]).reshape(len(rows), N, N)


# --- Long-format sweeps ---

def write_sweep_csv(path: str, dataset: SweepDataset) -> str:
    """One row per (stir, frequency, row, col) entry with 1-based row and column."""
    frequencies, data = dataset.stacked()

    def rows():
        for stir in range(data.shape[0]):
            for j, f in enumerate(frequencies):
                for r in range(data.shape[2]):
                    for c in range(data.shape[3]):
                        z = data[stir, j, r, c]
                        yield [stir, float(f), r + 1, c + 1, z.real, z.imag]

    return write_csv(path, SWEEP_HEADER, rows())


def read_sweep_csv(path: str, reference_impedance: Optional[float] = None) -> SweepDataset:
    """
    Reads a long-format sweep CSV (``stir,freq_hz,row,col,re,im``) into a SweepDataset.
    Stir states keep their order of first appearance; frequencies are sorted per stir.

    Raises:
        TouchstoneParseError: For a wrong header or malformed rows (with line numbers).
    """
    header, rows = read_csv(path)
    if [h.strip().lower() for h in header] != SWEEP_HEADER:
        raise TouchstoneParseError(f"Expected header {','.join(SWEEP_HEADER)}.", 1, path)
    impedance = reference_impedance or config.REFERENCE_IMPEDANCE
    cells = {}
    order: List[str] = []
    P = 0
    for line_number, row in enumerate(rows, start=2):
        if len(row) != len(SWEEP_HEADER):
            raise TouchstoneParseError(f"Expected {len(SWEEP_HEADER)} columns, got {len(row)}.", line_number, path)
        try:
            stir, freq, r, c = row[0].strip(), float(row[1]), int(row[2]), int(row[3])
            value = complex(float(row[4]), float(row[5]))
        except ValueError:
            raise TouchstoneParseError("Malformed numeric value.", line_number, path)
        if r < 1 or c < 1:
            raise TouchstoneParseError("Row and column indices are 1-based.", line_number, path)
        if stir not in cells:
            cells[stir] = {}
            order.append(stir)
        cells[stir].setdefault(freq, {})[(r, c)] = value
        P = max(P, r, c)
    sweeps = []
    for stir in order:
        records = []
        for freq in sorted(cells[stir]):
            matrix = np.zeros((P, P), dtype=complex)
            entries = cells[stir][freq]
            if len(entries) != P * P:
                raise TouchstoneParseError(f"Stir {stir} at {freq!r} Hz lists {len(entries)} of {P * P} entries.", None, path)
            for (r, c), value in entries.items():
                matrix[r - 1, c - 1] = value
            records.append(NetworkRecord(freq, matrix, impedance))
        sweeps.append(records)
    logger.info(f"Read {len(sweeps)} stir states from {path}.")
    return SweepDataset(stir_states=sweeps, labels=order, metadata={"source": os.path.abspath(path)})
