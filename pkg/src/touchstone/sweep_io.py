# src/touchstone/sweep_io.py
# Reads and writes stirred sweeps as directories holding one Touchstone file per stir state.

import os
import re
from typing import List

from src.cli.errors import InsufficientDataError, OutputError
from src.domain.network import SweepDataset
from src.touchstone.parser import parse_touchstone
from src.touchstone.writer import serialize_touchstone
from src.utils.logger import logger

_SNP = re.compile(r"\.s\d+p$", re.IGNORECASE)


def list_sweep_files(directory: str) -> List[str]:
    """Touchstone files in ``directory`` ordered by file name."""
    if not os.path.isdir(directory):
        raise OutputError(f"Sweep directory {directory!r} does not exist.")
    return sorted(name for name in os.listdir(directory) if _SNP.search(name))


def read_sweep_directory(directory: str) -> SweepDataset:
    """
    One stir state per ``.sNp`` file, in file-name order.

    Raises:
        OutputError: If the directory or a file cannot be read.
        InsufficientDataError: If the directory holds no Touchstone file.
        TouchstoneParseError: If a file is malformed (names the file and line).
    """
    names = list_sweep_files(directory)
    if not names:
        raise InsufficientDataError(f"No Touchstone files found in {directory!r}.")
    sweeps = []
    for name in names:
        path = os.path.join(directory, name)
        try:
            with open(path, "rb") as handle:
                raw = handle.read()
        except OSError as e:
            raise OutputError(f"Cannot read {path!r}: {e}") from e
        sweeps.append(parse_touchstone(raw, filename=name))
    logger.info(f"Read {len(sweeps)} stir states from {directory}.")
    return SweepDataset(stir_states=sweeps, labels=names, metadata={"source": os.path.abspath(directory)})


def write_sweep_directory(dataset: SweepDataset, directory: str, data_format: str = "RI") -> List[str]:
    """
    Writes ``stir_<index>.s<P>p`` per stir state and returns the written paths in stir order.

    Raises:
        OutputError: If the directory or a file cannot be written.
    """
    try:
        os.makedirs(directory, exist_ok=True)
    except OSError as e:
        raise OutputError(f"Cannot create output directory {directory!r}: {e}") from e
    width = max(4, len(str(max(dataset.stir_count - 1, 0))))
    paths = []
    for index, sweep in enumerate(dataset.stir_states):
        P = sweep[0].port_count if sweep else max(dataset.port_count, 1)
        path = os.path.join(directory, f"stir_{index:0{width}d}.s{P}p")
        payload = serialize_touchstone(sweep, data_format=data_format, comment=f"stir state {index}")
        try:
            with open(path, "wb") as handle:
                handle.write(payload)
        except OSError as e:
            raise OutputError(f"Cannot write {path!r}: {e}") from e
        paths.append(path)
    logger.info(f"Wrote {len(paths)} stir states to {directory}.")
    return paths
