# src/touchstone/parser.py
# Touchstone 1.0 (.sNp) parser producing NetworkRecord lists.

import re
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np

from src.cli.errors import TouchstoneParseError, UnsupportedPortCountError
from src.domain.network import NetworkRecord
from src.utils.logger import logger

MAX_PORTS = 4

UNIT_MULTIPLIERS = {"HZ": 1.0, "KHZ": 1e3, "MHZ": 1e6, "GHZ": 1e9}

FORMAT_CONVERTERS = {
    "RI": lambda a, b: a + 1j * b,
    "MA": lambda a, b: a * np.exp(1j * np.radians(b)),
    "DB": lambda a, b: 10.0 ** (a / 20.0) * np.exp(1j * np.radians(b)),
}

_EXTENSION = re.compile(r"\.s(\d+)p$", re.IGNORECASE)


@dataclass(frozen=True)
class TouchstoneOptions:
    """Contents of the option line; defaults are the Touchstone 1.0 ones (GHZ S MA R 50)."""
    unit: str = "GHZ"
    parameter: str = "S"
    data_format: str = "MA"
    reference_impedance: float = 50.0

    @property
    def multiplier(self) -> float:
        return UNIT_MULTIPLIERS[self.unit]

    def option_line(self) -> str:
        return f"# {self.unit} {self.parameter} {self.data_format} R {self.reference_impedance!r}"


def port_count_from_name(filename: Optional[str]) -> Optional[int]:
    """P from a ``.sNp`` extension, or None when the name carries no hint."""
    if not filename:
        return None
    match = _EXTENSION.search(str(filename))
    return int(match.group(1)) if match else None


def _parse_options(tokens: List[str], line_number: int, source: Optional[str]) -> TouchstoneOptions:
    unit, parameter, data_format, impedance = "GHZ", "S", "MA", 50.0
    i = 0
    while i < len(tokens):
        token = tokens[i].upper()
        if token in UNIT_MULTIPLIERS:
            unit = token
        elif token in FORMAT_CONVERTERS:
            data_format = token
        elif token == "S":
            parameter = token
        elif token in ("Y", "Z", "H", "G"):
            raise TouchstoneParseError(f"Only S-parameter files are supported, got parameter {token}.", line_number, source)
        elif token == "R":
            if i + 1 >= len(tokens):
                raise TouchstoneParseError("Option 'R' must be followed by the reference impedance.", line_number, source)
            try:
                impedance = float(tokens[i + 1])
            except ValueError:
                raise TouchstoneParseError(f"Invalid reference impedance {tokens[i + 1]!r}.", line_number, source)
            if not impedance > 0.0:
                raise TouchstoneParseError(f"Reference impedance must be positive, got {impedance!r}.", line_number, source)
            i += 1
        else:
            raise TouchstoneParseError(f"Unknown option {tokens[i]!r} in option line.", line_number, source)
        i += 1
    return TouchstoneOptions(unit, parameter, data_format, impedance)


def _data_lines(text: str, source: Optional[str]) -> Tuple[TouchstoneOptions, List[Tuple[int, List[str]]]]:
    options: Optional[TouchstoneOptions] = None
    lines: List[Tuple[int, List[str]]] = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("!", 1)[0].strip()
        if not content:
            continue
        if content.startswith("["):
            raise TouchstoneParseError(f"Touchstone 2.0 keyword {content.split()[0]!r} is not supported (version 1.0 only).",
                                       line_number, source)
        if content.startswith("#"):
            if options is not None:
                raise TouchstoneParseError("Duplicate option line.", line_number, source)
            if lines:
                raise TouchstoneParseError("Option line must precede the data.", line_number, source)
            options = _parse_options(content[1:].split(), line_number, source)
            continue
        lines.append((line_number, content.split()))
    return options or TouchstoneOptions(), lines


def _infer_port_count(lines: List[Tuple[int, List[str]]], source: Optional[str]) -> int:
    # a record starts with an odd token count (frequency + pairs); continuation lines are even
    line_number, first = lines[0]
    total = len(first)
    for _, tokens in lines[1:]:
        if len(tokens) % 2:
            break
        total += len(tokens)
    pairs = (total - 1) // 2
    P = int(round(np.sqrt(pairs)))
    if total % 2 == 0 or P * P != pairs:
        raise TouchstoneParseError(f"Cannot infer the port count from a record of {total} values.", line_number, source)
    return P


def _to_float(token: str, line_number: int, source: Optional[str]) -> float:
    try:
        return float(token)
    except ValueError:
        raise TouchstoneParseError(f"Non-numeric value {token!r}.", line_number, source)


def parse_touchstone(data: Union[bytes, str], filename: Optional[str] = None) -> List[NetworkRecord]:
    """
    Parses Touchstone 1.0 S-parameter data.

    Frequencies are converted to hertz and RI/MA/DB pairs to complex numbers. Two-port
    data is read in the 1.0 column order S11 S21 S12 S22; larger networks row by row,
    each matrix row possibly continued on the following lines. The port count comes
    from the ``.sNp`` extension of ``filename`` when present, else from the first record.

    Raises:
        TouchstoneParseError: For malformed option lines, non-numeric values, wrong
            value counts, non-increasing frequencies or 2.0 keywords (with line numbers).
        UnsupportedPortCountError: For more than 4 ports.
    """
    source = str(filename) if filename else None
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise TouchstoneParseError(f"File is not valid UTF-8 text ({e.reason}).", None, source)
    else:
        text = data
    options, lines = _data_lines(text, source)
    if not lines:
        logger.debug(f"Touchstone data {source or ''} holds no records.")
        return []

    P = port_count_from_name(filename) or _infer_port_count(lines, source)
    if P < 1 or P > MAX_PORTS:
        raise UnsupportedPortCountError(f"{P}-port Touchstone data is not supported (1 to {MAX_PORTS} ports).")
    expected = 1 + 2 * P * P
    convert = FORMAT_CONVERTERS[options.data_format]

    records: List[NetworkRecord] = []
    values: List[float] = []
    start_line = 0
    previous = -np.inf
    for line_number, tokens in lines:
        if not values:
            start_line = line_number
        values.extend(_to_float(t, line_number, source) for t in tokens)
        if len(values) > expected:
            raise TouchstoneParseError(f"Record holds {len(values)} values, expected {expected} for {P} ports.",
                                       line_number, source)
        if len(values) < expected:
            continue
        frequency = values[0] * options.multiplier
        if not frequency > previous:
            raise TouchstoneParseError(f"Frequencies must increase strictly; {values[0]!r} follows a larger value.",
                                       start_line, source)
        if not frequency > 0.0:
            raise TouchstoneParseError(f"Frequency must be positive, got {values[0]!r}.", start_line, source)
        previous = frequency
        pairs = np.asarray(values[1:]).reshape(P * P, 2)
        entries = convert(pairs[:, 0], pairs[:, 1]).reshape(P, P)
        if P == 2:
            # 1.0 two-port order is S11 S21 S12 S22
            entries = entries.T
        records.append(NetworkRecord(frequency, entries, options.reference_impedance))
        values = []
    if values:
        raise TouchstoneParseError(f"Truncated record: {len(values)} of {expected} values.", start_line, source)
    logger.debug(f"Parsed {len(records)} records ({P} ports, {options.data_format}, {options.unit}) from {source or 'data'}.")
    return records
