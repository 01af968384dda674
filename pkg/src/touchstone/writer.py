# src/touchstone/writer.py
# Touchstone 1.0 serializer for NetworkRecord lists.

from typing import List, Optional, Sequence

import numpy as np

from src.cli.errors import UnsupportedPortCountError, ValidationError
from src.domain.network import NetworkRecord
from src.touchstone.parser import FORMAT_CONVERTERS, MAX_PORTS, UNIT_MULTIPLIERS, TouchstoneOptions


def _pair(value: complex, data_format: str) -> List[float]:
    if data_format == "RI":
        return [value.real, value.imag]
    magnitude = abs(value)
    angle = float(np.degrees(np.angle(value)))
    if data_format == "MA":
        return [magnitude, angle]
    with np.errstate(divide="ignore"):
        return [float(20.0 * np.log10(magnitude)), angle]


def _row_lines(frequency: float, entries: np.ndarray, data_format: str) -> List[str]:
    P = entries.shape[0]
    if P <= 2:
        # 1.0 two-port order is S11 S21 S12 S22
        ordered = entries.T.ravel() if P == 2 else entries.ravel()
        values = [frequency] + [x for z in ordered for x in _pair(complex(z), data_format)]
        return [" ".join(repr(float(v)) for v in values)]
    lines = []
    for row in range(P):
        values = [x for z in entries[row] for x in _pair(complex(z), data_format)]
        text = " ".join(repr(float(v)) for v in values)
        lines.append(f"{repr(float(frequency))} {text}" if row == 0 else f"  {text}")
    return lines


def serialize_touchstone(records: Sequence[NetworkRecord], data_format: str = "RI", unit: str = "HZ",
                         comment: Optional[str] = None) -> bytes:
    """
    Touchstone 1.0 text for ``records`` (all sharing one port count and reference impedance).

    Values are written with repr-exact floats so a parse of the output reproduces RI
    data exactly and MA/DB data to rounding.

    Raises:
        UnsupportedPortCountError: For more than 4 ports.
        ValidationError: For an unknown format or unit, or inconsistent records.
    """
    data_format, unit = data_format.upper(), unit.upper()
    if data_format not in FORMAT_CONVERTERS:
        raise ValidationError(f"Unknown Touchstone format {data_format!r}.", flag="--format")
    if unit not in UNIT_MULTIPLIERS:
        raise ValidationError(f"Unknown frequency unit {unit!r}.", flag="--unit")
    impedance = records[0].reference_impedance if records else 50.0
    ports = {r.port_count for r in records}
    if len(ports) > 1:
        raise ValidationError(f"Records mix port counts {sorted(ports)}.")
    if any(r.reference_impedance != impedance for r in records):
        raise ValidationError("Records mix reference impedances.")
    if ports and max(ports) > MAX_PORTS:
        raise UnsupportedPortCountError(f"Cannot write {max(ports)}-port Touchstone data (1 to {MAX_PORTS} ports).")
    options = TouchstoneOptions(unit, "S", data_format, float(impedance))
    lines = []
    if comment:
        lines.extend(f"! {text}" for text in comment.splitlines())
    lines.append(options.option_line())
    for record in records:
        lines.extend(_row_lines(record.frequency / options.multiplier, record.s_matrix, data_format))
    return ("\n".join(lines) + "\n").encode("utf-8")
