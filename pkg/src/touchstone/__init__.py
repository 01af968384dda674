# src/touchstone/__init__.py
# Touchstone 1.0 ingestion and serialization.

from .parser import FORMAT_CONVERTERS, UNIT_MULTIPLIERS, TouchstoneOptions, parse_touchstone
from .sweep_io import list_sweep_files, read_sweep_directory, write_sweep_directory
from .writer import serialize_touchstone

__all__ = [
    "FORMAT_CONVERTERS",
    "UNIT_MULTIPLIERS",
    "TouchstoneOptions",
    "parse_touchstone",
    "serialize_touchstone",
    "list_sweep_files",
    "read_sweep_directory",
    "write_sweep_directory",
]
