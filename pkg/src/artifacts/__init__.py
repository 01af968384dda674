# src/artifacts/__init__.py
# CSV artifacts and run manifests.

from .csv_io import (
    format_value,
    read_csv,
    read_ensemble_csv,
    read_sweep_csv,
    write_csv,
    write_ensemble_csv,
    write_sweep_csv,
)
from .manifest import build_manifest, manifest_path, read_manifest, sha256_file, write_manifest

__all__ = [
    "format_value",
    "read_csv",
    "read_ensemble_csv",
    "read_sweep_csv",
    "write_csv",
    "write_ensemble_csv",
    "write_sweep_csv",
    "build_manifest",
    "manifest_path",
    "read_manifest",
    "sha256_file",
    "write_manifest",
]
