# src/artifacts/manifest.py
# Run manifests: the echoed run configuration plus SHA-256 hashes of every artifact.

import hashlib
import json
import os
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional

from src.cli.errors import OutputError
from src.config import config
from src.utils.logger import logger

DIRECTORY_MANIFEST = "run-manifest.json"


def sha256_file(path: str) -> str:
    digest = hashlib.sha256()
    try:
        with open(path, "rb") as handle:
            for block in iter(lambda: handle.read(1 << 16), b""):
                digest.update(block)
    except OSError as e:
        raise OutputError(f"Cannot hash {path!r}: {e}") from e
    return digest.hexdigest()


def manifest_path(output: str) -> str:
    """``<out><MANIFEST_SUFFIX>`` for a file output, ``DIR/run-manifest.json`` for a directory."""
    if os.path.isdir(output):
        return os.path.join(output, DIRECTORY_MANIFEST)
    return output + config.MANIFEST_SUFFIX


def build_manifest(subcommand: str, parameters: Dict[str, Any], artifacts: List[str],
                   timestamp: Optional[datetime] = None) -> Dict[str, Any]:
    """Manifest body; artifacts are keyed by base name so the manifest is location independent."""
    stamp = (timestamp or datetime.now(timezone.utc)).isoformat()
    return {
        "subcommand": subcommand,
        "parameters": {key: parameters[key] for key in sorted(parameters)},
        "artifacts": {os.path.basename(path): sha256_file(path) for path in sorted(artifacts)},
        "created_at": stamp,
    }


def write_manifest(output: str, subcommand: str, parameters: Dict[str, Any], artifacts: List[str]) -> str:
    """
    Writes the run manifest next to ``output`` and returns its path.

    Raises:
        OutputError: If the manifest cannot be written.
    """
    path = manifest_path(output)
    body = build_manifest(subcommand, parameters, artifacts)
    try:
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(body, handle, indent=2, sort_keys=True, default=str)
            handle.write("\n")
    except OSError as e:
        raise OutputError(f"Cannot write manifest {path!r}: {e}") from e
    logger.debug(f"Run manifest written to {path}.")
    return path


def read_manifest(path: str) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except (OSError, ValueError) as e:
        raise OutputError(f"Cannot read manifest {path!r}: {e}") from e
