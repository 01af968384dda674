# src/config/settings.py
# Loads environment variables and defines the run configuration.

from dataclasses import dataclass, field
from typing import Any, Dict, Optional
from dotenv import load_dotenv, dotenv_values
import os
import logging
import sys

# Determine the project root directory dynamically
PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
dotenv_path = os.path.join(PROJECT_ROOT, '.env')
load_dotenv(dotenv_path=dotenv_path)


def _env_bool(name: str, default: str) -> bool:
    return os.environ.get(name, default).strip().lower() in ('1', 'true', 'yes', 'on')


@dataclass
class Config:
    """
    Run configuration loaded from environment variables (and an optional .env file).
    Provides type hints and default values.
    """
    # Logging
    LOG_LEVEL: str = field(default_factory=lambda: os.environ.get('LOG_LEVEL', 'INFO').upper())
    LOG_TO_FILE: bool = field(default_factory=lambda: _env_bool('LOG_TO_FILE', 'false'))
    LOG_DIRECTORY: str = field(default_factory=lambda: os.environ.get('LOG_DIRECTORY', os.path.join(PROJECT_ROOT, 'logs')))

    # Monte Carlo execution
    WORKER_COUNT: int = field(default_factory=lambda: int(os.environ.get('ISOSCATTER_THREADS', 1)))
    DEFAULT_SEED: int = field(default_factory=lambda: int(os.environ.get('DEFAULT_SEED', 0)))
    JACKKNIFE_GROUPS: int = field(default_factory=lambda: int(os.environ.get('JACKKNIFE_GROUPS', 32)))

    # Port-wave and Touchstone defaults
    REFERENCE_IMPEDANCE: float = field(default_factory=lambda: float(os.environ.get('REFERENCE_IMPEDANCE', 50.0)))

    # Output
    FLOAT_FORMAT: str = field(default_factory=lambda: os.environ.get('FLOAT_FORMAT', '.17g'))
    MANIFEST_SUFFIX: str = field(default_factory=lambda: os.environ.get('MANIFEST_SUFFIX', '.run-manifest.json'))

    # Resource monitoring interval in seconds (0 disables the background monitor)
    RESOURCE_MONITOR_INTERVAL: int = field(default_factory=lambda: int(os.environ.get('RESOURCE_MONITOR_INTERVAL', 0)))

    def __post_init__(self):
        # Validate log level
        valid_levels = list(logging._nameToLevel.keys())
        if self.LOG_LEVEL not in valid_levels:
            print(f"Warning: Invalid LOG_LEVEL '{self.LOG_LEVEL}'. Valid levels: {valid_levels}. Defaulting to INFO.", file=sys.stderr)
            self.LOG_LEVEL = 'INFO'

        if self.WORKER_COUNT < 1:
            print(f"Warning: ISOSCATTER_THREADS ({self.WORKER_COUNT}) must be at least 1. Using 1.", file=sys.stderr)
            self.WORKER_COUNT = 1

        if self.JACKKNIFE_GROUPS < 2:
            print(f"Warning: JACKKNIFE_GROUPS ({self.JACKKNIFE_GROUPS}) must be at least 2. Using 32.", file=sys.stderr)
            self.JACKKNIFE_GROUPS = 32

        if self.DEFAULT_SEED < 0 or self.DEFAULT_SEED >= 2 ** 64:
            print(f"Warning: DEFAULT_SEED ({self.DEFAULT_SEED}) is not a 64-bit unsigned integer. Using 0.", file=sys.stderr)
            self.DEFAULT_SEED = 0

        if self.REFERENCE_IMPEDANCE <= 0:
            print(f"Warning: REFERENCE_IMPEDANCE ({self.REFERENCE_IMPEDANCE}) must be positive. Using 50 ohms.", file=sys.stderr)
            self.REFERENCE_IMPEDANCE = 50.0

        if self.RESOURCE_MONITOR_INTERVAL < 0:
            self.RESOURCE_MONITOR_INTERVAL = 0


# Singleton instance, created by load_config
_config_instance: Optional[Config] = None


def load_config() -> Config:
    """Loads or returns the singleton Config instance."""
    global _config_instance
    if _config_instance is None:
        _config_instance = Config()
    return _config_instance


def load_config_file(path: str) -> Dict[str, Any]:
    """
    Reads a plain-text ``key=value`` parameter file (``--config FILE``).

    Keys are long flag names; dashes and underscores are interchangeable and
    case is ignored. Values are returned as strings, leaving conversion to the
    argument parser so file values go through the same validation as flags.

    Raises:
        FileNotFoundError: If the file does not exist.
    """
    if not os.path.isfile(path):
        raise FileNotFoundError(path)
    raw = dotenv_values(path)
    return {key.strip().lower().replace('-', '_'): value for key, value in raw.items() if value is not None}


# Expose the singleton instance directly
config = load_config()
