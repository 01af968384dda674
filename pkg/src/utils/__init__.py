# src/utils/__init__.py
# Makes 'utils' a package. Exports logging and monitoring helpers; numerical helpers are imported from their modules.

from .logger import configure_logger, logger
from .system_monitor import log_system_resources, start_resource_monitor, stop_resource_monitor

__all__ = [
    "configure_logger",
    "logger",
    "log_system_resources",
    "start_resource_monitor",
    "stop_resource_monitor",
]
