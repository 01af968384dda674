# src/utils/system_monitor.py
# Logs process resource usage after heavy runs and, optionally, on a background interval.

import os
import threading
from typing import Optional

import psutil

from .logger import logger

_monitor_thread: Optional[threading.Thread] = None
_stop_monitor = threading.Event()


def log_system_resources(label: str = "") -> None:
    """Logs memory (RSS), CPU and thread count of the current process."""
    prefix = f"Resource Usage{f' [{label}]' if label else ''}"
    try:
        process = psutil.Process(os.getpid())
        mem_mb = process.memory_info().rss / (1024 * 1024)
        # short blocking sample
        cpu_percent = process.cpu_percent(interval=0.1)
        logger.info(f"{prefix} - Memory (RSS): {mem_mb:.2f} MB, CPU: {cpu_percent:.2f}%, Threads: {process.num_threads()}")
    except psutil.NoSuchProcess:
        logger.warning("Could not get process info for resource monitoring (process ended?).")
    except Exception as e:
        logger.error(f"Error logging system resources: {e}", exc_info=True)


def _monitor_task(interval_seconds: int) -> None:
    logger.debug(f"Starting periodic resource monitor (Interval: {interval_seconds}s)")
    while not _stop_monitor.wait(timeout=interval_seconds):
        log_system_resources("periodic")
    logger.debug("Periodic resource monitor stopped.")


def start_resource_monitor(interval_seconds: int) -> None:
    """Starts the background monitor thread; at most one runs at a time."""
    global _monitor_thread
    if interval_seconds <= 0:
        return
    if _monitor_thread is None or not _monitor_thread.is_alive():
        _stop_monitor.clear()
        _monitor_thread = threading.Thread(target=_monitor_task, args=(interval_seconds,), daemon=True)
        _monitor_thread.start()
    else:
        logger.debug("Resource monitor thread already running.")


def stop_resource_monitor() -> None:
    """Signals the background monitor thread to stop."""
    global _monitor_thread
    if _monitor_thread and _monitor_thread.is_alive():
        _stop_monitor.set()
        _monitor_thread.join(timeout=5)
        if _monitor_thread.is_alive():
            logger.warning("Resource monitor thread did not stop gracefully.")
    _monitor_thread = None
