# src/app.py
# Application factory: configures logging and instantiates the services the CLI commands use.

from dataclasses import dataclass
from typing import Optional

from src.config import Config
from src.services import (
    EnsembleService,
    EstimatorService,
    MultiportService,
    SphereService,
    SweepService,
)
from src.utils.logger import configure_logger, logger
from src.utils.parallel import resolve_workers


@dataclass
class Application:
    """Configured service container shared by all subcommands of one run."""
    config: Config
    workers: int
    sphere_service: SphereService
    ensemble_service: EnsembleService
    multiport_service: MultiportService
    estimator_service: EstimatorService
    sweep_service: SweepService


def create_app(config_object: Config, workers: Optional[int] = None, log_level: Optional[str] = None) -> Application:
    """
    Factory function creating the service container.

    Args:
        config_object: The run configuration.
        workers: Worker threads; falls back to ISOSCATTER_THREADS.
        log_level: Overrides LOG_LEVEL when given.

    Returns:
        The configured Application instance.
    """
    configure_logger(log_level or config_object.LOG_LEVEL)
    count = resolve_workers(workers if workers is not None else config_object.WORKER_COUNT)
    groups = config_object.JACKKNIFE_GROUPS
    logger.debug(f"Instantiating services ({count} workers, {groups} sample groups).")
    app = Application(
        config=config_object,
        workers=count,
        sphere_service=SphereService(workers=count, group_count=groups),
        ensemble_service=EnsembleService(workers=count, group_count=groups),
        multiport_service=MultiportService(workers=count, group_count=groups),
        estimator_service=EstimatorService(),
        sweep_service=SweepService(workers=count, reference_impedance=config_object.REFERENCE_IMPEDANCE),
    )
    logger.debug("Services instantiated.")
    return app
