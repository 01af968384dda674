# src/services/__init__.py
# Makes 'services' a package. Exports service classes.

from .ensemble_service import EnsembleService
from .estimator_service import EstimatorService
from .multiport_service import MultiportService
from .sphere_service import SphereService
from .sweep_service import SweepService

__all__ = [
    "EnsembleService",
    "EstimatorService",
    "MultiportService",
    "SphereService",
    "SweepService",
]
