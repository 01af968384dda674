# src/domain/__init__.py
# Makes 'domain' a package. Exports domain models.

from .accumulator import ComplexAccumulator, CovarianceAccumulator
from .ensemble import (
    EigenvalueDistribution,
    EnsembleKind,
    MomentEntry,
    MomentReport,
    ScatteringMatrix,
    SieConfig,
    VectorMode,
)
from .estimator import CouplingEstimate, PortModelType, PortNormModel
from .multiport import ModelType, Orthogonality, PerturbationMatrix, PortForms, VarianceTable
from .network import NetworkRecord, SweepDataset, VarianceCurve, VarianceRow
from .port_waves import PortState, WaveState
from .sphere import ComplexUnitVector, Field, IsotropicSampleConfig, RealUnitVector

__all__ = [
    "ComplexAccumulator", "CovarianceAccumulator",
    "EigenvalueDistribution", "EnsembleKind", "MomentEntry", "MomentReport", "ScatteringMatrix",
    "SieConfig", "VectorMode",
    "CouplingEstimate", "PortModelType", "PortNormModel",
    "ModelType", "Orthogonality", "PerturbationMatrix", "PortForms", "VarianceTable",
    "NetworkRecord", "SweepDataset", "VarianceCurve", "VarianceRow",
    "PortState", "WaveState",
    "ComplexUnitVector", "Field", "IsotropicSampleConfig", "RealUnitVector",
]
