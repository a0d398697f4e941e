"""Detect channel properties and capacity lower bounds from a few local measurements."""

from .capacity import (
    BoundReport,
    MeasurementBasis,
    PauliStats,
    analytic_reference,
    coherent_information,
    qdet_bell_general,
    qdet_qubit,
    shannon,
    von_neumann,
)
from .channels import ChannelSpec, KrausChannel, build
from .exceptions import ChandetError, NumericError, ParseError, ValidationError
from .witness import WitnessOperator, WitnessVerdict, build_web

__all__ = [
    "BoundReport",
    "ChandetError",
    "ChannelSpec",
    "KrausChannel",
    "MeasurementBasis",
    "NumericError",
    "ParseError",
    "PauliStats",
    "ValidationError",
    "WitnessOperator",
    "WitnessVerdict",
    "analytic_reference",
    "build",
    "build_web",
    "coherent_information",
    "qdet_bell_general",
    "qdet_qubit",
    "shannon",
    "von_neumann",
]
