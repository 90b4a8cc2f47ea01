"""Exact Severi degrees, node polynomials and their leading coefficients for
plane curves, computed from floor diagrams and their template decomposition."""
from __future__ import annotations

from .coefficients import CoefficientEngine, leading_coefficients
from .diagrams import LabeledFloorDiagram, decompose, enumerate_floor_diagrams, recompose
from .engine import (
    TemplateStore,
    gromov_witten,
    node_polynomial,
    polynomiality_threshold,
    q_transform,
    severi_degree,
    severi_degree_bruteforce,
)
from .errors import (
    CacheFormatError,
    CapacityError,
    ConjectureViolation,
    DomainError,
    InternalConsistencyError,
    NodePolyError,
    VerificationMismatch,
)
from .polynomial import RationalPolynomial, bernoulli, discrete_sum, faulhaber_from_zero, interpolate
from .templates import Edge, Template, count_extensions, generate_templates, template_polynomial

__all__ = [
    "CoefficientEngine",
    "leading_coefficients",
    "LabeledFloorDiagram",
    "decompose",
    "enumerate_floor_diagrams",
    "recompose",
    "TemplateStore",
    "gromov_witten",
    "node_polynomial",
    "polynomiality_threshold",
    "q_transform",
    "severi_degree",
    "severi_degree_bruteforce",
    "CacheFormatError",
    "CapacityError",
    "ConjectureViolation",
    "DomainError",
    "InternalConsistencyError",
    "NodePolyError",
    "VerificationMismatch",
    "RationalPolynomial",
    "bernoulli",
    "discrete_sum",
    "faulhaber_from_zero",
    "interpolate",
    "Edge",
    "Template",
    "count_extensions",
    "generate_templates",
    "template_polynomial",
]
