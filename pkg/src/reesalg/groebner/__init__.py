"""Groebner bases and ideal operations."""

from ._engine import GroebnerBudgetExceeded
from .dimension import monomial_dimension, monomial_height
from .ideal import (
    CertificationFailure,
    Ideal,
    certification_log,
    certify_bases,
    colon_by_element,
    colon_by_element_via_intersection,
    colon_by_variable,
    colon_power,
    groebner_basis,
    ideal_colon,
    ideal_contains,
    ideal_equal,
    ideal_from_strings,
    ideal_intersect,
    ideal_saturate,
    intersect_by_elimination,
    intersect_with_variables,
    krull_dimension,
    krull_height,
    minimal_generators,
    normal_form,
    pair_budget,
    saturation_ladder,
)

__all__ = [
    "CertificationFailure",
    "GroebnerBudgetExceeded",
    "Ideal",
    "certification_log",
    "certify_bases",
    "colon_by_element",
    "colon_by_element_via_intersection",
    "colon_by_variable",
    "colon_power",
    "groebner_basis",
    "ideal_colon",
    "ideal_contains",
    "ideal_equal",
    "ideal_from_strings",
    "ideal_intersect",
    "ideal_saturate",
    "intersect_by_elimination",
    "intersect_with_variables",
    "krull_dimension",
    "krull_height",
    "minimal_generators",
    "monomial_dimension",
    "monomial_height",
    "normal_form",
    "pair_budget",
    "saturation_ladder",
]
