"""Witness generators and checkers for the dynamical criterion and its consequences."""

from .circle import agrees_on_arc, circle_glue, circle_ordered_witness, weak_triple_circle
from .families import TwistedFamily, VFamily, brin_thompson, family_of, symmetric_twisted
from .suite import WitnessReport, count_verdicts, run_criterion_suite
from .witnesses import (
    CoverA,
    Inconclusive,
    ResidueMismatch,
    WitnessError,
    build_cover_A,
    decompose_A,
    extremely_proximal_witness,
    fixes_pointwise,
    glue,
    property2_witness,
    property3_witness,
    random_B,
    sample_A,
    transitivity_witness,
    weak_triple_witness,
)

__all__ = [
    "CoverA",
    "Inconclusive",
    "ResidueMismatch",
    "TwistedFamily",
    "VFamily",
    "WitnessError",
    "WitnessReport",
    "agrees_on_arc",
    "brin_thompson",
    "build_cover_A",
    "circle_glue",
    "circle_ordered_witness",
    "count_verdicts",
    "decompose_A",
    "extremely_proximal_witness",
    "family_of",
    "fixes_pointwise",
    "glue",
    "property2_witness",
    "property3_witness",
    "random_B",
    "run_criterion_suite",
    "sample_A",
    "symmetric_twisted",
    "transitivity_witness",
    "weak_triple_witness",
]
