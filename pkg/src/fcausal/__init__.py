"""Feature causality analysis for configurable systems."""

from .accountability import (
    Distribution,
    ResponsibilityTable,
    blame,
    from_weights,
    interaction_blame,
    interaction_responsibility,
    responsibility,
    switch,
    uniform_over_effects,
    uniform_over_valid,
)
from .causes import (
    AnalysisSession,
    CauseSet,
    compute_causes,
    compute_causes_naive,
    counterfactual_witness,
    is_cause,
    is_sufficient,
)
from .configspace import ConfigSet, FeatureSpace, PartialConfig, TotalConfig, expand, min_switch, semantics
from .errors import AnalysisError, InvariantError, ParseError
from .explications import (
    at_least_as_general,
    cause_effect_cover,
    characteristic_formula,
    dls_expand,
    dls_simplify,
    is_cover,
    most_general_causes,
)
from .formula import length, parse_expression, render
from .ingest import EffectSpec, effect_set, load_measurements, parse_config_list, parse_model
from .interactions import interaction_necessity, is_tway_witness, min_support_size, tway_witnesses
from .primes import is_implicant, is_prime, prime_implicants, prime_implicants_brute

__all__ = [name for name in dir() if not name.startswith("_")]
