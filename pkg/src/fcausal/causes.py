"""Feature causes of an effect set.

A partial configuration is *sufficient* when its valid configurations are
non-empty and all exhibit the effect; it is a *cause* when, in addition,
freeing any one of its features breaks sufficiency.  Causes are exactly the
prime implicants of ``(all configs - valid) | effect`` that touch the effect.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Iterator

import numpy as np

from .configspace import ConfigSet, FeatureSpace, PartialConfig, TotalConfig, expand, semantics
from .errors import AnalysisError
from .primes import cells_to_partials, minimal_cells, prime_implicants, sort_partials, ternary_table

NAIVE_LIMIT = 12


class CauseSet:
    """Deduplicated partial configurations in canonical order.

    Ordered by support size, then by literal sequence in declaration order
    (a true literal sorts before a false one on the same feature).
    """

    def __init__(self, items: Iterable[PartialConfig] = ()):
        self.items: tuple[PartialConfig, ...] = tuple(sort_partials(items))

    def __iter__(self) -> Iterator[PartialConfig]:
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]

    def __contains__(self, p) -> bool:
        return p in set(self.items)

    def __eq__(self, other):
        if isinstance(other, CauseSet):
            return self.items == other.items
        return NotImplemented

    def __hash__(self):
        return hash(self.items)

    def __repr__(self) -> str:
        return "CauseSet([" + ", ".join(repr(str(p)) for p in self.items) + "])"

    def strings(self) -> list[str]:
        return [str(p) for p in self.items]

    def semantics(self, space: FeatureSpace) -> ConfigSet:
        out = space.empty()
        for p in self.items:
            out = out | semantics(p)
        return out


class AnalysisSession:
    """Valid configurations ``V`` and an effect set ``E`` over one space.

    Derived results are cached on first use; a session must not be shared
    between threads while caches are being filled.
    """

    def __init__(self, valid: ConfigSet, effect: ConfigSet):
        if valid.space is not effect.space:
            raise AnalysisError("space-mismatch", "valid and effect sets use different spaces")
        if valid.is_empty():
            raise AnalysisError("empty-valid", "the set of valid configurations is empty")
        if not effect.is_subset(valid):
            raise AnalysisError("effect-not-valid", "the effect set contains invalid configurations")
        self.space = valid.space
        self.valid = valid
        self.effect = effect

    @property
    def non_effect(self) -> ConfigSet:
        return self.valid - self.effect

    def negated(self) -> AnalysisSession:
        """Session for the complementary effect ``V - E``."""
        return AnalysisSession(self.valid, self.non_effect)

    @cached_property
    def implicant_target(self) -> ConfigSet:
        return ~self.valid | self.effect

    @cached_property
    def primes(self) -> list[PartialConfig]:
        return prime_implicants(self.implicant_target)

    @cached_property
    def causes(self) -> CauseSet:
        if self.effect.is_empty():
            return CauseSet()
        keep = [p for p in self.primes if not (semantics(p) & self.effect).is_empty()]
        return CauseSet(keep)

    def _check(self, p: PartialConfig) -> None:
        if p.space is not self.space:
            raise AnalysisError("space-mismatch", "partial configuration from another space")


def is_sufficient(p: PartialConfig, s: AnalysisSession) -> bool:
    s._check(p)
    covered = semantics(p) & s.valid
    return not covered.is_empty() and covered.is_subset(s.effect)


def is_cause(p: PartialConfig, s: AnalysisSession) -> bool:
    if not is_sufficient(p, s):
        return False
    for x in p.support:
        if (semantics(expand(p, x)) & s.valid).is_subset(s.effect):
            return False
    return True


def compute_causes(s: AnalysisSession) -> CauseSet:
    return s.causes


def compute_causes_naive(s: AnalysisSession) -> CauseSet:
    """Check both cause conditions on every partial configuration.

    Works on explicit count tables rather than decision diagrams, so it is
    an independent reference for :func:`compute_causes`.
    """
    n = len(s.space)
    if n > NAIVE_LIMIT:
        raise AnalysisError("oracle-too-large", f"naive cause search needs at most {NAIVE_LIMIT} features")
    valid = np.zeros(1 << n, dtype=bool)
    effect = np.zeros(1 << n, dtype=bool)
    valid[s.valid.bits_array().astype(np.int64)] = True
    effect[s.effect.bits_array().astype(np.int64)] = True
    bad = valid & ~effect
    sufficient = sufficiency_table(valid, bad, n)
    return CauseSet(cells_to_partials(s.space, minimal_cells(sufficient, n)))


def sufficiency_table(valid: np.ndarray, bad: np.ndarray, n: int) -> np.ndarray:
    """Per partial configuration: some valid config inside and no non-effect one."""
    any_valid = ternary_table(valid, n, np.logical_or)
    any_bad = ternary_table(bad, n, np.logical_or)
    return any_valid & ~any_bad


def counterfactual_witness(p: PartialConfig, x: str, s: AnalysisSession) -> TotalConfig:
    """Lexicographically least valid non-effect config in the ``x``-expansion of ``p``."""
    if not is_cause(p, s):
        raise AnalysisError("not-a-cause", f"{p} is not a cause of the effect")
    freed = expand(p, x)
    w = (semantics(freed) & s.non_effect).first()
    if w is None:
        raise AnalysisError("not-a-cause", f"no counterfactual witness for {p} and {x}")
    return w
