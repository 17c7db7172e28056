"""Interaction witnesses: minimal-size sufficient partial configurations."""

from __future__ import annotations

import itertools

import numpy as np

from .causes import AnalysisSession, CauseSet, is_sufficient, sufficiency_table
from .configspace import PartialConfig
from .errors import AnalysisError
from .primes import cells_to_partials

ORACLE_LIMIT = 12


def min_support_size(s: AnalysisSession) -> int | None:
    causes = s.causes
    if not len(causes):
        return None
    return min(len(c) for c in causes)


def tway_witnesses(s: AnalysisSession) -> tuple[int, CauseSet]:
    """The smallest cause size ``t`` and all causes of that size."""
    t = min_support_size(s)
    if t is None:
        raise AnalysisError("no-causes", "the effect has no causes")
    return t, CauseSet(c for c in s.causes if len(c) == t)


def is_tway_witness(w: PartialConfig, s: AnalysisSession) -> bool:
    """Check the definition directly: ``w`` is sufficient and nothing one smaller is."""
    n = len(s.space)
    if n > ORACLE_LIMIT:
        raise AnalysisError("oracle-too-large", f"direct witness check needs at most {ORACLE_LIMIT} features")
    if not is_sufficient(w, s):
        return False
    t = len(w)
    if t == 0:
        return True
    for support in itertools.combinations(range(n), t - 1):
        smask = sum(1 << i for i in support)
        for values in itertools.product((0, 1), repeat=t - 1):
            pos = sum(1 << i for i, v in zip(support, values) if v)
            if is_sufficient(PartialConfig(s.space, pos, smask & ~pos), s):
                return False
    return True


def witnesses_by_definition(s: AnalysisSession) -> CauseSet:
    """Every partial configuration passing the direct witness check, found in one sweep.

    Builds the sufficiency table of all ``3**n`` partial configurations and
    keeps the sufficient ones of size ``t`` for which no sufficient one of
    size ``t - 1`` exists.
    """
    n = len(s.space)
    if n > ORACLE_LIMIT:
        raise AnalysisError("oracle-too-large", f"direct witness check needs at most {ORACLE_LIMIT} features")
    valid = np.zeros(1 << n, dtype=bool)
    valid[s.valid.bits_array().astype(np.int64)] = True
    effect = np.zeros(1 << n, dtype=bool)
    effect[s.effect.bits_array().astype(np.int64)] = True
    sufficient = sufficiency_table(valid, valid & ~effect, n)
    size = np.zeros((3,) * n, dtype=np.int64)
    for axis in range(n):
        shape = [1] * n
        shape[axis] = 3
        size = size + np.array([1, 1, 0]).reshape(shape)
    present = set(np.unique(size[sufficient]).tolist())
    keep = sufficient & np.isin(size, [t for t in present if t == 0 or t - 1 not in present])
    return CauseSet(cells_to_partials(s.space, keep))


def interaction_necessity(s: AnalysisSession) -> bool:
    """The effect only arises from combinations of at least two features."""
    t = min_support_size(s)
    return t is not None and t >= 2
