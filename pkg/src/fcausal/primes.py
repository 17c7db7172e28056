"""Prime implicants of a configuration set.

The main routine recurses over the decision diagram.  For a node on
variable ``x`` with cofactors ``f0`` (x false) and ``f1`` (x true)::

    primes(f) = primes(f0 & f1)
              | { !x & p : p in primes(f0) - primes(f0 & f1) }
              | {  x & p : p in primes(f1) - primes(f0 & f1) }

A prime of ``f0`` that is also an implicant of ``f0 & f1`` is already a
prime of the conjunction, so the set difference removes exactly the cubes
that do not need ``x``.  Results are memoised per node.
"""

from __future__ import annotations

import numpy as np

from .bdd import BDD, FALSE, TRUE
from .configspace import ConfigSet, PartialConfig, semantics
from .errors import AnalysisError

BRUTE_LIMIT = 16


def is_implicant(p: PartialConfig, t: ConfigSet) -> bool:
    return semantics(p).is_subset(t)


def is_prime(p: PartialConfig, t: ConfigSet) -> bool:
    if not is_implicant(p, t):
        return False
    bdd = t.space.bdd
    m = p.support_mask
    while m:
        bit = m & -m
        m ^= bit
        if bdd.diff(bdd.cube(p.pos & ~bit, p.neg & ~bit), t.node) == FALSE:
            return False
    return True


def sort_partials(items) -> list[PartialConfig]:
    return sorted(set(items), key=PartialConfig.sort_key)


def prime_cubes(bdd: BDD, node: int) -> frozenset:
    """All prime implicants of ``node`` as ``(pos, neg)`` bitmask pairs."""
    memo = bdd.caches.setdefault("primes", {})
    return _primes(bdd, node, memo)


def _primes(bdd: BDD, u: int, memo: dict) -> frozenset:
    if u == FALSE:
        return frozenset()
    if u == TRUE:
        return frozenset({(0, 0)})
    r = memo.get(u)
    if r is not None:
        return r
    bit = 1 << bdd.var(u)
    f0, f1 = bdd.low(u), bdd.high(u)
    both = _primes(bdd, bdd.conj(f0, f1), memo)
    p0 = _primes(bdd, f0, memo)
    p1 = _primes(bdd, f1, memo)
    out = set(both)
    out.update((pos, neg | bit) for pos, neg in p0 if (pos, neg) not in both)
    out.update((pos | bit, neg) for pos, neg in p1 if (pos, neg) not in both)
    r = frozenset(out)
    memo[u] = r
    return r


def prime_implicants(t: ConfigSet) -> list[PartialConfig]:
    """All prime implicants of ``t``, ordered by support size then literals."""
    space = t.space
    return sort_partials(PartialConfig(space, pos, neg) for pos, neg in prime_cubes(space.bdd, t.node))


# -- brute-force oracle -----------------------------------------------------------
#
# Partial configurations are enumerated as cells of a (3,)*n array: digit 0
# fixes a feature to false, 1 to true, 2 leaves it free.  Axis ``i`` of the
# array is feature ``i``.


def ternary_table(members: np.ndarray, n: int, combine) -> np.ndarray:
    """Extend a per-config table to all partial configs.

    ``members`` is indexed by assignment bits (bit ``i`` = feature ``i``); the
    free digit of every axis is filled with ``combine(value_false, value_true)``.
    """
    # reshape so that axis i corresponds to feature i (C order puts the last
    # axis on the lowest bit, hence the reversal)
    a = np.asarray(members).reshape((2,) * n).transpose(tuple(range(n - 1, -1, -1))) if n else np.asarray(members)
    for axis in range(n):
        lo = np.take(a, 0, axis=axis)
        hi = np.take(a, 1, axis=axis)
        a = np.concatenate([a, np.expand_dims(combine(lo, hi), axis)], axis=axis)
    return a


def minimal_cells(flags: np.ndarray, n: int) -> np.ndarray:
    """Cells whose flag holds while freeing any one fixed feature breaks it."""
    keep = flags.copy()
    for axis in range(n):
        freed = np.take(flags, [2], axis=axis)
        fixed = [slice(None)] * n
        fixed[axis] = slice(0, 2)
        keep[tuple(fixed)] &= ~freed
    return keep


def cells_to_partials(space, mask: np.ndarray) -> list[PartialConfig]:
    out = []
    for idx in zip(*np.nonzero(mask)):
        pos = neg = 0
        for i, d in enumerate(idx):
            if d == 1:
                pos |= 1 << i
            elif d == 0:
                neg |= 1 << i
        out.append(PartialConfig(space, pos, neg))
    return sort_partials(out)


def prime_implicants_brute(t: ConfigSet) -> list[PartialConfig]:
    """Reference implementation: test every one of the ``3**n`` partial configs."""
    n = len(t.space)
    if n > BRUTE_LIMIT:
        raise AnalysisError("oracle-too-large", f"brute-force primes need at most {BRUTE_LIMIT} features")
    members = np.zeros(1 << n, dtype=bool)
    members[t.bits_array().astype(np.int64)] = True
    implicant = ternary_table(members, n, np.logical_and)
    return cells_to_partials(t.space, minimal_cells(implicant, n))
