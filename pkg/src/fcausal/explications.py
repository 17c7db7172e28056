"""Explications of cause sets: formulas, most general causes and covers."""

from __future__ import annotations

import math
from collections import Counter
from typing import Sequence

import numpy as np

from .causes import AnalysisSession, CauseSet
from .configspace import PartialConfig, semantics
from .errors import AnalysisError
from .formula import FALSE_F, TRUE_F, And, Const, Formula, Lit, Or, conj, cube_formula, disj

EXACT_COVER_LIMIT = 24
# effect sets up to this size are handled as explicit bitmaps
BITMAP_LIMIT = 1 << 22


# -- characteristic formula and distributive-law simplification -------------------


def characteristic_formula(causes: CauseSet | Sequence[PartialConfig]) -> Formula:
    return disj([cube_formula(p) for p in causes])


def _cubes_of(dnf: Formula) -> list[tuple[Lit, ...]]:
    if isinstance(dnf, Const):
        return [()] if dnf.value else []
    terms = dnf.children if isinstance(dnf, Or) else (dnf,)
    cubes = []
    for t in terms:
        if isinstance(t, Lit):
            cubes.append((t,))
        elif isinstance(t, And) and all(isinstance(c, Lit) for c in t.children):
            cubes.append(tuple(t.children))
        elif isinstance(t, Const) and t.value:
            cubes.append(())
        else:
            raise AnalysisError("not-dnf", "formula is not in disjunctive normal form")
    return cubes


def dls_simplify(dnf: Formula, order: Sequence[str] | None = None) -> Formula:
    """Factor out shared literals, most frequent first.

    Ties go to the literal whose feature comes first in ``order`` (default:
    first appearance in the formula), a true literal before a false one.
    The factoring is undone by :func:`dls_expand`.
    """
    cubes = _cubes_of(dnf)
    if order is None:
        seen: dict[str, int] = {}
        for cube in cubes:
            for lit in cube:
                seen.setdefault(lit.name, len(seen))
        rank = seen
    else:
        rank = {name: i for i, name in enumerate(order)}
    return _factor(cubes, rank)


def _factor(cubes: list[tuple[Lit, ...]], rank: dict[str, int]) -> Formula:
    if not cubes:
        return FALSE_F
    cubes = list(dict.fromkeys(cubes))
    # single-literal cubes stay put: factoring x out of x | x & y
    # gives the longer x & (true | y)
    counts = Counter(lit for cube in cubes if len(cube) > 1 for lit in set(cube))
    shared = [lit for lit, k in counts.items() if k >= 2]
    if not shared:
        return disj([conj(cube) if cube else TRUE_F for cube in cubes])
    best = min(shared, key=lambda lit: (-counts[lit], rank[lit.name], not lit.positive))
    group, rest = [], []
    for cube in cubes:
        if best in cube and len(cube) > 1:
            group.append(tuple(lit for lit in cube if lit != best))
        else:
            rest.append(cube)
    factored = conj([best, _factor(group, rank)])
    return disj([factored, _factor(rest, rank)]) if rest else factored


def dls_expand(f: Formula) -> Formula:
    """Multiply a factored formula back out into DNF."""
    return disj([conj(cube) if cube else TRUE_F for cube in _expand(f)])


def _expand(f: Formula) -> list[tuple[Lit, ...]]:
    if isinstance(f, Const):
        return [()] if f.value else []
    if isinstance(f, Lit):
        return [(f,)]
    if isinstance(f, Or):
        out = []
        for c in f.children:
            out.extend(_expand(c))
        return out
    if isinstance(f, And):
        acc: list[tuple[Lit, ...]] = [()]
        for c in f.children:
            acc = [a + b for a in acc for b in _expand(c)]
        return acc
    raise AnalysisError("not-dnf", "negation of a compound formula cannot be expanded")


def cube_set(f: Formula) -> set[frozenset]:
    """The DNF's cubes as a set of literal sets (order-insensitive)."""
    return {frozenset(c) for c in _cubes_of(f)}


# -- generality and covers ---------------------------------------------------------


def at_least_as_general(p: PartialConfig, q: PartialConfig, s: AnalysisSession) -> bool:
    """``q`` covers every effect instance that ``p`` covers."""
    return (semantics(p) & s.effect).is_subset(semantics(q) & s.effect)


class _Coverage:
    """Effect coverage of each cause, as big-int bitmaps or as config sets."""

    def __init__(self, causes: Sequence[PartialConfig], s: AnalysisSession):
        self.causes = list(causes)
        self.bitmap = s.effect.count() <= BITMAP_LIMIT
        if self.bitmap:
            members = s.effect.bits_array()
            self.universe = (1 << len(members)) - 1
            self.sets = [self._mask(members, p) for p in self.causes]
        else:
            self.universe = s.effect
            self.sets = [semantics(p) & s.effect for p in self.causes]

    @staticmethod
    def _mask(members: np.ndarray, p: PartialConfig) -> int:
        pos, neg = np.uint64(p.pos), np.uint64(p.neg)
        hit = ((members & pos) == pos) & ((members & neg) == 0)
        return int.from_bytes(np.packbits(hit, bitorder="little").tobytes(), "little")

    def size(self, x) -> int:
        return x.bit_count() if self.bitmap else x.count()

    def minus(self, a, b):
        return a & ~b if self.bitmap else a - b

    def inter(self, a, b):
        return a & b

    def is_empty(self, a) -> bool:
        return a == 0 if self.bitmap else a.is_empty()

    def first(self, a):
        if self.bitmap:
            return (a & -a).bit_length() - 1
        return a.first()

    def has(self, a, elem) -> bool:
        if self.bitmap:
            return bool((a >> elem) & 1)
        return elem in a


def most_general_causes(s: AnalysisSession) -> CauseSet:
    """Causes whose effect coverage is not strictly contained in another's.

    Among maximal causes with identical coverage only the first in cause
    order (smallest support) is kept.
    """
    causes = list(s.causes)
    if len(causes) <= 1:
        return CauseSet(causes)
    cov = _Coverage(causes, s)
    sizes = [cov.size(x) for x in cov.sets]
    order = sorted(range(len(causes)), key=lambda i: -sizes[i])
    kept: list[int] = []
    for i in range(len(causes)):
        dominated = False
        for j in order:
            if sizes[j] < sizes[i]:
                break
            if j == i:
                continue
            if cov.is_empty(cov.minus(cov.sets[i], cov.sets[j])):
                # equal coverage: keep the earlier cause only
                if sizes[j] > sizes[i] or j < i:
                    dominated = True
                    break
        if not dominated:
            kept.append(i)
    return CauseSet(causes[i] for i in kept)


def is_cover(causes: Sequence[PartialConfig], s: AnalysisSession) -> bool:
    covered = s.space.empty()
    for p in causes:
        covered = covered | semantics(p)
    return s.effect.is_subset(covered)


def cause_effect_cover(s: AnalysisSession, strategy: str = "greedy") -> CauseSet:
    causes = list(s.causes)
    if strategy == "greedy":
        return CauseSet(causes[i] for i in _greedy(_Coverage(causes, s)))
    if strategy == "exact":
        if len(causes) > EXACT_COVER_LIMIT:
            raise AnalysisError(
                "cover-too-large", f"exact cover supports at most {EXACT_COVER_LIMIT} causes, got {len(causes)}"
            )
        return CauseSet(causes[i] for i in _exact(_Coverage(causes, s)))
    raise AnalysisError("bad-strategy", f"unknown cover strategy {strategy!r}")


def _greedy(cov: _Coverage) -> list[int]:
    uncovered = cov.universe
    chosen: list[int] = []
    while not cov.is_empty(uncovered):
        gains = [cov.size(cov.inter(x, uncovered)) for x in cov.sets]
        best = max(range(len(gains)), key=lambda i: (gains[i], -i))
        if gains[best] == 0:
            raise AnalysisError("not-coverable", "causes do not cover the effect set")
        chosen.append(best)
        uncovered = cov.minus(uncovered, cov.sets[best])
    return chosen


def _exact(cov: _Coverage) -> list[int]:
    best = _greedy(cov)
    n = len(cov.sets)

    def search(uncovered, chosen: list[int]):
        nonlocal best
        if cov.is_empty(uncovered):
            if len(chosen) < len(best):
                best = list(chosen)
            return
        gains = [cov.size(cov.inter(x, uncovered)) for x in cov.sets]
        top = max(gains)
        if top == 0:
            return
        if len(chosen) + math.ceil(cov.size(uncovered) / top) >= len(best):
            return
        elem = cov.first(uncovered)
        options = [i for i in range(n) if gains[i] and cov.has(cov.sets[i], elem)]
        options.sort(key=lambda i: (-gains[i], i))
        for i in options:
            chosen.append(i)
            search(cov.minus(uncovered, cov.sets[i]), chosen)
            chosen.pop()

    search(cov.universe, [])
    return best
