"""Feature spaces, configurations and sets of configurations."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .bdd import BDD, FALSE, TRUE
from .errors import AnalysisError

MAX_FEATURES = 64
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class FeatureSpace:
    """An ordered universe of Boolean features.

    Each space owns the decision-diagram engine used by every
    :class:`ConfigSet` built over it, so spaces compare by identity.
    """

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if not 1 <= len(names) <= MAX_FEATURES:
            raise AnalysisError(
                "bad-space", f"a feature space needs 1..{MAX_FEATURES} features, got {len(names)}"
            )
        for name in names:
            if not isinstance(name, str) or not _IDENT.match(name):
                raise AnalysisError("bad-space", f"invalid feature identifier {name!r}")
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise AnalysisError("bad-space", f"duplicate feature identifiers: {', '.join(dup)}")
        self.names = names
        self.index = {n: i for i, n in enumerate(names)}
        self.bdd = BDD(len(names))

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __contains__(self, name: object) -> bool:
        return name in self.index

    def __repr__(self) -> str:
        return f"FeatureSpace({list(self.names)!r})"

    @property
    def full_mask(self) -> int:
        return (1 << len(self.names)) - 1

    def position(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise AnalysisError("unknown-feature", f"unknown feature {name!r}") from None

    def mask(self, names: Iterable[str]) -> int:
        m = 0
        for name in names:
            m |= 1 << self.position(name)
        return m

    # convenience constructors
    def config(self, selected: Iterable[str] = ()) -> TotalConfig:
        return TotalConfig(self, self.mask(selected))

    def partial(self, literals: Mapping[str, bool] | None = None, **kw: bool) -> PartialConfig:
        return PartialConfig.from_literals(self, {**(literals or {}), **kw})

    def universe(self) -> ConfigSet:
        return ConfigSet(self, TRUE)

    def empty(self) -> ConfigSet:
        return ConfigSet(self, FALSE)

    def from_configs(self, configs: Iterable[TotalConfig]) -> ConfigSet:
        u = FALSE
        for c in configs:
            _check_space(self, c.space)
            u = self.bdd.disj(u, self.bdd.point(c.bits))
        return ConfigSet(self, u)


def _check_space(a: FeatureSpace, b: FeatureSpace) -> None:
    if a is not b:
        raise AnalysisError("space-mismatch", "operands belong to different feature spaces")


@dataclass(frozen=True)
class TotalConfig:
    """A total assignment; bit ``i`` of ``bits`` is feature ``i``."""

    space: FeatureSpace = field(compare=False, repr=False)
    bits: int

    def __post_init__(self):
        if self.bits < 0 or self.bits > self.space.full_mask:
            raise AnalysisError("bad-config", "assignment does not fit the feature space")

    def __eq__(self, other):
        if not isinstance(other, TotalConfig):
            return NotImplemented
        return self.space is other.space and self.bits == other.bits

    def __hash__(self):
        return hash(self.bits)

    def __getitem__(self, name: str) -> bool:
        return bool((self.bits >> self.space.position(name)) & 1)

    @property
    def assignment(self) -> tuple[bool, ...]:
        return tuple(bool((self.bits >> i) & 1) for i in range(len(self.space)))

    @property
    def selected(self) -> tuple[str, ...]:
        return tuple(n for i, n in enumerate(self.space.names) if (self.bits >> i) & 1)

    def sort_key(self) -> str:
        """Bit string in declaration order; sorts lexicographically."""
        return "".join("1" if b else "0" for b in self.assignment)

    def __lt__(self, other: TotalConfig) -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return " ".join(self.selected) or "-"

    def flip(self, names: Iterable[str]) -> TotalConfig:
        return TotalConfig(self.space, self.bits ^ self.space.mask(names))


@dataclass(frozen=True)
class PartialConfig:
    """A partial assignment, stored as two disjoint bitmasks.

    ``pos`` holds the features fixed to true, ``neg`` those fixed to false.
    """

    space: FeatureSpace = field(compare=False, repr=False)
    pos: int
    neg: int

    def __post_init__(self):
        if self.pos & self.neg:
            raise AnalysisError("bad-config", "a feature cannot be both true and false")
        if (self.pos | self.neg) & ~self.space.full_mask:
            raise AnalysisError("bad-config", "literal outside the feature space")

    @classmethod
    def from_literals(cls, space: FeatureSpace, literals: Mapping[str, bool]) -> PartialConfig:
        pos = neg = 0
        for name, value in literals.items():
            bit = 1 << space.position(name)
            if value:
                pos |= bit
            else:
                neg |= bit
        return cls(space, pos, neg)

    @classmethod
    def from_total(cls, config: TotalConfig) -> PartialConfig:
        return cls(config.space, config.bits, config.space.full_mask & ~config.bits)

    def __eq__(self, other):
        if not isinstance(other, PartialConfig):
            return NotImplemented
        return self.space is other.space and self.pos == other.pos and self.neg == other.neg

    def __hash__(self):
        return hash((self.pos, self.neg))

    @property
    def support_mask(self) -> int:
        return self.pos | self.neg

    @property
    def support(self) -> tuple[str, ...]:
        m = self.support_mask
        return tuple(n for i, n in enumerate(self.space.names) if (m >> i) & 1)

    def __len__(self) -> int:
        return self.support_mask.bit_count()

    @property
    def literals(self) -> dict[str, bool]:
        return {n: bool((self.pos >> self.space.index[n]) & 1) for n in self.support}

    def literal_seq(self) -> tuple[tuple[int, int], ...]:
        """Literals in declaration order as ``(index, 0 for true / 1 for false)``."""
        m = self.support_mask
        return tuple(
            (i, 0 if (self.pos >> i) & 1 else 1) for i in range(len(self.space)) if (m >> i) & 1
        )

    def sort_key(self) -> tuple:
        return (len(self), self.literal_seq())

    def __str__(self) -> str:
        if not self.support_mask:
            return "true"
        parts = []
        for i, neg in self.literal_seq():
            name = self.space.names[i]
            parts.append("!" + name if neg else name)
        return " & ".join(parts)

    def covers_bits(self, bits: int) -> bool:
        return (bits & self.pos) == self.pos and not (bits & self.neg)

    def __contains__(self, config: TotalConfig) -> bool:
        return self.covers_bits(config.bits)

    def agrees_with(self, other: PartialConfig) -> bool:
        """True if ``other`` fixes every literal of ``self`` the same way."""
        return (self.pos & other.pos) == self.pos and (self.neg & other.neg) == self.neg

    def with_literal(self, name: str, value: bool) -> PartialConfig:
        bit = 1 << self.space.position(name)
        pos, neg = self.pos & ~bit, self.neg & ~bit
        return PartialConfig(self.space, pos | bit if value else pos, neg if value else neg | bit)


class ConfigSet:
    """A set of total configurations, held as a node of the space's BDD.

    Two sets over one space are equal exactly when they share a node.
    """

    __slots__ = ("space", "node")

    def __init__(self, space: FeatureSpace, node: int):
        self.space = space
        self.node = node

    @property
    def _bdd(self) -> BDD:
        return self.space.bdd

    def _other(self, other: ConfigSet) -> int:
        if not isinstance(other, ConfigSet):
            raise TypeError(f"expected ConfigSet, got {type(other).__name__}")
        _check_space(self.space, other.space)
        return other.node

    def __eq__(self, other):
        if not isinstance(other, ConfigSet):
            return NotImplemented
        return self.space is other.space and self.node == other.node

    def __hash__(self):
        return hash((id(self.space), self.node))

    def __repr__(self) -> str:
        return f"<ConfigSet of {self.count()} configs over {len(self.space)} features>"

    def union(self, other: ConfigSet) -> ConfigSet:
        return ConfigSet(self.space, self._bdd.disj(self.node, self._other(other)))

    def intersect(self, other: ConfigSet) -> ConfigSet:
        return ConfigSet(self.space, self._bdd.conj(self.node, self._other(other)))

    def difference(self, other: ConfigSet) -> ConfigSet:
        return ConfigSet(self.space, self._bdd.diff(self.node, self._other(other)))

    def complement(self) -> ConfigSet:
        return ConfigSet(self.space, self._bdd.negate(self.node))

    __or__ = union
    __and__ = intersect
    __sub__ = difference
    __invert__ = complement

    def is_subset(self, other: ConfigSet) -> bool:
        return self._bdd.diff(self.node, self._other(other)) == FALSE

    def is_empty(self) -> bool:
        return self.node == FALSE

    def __bool__(self) -> bool:
        return self.node != FALSE

    def count(self) -> int:
        return self._bdd.count(self.node)

    __len__ = count

    def __iter__(self) -> Iterator[TotalConfig]:
        for bits in self._bdd.iter_sat(self.node):
            yield TotalConfig(self.space, bits)

    def enumerate(self) -> list[TotalConfig]:
        return list(self)

    def bits_array(self):
        """Member assignments as a numpy uint64 array, in iteration order."""
        return self._bdd.sat_array(self.node)

    def __contains__(self, config: TotalConfig) -> bool:
        _check_space(self.space, config.space)
        return self._bdd.evaluate(self.node, config.bits)

    def first(self) -> TotalConfig | None:
        bits = self._bdd.pick_min(self.node)
        return None if bits is None else TotalConfig(self.space, bits)

    def dense(self):
        """Membership as a numpy bool vector indexed by assignment bits."""
        return self._bdd.dense(self.node)


def semantics(p: PartialConfig) -> ConfigSet:
    """The cube of total configurations agreeing with ``p`` on its support."""
    return ConfigSet(p.space, p.space.bdd.cube(p.pos, p.neg))


def expand(p: PartialConfig, x: str) -> PartialConfig:
    """Drop feature ``x`` from the support of ``p``."""
    bit = 1 << p.space.position(x)
    if not p.support_mask & bit:
        raise AnalysisError("not-in-support", f"feature {x!r} is not in the support")
    return PartialConfig(p.space, p.pos & ~bit, p.neg & ~bit)


def differs_on(origin: TotalConfig, features: Iterable[str]) -> ConfigSet:
    """Configurations that disagree with ``origin`` on at least one of ``features``."""
    space = origin.space
    bdd = space.bdd
    u = FALSE
    for name in features:
        i = space.position(name)
        u = bdd.disj(u, bdd.literal(i, not (origin.bits >> i) & 1))
    return ConfigSet(space, u)


def min_switch(
    target: ConfigSet, origin: TotalConfig, required: Iterable[str]
) -> tuple[int, TotalConfig] | None:
    """Closest member of ``target`` that differs from ``origin`` on a required feature.

    Returns ``(hamming distance, witness)`` or ``None`` when no member
    qualifies.  Ties resolve to the lexicographically least witness.
    """
    required = list(required)
    if not required:
        raise AnalysisError("empty-required", "at least one required feature is needed")
    _check_space(target.space, origin.space)
    candidates = target & differs_on(origin, required)
    found = target.space.bdd.nearest(candidates.node, origin.bits)
    if found is None:
        return None
    dist, bits = found
    return dist, TotalConfig(target.space, bits)
