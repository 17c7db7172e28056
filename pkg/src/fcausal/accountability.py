"""Responsibility and blame of features and partial configurations.

All values are exact :class:`fractions.Fraction` objects.

Two routes compute switching distances.  Single queries search the decision
diagram (:func:`fcausal.configspace.min_switch`).  Whole tables over the
effect set use a Hamming distance transform on a dense membership vector,
one pass per feature, which is much faster for spaces of up to
``DENSE_LIMIT`` features.
"""

from __future__ import annotations

import csv
import io
from collections import defaultdict
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .causes import AnalysisSession
from .configspace import ConfigSet, PartialConfig, TotalConfig, min_switch
from .errors import AnalysisError, InvariantError
from .ingest import read_config_list

DENSE_LIMIT = 22
DENSE_MAX_REQUIRED = 8
_INF = 10_000


class Distribution:
    """Probability mass over valid configurations, exact and summing to one.

    Uniform distributions over a config set are kept symbolic; explicit
    weight tables are stored as a mapping.
    """

    def __init__(self, weights: Mapping[TotalConfig, Fraction], valid: ConfigSet | None = None):
        self._weights: dict[TotalConfig, Fraction] | None = {}
        total = Fraction(0)
        for config, w in weights.items():
            w = Fraction(w)
            if w < 0:
                raise AnalysisError("bad-distribution", f"negative weight for {config}")
            if valid is not None and config not in valid:
                raise AnalysisError("bad-distribution", f"configuration {config} is not valid")
            if w:
                self._weights[config] = w
            total += w
        if total != 1:
            raise AnalysisError("bad-distribution", f"weights sum to {total}, not 1")
        self._by_bits = {c.bits: w for c, w in self._weights.items()}
        self._support: ConfigSet | None = None
        values = set(self._weights.values())
        self.uniform_value = values.pop() if len(values) == 1 else None
        self._keys = None

    @classmethod
    def uniform(cls, support: ConfigSet) -> Distribution:
        n = support.count()
        if n == 0:
            raise AnalysisError("bad-distribution", "uniform distribution over an empty set")
        self = cls.__new__(cls)
        self._weights = None
        self._by_bits = None
        self._support = support
        self.uniform_value = Fraction(1, n)
        self._keys = None
        return self

    @property
    def weights(self) -> dict[TotalConfig, Fraction]:
        if self._weights is None:
            self._weights = {c: self.uniform_value for c in self._support}
        return self._weights

    def __getitem__(self, config: TotalConfig) -> Fraction:
        if self._support is not None:
            return self.uniform_value if config in self._support else Fraction(0)
        return self._weights.get(config, Fraction(0))

    def weight_of_bits(self, bits: int) -> Fraction:
        if self._support is not None:
            hit = self._support.space.bdd.evaluate(self._support.node, bits)
            return self.uniform_value if hit else Fraction(0)
        return self._by_bits.get(bits, Fraction(0))

    def support_of(self, bits: np.ndarray) -> np.ndarray:
        """Which of the given assignments carry positive mass."""
        if self._keys is None:
            if self._support is not None:
                self._keys = self._support.bits_array()
            else:
                self._keys = np.fromiter(self._by_bits, dtype=np.uint64, count=len(self._by_bits))
        return np.isin(bits, self._keys)

    def __len__(self) -> int:
        return self._support.count() if self._support is not None else len(self._weights)


def uniform_over_effects(s: AnalysisSession) -> Distribution:
    if s.effect.is_empty():
        raise AnalysisError("empty-effect", "no effect instances to distribute over")
    return Distribution.uniform(s.effect)


def uniform_over_valid(s: AnalysisSession) -> Distribution:
    return Distribution.uniform(s.valid)


def parse_weight(text: str) -> Fraction:
    """Exact weight from ``p/q`` or a decimal with at most 9 fractional digits."""
    text = text.strip()
    try:
        if "/" in text:
            num, den = text.split("/")
            return Fraction(int(num), int(den))
        d = Decimal(text)
    except (ValueError, ZeroDivisionError, InvalidOperation):
        raise AnalysisError("bad-distribution", f"unparsable weight {text!r}") from None
    if not d.is_finite() or d.as_tuple().exponent < -9:
        raise AnalysisError("bad-distribution", f"weight {text!r} needs at most 9 fractional digits")
    return Fraction(d)


def from_weights(table: Mapping[TotalConfig, Fraction | str] | str, valid: ConfigSet) -> Distribution:
    """Build a distribution from a mapping or from weight-table CSV text.

    The CSV has a ``weight`` column plus either one 0/1 column per feature
    or a ``config`` column in configuration-list notation (``m e a``, ``-``).
    """
    if isinstance(table, str):
        table = _read_weight_csv(table, valid)
    return Distribution({c: parse_weight(w) if isinstance(w, str) else w for c, w in table.items()}, valid)


def _read_weight_csv(text: str, valid: ConfigSet) -> dict[TotalConfig, str]:
    space = valid.space
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise AnalysisError("bad-distribution", "weight table is empty") from None
    if "weight" not in header:
        raise AnalysisError("bad-distribution", "weight table lacks a 'weight' column")
    by_name = "config" in header and "config" not in space.index
    missing = [f for f in space.names if f not in header]
    if missing and not by_name:
        raise AnalysisError("bad-distribution", f"weight table lacks feature columns: {', '.join(missing)}")
    cols = {name: header.index(name) for name in space.names if name in header}
    wcol = header.index("weight")
    out: dict[TotalConfig, str] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if by_name:
            listed = read_config_list(row[header.index("config")] or "-", space)
            if len(listed) != 1:
                raise AnalysisError("bad-distribution", f"row {lineno}: expected one configuration")
            config = listed[0]
        else:
            bits = 0
            for name, j in cols.items():
                cell = row[j].strip()
                if cell not in ("0", "1"):
                    raise AnalysisError("bad-distribution", f"row {lineno}: feature cell {name}={cell!r} is not 0/1")
                if cell == "1":
                    bits |= 1 << space.index[name]
            config = TotalConfig(space, bits)
        if config in out:
            raise AnalysisError("bad-distribution", f"row {lineno}: duplicate configuration {config}")
        out[config] = row[wcol]
    return out


def switch(features: Iterable[str], config: TotalConfig) -> TotalConfig:
    """Flip exactly the given features."""
    return config.flip(features)


# -- single queries (decision-diagram route) -------------------------------------------


def _require_effect(eta: TotalConfig, s: AnalysisSession) -> None:
    if eta not in s.effect:
        raise AnalysisError("not-an-effect-instance", f"{eta} is not an effect instance")


def _gate(p: PartialConfig, eta: TotalConfig, s: AnalysisSession) -> bool:
    return any(g.covers_bits(eta.bits) and p.agrees_with(g) for g in s.causes)


def _distance_fraction(p: PartialConfig, eta: TotalConfig, s: AnalysisSession) -> Fraction:
    found = min_switch(s.non_effect, eta, p.support)
    if found is None:
        raise InvariantError(f"no counterfactual switch for {p} at {eta} despite a covering cause")
    return Fraction(1, found[0])


def responsibility(x: str, eta: TotalConfig, s: AnalysisSession) -> Fraction:
    _require_effect(eta, s)
    i = s.space.position(x)
    bit = 1 << i
    if not any(g.covers_bits(eta.bits) and g.support_mask & bit for g in s.causes):
        return Fraction(0)
    return _distance_fraction(PartialConfig(s.space, eta.bits & bit, ~eta.bits & bit), eta, s)


def interaction_responsibility(p: PartialConfig, eta: TotalConfig, s: AnalysisSession) -> Fraction:
    _require_effect(eta, s)
    if not p.support_mask:
        raise AnalysisError("empty-required", "interaction needs a non-empty support")
    if not _gate(p, eta, s):
        return Fraction(0)
    return _distance_fraction(p, eta, s)


# -- tables over the whole effect set ---------------------------------------------------


class ResponsibilityTable:
    """Switching distances for every effect instance, computed in bulk.

    :meth:`feature` and :meth:`partial` return int arrays aligned with :attr:`effects`
    (lexicographic order); ``0`` stands for responsibility zero and ``k > 0``
    for ``1/k``.
    """

    def __init__(self, s: AnalysisSession, dense: bool | None = None):
        self.session = s
        self.n = len(s.space)
        self.dense = self.n <= DENSE_LIMIT if dense is None else dense
        self._eta = s.effect.bits_array()
        self.effects = self._eta.tolist()
        self._causes = list(s.causes)
        self._cover = None
        self._target = None
        self._cache: dict[int, np.ndarray] = {}
        self._mass: dict[Distribution, tuple] = {}

    def _covered_by(self) -> list[np.ndarray]:
        if self._cover is None:
            eta = self._eta
            self._cover = []
            for g in self._causes:
                pos, neg = np.uint64(g.pos), np.uint64(g.neg)
                self._cover.append(((eta & pos) == pos) & ((eta & neg) == 0))
        return self._cover

    def gate(self, p: PartialConfig) -> np.ndarray:
        """Effect instances covered by some cause that extends ``p``."""
        out = np.zeros(len(self.effects), dtype=bool)
        for g, covered in zip(self._causes, self._covered_by()):
            if p.agrees_with(g):
                out |= covered
        return out

    def feature_gate(self, x: str) -> np.ndarray:
        bit = 1 << self.session.space.position(x)
        out = np.zeros(len(self.effects), dtype=bool)
        for g, covered in zip(self._causes, self._covered_by()):
            if g.support_mask & bit:
                out |= covered
        return out

    def _transform(self, skip: int) -> np.ndarray:
        if self._target is None:
            self._target = self.session.non_effect.dense()
        return hamming_transform(self._target, self.n, skip)

    def distances(self, required_mask: int) -> np.ndarray:
        """Min switch distance for each effect instance (``_INF`` if none)."""
        key = required_mask
        if key in self._cache:
            return self._cache[key]
        if self.dense and required_mask.bit_count() <= DENSE_MAX_REQUIRED:
            d = self._transform(required_mask)
            eta = self._eta.astype(np.int64)
            best = np.full(len(eta), _INF, dtype=np.int64)
            r = required_mask
            while r:
                best = np.minimum(best, r.bit_count() + d[eta ^ r].astype(np.int64))
                r = (r - 1) & required_mask
        else:
            space = self.session.space
            names = [space.names[i] for i in range(self.n) if (required_mask >> i) & 1]
            best = np.full(len(self.effects), _INF, dtype=np.int64)
            for k, bits in enumerate(self.effects):
                found = min_switch(self.session.non_effect, TotalConfig(space, bits), names)
                if found is not None:
                    best[k] = found[0]
        self._cache[key] = best
        return best

    def feature(self, x: str) -> np.ndarray:
        gate = self.feature_gate(x)
        return self._gated(gate, 1 << self.session.space.position(x))

    def partial(self, p: PartialConfig) -> np.ndarray:
        if not p.support_mask:
            raise AnalysisError("empty-required", "interaction needs a non-empty support")
        return self._gated(self.gate(p), p.support_mask)

    def _gated(self, gate: np.ndarray, mask: int) -> np.ndarray:
        out = np.zeros(len(self.effects), dtype=np.int64)
        if gate.any():
            dist = self.distances(mask)
            if (dist[gate] >= _INF).any():
                raise InvariantError("covered effect instance without a counterfactual switch")
            out[gate] = dist[gate]
        return out

    def weighted_sum(self, dens: np.ndarray, pi: Distribution) -> Fraction:
        """Sum of ``pi(eta) / dens[eta]`` over instances with a positive entry."""
        if pi not in self._mass:
            support = pi.support_of(self._eta)
            weights = None
            if pi.uniform_value is None:
                weights = [pi.weight_of_bits(b) if hit else None for b, hit in zip(self.effects, support.tolist())]
            self._mass[pi] = (support, weights)
        support, weights = self._mass[pi]
        total = Fraction(0)
        if weights is None:
            vals, counts = np.unique(dens[support & (dens > 0)], return_counts=True)
            for d, c in zip(vals.tolist(), counts.tolist()):
                total += Fraction(c, d)
            return total * pi.uniform_value
        by_den: dict[int, Fraction] = defaultdict(Fraction)
        for k in np.flatnonzero(support & (dens > 0)).tolist():
            by_den[int(dens[k])] += weights[k]
        for d, w in by_den.items():
            total += w / d
        return total


def hamming_transform(target: np.ndarray, n: int, skip: int = 0) -> np.ndarray:
    """Distance from every assignment to the nearest member of ``target``.

    Dimensions whose bit is set in ``skip`` are not relaxed, so the nearest
    member must agree with the assignment on those features.
    """
    d = np.where(target, 0, _INF).astype(np.int32)
    for i in range(n):
        if (skip >> i) & 1:
            continue
        view = d.reshape(-1, 2, 1 << i)
        lo = view[:, 0, :].copy()
        hi = view[:, 1, :]
        np.minimum(lo, hi + 1, out=view[:, 0, :])
        np.minimum(hi, lo + 1, out=view[:, 1, :])
    return np.minimum(d, _INF)


def blame(x: str, pi: Distribution, s: AnalysisSession, table: ResponsibilityTable | None = None) -> Fraction:
    table = table or ResponsibilityTable(s)
    return table.weighted_sum(table.feature(x), pi)


def interaction_blame(
    p: PartialConfig, pi: Distribution, s: AnalysisSession, table: ResponsibilityTable | None = None
) -> Fraction:
    table = table or ResponsibilityTable(s)
    return table.weighted_sum(table.partial(p), pi)


def as_fraction(den: int) -> Fraction:
    return Fraction(1, den) if den else Fraction(0)
