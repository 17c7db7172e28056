"""A small reduced ordered BDD engine.

Variables are numbered ``0 .. nvars-1``; the order is fixed and equal to the
numbering.  Nodes are plain integers: ``0`` is the false terminal, ``1`` the
true terminal.  Assignments are encoded as ints with bit ``i`` holding the
value of variable ``i``.

The engine is not thread-safe; each feature space owns one instance.
"""

from __future__ import annotations

from typing import Iterator

import numpy as np

FALSE = 0
TRUE = 1

_AND, _OR, _DIFF = 0, 1, 2


class BDD:
    def __init__(self, nvars: int):
        self.nvars = nvars
        self._var = [nvars, nvars]
        self._lo = [0, 1]
        self._hi = [0, 1]
        self._unique: dict[tuple[int, int, int], int] = {}
        self._apply_cache: dict[tuple[int, int, int], int] = {}
        self._not_cache: dict[int, int] = {}
        self._count_cache: dict[int, int] = {}
        # Scratch space for algorithms layered on top (e.g. prime computation).
        self.caches: dict[str, dict] = {}

    def __len__(self) -> int:
        return len(self._var)

    # -- node access -------------------------------------------------------
    def var(self, u: int) -> int:
        return self._var[u]

    def low(self, u: int) -> int:
        return self._lo[u]

    def high(self, u: int) -> int:
        return self._hi[u]

    def mk(self, v: int, lo: int, hi: int) -> int:
        if lo == hi:
            return lo
        key = (v, lo, hi)
        u = self._unique.get(key)
        if u is None:
            u = len(self._var)
            self._var.append(v)
            self._lo.append(lo)
            self._hi.append(hi)
            self._unique[key] = u
        return u

    def literal(self, v: int, positive: bool = True) -> int:
        return self.mk(v, FALSE, TRUE) if positive else self.mk(v, TRUE, FALSE)

    def cube(self, pos: int, neg: int) -> int:
        """Conjunction of the literals given by two bitmasks."""
        u = TRUE
        for v in range(self.nvars - 1, -1, -1):
            bit = 1 << v
            if pos & bit:
                u = self.mk(v, FALSE, u)
            elif neg & bit:
                u = self.mk(v, u, FALSE)
        return u

    def point(self, bits: int) -> int:
        full = (1 << self.nvars) - 1
        return self.cube(bits & full, ~bits & full)

    # -- boolean operations ------------------------------------------------
    def negate(self, u: int) -> int:
        if u <= 1:
            return 1 - u
        r = self._not_cache.get(u)
        if r is None:
            r = self.mk(self._var[u], self.negate(self._lo[u]), self.negate(self._hi[u]))
            self._not_cache[u] = r
        return r

    def conj(self, a: int, b: int) -> int:
        return self._apply(_AND, a, b)

    def disj(self, a: int, b: int) -> int:
        return self._apply(_OR, a, b)

    def diff(self, a: int, b: int) -> int:
        return self._apply(_DIFF, a, b)

    def _apply(self, op: int, a: int, b: int) -> int:
        if op == _AND:
            if a == FALSE or b == FALSE:
                return FALSE
            if a == TRUE or a == b:
                return b
            if b == TRUE:
                return a
            if a > b:
                a, b = b, a
        elif op == _OR:
            if a == TRUE or b == TRUE:
                return TRUE
            if a == FALSE or a == b:
                return b
            if b == FALSE:
                return a
            if a > b:
                a, b = b, a
        else:
            if a == FALSE or b == TRUE or a == b:
                return FALSE
            if b == FALSE:
                return a
            if a == TRUE:
                return self.negate(b)
        key = (op, a, b)
        r = self._apply_cache.get(key)
        if r is not None:
            return r
        va, vb = self._var[a], self._var[b]
        v = min(va, vb)
        a0, a1 = (self._lo[a], self._hi[a]) if va == v else (a, a)
        b0, b1 = (self._lo[b], self._hi[b]) if vb == v else (b, b)
        r = self.mk(v, self._apply(op, a0, b0), self._apply(op, a1, b1))
        self._apply_cache[key] = r
        return r

    # -- queries -----------------------------------------------------------
    def evaluate(self, u: int, bits: int) -> bool:
        while u > 1:
            u = self._hi[u] if (bits >> self._var[u]) & 1 else self._lo[u]
        return u == TRUE

    def count(self, u: int) -> int:
        """Number of satisfying assignments over all ``nvars`` variables."""
        return self._count_below(u) << self._var[u]

    def _count_below(self, u: int) -> int:
        # assignments to variables var(u) .. nvars-1
        if u <= 1:
            return u
        c = self._count_cache.get(u)
        if c is None:
            v = self._var[u]
            lo, hi = self._lo[u], self._hi[u]
            c = (self._count_below(lo) << (self._var[lo] - v - 1)) + (
                self._count_below(hi) << (self._var[hi] - v - 1)
            )
            self._count_cache[u] = c
        return c

    def iter_sat(self, u: int) -> Iterator[int]:
        """Yield satisfying assignments in lexicographic order.

        The order compares variable 0 first, with false before true.
        """
        n = self.nvars
        lo_, hi_, var_ = self._lo, self._hi, self._var

        def walk(node: int, level: int, acc: int) -> Iterator[int]:
            if node == FALSE:
                return
            if level == n:
                yield acc
                return
            if var_[node] > level:
                yield from walk(node, level + 1, acc)
                yield from walk(node, level + 1, acc | (1 << level))
            else:
                yield from walk(lo_[node], level + 1, acc)
                yield from walk(hi_[node], level + 1, acc | (1 << level))

        yield from walk(u, 0, 0)

    def sat_array(self, u: int) -> np.ndarray:
        """All satisfying assignments as a uint64 array, in :meth:`iter_sat` order."""
        memo: dict[int, np.ndarray] = {}

        def pad(arr: np.ndarray, start: int, stop: int) -> np.ndarray:
            # free variables start..stop-1, the smallest one most significant
            for k in range(stop - 1, start - 1, -1):
                arr = np.concatenate([arr, arr | np.uint64(1 << k)])
            return arr

        def below(node: int) -> np.ndarray:
            # assignments over variables var(node) .. nvars-1
            if node == FALSE:
                return np.zeros(0, dtype=np.uint64)
            if node == TRUE:
                return np.zeros(1, dtype=np.uint64)
            r = memo.get(node)
            if r is None:
                v = self._var[node]
                lo, hi = self._lo[node], self._hi[node]
                r0 = pad(below(lo), v + 1, self._var[lo])
                r1 = pad(below(hi), v + 1, self._var[hi]) | np.uint64(1 << v)
                r = memo[node] = np.concatenate([r0, r1])
            return r

        return pad(below(u), 0, self._var[u]) if u != FALSE else below(u)

    def pick_min(self, u: int) -> int | None:
        """Lexicographically least satisfying assignment."""
        if u == FALSE:
            return None
        bits = 0
        while u > 1:
            if self._lo[u] != FALSE:
                u = self._lo[u]
            else:
                bits |= 1 << self._var[u]
                u = self._hi[u]
        return bits

    def nearest(self, u: int, origin: int) -> tuple[int, int] | None:
        """Minimum Hamming distance from ``origin`` to a member of ``u``.

        Returns ``(distance, witness)``; among witnesses at minimum distance
        the lexicographically least one is chosen.
        """
        if u == FALSE:
            return None
        lo_, hi_, var_ = self._lo, self._hi, self._var
        memo: dict[int, int] = {FALSE: 1 << 30, TRUE: 0}

        def cost(node: int) -> int:
            c = memo.get(node)
            if c is None:
                bit = (origin >> var_[node]) & 1
                c = min(cost(lo_[node]) + bit, cost(hi_[node]) + (1 - bit))
                memo[node] = c
            return c

        best = cost(u)
        witness = 0
        node = u
        for level in range(self.nvars):
            obit = (origin >> level) & 1
            if node <= 1 or var_[node] > level:
                witness |= obit << level
                continue
            c_lo = cost(lo_[node]) + obit
            c_hi = cost(hi_[node]) + (1 - obit)
            if c_lo <= c_hi:
                node = lo_[node]
            else:
                witness |= 1 << level
                node = hi_[node]
        return best, witness

    def dense(self, u: int) -> np.ndarray:
        """Boolean membership vector indexed by assignment (``2**nvars`` long)."""
        n = self.nvars
        var = np.asarray(self._var, dtype=np.int64)
        lo = np.asarray(self._lo, dtype=np.int64)
        hi = np.asarray(self._hi, dtype=np.int64)
        idx = np.arange(1 << n, dtype=np.int64)
        nodes = np.full(1 << n, u, dtype=np.int64)
        for _ in range(n):
            inner = nodes > 1
            if not inner.any():
                break
            sub = nodes[inner]
            bit = (idx[inner] >> var[sub]) & 1
            nodes[inner] = np.where(bit == 1, hi[sub], lo[sub])
        return nodes == TRUE

    def from_dense(self, members: np.ndarray) -> int:
        """Inverse of :meth:`dense`."""
        layer = [TRUE if m else FALSE for m in np.asarray(members, dtype=bool).tolist()]
        if len(layer) != 1 << self.nvars:
            raise ValueError("membership vector has the wrong length")
        # the highest variable is the most significant index bit
        for v in range(self.nvars - 1, -1, -1):
            half = 1 << v
            layer = [self.mk(v, layer[i], layer[i + half]) for i in range(half)]
        return layer[0]
