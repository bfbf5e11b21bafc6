"""Finite sets, maps, pullbacks and the span category Span(F).

A finite set is its cardinality ``n``; its elements are ``0..n-1``.
Spans are kept up to isomorphism of the apex as multiplicity matrices.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

from .errors import InputError

FinSetObj = int


def _check_size(n) -> int:
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise InputError(f"not a finite set size: {n!r}")
    return n


@dataclass(frozen=True)
class FinMap:
    dom: int
    cod: int
    table: tuple

    def __post_init__(self):
        _check_size(self.dom)
        _check_size(self.cod)
        t = tuple(self.table)
        object.__setattr__(self, "table", t)
        if len(t) != self.dom:
            raise InputError(f"map table has {len(t)} entries for a domain of size {self.dom}")
        for v in t:
            if not isinstance(v, int) or not 0 <= v < self.cod:
                raise InputError(f"map value {v!r} outside codomain of size {self.cod}")

    def __call__(self, x: int) -> int:
        return self.table[x]

    def then(self, other: "FinMap") -> "FinMap":
        if self.cod != other.dom:
            raise InputError("maps are not composable")
        return FinMap(self.dom, other.cod, tuple(other.table[v] for v in self.table))

    def is_bijective(self) -> bool:
        return self.dom == self.cod and len(set(self.table)) == self.dom

    @staticmethod
    def identity(n: int) -> "FinMap":
        return FinMap(n, n, tuple(range(n)))


@dataclass(frozen=True)
class SpanWitness:
    dom: int
    cod: int
    apex: int
    left: FinMap
    right: FinMap

    def __post_init__(self):
        if self.left.dom != self.apex or self.right.dom != self.apex:
            raise InputError("span legs must start at the apex")
        if self.left.cod != self.dom or self.right.cod != self.cod:
            raise InputError("span legs must end at the feet")

    @staticmethod
    def of(dom: int, cod: int, left, right) -> "SpanWitness":
        left, right = tuple(left), tuple(right)
        if len(left) != len(right):
            raise InputError("span legs have different lengths")
        n = len(left)
        return SpanWitness(dom, cod, n, FinMap(n, dom, left), FinMap(n, cod, right))


@dataclass(frozen=True)
class Span:
    dom: int
    cod: int
    matrix: tuple

    def __post_init__(self):
        _check_size(self.dom)
        _check_size(self.cod)
        rows = tuple(tuple(r) for r in self.matrix)
        if len(rows) != self.dom or any(len(r) != self.cod for r in rows):
            raise InputError(f"matrix shape does not match feet {self.dom}x{self.cod}")
        for r in rows:
            for v in r:
                if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                    raise InputError(f"matrix entry {v!r} is not a natural number")
        object.__setattr__(self, "matrix", rows)

    @property
    def total(self) -> int:
        return sum(map(sum, self.matrix))

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.matrix)

    def col_sums(self) -> tuple:
        return tuple(sum(r[j] for r in self.matrix) for j in range(self.cod))

    def row_sums(self) -> tuple:
        return tuple(sum(r) for r in self.matrix)

    def witness(self) -> SpanWitness:
        """The canonical apex: row-major over (row, column, multiplicity)."""
        left, right = [], []
        for i, row in enumerate(self.matrix):
            for j, m in enumerate(row):
                left += [i] * m
                right += [j] * m
        return SpanWitness.of(self.dom, self.cod, left, right)

    @staticmethod
    def identity(n: int) -> "Span":
        return Span(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @staticmethod
    def zero(s: int, t: int) -> "Span":
        return Span(s, t, tuple((0,) * t for _ in range(s)))


def pullback(f: FinMap, g: FinMap):
    """Return (P, pA, pB); P lists the pairs (a, b) with f(a) = g(b) lexicographically."""
    if f.cod != g.cod:
        raise InputError("pullback needs maps into the same set")
    fibres = {}
    for b, c in enumerate(g.table):
        fibres.setdefault(c, []).append(b)
    pairs = [(a, b) for a, c in enumerate(f.table) for b in fibres.get(c, ())]
    n = len(pairs)
    return n, FinMap(n, f.dom, tuple(p[0] for p in pairs)), FinMap(n, g.dom, tuple(p[1] for p in pairs))


def canonicalize(w: SpanWitness) -> Span:
    m = [[0] * w.cod for _ in range(w.dom)]
    for e in range(w.apex):
        m[w.left(e)][w.right(e)] += 1
    return Span(w.dom, w.cod, tuple(map(tuple, m)))


def compose_witnesses(w1: SpanWitness, w2: SpanWitness) -> SpanWitness:
    if w1.cod != w2.dom:
        raise InputError("span feet do not match")
    n, p1, p2 = pullback(w1.right, w2.left)
    return SpanWitness(w1.dom, w2.cod, n, p1.then(w1.left), p2.then(w2.right))


def compose_spans(s1: Span, s2: Span) -> Span:
    """Composite S -> U of s1: S -> T and s2: T -> U (matrix product s1 . s2)."""
    if s1.cod != s2.dom:
        raise InputError(f"cannot compose spans: {s1.cod} != {s2.dom}")
    b = s2.matrix
    rows = []
    for row in s1.matrix:
        out = [0] * s2.cod
        for j, m in enumerate(row):
            if m:
                for k, v in enumerate(b[j]):
                    out[k] += m * v
        rows.append(tuple(out))
    return Span(s1.dom, s2.cod, tuple(rows))


def is_inert(s: Span) -> bool:
    # right leg bijective: each column holds exactly one 1
    return all(sorted(s.column(j)) == [0] * (s.dom - 1) + [1] for j in range(s.cod))


def is_active(s: Span) -> bool:
    # left leg bijective: each row holds exactly one 1
    return all(sorted(r) == [0] * (s.cod - 1) + [1] for r in s.matrix)


def is_iso(s: Span) -> bool:
    return is_inert(s) and is_active(s)


def factor_inert_active(s: Span):
    """Split s: S -> T as an inert i: S -> K followed by an active a: K -> T.

    K has one element per apex element, in row-major order, except that an
    inert span factors as itself followed by the identity.
    """
    if is_inert(s):
        return s, Span.identity(s.cod)
    w = s.witness()
    k = w.apex
    inert = Span(s.dom, k, tuple(tuple(int(w.left(e) == i) for e in range(k)) for i in range(s.dom)))
    active = Span(k, s.cod, tuple(tuple(int(w.right(e) == j) for j in range(s.cod)) for e in range(k)))
    return inert, active


def active_map(a: Span) -> FinMap:
    if not is_active(a):
        raise InputError("span is not active")
    return FinMap(a.dom, a.cod, tuple(r.index(1) for r in a.matrix))


def rho_inert(S: int, s: int) -> Span:
    if not 0 <= s < S:
        raise InputError(f"element {s} not in a set of size {S}")
    return Span(S, 1, tuple((int(i == s),) for i in range(S)))


def embed_pointed_map(S: int, T: int, phi: dict) -> Span:
    """Span S <- def(phi) -> T of a pointed map S+ -> T+.

    ``phi`` maps the elements not sent to the basepoint.
    """
    m = [[0] * T for _ in range(S)]
    for x, y in phi.items():
        if not (0 <= x < S and 0 <= y < T):
            raise InputError(f"pointed map entry {x}->{y} out of range")
        m[x][y] = 1
    return Span(S, T, tuple(map(tuple, m)))


def compose_pointed(phi: dict, psi: dict) -> dict:
    return {x: psi[y] for x, y in phi.items() if y in psi}


def block_inert(S: int, block) -> Span:
    """Inert span S -> len(block) restricting to the listed elements."""
    block = list(block)
    return Span(S, len(block), tuple(tuple(int(b == i) for b in block) for i in range(S)))


def product_cone(S: int, T: int):
    ST = S + T
    return ST, block_inert(ST, range(S)), block_inert(ST, range(S, ST))


def iter_matrices(s: int, t: int, d: int, exact: bool = False):
    """All natural-number s x t matrices with total <= d (or == d)."""
    n = s * t
    if n == 0:
        if not exact or d == 0:
            yield ((),) * s
        return

    def rec(i, left):
        if i == n - 1:
            lo = left if exact else 0
            for v in range(lo, left + 1):
                yield (v,)
            return
        for v in range(left + 1):
            for rest in rec(i + 1, left - v):
                yield (v,) + rest

    for flat in rec(0, d):
        yield tuple(flat[r * t:(r + 1) * t] for r in range(s))


def iter_spans(S: int, T: int, d: int, exact: bool = False):
    for m in iter_matrices(S, T, d, exact):
        yield Span(S, T, m)


def hom_count(S: int, T: int, d: int) -> int:
    if d < 0:
        raise InputError("grade bound must be non-negative")
    return comb(d + S * T, S * T)


def witness_iso(w1: SpanWitness, w2: SpanWitness):
    """Search an apex bijection over the fixed feet; None if there is none."""
    if (w1.dom, w1.cod, w1.apex) != (w2.dom, w2.cod, w2.apex):
        return None
    target = {}
    for e in range(w2.apex):
        target.setdefault((w2.left(e), w2.right(e)), []).append(e)
    used = {k: 0 for k in target}
    bij = []
    for e in range(w1.apex):
        key = (w1.left(e), w1.right(e))
        if key not in target or used[key] >= len(target[key]):
            return None
        bij.append(target[key][used[key]])
        used[key] += 1
    return bij


def brute_iso(w1: SpanWitness, w2: SpanWitness) -> bool:
    """Exhaustive apex-bijection search, used only as an oracle on tiny apexes."""
    if (w1.dom, w1.cod, w1.apex) != (w2.dom, w2.cod, w2.apex):
        return False
    for p in itertools.permutations(range(w1.apex)):
        if all(w1.left(e) == w2.left(p[e]) and w1.right(e) == w2.right(p[e]) for e in range(w1.apex)):
            return True
    return False
