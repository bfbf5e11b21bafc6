"""Truncated simplicial sets: nerves, the Segal condition and completeness.

Simplices of each level are indexed 0..|S_n|-1.  ``faces[n][i]`` maps
S_n -> S_{n-1} and ``degens[n][i]`` maps S_n -> S_{n+1}.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from . import finspan as fs
from .category import (FiniteCategory, contractible_groupoid, cyclic_group, disjoint_union, point,
                       preorder)
from .errors import InputError, PreconditionError
from .finspan import Span
from .monad import IndexedFamily, PinnedCategory, linear_monad
from .operators import Morphism, OperatorCategory


@dataclass
class TruncatedSimplicialSet:
    sizes: list
    faces: list       # faces[n][i][x], n >= 1
    degens: list      # degens[n][i][x], n < N
    labels: list = field(default=None)

    def __post_init__(self):
        N = self.level
        if len(self.faces) != N + 1 or len(self.degens) != N + 1:
            raise InputError("face and degeneracy tables must be given for every level")
        for n in range(1, N + 1):
            if len(self.faces[n]) != n + 1:
                raise InputError(f"level {n} needs {n + 1} face maps")
            for i in range(n + 1):
                f = self.faces[n][i]
                if len(f) != self.sizes[n] or any(not 0 <= v < self.sizes[n - 1] for v in f):
                    raise InputError(f"face {i} at level {n} is malformed")
        for n in range(N):
            if len(self.degens[n]) != n + 1:
                raise InputError(f"level {n} needs {n + 1} degeneracies")
            for i in range(n + 1):
                s = self.degens[n][i]
                if len(s) != self.sizes[n] or any(not 0 <= v < self.sizes[n + 1] for v in s):
                    raise InputError(f"degeneracy {i} at level {n} is malformed")

    @property
    def level(self) -> int:
        return len(self.sizes) - 1

    def d(self, n, i, x):
        return self.faces[n][i][x]

    def s(self, n, i, x):
        return self.degens[n][i][x]

    def identity_violations(self) -> list:
        """Simplicial identities within the truncation."""
        N, out = self.level, []
        d, s = self.d, self.s
        for n in range(2, N + 1):
            for x in range(self.sizes[n]):
                for j in range(n + 1):
                    for i in range(j):
                        if d(n - 1, i, d(n, j, x)) != d(n - 1, j - 1, d(n, i, x)):
                            out.append(("dd", n, i, j, x))
        for n in range(N):
            for x in range(self.sizes[n]):
                for i in range(n + 1):
                    y = s(n, i, x)
                    for j in range(n + 2):
                        if j in (i, i + 1):
                            if d(n + 1, j, y) != x:
                                out.append(("ds", n, i, j, x))
                        elif n >= 1:
                            want = s(n - 1, i - 1, d(n, j, x)) if j < i else s(n - 1, i, d(n, j - 1, x))
                            if d(n + 1, j, y) != want:
                                out.append(("ds", n, i, j, x))
                    if n + 1 < N:
                        for j in range(i, n + 1):
                            if s(n + 1, i, s(n, j, x)) != s(n + 1, j + 1, s(n, i, x)):
                                out.append(("ss", n, i, j, x))
        return out

    def edge(self, n, x, k):
        """The spine edge from vertex k to k+1 of an n-simplex."""
        for m in range(n, 1, -1):
            if k + 1 < m:
                x = self.d(m, m, x)
            else:
                x = self.d(m, 0, x)
                k -= 1
        return x

    def to_json(self) -> dict:
        return {"levels": list(self.sizes), "faces": [[list(f) for f in fl] for fl in self.faces[1:]],
                "degeneracies": [[list(s) for s in sl] for sl in self.degens[:-1]]}

    @staticmethod
    def from_json(data: dict) -> "TruncatedSimplicialSet":
        try:
            sizes = list(data["levels"])
            faces = [[]] + [[list(f) for f in fl] for fl in data["faces"]]
            degens = [[list(s) for s in sl] for sl in data["degeneracies"]] + [[]]
            return TruncatedSimplicialSet(sizes, faces, degens)
        except (KeyError, TypeError) as e:
            raise InputError(f"malformed simplicial set: {e}") from e


def nerve(PC: PinnedCategory, N: int = 3) -> TruncatedSimplicialSet:
    """n-simplices: labels x_0..x_n with a chain of composable morphisms between their pins."""
    if N < 2:
        raise InputError("truncation level must be at least 2")
    C, X = PC.C, PC.labels
    levels = [[((x,), ()) for x in X]]
    for n in range(1, N + 1):
        nxt = []
        for xs, fs_ in levels[-1]:
            last = PC.p(xs[-1])
            for y in X:
                for f in C.hom(last, PC.p(y)):
                    nxt.append((xs + (y,), fs_ + (f,)))
        levels.append(nxt)
    index = [{s: k for k, s in enumerate(lv)} for lv in levels]
    faces = [[]]
    for n in range(1, N + 1):
        per = []
        for i in range(n + 1):
            table = []
            for xs, ms in levels[n]:
                nx = xs[:i] + xs[i + 1:]
                if i == 0:
                    nm = ms[1:]
                elif i == n:
                    nm = ms[:-1]
                else:
                    nm = ms[:i - 1] + (C.then(ms[i - 1], ms[i]),) + ms[i + 1:]
                table.append(index[n - 1][(nx, nm)])
            per.append(table)
        faces.append(per)
    degens = []
    for n in range(N):
        per = []
        for i in range(n + 1):
            table = []
            for xs, ms in levels[n]:
                nx = xs[:i + 1] + xs[i:]
                nm = ms[:i] + (C.ids[PC.p(xs[i])],) + ms[i:]
                table.append(index[n + 1][(nx, nm)])
            per.append(table)
        degens.append(per)
    degens.append([])
    return TruncatedSimplicialSet([len(lv) for lv in levels], faces, degens, labels=levels)


def E(N: int = 3) -> TruncatedSimplicialSet:
    """Nerve of the contractible groupoid on two objects, as a point pinned twice."""
    return nerve(PinnedCategory(point(), ["x0", "x1"], {"x0": "*", "x1": "*"}), N)


def is_segal(T: TruncatedSimplicialSet) -> bool:
    """S_n -> S_1 x_{S_0} ... x_{S_0} S_1 bijective for every n up to the truncation."""
    if T.level < 2:
        raise InputError("truncation level must be at least 2")
    src = [T.d(1, 1, e) for e in range(T.sizes[1])]
    tgt = [T.d(1, 0, e) for e in range(T.sizes[1])]
    out_of = {}
    for e in range(T.sizes[1]):
        out_of.setdefault(src[e], []).append(e)
    for n in range(2, T.level + 1):
        spines = set()
        for x in range(T.sizes[n]):
            sp = tuple(T.edge(n, x, k) for k in range(n))
            if sp in spines or any(tgt[a] != src[b] for a, b in zip(sp, sp[1:])):
                return False
            spines.add(sp)
        # count chains of n composable edges
        chains = [1] * T.sizes[1]
        for _ in range(n - 1):
            chains = [sum(chains[f] for f in out_of.get(tgt[e], ())) for e in range(T.sizes[1])]
        if len(spines) != sum(chains):
            return False
    return True


def _filler(T, f, g):
    """The 2-simplex with spine (f, g), assuming T is Segal."""
    for x in range(T.sizes[2]):
        if T.d(2, 2, x) == f and T.d(2, 0, x) == g:
            return x
    return None


def _composite(T, f, g):
    x = _filler(T, f, g)
    return None if x is None else T.d(2, 1, x)


def invertible_edges(T: TruncatedSimplicialSet) -> list:
    out = []
    src = lambda e: T.d(1, 1, e)
    tgt = lambda e: T.d(1, 0, e)
    for f in range(T.sizes[1]):
        for g in range(T.sizes[1]):
            if src(g) != tgt(f) or tgt(g) != src(f):
                continue
            if _composite(T, f, g) == T.s(0, 0, src(f)) and _composite(T, g, f) == T.s(0, 0, tgt(f)):
                out.append(f)
                break
    return out


def complete_by_invertibles(T: TruncatedSimplicialSet) -> bool:
    degenerate = {T.s(0, 0, x) for x in range(T.sizes[0])}
    return all(f in degenerate for f in invertible_edges(T))


def simplicial_maps(A: TruncatedSimplicialSet, B: TruncatedSimplicialSet, limit=None) -> list:
    """All maps A -> B commuting with faces and degeneracies up to A's truncation."""
    N = min(A.level, B.level)
    # candidates in B by faces
    by_faces = [None]
    for n in range(1, N + 1):
        idx = {}
        for y in range(B.sizes[n]):
            idx.setdefault(tuple(B.d(n, i, y) for i in range(n + 1)), []).append(y)
        by_faces.append(idx)
    cells = [(n, x) for n in range(N + 1) for x in range(A.sizes[n])]
    found = []
    img = [[None] * A.sizes[n] for n in range(N + 1)]

    def rec(k):
        if limit is not None and len(found) >= limit:
            return
        if k == len(cells):
            found.append([list(v) for v in img])
            return
        n, x = cells[k]
        if n == 0:
            cands = range(B.sizes[0])
        else:
            key = tuple(img[n - 1][A.d(n, i, x)] for i in range(n + 1))
            cands = by_faces[n].get(key, ())
        for y in cands:
            # a degenerate simplex must go to the matching degeneracy
            ok = True
            if n >= 1:
                for i in range(n):
                    base = A.d(n, i, x)
                    if A.s(n - 1, i, base) == x and B.s(n - 1, i, img[n - 1][base]) != y:
                        ok = False
                        break
            if not ok:
                continue
            img[n][x] = y
            rec(k + 1)
            img[n][x] = None

    rec(0)
    return found


def complete_by_locality(T: TruncatedSimplicialSet) -> bool:
    """Restriction from maps E -> T to maps point -> T (vertices) is a bijection."""
    maps = simplicial_maps(E(min(T.level, 3)), T)
    restricted = [m[0][0] for m in maps]
    return len(set(restricted)) == len(restricted) == T.sizes[0]


def is_complete(T: TruncatedSimplicialSet, method: str = "both") -> bool:
    if not is_segal(T):
        raise PreconditionError("completeness is only defined for Segal objects")
    if method == "locality":
        return complete_by_locality(T)
    if method == "invertibles":
        return complete_by_invertibles(T)
    a, b = complete_by_locality(T), complete_by_invertibles(T)
    if a != b:
        raise AssertionError("the two completeness tests disagree")
    return a


def category_from_segal(T: TruncatedSimplicialSet) -> FiniteCategory:
    if not is_segal(T):
        raise PreconditionError("not a Segal object")
    objs = [f"v{x}" for x in range(T.sizes[0])]
    homs = [(f"e{f}", f"v{T.d(1, 1, f)}", f"v{T.d(1, 0, f)}") for f in range(T.sizes[1])]
    comp = {}
    for f in range(T.sizes[1]):
        for g in range(T.sizes[1]):
            if T.d(1, 0, f) == T.d(1, 1, g):
                comp[(f"e{f}", f"e{g}")] = f"e{_composite(T, f, g)}"
    ids = {f"v{x}": f"e{T.s(0, 0, x)}" for x in range(T.sizes[0])}
    return FiniteCategory(objs, homs, comp, ids)


# operator categories of categories

def f_op_c(C: FiniteCategory, L: int = 2) -> OperatorCategory:
    """Tuples of objects of C; morphisms lie over maps backwards with a C-morphism per slot."""
    if L < 1:
        raise InputError("length bound must be at least 1")
    obs = list(C.objects)
    objects = [x for n in range(L + 1) for x in itertools.product(obs, repeat=n)]
    homs = {}
    for x in objects:
        for y in objects:
            ms = []
            for back in itertools.product(range(len(x)), repeat=len(y)):
                span = fs.block_inert(len(x), back)
                choices = [C.hom(x[back[j]], y[j]) for j in range(len(y))]
                for ops in itertools.product(*choices):
                    ms.append(Morphism(x, y, span, tuple(ops)))
            homs[(x, y)] = ms

    def back_of(span):
        return [col.index(1) for col in zip(*span.matrix)] if span.cod else []

    def compose(f, g):
        span = fs.compose_spans(f.span, g.span)
        gb = back_of(g.span)
        ops = tuple(C.then(f.ops[gb[k]], g.ops[k]) for k in range(len(g.tgt)))
        return Morphism(f.src, g.tgt, span, ops)

    def identity(x):
        return Morphism(x, x, Span.identity(len(x)), tuple(C.ids[c] for c in x))

    def column_fibre(ins, z):
        return C.hom(ins[0], z) if len(ins) == 1 else []

    def plug(nu, us):
        return C.then(us[0], nu)

    return OperatorCategory(obs, objects, homs, compose, identity, L, L, column_fibre, plug, name="f_op_c")


# linear round trip

def levels_from_monad(PC: PinnedCategory, N: int) -> list:
    """|S_n| as a sum over label chains of products of linear-monad hom counts."""
    X = PC.labels
    hom = {}
    for k, x in enumerate(X):
        F = IndexedFamily(tuple((0,) if j == k else () for j in range(len(X))))
        TF = linear_monad(PC, F)
        for m, y in enumerate(X):
            hom[(k, m)] = len(TF.sets[m])
    out = []
    for n in range(N + 1):
        total = 0
        for chain in itertools.product(range(len(X)), repeat=n + 1):
            p = 1
            for a, b in zip(chain, chain[1:]):
                p *= hom[(a, b)]
            total += p
        out.append(total)
    return out


def linear_roundtrip(PC: PinnedCategory, N: int = 3) -> dict:
    nv = nerve(PC, N)
    from_monad = levels_from_monad(PC, N)
    return {"nerve": list(nv.sizes), "monad": from_monad, "ok": list(nv.sizes) == from_monad}


# random Segal sets

def random_pinned_category(rng: random.Random) -> PinnedCategory:
    kind = rng.choice(["preorder", "cyclic", "union", "groupoid"])
    if kind == "preorder":
        n = rng.randint(1, 3)
        rel = {(i, i) for i in range(n)}
        for i in range(n):
            for j in range(n):
                if rng.random() < 0.4:
                    rel.add((i, j))
        changed = True
        while changed:
            changed = False
            for (a, b) in list(rel):
                for (c, d) in list(rel):
                    if b == c and (a, d) not in rel:
                        rel.add((a, d))
                        changed = True
        C = preorder(n, lambda i, j: (i, j) in rel)
    elif kind == "cyclic":
        C = cyclic_group(rng.randint(1, 3))
    elif kind == "groupoid":
        C = contractible_groupoid(rng.randint(1, 2))
    else:
        C = disjoint_union(cyclic_group(rng.randint(1, 2)), preorder(2, lambda i, j: i <= j))
    obs = list(C.objects)
    labels = [f"p{k}" for k in range(len(obs) + rng.randint(0, 1))]
    pin = {}
    perm = obs[:]
    rng.shuffle(perm)
    for k, lab in enumerate(labels):
        pin[lab] = perm[k] if k < len(perm) else rng.choice(obs)
    return PinnedCategory(C, labels, pin)
