"""Finite 1-categories given by explicit tables."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import InputError


@dataclass
class FiniteCategory:
    """Objects are names; morphisms are names with a source and target.

    ``comp[(f, g)]`` is the composite "f then g" (that is, g o f).
    """
    objects: list
    homs: list            # [(name, src, tgt)]
    comp: dict            # (first, then) -> result
    ids: dict             # object -> identity morphism name
    _src: dict = field(init=False, repr=False)
    _tgt: dict = field(init=False, repr=False)

    def __post_init__(self):
        self.objects = list(self.objects)
        self.homs = [tuple(h) for h in self.homs]
        names = [h[0] for h in self.homs]
        if len(set(names)) != len(names):
            raise InputError("duplicate morphism names")
        if len(set(self.objects)) != len(self.objects):
            raise InputError("duplicate object names")
        obs = set(self.objects)
        self._src = {}
        self._tgt = {}
        for name, s, t in self.homs:
            if s not in obs or t not in obs:
                raise InputError(f"morphism {name} has an unknown endpoint")
            self._src[name] = s
            self._tgt[name] = t
        for x in self.objects:
            i = self.ids.get(x)
            if i is None or self._src.get(i) != x or self._tgt.get(i) != x:
                raise InputError(f"bad identity for object {x}")
        for f in names:
            for g in names:
                if self._tgt[f] == self._src[g]:
                    h = self.comp.get((f, g))
                    if h is None:
                        raise InputError(f"missing composite of {f} then {g}")
                    if self._src.get(h) != self._src[f] or self._tgt.get(h) != self._tgt[g]:
                        raise InputError(f"composite of {f} then {g} has the wrong type")

    def src(self, f):
        return self._src[f]

    def tgt(self, f):
        return self._tgt[f]

    def hom(self, x, y) -> list:
        return [h[0] for h in self.homs if h[1] == x and h[2] == y]

    def then(self, f, g):
        return self.comp[(f, g)]

    def law_violations(self) -> list:
        out = []
        names = [h[0] for h in self.homs]
        for f in names:
            if self.comp[(self.ids[self.src(f)], f)] != f or self.comp[(f, self.ids[self.tgt(f)])] != f:
                out.append(("unit", f))
        for f, g, h in itertools.product(names, repeat=3):
            if self.tgt(f) == self.src(g) and self.tgt(g) == self.src(h):
                if self.comp[(self.comp[(f, g)], h)] != self.comp[(f, self.comp[(g, h)])]:
                    out.append(("assoc", f, g, h))
        return out

    def inverse(self, f):
        for g in self.hom(self.tgt(f), self.src(f)):
            if self.comp[(f, g)] == self.ids[self.src(f)] and self.comp[(g, f)] == self.ids[self.tgt(f)]:
                return g
        return None

    def is_identity(self, f) -> bool:
        return self.ids[self.src(f)] == f

    def to_json(self) -> dict:
        return {
            "objects": list(self.objects),
            "homs": [{"name": n, "src": s, "tgt": t} for n, s, t in self.homs],
            "comp": [{"first": f, "then": g, "result": h} for (f, g), h in sorted(self.comp.items())],
            "ids": dict(self.ids),
        }

    @staticmethod
    def from_json(data: dict) -> "FiniteCategory":
        try:
            homs = [(h["name"], h["src"], h["tgt"]) for h in data["homs"]]
            comp = {(c["first"], c["then"]): c["result"] for c in data["comp"]}
            return FiniteCategory(data["objects"], homs, comp, dict(data["ids"]))
        except (KeyError, TypeError) as e:
            raise InputError(f"malformed category data: {e}") from e


def category_iso(C: FiniteCategory, D: FiniteCategory):
    """Backtracking search for an isomorphism of finite categories.

    Returns (object map, morphism map) or None.
    """
    if len(C.objects) != len(D.objects) or len(C.homs) != len(D.homs):
        return None
    cobs = list(C.objects)

    def hom_sizes(K, x, y):
        return len(K.hom(x, y))

    def extend(i, omap):
        if i == len(cobs):
            return try_morphisms(omap)
        x = cobs[i]
        for y in D.objects:
            if y in omap.values():
                continue
            omap[x] = y
            ok = all(hom_sizes(C, a, b) == hom_sizes(D, omap[a], omap[b])
                     for a in cobs[:i + 1] for b in cobs[:i + 1])
            if ok:
                r = extend(i + 1, omap)
                if r:
                    return r
            del omap[x]
        return None

    def try_morphisms(omap):
        pairs = [(a, b) for a in cobs for b in cobs]
        choices = []
        for a, b in pairs:
            src = C.hom(a, b)
            tgt = D.hom(omap[a], omap[b])
            choices.append((src, tgt))
        mmap = {}
        names = [h[0] for h in C.homs]

        def consistent():
            for f in names:
                for g in names:
                    if f in mmap and g in mmap and C.tgt(f) == C.src(g):
                        h = C.comp[(f, g)]
                        if h in mmap and D.comp[(mmap[f], mmap[g])] != mmap[h]:
                            return False
            return True

        def rec(k):
            if k == len(choices):
                return dict(omap), dict(mmap)
            src, tgt = choices[k]
            for image in itertools.permutations(tgt):
                for f, g in zip(src, image):
                    mmap[f] = g
                if all(mmap[C.ids[x]] == D.ids[omap[x]] for x in cobs if C.ids[x] in mmap) and consistent():
                    r = rec(k + 1)
                    if r:
                        return r
                for f in src:
                    mmap.pop(f, None)
            return None

        return rec(0)

    return extend(0, {})


def point() -> FiniteCategory:
    return FiniteCategory(["*"], [("id_*", "*", "*")], {("id_*", "id_*"): "id_*"}, {"*": "id_*"})


def walking_arrow() -> FiniteCategory:
    homs = [("id_a", "a", "a"), ("id_b", "b", "b"), ("f", "a", "b")]
    comp = {("id_a", "id_a"): "id_a", ("id_b", "id_b"): "id_b",
            ("id_a", "f"): "f", ("f", "id_b"): "f"}
    return FiniteCategory(["a", "b"], homs, comp, {"a": "id_a", "b": "id_b"})


def contractible_groupoid(n: int = 2) -> FiniteCategory:
    obs = [str(i) for i in range(n)]
    homs = [(f"{x}>{y}", x, y) for x in obs for y in obs]
    comp = {(f"{x}>{y}", f"{y}>{z}"): f"{x}>{z}" for x in obs for y in obs for z in obs}
    return FiniteCategory(obs, homs, comp, {x: f"{x}>{x}" for x in obs})


def discrete(n: int) -> FiniteCategory:
    obs = [f"x{i}" for i in range(n)]
    return FiniteCategory(obs, [(f"id_{x}", x, x) for x in obs],
                          {(f"id_{x}", f"id_{x}"): f"id_{x}" for x in obs}, {x: f"id_{x}" for x in obs})


def cyclic_group(m: int) -> FiniteCategory:
    homs = [(f"g{k}", "*", "*") for k in range(m)]
    comp = {(f"g{a}", f"g{b}"): f"g{(a + b) % m}" for a in range(m) for b in range(m)}
    return FiniteCategory(["*"], homs, comp, {"*": "g0"})


def idempotent() -> FiniteCategory:
    homs = [("id", "*", "*"), ("e", "*", "*")]
    comp = {("id", "id"): "id", ("id", "e"): "e", ("e", "id"): "e", ("e", "e"): "e"}
    return FiniteCategory(["*"], homs, comp, {"*": "id"})


def preorder(n: int, leq) -> FiniteCategory:
    """Thin category on 0..n-1 from a reflexive transitive relation."""
    obs = [str(i) for i in range(n)]
    homs = [(f"{i}<{j}", str(i), str(j)) for i in range(n) for j in range(n) if leq(i, j)]
    have = {(h[1], h[2]) for h in homs}
    comp = {}
    for _, a, b in homs:
        for _, b2, c in homs:
            if b == b2:
                if (a, c) not in have:
                    raise InputError("relation is not transitive")
                comp[(f"{a}<{b}", f"{b}<{c}")] = f"{a}<{c}"
    return FiniteCategory(obs, homs, comp, {x: f"{x}<{x}" for x in obs})


def disjoint_union(C: FiniteCategory, D: FiniteCategory) -> FiniteCategory:
    def tag(k, x):
        return f"{k}.{x}"
    homs = [(tag(0, n), tag(0, s), tag(0, t)) for n, s, t in C.homs]
    homs += [(tag(1, n), tag(1, s), tag(1, t)) for n, s, t in D.homs]
    comp = {(tag(0, f), tag(0, g)): tag(0, h) for (f, g), h in C.comp.items()}
    comp.update({(tag(1, f), tag(1, g)): tag(1, h) for (f, g), h in D.comp.items()})
    ids = {tag(0, x): tag(0, i) for x, i in C.ids.items()}
    ids.update({tag(1, x): tag(1, i) for x, i in D.ids.items()})
    return FiniteCategory([tag(0, x) for x in C.objects] + [tag(1, x) for x in D.objects], homs, comp, ids)
