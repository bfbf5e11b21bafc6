"""JSON formats for spans, operads, families, categories and simplicial sets."""
from __future__ import annotations

import json
import os
from importlib import resources

from .category import FiniteCategory
from .errors import InputError
from .finspan import FinMap, Span, SpanWitness
from .monad import IndexedFamily, PinnedCategory
from .operad import ColouredOperad, SymSeq
from .segal import TruncatedSimplicialSet

DEFAULT_SEED = 20170613


def property_seed() -> int:
    """Seed for randomized suites; OPERADICA_SEED overrides the default."""
    raw = os.environ.get("OPERADICA_SEED")
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError as e:
        raise InputError(f"OPERADICA_SEED must be an integer, got {raw!r}") from e


def read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from e


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def shipped(name: str):
    """Parsed contents of a data file bundled with the package."""
    ref = resources.files("operadica") / "data" / f"{name}.json"
    if not ref.is_file():
        raise InputError(f"no shipped data named {name}")
    return json.loads(ref.read_text())


def shipped_names() -> list:
    return sorted(p.name[:-5] for p in (resources.files("operadica") / "data").iterdir() if p.name.endswith(".json"))


# spans

def span_from_json(data) -> Span:
    try:
        if "matrix" in data:
            return Span(int(data["dom"]), int(data["cod"]), tuple(tuple(r) for r in data["matrix"]))
        w = witness_from_json(data)
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed span: {e}") from e
    from .finspan import canonicalize
    return canonicalize(w)


def witness_from_json(data) -> SpanWitness:
    try:
        apex = int(data["apex"])
        return SpanWitness(int(data["dom"]), int(data["cod"]), apex,
                           FinMap(apex, int(data["dom"]), tuple(data["left"])),
                           FinMap(apex, int(data["cod"]), tuple(data["right"])))
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed span witness: {e}") from e


def span_to_json(s: Span) -> dict:
    return {"dom": s.dom, "cod": s.cod, "matrix": [list(r) for r in s.matrix]}


# operads and generators

def operad_from_json(data) -> ColouredOperad:
    return ColouredOperad.from_json(data)


def generators_from_json(data) -> SymSeq:
    """{"generators": [{"arity": 2, "count": 1, "action": "free" | "trivial"}]}"""
    free, trivial = {}, {}
    try:
        for g in data["generators"]:
            n, k = int(g["arity"]), int(g.get("count", 1))
            kind = g.get("action", "free")
            if kind == "free":
                free[n] = free.get(n, 0) + k
            elif kind == "trivial":
                trivial[n] = trivial.get(n, 0) + k
            else:
                raise InputError(f"unknown action {kind!r}")
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed generators: {e}") from e
    if free and trivial:
        a, b = SymSeq.free(free), SymSeq.trivial(trivial)
        sizes = dict(a.sizes)
        act = {n: dict(v) for n, v in a.act.items()}
        for n, k in b.sizes.items():
            off = sizes.get(n, 0)
            sizes[n] = off + k
            act.setdefault(n, {})
            for (x, s), y in b.act[n].items():
                act[n][(x + off, s)] = y + off
        return SymSeq(sizes, act)
    return SymSeq.free(free) if free else SymSeq.trivial(trivial)


def generators_to_json(K: SymSeq) -> dict:
    """Inverse of generators_from_json; orbits must be free or trivial."""
    from . import perm as P
    out = []
    for n in sorted(K.sizes):
        perms = P.all_perms(n)
        seen, free, trivial = set(), 0, 0
        for x in range(K.size(n)):
            if x in seen:
                continue
            orbit = {K.apply(n, x, s) for s in perms}
            seen |= orbit
            if len(orbit) == len(perms):
                free += 1
            elif len(orbit) == 1:
                trivial += 1
            else:
                raise InputError(f"arity {n} has an orbit that is neither free nor trivial")
        out += [{"action": a, "arity": n, "count": k} for a, k in (("free", free), ("trivial", trivial)) if k]
    return {"generators": out}


# families

def family_from_json(data, colours=None) -> IndexedFamily:
    """{"colours": [...], "sets": {"c": 2}}; sizes become elements 0..k-1."""
    try:
        if colours is None:
            colours = data["colours"]
        sets = data["sets"]
        unknown = set(sets) - set(colours)
        if unknown:
            raise InputError(f"family names unknown colours {sorted(unknown)}")
        return IndexedFamily.of_sizes([int(sets.get(c, 0)) for c in colours])
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed family: {e}") from e


def family_to_json(F: IndexedFamily, colours) -> dict:
    return {"colours": list(colours), "sets": {c: F.sizes()[i] for i, c in enumerate(colours)}}


# categories

def category_from_json(data) -> FiniteCategory:
    return FiniteCategory.from_json(data)


def pinned_from_json(data) -> PinnedCategory:
    """Either a bare category (identity pinning) or {"category", "labels", "pinning"}."""
    if "category" in data:
        C = category_from_json(data["category"])
        try:
            return PinnedCategory(C, list(data["labels"]), dict(data["pinning"]))
        except (KeyError, TypeError) as e:
            raise InputError(f"malformed pinning: {e}") from e
    return PinnedCategory.identity(category_from_json(data))


def pinned_to_json(PC: PinnedCategory) -> dict:
    return {"category": PC.C.to_json(), "labels": list(PC.labels), "pinning": dict(PC.pinning)}


def simplicial_from_json(data) -> TruncatedSimplicialSet:
    return TruncatedSimplicialSet.from_json(data)


def hom_from_json(data) -> tuple:
    """A Lawvere-theory morphism: source colours and one term per target slot."""
    try:
        return (tuple(str(c) for c in data["source"]),
                tuple((str(t["op"]), tuple(int(a) for a in t["args"])) for t in data["terms"]))
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed morphism: {e}") from e


def hom_to_json(h) -> dict:
    src, terms = h
    return {"source": list(src), "terms": [{"args": list(a), "op": op} for op, a in terms]}


def kind_of(data) -> str:
    """Guess which format a parsed data file is in."""
    if not isinstance(data, dict):
        raise InputError("top-level JSON value must be an object")
    for key, kind in (("matrix", "span"), ("apex", "span"), ("generators", "generators"), ("sets", "family"),
                      ("levels", "simplicial"), ("category", "pinned"), ("homs", "category"), ("ops", "operad"),
                      ("terms", "hom")):
        if key in data:
            return kind
    raise InputError("unrecognised data format")


LOADERS = {
    "span": span_from_json,
    "operad": operad_from_json,
    "category": category_from_json,
    "pinned": pinned_from_json,
    "simplicial": simplicial_from_json,
    "generators": generators_from_json,
    "family": family_from_json,
    "hom": hom_from_json,
}

SERIALIZERS = {
    "span": span_to_json,
    "operad": lambda O: O.to_json(),
    "category": lambda C: C.to_json(),
    "pinned": pinned_to_json,
    "simplicial": lambda T: T.to_json(),
    "generators": generators_to_json,
    "hom": hom_to_json,
}


def roundtrip_data(data):
    """parse -> serialize -> parse; returns (first value, second value, serialized form)."""
    kind = kind_of(data)
    if kind == "family":
        first = family_from_json(data)
        text = family_to_json(first, data["colours"])
        return first, family_from_json(text), text
    first = LOADERS[kind](data)
    text = SERIALIZERS[kind](first)
    return first, LOADERS[kind](text), text
