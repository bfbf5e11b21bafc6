"""Finite coloured operads with explicit symmetry and composition tables.

Conventions used throughout the package:

* A permutation ``s`` acts on the right.  Slot ``i`` of ``op . s`` carries
  the colour of slot ``s[i]`` of ``op``; read as functions,
  ``(op . s)(y) = op(z)`` with ``z[s[i]] = y[i]``.
* ``comp(outer, inners)`` plugs ``inners[i]`` into slot ``i`` of ``outer``;
  the inputs of the composite are the inputs of the inners, concatenated.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import perm as P
from .category import FiniteCategory
from .errors import InputError


@dataclass(frozen=True)
class Profile:
    inputs: tuple
    output: int

    @property
    def arity(self) -> int:
        return len(self.inputs)


class ColouredOperad:
    """Operations are indexed 0..len(ops)-1 internally; names are for I/O.

    ``partial=True`` allows composites to be missing from the table (they
    are then treated as lying outside the truncation).
    """

    def __init__(self, colours, max_arity, ops, sym, comp, ids, partial=False):
        self.colours = list(colours)
        self.max_arity = int(max_arity)
        self.partial = partial
        self.names = []
        self.profiles = []
        for name, inputs, output in ops:
            self.names.append(name)
            self.profiles.append(Profile(tuple(inputs), output))
        if len(set(self.names)) != len(self.names):
            raise InputError("duplicate operation names")
        self.index = {n: i for i, n in enumerate(self.names)}
        self.sym = dict(sym)
        self.comp = dict(comp)
        self.ids = list(ids)
        self._by_profile = {}
        for i, p in enumerate(self.profiles):
            self._by_profile.setdefault(p, []).append(i)
        self._check_shape()

    def _check_shape(self):
        nc = len(self.colours)
        if self.max_arity < 0:
            raise InputError("arity bound must be non-negative")
        for i, p in enumerate(self.profiles):
            if p.arity > self.max_arity:
                raise InputError(f"operation {self.names[i]} exceeds the arity bound")
            if not all(isinstance(c, int) and 0 <= c < nc for c in p.inputs + (p.output,)):
                raise InputError(f"operation {self.names[i]} uses an unknown colour")
            for s in P.all_perms(p.arity):
                if (i, s) not in self.sym:
                    raise InputError(f"missing symmetry entry for {self.names[i]} under {list(s)}")
        if len(self.ids) != nc:
            raise InputError("need one identity per colour")
        for c, i in enumerate(self.ids):
            if not 0 <= i < len(self.names) or self.profiles[i] != Profile((c,), c):
                raise InputError(f"identity for colour {self.colours[c]} has the wrong profile")
        for v in list(self.sym.values()) + list(self.comp.values()):
            if not 0 <= v < len(self.names):
                raise InputError("table entry names an unknown operation")
        if not self.partial:
            for key in self.composable():
                if key not in self.comp:
                    o, inn = key
                    raise InputError(f"missing composite of {self.names[o]} with "
                                     f"{[self.names[j] for j in inn]}")

    # basic accessors
    def arity(self, op: int) -> int:
        return self.profiles[op].arity

    def inputs(self, op: int) -> tuple:
        return self.profiles[op].inputs

    def output(self, op: int) -> int:
        return self.profiles[op].output

    def ops_with(self, inputs, output) -> list:
        return self._by_profile.get(Profile(tuple(inputs), output), [])

    def ops_of_arity(self, n: int) -> list:
        return [i for i, p in enumerate(self.profiles) if p.arity == n]

    def ops_into(self, colour: int, max_arity=None) -> list:
        m = self.max_arity if max_arity is None else max_arity
        return [i for i, p in enumerate(self.profiles) if p.output == colour and p.arity <= m]

    def act(self, op: int, s) -> int:
        return self.sym[(op, tuple(s))]

    def compose(self, outer: int, inners) -> int | None:
        key = (outer, tuple(inners))
        r = self.comp.get(key)
        if r is None and not self.partial:
            ins = self.inputs(outer)
            if len(inners) != len(ins) or any(self.output(j) != c for j, c in zip(inners, ins)):
                raise InputError("inner operations do not match the outer inputs")
            if sum(self.arity(j) for j in inners) > self.max_arity:
                return None
            raise InputError("composition table is incomplete")
        return r

    def composable(self, max_total=None):
        """All (outer, inners) with matching colours and total arity within the bound."""
        bound = self.max_arity if max_total is None else max_total
        into = {c: sorted(self.ops_into(c), key=self.arity) for c in range(len(self.colours))}
        for o in range(len(self.names)):
            ins = self.inputs(o)

            def rec(k, used, acc):
                if k == len(ins):
                    yield tuple(acc)
                    return
                for j in into[ins[k]]:
                    a = self.arity(j)
                    if used + a > bound:
                        break
                    acc.append(j)
                    yield from rec(k + 1, used + a, acc)
                    acc.pop()

            for inn in rec(0, 0, []):
                yield o, inn

    def op_name(self, op: int) -> str:
        return self.names[op]

    def _key(self):
        return (tuple(self.colours), tuple(self.names), tuple(self.profiles), self.ids, self.max_arity,
                self.partial, sorted(self.sym.items()), sorted(self.comp.items()))

    def __eq__(self, other):
        return isinstance(other, ColouredOperad) and self._key() == other._key()

    __hash__ = None

    def __repr__(self):
        return f"ColouredOperad(colours={self.colours}, ops={len(self.names)}, A={self.max_arity})"

    # serialization
    def to_json(self) -> dict:
        n = self.names
        return {
            "colours": list(self.colours),
            "max_arity": self.max_arity,
            "partial": self.partial,
            "ops": [{"name": n[i], "inputs": [self.colours[c] for c in p.inputs],
                     "output": self.colours[p.output]} for i, p in enumerate(self.profiles)],
            "sym": [{"op": n[i], "perm": list(s), "image": n[v]}
                    for (i, s), v in sorted(self.sym.items()) if len(s) > 1],
            "comp": [{"outer": n[o], "inners": [n[j] for j in inn], "result": n[v]}
                     for (o, inn), v in sorted(self.comp.items())],
            "ids": {self.colours[c]: n[i] for c, i in enumerate(self.ids)},
        }

    @staticmethod
    def from_json(data: dict) -> "ColouredOperad":
        try:
            colours = list(data["colours"])
            cidx = {c: i for i, c in enumerate(colours)}
            ops = [(o["name"], [cidx[c] for c in o["inputs"]], cidx[o["output"]]) for o in data["ops"]]
            index = {o[0]: i for i, o in enumerate(ops)}
            sym = {}
            for i, (_, ins, _) in enumerate(ops):
                if len(ins) <= 1:
                    sym[(i, P.identity(len(ins)))] = i
            for e in data.get("sym", []):
                sym[(index[e["op"]], tuple(e["perm"]))] = index[e["image"]]
            comp = {(index[e["outer"]], tuple(index[x] for x in e["inners"])): index[e["result"]]
                    for e in data.get("comp", [])}
            ids = [index[data["ids"][c]] for c in colours]
            return ColouredOperad(colours, data["max_arity"], ops, sym, comp, ids,
                                  partial=bool(data.get("partial", False)))
        except (KeyError, TypeError) as e:
            raise InputError(f"malformed operad data: {e}") from e


def build_operad(colours, max_arity, elements, profile, act, comp, identity, name=str, partial=False):
    """Tabulate an operad given semantically.

    ``elements`` lists hashable operation values, ``profile(x)`` gives
    (inputs, output), ``act(x, s)`` the right action, ``comp(x, inners)``
    the composite (or None outside the truncation), ``identity(c)`` the unit.
    """
    elements = list(elements)
    idx = {x: i for i, x in enumerate(elements)}
    ops = [(name(x),) + tuple(profile(x)) for x in elements]
    sym = {}
    for x in elements:
        for s in P.all_perms(len(profile(x)[0])):
            sym[(idx[x], s)] = idx[act(x, s)]
    O = ColouredOperad(colours, max_arity, ops, sym, {}, [idx[identity(c)] for c in range(len(colours))],
                       partial=True)
    table = {}
    for o, inn in O.composable():
        r = comp(elements[o], [elements[j] for j in inn])
        if r is not None:
            table[(o, inn)] = idx[r]
    return ColouredOperad(colours, max_arity, ops, sym, table, O.ids, partial=partial)


# canonical examples

def comm_operad(A: int = 3) -> ColouredOperad:
    if A < 1:
        raise InputError("arity bound must be at least 1")
    return build_operad(
        ["c"], A, range(A + 1),
        profile=lambda n: ((0,) * n, 0),
        act=lambda n, s: n,
        comp=lambda n, inn: sum(inn),
        identity=lambda c: 1,
        name=lambda n: f"m{n}",
    )


def _word_name(w) -> str:
    return "w" + "".join(map(str, w)) if len(w) else "w_"


def assoc_operad(A: int = 3) -> ColouredOperad:
    """Operations of arity n are the words using each input once."""
    if A < 1:
        raise InputError("arity bound must be at least 1")

    def act(w, s):
        # (w . s)(y) is the word reading y[s^-1(w_k)]
        inv = P.inverse(s)
        return tuple(inv[v] for v in w)

    def comp(w, inn):
        offs = list(itertools.accumulate([0] + [len(v) for v in inn]))
        return tuple(offs[k] + v for k in w for v in inn[k])

    words = [w for n in range(A + 1) for w in P.all_perms(n)]
    return build_operad(
        ["c"], A, words,
        profile=lambda w: ((0,) * len(w), 0),
        act=act, comp=comp, identity=lambda c: (0,), name=_word_name,
    )


def trivial_operad(A: int = 3, colours=("c",)) -> ColouredOperad:
    colours = list(colours)
    return build_operad(
        colours, A, range(len(colours)),
        profile=lambda c: ((c,), c),
        act=lambda c, s: c,
        comp=lambda c, inn: inn[0],
        identity=lambda c: c,
        name=lambda c: f"id_{colours[c]}",
    )


def pointed_operad(A: int = 3) -> ColouredOperad:
    """One colour, the identity and a single nullary operation."""
    return build_operad(
        ["c"], A, ["id", "e"],
        profile=lambda x: ((0,), 0) if x == "id" else ((), 0),
        act=lambda x, s: x,
        comp=lambda x, inn: inn[0] if x == "id" else x,
        identity=lambda c: "id",
    )


def operad_from_category(C: FiniteCategory, A: int = 1) -> ColouredOperad:
    """Colours are objects, unary operations are morphisms."""
    bad = C.law_violations()
    if bad:
        raise InputError(f"category laws fail: {bad[:3]}")
    cidx = {x: i for i, x in enumerate(C.objects)}
    names = [h[0] for h in C.homs]
    return build_operad(
        [str(x) for x in C.objects], max(A, 1), names,
        profile=lambda f: ((cidx[C.src(f)],), cidx[C.tgt(f)]),
        act=lambda f, s: f,
        comp=lambda g, inn: C.then(inn[0], g),
        identity=lambda c: C.ids[C.objects[c]],
    )


# law checking

def validate_operad(O: ColouredOperad, max_total=None) -> list:
    """Every violated law instance within the arity bound; empty iff valid."""
    bound = O.max_arity if max_total is None else max_total
    report = []
    nm = O.names

    def bad(law, *inst):
        report.append({"law": law, "instance": [str(x) for x in inst]})

    n_ops = len(nm)
    for op in range(n_ops):
        n = O.arity(op)
        ins = O.inputs(op)
        if O.act(op, P.identity(n)) != op:
            bad("sym-identity", nm[op])
        for s in P.all_perms(n):
            img = O.act(op, s)
            want = Profile(tuple(ins[s[i]] for i in range(n)), O.output(op))
            if O.profiles[img] != want:
                bad("sym-colour", nm[op], list(s))
                continue
            for t in P.all_perms(n):
                if O.act(img, t) != O.act(op, P.compose(s, t)):
                    bad("sym-action", nm[op], list(s), list(t))

    def c(o, inn):
        return O.compose(o, inn)

    instances = list(O.composable(bound))
    comp_of = {}
    for o, inn in instances:
        r = c(o, inn)
        comp_of[(o, inn)] = r
        if r is None:
            continue
        want = Profile(tuple(x for j in inn for x in O.inputs(j)), O.output(o))
        if O.profiles[r] != want:
            bad("comp-profile", nm[o], [nm[j] for j in inn])

    for op in range(n_ops):
        if O.arity(op) > bound:
            continue
        if c(O.ids[O.output(op)], (op,)) != op:
            bad("left-unit", nm[op])
        if c(op, tuple(O.ids[x] for x in O.inputs(op))) != op:
            bad("right-unit", nm[op])

    # equivariance in the outer and inner variables
    for (o, inn), r in comp_of.items():
        if r is None:
            continue
        k = len(inn)
        sizes = [O.arity(j) for j in inn]
        for s in P.all_perms(k):
            if s == P.identity(k):
                continue
            inv = P.inverse(s)
            o2 = O.act(o, s)
            # inn is plugged into o . s; the same operation is o with permuted inners
            lhs = comp_of.get((o2, inn))
            inner_for_o = tuple(inn[inv[j]] for j in range(k))
            rhs0 = comp_of.get((o, inner_for_o))
            if lhs is None or rhs0 is None:
                continue
            if lhs != O.act(rhs0, P.block_shuffle(s, sizes)):
                bad("outer-equivariance", nm[o], [nm[j] for j in inn], list(s))
        for taus in itertools.product(*(P.all_perms(n) for n in sizes)):
            if all(t == P.identity(len(t)) for t in taus):
                continue
            moved = tuple(O.act(j, t) for j, t in zip(inn, taus))
            lhs = comp_of.get((o, moved))
            if lhs is None:
                continue
            if lhs != O.act(r, P.block_sum(taus)):
                bad("inner-equivariance", nm[o], [nm[j] for j in inn], [list(t) for t in taus])

    # associativity: (o; inn); outer-level inners  ==  o; (inn_i; block_i)
    into = {x: sorted(O.ops_into(x, bound), key=O.arity) for x in range(len(O.colours))}
    ar = [O.arity(j) for j in range(n_ops)]
    lowers = {}
    for (o, inn), r in comp_of.items():
        if r is None:
            continue
        ins = O.inputs(r)
        if ins not in lowers:
            lowers[ins] = list(_tuples_into(O, into, ins, bound))
        cuts = [0]
        for j in inn:
            cuts.append(cuts[-1] + ar[j])
        for lower in lowers[ins]:
            top = comp_of.get((r, lower))
            if top is None:
                continue
            pieces = tuple(comp_of.get((j, lower[cuts[i]:cuts[i + 1]])) for i, j in enumerate(inn))
            if None in pieces:
                continue
            other = comp_of.get((o, pieces))
            if other is not None and other != top:
                bad("associativity", nm[o], [nm[j] for j in inn], [nm[j] for j in lower])
    return report


def _tuples_into(O, into, colours, bound):
    def rec(k, used, acc):
        if k == len(colours):
            yield tuple(acc)
            return
        for j in into[colours[k]]:
            a = O.arity(j)
            if used + a > bound:
                break
            acc.append(j)
            yield from rec(k + 1, used + a, acc)
            acc.pop()
    yield from rec(0, 0, [])


# morphisms

@dataclass
class OperadMorphism:
    source: ColouredOperad
    target: ColouredOperad
    colour_map: list
    op_map: list

    def violations(self) -> list:
        S, T = self.source, self.target
        f, g = self.colour_map, self.op_map
        out = []
        if len(f) != len(S.colours) or len(g) != len(S.names):
            return [("shape",)]
        for op in range(len(S.names)):
            p = S.profiles[op]
            if T.profiles[g[op]] != Profile(tuple(f[c] for c in p.inputs), f[p.output]):
                out.append(("profile", S.names[op]))
                continue
            for s in P.all_perms(p.arity):
                if g[S.act(op, s)] != T.act(g[op], s):
                    out.append(("sym", S.names[op], s))
        for c, i in enumerate(S.ids):
            if g[i] != T.ids[f[c]]:
                out.append(("id", S.colours[c]))
        for (o, inn), r in S.comp.items():
            t = T.compose(g[o], tuple(g[j] for j in inn))
            if t is not None and t != g[r]:
                out.append(("comp", S.names[o]))
        return out

    @staticmethod
    def identity(O: ColouredOperad) -> "OperadMorphism":
        return OperadMorphism(O, O, list(range(len(O.colours))), list(range(len(O.names))))


def to_comm(O: ColouredOperad, A=None) -> OperadMorphism:
    """The unique morphism to the commutative operad (colours collapse)."""
    C = comm_operad(O.max_arity if A is None else A)
    return OperadMorphism(O, C, [0] * len(O.colours), [C.index[f"m{O.arity(op)}"] for op in range(len(O.names))])


def is_linear(O: ColouredOperad) -> bool:
    return all(p.arity == 1 for p in O.profiles)


# symmetric sequences and the composition product

class SymSeq:
    """Per arity n a finite set 0..size-1 with a right action of S_n.

    ``act[n][(x, s)]`` is x . s.
    """

    def __init__(self, sizes: dict, act: dict, labels: dict | None = None):
        self.sizes = {n: int(k) for n, k in sizes.items() if k}
        self.act = act
        self.labels = labels or {}
        for n, k in self.sizes.items():
            for x in range(k):
                for s in P.all_perms(n):
                    if (x, s) not in act.get(n, {}):
                        raise InputError(f"missing action of {s} on element {x} in arity {n}")

    def size(self, n: int) -> int:
        return self.sizes.get(n, 0)

    def __eq__(self, other):
        return isinstance(other, SymSeq) and self.sizes == other.sizes and all(
            self.act[n] == other.act[n] for n in self.sizes)

    __hash__ = None

    def apply(self, n: int, x: int, s) -> int:
        return self.act[n][(x, tuple(s))]

    def action_violations(self) -> list:
        out = []
        for n, k in self.sizes.items():
            for x in range(k):
                if self.apply(n, x, P.identity(n)) != x:
                    out.append((n, x, "identity"))
                for s in P.all_perms(n):
                    for t in P.all_perms(n):
                        if self.apply(n, self.apply(n, x, s), t) != self.apply(n, x, P.compose(s, t)):
                            out.append((n, x, s, t))
        return out

    @staticmethod
    def free(sizes: dict) -> "SymSeq":
        """k free orbits in each arity n (elements are orbit x permutation)."""
        out_sizes, act = {}, {}
        for n, k in sizes.items():
            perms = P.all_perms(n)
            pidx = {p: i for i, p in enumerate(perms)}
            out_sizes[n] = k * len(perms)
            act[n] = {}
            for o in range(k):
                for p in perms:
                    for s in perms:
                        act[n][(o * len(perms) + pidx[p], s)] = o * len(perms) + pidx[P.compose(p, s)]
        return SymSeq(out_sizes, act)

    @staticmethod
    def trivial(sizes: dict) -> "SymSeq":
        return SymSeq(sizes, {n: {(x, s): x for x in range(k) for s in P.all_perms(n)}
                              for n, k in sizes.items()})

    @staticmethod
    def of_operad(O: ColouredOperad) -> "SymSeq":
        if len(O.colours) != 1:
            raise InputError("symmetric sequence needs a one-coloured operad")
        sizes, act = {}, {}
        for n in range(O.max_arity + 1):
            ops = O.ops_of_arity(n)
            loc = {op: i for i, op in enumerate(ops)}
            sizes[n] = len(ops)
            act[n] = {(loc[op], s): loc[O.act(op, s)] for op in ops for s in P.all_perms(n)}
        return SymSeq(sizes, act)


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


def _compositions(n, k, sizes_ok):
    if k == 0:
        if n == 0:
            yield ()
        return
    for first in range(n + 1):
        if sizes_ok(first):
            for rest in _compositions(n - first, k - 1, sizes_ok):
                yield (first,) + rest


def composition_product(A: SymSeq, B: SymSeq, n: int, k_bound: int):
    """(A o B)(n) as orbits of tuples (k, a, b_1..b_k, s) with s in S_n.

    Returns (representatives, action) where representatives are the
    lexicographically least tuples of their orbits and action maps
    (orbit index, s) to an orbit index.
    """
    perms_n = P.all_perms(n)
    tuples = []
    for k in range(k_bound + 1):
        if not A.size(k):
            continue
        for arities in _compositions(n, k, lambda i: B.size(i) > 0):
            for a in range(A.size(k)):
                for bs in itertools.product(*(range(B.size(i)) for i in arities)):
                    for s in perms_n:
                        tuples.append((k, arities, a, bs, s))
    index = {t: i for i, t in enumerate(tuples)}
    uf = _UnionFind(len(tuples))
    for t in tuples:
        k, arities, a, bs, s = t
        # inner: (a; b . tau; s) ~ (a; b; (+tau) o s)
        for i, m in enumerate(arities):
            for tau in P.all_perms(m):
                taus = [P.identity(x) for x in arities]
                taus[i] = tau
                bs2 = list(bs)
                bs2[i] = B.apply(m, bs[i], tau)
                u = (k, arities, a, tuple(bs2), s)
                v = (k, arities, a, bs, P.compose(P.block_sum(taus), s))
                uf.union(index[u], index[v])
        # outer: (a . p; b; s) ~ (a; b permuted by p; shuffle(p) o s)
        for p in P.all_perms(k):
            inv = P.inverse(p)
            u = (k, arities, A.apply(k, a, p), bs, s)
            ar2 = tuple(arities[inv[j]] for j in range(k))
            bs2 = tuple(bs[inv[j]] for j in range(k))
            v = (k, ar2, a, bs2, P.compose(P.block_shuffle(p, arities), s))
            uf.union(index[u], index[v])
    roots = {}
    for i, t in enumerate(tuples):
        r = uf.find(i)
        if r not in roots or t < tuples[roots[r]]:
            roots[r] = i
    reps = sorted(tuples[i] for i in roots.values())
    orbit_of = {}
    rep_index = {t: j for j, t in enumerate(reps)}
    for r, i in roots.items():
        orbit_of[r] = rep_index[tuples[i]]
    action = {}
    for j, (k, ar, a, bs, s) in enumerate(reps):
        for rho in perms_n:
            action[(j, rho)] = orbit_of[uf.find(index[(k, ar, a, bs, P.compose(s, rho))])]
    return reps, action


def composition_seq(A: SymSeq, B: SymSeq, max_n: int, k_bound: int) -> SymSeq:
    sizes, act = {}, {}
    for n in range(max_n + 1):
        reps, action = composition_product(A, B, n, k_bound)
        sizes[n] = len(reps)
        act[n] = action
    return SymSeq(sizes, act)
