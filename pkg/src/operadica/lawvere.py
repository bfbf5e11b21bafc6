"""Lawvere theories of operad monads, their factorization system, and models.

A morphism ``a -> b`` of the theory (``a``, ``b`` colour tuples) is a tuple
of terms, one per slot of ``b``; the term for slot ``j`` has output colour
``b[j]`` and its arguments are positions in ``a``.  Read in the Kleisli
category this is a map from the free algebra on ``b`` to the free algebra
on ``a``, so the theory is the opposite of the Kleisli category on tuples.
Its underlying span ``|a| -> |b|`` has entry (i, j) equal to the number of
times position i occurs in the term for slot j.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import finspan as fs
from . import perm as P
from .errors import BoundError, InputError
from .finspan import Span
from .monad import IndexedFamily, canonical_term, free_algebra, mult_term
from .operad import ColouredOperad, OperadMorphism, comm_operad, to_comm
from .operators import Morphism, _canon_column, category_of_operators


def _grade(h) -> int:
    return sum(len(t[1]) for t in h)


def hom_matrix(h, n: int) -> tuple:
    """Underlying span matrix of a morphism out of a tuple of length n."""
    m = [[0] * len(h) for _ in range(n)]
    for j, (_, args) in enumerate(h):
        for p in args:
            m[p][j] += 1
    return tuple(tuple(r) for r in m)


# Kleisli side (monad route)

def kleisli_hom(O: ColouredOperad, x, y, d: int) -> list:
    """prod_i (T y)(x_i) within total grade d, where y is the indicator family of the tuple y."""
    x, y = tuple(x), tuple(y)
    T = free_algebra(O, IndexedFamily.indicator(y, len(O.colours)), d)
    per = [[(t, g) for g in sorted(T.parts[c]) for t in T.parts[c][g]] for c in x]
    out = []

    def rec(k, used, acc):
        if k == len(x):
            out.append(tuple(acc))
            return
        for t, g in per[k]:
            if used + g <= d:
                acc.append(t)
                rec(k + 1, used + g, acc)
                acc.pop()

    rec(0, 0, [])
    return out


def kleisli_compose(O: ColouredOperad, alpha, beta, bound=None) -> tuple:
    """alpha: x -> T y and beta: y -> T z give x -> T z (mu . T beta . alpha)."""
    out = tuple(mult_term(O, (op, tuple(beta[j] for j in args))) for op, args in alpha)
    if bound is not None and _grade(out) > bound:
        raise BoundError(f"composite has grade {_grade(out)} above {bound}")
    return out


# theories

class LawvereTheory:
    """Graded bounded Lawvere theory of an operad, pinned by singleton tuples."""

    def __init__(self, O: ColouredOperad, L: int, D: int):
        if L < 1 or D < 0:
            raise InputError("bounds must be positive")
        if D > O.max_arity:
            raise BoundError("grade bound exceeds the operad's arity bound")
        self.O, self.L, self.D = O, L, D
        nc = len(O.colours)
        self.colours = list(O.colours)
        self.objects = [x for n in range(L + 1) for x in itertools.product(range(nc), repeat=n)]
        self._single = {}
        self._homs = {}

    # homs are generated from generic operations and tuple maps
    def _singles(self, a, c) -> dict:
        """Morphisms a -> (c) by grade: a generic operation after a tuple map."""
        key = (a, c)
        if key not in self._single:
            O = self.O
            seen = {}
            for op in O.ops_into(c, self.D):
                ins = O.inputs(op)
                pools = [[p for p, x in enumerate(a) if x == col] for col in ins]
                for args in itertools.product(*pools):
                    t = self.then(self.tuple_map(a, ins, args), ((op, tuple(range(len(ins)))),))[0]
                    seen[t] = len(ins)
            by_grade = {}
            for t, g in seen.items():
                by_grade.setdefault(g, []).append(t)
            self._single[key] = {g: sorted(v) for g, v in by_grade.items()}
        return self._single[key]

    def hom(self, a, b, d=None) -> list:
        d = self.D if d is None else d
        a, b = tuple(a), tuple(b)
        key = (a, b, d)
        if key not in self._homs:
            per = [self._singles(a, c) for c in b]
            out = []

            def rec(k, used, acc):
                if k == len(b):
                    out.append(tuple(acc))
                    return
                for g in sorted(per[k]):
                    if used + g > d:
                        break
                    for t in per[k][g]:
                        acc.append(t)
                        rec(k + 1, used + g, acc)
                        acc.pop()

            rec(0, 0, [])
            self._homs[key] = out
        return self._homs[key]

    def hom_by_grade(self, a, b) -> list:
        counts = [0] * (self.D + 1)
        for h in self.hom(a, b):
            counts[_grade(h)] += 1
        return counts

    def tuple_map(self, a, b, back) -> tuple:
        """The morphism a -> b picking position back[j] of a for slot j."""
        return tuple((self.O.ids[b[j]], (back[j],)) for j in range(len(b)))

    def identity(self, a) -> tuple:
        return self.tuple_map(a, a, range(len(a)))

    def projection(self, a, i) -> tuple:
        return self.tuple_map(a, (a[i],), (i,))

    def pinning(self, c) -> tuple:
        return (c,)

    def then(self, f, g, bound=None) -> tuple:
        """g after f, for f: a -> b and g: b -> c."""
        return kleisli_compose(self.O, g, f, bound)

    def grade(self, h) -> int:
        return _grade(h)

    def span(self, a, h) -> Span:
        return Span(len(a), len(h), hom_matrix(h, len(a)))

    def source_ok(self, a, b, h) -> bool:
        O = self.O
        return len(h) == len(b) and all(
            O.output(op) == b[j] and all(0 <= p < len(a) and a[p] == c for p, c in zip(args, O.inputs(op)))
            for j, (op, args) in enumerate(h))

    # factorization
    def factor(self, a, h):
        """Canonical factorization h = active . inert through a middle tuple w.

        The inert part a -> w is a tuple map; the active part w -> b uses
        every slot of w exactly once.  Slots of w are ordered by (position
        in a, slot of b, occurrence), matching the span factorization; when
        every term is unary the underlying span is inert and w follows b.
        """
        O = self.O
        if all(len(args) == 1 for _, args in h):
            w = tuple(a[args[0]] for _, args in h)
            inert = self.tuple_map(a, w, [args[0] for _, args in h])
            return w, inert, tuple(canonical_term(O, op, (j,)) for j, (op, _) in enumerate(h))
        entries = []
        for j, (op, args) in enumerate(h):
            for r, p in enumerate(args):
                entries.append((p, j, r))
        entries.sort()
        w = tuple(a[p] for p, _, _ in entries)
        where = {(j, r): k for k, (_, j, r) in enumerate(entries)}
        inert = self.tuple_map(a, w, [p for p, _, _ in entries])
        active = tuple(canonical_term(O, op, tuple(where[(j, r)] for r in range(len(args))))
                       for j, (op, args) in enumerate(h))
        return w, inert, active

    def is_invertible_op(self, op: int) -> bool:
        O = self.O
        if O.arity(op) != 1:
            return False
        x, y = O.inputs(op)[0], O.output(op)
        return any(O.compose(op, (g,)) == O.ids[y] and O.compose(g, (op,)) == O.ids[x]
                   for g in O.ops_with((y,), x))

    def is_inert(self, a, h) -> bool:
        """Inert: a tuple map followed by an invertible active part."""
        return all(self.is_invertible_op(op) for op, _ in h)

    def is_active(self, a, h) -> bool:
        """Active: every position of a is used exactly once."""
        used = sorted(p for _, args in h for p in args)
        return used == list(range(len(a)))

    def factorizations(self, a, h) -> list:
        """All (w, inert, active) with inert a tuple map, active using w once, composing to h."""
        n = _grade(h)
        out = []
        b = tuple(self.O.output(op) for op, _ in h)
        for w in itertools.product(range(len(self.colours)), repeat=n):
            tmaps = [[p for p, x in enumerate(a) if x == c] for c in w]
            actives = [act for act in self.hom(w, b, n) if self.is_active(w, act)]
            for back in itertools.product(*tmaps):
                i = self.tuple_map(a, w, back)
                for act in actives:
                    try:
                        if self.then(i, act) == h:
                            out.append((w, i, act))
                    except BoundError:
                        pass
        return out

    def to_json(self) -> dict:
        homs = []
        for a in self.objects:
            for b in self.objects:
                homs.append({"source": [self.colours[c] for c in a], "target": [self.colours[c] for c in b],
                             "by_grade": self.hom_by_grade(a, b)})
        return {"colours": self.colours, "max_length": self.L, "max_grade": self.D,
                "pinning": {c: [c] for c in self.colours}, "homs": homs}


def theory_of(O: ColouredOperad, L: int = 2, D: int = 2) -> LawvereTheory:
    return LawvereTheory(O, L, D)


def factor_theory(Lth: LawvereTheory, a, h):
    return Lth.factor(tuple(a), h)


def same_up_to_permutation(Lth: LawvereTheory, a, f1, f2) -> bool:
    """Do two factorizations differ only by a permutation of the middle tuple?"""
    w1, i1, a1 = f1
    w2, i2, a2 = f2
    if len(w1) != len(w2):
        return False
    O = Lth.O
    for s in P.all_perms(len(w1)):
        # slot k of w2 is slot s[k] of w1
        if any(w2[k] != w1[s[k]] for k in range(len(s))):
            continue
        if tuple(i1[s[k]] for k in range(len(s))) != i2:
            continue
        inv = P.inverse(s)
        moved = tuple(canonical_term(O, op, tuple(inv[p] for p in args)) for op, args in a1)
        if moved == a2:
            return True
    return False


# morphisms of theories

@dataclass
class TheoryMorphism:
    source: LawvereTheory
    target: LawvereTheory
    colour_map: list
    op_map: list

    def obj(self, a) -> tuple:
        return tuple(self.colour_map[c] for c in a)

    def __call__(self, h) -> tuple:
        T = self.target.O
        return tuple(canonical_term(T, self.op_map[op], args) for op, args in h)

    def violations(self, max_len=None) -> list:
        S = self.source
        out = []
        objs = [a for a in S.objects if max_len is None or len(a) <= max_len]
        for c in range(len(S.colours)):
            if self.obj(S.pinning(c)) != self.target.pinning(self.colour_map[c]):
                out.append(("pinning", c))
        for a in objs:
            if self(S.identity(a)) != self.target.identity(self.obj(a)):
                out.append(("identity", a))
            for i in range(len(a)):
                if self(S.projection(a, i)) != self.target.projection(self.obj(a), i):
                    out.append(("projection", a, i))
        for a in objs:
            for b in objs:
                for f in S.hom(a, b):
                    for c in objs:
                        for g in S.hom(b, c):
                            try:
                                h = S.then(f, g, S.D)
                            except BoundError:
                                continue
                            if self.target.then(self(f), self(g)) != self(h):
                                out.append(("composition", a, f, g))
        return out


def theory_morphism_of(f: OperadMorphism, L: int = 2, D: int = 2, source=None, target=None) -> TheoryMorphism:
    bad = f.violations()
    if bad:
        raise InputError(f"not an operad morphism: {bad[:2]}")
    S = source or theory_of(f.source, L, D)
    T = target or theory_of(f.target, L, D)
    return TheoryMorphism(S, T, list(f.colour_map), list(f.op_map))


def to_spanf(Lth: LawvereTheory) -> TheoryMorphism:
    """The map to the theory of the commutative operad (arity matrices)."""
    C = comm_operad(Lth.O.max_arity)
    return theory_morphism_of(to_comm(Lth.O), source=Lth, target=theory_of(C, Lth.L, Lth.D))


# models

@dataclass
class ModelAssignment:
    """Values on objects and on morphisms (as dicts element -> element).

    ``sets[a]`` lists the elements of M(a); ``maps[(a, b, h)]`` is M(h).
    """
    sets: dict
    maps: dict


def strict_model(Lth: LawvereTheory, carrier, table) -> ModelAssignment:
    """M(a) = product of carriers; M(h) evaluates terms with table(op, values)."""
    sets = {a: list(itertools.product(*(range(carrier[c]) for c in a))) for a in Lth.objects}
    maps = {}
    for a in Lth.objects:
        for b in Lth.objects:
            for h in Lth.hom(a, b):
                maps[(a, b, h)] = {v: tuple(table(op, tuple(v[p] for p in args)) for op, args in h)
                                   for v in sets[a]}
    return ModelAssignment(sets, maps)


def check_model(Lth: LawvereTheory, M: ModelAssignment) -> bool:
    return not model_violations(Lth, M)


def model_violations(Lth: LawvereTheory, M: ModelAssignment) -> list:
    out = []
    objs = Lth.objects
    for a in objs:
        if a not in M.sets:
            return [("missing object", a)]
    if len(M.sets[()]) != 1:
        out.append(("terminal", ()))
    for a in objs:
        for b in objs:
            for h in Lth.hom(a, b):
                m = M.maps.get((a, b, h))
                if m is None or set(m) != set(M.sets[a]) or not set(m.values()) <= set(M.sets[b]):
                    out.append(("not a function", a, b, h))
    if out:
        return out
    for a in objs:
        idm = M.maps[(a, a, Lth.identity(a))]
        if any(idm[v] != v for v in M.sets[a]):
            out.append(("identity", a))
        projs = [M.maps[(a, (a[i],), Lth.projection(a, i))] for i in range(len(a))]
        image = {tuple(p[v] for p in projs) for v in M.sets[a]}
        want = set(itertools.product(*(M.sets[(c,)] for c in a)))
        if len(image) != len(M.sets[a]) or image != want:
            out.append(("product", a))
    for a in objs:
        for b in objs:
            for f in Lth.hom(a, b):
                mf = M.maps[(a, b, f)]
                for c in objs:
                    for g in Lth.hom(b, c):
                        try:
                            h = Lth.then(f, g, Lth.D)
                        except BoundError:
                            continue
                        mg, mh = M.maps[(b, c, g)], M.maps[(a, c, h)]
                        if any(mg[mf[v]] != mh[v] for v in M.sets[a]):
                            out.append(("composition", f, g))
    return out


# algebras (operad side) and models (theory side), counted independently

def _radix(sizes):
    return list(itertools.product(*(range(s) for s in sizes)))


class _Search:
    """Backtracking over tables with constraint forcing and an undo trail.

    Each constraint is (inputs, output, fn): once every input variable is
    set, fn(values) gives the forced value of the output variable.
    """

    def __init__(self, n, constraints, fixed):
        self.value = [None] * n
        self.trail = []
        self.watch = [[] for _ in range(n)]
        self.constraints = constraints
        for k, (ins, _, _) in enumerate(constraints):
            for v in set(ins):
                self.watch[v].append(k)
        self.ok = all(self.set(v, x) for v, x in fixed.items())

    def set(self, v, x) -> bool:
        val = self.value
        if val[v] is not None:
            return val[v] == x
        val[v] = x
        self.trail.append(v)
        stack = [v]
        while stack:
            u = stack.pop()
            for k in self.watch[u]:
                ins, outv, fn = self.constraints[k]
                if any(val[i] is None for i in ins):
                    continue
                y = fn([val[i] for i in ins])
                if val[outv] is None:
                    val[outv] = y
                    self.trail.append(outv)
                    stack.append(outv)
                elif val[outv] != y:
                    return False
        return True

    def solutions(self, domains):
        if not self.ok:
            return
        order = list(range(len(domains)))

        def rec(i):
            while i < len(order) and self.value[order[i]] is not None:
                i += 1
            if i == len(order):
                yield list(self.value)
                return
            v = order[i]
            for x in domains[v]:
                mark = len(self.trail)
                if self.set(v, x):
                    yield from rec(i + 1)
                while len(self.trail) > mark:
                    self.value[self.trail.pop()] = None

        yield from rec(0)


def algebra_structures(O: ColouredOperad, carrier) -> list:
    """All O-algebra structures on sets of the given sizes (one per colour).

    A structure is a tuple of tables, one per operation; the table of op is a
    tuple of outputs indexed by the input tuples in lexicographic order.
    """
    n = len(O.names)
    order = sorted(range(n), key=lambda op: (O.arity(op), op))
    rank = {op: i for i, op in enumerate(order)}
    inputs = [_radix([carrier[c] for c in O.inputs(op)]) for op in range(n)]
    pos = [{v: k for k, v in enumerate(inputs[op])} for op in range(n)]
    domains = [None] * n
    for op in order:
        domains[rank[op]] = list(itertools.product(range(carrier[O.output(op)]), repeat=len(inputs[op])))
    cons = []
    for op in range(n):
        for s in P.all_perms(O.arity(op)):
            img = O.act(op, s)
            cons.append(([rank[op]], rank[img], _sym_fn(inputs[img], pos[op], s)))
    for (o, inn), r in O.comp.items():
        cons.append(([rank[o]] + [rank[j] for j in inn], rank[r],
                      _comp_fn(inputs[r], pos[o], [pos[j] for j in inn], [O.arity(j) for j in inn])))
    fixed = {rank[O.ids[c]]: tuple(range(carrier[c])) for c in range(len(O.colours))}
    found = []
    search = _Search(n, cons, fixed)
    for sol in search.solutions(domains):
        found.append(tuple(sol[rank[op]] for op in range(n)))
    return found


def _sym_fn(rows, pos_src, s):
    # (op . s)(y) = op(z) with z[s[i]] = y[i]
    def fn(vals):
        t = vals[0]
        out = []
        for y in rows:
            z = [None] * len(y)
            for i, v in enumerate(y):
                z[s[i]] = v
            out.append(t[pos_src[tuple(z)]])
        return tuple(out)
    return fn


def _comp_fn(rows, pos_outer, pos_inner, arities):
    cuts = list(itertools.accumulate([0] + arities))

    def fn(vals):
        to, inner = vals[0], vals[1:]
        out = []
        for y in rows:
            mid = tuple(inner[i][pos_inner[i][y[cuts[i]:cuts[i + 1]]]] for i in range(len(inner)))
            out.append(to[pos_outer[mid]])
        return tuple(out)
    return fn


def models(Lth: LawvereTheory, carrier) -> list:
    """All strict models (M(a) = product of carriers) with the given carrier sizes.

    The unknowns are M(h) for morphisms h: a -> (c) into singletons; a
    morphism into a longer tuple acts componentwise.  Constraints come from
    composites g . f with g into a singleton, and projections are fixed.
    """
    objs = Lth.objects
    var = {}
    rows = {}
    for a in objs:
        rows[a] = _radix([carrier[c] for c in a])
        for c in range(len(Lth.colours)):
            for g in sorted(Lth._singles(a, c)):
                for t in Lth._singles(a, c)[g]:
                    var[(a, t)] = len(var)
    pos = {a: {v: k for k, v in enumerate(rows[a])} for a in objs}
    names = sorted(var, key=lambda k: (len(k[1][1]), var[k]))
    order = {k: i for i, k in enumerate(names)}
    domains = [None] * len(var)
    for (a, t), _ in var.items():
        domains[order[(a, t)]] = list(itertools.product(range(carrier[Lth.O.output(t[0])]), repeat=len(rows[a])))
    fixed = {}
    for a in objs:
        for i in range(len(a)):
            t = Lth.projection(a, i)[0]
            fixed[order[(a, t)]] = tuple(v[i] for v in rows[a])
    cons = []
    for b in objs:
        for c in range(len(Lth.colours)):
            for gg in Lth._singles(b, c).values():
                for g in gg:
                    used = sorted(set(g[1]))
                    for a in objs:
                        pools = [[(t, gr) for gr, ts in Lth._singles(a, b[j]).items() for t in ts] for j in used]
                        for choice in itertools.product(*pools):
                            f = [None] * len(b)
                            for j, (t, _) in zip(used, choice):
                                f[j] = t
                            grade = sum(dict(zip(used, [gr for _, gr in choice]))[p] for p in g[1])
                            if grade > Lth.D:
                                continue
                            try:
                                h = Lth.then(tuple(f), (g,))[0]
                            except BoundError:
                                continue
                            ins = [order[(b, g)]] + [order[(a, t)] for t, _ in choice]
                            cons.append((ins, order[(a, h)], _model_fn(rows[a], pos[b], used, len(b))))
    found = []
    for sol in _Search(len(var), cons, fixed).solutions(domains):
        found.append({k: sol[order[k]] for k in var})
    return found


def _model_fn(rows_a, pos_b, used, blen):
    def fn(vals):
        tg, comps = vals[0], vals[1:]
        out = []
        for k in range(len(rows_a)):
            mid = [0] * blen
            for j, tab in zip(used, comps):
                mid[j] = tab[k]
            out.append(tg[pos_b[tuple(mid)]])
        return tuple(out)
    return fn


def _relabel_structure(O, carrier, tables, perms) -> tuple:
    """Transport a structure along bijections perms[c] of each carrier."""
    out = []
    for op, tab in enumerate(tables):
        ins = O.inputs(op)
        rows = _radix([carrier[c] for c in ins])
        pos = {v: k for k, v in enumerate(rows)}
        new = [None] * len(rows)
        for k, y in enumerate(rows):
            y2 = tuple(perms[c][v] for c, v in zip(ins, y))
            new[pos[y2]] = perms[O.output(op)][tab[k]]
        out.append(tuple(new))
    return tuple(out)


def iso_classes(O: ColouredOperad, carrier, structures) -> int:
    seen = set()
    count = 0
    groups = [P.all_perms(k) for k in carrier]
    for st in structures:
        if st in seen:
            continue
        count += 1
        for perms in itertools.product(*groups):
            seen.add(_relabel_structure(O, carrier, st, perms))
    return count


def algebras_vs_models(O: ColouredOperad, carrier, L=None, D=None) -> dict:
    """Count algebra structures and theory models on the same carrier, labelled and up to iso."""
    A = O.max_arity
    L = A if L is None else L
    D = A if D is None else D
    algs = algebra_structures(O, carrier)
    Lth = theory_of(O, L, D)
    mods = models(Lth, carrier)
    # a model restricts to an algebra through the generic terms of each operation
    as_alg = set()
    for m in mods:
        tabs = []
        for op in range(len(O.names)):
            ins = O.inputs(op)
            if len(ins) > L:
                tabs = None
                break
            t = canonical_term(O, op, tuple(range(len(ins))))
            tabs.append(m[(tuple(ins), t)])
        if tabs is not None:
            as_alg.add(tuple(tabs))
    return {
        "algebras": len(algs),
        "models": len(mods),
        "algebras_up_to_iso": iso_classes(O, carrier, algs),
        "models_up_to_iso": iso_classes(O, carrier, sorted(as_alg)) if len(as_alg) == len(mods) else None,
        "same_structures": as_alg == set(algs),
    }


# round trip

def roundtrip(O: ColouredOperad, L: int = 2, D: int = 2) -> dict:
    """Compare the theory with the monad (free models) and with the category of operators."""
    Lth = theory_of(O, L, D)
    nc = len(O.colours)
    rows = []
    ok = True
    for y in Lth.objects:
        T = free_algebra(O, IndexedFamily.indicator(y, nc), D)
        for c in range(nc):
            theory_counts = Lth.hom_by_grade(y, (c,))
            monad_counts = [len(T.parts[c].get(g, ())) for g in range(D + 1)]
            same = theory_counts == monad_counts and set(Lth.hom(y, (c,))) == {(t,) for t in T.elements(c)}
            ok &= same
            rows.append({"generators": [O.colours[k] for k in y], "colour": O.colours[c],
                         "theory": theory_counts, "monad": monad_counts, "match": same})
    d_ops = min(D, O.max_arity)
    K = category_of_operators(O, L, d_ops) if d_ops >= 1 else None
    op_mismatch = []
    if K is not None:
        for a in K.objects:
            for b in K.objects:
                ms = {to_operator_morphism(O, a, b, h) for h in Lth.hom(a, b, d_ops)}
                if ms != set(K.hom(a, b)):
                    op_mismatch.append(("hom", a, b))
        for a in K.objects:
            for b in K.objects:
                for f in Lth.hom(a, b, d_ops):
                    kf = to_operator_morphism(O, a, b, f)
                    for c in K.objects:
                        for g in Lth.hom(b, c, d_ops):
                            kc = K.compose(kf, to_operator_morphism(O, b, c, g))
                            try:
                                h = Lth.then(f, g, d_ops)
                            except BoundError:
                                h = None
                            if (kc is None) != (h is None) or (h is not None and kc != to_operator_morphism(O, a, c, h)):
                                op_mismatch.append(("composite", a, b, c))
    ok &= not op_mismatch
    return {"free_models": rows, "operators_mismatch": op_mismatch, "ok": ok}


def to_operator_morphism(O: ColouredOperad, a, b, h) -> Morphism:
    """A theory morphism a -> b as a morphism of the category of operators."""
    span = Span(len(a), len(b), hom_matrix(h, len(a)))
    ops = []
    for j, (op, args) in enumerate(h):
        # move the arguments into sorted order, then canonicalize within blocks
        s = P.stable_sort_perm(args)
        r = O.act(op, s)
        sizes = [span.matrix[i][j] for i in range(len(a)) if span.matrix[i][j]]
        ops.append(_canon_column(O, r, sizes))
    return Morphism(tuple(a), tuple(b), span, tuple(ops))
