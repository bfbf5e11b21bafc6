"""Categories of operators over Span(F) and the checks that make them operads.

A morphism ``c -> d`` between colour tuples is a span ``|c| -> |d|``
together with, for every target slot ``j``, an operation whose inputs are
the fibre over ``j`` listed by source index.  Permuting apex elements in
the same (source, target) cell gives the same morphism, so each operation
is stored as the least representative under those block permutations.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import finspan as fs
from . import perm as P
from .errors import InputError
from .finspan import Span
from .operad import ColouredOperad


@dataclass(frozen=True)
class Morphism:
    src: tuple
    tgt: tuple
    span: Span
    ops: tuple


def column_blocks(span: Span, j: int):
    """Sources of the fibre over j in order, and the sizes of its blocks."""
    sources, sizes = [], []
    for i, row in enumerate(span.matrix):
        if row[j]:
            sources += [i] * row[j]
            sizes.append(row[j])
    return sources, sizes


class OperatorCategory:
    """A bounded category with a projection to Span(F).

    Objects are tuples of length <= L; hom-sets hold morphisms whose span has
    total <= d.  Composition is partial: composites leaving the bound are
    undefined (``compose`` returns None).
    """

    def __init__(self, colours, objects, homs, compose, identity, L, d, column_fibre, plug, name=""):
        self.colours = list(colours)
        self.objects = list(objects)
        self.homs = homs
        self._compose = compose
        self._identity = identity
        self.L = L
        self.d = d
        # fibre data over a fixed witness: operations with the listed input colours
        self.column_fibre = column_fibre
        self.plug = plug
        self.name = name
        self._index()

    def _index(self):
        self._by_span = {}
        for (x, y), ms in self.homs.items():
            for m in ms:
                self._by_span.setdefault((x, y, m.span), []).append(m)
        self._cocart = {}
        self._memo = {}
        self._products = {}
        self._triples = None
        self._cones = {}

    def triples(self) -> list:
        """All defined composites (f, g, g o f), excluding those with an identity."""
        if self._triples is None:
            ids = {self.identity(x) for x in self.objects}
            by_src = {}
            for m in self.all_morphisms():
                by_src.setdefault(m.src, []).append(m)
            out = []
            for f in self.all_morphisms():
                if f in ids:
                    continue
                for g in by_src.get(f.tgt, []):
                    if g in ids:
                        continue
                    c = self.compose(f, g)
                    if c is not None:
                        out.append((f, g, c))
            self._triples = out
        return self._triples

    def reindex(self):
        self._index()

    def hom(self, x, y) -> list:
        return self.homs.get((x, y), [])

    def over(self, x, y, span) -> list:
        return self._by_span.get((x, y, span), [])

    def all_morphisms(self):
        for ms in self.homs.values():
            yield from ms

    def compose(self, f: Morphism, g: Morphism):
        key = (f, g)
        memo = self._memo
        if key in memo:
            return memo[key]
        if f.tgt != g.src:
            raise InputError("morphisms are not composable")
        if fs.compose_spans(f.span, g.span).total > self.d:
            r = None
        else:
            r = self._compose(f, g)
        memo[key] = r
        return r

    def identity(self, x) -> Morphism:
        return self._identity(x)

    def objects_of_length(self, n: int) -> list:
        return [x for x in self.objects if len(x) == n]

    def count(self):
        return len(self.objects), sum(len(v) for v in self.homs.values())

    # cocartesian morphisms and lifts
    def is_cocartesian(self, phi: Morphism) -> bool:
        """Cocartesian test for a morphism over an inert span.

        Over a fixed witness of tau: m -> |e| the fibre of the hom-set is the
        product over target slots of operation sets, and precomposing with
        phi acts slot-wise by plugging in the unary operations of phi.  So phi
        is cocartesian iff for every sorted list of slots j_1 <= ... <= j_r
        (r <= d) and every colour z, nu |-> nu(u_j1, ..., u_jr) is a bijection.
        """
        if not fs.is_inert(phi.span):
            raise InputError("cocartesian test is only defined over inert spans")
        if phi in self._cocart:
            return self._cocart[phi]
        src_slot = [r.index(1) for r in zip(*phi.span.matrix)] if phi.tgt else []
        ok = True
        m = len(phi.tgt)
        for r in range(self.d + 1):
            for js in itertools.combinations_with_replacement(range(m), r):
                ins_y = tuple(phi.tgt[j] for j in js)
                ins_x = tuple(phi.src[src_slot[j]] for j in js)
                us = [phi.ops[j] for j in js]
                for z in range(len(self.colours)):
                    dom = self.column_fibre(ins_y, z)
                    cod = self.column_fibre(ins_x, z)
                    if len(dom) != len(cod):
                        ok = False
                        break
                    image = {self.plug(nu, us) for nu in dom}
                    if image != set(cod):
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        self._cocart[phi] = ok
        return ok

    def is_cocartesian_pi0(self, phi: Morphism) -> bool:
        """The same universal property tested on hom-sets taken up to apex isomorphism.

        This agrees with ``is_cocartesian`` when the span of phi is injective
        backwards but can fail over diagonals once operations carry a
        nontrivial symmetric action (kept to document that truncation effect).
        """
        m = len(phi.tgt)
        for e in self.objects:
            for tau in fs.iter_spans(m, len(e), self.d):
                full = fs.compose_spans(phi.span, tau)
                if full.total > self.d:
                    continue
                targets = self.over(phi.src, e, full)
                images = []
                for chi in self.over(phi.tgt, e, tau):
                    c = self.compose(phi, chi)
                    if c is None:
                        return False
                    images.append(c)
                if len(set(images)) != len(images) or set(images) != set(targets):
                    return False
        return True

    def is_inert(self, phi: Morphism) -> bool:
        return fs.is_inert(phi.span) and self.is_cocartesian(phi)

    def lifts(self, x, span: Span) -> list:
        """All cocartesian morphisms out of x over the given span."""
        out = []
        for y in self.objects_of_length(span.cod):
            for phi in self.over(x, y, span):
                if self.is_cocartesian(phi):
                    out.append(phi)
        return out

    def rho_lift(self, x, i):
        ls = self.lifts(x, fs.rho_inert(len(x), i))
        return ls[0] if ls else None

    def is_product_cone(self, X, legs) -> bool:
        """Do the legs X -> Y_k (lying over spans p_k) exhibit X as a product?"""
        key = (X, tuple(legs))
        if key not in self._products:
            self._products[key] = self._product_test(X, legs)
        return self._products[key]

    def _product_test(self, X, legs) -> bool:
        for a in self.objects:
            for sigma in fs.iter_spans(len(a), len(X), self.d):
                source = self.over(a, X, sigma)
                comps = []
                for leg in legs:
                    s2 = fs.compose_spans(sigma, leg.span)
                    comps.append(self.over(a, leg.tgt, s2))
                images = set()
                for psi in source:
                    img = []
                    for leg in legs:
                        c = self.compose(psi, leg)
                        if c is None:
                            return False
                        img.append(c)
                    images.add(tuple(img))
                if len(images) != len(source):
                    return False
                total = 1
                for c in comps:
                    total *= len(c)
                if len(images) != total:
                    return False
        return True


def _canon_column(O: ColouredOperad, op: int, sizes) -> int:
    return min(O.act(op, g) for g in P.block_group(sizes))


def category_of_operators(O: ColouredOperad, L: int = 2, d: int = 2) -> OperatorCategory:
    if L < 1 or d < 1:
        raise InputError("bounds must be at least 1")
    if d > O.max_arity:
        raise InputError("span grade bound exceeds the operad's arity bound")
    nc = len(O.colours)
    objects = [x for n in range(L + 1) for x in itertools.product(range(nc), repeat=n)]

    def column_ops(x, y, span, j):
        sources, sizes = column_blocks(span, j)
        ins = tuple(x[i] for i in sources)
        return sorted({_canon_column(O, op, sizes) for op in O.ops_with(ins, y[j])})

    homs = {}
    for x in objects:
        for y in objects:
            ms = []
            for span in fs.iter_spans(len(x), len(y), d):
                choices = [column_ops(x, y, span, j) for j in range(len(y))]
                for ops in itertools.product(*choices):
                    ms.append(Morphism(x, y, span, ops))
            homs[(x, y)] = ms

    def compose(f: Morphism, g: Morphism):
        span = fs.compose_spans(f.span, g.span)
        ops = []
        for k in range(len(g.tgt)):
            outer_src, _ = column_blocks(g.span, k)
            inners = [f.ops[j] for j in outer_src]
            r = O.compose(g.ops[k], inners)
            if r is None:
                return None
            keys = []
            for j in outer_src:
                keys += column_blocks(f.span, j)[0]
            r = O.act(r, P.stable_sort_perm(keys))
            ops.append(_canon_column(O, r, column_blocks(span, k)[1]))
        return Morphism(f.src, g.tgt, span, tuple(ops))

    def identity(x):
        return Morphism(x, x, Span.identity(len(x)), tuple(O.ids[c] for c in x))

    def column_fibre(ins, z):
        return O.ops_with(ins, z)

    def plug(nu, us):
        return O.compose(nu, us)

    return OperatorCategory(O.colours, objects, homs, compose, identity, L, d, column_fibre, plug,
                            name="operators")


def inert_spans(n: int, m: int):
    """Inert spans n -> m: one for each map m -> n read backwards."""
    for back in itertools.product(range(n), repeat=m):
        yield fs.block_inert(n, back)


def check_spf_conditions(K: OperatorCategory) -> dict:
    """Conditions (1') lifts of inert spans, (2') rho-lifts give products, (3') fibre surjectivity."""
    report = {"cocartesian_lifts": True, "products": True, "fibres": True, "failures": []}
    for x in K.objects:
        n = len(x)
        # an inert span into m has total m, so only m <= d lies inside the truncation
        for m in range(min(K.L, K.d) + 1):
            for iota in inert_spans(n, m):
                if not K.lifts(x, iota):
                    report["cocartesian_lifts"] = False
                    report["failures"].append(("lift", x, iota.matrix))
    for x in K.objects:
        legs = [K.rho_lift(x, i) for i in range(len(x))]
        if any(leg is None for leg in legs):
            report["products"] = False
            report["failures"].append(("rho-lift", x))
            continue
        if not K.is_product_cone(x, legs):
            report["products"] = False
            report["failures"].append(("product", x))
    # fibres: objects over n map onto n-tuples of iso classes over 1
    singles = K.objects_of_length(1)
    iso = _iso_classes(K, singles)
    classes = sorted(set(iso.values()))
    for n in range(K.L + 1):
        hit = set()
        for x in K.objects_of_length(n):
            legs = [K.rho_lift(x, i) for i in range(n)]
            if any(leg is None for leg in legs):
                continue
            hit.add(tuple(iso.get(leg.tgt) for leg in legs))
        want = set(itertools.product(classes, repeat=n))
        if hit != want:
            report["fibres"] = False
            report["failures"].append(("fibre", n))
    report["ok"] = report["cocartesian_lifts"] and report["products"] and report["fibres"]
    return report


def _iso_classes(K: OperatorCategory, singles) -> dict:
    ident = Span.identity(1)
    cls = {}
    for x in singles:
        if x in cls:
            continue
        cls[x] = x
        for y in singles:
            if y in cls:
                continue
            for f in K.over(x, y, ident):
                if any(K.compose(f, g) == K.identity(x) and K.compose(g, f) == K.identity(y)
                       for g in K.over(y, x, ident)):
                    cls[y] = x
                    break
    return cls


def check_inert_char(K: OperatorCategory, phi: Morphism) -> bool:
    return K.is_inert(phi)


def inert_by_rho(K: OperatorCategory, phi: Morphism) -> bool:
    """phi is inert iff each composite with the rho-lifts of its target is inert."""
    for i in range(len(phi.tgt)):
        lam = K.rho_lift(phi.tgt, i)
        if lam is None:
            return False
        c = K.compose(phi, lam)
        if c is None or not K.is_inert(c):
            return False
    return True


# functors

@dataclass
class OperatorFunctor:
    source: OperatorCategory
    target: OperatorCategory
    obj_map: dict
    mor_map: dict

    def __call__(self, m: Morphism) -> Morphism:
        return self.mor_map[m]

    def violations(self) -> list:
        S, T = self.source, self.target
        out = []
        for x in S.objects:
            y = self.obj_map.get(x)
            if y is None or len(y) != len(x) or y not in T.objects:
                out.append(("object", x))
        if out:
            return out
        for m in S.all_morphisms():
            im = self.mor_map.get(m)
            if im is None or im.span != m.span or im.src != self.obj_map[m.src] or im.tgt != self.obj_map[m.tgt]:
                out.append(("morphism", m))
        if out:
            return out
        for x in S.objects:
            if self.mor_map[S.identity(x)] != T.identity(self.obj_map[x]):
                out.append(("identity", x))
        mm = self.mor_map
        for f, g, c in S.triples():
            if T.compose(mm[f], mm[g]) != mm[c]:
                out.append(("composition", f, g))
        return out


def product_cones(K: OperatorCategory, x) -> list:
    """Cones from x to the restrictions of x to the blocks of each set partition."""
    if x not in K._cones:
        K._cones[x] = list(_product_cones(K, x))
    return K._cones[x]


def _product_cones(K, x):
    n = len(x)
    for blocks in _set_partitions(list(range(n))):
        legs = []
        for b in blocks:
            ls = K.lifts(x, fs.block_inert(n, b))
            if not ls:
                legs = None
                break
            legs.append(ls[0])
        if legs is not None:
            yield blocks, legs


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def check_functor_products_vs_inerts(F: OperatorFunctor):
    bad = F.violations()
    if bad:
        raise InputError(f"not a functor over Span(F): {bad[:2]}")
    S, T = F.source, F.target
    inerts = all(T.is_inert(F(m)) for m in S.all_morphisms() if S.is_inert(m))
    products = True
    for x in S.objects:
        for _, legs in product_cones(S, x):
            if not T.is_product_cone(F.obj_map[x], [F(leg) for leg in legs]):
                products = False
                break
        if not products:
            break
    return inerts, products


def _indexed(K: OperatorCategory):
    """Morphisms as a list plus composition triples over their indices."""
    morphs = list(K.all_morphisms())
    idx = {m: i for i, m in enumerate(morphs)}
    involving = [[] for _ in morphs]
    for f, g, c in K.triples():
        t = (idx[f], idx[g], idx[c])
        for m in set(t):
            involving[m].append(t)
    return morphs, idx, involving


class _Forcing:
    """Partial assignment closed under forced composites, with an undo trail."""

    def __init__(self, involving, combine):
        self.value = [None] * len(involving)
        self.trail = []
        self.involving = involving
        self.combine = combine

    def set(self, m, v) -> bool:
        val = self.value
        val[m] = v
        self.trail.append(m)
        stack = [m]
        inv = self.involving
        combine = self.combine
        while stack:
            x = stack.pop()
            for f, g, c in inv[x]:
                vf = val[f]
                vg = val[g]
                if vf is not None and vg is not None:
                    w = combine(vf, vg)
                    if w is None:
                        return False
                    vc = val[c]
                    if vc is not None:
                        if vc != w:
                            return False
                    else:
                        val[c] = w
                        self.trail.append(c)
                        stack.append(c)
        return True

    def mark(self) -> int:
        return len(self.trail)

    def undo(self, mark: int):
        val = self.value
        trail = self.trail
        while len(trail) > mark:
            val[trail.pop()] = None


def enumerate_functors(S: OperatorCategory, T: OperatorCategory, limit=None):
    """All functors S -> T over Span(F), by backtracking with composite forcing."""
    morphs, idx, involving = _indexed(S)
    found = []

    def assign_morphisms(omap):
        cand = []
        for m in morphs:
            c = T.over(omap[m.src], omap[m.tgt], m.span)
            if not c:
                return
            cand.append(c)
        st = _Forcing(involving, T.compose)
        for x in S.objects:
            if not st.set(idx[S.identity(x)], T.identity(omap[x])):
                return

        def rec(i):
            if limit is not None and len(found) >= limit:
                return
            while i < len(morphs) and st.value[i] is not None:
                i += 1
            if i == len(morphs):
                found.append(OperatorFunctor(S, T, dict(omap), dict(zip(morphs, st.value))))
                return
            for v in cand[i]:
                mk = st.mark()
                if st.set(i, v):
                    rec(i + 1)
                st.undo(mk)

        rec(0)

    choices = [[y for y in T.objects if len(y) == len(x)] for x in S.objects]
    for images in itertools.product(*choices):
        if limit is not None and len(found) >= limit:
            break
        assign_morphisms(dict(zip(S.objects, images)))
    return found


def functor_from_morphism(f, S: OperatorCategory, T: OperatorCategory) -> OperatorFunctor:
    cm, om = f.colour_map, f.op_map
    Tg = f.target
    omap = {x: tuple(cm[c] for c in x) for x in S.objects}
    mmap = {}
    for m in S.all_morphisms():
        ops = []
        for j, op in enumerate(m.ops):
            sizes = column_blocks(m.span, j)[1]
            ops.append(_canon_column(Tg, om[op], sizes))
        mmap[m] = Morphism(omap[m.src], omap[m.tgt], m.span, tuple(ops))
    return OperatorFunctor(S, T, omap, mmap)


# monoids in finite sets

@dataclass
class SetAssignment:
    """A functor candidate K -> FinSet: sizes of objects and function tables."""
    sizes: dict
    tables: dict


def assignment_violations(K: OperatorCategory, M: SetAssignment) -> list:
    out = []
    for x in K.objects:
        if x not in M.sizes:
            out.append(("object", x))
    if out:
        return out
    for m in K.all_morphisms():
        t = M.tables.get(m)
        if t is None or len(t) != M.sizes[m.src] or any(not 0 <= v < M.sizes[m.tgt] for v in t):
            out.append(("table", m))
    if out:
        return out
    for x in K.objects:
        if tuple(M.tables[K.identity(x)]) != tuple(range(M.sizes[x])):
            out.append(("identity", x))
    for f, g, c in K.triples():
        tf, tg = M.tables[f], M.tables[g]
        if tuple(tg[v] for v in tf) != tuple(M.tables[c]):
            out.append(("composition", f, g))
    return out


def _cone_bijective(M: SetAssignment, x, legs) -> bool:
    n = M.sizes[x]
    images = {tuple(M.tables[leg][v] for leg in legs) for v in range(n)}
    total = 1
    for leg in legs:
        total *= M.sizes[leg.tgt]
    return len(images) == n and n == total


def omonoid_check(K: OperatorCategory, M: SetAssignment):
    bad = assignment_violations(K, M)
    if bad:
        raise InputError(f"assignment is not functorial: {bad[:2]}")
    monoid = True
    for x in K.objects:
        legs = [K.rho_lift(x, i) for i in range(len(x))]
        if not _cone_bijective(M, x, legs):
            monoid = False
            break
    products = True
    for x in K.objects:
        for _, legs in product_cones(K, x):
            if not _cone_bijective(M, x, legs):
                products = False
                break
        if not products:
            break
    return monoid, products


def enumerate_set_functors(K: OperatorCategory, max_size: int = 2, min_size: int = 0):
    """All functors K -> FinSet with every value of size in [min_size, max_size]."""
    morphs, idx, involving = _indexed(K)
    found = []

    def combine(tf, tg):
        return tuple([tg[a] for a in tf])

    ends = [(m.src, m.tgt) for m in morphs]
    for sizes in itertools.product(range(min_size, max_size + 1), repeat=len(K.objects)):
        sz = dict(zip(K.objects, sizes))
        if any(sz[a] and not sz[b] for a, b in ends):
            continue
        st = _Forcing(involving, combine)
        if not all(st.set(idx[K.identity(x)], tuple(range(sz[x]))) for x in K.objects):
            continue
        spaces = [list(itertools.product(range(sz[b]), repeat=sz[a])) for a, b in ends]

        def rec(i):
            while i < len(morphs) and st.value[i] is not None:
                i += 1
            if i == len(morphs):
                found.append(SetAssignment(dict(sz), dict(zip(morphs, st.value))))
                return
            for t in spaces[i]:
                mk = st.mark()
                if st.set(i, t):
                    rec(i + 1)
                st.undo(mk)

        rec(0)
    return found
