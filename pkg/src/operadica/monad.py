"""Set-level polynomial functors and the free-algebra monad of an operad.

A term is a pair ``(op, args)``: an operation together with one element of
the generating family per input slot.  Terms are identified along the
symmetric action, ``(op . s, (args[s[0]], ..., args[s[n-1]])) ~ (op, args)``,
and stored as the least member of their orbit.  The grade of a term is the
sum of the weights of its arguments (1 per generator), so for generators it
is the arity.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import perm as P
from .category import FiniteCategory
from .errors import BoundError, InputError
from .finspan import FinMap
from .operad import ColouredOperad, build_operad, is_linear, SymSeq

__all__ = [
    "PolynomialEndofunctor", "IndexedFamily", "GradedFamily", "FamilyMap", "PinnedCategory",
    "poly_from_operad", "eval_poly", "free_algebra", "canonical_term", "unit_term", "mult_term",
    "map_term", "monad_unit", "monad_mult", "monad_law_violations", "Transformation",
    "check_cartesian", "sym_monad", "linear_monad", "is_linear", "preserves_binary_coproducts",
    "coproduct_test", "morphisms_to_sym", "free_operad", "raw_terms",
]


@dataclass(frozen=True)
class PolynomialEndofunctor:
    """X <- E -> B -> X with maps s, p, t."""
    X: int
    E: int
    B: int
    s: FinMap
    p: FinMap
    t: FinMap

    def __post_init__(self):
        if (self.s.dom, self.s.cod) != (self.E, self.X) or (self.p.dom, self.p.cod) != (self.E, self.B) \
                or (self.t.dom, self.t.cod) != (self.B, self.X):
            raise InputError("polynomial legs have the wrong shape")

    def fibre(self, b: int) -> list:
        return [e for e in range(self.E) if self.p(e) == b]


@dataclass(frozen=True)
class IndexedFamily:
    """One finite tuple of (sortable, hashable) elements per colour.

    ``weights`` optionally assigns a grade to each element; the default is 1.
    """
    sets: tuple
    weights: dict | None = field(default=None, compare=False, hash=False)

    @staticmethod
    def of_sizes(sizes) -> "IndexedFamily":
        return IndexedFamily(tuple(tuple(range(k)) for k in sizes))

    @staticmethod
    def indicator(tup, ncolours: int) -> "IndexedFamily":
        """The family whose elements of colour c are the positions of c in tup."""
        return IndexedFamily(tuple(tuple(j for j, x in enumerate(tup) if x == c) for c in range(ncolours)))

    def weight(self, e) -> int:
        return 1 if self.weights is None else self.weights[e]

    def size(self, c: int) -> int:
        return len(self.sets[c])

    def sizes(self) -> tuple:
        return tuple(len(s) for s in self.sets)

    def coproduct(self, other: "IndexedFamily") -> "IndexedFamily":
        return IndexedFamily(tuple(tuple((0, e) for e in a) + tuple((1, e) for e in b)
                                   for a, b in zip(self.sets, other.sets)))


@dataclass(frozen=True)
class FamilyMap:
    source: IndexedFamily
    target: IndexedFamily
    maps: tuple      # one dict per colour

    def __post_init__(self):
        for c, m in enumerate(self.maps):
            tgt = set(self.target.sets[c])
            if set(m) != set(self.source.sets[c]) or not set(m.values()) <= tgt:
                raise InputError(f"family map is not total on colour {c}")

    def __call__(self, c: int, e):
        return self.maps[c][e]

    @staticmethod
    def all_maps(F: IndexedFamily, G: IndexedFamily):
        per = [[dict(zip(F.sets[c], img)) for img in itertools.product(G.sets[c], repeat=F.size(c))]
               for c in range(len(F.sets))]
        for choice in itertools.product(*per):
            yield FamilyMap(F, G, tuple(choice))


@dataclass
class GradedFamily:
    """Terms per colour and grade, truncated at ``bound``."""
    bound: int
    parts: list       # per colour: {grade: tuple of terms}

    def elements(self, c: int) -> list:
        return [t for g in sorted(self.parts[c]) for t in self.parts[c][g]]

    def counts(self) -> list:
        return [[len(self.parts[c].get(g, ())) for g in range(self.bound + 1)] for c in range(len(self.parts))]

    def grade_of(self) -> dict:
        return {t: g for part in self.parts for g, ts in part.items() for t in ts}

    def to_family(self) -> IndexedFamily:
        return IndexedFamily(tuple(tuple(self.elements(c)) for c in range(len(self.parts))), self.grade_of())


@dataclass
class PinnedCategory:
    """A finite category with a map from a set of labels onto its objects (up to iso)."""
    C: FiniteCategory
    labels: list
    pinning: dict

    def __post_init__(self):
        for x in self.labels:
            if self.pinning.get(x) not in self.C.objects:
                raise InputError(f"label {x} is not pinned to an object")
        hit = {self.pinning[x] for x in self.labels}
        for y in self.C.objects:
            if not any(self._isomorphic(y, z) for z in hit):
                raise InputError(f"object {y} is not reached by the pinning up to isomorphism")

    def _isomorphic(self, a, b) -> bool:
        return any(self.C.inverse(f) is not None for f in self.C.hom(a, b))

    @staticmethod
    def identity(C: FiniteCategory) -> "PinnedCategory":
        return PinnedCategory(C, list(C.objects), {x: x for x in C.objects})

    def p(self, x):
        return self.pinning[x]


# polynomial functors

def poly_from_operad(O: ColouredOperad) -> PolynomialEndofunctor:
    slots = [(op, i) for op in range(len(O.names)) for i in range(O.arity(op))]
    return PolynomialEndofunctor(
        len(O.colours), len(slots), len(O.names),
        FinMap(len(slots), len(O.colours), tuple(O.inputs(op)[i] for op, i in slots)),
        FinMap(len(slots), len(O.names), tuple(op for op, _ in slots)),
        FinMap(len(O.names), len(O.colours), tuple(O.output(op) for op in range(len(O.names)))),
    )


def eval_poly(Pf: PolynomialEndofunctor, F: IndexedFamily) -> IndexedFamily:
    """(t_! p_* s^*) F: pairs (b, choice of an element for each e over b)."""
    out = [[] for _ in range(Pf.X)]
    for b in range(Pf.B):
        fib = Pf.fibre(b)
        for choice in itertools.product(*(F.sets[Pf.s(e)] for e in fib)):
            out[Pf.t(b)].append((b, choice))
    return IndexedFamily(tuple(tuple(x) for x in out))


# terms

def canonical_term(O: ColouredOperad, op: int, args) -> tuple:
    n = len(args)
    return min((O.act(op, s), tuple(args[i] for i in s)) for s in P.all_perms(n))


def raw_terms(O: ColouredOperad, F: IndexedFamily, D: int):
    """All (op, args) with grade <= D, before identification."""
    for op in range(len(O.names)):
        ins = O.inputs(op)
        pools = [sorted(F.sets[c], key=F.weight) for c in ins]

        def rec(k, used, acc):
            if k == len(ins):
                yield tuple(acc)
                return
            for e in pools[k]:
                w = F.weight(e)
                if used + w > D:
                    break
                acc.append(e)
                yield from rec(k + 1, used + w, acc)
                acc.pop()

        for args in rec(0, 0, []):
            yield op, args


def free_algebra(O: ColouredOperad, F: IndexedFamily, D: int) -> GradedFamily:
    """Terms over F up to identification, graded and truncated at D."""
    if D < 0:
        raise InputError("degree bound must be non-negative")
    if D > O.max_arity:
        raise BoundError(f"degree {D} exceeds the operad's arity bound {O.max_arity}")
    if len(F.sets) != len(O.colours):
        raise InputError("family has the wrong number of colours")
    seen = set()
    parts = [dict() for _ in O.colours]
    for op, args in raw_terms(O, F, D):
        t = canonical_term(O, op, args)
        if t in seen:
            continue
        seen.add(t)
        g = sum(F.weight(e) for e in args)
        parts[O.output(op)].setdefault(g, []).append(t)
    for part in parts:
        for g in part:
            part[g] = tuple(sorted(part[g]))
    return GradedFamily(D, parts)


def unit_term(O: ColouredOperad, c: int, e) -> tuple:
    return (O.ids[c], (e,))


def mult_term(O: ColouredOperad, t) -> tuple:
    """Graft a term of terms into a single term."""
    nu, inner = t
    r = O.compose(nu, tuple(s[0] for s in inner))
    if r is None:
        raise BoundError("composite leaves the arity bound")
    return canonical_term(O, r, tuple(a for s in inner for a in s[1]))


def map_term(O: ColouredOperad, f, t) -> tuple:
    """T applied to f, where f(colour, element) gives the image element."""
    op, args = t
    ins = O.inputs(op)
    return canonical_term(O, op, tuple(f(ins[i], a) for i, a in enumerate(args)))


def monad_unit(O: ColouredOperad, F: IndexedFamily) -> list:
    return [{e: unit_term(O, c, e) for e in F.sets[c]} for c in range(len(O.colours))]


def monad_mult(O: ColouredOperad, F: IndexedFamily, D: int) -> list:
    TF = free_algebra(O, F, D)
    TTF = free_algebra(O, TF.to_family(), D)
    return [{t: mult_term(O, t) for t in TTF.elements(c)} for c in range(len(O.colours))]


def monad_law_violations(O: ColouredOperad, F: IndexedFamily, D: int) -> list:
    """Unit and associativity laws checked on every element within grade D.

    Elements of TTTF whose first graft would exceed the operad's arity bound
    are skipped; this only happens through nullary operations.
    """
    bad = []
    TF = free_algebra(O, F, D)
    TFf = TF.to_family()
    TTF = free_algebra(O, TFf, D)
    TTTF = free_algebra(O, TTF.to_family(), D)
    for c in range(len(O.colours)):
        for t in TF.elements(c):
            if mult_term(O, unit_term(O, c, t)) != t:
                bad.append(("left-unit", t))
            if mult_term(O, map_term(O, lambda x, e: unit_term(O, x, e), t)) != t:
                bad.append(("right-unit", t))
        for w in TTTF.elements(c):
            # grade-0 (nullary) inner terms can push the intermediate graft past
            # the arity bound; such elements lie outside the truncation
            if sum(O.arity(s[0]) for s in w[1]) > O.max_arity:
                continue
            a = mult_term(O, map_term(O, lambda x, s: mult_term(O, s), w))
            b = mult_term(O, mult_term(O, w))
            if a != b:
                bad.append(("associativity", w))
    return bad


# cartesianness

class Transformation:
    """A natural transformation between endofunctors built from T.

    ``dom_level``/``cod_level`` give how many times T is applied on each side.
    """

    def __init__(self, O, D, dom_level, cod_level, component, name):
        self.O, self.D = O, D
        self.dom_level, self.cod_level = dom_level, cod_level
        self.component = component
        self.name = name

    def _family(self, F, level):
        fam = F
        for _ in range(level):
            fam = free_algebra(self.O, fam, self.D).to_family()
        return fam

    def _mapper(self, phi, level):
        O = self.O
        if level == 0:
            return phi
        inner = self._mapper(phi, level - 1)
        return lambda c, t: map_term(O, inner, t)

    def square(self, phi: FamilyMap):
        F, G = phi.source, phi.target
        return (self._family(F, self.dom_level), self._family(F, self.cod_level),
                self._family(G, self.dom_level), self._family(G, self.cod_level),
                self._mapper(phi, self.dom_level), self._mapper(phi, self.cod_level))


def unit_transformation(O, D):
    return Transformation(O, D, 0, 1, lambda c, e: unit_term(O, c, e), "unit")


def mult_transformation(O, D):
    return Transformation(O, D, 2, 1, lambda c, t: mult_term(O, t), "mult")


def identity_transformation(O, D):
    return Transformation(O, D, 1, 1, lambda c, t: t, "identity")


def collapse_transformation(O, D):
    """Send every term to a fixed nullary term of the same colour (natural, not cartesian)."""
    nullary = {}
    for op in range(len(O.names)):
        if O.arity(op) == 0:
            nullary.setdefault(O.output(op), op)
    if len(nullary) != len(O.colours):
        raise InputError("collapse needs a nullary operation of every colour")
    return Transformation(O, D, 1, 1, lambda c, t: (nullary[c], ()), "collapse")


_NAMED = {"unit": unit_transformation, "mult": mult_transformation,
          "identity": identity_transformation, "collapse": collapse_transformation}


def check_cartesian(O: ColouredOperad, alpha, phi: FamilyMap, D: int, witness=False):
    """Is the naturality square of alpha at phi a pullback (colourwise, within grade D)?"""
    if isinstance(alpha, str):
        alpha = _NAMED[alpha](O, D)
    dF, cF, dG, cG, dmap, cmap = alpha.square(phi)
    comp = alpha.component
    for c in range(len(O.colours)):
        pairs = {}
        for t in cF.sets[c]:
            pairs.setdefault(cmap(c, t), []).append(t)
        target = set()
        for g in dG.sets[c]:
            for t in pairs.get(comp(c, g), ()):
                target.add((t, g))
        image = [(comp(c, f), dmap(c, f)) for f in dF.sets[c]]
        ok = len(set(image)) == len(image) and set(image) == target
        if not ok:
            if witness:
                extra = sorted(target - set(image), key=repr)
                return False, (c, extra[:1] or image[:1])
            return False
    return (True, None) if witness else True


# the terminal analytic monad

def sym_monad(F: int, D: int) -> dict:
    """Multisets over range(F), by size, as sorted tuples."""
    return {k: list(itertools.combinations_with_replacement(range(F), k)) for k in range(D + 1)}


def morphisms_to_sym(O: ColouredOperad, D: int) -> list:
    """Arity-preserving monad maps from T_O to Sym, by their values on generic terms.

    A value for op is a multiset (sorted tuple) of its slot indices of size
    arity(op).  Returns every assignment that is natural for the symmetric
    action and compatible with units and grafting within arity D.
    """
    ops = [op for op in range(len(O.names)) if O.arity(op) <= D]
    # orbit representatives; the other members are forced by naturality
    reps, seen = [], set()
    for op in ops:
        if op in seen:
            continue
        reps.append(op)
        seen.update(O.act(op, s) for s in P.all_perms(O.arity(op)))

    def forced(rep, value):
        out = {}
        for s in P.all_perms(O.arity(rep)):
            inv = P.inverse(s)
            img = tuple(sorted(inv[k] for k in value))
            prev = out.setdefault(O.act(rep, s), img)
            if prev != img:
                return None
        return out

    found = []
    choices = [list(itertools.combinations_with_replacement(range(O.arity(r)), O.arity(r))) for r in reps]
    for values in itertools.product(*choices):
        alpha = {}
        ok = True
        for r, v in zip(reps, values):
            f = forced(r, v)
            if f is None:
                ok = False
                break
            alpha.update(f)
        if not ok:
            continue
        if any(alpha[i] != (0,) for i in O.ids):
            continue
        for (o, inn), r in O.comp.items():
            if O.arity(r) > D or o not in alpha or any(j not in alpha for j in inn):
                continue
            offs = list(itertools.accumulate([0] + [O.arity(j) for j in inn]))
            flat = tuple(sorted(offs[i] + v for i in alpha[o] for v in alpha[inn[i]]))
            if flat != alpha[r]:
                ok = False
                break
        if ok:
            found.append(alpha)
    return found


# linear monads

def linear_monad(PC: PinnedCategory, F: IndexedFamily) -> IndexedFamily:
    """(TF)(x) = disjoint union over x' of Hom(p x', p x) x F(x')."""
    X = PC.labels
    if len(F.sets) != len(X):
        raise InputError("family has the wrong number of labels")
    out = []
    for x in X:
        elems = []
        for k, x2 in enumerate(X):
            for f in PC.C.hom(PC.p(x2), PC.p(x)):
                for e in F.sets[k]:
                    elems.append((k, f, e))
        out.append(tuple(elems))
    return IndexedFamily(tuple(out))


def preserves_binary_coproducts(O: ColouredOperad, F: IndexedFamily, G: IndexedFamily, D: int) -> bool:
    """Is TF + TG -> T(F + G) a bijection within grade D?"""
    FG = F.coproduct(G)
    TFG = free_algebra(O, FG, D)
    images = []
    for tag, fam in ((0, F), (1, G)):
        T = free_algebra(O, fam, D)
        for c in range(len(O.colours)):
            for t in T.elements(c):
                images.append((c, map_term(O, lambda x, e, tag=tag: (tag, e), t)))
    want = {(c, t) for c in range(len(O.colours)) for t in TFG.elements(c)}
    return len(set(images)) == len(images) and set(images) == want


def coproduct_test(O: ColouredOperad, D: int, max_size: int = 2) -> bool:
    """Coproduct preservation for all pairs of families with at most max_size elements per colour."""
    fams = [IndexedFamily.of_sizes(s) for s in itertools.product(range(max_size + 1), repeat=len(O.colours))]
    return all(preserves_binary_coproducts(O, F, G, D) for F in fams for G in fams)


# free operads

def _tree_act(t, s):
    inv = P.inverse(s)
    return _relabel(t, lambda k: inv[k])


def _relabel(t, f):
    if t[0] == "leaf":
        return ("leaf", f(t[1]))
    return (t[0], t[1], tuple(_relabel(c, f) for c in t[2]))


def _vertices(t) -> int:
    return 0 if t[0] == "leaf" else 1 + sum(_vertices(c) for c in t[2])


def _leaves(t) -> int:
    return 1 if t[0] == "leaf" else sum(_leaves(c) for c in t[2])


def _canon_node(K: SymSeq, n: int, g: int, children) -> tuple:
    return min(("node", (n, K.apply(n, g, s)), tuple(children[i] for i in s)) for s in P.all_perms(n))


def _graft(K: SymSeq, t, inners, offs):
    if t[0] == "leaf":
        k = t[1]
        return _relabel(inners[k], lambda v: offs[k] + v)
    n = t[1][0]
    kids = tuple(_graft(K, c, inners, offs) for c in t[2])
    return _canon_node(K, n, t[1][1], kids)


def _trees(K: SymSeq, A: int, D: int) -> list:
    """Canonical trees with at most D vertices and at most A leaves, labels not yet assigned.

    Shapes are built with leaves numbered left to right; labelled trees come
    from relabelling by all permutations afterwards.
    """
    shapes = {("leaf", 0)}
    # grow by vertex count
    frontier = {("leaf", 0)}
    for _ in range(D):
        new = set()
        pool = sorted(shapes)
        for n, size in K.sizes.items():
            for kids in itertools.product(pool, repeat=n):
                if sum(_vertices(c) for c in kids) + 1 > D or sum(_leaves(c) for c in kids) > A:
                    continue
                for g in range(size):
                    new.add(("node", (n, g), _number(kids)))
        frontier = new - shapes
        if not frontier:
            break
        shapes |= new
    return sorted(shapes)


def _number(kids):
    out, k = [], 0
    for c in kids:
        m = _leaves(c)
        out.append(_relabel(c, lambda v, k=k: k + v))
        k += m
    return tuple(out)


def free_operad(K: SymSeq, A: int, D: int) -> ColouredOperad:
    """One-coloured free operad on K: leaf-labelled trees with at most D vertices."""
    if A < 1 or D < 0:
        raise InputError("bounds must be positive")
    bad = K.action_violations()
    if bad:
        raise InputError(f"generators do not carry an action: {bad[:2]}")
    elements = set()
    for shape in _trees(K, A, D):
        n = _leaves(shape)
        for s in P.all_perms(n):
            t = _relabel(shape, lambda v, s=s: s[v])
            elements.add(_canon_tree(K, t))
    elements = sorted(elements, key=lambda t: (_leaves(t), _vertices(t), t))

    def comp(t, inners):
        offs = list(itertools.accumulate([0] + [_leaves(c) for c in inners]))
        r = _graft(K, t, inners, offs)
        return r if _vertices(r) <= D else None

    return build_operad(
        ["c"], A, elements,
        profile=lambda t: ((0,) * _leaves(t), 0),
        act=lambda t, s: _canon_tree(K, _tree_act(t, s)),
        comp=comp,
        identity=lambda c: ("leaf", 0),
        name=_tree_name,
        partial=True,
    )


def _canon_tree(K, t):
    if t[0] == "leaf":
        return t
    return _canon_node(K, t[1][0], t[1][1], tuple(_canon_tree(K, c) for c in t[2]))


def _tree_name(t) -> str:
    if t[0] == "leaf":
        return str(t[1])
    return f"g{t[1][0]}_{t[1][1]}(" + ",".join(_tree_name(c) for c in t[2]) + ")"
