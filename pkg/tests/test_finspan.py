import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from operadica import finspan as fs
from operadica.errors import InputError
from operadica.finspan import FinMap, Span, SpanWitness


def matmul(a, b, s, t, u):
    return tuple(tuple(sum(a[i][j] * b[j][k] for j in range(t)) for k in range(u)) for i in range(s))


@st.composite
def spans(draw, dom=None, cod=None, max_foot=4, max_entry=3):
    s = draw(st.integers(0, max_foot)) if dom is None else dom
    t = draw(st.integers(0, max_foot)) if cod is None else cod
    rows = draw(st.lists(st.lists(st.integers(0, max_entry), min_size=t, max_size=t), min_size=s, max_size=s))
    return Span(s, t, tuple(map(tuple, rows)))


@st.composite
def chains(draw, length=3):
    feet = draw(st.lists(st.integers(0, 3), min_size=length + 1, max_size=length + 1))
    return [draw(spans(feet[k], feet[k + 1])) for k in range(length)]


# pullback

def test_pullback_over_point_is_product():
    f = FinMap(2, 1, (0, 0))
    P, pa, pb = fs.pullback(f, f)
    assert P == 4
    assert list(zip(pa.table, pb.table)) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_pullback_of_identities_is_diagonal():
    i = FinMap.identity(2)
    assert fs.pullback(i, i)[0] == 2


def test_pullback_lists_matching_pairs():
    f = FinMap(3, 2, (0, 0, 1))
    P, pa, pb = fs.pullback(f, FinMap.identity(2))
    assert P == 3
    assert list(zip(pa.table, pb.table)) == [(0, 0), (1, 0), (2, 1)]


def test_pullback_codomain_mismatch():
    with pytest.raises(InputError):
        fs.pullback(FinMap.identity(2), FinMap.identity(3))


# canonical form

def test_canonicalize_examples():
    i = FinMap.identity(2)
    assert fs.canonicalize(SpanWitness(2, 2, 2, i, i)).matrix == ((1, 0), (0, 1))
    assert fs.canonicalize(SpanWitness.of(2, 3, [], [])).matrix == ((0, 0, 0), (0, 0, 0))
    w = SpanWitness.of(2, 2, (0, 1, 1), (0, 0, 1))
    assert fs.canonicalize(w).matrix == ((1, 0), (1, 1))


@given(st.integers(0, 3), st.integers(0, 3), st.data())
def test_canonical_form_detects_isomorphism(s, t, data):
    apex = data.draw(st.integers(0, 4))
    leg = lambda n: st.lists(st.integers(0, n - 1), min_size=apex, max_size=apex) if n else st.just([])
    if apex and not (s and t):
        return
    w1 = SpanWitness.of(s, t, data.draw(leg(s)), data.draw(leg(t)))
    w2 = SpanWitness.of(s, t, data.draw(leg(s)), data.draw(leg(t)))
    assert (fs.canonicalize(w1) == fs.canonicalize(w2)) == fs.brute_iso(w1, w2)
    assert (fs.witness_iso(w1, w2) is not None) == fs.brute_iso(w1, w2)


# composition

def test_compose_example():
    a = Span(2, 2, ((1, 1), (0, 1)))
    b = Span(2, 2, ((2, 0), (1, 1)))
    assert fs.compose_spans(a, b).matrix == ((3, 1), (1, 1))
    by_witness = fs.canonicalize(fs.compose_witnesses(a.witness(), b.witness()))
    assert by_witness.matrix == ((3, 1), (1, 1))


def test_compose_foot_mismatch():
    with pytest.raises(InputError):
        fs.compose_spans(Span.identity(2), Span.identity(3))


@given(spans())
def test_identity_and_empty(s):
    assert fs.compose_spans(Span.identity(s.dom), s) == s
    assert fs.compose_spans(s, Span.identity(s.cod)) == s
    empty = Span.zero(s.dom, s.dom)
    assert fs.compose_spans(empty, s) == Span.zero(s.dom, s.cod)


@given(chains(2))
def test_witness_composition_matches_matrix_product(ch):
    a, b = ch
    m = matmul(a.matrix, b.matrix, a.dom, a.cod, b.cod)
    assert fs.compose_spans(a, b).matrix == m
    assert fs.canonicalize(fs.compose_witnesses(a.witness(), b.witness())).matrix == m


@given(chains(3))
def test_composition_associative(ch):
    a, b, c = ch
    left = fs.compose_spans(fs.compose_spans(a, b), c)
    assert left == fs.compose_spans(a, fs.compose_spans(b, c))


# factorization

def test_factor_example():
    s = Span(2, 2, ((2, 0), (1, 1)))
    i, a = fs.factor_inert_active(s)
    assert i.cod == 4
    assert fs.active_map(a).table == (0, 0, 0, 1)
    assert fs.compose_spans(i, a) == s


def test_factor_inert_and_empty():
    s = fs.block_inert(3, [2, 0])
    i, a = fs.factor_inert_active(s)
    assert i == s and a == Span.identity(2)
    i, a = fs.factor_inert_active(Span.zero(2, 3))
    assert i.cod == 0


@given(spans())
def test_factor_recomposes(s):
    i, a = fs.factor_inert_active(s)
    assert fs.is_inert(i) and fs.is_active(a)
    assert i.cod == s.total
    assert fs.compose_spans(i, a) == s


def test_classification_examples():
    assert fs.is_inert(Span.identity(3)) and fs.is_active(Span.identity(3))
    r = fs.rho_inert(3, 1)
    assert fs.is_inert(r) and not fs.is_active(r)
    two = Span(1, 1, ((2,),))
    assert not fs.is_inert(two) and not fs.is_active(two)


def test_both_classes_means_permutation():
    for n in range(4):
        for s in fs.iter_spans(n, n, n):
            perm = all(sorted(r) == [0] * (n - 1) + [1] for r in s.matrix) and \
                all(sorted(c) == [0] * (n - 1) + [1] for c in zip(*s.matrix))
            assert fs.is_iso(s) == perm


# rho, pointed maps, products

def test_rho_inert():
    assert fs.rho_inert(3, 1).matrix == ((0,), (1,), (0,))
    assert fs.rho_inert(1, 0) == Span.identity(1)
    with pytest.raises(InputError):
        fs.rho_inert(2, 2)


def test_embed_pointed_examples():
    assert fs.embed_pointed_map(3, 3, {0: 0, 1: 1, 2: 2}) == Span.identity(3)
    assert fs.embed_pointed_map(3, 2, {}) == Span.zero(3, 2)
    assert fs.embed_pointed_map(3, 1, {1: 0}) == fs.rho_inert(3, 1)


def _partial_maps(S, T):
    for image in itertools.product(range(-1, T), repeat=S):
        yield {x: y for x, y in enumerate(image) if y >= 0}


def test_embed_pointed_is_functorial():
    for S, T, U in itertools.product(range(3), repeat=3):
        for phi in _partial_maps(S, T):
            for psi in _partial_maps(T, U):
                lhs = fs.embed_pointed_map(S, U, fs.compose_pointed(phi, psi))
                rhs = fs.compose_spans(fs.embed_pointed_map(S, T, phi), fs.embed_pointed_map(T, U, psi))
                assert lhs == rhs


def test_product_cone_examples():
    ST, p, q = fs.product_cone(1, 1)
    assert ST == 2 and p.matrix == ((1,), (0,)) and q.matrix == ((0,), (1,))
    ST, p, q = fs.product_cone(2, 0)
    assert ST == 2 and p == Span.identity(2)
    ST, p, q = fs.product_cone(2, 3)
    assert fs.compose_spans(q, fs.rho_inert(3, 1)) == fs.rho_inert(5, 3)


def test_hom_count_examples():
    assert [fs.hom_count(1, 1, d) for d in range(5)] == [1, 2, 3, 4, 5]
    assert fs.hom_count(2, 1, 1) == 3
    assert all(fs.hom_count(0, T, d) == 1 for T in range(4) for d in range(4))
    for S, T, d in itertools.product(range(3), range(3), range(4)):
        assert fs.hom_count(S, T, d) == sum(1 for _ in fs.iter_matrices(S, T, d))


def test_hom_count_negative_grade():
    with pytest.raises(InputError):
        fs.hom_count(1, 1, -1)
