import random

import pytest

from operadica import finspan as fs
from operadica.category import category_iso, contractible_groupoid, cyclic_group, point, walking_arrow
from operadica.errors import PreconditionError
from operadica.monad import PinnedCategory
from operadica.operad import operad_from_category
from operadica.operators import category_of_operators, check_spf_conditions
from operadica.segal import (E, TruncatedSimplicialSet, category_from_segal, complete_by_invertibles,
                             complete_by_locality, f_op_c, is_complete, is_segal, linear_roundtrip, nerve,
                             random_pinned_category)

ARROW = PinnedCategory.identity(walking_arrow())


def test_nerve_examples():
    assert nerve(ARROW, 3).sizes[:3] == [2, 3, 4]
    assert nerve(PinnedCategory.identity(point()), 3).sizes == [1, 1, 1, 1]
    assert E(3).sizes == [2, 4, 8, 16]


@pytest.mark.parametrize("PC", [ARROW, PinnedCategory.identity(cyclic_group(2)),
                                PinnedCategory.identity(contractible_groupoid(2))])
def test_nerves_are_segal_and_simplicial(PC):
    T = nerve(PC, 3)
    assert T.identity_violations() == []
    assert is_segal(T)


def _drop_two_simplex(T):
    """Level-2 truncation of T without one non-degenerate 2-simplex."""
    hit = {v for s in T.degens[1] for v in s}
    gone = next(x for x in range(T.sizes[2]) if x not in hit)
    keep = [x for x in range(T.sizes[2]) if x != gone]
    new = {x: k for k, x in enumerate(keep)}
    faces = [T.faces[0], T.faces[1], [[row[x] for x in keep] for row in T.faces[2]]]
    degens = [T.degens[0], [[new[v] for v in s] for s in T.degens[1]], []]
    return TruncatedSimplicialSet(T.sizes[:2] + [len(keep)], faces, degens)


def test_deleted_two_simplex_is_not_segal():
    T = nerve(PinnedCategory.identity(cyclic_group(2)), 2)
    assert is_segal(T)
    assert not is_segal(_drop_two_simplex(T))


def test_completeness_examples():
    assert is_complete(nerve(ARROW, 3))
    assert not is_complete(E(3))
    assert not is_complete(nerve(PinnedCategory.identity(cyclic_group(2)), 3))
    with pytest.raises(PreconditionError):
        is_complete(_drop_two_simplex(nerve(PinnedCategory.identity(cyclic_group(2)), 2)))


def test_random_completeness_tests_agree(seed):
    rng = random.Random(seed)
    for _ in range(40):
        T = nerve(random_pinned_category(rng), 3)
        assert is_segal(T)
        assert complete_by_locality(T) == complete_by_invertibles(T)


def test_category_from_segal():
    for C in (walking_arrow(), cyclic_group(3), contractible_groupoid(2), point()):
        assert category_iso(category_from_segal(nerve(PinnedCategory.identity(C), 2)), C) is not None
    G = category_from_segal(E(2))
    assert category_iso(G, contractible_groupoid(2)) is not None


@pytest.mark.parametrize("C", [walking_arrow(), cyclic_group(2), point()])
def test_f_op_c_matches_operators_of_linear_operad(C):
    K = f_op_c(C, 2)
    O = operad_from_category(C, 2)
    other = category_of_operators(O, 2, 2)
    name = {c: O.colours.index(c) for c in C.objects}
    for (x, y), ms in K.homs.items():
        assert all(fs.is_inert(m.span) for m in ms)
        key = (tuple(name[c] for c in x), tuple(name[c] for c in y))
        inert = [m for m in other.homs[key] if fs.is_inert(m.span)]
        assert sorted(m.span.matrix for m in ms) == sorted(m.span.matrix for m in inert)
    assert check_spf_conditions(K)["ok"]


def test_linear_roundtrip():
    for C in (walking_arrow(), cyclic_group(2), contractible_groupoid(2)):
        assert linear_roundtrip(PinnedCategory.identity(C), 3)["ok"]


def test_simplicial_json_roundtrip():
    for T in (nerve(ARROW, 3), E(2)):
        again = TruncatedSimplicialSet.from_json(T.to_json())
        assert again.to_json() == T.to_json()
        assert again.identity_violations() == []
