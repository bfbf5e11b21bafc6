from math import factorial

import pytest

from operadica import perm as P
from operadica.category import point, walking_arrow
from operadica.errors import InputError
from operadica.operad import (ColouredOperad, OperadMorphism, SymSeq, assoc_operad, comm_operad, composition_product,
                              composition_seq, is_linear, operad_from_category, pointed_operad, to_comm,
                              trivial_operad, validate_operad)


def test_comm_and_assoc_are_valid():
    assert validate_operad(comm_operad(4)) == []
    assert validate_operad(assoc_operad(4)) == []
    assert validate_operad(pointed_operad(3)) == []


def test_corrupted_composition_is_reported():
    O = assoc_operad(3)
    key = next(k for k, v in sorted(O.comp.items()) if O.arity(v) == 3 and O.arity(k[0]) == 2)
    good = O.comp[key]
    O.comp[key] = next(op for op in O.ops_of_arity(3) if op != good)
    report = validate_operad(O)
    assert report
    outer, inners = key
    named = [r for r in report if O.names[outer] in r["instance"]]
    assert named and all({"law", "instance"} <= set(r) for r in report)


def test_operation_counts():
    C = comm_operad(4)
    assert [len(C.ops_of_arity(n)) for n in range(5)] == [1] * 5
    assert len(assoc_operad(3).ops_of_arity(3)) == 6
    T = trivial_operad(3)
    assert [len(T.ops_of_arity(n)) for n in range(4)] == [0, 1, 0, 0]


def test_operad_from_category():
    Pt = operad_from_category(point(), 2)
    assert len(Pt.colours) == 1 and [len(Pt.ops_of_arity(n)) for n in range(3)] == [0, 1, 0]
    Ar = operad_from_category(walking_arrow(), 2)
    assert len(Ar.colours) == 2 and len(Ar.ops_of_arity(1)) == 3 and len(Ar.names) == 3
    assert is_linear(Ar) and validate_operad(Ar) == []


def test_is_linear_examples():
    assert not is_linear(comm_operad(2))
    assert not is_linear(assoc_operad(2))
    assert is_linear(trivial_operad(2))


def test_morphisms():
    for O in (comm_operad(3), assoc_operad(3), trivial_operad(3), pointed_operad(3)):
        assert OperadMorphism.identity(O).violations() == []
        assert to_comm(O).violations() == []


def test_bad_morphism_is_caught():
    A = assoc_operad(2)
    # send every binary word to the same word: breaks equivariance
    ops = [A.ops_of_arity(2)[0] if A.arity(op) == 2 else op for op in range(len(A.names))]
    assert any(v[0] == "sym" for v in OperadMorphism(A, A, [0], ops).violations())


def test_json_roundtrip():
    for O in (comm_operad(3), assoc_operad(3), pointed_operad(2), operad_from_category(walking_arrow(), 2)):
        again = ColouredOperad.from_json(O.to_json())
        assert again == O and again.to_json() == O.to_json()


def test_malformed_operad_file():
    data = comm_operad(2).to_json()
    data["comp"][0]["outer"] = "nope"
    with pytest.raises(InputError):
        ColouredOperad.from_json(data)
    with pytest.raises(InputError):
        ColouredOperad.from_json({"colours": ["c"]})


# symmetric sequences

def test_composition_product_examples():
    a, b = SymSeq.free({1: 1}), SymSeq.free({1: 1})
    assert len(composition_product(a, b, 1, 1)[0]) == 1
    sigma2 = SymSeq.free({2: 1})
    assert len(composition_product(sigma2, b, 2, 2)[0]) == 2


def bell(n):
    rows = [[1]]
    for _ in range(n):
        row = [rows[-1][-1]]
        for v in rows[-1]:
            row.append(row[-1] + v)
        rows.append(row)
    return rows[n][0]


def test_composition_product_counts():
    # trivial actions: set partitions; free actions: ordered blocks of linear orders
    T = SymSeq.trivial({1: 1, 2: 1, 3: 1})
    F = SymSeq.free({1: 1, 2: 1, 3: 1})
    for n in range(1, 4):
        assert len(composition_product(T, T, n, n)[0]) == bell(n)
        assert len(composition_product(F, F, n, n)[0]) == factorial(n) * 2 ** (n - 1)


def _orbit_sizes(S, n):
    seen, out = set(), []
    for x in range(S.size(n)):
        if x in seen:
            continue
        orbit = {S.apply(n, x, s) for s in P.all_perms(n)}
        seen |= orbit
        out.append(len(orbit))
    return sorted(out)


@pytest.mark.parametrize("A, B, C", [
    (SymSeq.free({2: 1}), SymSeq.trivial({1: 1, 2: 1}), SymSeq.free({1: 1})),
    (SymSeq.trivial({1: 1, 2: 1}), SymSeq.free({1: 1, 2: 1}), SymSeq.trivial({1: 2})),
    (SymSeq.free({1: 1, 3: 1}), SymSeq.free({1: 1}), SymSeq.free({1: 1, 2: 1})),
])
def test_composition_product_associative(A, B, C):
    left = composition_seq(composition_seq(A, B, 3, 3), C, 3, 3)
    right = composition_seq(A, composition_seq(B, C, 3, 3), 3, 3)
    assert left.action_violations() == [] and right.action_violations() == []
    for n in range(4):
        assert left.size(n) == right.size(n)
        assert _orbit_sizes(left, n) == _orbit_sizes(right, n)


def test_symseq_missing_action():
    with pytest.raises(InputError):
        SymSeq({2: 1}, {2: {(0, (0, 1)): 0}})


def test_of_operad_action():
    S = SymSeq.of_operad(assoc_operad(3))
    assert S.action_violations() == []
    assert [S.size(n) for n in range(4)] == [factorial(n) for n in range(4)]
