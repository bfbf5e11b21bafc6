import pytest

from operadica import finspan as fs
from operadica import io
from operadica.errors import InputError
from operadica.monad import free_operad
from operadica.operad import SymSeq


def test_every_shipped_file_roundtrips():
    names = io.shipped_names()
    assert len(names) >= 15
    for name in names:
        data = io.shipped(name)
        first, second, text = io.roundtrip_data(data)
        assert first == second, name
        assert io.kind_of(text) == io.kind_of(data)


def test_kind_of():
    assert io.kind_of({"dom": 1, "cod": 1, "matrix": [[1]]}) == "span"
    assert io.kind_of({"levels": [1, 1, 1]}) == "simplicial"
    with pytest.raises(InputError):
        io.kind_of([1, 2])
    with pytest.raises(InputError):
        io.kind_of({"what": 1})


def test_witness_becomes_canonical_span():
    w = {"dom": 2, "cod": 1, "apex": 3, "left": [0, 0, 1], "right": [0, 0, 0]}
    assert io.span_from_json(w).matrix == ((2,), (1,))
    with pytest.raises(InputError):
        io.span_from_json({"dom": 2, "cod": 1, "apex": 1, "left": [5], "right": [0]})


def test_generators_roundtrip_mixed():
    data = {"generators": [{"action": "free", "arity": 2, "count": 1},
                           {"action": "trivial", "arity": 2, "count": 1}]}
    K = io.generators_from_json(data)
    assert io.generators_to_json(K) == data
    assert [len(free_operad(K, 2, 1).ops_of_arity(n)) for n in range(3)] == [0, 1, 3]
    with pytest.raises(InputError):
        io.generators_from_json({"generators": [{"arity": 2, "action": "odd"}]})


def test_family_rejects_unknown_colours():
    with pytest.raises(InputError):
        io.family_from_json({"sets": {"z": 1}}, ["c"])


def test_seed_override(monkeypatch):
    monkeypatch.delenv("OPERADICA_SEED", raising=False)
    assert io.property_seed() == io.DEFAULT_SEED
    monkeypatch.setenv("OPERADICA_SEED", "7")
    assert io.property_seed() == 7
    monkeypatch.setenv("OPERADICA_SEED", "seven")
    with pytest.raises(InputError):
        io.property_seed()


def test_read_json_errors(tmp_path):
    with pytest.raises(InputError):
        io.read_json(tmp_path / "nope.json")
    with pytest.raises(InputError):
        io.shipped("nope")
