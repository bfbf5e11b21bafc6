import io as stdio
import json
from importlib import resources

from operadica import cli, io

DATA = resources.files("operadica") / "data"


def data(name):
    return str(DATA / f"{name}.json")


def invoke(*argv):
    out, err = stdio.StringIO(), stdio.StringIO()
    code = cli.run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def test_span_compose():
    code, out, _ = invoke("span", "compose", data("span_a"), data("span_b"))
    assert code == 0 and out.split("\n")[:2] == ["3 1", "1 1"]
    code, out, _ = invoke("span", "compose", data("span_a"), data("span_b"), "--json")
    assert json.loads(out)["matrix"] == [[3, 1], [1, 1]]


def test_span_homcount_and_factor():
    assert invoke("span", "homcount", 2, 1, "--bound", 2)[1] == "6\n"
    code, out, _ = invoke("span", "factor", data("span_b"), "--json")
    assert code == 0 and json.loads(out)["middle"] == 4


def test_operad_check_comm():
    code, out, _ = invoke("operad", "check", data("comm"), "--arity", 3)
    assert code == 0 and out == "0 violations\n"
    code, out, _ = invoke("operad", "check", data("comm"), "--arity", 3, "--json")
    assert json.loads(out) == {"violations": []}


def test_theory_roundtrip_assoc():
    code, out, _ = invoke("theory", "roundtrip", data("assoc"), "--degree", 3)
    assert code == 0
    assert "(c,c) -> c: theory 1 2 4 8 | monad 1 2 4 8" in out
    assert out.rstrip().endswith("operator comparison: pass")


def test_other_commands_succeed():
    for argv in (("operad", "operators", data("comm")),
                 ("operad", "free-algebra", data("comm"), data("family_c2"), "--degree", 2, "--terms"),
                 ("operad", "free-operad", data("gens_binary"), "--arity", 3, "--bound", 2),
                 ("monad", "laws", data("arrow_operad")),
                 ("monad", "cartesian", data("trivial")),
                 ("monad", "linear", data("cat_arrow"), data("family_arrow")),
                 ("theory", "of", data("comm")),
                 ("theory", "factor", data("comm"), data("hom_comm")),
                 ("theory", "models", data("comm"), data("family_c2")),
                 ("segal", "nerve", data("cat_arrow")),
                 ("segal", "check", data("pinned_E")),
                 ("segal", "complete", data("cat_arrow")),
                 ("segal", "roundtrip", data("pinned_E"))):
        code, out, err = invoke(*argv)
        assert code == 0, (argv, err)
        assert out


def test_free_operad_count():
    code, out, _ = invoke("operad", "free-operad", data("gens_binary"), "--arity", 3, "--bound", 2)
    assert out == "arity 0:0 1:1 2:2 3:12\n"


def test_violation_exit_code():
    code, out, _ = invoke("segal", "complete", data("pinned_E"))
    assert code == 1 and "complete (locality): False" in out


def test_bad_input_exit_code(tmp_path):
    assert invoke("operad", "check", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    code, _, err = invoke("span", "factor", str(bad))
    assert code == 2 and "invalid JSON" in err
    assert invoke("span", "homcount", 2, 1)[0] == 2
    assert invoke("span", "homcount", 2, 1, "--bound", -1)[0] == 2
    assert invoke("nonsense")[0] == 2


def test_bound_exit_code():
    assert invoke("operad", "check", data("comm"), "--arity", 9)[0] == 3
    assert invoke("operad", "free-algebra", data("comm"), data("family_c2"), "--degree", 9)[0] == 3


def test_output_is_deterministic():
    argv = ("theory", "of", data("assoc"), "--json")
    first = invoke(*argv)[1]
    assert all(invoke(*argv)[1] == first for _ in range(3))
    payload = json.loads(first)
    assert io.dumps(payload) + "\n" == first


def test_json_keys_sorted():
    out = invoke("operad", "operators", data("comm"), "--json")[1]
    keys = [k for k in json.loads(out)]
    assert keys == sorted(keys)

