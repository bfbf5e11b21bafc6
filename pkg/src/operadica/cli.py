"""Command-line entry point.

Exit codes: 0 success, 1 a law or property fails, 2 bad input, 3 a bound
was exceeded.
"""
from __future__ import annotations

import argparse
import itertools
import sys

from . import finspan as fs
from . import io
from .errors import BoundError, InputError, PreconditionError
from .lawvere import algebras_vs_models, roundtrip, theory_of
from .monad import (FamilyMap, IndexedFamily, check_cartesian, free_algebra, free_operad, linear_monad,
                    monad_law_violations)
from .operad import validate_operad
from .operators import category_of_operators, check_spf_conditions
from .segal import is_complete, is_segal, linear_roundtrip, nerve


class Result:
    def __init__(self, payload, lines, failed=False):
        self.payload = payload
        self.lines = lines
        self.failed = failed


def _matrix_lines(m) -> list:
    return [" ".join(str(v) for v in row) for row in m] or ["(empty)"]


def _term_str(O, t) -> str:
    op, args = t
    inner = ",".join(_term_str(O, a) if isinstance(a, tuple) else str(a) for a in args)
    return f"{O.names[op]}({inner})"


# span

def cmd_span_compose(a):
    s1 = io.span_from_json(io.read_json(a.first))
    s2 = io.span_from_json(io.read_json(a.second))
    r = fs.compose_spans(s1, s2)
    return Result(io.span_to_json(r), _matrix_lines(r.matrix))


def cmd_span_factor(a):
    s = io.span_from_json(io.read_json(a.span))
    i, act = fs.factor_inert_active(s)
    payload = {"middle": i.cod, "inert": [list(r) for r in i.matrix], "active": [list(r) for r in act.matrix],
               "active_map": list(fs.active_map(act).table)}
    lines = [f"middle object: {i.cod}", "inert:"] + _matrix_lines(i.matrix) + \
            ["active map: " + " ".join(f"{k}->{v}" for k, v in enumerate(fs.active_map(act).table))]
    return Result(payload, lines)


def cmd_span_homcount(a):
    d = _need(a.bound, "--bound")
    n = fs.hom_count(a.dom, a.cod, d)
    return Result({"dom": a.dom, "cod": a.cod, "bound": d, "count": n}, [str(n)])


# operad

def _operad(path):
    return io.operad_from_json(io.read_json(path))


def cmd_operad_check(a):
    O = _operad(a.operad)
    total = a.arity if a.arity is not None else O.max_arity
    if total > O.max_arity:
        raise BoundError(f"--arity {total} exceeds the operad's bound {O.max_arity}")
    report = validate_operad(O, total)
    lines = [f"{len(report)} violations"] + [f"{r['law']}: {' '.join(r['instance'])}" for r in report]
    return Result({"violations": report}, lines, failed=bool(report))


def cmd_operad_operators(a):
    O = _operad(a.operad)
    L = a.tuples if a.tuples is not None else 2
    d = a.bound if a.bound is not None else min(2, O.max_arity)
    if d > O.max_arity:
        raise BoundError(f"--bound {d} exceeds the operad's arity bound {O.max_arity}")
    K = category_of_operators(O, L, d)
    rep = check_spf_conditions(K)
    nobj, nmor = K.count()
    payload = {"objects": nobj, "morphisms": nmor,
               "conditions": {k: rep[k] for k in ("cocartesian_lifts", "products", "fibres")},
               "failures": [repr(f) for f in rep["failures"]]}
    lines = [f"objects: {nobj}", f"morphisms: {nmor}"] + \
            [f"{k}: {'pass' if rep[k] else 'FAIL'}" for k in ("cocartesian_lifts", "products", "fibres")]
    return Result(payload, lines, failed=not rep["ok"])


def _graded_output(O, T, terms, colours):
    counts = T.counts()
    payload = {"counts": {colours[c]: counts[c] for c in range(len(colours))}}
    lines = []
    for c, row in enumerate(counts):
        lines.append(f"{colours[c]}: " + " ".join(f"{g}:{n}" for g, n in enumerate(row)))
    if terms:
        payload["terms"] = {colours[c]: [_term_str(O, t) for t in T.elements(c)] for c in range(len(colours))}
        for c in range(len(colours)):
            lines += [f"  {colours[c]} {_term_str(O, t)}" for t in T.elements(c)]
    return payload, lines


def cmd_operad_free_algebra(a):
    O = _operad(a.operad)
    F = io.family_from_json(io.read_json(a.family), O.colours)
    D = _need(a.degree, "--degree")
    T = free_algebra(O, F, D)
    payload, lines = _graded_output(O, T, a.terms, O.colours)
    return Result(payload, lines)


def cmd_operad_free_operad(a):
    K = io.generators_from_json(io.read_json(a.generators))
    A = _need(a.arity, "--arity")
    D = _need(a.bound, "--bound")
    O = free_operad(K, A, D)
    counts = [len(O.ops_of_arity(n)) for n in range(A + 1)]
    payload = {"counts": counts}
    lines = ["arity " + " ".join(f"{n}:{k}" for n, k in enumerate(counts))]
    if a.terms:
        payload["operations"] = list(O.names)
        lines += [f"  {n}" for n in O.names]
    return Result(payload, lines)


# monad

def _families(O, max_size=2):
    for sizes in itertools.product(range(max_size + 1), repeat=len(O.colours)):
        yield IndexedFamily.of_sizes(sizes)


def cmd_monad_laws(a):
    O = _operad(a.operad)
    D = a.degree if a.degree is not None else min(2, O.max_arity)
    fams = [io.family_from_json(io.read_json(a.family), O.colours)] if a.family else list(_families(O))
    bad = []
    for F in fams:
        bad += [(F.sizes(), v[0]) for v in monad_law_violations(O, F, D)]
    lines = [f"families checked: {len(fams)}", f"violations: {len(bad)}"]
    return Result({"families": len(fams), "violations": [list(map(str, b)) for b in bad]}, lines, failed=bool(bad))


def cmd_monad_cartesian(a):
    O = _operad(a.operad)
    D = a.degree if a.degree is not None else min(2, O.max_arity)
    fams = list(_families(O))
    checked, failed = 0, []
    for F in fams:
        for G in fams:
            for phi in FamilyMap.all_maps(F, G):
                for alpha in ("unit", "mult"):
                    checked += 1
                    if not check_cartesian(O, alpha, phi, D):
                        failed.append([alpha, list(F.sizes()), list(G.sizes())])
    lines = [f"squares checked: {checked}", f"not pullbacks: {len(failed)}"]
    return Result({"checked": checked, "failures": failed}, lines, failed=bool(failed))


def cmd_monad_linear(a):
    PC = io.pinned_from_json(io.read_json(a.category))
    F = io.family_from_json(io.read_json(a.family), PC.labels)
    T = linear_monad(PC, F)
    payload = {"sizes": {x: T.size(k) for k, x in enumerate(PC.labels)}}
    lines = [f"{x}: {T.size(k)}" for k, x in enumerate(PC.labels)]
    if a.terms:
        payload["elements"] = {x: [f"{PC.labels[j]}:{f}:{e}" for j, f, e in T.sets[k]]
                               for k, x in enumerate(PC.labels)}
        for k, x in enumerate(PC.labels):
            lines += [f"  {x} {PC.labels[j]}:{f}:{e}" for j, f, e in T.sets[k]]
    return Result(payload, lines)


# theory

def cmd_theory_of(a):
    O = _operad(a.operad)
    L = a.tuples if a.tuples is not None else 2
    D = a.degree if a.degree is not None else min(2, O.max_arity)
    Lth = theory_of(O, L, D)
    data = Lth.to_json()
    lines = []
    for h in data["homs"]:
        lines.append(f"({','.join(h['source'])}) -> ({','.join(h['target'])}): "
                     + " ".join(str(n) for n in h["by_grade"]))
    return Result(data, lines)


def cmd_theory_factor(a):
    O = _operad(a.operad)
    names, terms = io.hom_from_json(io.read_json(a.hom))
    try:
        cidx = {c: i for i, c in enumerate(O.colours)}
        src = tuple(cidx[c] for c in names)
        h = tuple((O.index[op], args) for op, args in terms)
    except KeyError as e:
        raise InputError(f"morphism names unknown colour or operation {e}") from e
    from .monad import canonical_term
    h = tuple(canonical_term(O, op, args) for op, args in h)
    grade = sum(len(t[1]) for t in h)
    Lth = theory_of(O, max(len(src), len(h), 1), min(max(grade, 0), O.max_arity))
    b = tuple(O.output(op) for op, _ in h)
    if not Lth.source_ok(src, b, h):
        raise InputError("terms do not match the source tuple")
    w, inert, active = Lth.factor(src, h)
    recomposed = Lth.then(inert, active) == h
    payload = {"middle": [O.colours[c] for c in w],
               "inert": [_term_str(O, t) for t in inert], "active": [_term_str(O, t) for t in active],
               "recomposes": recomposed}
    lines = ["middle: (" + ",".join(O.colours[c] for c in w) + ")",
             "inert: " + " ".join(payload["inert"]), "active: " + " ".join(payload["active"])]
    return Result(payload, lines, failed=not recomposed)


def cmd_theory_models(a):
    O = _operad(a.operad)
    F = io.family_from_json(io.read_json(a.family), O.colours)
    if any(k > 2 for k in F.sizes()):
        raise BoundError("model enumeration is limited to value sets of size at most 2")
    r = algebras_vs_models(O, list(F.sizes()), a.tuples, a.degree)
    lines = [f"{k}: {v}" for k, v in sorted(r.items())]
    failed = r["algebras"] != r["models"] or not r["same_structures"]
    return Result(r, lines, failed=failed)


def cmd_theory_roundtrip(a):
    O = _operad(a.operad)
    L = a.tuples if a.tuples is not None else 2
    D = a.degree if a.degree is not None else min(2, O.max_arity)
    r = roundtrip(O, L, D)
    lines = []
    for row in r["free_models"]:
        lines.append(f"({','.join(row['generators'])}) -> {row['colour']}: theory "
                     + " ".join(map(str, row["theory"])) + " | monad " + " ".join(map(str, row["monad"]))
                     + ("" if row["match"] else "  MISMATCH"))
    lines.append(f"operator comparison: {'pass' if not r['operators_mismatch'] else 'FAIL'}")
    payload = {"free_models": r["free_models"], "operators_mismatch": [repr(m) for m in r["operators_mismatch"]],
               "ok": r["ok"]}
    return Result(payload, lines, failed=not r["ok"])


# segal

def _simplicial(path, level):
    data = io.read_json(path)
    if "levels" in data:
        return io.simplicial_from_json(data)
    return nerve(io.pinned_from_json(data), level)


def cmd_segal_nerve(a):
    N = a.level if a.level is not None else 3
    T = nerve(io.pinned_from_json(io.read_json(a.category)), N)
    return Result(T.to_json(), ["levels: " + " ".join(map(str, T.sizes))])


def cmd_segal_check(a):
    T = _simplicial(a.input, a.level if a.level is not None else 3)
    ok = is_segal(T)
    return Result({"segal": ok}, [f"segal: {ok}"], failed=not ok)


def cmd_segal_complete(a):
    T = _simplicial(a.input, a.level if a.level is not None else 3)
    loc = is_complete(T, "locality")
    inv = is_complete(T, "invertibles")
    return Result({"complete": loc, "locality": loc, "invertibles": inv},
                  [f"complete (locality): {loc}", f"complete (invertibles): {inv}"], failed=not (loc and inv))


def cmd_segal_roundtrip(a):
    N = a.level if a.level is not None else 3
    r = linear_roundtrip(io.pinned_from_json(io.read_json(a.category)), N)
    lines = ["nerve: " + " ".join(map(str, r["nerve"])), "monad: " + " ".join(map(str, r["monad"]))]
    return Result(r, lines, failed=not r["ok"])


def _need(v, flag):
    if v is None:
        raise InputError(f"{flag} is required")
    return v


def _nonneg(s):
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {s}")
    if v < 0:
        raise argparse.ArgumentTypeError("bounds must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    for flag in ("--bound", "--arity", "--tuples", "--degree", "--level"):
        common.add_argument(flag, type=_nonneg)
    common.add_argument("--terms", action="store_true", help="list canonical elements")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = argparse.ArgumentParser(prog="operadica", description="Span(F)-operads, analytic monads and Lawvere theories")
    groups = p.add_subparsers(dest="group", required=True)

    def leaf(group, name, fn, *args):
        sp = group.add_parser(name, parents=[common])
        for a in args:
            if a.endswith("?"):
                sp.add_argument(a[:-1], nargs="?")
            elif a.endswith(":int"):
                sp.add_argument(a[:-4], type=_nonneg)
            else:
                sp.add_argument(a)
        sp.set_defaults(fn=fn)

    g = groups.add_parser("span").add_subparsers(dest="cmd", required=True)
    leaf(g, "compose", cmd_span_compose, "first", "second")
    leaf(g, "factor", cmd_span_factor, "span")
    leaf(g, "homcount", cmd_span_homcount, "dom:int", "cod:int")

    g = groups.add_parser("operad").add_subparsers(dest="cmd", required=True)
    leaf(g, "check", cmd_operad_check, "operad")
    leaf(g, "operators", cmd_operad_operators, "operad")
    leaf(g, "free-algebra", cmd_operad_free_algebra, "operad", "family")
    leaf(g, "free-operad", cmd_operad_free_operad, "generators")

    g = groups.add_parser("monad").add_subparsers(dest="cmd", required=True)
    leaf(g, "laws", cmd_monad_laws, "operad", "family?")
    leaf(g, "cartesian", cmd_monad_cartesian, "operad")
    leaf(g, "linear", cmd_monad_linear, "category", "family")

    g = groups.add_parser("theory").add_subparsers(dest="cmd", required=True)
    leaf(g, "of", cmd_theory_of, "operad")
    leaf(g, "factor", cmd_theory_factor, "operad", "hom")
    leaf(g, "models", cmd_theory_models, "operad", "family")
    leaf(g, "roundtrip", cmd_theory_roundtrip, "operad")

    g = groups.add_parser("segal").add_subparsers(dest="cmd", required=True)
    leaf(g, "nerve", cmd_segal_nerve, "category")
    leaf(g, "check", cmd_segal_check, "input")
    leaf(g, "complete", cmd_segal_complete, "input")
    leaf(g, "roundtrip", cmd_segal_roundtrip, "category")
    return p


def run(argv, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        res = args.fn(args)
    except BoundError as e:
        print(f"bound exceeded: {e}", file=err)
        return 3
    except (InputError, PreconditionError) as e:
        print(f"error: {e}", file=err)
        return 2
    if args.json:
        print(io.dumps(res.payload), file=out)
    else:
        for line in res.lines:
            print(line, file=out)
    return 1 if res.failed else 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
