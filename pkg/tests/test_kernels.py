import itertools

import numpy as np

from operadica import finspan as fs
from operadica import kernels


def test_enum_vectors_matches_python():
    for n, d in itertools.product(range(5), range(4)):
        got = [tuple(r) for r in kernels.enum_vectors(n, d).tolist()]
        want = [tuple(v for row in m for v in row) for m in fs.iter_matrices(1, n, d)]
        assert sorted(got) == sorted(want)
        assert got == sorted(got)


def test_small_exhaustive_check_is_clean():
    pairs, bad = kernels.exhaustive_composition_check(2, 2)
    count = sum(fs.hom_count(s, t, 2) * fs.hom_count(t, u, 2)
                for s in range(3) for t in range(3) for u in range(3))
    assert pairs == count and bad == 0


def test_kernel_agrees_with_pure_python_on_a_block():
    first, second = kernels.prepare(2, 2, 2), kernels.prepare(2, 3, 2)
    expected = 0
    for a in first["M"].tolist():
        for b in second["M"].tolist():
            s1 = fs.Span(2, 2, (tuple(a[:2]), tuple(a[2:])))
            s2 = fs.Span(2, 3, (tuple(b[:3]), tuple(b[3:])))
            w = fs.canonicalize(fs.compose_witnesses(s1.witness(), s2.witness()))
            expected += w != fs.compose_spans(s1, s2)
    assert expected == 0
    assert kernels.check_block(first, second, 2, 3) == 0


def test_injected_fault_is_detected():
    first, second = kernels.prepare(2, 2, 2), kernels.prepare(2, 2, 2)
    broken = {k: v.copy() for k, v in first.items()}
    row = int(np.argmax(broken["W"] > 0))
    broken["R"][row, 0] = 1 - broken["R"][row, 0]  # move one apex element to the other column
    assert kernels.check_block(broken, second, 2, 2) > 0
