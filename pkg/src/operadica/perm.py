"""Permutations as image tuples: ``p[i]`` is the image of ``i``."""
from functools import lru_cache
from itertools import permutations, product


@lru_cache(maxsize=None)
def all_perms(n: int) -> tuple:
    return tuple(permutations(range(n)))


def compose(s, t) -> tuple:
    """(s o t)[i] = s[t[i]]."""
    return tuple(s[i] for i in t)


def inverse(p) -> tuple:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def identity(n: int) -> tuple:
    return tuple(range(n))


def block_sum(perms) -> tuple:
    out = []
    off = 0
    for p in perms:
        out.extend(off + v for v in p)
        off += len(p)
    return tuple(out)


def block_shuffle(sigma, sizes) -> tuple:
    """Permutation moving block i (sizes[i] long) to block position sigma[i]."""
    inv = inverse(sigma)
    new_off = [0] * len(sizes)
    acc = 0
    for j in range(len(sizes)):
        new_off[j] = acc
        acc += sizes[inv[j]]
    out = []
    for i, n in enumerate(sizes):
        out.extend(new_off[sigma[i]] + o for o in range(n))
    return tuple(out)


def stable_sort_perm(keys) -> tuple:
    """rho with rho[t] = position of the t-th element after a stable sort."""
    return tuple(sorted(range(len(keys)), key=lambda i: keys[i]))


def block_group(sizes) -> list:
    """All permutations preserving each consecutive block of the given sizes."""
    return [block_sum(ps) for ps in product(*(all_perms(n) for n in sizes))]
