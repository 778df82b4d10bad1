"""Random discrete D-sets and relabelings shared by several test modules."""

import itertools
from functools import lru_cache

from dorbits import dspace as ds
from dorbits import finspace as fs


@lru_cache(maxsize=None)
def _dsets_with_sizes(shape, sizes):
    return list(ds.iter_dspaces(shape, [[fs.discrete(range(n))] for n in sizes]))


def size_vectors(shape, max_total):
    return [
        v for v in itertools.product(range(max_total + 1), repeat=len(shape.objects))
        if sum(v) <= max_total and _dsets_with_sizes(shape, v)
    ]


def random_dset(shape, rng, max_total=5):
    sizes = rng.choice(size_vectors(shape, max_total))
    return rng.choice(_dsets_with_sizes(shape, sizes))


def relabel(X, rng):
    """An isomorphic copy of ``X`` with freshly named, shuffled points."""
    C = X.shape
    ren = {}
    values = {}
    for d, V in zip(C.objects, X.values):
        names = [f"{d}:{k}" for k in range(len(V))]
        rng.shuffle(names)
        ren[d] = dict(zip(V.points, names))
        values[d] = fs.FinSpace(
            tuple(sorted(names)),
            frozenset((ren[d][a], ren[d][b]) for a, b in V.leq),
        )
    actions = {
        m: {ren[C.source[m]][x]: ren[C.target[m]][X.act(m)(x)] for x in X.at(C.source[m]).points}
        for m in C.morphisms
    }
    return ds.make_dspace(C, values, actions), ren


# one (number, verdict, detail, seconds) row per acceptance criterion
ACCEPTANCE = []
