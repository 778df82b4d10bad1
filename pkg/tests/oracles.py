"""Brute-force reference implementations used as test oracles.

Everything here works from raw point lists and image tables with plain
itertools, without the library's constraint solver, union-find or canonical
forms, so agreement with the library is real evidence.
"""

import itertools


def le(space, a, b):
    return (a, b) in space.leq


def all_functions(dom, cod):
    for images in itertools.product(cod, repeat=len(dom)):
        yield dict(zip(dom, images))


def is_monotone(space_a, space_b, fn):
    return all(le(space_b, fn[a], fn[b]) for a, b in space_a.leq)


def monotone_maps(A, B):
    return [fn for fn in all_functions(A.points, B.points) if is_monotone(A, B, fn)]


def equivariant_maps(X, Y):
    """All families of monotone maps X_d -> Y_d commuting with every action."""
    C = X.shape
    per_obj = [list(all_functions(X.at(d).points, Y.at(d).points)) for d in C.objects]
    out = []
    for fam in itertools.product(*per_obj):
        comp = dict(zip(C.objects, fam))
        if not all(is_monotone(X.at(d), Y.at(d), comp[d]) for d in C.objects):
            continue
        ok = True
        for m in C.morphisms:
            a, b = C.source[m], C.target[m]
            for x in X.at(a).points:
                if comp[b][X.act(m)(x)] != Y.act(m)(comp[a][x]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(tuple(tuple(comp[d][x] for x in X.at(d).points) for d in C.objects))
    return out


def colimit_classes(X):
    """Partition of the points of X generated by x ~ X_m(x), by naive closure."""
    pts = list(X.points())
    rel = {p: {p} for p in pts}
    C = X.shape
    for m in C.morphisms:
        a, b = C.source[m], C.target[m]
        for x in X.at(a).points:
            p, q = (a, x), (b, X.act(m)(x))
            rel[p].add(q)
            rel[q].add(p)
    changed = True
    while changed:
        changed = False
        for p in pts:
            grown = set().union(*(rel[q] for q in rel[p]))
            if grown != rel[p]:
                rel[p] = grown
                changed = True
    classes = []
    for p in pts:
        cls = frozenset(rel[p])
        if cls not in classes:
            classes.append(cls)
    return classes


def generated_order(points, pairs):
    """Reflexive-transitive closure by naive iteration."""
    rel = {(p, p) for p in points} | set(pairs)
    while True:
        extra = {(a, d) for a, b in rel for c, d in rel if b == c} - rel
        if not extra:
            return rel
        rel |= extra


def is_iso_dspace(X, Y):
    """Search every family of bijections for a natural order isomorphism."""
    C = X.shape
    if [len(X.at(d)) for d in C.objects] != [len(Y.at(d)) for d in C.objects]:
        return False
    per_obj = [
        [dict(zip(X.at(d).points, perm)) for perm in itertools.permutations(Y.at(d).points)]
        for d in C.objects
    ]
    for fam in itertools.product(*per_obj):
        comp = dict(zip(C.objects, fam))
        if any(
            le(X.at(d), a, b) != le(Y.at(d), comp[d][a], comp[d][b])
            for d in C.objects for a in X.at(d).points for b in X.at(d).points
        ):
            continue
        if all(
            comp[C.target[m]][X.act(m)(x)] == Y.act(m)(comp[C.source[m]][x])
            for m in C.morphisms for x in X.at(C.source[m]).points
        ):
            return True
    return False


def labelled_preorders(n):
    pts = list(range(n))
    pairs = [(i, j) for i in pts for j in pts if i != j]
    out = []
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        rel = {(i, i) for i in pts} | {p for p, b in zip(pairs, bits) if b}
        if all((a, d) in rel for a, b in rel for c, d in rel if b == c):
            out.append(rel)
    return out


def count_iso_classes(items, iso):
    reps = []
    for x in items:
        if not any(iso(x, r) for r in reps):
            reps.append(x)
    return len(reps)


def is_functor(X):
    """Identities act trivially and every composite acts as the composite."""
    C = X.shape
    for d in C.objects:
        a = X.act(C.identity[d])
        if any(a(x) != x for x in X.at(d).points):
            return False
    for (g, f), h in C.table.items():
        for x in X.at(C.source[f]).points:
            if X.act(g)(X.act(f)(x)) != X.act(h)(x):
                return False
    return True
