"""Orbits, orbit decomposition, orbit categories and translation categories.

An orbit is a D-space whose colimit is a single point.  Every discrete D-space
splits as the coproduct of the orbits of its points, one per colimit class.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, NamedTuple, Optional, Sequence

from . import dspace as ds
from . import finspace as fs
from .dspace import DSpace, EquivariantMap
from .errors import MissingFreeOrbit, NotAnOrbit, NotDiscrete, ShapeMismatch, UnknownEntity, UnknownPoint
from .fincat import FinCategory, FinFunctor, make_category, make_functor, opposite


@dataclass(frozen=True)
class Orbit:
    underlying: DSpace
    witness: fs.Colimit = field(repr=False, compare=False)

    @property
    def shape(self):
        return self.underlying.shape

    def at(self, d):
        return self.underlying.at(d)


class OrbitVerdict(NamedTuple):
    """Truthy when the D-space is an orbit.

    ``witness`` is the colimit; ``counterexample`` is ``None``, ``"empty"`` or
    two points ``((d, x), (e, y))`` lying in different colimit classes.
    """

    ok: bool
    witness: fs.Colimit
    counterexample: object

    def __bool__(self):
        return self.ok


def is_orbit(X) -> OrbitVerdict:
    if isinstance(X, Orbit):
        X = X.underlying
    c = ds.colim_dspace(X)
    if len(c.space) == 1:
        return OrbitVerdict(True, c, None)
    if len(c.space) == 0:
        return OrbitVerdict(False, c, "empty")
    first = {}
    for (d, x), leg_point in _classes(X, c):
        first.setdefault(leg_point, (d, x))
        if len(first) == 2:
            break
    a, b = list(first.values())
    return OrbitVerdict(False, c, (a, b))


def _classes(X: DSpace, c: fs.Colimit):
    for d, V, leg in zip(X.shape.objects, X.values, c.legs):
        for x, k in zip(V.points, leg.images):
            yield (d, x), k


def as_orbit(X, name: str = "D-space") -> Orbit:
    if isinstance(X, Orbit):
        return X
    v = is_orbit(X)
    if not v:
        why = "its colimit is empty" if v.counterexample == "empty" else (
            f"{v.counterexample[0]!r} and {v.counterexample[1]!r} are not glued")
        raise NotAnOrbit(f"{name} is not an orbit: {why}")
    return Orbit(X, v.witness)


def free_orbit(D: FinCategory, d) -> Orbit:
    D.hom(d, d)  # raises UnknownObject
    return as_orbit(ds.representable(D, d))


def j_orbit(n: int, J: FinCategory = None) -> Orbit:
    """The orbit ``[n]`` over the walking arrow: ``n`` points over one point."""
    from .fincat import walking_arrow

    J = J or walking_arrow()
    s, t = J.objects
    f = J.non_identity_morphisms()[0]
    X = ds.make_dspace(J, {s: fs.discrete(range(n)), t: fs.discrete(["*"])}, {f: lambda x: "*"})
    return as_orbit(X, f"[{n}]")


# -- orbit of a point and decomposition ---------------------------------------

def _sub_dspace(X: DSpace, keep) -> DSpace:
    """The sub-D-space on the points ``(d, x)`` with ``keep(d, x)``, subspace order."""
    C = X.shape
    values = [fs.subspace(V, [x for x in V.points if keep(d, x)]) for d, V in zip(C.objects, X.values)]
    acts = []
    for k, m in enumerate(C.morphisms):
        i, j = C.object_index[C.source[m]], C.object_index[C.target[m]]
        a = X.actions[k]
        acts.append(fs.MonotoneMap(values[i], values[j], tuple(a(x) for x in values[i].points)))
    return ds._dspace(C, values, acts)


def _class_table(X: DSpace, c: fs.Colimit = None):
    c = c or ds.colim_dspace(X)
    table = {}
    for (d, x), k in _classes(X, c):
        table[d, x] = k
    return c, table


def orbit_of_point(X: DSpace, d, x) -> Orbit:
    """The points glued to ``x`` in the colimit, as a sub-D-space."""
    if x not in X.at(d):
        raise UnknownPoint(f"{x!r} is not a point of the value at {d!r}")
    _, table = _class_table(X)
    k = table[d, x]
    return as_orbit(_sub_dspace(X, lambda e, y: table[e, y] == k))


class Part(NamedTuple):
    orbit: Orbit
    points: tuple   # the (object, point) pairs of the part, in shape order
    label: str


def decompose_dset(T: DSpace) -> list:
    """Split a discrete D-space into its orbits, one per colimit class.

    Parts come in order of their least point.
    """
    if not T.is_discrete():
        bad = next(d for d, V in zip(T.shape.objects, T.values) if not V.is_discrete())
        raise NotDiscrete(f"value at {bad!r} is not discrete")
    c, table = _class_table(T)
    parts = []
    for k in range(len(c.space)):
        O = as_orbit(_sub_dspace(T, lambda e, y: table[e, y] == k))
        pts = tuple(p for p in T.points() if table[p] == k)
        parts.append(Part(O, pts, iso_label(O)))
    return parts


def reassemble(parts: Sequence[Part], shape: FinCategory) -> DSpace:
    return ds.coproduct_many([p.orbit.underlying for p in parts], shape)


# -- iso-class labels ---------------------------------------------------------

def _arrow_shape(C: FinCategory):
    """``(s, t)`` if ``C`` is the walking arrow up to labels, else ``None``."""
    if len(C.objects) != 2 or len(C.morphisms) != 3:
        return None
    (f,) = C.non_identity_morphisms()
    s, t = C.source[f], C.target[f]
    return (s, t) if s != t else None


def _is_group(C: FinCategory) -> bool:
    return len(C.objects) == 1 and all(C.is_iso(m) for m in C.morphisms)


def iso_label(X) -> str:
    """A name that depends only on the isomorphism class.

    Discrete walking-arrow orbits are named ``[n]`` and discrete group orbits
    ``G/{stabilizer}``; everything else gets a digest of its canonical form.
    """
    if isinstance(X, Orbit):
        X = X.underlying
    C = X.shape
    if X.is_discrete() and is_orbit(X):
        st = _arrow_shape(C)
        if st is not None and len(X.at(st[1])) == 1:
            return f"[{len(X.at(st[0]))}]"
        if _is_group(C):
            _, Xc = ds.canonical_form(X)
            stab = [str(m) for m in C.morphisms if Xc.act(m).images[0] == 0]
            return "G/{" + ",".join(stab) + "}"
    key = ds.canonical_key(X)
    digest = hashlib.sha1(repr(key).encode()).hexdigest()[:8]
    sizes = ",".join(map(str, X.sizes))
    return f"<{sizes}>#{digest}"


# -- enumeration --------------------------------------------------------------

def _size_vectors(k: int, total: int):
    for v in itertools.product(range(total + 1), repeat=k):
        if sum(v) <= total:
            yield v


def enumerate_discrete_orbits(D: FinCategory, max_size: int) -> list:
    """One representative per isomorphism class of discrete orbits with at
    most ``max_size`` points in total, ordered by size vector."""
    reps = []
    vectors = sorted(_size_vectors(len(D.objects), max_size), key=lambda v: (sum(v), v))
    for v in vectors:
        if sum(v) == 0:
            continue
        cands = [[fs.discrete(range(n))] for n in v]
        found = []
        for X in ds.iter_dspaces(D, cands):
            if not is_orbit(X):
                continue
            if any(ds.is_isomorphic(X, Y) for Y in found):
                continue
            found.append(X)
        found.sort(key=ds.canonical_key)
        reps.extend(as_orbit(ds.canonical_form(X)[1]) for X in found)
    return reps


# -- orbit categories ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class OrbitCategory:
    """The full subcategory of D-spaces on a finite family of orbits.

    Objects are the family names; the morphism ``(O, P, k)`` is the ``k``-th
    equivariant map ``O → P`` in enumeration order.
    """

    shape: FinCategory
    names: tuple
    orbits: tuple
    category: FinCategory
    maps: Mapping = field(repr=False)
    free: Mapping = field(repr=False)   # object of D -> name of its free orbit

    @cached_property
    def op(self) -> FinCategory:
        return opposite(self.category)

    @cached_property
    def _by_name(self):
        return dict(zip(self.names, self.orbits))

    @cached_property
    def _labels(self):
        return {(k[0], k[1], f.components): k for k, f in self.maps.items()}

    def orbit(self, name) -> Orbit:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownEntity(f"no orbit named {name!r} in the family") from None

    def map(self, label) -> EquivariantMap:
        return self.maps[label]

    def label_of(self, src, tgt, f: EquivariantMap):
        return self._labels[src, tgt, f.components]

    @cached_property
    def _classifiers(self):
        return {}

    def classifier_label(self, name, d, o):
        """Label of the map ``F^d → O`` sending ``id_d`` to ``o``."""
        key = (name, d, o)
        cache = self._classifiers
        if key not in cache:
            f = point_classifier(self.orbit(name), d, o)
            cache[key] = self.label_of(self.free[d], name, f)
        return cache[key]

    def precompose_label(self, m):
        """Label of ``D(m, -): F^{d'} → F^d`` for ``m: d → d'``."""
        D = self.shape
        d, d2 = D.source[m], D.target[m]
        src, tgt = self.orbit(self.free[d2]).underlying, self.orbit(self.free[d]).underlying
        comps = tuple(tuple(D.compose(g, m) for g in V.points) for V in src.values)
        return self.label_of(self.free[d2], self.free[d], EquivariantMap(src, tgt, comps))

    def hom_counts(self) -> list:
        C = self.category
        return [[len(C.hom(a, b)) for b in C.objects] for a in C.objects]


def point_classifier(O, d, o) -> EquivariantMap:
    """The equivariant map ``F^d → O`` sending ``id_d`` to ``o``."""
    U = O.underlying if isinstance(O, Orbit) else O
    if o not in U.at(d):
        raise UnknownPoint(f"{o!r} is not a point of the value at {d!r}")
    D = U.shape
    F = ds.representable(D, d)
    comps = tuple(tuple(U.act(g)(o) for g in V.points) for V in F.values)
    return EquivariantMap(F, U, comps)


def orbit_category(D: FinCategory, family, check: bool = True) -> OrbitCategory:
    """Build ``O_F`` for a family given as ``{name: D-space}`` or a sequence.

    The family must contain, for every object ``d``, a member equal to the
    representable ``D(d, -)`` itself, not merely isomorphic to it.
    """
    if isinstance(family, Mapping):
        items = list(family.items())
    else:
        items = [(f"O{k}", X) for k, X in enumerate(family)]
    names = tuple(n for n, _ in items)
    orbits = []
    for name, X in items:
        O = as_orbit(X, f"family member {name!r}")
        if O.shape != D:
            raise ShapeMismatch(f"family member {name!r} lives over a different category")
        orbits.append(O)
    free = {}
    for d in D.objects:
        rep = ds.representable(D, d)
        hit = next((n for n, O in zip(names, orbits) if O.underlying == rep), None)
        if hit is None:
            raise MissingFreeOrbit(d)
        free[d] = hit
    maps = {}
    morphs = []
    homs = {}
    for a, O in zip(names, orbits):
        for b, P in zip(names, orbits):
            hs = ds.enumerate_equivariant_maps(O.underlying, P.underlying)
            homs[a, b] = hs
            for k, f in enumerate(hs):
                maps[a, b, k] = f
                morphs.append(((a, b, k), (a, b)))
    lookup = {(a, b, f.components): (a, b, k) for (a, b, k), f in maps.items()}
    ident = {a: lookup[a, a, ds.identity_equivariant(O.underlying).components] for a, O in zip(names, orbits)}
    entries = []
    for a in names:
        for b in names:
            for c in names:
                for f_lab in ((a, b, k) for k in range(len(homs[a, b]))):
                    for g_lab in ((b, c, k) for k in range(len(homs[b, c]))):
                        h = maps[f_lab].then(maps[g_lab])
                        entries.append((g_lab, f_lab, lookup[a, c, h.components]))
    C = make_category(names, morphs, ident, entries, check=check)
    return OrbitCategory(D, names, tuple(orbits), C, maps, free)


# -- translation categories ---------------------------------------------------

def translation_category(T: DSpace) -> FinCategory:
    """``B_D(T)``: objects ``(d, a)``, morphisms ``(f, (d, a))`` from ``(d, a)``
    to ``(d', T_f(a))``."""
    if not T.is_discrete():
        raise NotDiscrete("translation categories need a discrete D-space")
    D = T.shape
    objects = list(T.points())
    morphs = []
    for d, a in objects:
        for f in D.out_of(d):
            morphs.append(((f, (d, a)), ((d, a), (D.target[f], T.act(f)(a)))))
    ident = {(d, a): (D.identity[d], (d, a)) for d, a in objects}
    entries = []
    for (f, (d, a)), (_, (d2, b)) in morphs:
        for g in D.out_of(d2):
            entries.append(((g, (d2, b)), (f, (d, a)), (D.compose(g, f), (d, a))))
    return make_category(objects, morphs, ident, entries)


def translation_functor(phi: EquivariantMap) -> FinFunctor:
    """The functor ``B_D(T) → B_D(T')`` induced by a map of discrete D-spaces."""
    S, T = translation_category(phi.source), translation_category(phi.target)
    obj = {(d, a): (d, phi(d, a)) for d, a in S.objects}
    mor = {(f, (d, a)): (f, (d, phi(d, a))) for f, (d, a) in S.morphisms}
    return make_functor(S, T, obj, mor)
