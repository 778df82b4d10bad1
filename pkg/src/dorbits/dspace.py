"""D-spaces (functors from a finite category to finite spaces) and their maps.

A ``DSpace`` stores one ``FinSpace`` per object and one ``MonotoneMap`` per
morphism of its shape.  Equivariant maps store, per object, the tuple of images
of the source points; two equivariant maps are equal when these tuples agree.

Most enumeration goes through a small constraint solver over
``(object, point)`` variables.  A naturality square fixes the image of
``X_f(x)`` once the image of ``x`` is chosen, so maps out of a free orbit are
determined by the image of the identity, exactly as Yoneda predicts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple, Optional, Sequence

from . import finspace as fs
from .errors import (
    NonMonotone,
    NonMonotoneAction,
    NotAnOrbit,
    NotFunctorial,
    NotNatural,
    ShapeMismatch,
    UnknownObject,
    UnknownPoint,
    ValidationError,
)
from .fincat import FinCategory, FinFunctor, finset_category, make_functor, opposite
from .finspace import FinSpace, MonotoneMap


@dataclass(frozen=True)
class DSpace:
    shape: FinCategory = field(repr=False)
    values: tuple   # FinSpace per object, in shape order
    actions: tuple = field(repr=False)  # MonotoneMap per morphism, in shape order

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self):
        return hash((self.values, tuple(a.images for a in self.actions)))

    def at(self, d) -> FinSpace:
        try:
            return self.values[self.shape.object_index[d]]
        except KeyError:
            raise UnknownObject(f"unknown object {d!r}") from None

    def act(self, m) -> MonotoneMap:
        return self.actions[self.shape.morphism_index[m]]

    def points(self) -> Iterator[tuple]:
        for d, X in zip(self.shape.objects, self.values):
            for x in X.points:
                yield d, x

    @property
    def sizes(self) -> tuple:
        return tuple(len(X) for X in self.values)

    def total_size(self) -> int:
        return sum(self.sizes)

    def is_discrete(self) -> bool:
        return all(X.is_discrete() for X in self.values)

    def __str__(self):
        parts = ", ".join(f"{d}:{len(X)}" for d, X in zip(self.shape.objects, self.values))
        return f"DSpace({parts})"


def _dspace(shape, values, actions) -> DSpace:
    return DSpace(shape, tuple(values), tuple(actions))


def make_dspace(shape: FinCategory, values: Mapping, actions: Mapping = None) -> DSpace:
    """Build and validate a D-space.

    ``values`` maps objects to spaces; ``actions`` maps morphisms to a
    ``MonotoneMap`` or to a point assignment (dict or callable).  Identity
    actions may be omitted.
    """
    actions = actions or {}
    vals = []
    for d in shape.objects:
        if d not in values:
            raise ValidationError(f"no space given for object {d!r}")
        vals.append(values[d])
    acts = []
    for m in shape.morphisms:
        X, Y = vals[shape.object_index[shape.source[m]]], vals[shape.object_index[shape.target[m]]]
        a = actions.get(m)
        if a is None:
            if not shape.is_identity(m):
                raise ValidationError(f"no action given for morphism {m!r}")
            a = fs.identity_map(X)
        elif not isinstance(a, MonotoneMap):
            try:
                a = fs.monotone_map(X, Y, a)
            except NonMonotone as e:
                raise NonMonotoneAction(f"action of {m!r}: {e}") from None
        elif a.domain != X or a.codomain != Y:
            raise ValidationError(f"action of {m!r} has the wrong domain or codomain")
        acts.append(a)
    return validate_dspace(_dspace(shape, vals, acts))


def validate_dspace(X) -> DSpace:
    """Check monotonicity and functoriality of a D-space.

    Accepts a ``DSpace`` or a raw mapping with ``shape``, ``values`` and
    ``actions`` keys.
    """
    if not isinstance(X, DSpace):
        return make_dspace(X["shape"], X["values"], X.get("actions"))
    C = X.shape
    for m, a in zip(C.morphisms, X.actions):
        if a.domain != X.at(C.source[m]) or a.codomain != X.at(C.target[m]):
            raise ValidationError(f"action of {m!r} has the wrong domain or codomain")
        for y in a.images:
            if y not in a.codomain.index:
                raise UnknownPoint(f"action of {m!r} hits unknown point {y!r}")
        bad = fs.monotonicity_failure(a)
        if bad is not None:
            raise NonMonotoneAction(f"action of {m!r} is not monotone on {bad[0]!r} <= {bad[1]!r}")
    for d in C.objects:
        if X.act(C.identity[d]).images != X.at(d).points:
            raise NotFunctorial(f"identity of {d!r} does not act as the identity")
    for (g, f), h in C.table.items():
        if X.act(f).then(X.act(g)).images != X.act(h).images:
            raise NotFunctorial(f"composable pair ({g!r}, {f!r}): X({g!r})∘X({f!r}) != X({h!r})")
    return X


# -- standard D-spaces --------------------------------------------------------

def constant(shape: FinCategory, A: FinSpace) -> DSpace:
    ident = fs.identity_map(A)
    return _dspace(shape, [A] * len(shape.objects), [ident] * len(shape.morphisms))


def terminal_dspace(shape: FinCategory) -> DSpace:
    return constant(shape, fs.terminal())


def empty_dspace(shape: FinCategory) -> DSpace:
    return constant(shape, fs.empty())


@lru_cache(maxsize=256)
def representable(shape: FinCategory, d) -> DSpace:
    """The discrete D-space ``e ↦ shape(d, e)``, acting by postcomposition."""
    values = [fs.discrete(shape.hom(d, e)) for e in shape.objects]
    acts = []
    for m in shape.morphisms:
        a, b = shape.source[m], shape.target[m]
        X, Y = values[shape.object_index[a]], values[shape.object_index[b]]
        acts.append(MonotoneMap(X, Y, tuple(shape.compose(m, g) for g in X.points)))
    return _dspace(shape, values, acts)


def restrict_along(X: DSpace, F: FinFunctor) -> DSpace:
    """Precompose ``X`` with a functor into its shape."""
    if F.codomain != X.shape:
        raise ShapeMismatch("functor does not land in the shape of the D-space")
    C = F.domain
    return _dspace(C, [X.at(F.object_map[d]) for d in C.objects], [X.act(F.morphism_map[m]) for m in C.morphisms])


# -- equivariant maps ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EquivariantMap:
    source: DSpace = field(repr=False)
    target: DSpace = field(repr=False)
    components: tuple  # per object, the images of the source points

    def __eq__(self, other):
        if not isinstance(other, EquivariantMap):
            return NotImplemented
        return self is other or self.components == other.components

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self):
        return hash(self.components)

    def __call__(self, d, x):
        i = self.source.shape.object_index[d]
        try:
            return self.components[i][self.source.values[i].index[x]]
        except KeyError:
            raise UnknownPoint(f"{x!r} is not a point of the source at {d!r}") from None

    def component(self, d) -> MonotoneMap:
        i = self.source.shape.object_index[d]
        return MonotoneMap(self.source.values[i], self.target.values[i], self.components[i])

    @cached_property
    def index_components(self) -> tuple:
        return tuple(
            tuple(Y.index[y] for y in comp) for Y, comp in zip(self.target.values, self.components)
        )

    def then(self, g: "EquivariantMap") -> "EquivariantMap":
        """Return ``g ∘ self``."""
        comps = tuple(
            tuple(gc[Y.index[y]] for y in fc)
            for fc, gc, Y in zip(self.components, g.components, g.source.values)
        )
        return EquivariantMap(self.source, g.target, comps)

    def __repr__(self):
        inner = "; ".join(
            f"{d}: " + ", ".join(f"{x!r}->{y!r}" for x, y in zip(X.points, comp))
            for d, X, comp in zip(self.source.shape.objects, self.source.values, self.components)
        )
        return f"EquivariantMap({inner})"


def compose_maps(g: EquivariantMap, f: EquivariantMap) -> EquivariantMap:
    """Return ``g ∘ f``."""
    return f.then(g)


def identity_equivariant(X: DSpace) -> EquivariantMap:
    return EquivariantMap(X, X, tuple(V.points for V in X.values))


def equivariant_map(X: DSpace, Y: DSpace, assignment, check: bool = True) -> EquivariantMap:
    """Build an equivariant map from ``{d: {x: y}}`` or a callable ``(d, x) -> y``."""
    _same_shape(X, Y)
    comps = []
    for d, V in zip(X.shape.objects, X.values):
        if callable(assignment):
            comps.append(tuple(assignment(d, x) for x in V.points))
        else:
            try:
                table = assignment[d]
                comps.append(tuple(table[x] for x in V.points))
            except KeyError as e:
                raise UnknownPoint(f"assignment at {d!r} has no image for {e.args[0]!r}") from None
    f = EquivariantMap(X, Y, tuple(comps))
    if check:
        validate_equivariant(f)
    return f


def validate_equivariant(f: EquivariantMap) -> EquivariantMap:
    X, Y = f.source, f.target
    C = X.shape
    try:
        comps = f.index_components
    except KeyError:
        for d, W, comp in zip(C.objects, Y.values, f.components):
            for y in comp:
                if y not in W.index:
                    raise UnknownPoint(f"component at {d!r} hits unknown point {y!r}") from None
        raise
    for d, V, W, ci in zip(C.objects, X.values, Y.values, comps):
        wup = W.up
        for i, mask in enumerate(V.up):
            target = wup[ci[i]]
            j = 0
            while mask:
                if mask & 1 and not target >> ci[j] & 1:
                    bad = fs.monotonicity_failure(f.component(d))
                    raise NonMonotone(f"component at {d!r} is not monotone on {bad[0]!r} <= {bad[1]!r}")
                mask >>= 1
                j += 1
    oi = C.object_index
    for m, xa, ya in zip(C.morphisms, X.actions, Y.actions):
        ca, cb = comps[oi[C.source[m]]], comps[oi[C.target[m]]]
        xm, ym = xa.index_images, ya.index_images
        for i in range(len(ca)):
            if cb[xm[i]] != ym[ca[i]]:
                x = X.at(C.source[m]).points[i]
                raise NotNatural(f"naturality fails for {m!r} at point {x!r}")
    return f


def is_isomorphism(f: EquivariantMap) -> bool:
    C = f.source.shape
    return all(fs.is_isomorphism(f.component(d)) for d in C.objects)


def _same_shape(X: DSpace, Y: DSpace):
    if X.shape != Y.shape:
        raise ShapeMismatch("D-spaces have different shapes")


class _Problem:
    """Index-level description of the equivariant maps X → Y."""

    def __init__(self, X: DSpace, Y: DSpace):
        C = X.shape
        self.X, self.Y = X, Y
        oi = C.object_index
        self.offsets = []
        total = 0
        for V in X.values:
            self.offsets.append(total)
            total += len(V)
        self.n = total
        self.obj_of = [i for i, V in enumerate(X.values) for _ in range(len(V))]
        self.forced = [[] for _ in range(total)]   # (u, ymap): value == ymap[val[u]]
        self.back = [[] for _ in range(total)]     # (w, ymap): ymap[value] == val[w]
        self.fixed = [[] for _ in range(total)]    # ymap: ymap[value] == value
        self.below = [[] for _ in range(total)]    # earlier u with x_u <= x_v
        self.above = [[] for _ in range(total)]    # earlier u with x_v <= x_u
        for m in C.morphisms:
            if C.is_identity(m):
                continue
            a, b = oi[C.source[m]], oi[C.target[m]]
            xm = X.actions[C.morphism_index[m]].index_images
            ym = Y.actions[C.morphism_index[m]].index_images
            for x, x2 in enumerate(xm):
                u, w = self.offsets[a] + x, self.offsets[b] + x2
                if u == w:
                    self.fixed[u].append(ym)
                elif w > u:
                    self.forced[w].append((u, ym))
                else:
                    self.back[u].append((w, ym))
        for i, V in enumerate(X.values):
            off = self.offsets[i]
            for x in range(len(V)):
                for x2 in range(x):
                    if V.up[x2] >> x & 1:
                        self.below[off + x].append(off + x2)
                    if V.up[x] >> x2 & 1:
                        self.above[off + x].append(off + x2)
        self.yup = [Y.values[self.obj_of[v]].up for v in range(total)]
        self.ysize = [len(Y.values[self.obj_of[v]]) for v in range(total)]

    def solve(self, injective=False, rng=None, limit=None) -> Iterator[tuple]:
        n = self.n
        val = [0] * n
        forced, back, fixed = self.forced, self.back, self.fixed
        below, above, yup, ysize = self.below, self.above, self.yup, self.ysize
        obj_of = self.obj_of
        count = [0]

        def ok(v, y):
            up = yup[v]
            for u in below[v]:
                if not up[val[u]] >> y & 1:
                    return False
            for u in above[v]:
                if not up[y] >> val[u] & 1:
                    return False
            for w, ym in back[v]:
                if ym[y] != val[w]:
                    return False
            for ym in fixed[v]:
                if ym[y] != y:
                    return False
            if injective:
                o = obj_of[v]
                for u in range(v - 1, -1, -1):
                    if obj_of[u] != o:
                        break
                    if val[u] == y:
                        return False
            return True

        def go(v):
            if v == n:
                count[0] += 1
                yield tuple(val)
                return
            if forced[v]:
                u, ym = forced[v][0]
                y = ym[val[u]]
                for u2, ym2 in forced[v][1:]:
                    if ym2[val[u2]] != y:
                        return
                cands = (y,)
            else:
                cands = list(range(ysize[v]))
                if rng is not None:
                    rng.shuffle(cands)
            for y in cands:
                if ok(v, y):
                    val[v] = y
                    yield from go(v + 1)
                    if limit is not None and count[0] >= limit:
                        return

        yield from go(0)

    def to_map(self, vals: tuple) -> EquivariantMap:
        comps = []
        for i, (V, W) in enumerate(zip(self.X.values, self.Y.values)):
            off = self.offsets[i]
            pts = W.points
            comps.append(tuple(pts[vals[off + x]] for x in range(len(V))))
        return EquivariantMap(self.X, self.Y, tuple(comps))


def iter_equivariant_maps(X: DSpace, Y: DSpace, injective: bool = False) -> Iterator[EquivariantMap]:
    _same_shape(X, Y)
    p = _Problem(X, Y)
    for vals in p.solve(injective=injective):
        yield p.to_map(vals)


def enumerate_equivariant_maps(X: DSpace, Y: DSpace) -> list:
    """Every equivariant map ``X → Y``, in lexicographic order of images."""
    return list(iter_equivariant_maps(X, Y))


def count_equivariant_maps(X: DSpace, Y: DSpace) -> int:
    _same_shape(X, Y)
    return sum(1 for _ in _Problem(X, Y).solve())


def random_equivariant_map(X: DSpace, Y: DSpace, rng) -> Optional[EquivariantMap]:
    """Some equivariant map found with randomized search order, or ``None``."""
    _same_shape(X, Y)
    p = _Problem(X, Y)
    for vals in p.solve(rng=rng, limit=1):
        return p.to_map(vals)
    return None


def find_isomorphism(X: DSpace, Y: DSpace) -> Optional[EquivariantMap]:
    _same_shape(X, Y)
    if X.sizes != Y.sizes or [len(V.leq) for V in X.values] != [len(V.leq) for V in Y.values]:
        return None
    for f in iter_equivariant_maps(X, Y, injective=True):
        if is_isomorphism(f):
            return f
    return None


def is_isomorphic(X: DSpace, Y: DSpace) -> bool:
    return find_isomorphism(X, Y) is not None


def hom_as_space(X: DSpace, Y: DSpace) -> FinSpace:
    """Equivariant maps ``X → Y`` ordered pointwise in every component."""
    _same_shape(X, Y)
    p = _Problem(X, Y)
    sols = list(p.solve())
    yup = p.yup
    n = len(sols)
    masks = [0] * n
    for i, f in enumerate(sols):
        for j, g in enumerate(sols):
            for v in range(p.n):
                if not yup[v][f[v]] >> g[v] & 1:
                    break
            else:
                masks[i] |= 1 << j
    return fs.from_masks([p.to_map(s) for s in sols], masks)


def fixed_points(X: DSpace, O: DSpace) -> FinSpace:
    """The space ``X^O`` of equivariant maps ``O → X``."""
    return hom_as_space(O, X)


# -- objectwise limits and colimits -------------------------------------------

@lru_cache(maxsize=1024)
def product_dspace(X: DSpace, Y: DSpace) -> DSpace:
    _same_shape(X, Y)
    C = X.shape
    values = [fs.product(A, B) for A, B in zip(X.values, Y.values)]
    acts = []
    for k, m in enumerate(C.morphisms):
        i, j = C.object_index[C.source[m]], C.object_index[C.target[m]]
        xm, ym = X.actions[k], Y.actions[k]
        acts.append(MonotoneMap(values[i], values[j], tuple((xm(a), ym(b)) for a, b in values[i].points)))
    return _dspace(C, values, acts)


def product_projections(X: DSpace, Y: DSpace, P: DSpace = None):
    P = P or product_dspace(X, Y)
    left = EquivariantMap(P, X, tuple(tuple(p[0] for p in V.points) for V in P.values))
    right = EquivariantMap(P, Y, tuple(tuple(p[1] for p in V.points) for V in P.values))
    return left, right


def coproduct_dspace(X: DSpace, Y: DSpace) -> DSpace:
    _same_shape(X, Y)
    C = X.shape
    values = [fs.coproduct(A, B) for A, B in zip(X.values, Y.values)]
    acts = []
    for k, m in enumerate(C.morphisms):
        i, j = C.object_index[C.source[m]], C.object_index[C.target[m]]
        maps = (X.actions[k], Y.actions[k])
        acts.append(MonotoneMap(values[i], values[j], tuple((t, maps[t](p)) for t, p in values[i].points)))
    return _dspace(C, values, acts)


def coproduct_injections(X: DSpace, Y: DSpace, S: DSpace = None):
    S = S or coproduct_dspace(X, Y)
    left = EquivariantMap(X, S, tuple(tuple((0, x) for x in V.points) for V in X.values))
    right = EquivariantMap(Y, S, tuple(tuple((1, y) for y in V.points) for V in Y.values))
    return left, right


def coproduct_many(parts: Sequence[DSpace], shape: FinCategory = None) -> DSpace:
    """Coproduct of several D-spaces with points tagged ``(k, x)``."""
    if not parts:
        return empty_dspace(shape)
    C = parts[0].shape
    for P in parts:
        _same_shape(parts[0], P)
    values = []
    for i in range(len(C.objects)):
        pts = tuple((k, x) for k, P in enumerate(parts) for x in P.values[i].points)
        leq = frozenset(((k, a), (k, b)) for k, P in enumerate(parts) for a, b in P.values[i].leq)
        values.append(FinSpace(pts, leq))
    acts = []
    for k, m in enumerate(C.morphisms):
        i, j = C.object_index[C.source[m]], C.object_index[C.target[m]]
        acts.append(MonotoneMap(values[i], values[j], tuple((t, parts[t].actions[k](p)) for t, p in values[i].points)))
    return _dspace(C, values, acts)


class DColimit(NamedTuple):
    space: DSpace
    legs: tuple  # one EquivariantMap per object of the indexing shape


def colimit_dspace(index: FinCategory, diagram: Sequence[DSpace], maps: Mapping) -> DColimit:
    """Colimit of a diagram of D-spaces, computed objectwise.

    ``diagram`` lists one D-space per object of ``index``; ``maps`` sends each
    morphism of ``index`` to an ``EquivariantMap``.
    """
    C = diagram[0].shape
    for P in diagram:
        _same_shape(diagram[0], P)
    per_object = []
    for d in C.objects:
        spaces = [P.at(d) for P in diagram]
        comp = {m: (maps[m].component(d) if m in maps else fs.identity_map(spaces[index.object_index[index.source[m]]]))
                for m in index.morphisms}
        per_object.append(fs.colimit(index, spaces, comp))
    values = [c.space for c in per_object]
    acts = []
    for m in C.morphisms:
        i, j = C.object_index[C.source[m]], C.object_index[C.target[m]]
        src, tgt = per_object[i], per_object[j]
        images = [None] * len(src.space)
        for e, P in enumerate(diagram):
            Pm = P.act(m)
            for x, c in zip(P.values[i].points, src.legs[e].images):
                if images[c] is None:
                    images[c] = tgt.legs[e](Pm(x))
        acts.append(MonotoneMap(values[i], values[j], tuple(images)))
    space = _dspace(C, values, acts)
    legs = tuple(
        EquivariantMap(P, space, tuple(per_object[i].legs[e].images for i in range(len(C.objects))))
        for e, P in enumerate(diagram)
    )
    return DColimit(space, legs)


def colim_dspace(X: DSpace) -> fs.Colimit:
    """The colimit of ``X`` over its own shape, as a finite space with legs."""
    C = X.shape
    return fs.colimit(C, X.values, dict(zip(C.morphisms, X.actions)))


class DPushout(NamedTuple):
    space: DSpace
    left: EquivariantMap
    right: EquivariantMap


def pushout_dspace(f: EquivariantMap, g: EquivariantMap) -> DPushout:
    """Pushout of ``Y <-f- W -g-> Z``, objectwise."""
    if f.source != g.source:
        raise ShapeMismatch("pushout legs must share their source")
    _same_shape(f.target, g.target)
    W = f.source
    S = fs.span_shape()
    c = colimit_dspace(S, [f.target, g.target, W], {"l": f, "r": g})
    return DPushout(c.space, c.legs[0], c.legs[1])


def limit_dspace(index: FinCategory, diagram: Sequence[DSpace], maps: Mapping) -> DColimit:
    """Limit of a diagram of D-spaces, computed objectwise; points are tuples."""
    C = diagram[0].shape
    for P in diagram:
        _same_shape(diagram[0], P)
    per_object = []
    for d in C.objects:
        spaces = [P.at(d) for P in diagram]
        comp = {m: (maps[m].component(d) if m in maps else fs.identity_map(spaces[index.object_index[index.source[m]]]))
                for m in index.morphisms}
        per_object.append(fs.limit(index, spaces, comp))
    values = [c.space for c in per_object]
    acts = []
    for k, m in enumerate(C.morphisms):
        i, j = C.object_index[C.source[m]], C.object_index[C.target[m]]
        pm = [P.actions[k] for P in diagram]
        acts.append(MonotoneMap(values[i], values[j], tuple(tuple(h(x) for h, x in zip(pm, fam)) for fam in values[i].points)))
    space = _dspace(C, values, acts)
    legs = tuple(
        EquivariantMap(space, P, tuple(per_object[i].legs[e].images for i in range(len(C.objects))))
        for e, P in enumerate(diagram)
    )
    return DColimit(space, legs)


# -- enrichment ---------------------------------------------------------------

@lru_cache(maxsize=512)
def _hom_source(X: DSpace, d) -> DSpace:
    return product_dspace(X, representable(X.shape, d))


def enriched_hom(X: DSpace, Y: DSpace) -> DSpace:
    """The D-space ``d ↦ hom(X × F^d, Y)``.

    Along ``m: d → d'`` a map ``φ`` goes to ``(x, g) ↦ φ(x, g∘m)``.
    """
    _same_shape(X, Y)
    C = X.shape
    sources = [_hom_source(X, d) for d in C.objects]
    values = [hom_as_space(S, Y) for S in sources]
    acts = []
    for m in C.morphisms:
        i, j = C.object_index[C.source[m]], C.object_index[C.target[m]]
        S_src, S_tgt = sources[i], sources[j]
        images = []
        for phi in values[i].points:
            comps = tuple(
                tuple(phi(e, (x, C.compose(g, m))) for x, g in V.points)
                for e, V in zip(C.objects, S_tgt.values)
            )
            images.append(EquivariantMap(S_tgt, Y, comps))
        acts.append(MonotoneMap(values[i], values[j], tuple(images)))
    return _dspace(C, values, acts)


def tensor_hom_forward(alpha: EquivariantMap, X: DSpace, Y: DSpace, H: DSpace = None) -> EquivariantMap:
    """Curry ``α: X × Y → Z`` into ``β: X → [Y, Z]``.

    ``β_d(x)`` is the map ``(y, f) ↦ α(X_f(x), y)`` on ``Y × F^d``.  Pass
    ``H = enriched_hom(Y, Z)`` to skip recomputing it.
    """
    Z = alpha.target
    C = X.shape
    if H is None:
        H = enriched_hom(Y, Z)
    comps = []
    for d, V in zip(C.objects, X.values):
        S = _hom_source(Y, d)
        row = []
        for x in V.points:
            row.append(EquivariantMap(S, Z, tuple(
                tuple(alpha(e, (X.act(f)(x), y)) for y, f in W.points)
                for e, W in zip(C.objects, S.values)
            )))
        comps.append(tuple(row))
    beta = EquivariantMap(X, H, tuple(comps))
    return validate_equivariant(beta)


def tensor_hom_backward(beta: EquivariantMap, Y: DSpace, Z: DSpace) -> EquivariantMap:
    """Uncurry ``β: X → [Y, Z]`` into ``α(x, y) = β_d(x)(y, id_d)``."""
    X = beta.source
    C = X.shape
    P = product_dspace(X, Y)
    comps = tuple(
        tuple(beta(d, x)(d, (y, C.identity[d])) for x, y in V.points)
        for d, V in zip(C.objects, P.values)
    )
    return validate_equivariant(EquivariantMap(P, Z, comps))


# -- fixed points and pi_0 ----------------------------------------------------

class FixedPointEntry(NamedTuple):
    kind: str
    label: str
    bijective: bool
    order_iso: bool

    @property
    def passed(self):
        return self.bijective and self.order_iso


@dataclass
class FixedPointReport:
    orbit: str
    entries: list

    @property
    def passed(self):
        return all(e.passed for e in self.entries)


def _postcompose_space_map(src: FinSpace, dst: FinSpace, h: EquivariantMap, tag=None) -> dict:
    return {phi: phi.then(h) for phi in src.points}


def _comparison_verdict(kind, label, domain: FinSpace, codomain: FinSpace, images: Sequence):
    f = MonotoneMap(domain, codomain, tuple(images))
    bij = len(domain) == len(codomain) and len(set(images)) == len(codomain)
    iso = bij and fs.is_isomorphism(f)
    return FixedPointEntry(kind, label, bij, iso)


def fixed_point_coproduct_comparison(O: DSpace, Y: DSpace, Z: DSpace, label="") -> FixedPointEntry:
    """Compare ``Y^O ⊔ Z^O → (Y ⊔ Z)^O``."""
    S = coproduct_dspace(Y, Z)
    iy, iz = coproduct_injections(Y, Z, S)
    YO, ZO, SO = fixed_points(Y, O), fixed_points(Z, O), fixed_points(S, O)
    dom = fs.coproduct(YO, ZO)
    images = [(phi.then(iy) if t == 0 else phi.then(iz)) for t, phi in dom.points]
    return _comparison_verdict("coproduct", label, dom, SO, images)


def fixed_point_product_comparison(O: DSpace, Y: DSpace, Z: DSpace, label="") -> FixedPointEntry:
    """Compare ``(Y × Z)^O → Y^O × Z^O``."""
    P = product_dspace(Y, Z)
    py, pz = product_projections(Y, Z, P)
    PO = fixed_points(P, O)
    cod = fs.product(fixed_points(Y, O), fixed_points(Z, O))
    images = [(phi.then(py), phi.then(pz)) for phi in PO.points]
    return _comparison_verdict("product", label, PO, cod, images)


def fixed_point_pushout_comparison(O: DSpace, f: EquivariantMap, g: EquivariantMap, label="") -> FixedPointEntry:
    """Compare ``Y^O ⊔_{W^O} Z^O → (Y ⊔_W Z)^O``."""
    W, Y, Z = f.source, f.target, g.target
    WO, YO, ZO = fixed_points(W, O), fixed_points(Y, O), fixed_points(Z, O)
    fO = MonotoneMap(WO, YO, tuple(phi.then(f) for phi in WO.points))
    gO = MonotoneMap(WO, ZO, tuple(phi.then(g) for phi in WO.points))
    glued = fs.pushout(fO, gO)
    P = pushout_dspace(f, g)
    PO = fixed_points(P.space, O)
    images = [None] * len(glued.space)
    for phi, c in zip(YO.points, glued.left.images):
        images[c] = phi.then(P.left)
    for phi, c in zip(ZO.points, glued.right.images):
        if images[c] is None:
            images[c] = phi.then(P.right)
    return _comparison_verdict("pushout", label, glued.space, PO, images)


def check_fixed_point_preservation(O: DSpace, instances: Iterable, name: str = "O") -> FixedPointReport:
    """Check that ``(-)^O`` carries each supplied (co)limit to an isomorphic one.

    ``instances`` holds tuples ``("pushout", f, g)``, ``("coproduct", Y, Z)`` or
    ``("product", Y, Z)``; an optional fourth entry is a label.
    """
    from .orbits import is_orbit

    if not is_orbit(O):
        raise NotAnOrbit(f"{name} is not an orbit")
    entries = []
    for k, inst in enumerate(instances):
        kind = inst[0]
        label = inst[3] if len(inst) > 3 else f"#{k}"
        if kind == "pushout":
            entries.append(fixed_point_pushout_comparison(O, inst[1], inst[2], label))
        elif kind == "coproduct":
            entries.append(fixed_point_coproduct_comparison(O, inst[1], inst[2], label))
        elif kind == "product":
            entries.append(fixed_point_product_comparison(O, inst[1], inst[2], label))
        else:
            raise ValueError(f"unknown instance kind {kind!r}")
    return FixedPointReport(name, entries)


def pi0_orbit(X: DSpace, O: DSpace) -> fs.Components:
    """Components of ``X^O``: homotopy classes of maps ``O → X`` in this model."""
    return fs.pi0(fixed_points(X, O))


@dataclass(frozen=True)
class Pi0Table:
    orbits: tuple                 # orbit names
    sizes: Mapping                # name -> number of components
    maps: Mapping                 # morphism label (sigma: O -> P) -> images pi0(X^P) -> pi0(X^O)
    functor: FinFunctor = field(repr=False)


def pi0_functor(X: DSpace, oc) -> Pi0Table:
    """The contravariant functor ``O ↦ π0(X^O)`` over an orbit category.

    Components are numbered ``0..k-1`` in order of their canonical labels.
    """
    C = oc.category
    spaces, comps, number = {}, {}, {}
    for name in C.objects:
        O = oc.orbit(name).underlying
        spaces[name] = fixed_points(X, O)
        comps[name] = fs.pi0(spaces[name])
        number[name] = {lab: k for k, lab in enumerate(comps[name].labels)}
    sizes = {name: len(comps[name]) for name in C.objects}
    maps = {}
    for sigma in C.morphisms:
        O_name, P_name = C.source[sigma], C.target[sigma]
        s = oc.map(sigma)
        XP = spaces[P_name]
        images = []
        for lab in comps[P_name].labels:
            rep = XP.points[lab]
            images.append(number[O_name][comps[O_name].project[s.then(rep)]])
        maps[sigma] = tuple(images)
    op = opposite(C)
    Fin = finset_category(sizes.values())
    F = make_functor(
        op, Fin,
        {name: sizes[name] for name in C.objects},
        {sigma: (sizes[C.target[sigma]], sizes[C.source[sigma]], maps[sigma]) for sigma in C.morphisms},
    )
    return Pi0Table(C.objects, sizes, maps, F)


# -- enumeration and canonical forms ------------------------------------------

def iter_dspaces(shape: FinCategory, candidates: Sequence[Sequence[FinSpace]]) -> Iterator[DSpace]:
    """All D-spaces whose value at the i-th object is drawn from ``candidates[i]``."""
    C = shape
    nonid = [m for m in C.morphisms if not C.is_identity(m)]
    pos = {m: k for k, m in enumerate(nonid)}
    # composites become checkable once every non-identity factor is assigned
    checks = [[] for _ in nonid]
    for (g, f), h in C.table.items():
        if C.is_identity(g) or C.is_identity(f):
            continue
        involved = [pos[g], pos[f]] + ([] if C.is_identity(h) else [pos[h]])
        checks[max(involved)].append((g, f, h))
    oi = C.object_index
    map_cache = {}

    def maps_between(A, B):
        key = (id(A), id(B))
        if key not in map_cache:
            map_cache[key] = list(fs.iter_monotone_index_maps(A, B))
        return map_cache[key]

    for choice in itertools.product(*candidates):
        acts = {}

        def image(m):
            if C.is_identity(m):
                return tuple(range(len(choice[oi[C.source[m]]])))
            return acts[m]

        def go(k):
            if k == len(nonid):
                yield dict(acts)
                return
            m = nonid[k]
            A, B = choice[oi[C.source[m]]], choice[oi[C.target[m]]]
            for t in maps_between(A, B):
                acts[m] = t
                good = True
                for g, f, h in checks[k]:
                    gi, fi = image(g), image(f)
                    if tuple(gi[v] for v in fi) != image(h):
                        good = False
                        break
                if good:
                    yield from go(k + 1)
            acts.pop(m, None)

        for found in go(0):
            actions = []
            for m in C.morphisms:
                A, B = choice[oi[C.source[m]]], choice[oi[C.target[m]]]
                if C.is_identity(m):
                    actions.append(fs.identity_map(A))
                else:
                    actions.append(MonotoneMap(A, B, tuple(B.points[v] for v in found[m])))
            yield _dspace(C, choice, actions)


def canonical_key(X: DSpace) -> tuple:
    """Lexicographically least encoding of ``X`` over all point relabelings."""
    return canonical_form(X)[0]


def canonical_form(X: DSpace):
    """Return ``(key, Xc)`` where ``Xc`` is the relabeling of ``X`` on ``0..n-1``
    that realizes the least key; isomorphic D-spaces share the key."""
    C = X.shape
    sizes = X.sizes
    best = None
    acts_idx = [a.index_images for a in X.actions]
    src = [C.object_index[C.source[m]] for m in C.morphisms]
    tgt = [C.object_index[C.target[m]] for m in C.morphisms]
    for perms in itertools.product(*(itertools.permutations(range(n)) for n in sizes)):
        ups = []
        for V, p in zip(X.values, perms):
            new = [0] * len(V)
            for i, m in enumerate(V.up):
                acc, j = 0, 0
                while m:
                    if m & 1:
                        acc |= 1 << p[j]
                    m >>= 1
                    j += 1
                new[p[i]] = acc
            ups.append(tuple(new))
        acts = []
        for k in range(len(C.morphisms)):
            ps, pt = perms[src[k]], perms[tgt[k]]
            new = [0] * sizes[src[k]]
            for i, v in enumerate(acts_idx[k]):
                new[ps[i]] = pt[v]
            acts.append(tuple(new))
        key = (sizes, tuple(ups), tuple(acts))
        if best is None or key < best:
            best = key
    _, ups, acts = best
    values = [fs.from_masks(range(n), up) for n, up in zip(sizes, ups)]
    actions = [
        MonotoneMap(values[src[k]], values[tgt[k]], acts[k]) for k in range(len(C.morphisms))
    ]
    return best, _dspace(C, values, actions)


def enumerate_dspaces(shape: FinCategory, max_points: int, discrete_only: bool = False,
                      up_to_iso: bool = True, min_points: int = 0) -> list:
    """D-spaces with between ``min_points`` and ``max_points`` points at every object."""
    spaces = []
    for n in range(min_points, max_points + 1):
        if discrete_only:
            spaces.append(fs.discrete(range(n)))
        else:
            spaces.extend(fs.enumerate_preorders(n))
    out = []
    seen = set()
    for X in iter_dspaces(shape, [spaces] * len(shape.objects)):
        if up_to_iso:
            key = canonical_key(X)
            if key in seen:
                continue
            seen.add(key)
        out.append(X)
    return out
