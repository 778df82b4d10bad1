"""Finite topological spaces as finite preorders.

A finite space is a finite set with a reflexive, transitive relation; continuous
maps are the monotone maps.  Colimits carry the preorder generated by the
images of the pieces, hom-spaces carry the pointwise order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Mapping, NamedTuple, Sequence

from .errors import NonMonotone, NotAPreorder, OutOfRange, UnknownPoint, ValidationError


def transitive_closure(n: int, masks: Sequence[int]) -> list:
    """Reflexive-transitive closure of a relation given as up-set bitmasks."""
    reach = [m | (1 << i) for i, m in enumerate(masks)]
    for k in range(n):
        bit = 1 << k
        rk = reach[k]
        for i in range(n):
            if reach[i] & bit:
                reach[i] |= rk
    return reach


@dataclass(frozen=True)
class FinSpace:
    points: tuple
    leq: frozenset = field(repr=False)

    def __post_init__(self):
        if len(self.index) != len(self.points):
            raise ValidationError("duplicate point labels")

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self):
        return hash((self.points, self.leq))

    @cached_property
    def index(self) -> dict:
        return {p: i for i, p in enumerate(self.points)}

    @cached_property
    def up(self) -> tuple:
        """``up[i]`` is the bitmask of indices ``j`` with ``points[i] <= points[j]``."""
        idx = self.index
        masks = [0] * len(self.points)
        for a, b in self.leq:
            masks[idx[a]] |= 1 << idx[b]
        return tuple(masks)

    def le(self, a, b) -> bool:
        return (a, b) in self.leq

    def le_index(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, p):
        return p in self.index

    def validate(self) -> "FinSpace":
        pts = set(self.points)
        for a, b in self.leq:
            if a not in pts or b not in pts:
                raise NotAPreorder(f"relation mentions unknown point in ({a!r}, {b!r})")
        for p in self.points:
            if (p, p) not in self.leq:
                raise NotAPreorder(f"relation is not reflexive at {p!r}")
        up = self.up
        for i in range(len(self.points)):
            reach = 0
            m = up[i]
            j = 0
            while m:
                if m & 1:
                    reach |= up[j]
                m >>= 1
                j += 1
            if reach & ~up[i]:
                raise NotAPreorder(f"relation is not transitive above {self.points[i]!r}")
        return self

    def is_discrete(self) -> bool:
        return len(self.leq) == len(self.points)

    def __str__(self):
        rel = sorted(
            ((self.index[a], self.index[b]) for a, b in self.leq if a != b)
        )
        shown = ", ".join(f"{self.points[i]!r}<={self.points[j]!r}" for i, j in rel)
        return f"FinSpace({list(self.points)!r}; {shown})"


def from_masks(points: Sequence, up: Sequence[int]) -> FinSpace:
    points = tuple(points)
    pairs = []
    for i, m in enumerate(up):
        j = 0
        while m:
            if m & 1:
                pairs.append((points[i], points[j]))
            m >>= 1
            j += 1
    return FinSpace(points, frozenset(pairs))


def finspace(points: Iterable, generators: Iterable = ()) -> FinSpace:
    """Space on ``points`` whose order is generated by the given pairs."""
    points = tuple(points)
    idx = {p: i for i, p in enumerate(points)}
    if len(idx) != len(points):
        raise ValidationError("duplicate point labels")
    masks = [0] * len(points)
    for a, b in generators:
        try:
            masks[idx[a]] |= 1 << idx[b]
        except KeyError as e:
            raise UnknownPoint(f"order generator ({a!r}, {b!r}) names unknown point {e.args[0]!r}") from None
    return from_masks(points, transitive_closure(len(points), masks))


def discrete(points: Iterable = ()) -> FinSpace:
    points = tuple(points)
    return FinSpace(points, frozenset((p, p) for p in points))


def empty() -> FinSpace:
    return discrete(())


def terminal() -> FinSpace:
    return discrete(("*",))


def chain(n: int) -> FinSpace:
    """Points ``0 <= 1 <= ... <= n-1``."""
    return finspace(range(n), [(i, i + 1) for i in range(n - 1)])


def indiscrete(points: Iterable) -> FinSpace:
    points = tuple(points)
    return FinSpace(points, frozenset((a, b) for a in points for b in points))


def subspace(X: FinSpace, points: Iterable) -> FinSpace:
    points = tuple(points)
    keep = set(points)
    return FinSpace(points, frozenset((a, b) for a, b in X.leq if a in keep and b in keep))


# -- maps ---------------------------------------------------------------------

@dataclass(frozen=True)
class MonotoneMap:
    domain: FinSpace = field(repr=False)
    codomain: FinSpace = field(repr=False)
    images: tuple

    def __hash__(self):
        return hash(self.images)

    def __call__(self, x):
        try:
            return self.images[self.domain.index[x]]
        except KeyError:
            raise UnknownPoint(f"{x!r} is not a point of the domain") from None

    def as_dict(self) -> dict:
        return dict(zip(self.domain.points, self.images))

    @cached_property
    def index_images(self) -> tuple:
        cidx = self.codomain.index
        return tuple(cidx[y] for y in self.images)

    def then(self, g: "MonotoneMap") -> "MonotoneMap":
        """Return ``g ∘ self``."""
        return MonotoneMap(self.domain, g.codomain, tuple(g(y) for y in self.images))


def monotone_map(domain: FinSpace, codomain: FinSpace, mapping, check=True) -> MonotoneMap:
    """Build a map from a dict or callable, checking monotonicity."""
    get = mapping.__getitem__ if isinstance(mapping, Mapping) else mapping
    try:
        images = tuple(get(p) for p in domain.points)
    except KeyError as e:
        raise UnknownPoint(f"assignment has no image for {e.args[0]!r}") from None
    f = MonotoneMap(domain, codomain, images)
    if check:
        for y in images:
            if y not in codomain.index:
                raise UnknownPoint(f"image {y!r} is not a point of the codomain")
        bad = monotonicity_failure(f)
        if bad is not None:
            raise NonMonotone(f"map is not monotone: {bad[0]!r} <= {bad[1]!r} but images are not comparable")
    return f


def monotonicity_failure(f: MonotoneMap):
    """First pair ``a <= b`` with ``f(a) </= f(b)``, or ``None``."""
    cod = f.codomain
    img = dict(zip(f.domain.points, f.images))
    for a, b in sorted(f.domain.leq, key=lambda ab: (f.domain.index[ab[0]], f.domain.index[ab[1]])):
        if (img[a], img[b]) not in cod.leq:
            return a, b
    return None


def identity_map(X: FinSpace) -> MonotoneMap:
    return MonotoneMap(X, X, X.points)


def compose(g: MonotoneMap, f: MonotoneMap) -> MonotoneMap:
    """Return ``g ∘ f``."""
    return f.then(g)


def is_isomorphism(f: MonotoneMap) -> bool:
    """Bijective and order-reflecting (so the inverse is monotone too)."""
    X, Y = f.domain, f.codomain
    if len(X) != len(Y) or len(set(f.images)) != len(Y):
        return False
    img = f.index_images
    n = len(X)
    for i in range(n):
        for j in range(n):
            if X.le_index(i, j) != Y.le_index(img[i], img[j]):
                return False
    return True


def iter_monotone_index_maps(X: FinSpace, Y: FinSpace, injective: bool = False):
    """Yield monotone maps as tuples of codomain indices, lexicographically."""
    n, m = len(X), len(Y)
    xup, yup = X.up, Y.up
    # constraints against earlier points only
    below = [[j for j in range(i) if xup[j] >> i & 1] for i in range(n)]
    above = [[j for j in range(i) if xup[i] >> j & 1] for i in range(n)]
    img = [0] * n

    def go(i):
        if i == n:
            yield tuple(img)
            return
        for v in range(m):
            if injective and v in img[:i]:
                continue
            if all(yup[img[j]] >> v & 1 for j in below[i]) and all(yup[v] >> img[j] & 1 for j in above[i]):
                img[i] = v
                yield from go(i + 1)

    yield from go(0)


def enumerate_monotone_maps(X: FinSpace, Y: FinSpace) -> list:
    pts = Y.points
    return [MonotoneMap(X, Y, tuple(pts[v] for v in t)) for t in iter_monotone_index_maps(X, Y)]


def find_isomorphism(X: FinSpace, Y: FinSpace):
    if len(X) != len(Y) or len(X.leq) != len(Y.leq):
        return None
    for t in iter_monotone_index_maps(X, Y, injective=True):
        f = MonotoneMap(X, Y, tuple(Y.points[v] for v in t))
        if is_isomorphism(f):
            return f
    return None


def is_isomorphic(X: FinSpace, Y: FinSpace) -> bool:
    return find_isomorphism(X, Y) is not None


# -- limits and colimits ------------------------------------------------------

def product(X: FinSpace, Y: FinSpace) -> FinSpace:
    points = tuple((x, y) for x in X.points for y in Y.points)
    leq = frozenset(((a, b), (c, d)) for a, c in X.leq for b, d in Y.leq)
    return FinSpace(points, leq)


def coproduct(X: FinSpace, Y: FinSpace) -> FinSpace:
    points = tuple((0, x) for x in X.points) + tuple((1, y) for y in Y.points)
    leq = frozenset(((0, a), (0, b)) for a, b in X.leq) | frozenset(((1, a), (1, b)) for a, b in Y.leq)
    return FinSpace(points, leq)


def product_projections(X: FinSpace, Y: FinSpace, P: FinSpace = None):
    P = P or product(X, Y)
    return (
        MonotoneMap(P, X, tuple(p[0] for p in P.points)),
        MonotoneMap(P, Y, tuple(p[1] for p in P.points)),
    )


def coproduct_injections(X: FinSpace, Y: FinSpace, S: FinSpace = None):
    S = S or coproduct(X, Y)
    return (
        MonotoneMap(X, S, tuple((0, x) for x in X.points)),
        MonotoneMap(Y, S, tuple((1, y) for y in Y.points)),
    )


class Colimit(NamedTuple):
    space: FinSpace
    legs: tuple  # one MonotoneMap per object of the shape, in shape order


def _find(parent, i):
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


def colimit(shape, spaces: Sequence[FinSpace], maps: Mapping) -> Colimit:
    """Colimit of a diagram of finite spaces.

    ``spaces`` lists one space per object of ``shape`` (in object order) and
    ``maps`` sends each morphism label to a ``MonotoneMap``.  Points of the
    result are ``0..k-1``, numbered by the least member of each class in
    (object, point) order.
    """
    offsets = []
    total = 0
    for X in spaces:
        offsets.append(total)
        total += len(X)
    parent = list(range(total))
    oi = shape.object_index
    for m in shape.morphisms:
        if shape.is_identity(m):
            continue
        a, b = oi[shape.source[m]], oi[shape.target[m]]
        img = maps[m].index_images
        for i, j in enumerate(img):
            ra, rb = _find(parent, offsets[a] + i), _find(parent, offsets[b] + j)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    cls = {}
    label = [0] * total
    for g in range(total):
        r = _find(parent, g)
        if r not in cls:
            cls[r] = len(cls)
        label[g] = cls[r]
    k = len(cls)
    masks = [0] * k
    for X, off in zip(spaces, offsets):
        for i, m in enumerate(X.up):
            c = label[off + i]
            j = 0
            while m:
                if m & 1:
                    masks[c] |= 1 << label[off + j]
                m >>= 1
                j += 1
    space = from_masks(range(k), transitive_closure(k, masks))
    legs = tuple(
        MonotoneMap(X, space, tuple(label[off + i] for i in range(len(X))))
        for X, off in zip(spaces, offsets)
    )
    return Colimit(space, legs)


def _span_shape():
    from .fincat import make_category

    return make_category(
        ["Y", "Z", "W"],
        [("id_Y", ("Y", "Y")), ("id_Z", ("Z", "Z")), ("id_W", ("W", "W")), ("l", ("W", "Y")), ("r", ("W", "Z"))],
        {"Y": "id_Y", "Z": "id_Z", "W": "id_W"},
        [],
    )


SPAN = None


def span_shape():
    """The shape ``Y <-l- W -r-> Z``; objects are ordered Y, Z, W."""
    global SPAN
    if SPAN is None:
        SPAN = _span_shape()
    return SPAN


class Pushout(NamedTuple):
    space: FinSpace
    left: MonotoneMap   # Y -> P
    right: MonotoneMap  # Z -> P


def pushout(f: MonotoneMap, g: MonotoneMap) -> Pushout:
    """Pushout of ``Y <-f- W -g-> Z`` as a colimit over the span shape."""
    if f.domain != g.domain:
        raise ValidationError("pushout legs must share their domain")
    S = span_shape()
    W, Y, Z = f.domain, f.codomain, g.codomain
    c = colimit(S, [Y, Z, W], {"id_Y": identity_map(Y), "id_Z": identity_map(Z), "id_W": identity_map(W), "l": f, "r": g})
    return Pushout(c.space, c.legs[0], c.legs[1])


class Limit(NamedTuple):
    space: FinSpace
    legs: tuple


def limit(shape, spaces: Sequence[FinSpace], maps: Mapping) -> Limit:
    """Limit of a diagram: compatible families with the componentwise order.

    Points are tuples with one entry per object of ``shape``.
    """
    oi = shape.object_index
    checks = [
        (oi[shape.source[m]], oi[shape.target[m]], maps[m])
        for m in shape.morphisms if not shape.is_identity(m)
    ]
    points = tuple(
        fam for fam in itertools.product(*(X.points for X in spaces))
        if all(h(fam[a]) == fam[b] for a, b, h in checks)
    )
    idxs = [[X.index[c] for X, c in zip(spaces, fam)] for fam in points]
    n = len(points)
    masks = [0] * n
    for i in range(n):
        for j in range(n):
            if all(X.le_index(a, b) for X, a, b in zip(spaces, idxs[i], idxs[j])):
                masks[i] |= 1 << j
    space = from_masks(points, masks)
    legs = tuple(MonotoneMap(space, X, tuple(p[k] for p in points)) for k, X in enumerate(spaces))
    return Limit(space, legs)


# -- hom-spaces and components ------------------------------------------------

def hom_space(X: FinSpace, Y: FinSpace) -> FinSpace:
    """All monotone maps ``X → Y`` with the pointwise order."""
    maps = list(iter_monotone_index_maps(X, Y))
    yup = Y.up
    n = len(maps)
    masks = [0] * n
    for i, f in enumerate(maps):
        for j, g in enumerate(maps):
            if all(yup[a] >> b & 1 for a, b in zip(f, g)):
                masks[i] |= 1 << j
    pts = tuple(MonotoneMap(X, Y, tuple(Y.points[v] for v in t)) for t in maps)
    return from_masks(pts, masks)


class Components(NamedTuple):
    labels: tuple      # canonical labels: least point index of each component
    project: dict      # point -> label

    def __len__(self):
        return len(self.labels)

    def members(self, points):
        return {lab: tuple(p for p in points if self.project[p] == lab) for lab in self.labels}


def pi0(X: FinSpace) -> Components:
    n = len(X)
    parent = list(range(n))
    for i, m in enumerate(X.up):
        j = 0
        while m:
            if m & 1:
                ri, rj = _find(parent, i), _find(parent, j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
            m >>= 1
            j += 1
    roots = [_find(parent, i) for i in range(n)]
    labels = tuple(sorted(set(roots)))
    return Components(labels, {p: roots[i] for i, p in enumerate(X.points)})


# -- spheres and disks --------------------------------------------------------

def sphere_model(n: int) -> FinSpace:
    """Finite model of ``S^n``: iterated non-Hausdorff suspension of ``S^0``.

    Points are ``0..2n+1``; ``2k`` and ``2k+1`` sit above every point added
    before them.  ``sphere_model(-1)`` is empty.
    """
    if n < -1:
        raise OutOfRange(f"sphere dimension must be >= -1, got {n}")
    size = 2 * n + 2
    masks = [0] * size
    for p in range(size):
        level = p // 2
        for q in range(2 * level):
            masks[q] |= 1 << p
    return from_masks(range(size), transitive_closure(size, masks))


def disk_model(n: int) -> FinSpace:
    """Cone on ``sphere_model(n-1)``: one extra point ``2n`` above everything."""
    if n < 0:
        raise OutOfRange(f"disk dimension must be >= 0, got {n}")
    S = sphere_model(n - 1)
    top = len(S)
    masks = list(S.up) + [0]
    for q in range(top + 1):
        masks[q] |= 1 << top
    return from_masks(range(top + 1), masks)


def boundary_inclusion(n: int) -> MonotoneMap:
    """The inclusion ``sphere_model(n-1) → disk_model(n)``."""
    S, D = sphere_model(n - 1), disk_model(n)
    return MonotoneMap(S, D, S.points)


# -- enumeration helpers ------------------------------------------------------

def canonical_preorder_key(n: int, up: Sequence[int]) -> tuple:
    best = None
    for perm in itertools.permutations(range(n)):
        # perm[i] is the new index of old point i
        new = [0] * n
        for i in range(n):
            m, j, acc = up[i], 0, 0
            while m:
                if m & 1:
                    acc |= 1 << perm[j]
                m >>= 1
                j += 1
            new[perm[i]] = acc
        key = tuple(new)
        if best is None or key > best:
            best = key
    return best if best is not None else ()


def enumerate_preorders(n: int, up_to_iso: bool = True) -> list:
    """Preorders on ``range(n)``; with ``up_to_iso`` one per isomorphism class."""
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    seen = {}
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        masks = [1 << i for i in range(n)]
        for (i, j), b in zip(pairs, bits):
            if b:
                masks[i] |= 1 << j
        if transitive_closure(n, masks) != masks:
            continue
        key = canonical_preorder_key(n, masks) if up_to_iso else tuple(masks)
        if key not in seen:
            seen[key] = from_masks(range(n), list(key))
    return [seen[k] for k in sorted(seen, key=lambda k: (len(k), sum(bin(m).count('1') for m in k), k))]
