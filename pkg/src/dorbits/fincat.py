"""Finite categories, functors and natural transformations.

Morphisms are globally labelled; hom-sets are obtained by filtering.  The
composition table is total over composable pairs and is checked eagerly, so a
``FinCategory`` that exists is a category.

Labels may be any hashable values.  Everything that produces ordered output
follows the declaration order of objects and morphisms, never hash order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Hashable, Iterable, Iterator, Mapping, Optional

from .errors import (
    DanglingEndpoint,
    IncompleteCompositionTable,
    MismatchedSignature,
    MissingIdentity,
    NonAssociative,
    NotFunctorial,
    NotNatural,
    SearchBudgetExceeded,
    UnknownObject,
    ValidationError,
)


@dataclass(frozen=True, eq=True)
class FinCategory:
    objects: tuple
    morphisms: tuple
    source: Mapping[Hashable, Hashable] = field(repr=False)
    target: Mapping[Hashable, Hashable] = field(repr=False)
    identity: Mapping[Hashable, Hashable] = field(repr=False)
    table: Mapping[tuple, Hashable] = field(repr=False)

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self):
        return hash((self.objects, self.morphisms))

    @cached_property
    def _homs(self):
        homs = {(a, b): [] for a in self.objects for b in self.objects}
        for m in self.morphisms:
            homs[self.source[m], self.target[m]].append(m)
        return {k: tuple(v) for k, v in homs.items()}

    @cached_property
    def object_index(self):
        return {d: i for i, d in enumerate(self.objects)}

    @cached_property
    def morphism_index(self):
        return {m: i for i, m in enumerate(self.morphisms)}

    @cached_property
    def identities(self):
        return frozenset(self.identity.values())

    def hom(self, a, b):
        try:
            return self._homs[a, b]
        except KeyError:
            bad = a if a not in self.object_index else b
            raise UnknownObject(f"unknown object {bad!r}") from None

    def compose(self, g, f):
        """Return ``g ∘ f``."""
        try:
            return self.table[g, f]
        except KeyError:
            raise DanglingEndpoint(
                f"{g!r} ∘ {f!r} is not composable "
                f"({f!r}: {self.source.get(f)!r}→{self.target.get(f)!r}, "
                f"{g!r}: {self.source.get(g)!r}→{self.target.get(g)!r})"
            ) from None

    def is_identity(self, m):
        return m in self.identities

    def non_identity_morphisms(self):
        return tuple(m for m in self.morphisms if m not in self.identities)

    def out_of(self, a):
        """Morphisms with source ``a``, in declaration order."""
        return tuple(m for m in self.morphisms if self.source[m] == a)

    def is_iso(self, m):
        return self.inverse(m) is not None

    def inverse(self, m):
        a, b = self.source[m], self.target[m]
        for n in self.hom(b, a):
            if self.table[n, m] == self.identity[a] and self.table[m, n] == self.identity[b]:
                return n
        return None

    def __len__(self):
        return len(self.morphisms)

    def __str__(self):
        return f"FinCategory({len(self.objects)} objects, {len(self.morphisms)} morphisms)"


def hom_set(C: FinCategory, a, b) -> tuple:
    return C.hom(a, b)


def validate_category(raw: Mapping[str, Any]) -> FinCategory:
    """Build a category from a raw description, checking every law.

    ``raw`` holds ``objects`` (a list), ``morphisms`` (a mapping name ->
    (source, target), or a list of ``[name, source, target]``), ``identities``
    (object -> morphism) and ``compose`` (a list of ``[g, f, g∘f]`` triples or a
    mapping ``(g, f) -> g∘f``).  Composites involving an identity may be
    omitted; they are filled in.
    """
    objects = tuple(raw["objects"])
    morphs = raw["morphisms"]
    if isinstance(morphs, Mapping):
        items = [(m, tuple(st)) for m, st in morphs.items()]
    else:
        items = [(row[0], (row[1], row[2])) for row in morphs]
    compose = raw.get("compose", ())
    if isinstance(compose, Mapping):
        entries = [(g, f, h) for (g, f), h in compose.items()]
    else:
        entries = [tuple(e) for e in compose]
    return make_category(objects, items, dict(raw["identities"]), entries)


def make_category(objects, morphisms, identities, compose_entries, check=True) -> FinCategory:
    """Construct and validate a category from plain data.

    ``morphisms`` is a sequence of ``(label, (source, target))``;
    ``compose_entries`` is a sequence of ``(g, f, g∘f)``.
    """
    objects = tuple(objects)
    if len(set(objects)) != len(objects):
        raise ValidationError("duplicate object labels")
    obj_set = set(objects)
    labels = []
    source, target = {}, {}
    for m, (a, b) in morphisms:
        if m in source:
            raise ValidationError(f"duplicate morphism label {m!r}")
        for end in (a, b):
            if end not in obj_set:
                raise DanglingEndpoint(f"morphism {m!r} has endpoint {end!r} which is not an object")
        labels.append(m)
        source[m], target[m] = a, b
    labels = tuple(labels)

    ident = {}
    for d in objects:
        if d not in identities:
            raise MissingIdentity(f"object {d!r} has no identity")
        i = identities[d]
        if i not in source or source[i] != d or target[i] != d:
            raise MissingIdentity(f"identity {i!r} of {d!r} is not an endomorphism of {d!r}")
        ident[d] = i
    extra = set(identities) - obj_set
    if extra:
        raise DanglingEndpoint(f"identities given for non-objects {sorted(map(repr, extra))}")

    table = {}
    for g, f, h in compose_entries:
        for m in (g, f, h):
            if m not in source:
                raise DanglingEndpoint(f"composition entry ({g!r}, {f!r}, {h!r}) names unknown morphism {m!r}")
        if target[f] != source[g]:
            raise DanglingEndpoint(
                f"composition entry {g!r} ∘ {f!r}: target of {f!r} is {target[f]!r}, source of {g!r} is {source[g]!r}"
            )
        if (source[h], target[h]) != (source[f], target[g]):
            raise DanglingEndpoint(
                f"composite {g!r} ∘ {f!r} = {h!r} has wrong endpoints "
                f"({source[h]!r}→{target[h]!r}, expected {source[f]!r}→{target[g]!r})"
            )
        if (g, f) in table and table[g, f] != h:
            raise ValidationError(f"conflicting composites for {g!r} ∘ {f!r}: {table[g, f]!r} and {h!r}")
        table[g, f] = h

    # fill in the identity composites, and check any that were supplied
    for m in labels:
        for lhs, expected in (((ident[target[m]], m), m), ((m, ident[source[m]]), m)):
            got = table.setdefault(lhs, expected)
            if got != expected:
                raise MissingIdentity(f"identity law fails: {lhs[0]!r} ∘ {lhs[1]!r} = {got!r}, expected {m!r}")

    C = FinCategory(objects, labels, source, target, ident, table)
    if check:
        _check_laws(C)
    return C


def _check_laws(C: FinCategory) -> None:
    into = {d: [m for m in C.morphisms if C.target[m] == d] for d in C.objects}
    outof = {d: [m for m in C.morphisms if C.source[m] == d] for d in C.objects}
    for f in C.morphisms:
        for g in outof[C.target[f]]:
            if (g, f) not in C.table:
                raise IncompleteCompositionTable(f"missing composite {g!r} ∘ {f!r}")
    table = C.table
    for g in C.morphisms:
        for f in into[C.source[g]]:
            gf = table[g, f]
            for h in outof[C.target[g]]:
                left = table[h, gf]
                right = table[table[h, g], f]
                if left != right:
                    raise NonAssociative(
                        f"associativity fails on ({h!r}, {g!r}, {f!r}): "
                        f"{h!r}∘({g!r}∘{f!r}) = {left!r} but ({h!r}∘{g!r})∘{f!r} = {right!r}"
                    )


def opposite(C: FinCategory) -> FinCategory:
    table = {(f, g): h for (g, f), h in C.table.items()}
    return FinCategory(C.objects, C.morphisms, dict(C.target), dict(C.source), dict(C.identity), table)


# -- standard small categories ------------------------------------------------

def walking_arrow() -> FinCategory:
    """The category ``s --f--> t`` with one non-identity morphism."""
    return make_category(
        ["s", "t"],
        [("id_s", ("s", "s")), ("id_t", ("t", "t")), ("f", ("s", "t"))],
        {"s": "id_s", "t": "id_t"},
        [],
    )


def terminal_category() -> FinCategory:
    return make_category(["*"], [("id", ("*", "*"))], {"*": "id"}, [])


def cyclic_group(n: int) -> FinCategory:
    """The cyclic group of order ``n`` as a one-object category.

    Elements are labelled ``e, g, g^2, ...``.
    """
    if n < 1:
        raise ValueError("group order must be positive")
    names = ["e", "g"] + [f"g^{k}" for k in range(2, n)]
    names = names[:n]
    entries = [(names[i], names[j], names[(i + j) % n]) for i in range(n) for j in range(n)]
    return make_category(["*"], [(x, ("*", "*")) for x in names], {"*": "e"}, entries)


def poset_category(elements, relations) -> FinCategory:
    """The thin category of a finite poset given by generating relations."""
    elements = tuple(elements)
    idx = {x: i for i, x in enumerate(elements)}
    n = len(elements)
    reach = [[i == j for j in range(n)] for i in range(n)]
    for a, b in relations:
        reach[idx[a]][idx[b]] = True
    for k in range(n):
        for i in range(n):
            if reach[i][k]:
                for j in range(n):
                    if reach[k][j]:
                        reach[i][j] = True
    for i in range(n):
        for j in range(n):
            if i != j and reach[i][j] and reach[j][i]:
                raise ValidationError(f"relations are not antisymmetric on {elements[i]!r}, {elements[j]!r}")

    def label(a, b):
        return f"id_{a}" if a == b else f"{a}<{b}"

    morphs = [(label(a, b), (a, b)) for a in elements for b in elements if reach[idx[a]][idx[b]]]
    entries = [
        (label(b, c), label(a, b), label(a, c))
        for a in elements for b in elements for c in elements
        if reach[idx[a]][idx[b]] and reach[idx[b]][idx[c]]
    ]
    return make_category(elements, morphs, {a: label(a, a) for a in elements}, entries)


def cospan_poset() -> FinCategory:
    """The poset ``a → c ← b``."""
    return poset_category(["a", "b", "c"], [("a", "c"), ("b", "c")])


def finset_category(sizes: Iterable[int]) -> FinCategory:
    """Full subcategory of finite sets on ``{0..n-1}`` for the given sizes.

    Morphisms are labelled ``(m, n, images)``.
    """
    sizes = tuple(sorted(set(sizes)))
    morphs = []
    for m in sizes:
        for n in sizes:
            for images in itertools.product(range(n), repeat=m):
                morphs.append(((m, n, images), (m, n)))
    entries = []
    for (m, n, f), _ in morphs:
        for (n2, k, g), _ in morphs:
            if n2 == n:
                entries.append(((n, k, g), (m, n, f), (m, k, tuple(g[x] for x in f))))
    ident = {n: (n, n, tuple(range(n))) for n in sizes}
    return make_category(sizes, morphs, ident, entries, check=False)


# -- functors -----------------------------------------------------------------

@dataclass(frozen=True)
class FinFunctor:
    domain: FinCategory
    codomain: FinCategory
    object_map: Mapping = field(repr=False)
    morphism_map: Mapping = field(repr=False)

    def __hash__(self):
        return hash((self.domain, self.codomain, tuple(self.morphism_map[m] for m in self.domain.morphisms)))

    def __call__(self, x):
        if x in self.domain.object_index:
            return self.object_map[x]
        return self.morphism_map[x]

    def then(self, other: "FinFunctor") -> "FinFunctor":
        """Return ``other ∘ self``."""
        if other.domain != self.codomain:
            raise MismatchedSignature("functors are not composable")
        return FinFunctor(
            self.domain,
            other.codomain,
            {d: other.object_map[self.object_map[d]] for d in self.domain.objects},
            {m: other.morphism_map[self.morphism_map[m]] for m in self.domain.morphisms},
        )


def make_functor(domain, codomain, object_map, morphism_map, check=True) -> FinFunctor:
    F = FinFunctor(domain, codomain, dict(object_map), dict(morphism_map))
    if check:
        validate_functor(F)
    return F


def identity_functor(C: FinCategory) -> FinFunctor:
    return FinFunctor(C, C, {d: d for d in C.objects}, {m: m for m in C.morphisms})


def validate_functor(F: FinFunctor) -> FinFunctor:
    C, D = F.domain, F.codomain
    for d in C.objects:
        if F.object_map.get(d) not in D.object_index:
            raise NotFunctorial(f"object {d!r} is not sent to an object of the codomain")
    for m in C.morphisms:
        fm = F.morphism_map.get(m)
        if fm not in D.morphism_index:
            raise NotFunctorial(f"morphism {m!r} is not sent to a morphism of the codomain")
        if (D.source[fm], D.target[fm]) != (F.object_map[C.source[m]], F.object_map[C.target[m]]):
            raise NotFunctorial(f"image of {m!r} has the wrong source or target")
    for d in C.objects:
        if F.morphism_map[C.identity[d]] != D.identity[F.object_map[d]]:
            raise NotFunctorial(f"identity of {d!r} is not preserved")
    for (g, f), h in C.table.items():
        if D.compose(F.morphism_map[g], F.morphism_map[f]) != F.morphism_map[h]:
            raise NotFunctorial(f"composite {g!r} ∘ {f!r} is not preserved")
    return F


@dataclass(frozen=True)
class NatTransform:
    source_functor: FinFunctor
    target_functor: FinFunctor
    components: Mapping = field(repr=False)

    def __eq__(self, other):
        if not isinstance(other, NatTransform):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def key(self):
        return tuple(self.components[d] for d in self.source_functor.domain.objects)

    def __getitem__(self, d):
        return self.components[d]


def _check_signature(F: FinFunctor, G: FinFunctor):
    if F.domain != G.domain or F.codomain != G.codomain:
        raise MismatchedSignature("functors must share domain and codomain")


def _naturality_failures(F, G, comps, only=None):
    C, D = F.domain, F.codomain
    for m in C.morphisms:
        a, b = C.source[m], C.target[m]
        if only is not None and not (a in only and b in only):
            continue
        if a not in comps or b not in comps:
            continue
        left = D.compose(G.morphism_map[m], comps[a])
        right = D.compose(comps[b], F.morphism_map[m])
        if left != right:
            yield m


def make_nat_transform(F, G, components) -> NatTransform:
    _check_signature(F, G)
    comps = dict(components)
    for d in F.domain.objects:
        c = comps.get(d)
        if c not in F.codomain.hom(F.object_map[d], G.object_map[d]):
            raise NotNatural(f"component at {d!r} is not a morphism {F.object_map[d]!r} → {G.object_map[d]!r}")
    for m in _naturality_failures(F, G, comps):
        raise NotNatural(f"naturality square for {m!r} does not commute")
    return NatTransform(F, G, comps)


def enumerate_nat_transforms(F: FinFunctor, G: FinFunctor) -> list:
    """All natural transformations ``F ⇒ G``, in lexicographic component order."""
    _check_signature(F, G)
    C, D = F.domain, F.codomain
    objs = C.objects
    # naturality squares become checkable once both endpoints are assigned
    checks = {d: [] for d in objs}
    pos = {d: i for i, d in enumerate(objs)}
    for m in C.morphisms:
        a, b = C.source[m], C.target[m]
        later = a if pos[a] >= pos[b] else b
        checks[later].append(m)
    out = []
    comps = {}

    def go(i):
        if i == len(objs):
            out.append(NatTransform(F, G, dict(comps)))
            return
        d = objs[i]
        for c in D.hom(F.object_map[d], G.object_map[d]):
            comps[d] = c
            ok = True
            for m in checks[d]:
                a, b = C.source[m], C.target[m]
                if D.table[G.morphism_map[m], comps[a]] != D.table[comps[b], F.morphism_map[m]]:
                    ok = False
                    break
            if ok:
                go(i + 1)
        comps.pop(d, None)

    go(0)
    return out


def vertical_compose(beta: NatTransform, alpha: NatTransform) -> NatTransform:
    """Return ``beta ∘ alpha``."""
    D = alpha.source_functor.codomain
    return NatTransform(
        alpha.source_functor,
        beta.target_functor,
        {d: D.compose(beta[d], alpha[d]) for d in alpha.source_functor.domain.objects},
    )


def is_natural_iso(eta: NatTransform) -> bool:
    D = eta.source_functor.codomain
    return all(D.is_iso(eta[d]) for d in eta.source_functor.domain.objects)


# -- equivalence search -------------------------------------------------------

@dataclass(frozen=True)
class Equivalence:
    forward: FinFunctor
    backward: FinFunctor
    unit: NatTransform    # id_C ⇒ backward ∘ forward
    counit: NatTransform  # forward ∘ backward ⇒ id_D


def _iso_classes(C):
    reps = []
    for d in C.objects:
        if not any(C.hom(d, r) and any(C.is_iso(m) for m in C.hom(d, r)) for r in reps):
            reps.append(d)
    return reps


def iter_fully_faithful(C: FinCategory, D: FinCategory, budget: Optional[list] = None) -> Iterator[FinFunctor]:
    """Yield fully faithful functors ``C → D``.

    Object maps are chosen first, pruned by hom-set cardinalities; morphism
    maps are then searched as hom-wise bijections preserving composition.
    """
    objs = C.objects
    n = len(objs)
    obj_map = {}

    def tick():
        if budget is not None:
            budget[0] -= 1
            if budget[0] < 0:
                raise SearchBudgetExceeded("equivalence search exceeded its budget")

    def objects(i):
        if i == n:
            yield from morphisms()
            return
        a = objs[i]
        for x in D.objects:
            tick()
            obj_map[a] = x
            ok = len(C.hom(a, a)) == len(D.hom(x, x))
            for b in objs[:i]:
                y = obj_map[b]
                if len(C.hom(a, b)) != len(D.hom(x, y)) or len(C.hom(b, a)) != len(D.hom(y, x)):
                    ok = False
                    break
            if ok:
                yield from objects(i + 1)
        obj_map.pop(a, None)

    def morphisms():
        pairs = [(a, b) for a in objs for b in objs]
        mor_map = {}

        def go(k):
            if k == len(pairs):
                yield FinFunctor(C, D, dict(obj_map), dict(mor_map))
                return
            a, b = pairs[k]
            src = C.hom(a, b)
            tgt = D.hom(obj_map[a], obj_map[b])
            for perm in itertools.permutations(tgt):
                tick()
                for m, fm in zip(src, perm):
                    mor_map[m] = fm
                if _partial_functor_ok(C, D, mor_map, obj_map, src):
                    yield from go(k + 1)
                for m in src:
                    mor_map.pop(m, None)

        yield from go(0)

    yield from objects(0)


def _partial_functor_ok(C, D, mor_map, obj_map, new):
    for m in new:
        a = C.source[m]
        if m == C.identity[a] and mor_map[m] != D.identity[obj_map[a]]:
            return False
    new = set(new)
    for (g, f), h in C.table.items():
        if (g in new or f in new or h in new) and g in mor_map and f in mor_map and h in mor_map:
            if D.table[mor_map[g], mor_map[f]] != mor_map[h]:
                return False
    return True


def equivalence_witness(C: FinCategory, D: FinCategory, budget: int = 200_000) -> Optional[Equivalence]:
    """Search for an equivalence of categories ``C ≃ D``.

    Returns a witness (two functors and two natural isomorphisms) or ``None``
    when none exists.  Raises ``SearchBudgetExceeded`` after ``budget`` search
    steps.
    """
    counter = [budget]
    # an equivalence identifies skeleta, so iso-class counts and profiles must agree
    cs, ds = _iso_classes(C), _iso_classes(D)
    if len(cs) != len(ds):
        return None
    if sorted(map(_hom_profile_skeletal(C, cs), cs)) != sorted(map(_hom_profile_skeletal(D, ds), ds)):
        return None
    for F in iter_fully_faithful(C, D, counter):
        # essential surjectivity: choose c and an iso u_y: F(c) → y for each y
        chosen = {}
        for y in D.objects:
            for c in C.objects:
                x = F.object_map[c]
                iso = next((m for m in D.hom(x, y) if D.is_iso(m)), None)
                if iso is not None:
                    chosen[y] = (c, iso)
                    break
            else:
                break
        if len(chosen) != len(D.objects):
            continue
        return _assemble_equivalence(C, D, F, chosen)
    return None


def _hom_profile_skeletal(C, reps):
    def profile(a):
        return (
            tuple(sorted(len(C.hom(a, b)) for b in reps)),
            tuple(sorted(len(C.hom(b, a)) for b in reps)),
            len(C.hom(a, a)),
        )
    return profile


def _assemble_equivalence(C, D, F, chosen):
    preimage = {}
    for a in C.objects:
        for b in C.objects:
            for m in C.hom(a, b):
                preimage[F.morphism_map[m], a, b] = m
    obj_g = {y: chosen[y][0] for y in D.objects}
    mor_g = {}
    for m in D.morphisms:
        y, z = D.source[m], D.target[m]
        cy, uy = chosen[y]
        cz, uz = chosen[z]
        # G(m) is the unique preimage of u_z^{-1} ∘ m ∘ u_y
        image = D.compose(D.inverse(uz), D.compose(m, uy))
        mor_g[m] = preimage[image, cy, cz]
    G = make_functor(D, C, obj_g, mor_g)
    FG = G.then(F)
    GF = F.then(G)
    counit = make_nat_transform(FG, identity_functor(D), {y: chosen[y][1] for y in D.objects})
    unit_comps = {}
    for c in C.objects:
        x = F.object_map[c]
        cx, ux = chosen[x]
        unit_comps[c] = preimage[D.inverse(ux), c, cx]
    unit = make_nat_transform(identity_functor(C), GF, unit_comps)
    return Equivalence(F, G, unit, counit)


def initial_objects(C: FinCategory) -> tuple:
    """Objects with exactly one morphism to every object."""
    return tuple(a for a in C.objects if all(len(C.hom(a, b)) == 1 for b in C.objects))
