"""Cell complexes built from finitely many attachment pushouts.

An ``n``-cell of orbit type ``O`` is ``disk_model(n) × O`` glued to the current
stage along a map out of ``sphere_model(n-1) × O``.  After each attachment the
points of the new stage are ``0..k-1`` at every object, and the points of the
previous stage keep their positions (the pushout numbers classes by their
least member, and the old stage comes first).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple, Optional, Sequence

from . import dspace as ds
from . import finspace as fs
from .dspace import DSpace, EquivariantMap
from .errors import SourceMismatch
from .orbits import Orbit, as_orbit, orbit_of_point


def _underlying(O) -> DSpace:
    return O.underlying if isinstance(O, Orbit) else O


def cell_boundary(O, n: int) -> DSpace:
    """``sphere_model(n-1) × O``, the source of an attaching map."""
    U = _underlying(O)
    return ds.product_dspace(ds.constant(U.shape, fs.sphere_model(n - 1)), U)


def cell_disk(O, n: int) -> DSpace:
    U = _underlying(O)
    return ds.product_dspace(ds.constant(U.shape, fs.disk_model(n)), U)


def boundary_map(O, n: int) -> EquivariantMap:
    """The inclusion ``sphere × O → disk × O``."""
    S, Dk = cell_boundary(O, n), cell_disk(O, n)
    return EquivariantMap(S, Dk, tuple(V.points for V in S.values))


class Attached(NamedTuple):
    attaching: EquivariantMap
    space: DSpace
    inclusion: EquivariantMap   # old stage -> new stage
    cell: EquivariantMap        # disk × O -> new stage


def attach_cell(X: DSpace, O, n: int, attaching: Optional[EquivariantMap] = None) -> Attached:
    """Glue an ``n``-cell of orbit type ``O`` to ``X``.

    For ``n = 0`` the boundary is empty and ``attaching`` may be omitted.
    """
    U = as_orbit(O).underlying
    S = cell_boundary(U, n)
    if attaching is None:
        if S.total_size():
            raise SourceMismatch(f"a {n}-cell needs an attaching map")
        attaching = EquivariantMap(S, X, tuple(() for _ in S.values))
    if attaching.source != S:
        raise SourceMismatch(f"attaching map does not start at sphere_model({n - 1}) × orbit")
    if attaching.target != X:
        raise SourceMismatch("attaching map does not land in the current stage")
    P = ds.pushout_dspace(attaching, boundary_map(U, n))
    return Attached(attaching, P.space, P.left, P.right)


@dataclass(frozen=True)
class CellAttachment:
    orbit: Orbit
    dim: int
    attaching: EquivariantMap = field(repr=False)
    name: str = ""


@dataclass(frozen=True)
class CellComplex:
    base: DSpace
    cells: tuple     # CellAttachment per stage
    stages: tuple    # Attached per stage

    @property
    def final(self) -> DSpace:
        return self.stages[-1].space if self.stages else self.base

    def stage(self, k: int) -> DSpace:
        """Stage ``k``; stage 0 is the base."""
        return self.base if k == 0 else self.stages[k - 1].space

    @property
    def dims(self) -> tuple:
        return tuple(c.dim for c in self.cells)


def build_complex(base: DSpace, script: Sequence) -> CellComplex:
    """Run a script of ``(orbit, dim, attaching[, name])`` entries.

    ``attaching`` is a map, ``None`` for 0-cells, or a callable taking the
    boundary ``sphere × O`` and the current stage and returning the map.
    """
    X = base
    cells, stages = [], []
    for k, entry in enumerate(script, start=1):
        O, n, att = entry[0], entry[1], entry[2]
        name = entry[3] if len(entry) > 3 else ""
        O = as_orbit(O)
        if callable(att) and not isinstance(att, EquivariantMap):
            att = att(cell_boundary(O, n), X)
        try:
            step = attach_cell(X, O, n, att)
        except SourceMismatch as e:
            raise SourceMismatch(str(e), stage=k) from None
        cells.append(CellAttachment(O, n, step.attaching, name))
        stages.append(step)
        X = step.space
    return CellComplex(base, tuple(cells), tuple(stages))


def is_cw(C: CellComplex) -> bool:
    dims = C.dims
    return all(a <= b for a, b in zip(dims, dims[1:]))


class TypeEntry(NamedTuple):
    klass: int           # colimit class of the final stage
    point: tuple         # least (object, point) in the class
    matched: Optional[str]


@dataclass
class TypeReport:
    entries: list

    @property
    def passed(self) -> bool:
        return all(e.matched is not None for e in self.entries)


def verify_type(C, family) -> TypeReport:
    """Match the orbit of every colimit class of the final stage against a
    family given as ``{name: orbit}``."""
    X = C.final if isinstance(C, CellComplex) else C
    members = [(name, as_orbit(O).underlying) for name, O in _items(family)]
    c = ds.colim_dspace(X)
    first = {}
    for d, V, leg in zip(X.shape.objects, X.values, c.legs):
        for x, k in zip(V.points, leg.images):
            first.setdefault(k, (d, x))
    entries = []
    for k in range(len(c.space)):
        d, x = first[k]
        O = orbit_of_point(X, d, x).underlying
        hit = next((name for name, P in members if ds.is_isomorphic(O, P)), None)
        entries.append(TypeEntry(k, (d, x), hit))
    return TypeReport(entries)


def _items(family):
    if isinstance(family, Mapping):
        return list(family.items())
    return [(f"O{k}", O) for k, O in enumerate(family)]


def random_complex(base: DSpace, family, rng: random.Random, max_cells: int = 4, max_dim: int = 2) -> CellComplex:
    """A complex with ``1..max_cells`` cells of random orbit type and dimension.

    Attaching maps are drawn by randomized search; a cell whose boundary admits
    no map into the current stage is replaced by a 0-cell of the same orbit.
    """
    members = _items(family)
    cells, stages = [], []
    X = base
    for _ in range(rng.randint(1, max_cells)):
        name, O = members[rng.randrange(len(members))]
        O = as_orbit(O)
        n = rng.randint(0, max_dim)
        att = None
        if n > 0:
            att = ds.random_equivariant_map(cell_boundary(O, n), X, rng)
            if att is None:
                n = 0
        step = attach_cell(X, O, n, att)
        cells.append(CellAttachment(O, n, step.attaching, name))
        stages.append(step)
        X = step.space
    return CellComplex(base, tuple(cells), tuple(stages))
