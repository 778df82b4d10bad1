"""The adjunction between presheaves on an orbit category and D-spaces.

A presheaf ``R`` on ``O_F`` is stored as a ``DSpace`` over the opposite of the
orbit category, so maps of presheaves are ordinary ``EquivariantMap`` values.
The morphism ``σ = (O, P, k)`` of ``O_F`` acts on ``R`` as ``R(P) → R(O)``.

``K(R)`` reads ``R`` at the free orbits: ``K(R)_d = R(F^d)``.  ``Φ(X)`` sends
an orbit ``O`` to the space of equivariant maps ``O → X``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

from . import dspace as ds
from . import finspace as fs
from .dspace import DSpace, EquivariantMap
from .errors import BoundsTooLarge, ShapeMismatch
from .fincat import FinCategory
from .finspace import FinSpace, MonotoneMap
from .orbits import OrbitCategory, orbit_category, point_classifier  # noqa: F401  (re-exported)


def _check_presheaf(R: DSpace, oc: OrbitCategory):
    if R.shape != oc.op:
        raise ShapeMismatch("presheaf does not live over the opposite of this orbit category")


def presheaf(oc: OrbitCategory, values, actions=None) -> DSpace:
    """Build a presheaf from ``{orbit name: space}`` and ``{σ: assignment}``,
    where ``σ: O → P`` acts as a map ``R(P) → R(O)``."""
    return ds.make_dspace(oc.op, values, actions)


def representable_presheaf(oc: OrbitCategory, name) -> DSpace:
    """``P ↦ hom(P, O)`` as a discrete presheaf, acting by precomposition."""
    return ds.representable(oc.op, name)


def free_cell_presheaf(oc: OrbitCategory, name, A: FinSpace) -> DSpace:
    return ds.product_dspace(representable_presheaf(oc, name), ds.constant(oc.op, A))


# -- the two functors ---------------------------------------------------------

def K(R: DSpace, oc: OrbitCategory) -> DSpace:
    _check_presheaf(R, oc)
    D = oc.shape
    values = [R.at(oc.free[d]) for d in D.objects]
    acts = [R.act(oc.precompose_label(m)) for m in D.morphisms]
    return ds._dspace(D, values, acts)


def K_map(gamma: EquivariantMap, oc: OrbitCategory, KR: DSpace = None, KS: DSpace = None) -> EquivariantMap:
    """``K(γ)`` for a presheaf map ``γ: R → S``."""
    KR = KR or K(gamma.source, oc)
    KS = KS or K(gamma.target, oc)
    comps = tuple(gamma.component(oc.free[d]).images for d in oc.shape.objects)
    return EquivariantMap(KR, KS, comps)


def Phi(X: DSpace, oc: OrbitCategory) -> DSpace:
    if X.shape != oc.shape:
        raise ShapeMismatch("D-space and orbit category have different shapes")
    C = oc.category
    values = [ds.hom_as_space(oc.orbit(name).underlying, X) for name in C.objects]
    acts = []
    for sigma in C.morphisms:
        a, b = C.source[sigma], C.target[sigma]
        s = oc.map(sigma)
        src, dst = values[C.object_index[b]], values[C.object_index[a]]
        acts.append(MonotoneMap(src, dst, tuple(s.then(phi) for phi in src.points)))
    return ds._dspace(oc.op, values, acts)


def Phi_map(alpha: EquivariantMap, oc: OrbitCategory, PX: DSpace = None, PY: DSpace = None) -> EquivariantMap:
    """``Φ(α)``: postcomposition with ``α`` at every orbit."""
    PX = PX or Phi(alpha.source, oc)
    PY = PY or Phi(alpha.target, oc)
    comps = tuple(tuple(phi.then(alpha) for phi in V.points) for V in PX.values)
    return EquivariantMap(PX, PY, comps)


# -- the adjunction -----------------------------------------------------------

def adjunct_forward(f: EquivariantMap, R: DSpace, oc: OrbitCategory, PX: DSpace = None,
                    check: bool = True) -> EquivariantMap:
    """Turn ``f: K(R) → X`` into ``g: R → Φ(X)``.

    ``g(O)(r)`` sends ``o ∈ O_d`` to ``f_d(R(o*)(r))``, where ``o*: F^d → O`` is
    the map classifying ``o``.
    """
    X = f.target
    PX = PX or Phi(X, oc)
    D = oc.shape
    fcomp = [dict(zip(V.points, c)) for V, c in zip(f.source.values, f.components)]
    comps = []
    for name in oc.category.objects:
        U = oc.orbit(name).underlying
        pulls = [
            [R.act(oc.classifier_label(name, d, o)) for o in V.points]
            for d, V in zip(D.objects, U.values)
        ]
        row = []
        for r in R.at(name).points:
            inner = tuple(tuple(fc[h(r)] for h in hs) for fc, hs in zip(fcomp, pulls))
            row.append(EquivariantMap(U, X, inner))
        comps.append(tuple(row))
    g = EquivariantMap(R, PX, tuple(comps))
    if check:
        # membership in Φ(X) certifies each g(O)(r); this also checks naturality of g
        ds.validate_equivariant(g)
    return g


def adjunct_backward(g: EquivariantMap, X: DSpace, oc: OrbitCategory, KR: DSpace = None,
                     check: bool = True) -> EquivariantMap:
    """Turn ``g: R → Φ(X)`` into ``f: K(R) → X`` with ``f_d(r) = g(F^d)(r)(id_d)``."""
    R = g.source
    KR = KR or K(R, oc)
    D = oc.shape
    comps = tuple(
        tuple(g(oc.free[d], r)(d, D.identity[d]) for r in V.points)
        for d, V in zip(D.objects, KR.values)
    )
    f = EquivariantMap(KR, X, comps)
    if check:
        ds.validate_equivariant(f)
    return f


def unit(R: DSpace, oc: OrbitCategory, KR: DSpace = None, PKR: DSpace = None) -> EquivariantMap:
    """``η_R: R → ΦK(R)``, the adjunct of the identity of ``K(R)``."""
    KR = KR or K(R, oc)
    return adjunct_forward(ds.identity_equivariant(KR), R, oc, PKR)


def kphi_iso(X: DSpace, oc: OrbitCategory, PX: DSpace = None) -> EquivariantMap:
    """``KΦ(X) → X``, evaluating ``φ: F^d → X`` at ``id_d``."""
    PX = PX or Phi(X, oc)
    KPX = K(PX, oc)
    D = oc.shape
    comps = tuple(
        tuple(phi(d, D.identity[d]) for phi in V.points) for d, V in zip(D.objects, KPX.values)
    )
    return ds.validate_equivariant(EquivariantMap(KPX, X, comps))


def triangle_holds(X: DSpace, oc: OrbitCategory, PX: DSpace = None) -> bool:
    """``Φ(kphi_iso(X)) ∘ η_{Φ(X)}`` is the identity of ``Φ(X)``."""
    PX = PX or Phi(X, oc)
    eps = kphi_iso(X, oc, PX)
    eta = unit(PX, oc, eps.source)
    back = Phi_map(eps, oc, eta.target, PX)
    return eta.then(back) == ds.identity_equivariant(PX)


class UnitEntry(NamedTuple):
    orbit: str
    space: str
    passed: bool
    sizes: tuple    # |R(P)| per orbit P
    unit_sizes: tuple    # |ΦK(R)(P)| per orbit P


def check_unit_free_cell(oc: OrbitCategory, name, A: FinSpace, label: str = None) -> UnitEntry:
    """Build ``R = hom(-, O) × A`` and test that every component of ``η_R`` is
    an isomorphism of finite spaces."""
    R = free_cell_presheaf(oc, name, A)
    eta = unit(R, oc)
    ok = all(fs.is_isomorphism(eta.component(P)) for P in oc.category.objects)
    return UnitEntry(
        str(name), label if label is not None else str(A), ok, R.sizes, eta.target.sizes
    )


# -- exhaustive verification --------------------------------------------------

@dataclass
class Tally:
    name: str
    passed: int = 0
    failed: int = 0
    witness: Optional[str] = None

    def record(self, ok: bool, describe=None):
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if self.witness is None and describe is not None:
                self.witness = describe()


@dataclass
class AdjunctionReport:
    shape: str
    family: tuple
    max_points: int
    n_spaces: int = 0
    n_presheaves: int = 0
    n_pairs: int = 0
    n_maps: int = 0
    checks: dict = field(default_factory=dict)

    def tally(self, name) -> Tally:
        if name not in self.checks:
            self.checks[name] = Tally(name)
        return self.checks[name]

    @property
    def failures(self) -> int:
        return sum(t.failed for t in self.checks.values())

    @property
    def passed(self) -> bool:
        return self.failures == 0


CHECK_NAMES = (
    "bijection",
    "backward_after_forward",
    "forward_after_backward",
    "naturality_in_X",
    "naturality_in_R",
    "kphi_iso",
    "triangle",
)


def _candidate_estimate(C: FinCategory, max_points: int) -> int:
    per_object = sum(len(fs.enumerate_preorders(n)) for n in range(max_points + 1))
    return per_object ** len(C.objects)


def check_adjunction(D: FinCategory, family, max_points: int = 2, budget: int = 100_000,
                     seed: int = 0, shape_name: str = None) -> AdjunctionReport:
    """Verify the adjunction exhaustively on every pair ``(R, X)`` with at most
    ``max_points`` points per object (up to isomorphism).

    Naturality is checked for every pair against one randomly chosen map out
    of ``X`` and one into ``R``; choices come from ``random.Random(seed)``.
    Raises ``BoundsTooLarge`` when the instance grid would exceed ``budget``.
    """
    oc = family if isinstance(family, OrbitCategory) else orbit_category(D, family)
    for C in (D, oc.op):
        est = _candidate_estimate(C, max_points)
        if est > budget:
            raise BoundsTooLarge(f"about {est} candidate value assignments exceed the budget of {budget}")
    Xs = ds.enumerate_dspaces(D, max_points)
    Rs = ds.enumerate_dspaces(oc.op, max_points)
    if len(Xs) * len(Rs) > budget:
        raise BoundsTooLarge(f"{len(Xs) * len(Rs)} instance pairs exceed the budget of {budget}")
    rep = AdjunctionReport(shape_name or str(D), tuple(map(str, oc.names)), max_points)
    rep.n_spaces, rep.n_presheaves, rep.n_pairs = len(Xs), len(Rs), len(Xs) * len(Rs)
    for name in CHECK_NAMES:
        rep.tally(name)
    rng = random.Random(seed)

    PXs = [Phi(X, oc) for X in Xs]
    KRs = [K(R, oc) for R in Rs]

    for i, (X, PX) in enumerate(zip(Xs, PXs)):
        eps = kphi_iso(X, oc, PX)
        rep.tally("kphi_iso").record(ds.is_isomorphism(eps), lambda: f"X#{i}")
        rep.tally("triangle").record(triangle_holds(X, oc, PX), lambda: f"X#{i}")

    for j, (R, KR) in enumerate(zip(Rs, KRs)):
        for i, (X, PX) in enumerate(zip(Xs, PXs)):
            where = f"R#{j}, X#{i}"
            fmaps = ds.enumerate_equivariant_maps(KR, X)
            gmaps = ds.enumerate_equivariant_maps(R, PX)
            rep.n_maps += len(fmaps) + len(gmaps)
            forward = [adjunct_forward(f, R, oc, PX) for f in fmaps]
            rep.tally("bijection").record(
                len(fmaps) == len(gmaps) and set(forward) == set(gmaps),
                lambda: f"{where}: {len(fmaps)} maps K(R)→X, {len(gmaps)} maps R→Φ(X)",
            )
            for f, g in zip(fmaps, forward):
                rep.tally("backward_after_forward").record(
                    adjunct_backward(g, X, oc, KR) == f, lambda: f"{where}: {f!r}")
            for g in gmaps:
                rep.tally("forward_after_backward").record(
                    adjunct_forward(adjunct_backward(g, X, oc, KR), R, oc, PX) == g, lambda: f"{where}: {g!r}")
            if not fmaps:
                continue
            k = rng.randrange(len(fmaps))
            f, g = fmaps[k], forward[k]
            # naturality in X: forward(α ∘ f) = Φ(α) ∘ forward(f)
            y = rng.randrange(len(Xs))
            alpha = ds.random_equivariant_map(X, Xs[y], rng)
            if alpha is not None:
                lhs = adjunct_forward(f.then(alpha), R, oc, PXs[y])
                rhs = g.then(Phi_map(alpha, oc, PX, PXs[y]))
                rep.tally("naturality_in_X").record(lhs == rhs, lambda: f"{where}, α into X#{y}")
            # naturality in R: forward(f ∘ K(γ)) = forward(f) ∘ γ
            s = rng.randrange(len(Rs))
            gamma = ds.random_equivariant_map(Rs[s], R, rng)
            if gamma is not None:
                Kg = K_map(gamma, oc, KRs[s], KR)
                lhs = adjunct_forward(Kg.then(f), Rs[s], oc, PX)
                rhs = gamma.then(g)
                rep.tally("naturality_in_R").record(lhs == rhs, lambda: f"{where}, γ from R#{s}")
    return rep


def unit_sweep(oc: OrbitCategory, spaces: Sequence) -> list:
    """``check_unit_free_cell`` for every orbit of ``oc`` and every ``(label, A)``."""
    return [check_unit_free_cell(oc, name, A, label) for name in oc.names for label, A in spaces]


def standard_cell_spaces() -> list:
    return [
        ("empty", fs.empty()),
        ("point", fs.terminal()),
        ("discrete2", fs.discrete(range(2))),
        ("chain2", fs.chain(2)),
    ]
