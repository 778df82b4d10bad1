import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dorbits import dspace as ds
from dorbits import elmendorf as el
from dorbits import fincat as fc
from dorbits import finspace as fs
from dorbits import orbits as ob
from dorbits.errors import BoundsTooLarge, ShapeMismatch, UnknownPoint

from oracles import equivariant_maps, is_functor

POOL_J = ds.enumerate_dspaces(fc.walking_arrow(), 2)


def test_K_of_representable_is_orbit(j_oc):
    for name, O in zip(j_oc.names, j_oc.orbits):
        R = el.representable_presheaf(j_oc, name)
        KR = el.K(R, j_oc)
        assert is_functor(KR)
        assert ds.is_isomorphic(KR, O.underlying)


def test_K_of_terminal(j_oc):
    KR = el.K(ds.terminal_dspace(j_oc.op), j_oc)
    assert KR == ds.terminal_dspace(j_oc.shape)


def test_K_rejects_wrong_shape(j_oc, J):
    with pytest.raises(ShapeMismatch):
        el.K(ds.terminal_dspace(J), j_oc)


def test_phi_of_terminal(j_oc, J):
    P = el.Phi(ds.terminal_dspace(J), j_oc)
    assert P.sizes == (1,) * len(j_oc.names)
    assert is_functor(P)


def test_phi_values(J, j_oc, j_family):
    P = el.Phi(j_family["[1]"].underlying, j_oc)
    assert len(P.at("[0]")) == 1
    for X in POOL_J:
        PX = el.Phi(X, j_oc)
        assert is_functor(PX)
        for name, O in j_family.items():
            assert len(PX.at(name)) == len(equivariant_maps(O.underlying, X))
        for d in J.objects:
            assert fs.is_isomorphic(PX.at(j_oc.free[d]), X.at(d))


def test_K_phi_roundtrip_values(J, j_oc):
    for X in POOL_J:
        assert ds.is_isomorphic(el.K(el.Phi(X, j_oc), j_oc), X)


# -- point classifiers ---------------------------------------------------------

def test_classifier_of_identity_is_identity(J):
    for d in J.objects:
        F = ob.free_orbit(J, d)
        assert ob.point_classifier(F, d, J.identity[d]) == ds.identity_equivariant(F.underlying)


def test_classifier_for_one_point_orbit(J, j_family):
    f = ob.point_classifier(j_family["[1]"], "s", "id_s")
    assert ds.is_isomorphism(f)
    with pytest.raises(UnknownPoint):
        ob.point_classifier(j_family["[1]"], "s", "nope")


def test_classifier_unique_and_natural(j_oc):
    D = j_oc.shape
    for name, O in zip(j_oc.names, j_oc.orbits):
        for d, o in O.underlying.points():
            F = ds.representable(D, d)
            hits = [f for f in ds.enumerate_equivariant_maps(F, O.underlying) if f(d, D.identity[d]) == o]
            assert hits == [ob.point_classifier(O, d, o)]
    # σ ∘ o* = σ(o)*
    for sigma in j_oc.category.morphisms:
        a, b = j_oc.category.source[sigma], j_oc.category.target[sigma]
        s = j_oc.map(sigma)
        for d, o in j_oc.orbit(a).underlying.points():
            lhs = ob.point_classifier(j_oc.orbit(a), d, o).then(s)
            assert lhs == ob.point_classifier(j_oc.orbit(b), d, s(d, o))


# -- adjuncts ------------------------------------------------------------------

def test_forward_of_identity_is_unit(j_oc):
    R = el.representable_presheaf(j_oc, "[2]")
    KR = el.K(R, j_oc)
    assert el.adjunct_forward(ds.identity_equivariant(KR), R, j_oc) == el.unit(R, j_oc)


def test_backward_of_unit_is_identity(j_oc):
    for R in ds.enumerate_dspaces(j_oc.op, 1):
        KR = el.K(R, j_oc)
        eta = el.unit(R, j_oc)
        assert el.adjunct_backward(eta, KR, j_oc) == ds.identity_equivariant(KR)


def test_forward_on_representable(j_oc):
    # g(P)(σ) is the orbit map σ itself once K(R) is identified with O
    name = "[2]"
    O = j_oc.orbit(name).underlying
    R = el.representable_presheaf(j_oc, name)
    KR = el.K(R, j_oc)
    iso = ds.find_isomorphism(KR, O)
    # the Yoneda iso sends σ: F^d → O to σ(id_d)
    D = j_oc.shape
    yoneda = ds.equivariant_map(KR, O, lambda d, sig: j_oc.map(sig)(d, D.identity[d]))
    assert ds.is_isomorphism(yoneda) and iso is not None
    g = el.adjunct_forward(yoneda, R, j_oc)
    for P in j_oc.category.objects:
        for sig in R.at(P).points:
            assert g(P, sig) == j_oc.map(sig)


@pytest.mark.parametrize("which", ["J", "C2"])
def test_roundtrips_and_counts_against_brute_force(which, j_oc, c2_oc, j_spaces, c2_spaces):
    oc, Xs = (j_oc, j_spaces) if which == "J" else (c2_oc, c2_spaces)
    Rs = ds.enumerate_dspaces(oc.op, 1)
    rng = random.Random(1)
    for _ in range(40):
        R, X = rng.choice(Rs), rng.choice(Xs)
        KR, PX = el.K(R, oc), el.Phi(X, oc)
        n_f = len(equivariant_maps(KR, X))
        n_g = len(equivariant_maps(R, PX))
        assert n_f == n_g
        for f in ds.enumerate_equivariant_maps(KR, X):
            g = el.adjunct_forward(f, R, oc, PX)
            assert el.adjunct_backward(g, X, oc, KR) == f


def test_kphi_examples(J, j_oc01, j_family):
    eps = el.kphi_iso(j_family["[1]"].underlying, j_oc01)
    assert ds.is_isomorphism(eps)
    assert eps.source.sizes == (1, 1)
    T = ds.terminal_dspace(J)
    eps = el.kphi_iso(T, j_oc01)
    assert ds.is_isomorphism(eps) and eps.source.sizes == (1, 1)


def test_unit_of_representable_is_iso(j_oc, c2_oc):
    for oc in (j_oc, c2_oc):
        for name in oc.names:
            eta = el.unit(el.representable_presheaf(oc, name), oc)
            assert ds.is_isomorphism(eta)


def test_unit_not_iso_in_general(j_oc):
    # R is a point at the free orbits, so K(R) is terminal and ΦK(R) is a point
    # everywhere, yet R may have two points at [2]
    Rs = [R for R in ds.enumerate_dspaces(j_oc.op, 2) if R.sizes == (1, 1, 2)]
    assert Rs
    for R in Rs:
        eta = el.unit(R, j_oc)
        assert eta.target.sizes == (1, 1, 1)
        assert not ds.is_isomorphism(eta)


def test_triangle(j_oc, j_spaces):
    for X in j_spaces[:12]:
        assert el.triangle_holds(X, j_oc)


# -- free cells ----------------------------------------------------------------

def test_unit_free_cell_sizes(j_oc):
    e = el.check_unit_free_cell(j_oc, "[0]", fs.discrete(range(2)))
    assert e.passed
    C = j_oc.category
    assert e.sizes == tuple(2 * len(C.hom(P, "[0]")) for P in C.objects)
    assert e.unit_sizes == e.sizes


def test_unit_free_cell_c2_chain(c2_oc):
    assert el.check_unit_free_cell(c2_oc, "C2/e", fs.chain(2)).passed


def test_unit_sweep(j_oc, c2_oc):
    for oc in (j_oc, c2_oc):
        entries = el.unit_sweep(oc, el.standard_cell_spaces())
        assert len(entries) == 4 * len(oc.names)
        assert all(e.passed for e in entries)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 3), st.integers(0, 10**6))
def test_unit_free_cell_random_spaces(n, seed):
    J = fc.walking_arrow()
    oc = ob.orbit_category(J, {"[0]": ob.free_orbit(J, "t"), "[1]": ob.free_orbit(J, "s"), "[2]": ob.j_orbit(2, J)})
    A = random.Random(seed).choice(fs.enumerate_preorders(n))
    for name in oc.names:
        assert el.check_unit_free_cell(oc, name, A).passed


# -- exhaustive check -----------------------------------------------------------

def test_check_adjunction_small(J, j_oc01):
    rep = el.check_adjunction(J, j_oc01, max_points=1)
    assert rep.passed
    assert set(rep.checks) == set(el.CHECK_NAMES)
    assert rep.tally("bijection").passed == rep.n_pairs


def test_bounds_too_large(J, j_family):
    with pytest.raises(BoundsTooLarge):
        el.check_adjunction(J, j_family, max_points=3, budget=100)
