import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dorbits import dspace as ds
from dorbits import fincat as fc
from dorbits import finspace as fs
from dorbits.errors import NonMonotone, NotAPreorder, OutOfRange

from oracles import generated_order, labelled_preorders, monotone_maps


@st.composite
def spaces(draw, max_points=4):
    n = draw(st.integers(0, max_points))
    pairs = draw(st.lists(st.tuples(st.integers(0, max(n - 1, 0)), st.integers(0, max(n - 1, 0))), max_size=6))
    return fs.finspace(range(n), pairs if n else [])


def test_discrete():
    assert len(fs.discrete([])) == 0
    S0 = fs.discrete([0, 1])
    assert S0.leq == {(0, 0), (1, 1)}
    assert len(fs.terminal()) == 1


def test_closure_and_validation():
    X = fs.finspace("abc", [("a", "b"), ("b", "c")])
    assert X.le("a", "c")
    assert X.leq == generated_order("abc", {("a", "b"), ("b", "c")})
    with pytest.raises(NotAPreorder):
        fs.FinSpace(("a", "b"), frozenset({("a", "a"), ("b", "b"), ("a", "b"), ("b", "c")})).validate()
    with pytest.raises(NotAPreorder):
        fs.FinSpace(("a", "b"), frozenset({("a", "a")})).validate()


def test_non_monotone_map():
    with pytest.raises(NonMonotone):
        fs.monotone_map(fs.chain(2), fs.chain(2), {0: 1, 1: 0})


def test_product_and_coproduct_laws():
    X = fs.finspace("abc", [("a", "b")])
    assert fs.is_isomorphic(fs.product(X, fs.terminal()), X)
    Y = fs.chain(2)
    assert len(fs.product(X, Y)) == 6
    assert fs.is_isomorphic(fs.coproduct(fs.empty(), X), X)
    P = fs.product(Y, Y)
    assert P.le((0, 0), (1, 1)) and not P.le((0, 1), (1, 0))


def test_colimit_of_free_orbit_is_a_point(J):
    R = ds.representable(J, "s")
    c = fs.colimit(J, R.values, dict(zip(J.morphisms, R.actions)))
    assert len(c.space) == 1


def test_colimit_with_two_target_points(J):
    X = ds.make_dspace(J, {"s": fs.discrete("a"), "t": fs.discrete("xy")}, {"f": {"a": "x"}})
    c = fs.colimit(J, X.values, dict(zip(J.morphisms, X.actions)))
    assert len(c.space) == 2


def test_colimit_one_object_diagram():
    T = fc.terminal_category()
    X = fs.finspace("abc", [("a", "b")])
    c = fs.colimit(T, [X], {"id": fs.identity_map(X)})
    assert fs.is_isomorphism(c.legs[0])


def test_colimit_order_is_generated():
    # glue the top of one chain to the bottom of another: 0 < 1 ~ 0' < 1'
    W = fs.terminal()
    f = fs.monotone_map(W, fs.chain(2), {"*": 1})
    g = fs.monotone_map(W, fs.chain(2), {"*": 0})
    p = fs.pushout(f, g)
    assert len(p.space) == 3
    assert fs.is_isomorphic(p.space, fs.chain(3))


def test_pushout_special_cases():
    Y = fs.finspace("ab", [("a", "b")])
    p = fs.pushout(fs.identity_map(Y), fs.identity_map(Y))
    assert fs.is_isomorphic(p.space, Y)
    Z = fs.discrete("xyz")
    e = fs.empty()
    p = fs.pushout(fs.MonotoneMap(e, Y, ()), fs.MonotoneMap(e, Z, ()))
    assert fs.is_isomorphic(p.space, fs.coproduct(Y, Z))


def cocones(spaces_, maps, shape, Q):
    """Families of monotone maps into Q compatible with the diagram."""
    per = [monotone_maps(X, Q) for X in spaces_]
    for fam in itertools.product(*per):
        ok = all(
            fam[shape.object_index[shape.target[m]]][maps[m](x)] == fam[shape.object_index[shape.source[m]]][x]
            for m in shape.morphisms
            for x in spaces_[shape.object_index[shape.source[m]]].points
        )
        if ok:
            yield fam


def test_pushout_universal_property():
    W = fs.discrete([0])
    Y = fs.chain(2)
    Z = fs.finspace("pq", [])
    f = fs.monotone_map(W, Y, {0: 0})
    g = fs.monotone_map(W, Z, {0: "p"})
    P = fs.pushout(f, g)
    S = fs.span_shape()
    maps = {"id_Y": fs.identity_map(Y), "id_Z": fs.identity_map(Z), "id_W": fs.identity_map(W), "l": f, "r": g}
    for n in range(3):
        for rel in labelled_preorders(n):
            Q = fs.FinSpace(tuple(range(n)), frozenset(rel))
            for fam in cocones([Y, Z, W], maps, S, Q):
                # exactly one monotone map P -> Q factors the cocone
                hits = [
                    u for u in monotone_maps(P.space, Q)
                    if all(u[P.left(y)] == fam[0][y] for y in Y.points)
                    and all(u[P.right(z)] == fam[1][z] for z in Z.points)
                ]
                assert len(hits) == 1


def test_hom_space_examples():
    Y = fs.finspace("abc", [("a", "b")])
    assert fs.is_isomorphic(fs.hom_space(fs.terminal(), Y), Y)
    assert fs.is_isomorphic(fs.hom_space(fs.discrete([0, 1]), Y), fs.product(Y, Y))
    S0 = fs.sphere_model(0)
    H = fs.hom_space(S0, S0)
    assert len(H) == 4 and H.is_discrete()


def test_pi0_examples():
    assert len(fs.pi0(fs.discrete(range(3)))) == 3
    assert len(fs.pi0(fs.terminal())) == 1
    assert len(fs.pi0(fs.sphere_model(1))) == 1
    assert len(fs.pi0(fs.sphere_model(0))) == 2
    X = fs.finspace(range(5), [(3, 1)])
    c = fs.pi0(X)
    assert c.labels == (0, 1, 2, 4)
    assert c.project[3] == 1


def test_sphere_and_disk_models():
    assert len(fs.sphere_model(-1)) == 0
    assert fs.sphere_model(0).is_discrete()
    assert len(fs.sphere_model(1)) == 4
    assert len(fs.disk_model(0)) == 1
    with pytest.raises(OutOfRange):
        fs.sphere_model(-2)
    with pytest.raises(OutOfRange):
        fs.disk_model(-1)


@pytest.mark.parametrize("n", range(0, 6))
def test_sphere_sizes_and_disk_top(n):
    S = fs.sphere_model(n)
    assert len(S) == 2 * n + 2
    S.validate()
    Dn = fs.disk_model(n)
    Dn.validate()
    tops = [p for p in Dn.points if all(Dn.le(q, p) for q in Dn.points)]
    assert len(tops) == 1
    assert len(fs.pi0(Dn)) == 1
    assert fs.monotonicity_failure(fs.boundary_inclusion(n)) is None


def test_suspension_structure():
    S1 = fs.sphere_model(1)
    # the two new points sit above both old ones and are incomparable
    assert all(S1.le(a, b) for a in (0, 1) for b in (2, 3))
    assert not S1.le(2, 3) and not S1.le(3, 2)


def test_preorder_census():
    assert [len(fs.enumerate_preorders(n)) for n in range(4)] == [1, 1, 3, 9]
    assert len(fs.enumerate_preorders(2, up_to_iso=False)) == len(labelled_preorders(2)) == 4
    assert len(fs.enumerate_preorders(3, up_to_iso=False)) == len(labelled_preorders(3)) == 29


@settings(max_examples=60, deadline=None)
@given(spaces())
def test_constructed_spaces_are_preorders(X):
    X.validate()
    assert X.leq == generated_order(X.points, X.leq)


@settings(max_examples=40, deadline=None)
@given(spaces(3), spaces(3))
def test_hom_space_size_matches_brute_force(X, Y):
    H = fs.hom_space(X, Y)
    assert len(H) == len(monotone_maps(X, Y))
    H.validate()


@settings(max_examples=40, deadline=None)
@given(spaces(), spaces())
def test_pi0_additive_on_coproducts(X, Y):
    assert len(fs.pi0(fs.coproduct(X, Y))) == len(fs.pi0(X)) + len(fs.pi0(Y))


@settings(max_examples=40, deadline=None)
@given(spaces())
def test_pi0_constant_on_comparable_points(X):
    c = fs.pi0(X)
    for a, b in X.leq:
        assert c.project[a] == c.project[b]
    for lab in c.labels:
        assert c.project[X.points[lab]] == lab
