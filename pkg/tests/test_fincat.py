import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dorbits import dspace as ds
from dorbits import fincat as fc
from dorbits import orbits as ob
from dorbits.errors import (
    DanglingEndpoint,
    IncompleteCompositionTable,
    MismatchedSignature,
    MissingIdentity,
    NonAssociative,
    SearchBudgetExceeded,
    UnknownObject,
)

J_RAW = {
    "objects": ["s", "t"],
    "morphisms": [["id_s", "s", "s"], ["id_t", "t", "t"], ["f", "s", "t"]],
    "identities": {"s": "id_s", "t": "id_t"},
    "compose": [],
}


def laws_hold(C):
    """Identity and associativity laws, re-checked from the raw table."""
    comp = C.table
    for m in C.morphisms:
        if comp[C.identity[C.target[m]], m] != m or comp[m, C.identity[C.source[m]]] != m:
            return False
    for f, g, h in itertools.product(C.morphisms, repeat=3):
        if C.target[f] == C.source[g] and C.target[g] == C.source[h]:
            if comp[h, comp[g, f]] != comp[comp[h, g], f]:
                return False
    return all(
        (C.source[v], C.target[v]) == (C.source[f], C.target[g]) for (g, f), v in comp.items()
    )


def test_walking_arrow_from_raw():
    C = fc.validate_category(J_RAW)
    assert len(C.objects) == 2 and len(C.morphisms) == 3
    assert C == fc.walking_arrow()
    assert laws_hold(C)


def test_trivial_group():
    C = fc.validate_category({"objects": ["*"], "morphisms": [["e", "*", "*"]], "identities": {"*": "e"}})
    assert C.hom("*", "*") == ("e",)


def test_non_composable_entry_rejected():
    raw = dict(J_RAW, compose=[["f", "f", "f"]])
    with pytest.raises(DanglingEndpoint, match="'f' ∘ 'f'"):
        fc.validate_category(raw)


def test_missing_identity():
    raw = dict(J_RAW, identities={"s": "id_s"})
    with pytest.raises(MissingIdentity, match="'t'"):
        fc.validate_category(raw)


def test_incomplete_table_names_pair():
    raw = {
        "objects": ["*"],
        "morphisms": [["e", "*", "*"], ["a", "*", "*"]],
        "identities": {"*": "e"},
        "compose": [],
    }
    with pytest.raises(IncompleteCompositionTable, match="'a'"):
        fc.validate_category(raw)


def test_non_associative_table_names_triple():
    # a∘a = b, a∘b = a, b∘a = a, b∘b = a: (a∘a)∘b = a but a∘(a∘b) = b
    raw = {
        "objects": ["*"],
        "morphisms": [["e", "*", "*"], ["a", "*", "*"], ["b", "*", "*"]],
        "identities": {"*": "e"},
        "compose": [["a", "a", "b"], ["a", "b", "a"], ["b", "a", "a"], ["b", "b", "a"]],
    }
    with pytest.raises(NonAssociative, match="'a'.*'b'|'b'.*'a'"):
        fc.validate_category(raw)


def test_dangling_endpoint():
    raw = dict(J_RAW, morphisms=J_RAW["morphisms"] + [["g", "s", "u"]])
    with pytest.raises(DanglingEndpoint, match="'u'"):
        fc.validate_category(raw)


def test_hom_sets(J, C2):
    assert fc.hom_set(J, "s", "t") == ("f",)
    assert fc.hom_set(J, "t", "s") == ()
    assert fc.hom_set(C2, "*", "*") == ("e", "g")
    with pytest.raises(UnknownObject):
        fc.hom_set(J, "s", "nowhere")


def test_opposite(J, C2):
    Jop = fc.opposite(J)
    assert Jop.hom("t", "s") == ("f",) and Jop.hom("s", "t") == ()
    assert fc.opposite(Jop) == J
    C2op = fc.opposite(C2)
    assert C2op.hom("*", "*") == ("e", "g")
    assert all(C2op.compose(x, y) == C2.compose(y, x) for x in "eg" for y in "eg")
    assert fc.opposite(C2op) == C2


def test_standard_categories_pass_laws(J, C2, cospan):
    for C in (J, C2, cospan, fc.terminal_category(), fc.cyclic_group(3), fc.finset_category([0, 1, 2])):
        assert laws_hold(C)
        assert laws_hold(fc.opposite(C))


@st.composite
def posets(draw):
    n = draw(st.integers(1, 4))
    # relations only go upward in index order, so the result is a poset
    rel = draw(st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda p: p[0] < p[1])))
    return fc.poset_category(range(n), rel)


@settings(max_examples=40, deadline=None)
@given(posets())
def test_poset_categories_valid_and_opposite_involutive(C):
    assert laws_hold(C)
    assert fc.opposite(fc.opposite(C)) == C


@settings(max_examples=10, deadline=None)
@given(st.integers(1, 5))
def test_cyclic_groups(n):
    C = fc.cyclic_group(n)
    assert laws_hold(C)
    assert all(C.is_iso(m) for m in C.morphisms)


# -- natural transformations --------------------------------------------------

def rep_functor(J, d):
    """``J(d, -)`` as a functor into finite sets of sizes 0 and 1."""
    S = fc.finset_category([0, 1])
    R = ds.representable(J, d)
    sizes = {e: len(R.at(e)) for e in J.objects}
    mor = {}
    for m in J.morphisms:
        a, b = J.source[m], J.target[m]
        img = tuple(R.at(b).index[R.act(m)(x)] for x in R.at(a).points)
        mor[m] = (sizes[a], sizes[b], img)
    return fc.make_functor(J, S, sizes, mor)


def brute_nat(F, G):
    C, D = F.domain, F.codomain
    out = []
    for fam in itertools.product(*(D.hom(F(d), G(d)) for d in C.objects)):
        comp = dict(zip(C.objects, fam))
        if all(
            D.compose(G(m), comp[C.source[m]]) == D.compose(comp[C.target[m]], F(m)) for m in C.morphisms
        ):
            out.append(fam)
    return out


def test_nat_transforms_between_representables(J):
    Fs, Ft = rep_functor(J, "s"), rep_functor(J, "t")
    # brute force: no component s -> t exists at s, one family the other way
    assert len(brute_nat(Fs, Ft)) == 0
    assert len(brute_nat(Ft, Fs)) == 1
    assert len(fc.enumerate_nat_transforms(Fs, Ft)) == 0
    assert len(fc.enumerate_nat_transforms(Ft, Fs)) == 1


def test_identity_transformation_present(J):
    I = fc.identity_functor(J)
    found = fc.enumerate_nat_transforms(I, I)
    assert fc.NatTransform(I, I, dict(J.identity)) in found
    assert len(found) == 1


def test_maps_to_constant_singleton(J):
    S = fc.finset_category([0, 1])
    one = fc.make_functor(J, S, {"s": 1, "t": 1}, {m: (1, 1, (0,)) for m in J.morphisms})
    for d in J.objects:
        assert len(fc.enumerate_nat_transforms(rep_functor(J, d), one)) == 1


def test_mismatched_signature(J, C2):
    with pytest.raises(MismatchedSignature):
        fc.enumerate_nat_transforms(fc.identity_functor(J), fc.identity_functor(C2))


@st.composite
def finset_functor_pairs(draw):
    J = fc.walking_arrow()
    S = fc.finset_category([0, 1, 2])

    def functor():
        a, b = draw(st.integers(0, 2)), draw(st.integers(0, 2))
        if a and not b:
            b = 1
        img = tuple(draw(st.integers(0, b - 1)) for _ in range(a))
        return fc.make_functor(
            J, S, {"s": a, "t": b},
            {"id_s": (a, a, tuple(range(a))), "id_t": (b, b, tuple(range(b))), "f": (a, b, img)},
        )

    return functor(), functor()


@settings(max_examples=60, deadline=None)
@given(finset_functor_pairs())
def test_nat_enumeration_is_exhaustive(pair):
    F, G = pair
    got = [tuple(t[d] for d in F.domain.objects) for t in fc.enumerate_nat_transforms(F, G)]
    assert sorted(got) == sorted(brute_nat(F, G))


# -- equivalences -------------------------------------------------------------

def test_equivalence_self(J):
    w = fc.equivalence_witness(J, J)
    assert w is not None
    assert fc.is_natural_iso(w.unit) and fc.is_natural_iso(w.counit)


def test_free_c2_translation_category_is_contractible(C2):
    B = ob.translation_category(ob.free_orbit(C2, "*").underlying)
    w = fc.equivalence_witness(B, fc.terminal_category())
    assert w is not None
    assert fc.is_natural_iso(w.unit) and fc.is_natural_iso(w.counit)


def test_no_equivalence_arrow_vs_group(J, C2):
    assert fc.equivalence_witness(J, C2) is None


def test_equivalence_budget(J):
    C = fc.finset_category([0, 1, 2])
    with pytest.raises(SearchBudgetExceeded):
        fc.equivalence_witness(C, C, budget=3)


def test_initial_objects(J):
    assert fc.initial_objects(J) == ("s",)
    assert fc.initial_objects(fc.cyclic_group(2)) == ()
