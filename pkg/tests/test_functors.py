"""Functor combinators: object/morphism actions, laws, local continuity,
cocone preservation."""
import pytest

from epsolve.chains import colimit_finite
from epsolve.errors import CapExceeded, ShapeMismatch
from epsolve.finposet import (
    canonical_form,
    chain_poset,
    compose,
    const_map,
    coproduct,
    diamond,
    flat,
    function_space,
    identity,
    iso_check,
    lift,
    map_from_dict,
    one_point,
    product,
)
from epsolve.functors import (
    Compose,
    Const,
    Fun,
    Id,
    Lift,
    Prod,
    Sum,
    apply_mor,
    apply_obj,
    check_functor_laws,
    check_local_continuity,
    has_fun,
    pr_apply_mor,
    preserves_cocone,
)
from epsolve.opairs import (
    Kind,
    bottom_inclusion_pair,
    enumerate_pairs,
    is_ep_pair,
    pair_identity,
    pair_leq,
)
from epsolve.suite import counterexample_cocone
from tests.test_chains import n1_chain


def two():
    return chain_poset(2)


# ---------------------------------------------------------------------------
# object action

def test_apply_obj_identity():
    for p in (one_point(), two(), diamond()):
        assert apply_obj(Id(), p) == p


def test_apply_obj_lift_point_is_two_chain():
    got = apply_obj(Lift(Id()), one_point())
    assert iso_check(got, two()) is not None


def test_apply_obj_fun_self_on_two_chain():
    got = apply_obj(Fun(Id(), Id()), two())
    assert canonical_form(got) == canonical_form(chain_poset(3))


def test_apply_obj_structural():
    p = two()
    assert apply_obj(Const(diamond(), "d"), p) == diamond()
    assert apply_obj(Prod(Id(), Id()), p) == product(p, p)
    assert apply_obj(Sum(Id(), Id()), p) == coproduct(p, p)
    assert apply_obj(Compose(Lift(Id()), Lift(Id())), p) == lift(lift(p))


def test_apply_obj_cap():
    with pytest.raises(CapExceeded):
        apply_obj(Fun(Id(), Id()), diamond(), elem_cap=8)


def test_has_fun():
    assert has_fun(Fun(Id(), Id()))
    assert has_fun(Lift(Prod(Id(), Fun(Id(), Id()))))
    assert not has_fun(Lift(Sum(Id(), Const(two(), "2-chain"))))


# ---------------------------------------------------------------------------
# morphism action on plain maps

def test_apply_mor_identity_functor():
    f = const_map(two(), two(), "v0")
    assert apply_mor(Id(), f) == f


def test_apply_mor_const_functor():
    f = const_map(two(), two(), "v0")
    assert apply_mor(Const(diamond(), "d"), f) == identity(diamond())


def test_apply_mor_lift_of_const_bottom():
    f = const_map(two(), two(), "v0")
    got = apply_mor(Lift(Id()), f)
    assert got.mapping() == {
        "lift-bottom": "lift-bottom",
        "up(v0)": "up(v0)",
        "up(v1)": "up(v0)",
    }


def test_apply_mor_rejects_mixed_variance():
    with pytest.raises(ShapeMismatch):
        apply_mor(Fun(Id(), Id()), identity(two()))


# ---------------------------------------------------------------------------
# morphism action on pairs

def test_pr_apply_mor_identity_functor():
    f = bottom_inclusion_pair(one_point(), two())
    assert pr_apply_mor(Id(), f) == f


def test_pr_apply_mor_lift_of_bottom_inclusion():
    f = bottom_inclusion_pair(one_point(), two())
    got = pr_apply_mor(Lift(Id()), f)
    assert is_ep_pair(got.l, got.r)
    assert got.l.mapping() == {"lift-bottom": "lift-bottom", "up(*)": "up(v0)"}
    assert got.r("up(v1)") == "up(*)"


def test_pr_apply_mor_fun_preserves_identity():
    p = two()
    got = pr_apply_mor(Fun(Id(), Id()), pair_identity(p))
    assert got == pair_identity(function_space(p, p))


def test_pr_apply_mor_preserves_kind():
    for kind in (Kind.EP, Kind.ADJ):
        for f in enumerate_pairs(two(), chain_poset(3), kind):
            for e in (Lift(Id()), Prod(Id(), Id()), Sum(Id(), Id()), Fun(Id(), Id())):
                g = pr_apply_mor(e, f)
                assert g.kind == kind
                from epsolve.opairs import _CHECKS

                assert _CHECKS[kind](g.l, g.r)


# ---------------------------------------------------------------------------
# laws and local continuity

def exhaustive_probes(max_elems=3):
    posets = [one_point(), two(), chain_poset(3), flat(2)]
    posets = [p for p in posets if len(p) <= max_elems]
    probes = []
    for a in posets:
        for b in posets:
            for c in posets:
                for f in enumerate_pairs(a, b, Kind.EP):
                    for g in enumerate_pairs(b, c, Kind.EP):
                        probes.append([f, g])
    return probes


@pytest.mark.parametrize(
    "e",
    [Id(), Lift(Id()), Prod(Id(), Const(chain_poset(2), "2-chain")), Sum(Id(), Id()), Fun(Id(), Id()), Compose(Lift(Id()), Id())],
    ids=str,
)
def test_functor_laws(e):
    assert check_functor_laws(e, exhaustive_probes())


@pytest.mark.parametrize(
    "e",
    [Id(), Lift(Id()), Prod(Id(), Id()), Sum(Id(), Id()), Fun(Id(), Id()), Compose(Lift(Id()), Lift(Id()))],
    ids=str,
)
def test_local_continuity_on_small_posets(e):
    for a in (one_point(), two(), flat(2)):
        for b in (one_point(), two(), flat(2)):
            assert check_local_continuity(e, a, b)


def test_pair_hom_order_is_discrete():
    # each leg determines the other antitonically, so comparable pairs agree
    for a in (two(), chain_poset(3), diamond()):
        for b in (two(), chain_poset(3), diamond()):
            for kind in (Kind.EP, Kind.ADJ):
                pairs = enumerate_pairs(a, b, kind, cap=100)
                for f in pairs:
                    for g in pairs:
                        if pair_leq(f, g):
                            assert f == g


def test_broken_hom_action_fails_local_continuity(monkeypatch):
    # negative control: flip the map action on one comparable pair of maps
    import epsolve.functors as functors
    from epsolve.finposet import leq_map, monotone_maps

    a, b = two(), chain_poset(3)
    maps = monotone_maps(a, b)
    f0, g0 = next(
        (f, g) for f in maps for g in maps if f != g and leq_map(f, g)
    )
    flip = {f0: g0, g0: f0}

    def broken(e, f):
        return flip.get(f, f)

    monkeypatch.setattr(functors, "apply_mor", broken)
    assert not functors.check_local_continuity(Id(), a, b)


# ---------------------------------------------------------------------------
# cocone preservation

def test_identity_preserves_canonical_colimit():
    res = preserves_cocone(Id(), colimit_finite(n1_chain()))
    assert res.colimiting is True
    assert res.locally_determined.verdict is True


def test_lift_preserves_canonical_colimit():
    res = preserves_cocone(Lift(Id()), colimit_finite(n1_chain()))
    assert res.colimiting is True
    assert res.locally_determined.verdict is True
    assert len(res.image.apex) == 3


def test_identity_on_counterexample_not_colimiting():
    res = preserves_cocone(Id(), counterexample_cocone())
    assert res.colimiting is False
    assert res.locally_determined.verdict is False
