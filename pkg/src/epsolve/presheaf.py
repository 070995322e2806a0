"""Finite O-categories given by tables, O-presheaves, the enriched Yoneda
embedding and its full-faithfulness, pointwise lubs of natural
transformations, and the lub-reflection equation y(⊔ e_n) = ⊔ y(c_n^L)∘y(c_n^R) = y(id).

A finite O-category is a closed world: objects are names, hom-sets are
FinPosets of opaque morphism tokens, and composition is a table.  The
builder below constructs the full sub-O-category of the base poset
category on a chosen family of posets, with tokens given by the
function-space element names.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .chains import Cocone, _e_stab, _round_trips
from .errors import CapExceeded, InvalidCategory, ShapeMismatch
from .finposet import (
    DEFAULT_FS_CAP,
    FinPoset,
    MapChain,
    MonotoneMap,
    fs_name,
    function_space_maps,
    identity,
    leq_map,
    lub_map_chain,
    monotone_maps,
    poset_to_json,
)


@dataclass(frozen=True)
class FinOCategory:
    objects: tuple[str, ...]
    hom: dict  # (a, b) -> FinPoset of tokens
    comp: dict  # (a, b, c) -> {(f, g): token of g∘f} for f: a->b, g: b->c
    ids: dict  # a -> identity token in hom(a, a)

    def compose(self, a: str, b: str, c: str, f: str, g: str) -> str:
        return self.comp[(a, b, c)][(f, g)]


def validate_category(k: FinOCategory) -> None:
    """Category laws plus monotonicity of composition in each argument."""
    for a in k.objects:
        if k.ids[a] not in k.hom[(a, a)].elems:
            raise InvalidCategory(f"identity token of {a} not in hom({a},{a})")
    for a, b in itertools.product(k.objects, repeat=2):
        for f in k.hom[(a, b)].elems:
            if k.compose(a, a, b, k.ids[a], f) != f:
                raise InvalidCategory(f"left unit fails at {f}: {a}->{b}")
            if k.compose(a, b, b, f, k.ids[b]) != f:
                raise InvalidCategory(f"right unit fails at {f}: {a}->{b}")
    for a, b, c, d in itertools.product(k.objects, repeat=4):
        for f in k.hom[(a, b)].elems:
            for g in k.hom[(b, c)].elems:
                gf = k.compose(a, b, c, f, g)
                for h in k.hom[(c, d)].elems:
                    lhs = k.compose(a, c, d, gf, h)
                    rhs = k.compose(a, b, d, f, k.compose(b, c, d, g, h))
                    if lhs != rhs:
                        raise InvalidCategory(f"associativity fails at ({f},{g},{h})")
    for a, b, c in itertools.product(k.objects, repeat=3):
        hab, hbc = k.hom[(a, b)], k.hom[(b, c)]
        hac = k.hom[(a, c)]
        for f1 in hab.elems:
            for f2 in hab.elems:
                if not hab.le(f1, f2):
                    continue
                for g1 in hbc.elems:
                    for g2 in hbc.elems:
                        if not hbc.le(g1, g2):
                            continue
                        if not hac.le(
                            k.compose(a, b, c, f1, g1), k.compose(a, b, c, f2, g2)
                        ):
                            raise InvalidCategory(
                                "composition not monotone at "
                                f"({f1},{g1}) <= ({f2},{g2})"
                            )


@dataclass(frozen=True)
class PosetOCategory:
    """Full sub-O-category of the base poset category on named posets,
    remembering the token <-> monotone-map dictionary."""

    cat: FinOCategory
    posets: dict  # object name -> FinPoset
    _maps: dict = field(default_factory=dict)  # (a, b) -> {token: MonotoneMap}

    def object_of_poset(self, p: FinPoset) -> str:
        for name, q in self.posets.items():
            if p == q:
                return name
        raise ShapeMismatch(f"poset {p!r} is not registered in the category")

    def token_of_map(self, a: str, b: str, m: MonotoneMap) -> str:
        t = fs_name(m)
        if t not in self.cat.hom[(a, b)].elems:
            raise ShapeMismatch(f"map {m!r} is not a token of hom({a},{b})")
        return t

    def map_of_token(self, a: str, b: str, t: str) -> MonotoneMap:
        return self._maps[(a, b)][t]


def build_poset_category(posets: dict, cap: int = DEFAULT_FS_CAP) -> PosetOCategory:
    names = tuple(posets)
    hom = {}
    maps = {}
    for a in names:
        for b in names:
            fs, ms = function_space_maps(posets[a], posets[b], cap)
            hom[(a, b)] = fs
            maps[(a, b)] = {fs_name(m): m for m in ms}
    comp = {}
    for a in names:
        for b in names:
            for c in names:
                table = {}
                for tf, mf in maps[(a, b)].items():
                    for tg, mg in maps[(b, c)].items():
                        from .finposet import compose

                        table[(tf, tg)] = fs_name(compose(mg, mf))
                comp[(a, b, c)] = table
    ids = {a: fs_name(identity(posets[a])) for a in names}
    k = FinOCategory(names, hom, comp, ids)
    validate_category(k)
    return PosetOCategory(k, dict(posets), maps)


# ---------------------------------------------------------------------------
# presheaves and natural transformations

@dataclass(frozen=True)
class Presheaf:
    at: dict  # object -> FinPoset
    act: dict  # (a, b, token f: a->b) -> MonotoneMap at(b) -> at(a)


def validate_presheaf(k: FinOCategory, p: Presheaf) -> None:
    from .finposet import compose

    for a in k.objects:
        if p.act[(a, a, k.ids[a])] != identity(p.at[a]):
            raise InvalidCategory(f"presheaf does not preserve id at {a}")
    for a, b, c in itertools.product(k.objects, repeat=3):
        for f in k.hom[(a, b)].elems:
            for g in k.hom[(b, c)].elems:
                gf = k.compose(a, b, c, f, g)
                lhs = p.act[(a, c, gf)]
                rhs = compose(p.act[(a, b, f)], p.act[(b, c, g)])
                if lhs != rhs:
                    raise InvalidCategory(f"presheaf action fails at ({f},{g})")
    # local continuity of the action: monotone on each hom-poset
    for a, b in itertools.product(k.objects, repeat=2):
        hab = k.hom[(a, b)]
        for f in hab.elems:
            for g in hab.elems:
                if hab.le(f, g) and not leq_map(p.act[(a, b, f)], p.act[(a, b, g)]):
                    raise InvalidCategory(f"presheaf action not monotone at {f} <= {g}")


@dataclass(frozen=True)
class NatTrans:
    components: dict  # object -> MonotoneMap

    def __eq__(self, other):
        return isinstance(other, NatTrans) and self.components == other.components

    def __hash__(self):
        return hash(tuple(sorted(self.components.items(), key=lambda kv: kv[0])))


def nat_compose(s: NatTrans, t: NatTrans) -> NatTrans:
    """Vertical composition s after t."""
    from .finposet import compose

    return NatTrans({a: compose(s.components[a], t.components[a]) for a in t.components})


def nat_leq(s: NatTrans, t: NatTrans) -> bool:
    return all(leq_map(s.components[a], t.components[a]) for a in s.components)


def is_natural(k: FinOCategory, p: Presheaf, q: Presheaf, eta: NatTrans) -> bool:
    from .finposet import compose

    for a, b in itertools.product(k.objects, repeat=2):
        for f in k.hom[(a, b)].elems:
            lhs = compose(eta.components[a], p.act[(a, b, f)])
            rhs = compose(q.act[(a, b, f)], eta.components[b])
            if lhs != rhs:
                return False
    return True


def yoneda(k: FinOCategory, x: str) -> Presheaf:
    """y x = hom(-, x), acting by precomposition."""
    if x not in k.objects:
        raise ShapeMismatch(f"unknown object {x!r}")
    at = {a: k.hom[(a, x)] for a in k.objects}
    act = {}
    for a in k.objects:
        for b in k.objects:
            hbx, hax = k.hom[(b, x)], k.hom[(a, x)]
            for f in k.hom[(a, b)].elems:
                table = tuple(
                    hax.index(k.compose(a, b, x, f, g)) for g in hbx.elems
                )
                act[(a, b, f)] = MonotoneMap(hbx, hax, table)
    p = Presheaf(at, act)
    validate_presheaf(k, p)
    return p


def yoneda_mor(k: FinOCategory, x: str, y: str, f: str) -> NatTrans:
    """Postcomposition with f: x -> y, as a transformation y x => y y."""
    if f not in k.hom[(x, y)].elems:
        raise ShapeMismatch(f"unknown token {f!r} in hom({x},{y})")
    comps = {}
    for a in k.objects:
        hax, hay = k.hom[(a, x)], k.hom[(a, y)]
        table = tuple(hay.index(k.compose(a, x, y, g, f)) for g in hax.elems)
        comps[a] = MonotoneMap(hax, hay, table)
    # naturality of postcomposition follows from associativity, which
    # validate_category has already checked on every token triple
    return NatTrans(comps)


def enumerate_nat_trans(
    k: FinOCategory, p: Presheaf, q: Presheaf, cap: int = 10_000
) -> tuple[NatTrans, ...]:
    """All natural transformations p => q, in a deterministic order."""
    per_object = [monotone_maps(p.at[a], q.at[a]) for a in k.objects]
    total = 1
    for ms in per_object:
        total *= len(ms)
        if total > cap:
            raise CapExceeded(f"more than {cap} candidate families")
    out = []
    for combo in itertools.product(*per_object):
        eta = NatTrans(dict(zip(k.objects, combo)))
        if is_natural(k, p, q, eta):
            out.append(eta)
    return tuple(out)


def check_fully_faithful(k: FinOCategory, cap: int = 10_000) -> bool:
    """f |-> y f is an order-isomorphism hom(a,b) ≅ Nat(y a, y b)."""
    ys = {x: yoneda(k, x) for x in k.objects}
    for a in k.objects:
        for b in k.objects:
            hab = k.hom[(a, b)]
            nats = enumerate_nat_trans(k, ys[a], ys[b], cap)
            img = {f: yoneda_mor(k, a, b, f) for f in hab.elems}
            if len(set(img.values())) != len(hab.elems):
                return False  # not faithful
            if set(img.values()) != set(nats):
                return False  # not full
            for f in hab.elems:
                for g in hab.elems:
                    if hab.le(f, g) != nat_leq(img[f], img[g]):
                        return False  # not an order-iso
    return True


def pointwise_lub(chain: list[NatTrans], stab_index: int) -> NatTrans:
    """Componentwise lub of a witnessed increasing chain of transformations."""
    objs = chain[0].components.keys()
    comps = {}
    for a in objs:
        comps[a] = lub_map_chain(
            MapChain(tuple(t.components[a] for t in chain), stab_index)
        )
    return NatTrans(comps)


def verify_proof_step(kctx: PosetOCategory, cocone: Cocone) -> bool:
    """Replay the lub-reflection argument on a cocone embedded in the
    category: compute y(⊔ c_n^L∘c_n^R) and ⊔ y(c_n^L)∘y(c_n^R)
    independently and check both equal y(id)."""
    k = kctx.cat
    apex_obj = kctx.object_of_poset(cocone.apex)
    stage_objs = [kctx.object_of_poset(p) for p in cocone.chain.objects]
    stab = _e_stab(cocone)

    # left side: lub downstairs, then yoneda
    es = _round_trips(cocone)
    lub = lub_map_chain(MapChain(tuple(es), stab))
    left = yoneda_mor(k, apex_obj, apex_obj, kctx.token_of_map(apex_obj, apex_obj, lub))

    # right side: yoneda first, then the pointwise lub upstairs
    terms = []
    for n, leg in enumerate(cocone.legs):
        yl = yoneda_mor(
            k, stage_objs[n], apex_obj, kctx.token_of_map(stage_objs[n], apex_obj, leg.l)
        )
        yr = yoneda_mor(
            k, apex_obj, stage_objs[n], kctx.token_of_map(apex_obj, stage_objs[n], leg.r)
        )
        terms.append(nat_compose(yl, yr))
    right = pointwise_lub(terms, stab)

    y_id = yoneda_mor(k, apex_obj, apex_obj, k.ids[apex_obj])
    return left == y_id and right == y_id


def category_to_json(k: FinOCategory) -> dict:
    return {
        "objects": list(k.objects),
        "hom": {f"{a}|{b}": poset_to_json(p) for (a, b), p in k.hom.items()},
        "comp": {
            f"{a}|{b}|{c}": {f"{f}|{g}": h for (f, g), h in table.items()}
            for (a, b, c), table in k.comp.items()
        },
        "ids": dict(k.ids),
    }
