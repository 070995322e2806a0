"""Locally continuous functor combinators and their action on pairs.

Mixed variance (the function-space combinator) is handled only at the pair
level: pairs symmetrize variance, so every expression acts on pairs even
though only fun-free expressions act on raw maps.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cache

from .chains import (
    Cocone,
    LdReport,
    OmegaChain,
    check_local_determination,
    is_colimiting,
    validate_chain,
)
from .errors import CapExceeded, ShapeMismatch
from .finposet import (
    DEFAULT_FS_CAP,
    FinPoset,
    MapChain,
    MonotoneMap,
    compose,
    coproduct,
    function_space_maps,
    fs_name,
    identity,
    leq_map,
    lift,
    lub_map_chain,
    product,
)
from .opairs import DEFAULT_PAIR_CAP, Kind, PairHom, _CHECKS, enumerate_pairs, pair_compose, pair_identity, pair_leq


class FunctorExpr:
    """Base class for functor syntax trees."""

    __slots__ = ()


@dataclass(frozen=True)
class Id(FunctorExpr):
    def __str__(self):
        return "D"


@dataclass(frozen=True)
class Const(FunctorExpr):
    poset: FinPoset
    name: str = "const"

    def __str__(self):
        return f"const({self.name})"


@dataclass(frozen=True)
class Lift(FunctorExpr):
    arg: FunctorExpr

    def __str__(self):
        return f"lift({self.arg})"


@dataclass(frozen=True)
class Prod(FunctorExpr):
    fst: FunctorExpr
    snd: FunctorExpr

    def __str__(self):
        return f"prod({self.fst},{self.snd})"


@dataclass(frozen=True)
class Sum(FunctorExpr):
    fst: FunctorExpr
    snd: FunctorExpr

    def __str__(self):
        return f"sum({self.fst},{self.snd})"


@dataclass(frozen=True)
class Fun(FunctorExpr):
    """Function space; the first argument is contravariant."""

    arg: FunctorExpr
    res: FunctorExpr

    def __str__(self):
        return f"fun({self.arg},{self.res})"


@dataclass(frozen=True)
class Compose(FunctorExpr):
    outer: FunctorExpr
    inner: FunctorExpr

    def __str__(self):
        return f"compose({self.outer},{self.inner})"


def _install_cached_hash(cls) -> None:
    # expression trees are hashed constantly as cache keys; memoize per node
    base = cls.__hash__

    def __hash__(self, _base=base):
        h = self.__dict__.get("_hash")
        if h is None:
            h = _base(self)
            self.__dict__["_hash"] = h
        return h

    cls.__hash__ = __hash__


for _cls in (Id, Const, Lift, Prod, Sum, Fun, Compose):
    _install_cached_hash(_cls)


def has_fun(e: FunctorExpr) -> bool:
    match e:
        case Fun():
            return True
        case Lift(arg):
            return has_fun(arg)
        case Prod(a, b) | Sum(a, b) | Compose(a, b):
            return has_fun(a) or has_fun(b)
        case _:
            return False


@cache
def apply_obj(e: FunctorExpr, p: FinPoset, elem_cap: int = DEFAULT_FS_CAP) -> FinPoset:
    """Object part: structural interpretation via the poset constructions."""
    match e:
        case Id():
            out = p
        case Const(q, _):
            out = q
        case Lift(arg):
            out = lift(apply_obj(arg, p, elem_cap))
        case Prod(a, b):
            out = product(apply_obj(a, p, elem_cap), apply_obj(b, p, elem_cap))
        case Sum(a, b):
            out = coproduct(apply_obj(a, p, elem_cap), apply_obj(b, p, elem_cap))
        case Fun(a, b):
            out = function_space_maps(
                apply_obj(a, p, elem_cap), apply_obj(b, p, elem_cap), elem_cap
            )[0]
        case Compose(outer, inner):
            out = apply_obj(outer, apply_obj(inner, p, elem_cap), elem_cap)
        case _:
            raise TypeError(f"unknown functor expression {e!r}")
    if len(out) > elem_cap:
        raise CapExceeded(f"object of size {len(out)} exceeds cap {elem_cap}")
    return out


def lift_map(f: MonotoneMap) -> MonotoneMap:
    dom, cod = lift(f.dom), lift(f.cod)
    # slot 0 is the fresh bottom in both; old elements shift by one
    return MonotoneMap(dom, cod, (0,) + tuple(v + 1 for v in f.table))


def prod_map(f: MonotoneMap, g: MonotoneMap) -> MonotoneMap:
    dom, cod = product(f.dom, g.dom), product(f.cod, g.cod)
    nq, mq = len(g.dom), len(g.cod)
    table = tuple(
        f.table[i] * mq + g.table[j] for i in range(len(f.dom)) for j in range(nq)
    )
    return MonotoneMap(dom, cod, table)


def sum_map(f: MonotoneMap, g: MonotoneMap) -> MonotoneMap:
    dom, cod = coproduct(f.dom, g.dom), coproduct(f.cod, g.cod)
    np_ = len(f.cod)
    table = (0,) + tuple(v + 1 for v in f.table) + tuple(v + 1 + np_ for v in g.table)
    return MonotoneMap(dom, cod, table)


def apply_mor(e: FunctorExpr, f: MonotoneMap) -> MonotoneMap:
    """Morphism part, defined for fun-free (purely covariant) expressions."""
    match e:
        case Id():
            return f
        case Const(q, _):
            return identity(q)
        case Lift(arg):
            return lift_map(apply_mor(arg, f))
        case Prod(a, b):
            return prod_map(apply_mor(a, f), apply_mor(b, f))
        case Sum(a, b):
            return sum_map(apply_mor(a, f), apply_mor(b, f))
        case Fun():
            raise ShapeMismatch(
                "apply_mor is undefined on fun(...) expressions; use pr_apply_mor"
            )
        case Compose(outer, inner):
            return apply_mor(outer, apply_mor(inner, f))
    raise TypeError(f"unknown functor expression {e!r}")


@cache
def pr_apply_mor(e: FunctorExpr, f: PairHom, elem_cap: int = DEFAULT_FS_CAP) -> PairHom:
    """Pair action: componentwise on covariant nodes, symmetrized on fun."""
    match e:
        case Id():
            out = f
        case Const(q, _):
            out = pair_identity(q, f.kind)
        case Lift(arg):
            g = pr_apply_mor(arg, f, elem_cap)
            out = PairHom(f.kind, lift_map(g.l), lift_map(g.r))
        case Prod(a, b):
            ga, gb = pr_apply_mor(a, f, elem_cap), pr_apply_mor(b, f, elem_cap)
            out = PairHom(f.kind, prod_map(ga.l, gb.l), prod_map(ga.r, gb.r))
        case Sum(a, b):
            ga, gb = pr_apply_mor(a, f, elem_cap), pr_apply_mor(b, f, elem_cap)
            out = PairHom(f.kind, sum_map(ga.l, gb.l), sum_map(ga.r, gb.r))
        case Fun(a, b):
            ga, gb = pr_apply_mor(a, f, elem_cap), pr_apply_mor(b, f, elem_cap)
            dom_fs, dom_maps = function_space_maps(ga.src, gb.src, elem_cap)
            cod_fs, cod_maps = function_space_maps(ga.tgt, gb.tgt, elem_cap)
            cod_pos = {fs_name(m): i for i, m in enumerate(cod_maps)}
            dom_pos = {fs_name(m): i for i, m in enumerate(dom_maps)}
            l_table = tuple(
                cod_pos[fs_name(compose(gb.l, compose(h, ga.r)))] for h in dom_maps
            )
            r_table = tuple(
                dom_pos[fs_name(compose(gb.r, compose(k, ga.l)))] for k in cod_maps
            )
            out = PairHom(
                f.kind,
                MonotoneMap(dom_fs, cod_fs, l_table),
                MonotoneMap(cod_fs, dom_fs, r_table),
            )
        case Compose(outer, inner):
            out = pr_apply_mor(outer, pr_apply_mor(inner, f, elem_cap), elem_cap)
        case _:
            raise TypeError(f"unknown functor expression {e!r}")
    if not _CHECKS[f.kind](out.l, out.r):
        raise RuntimeError(f"combinator {e} produced an invalid {f.kind.value} pair")
    return out


def check_functor_laws(e: FunctorExpr, probes) -> bool:
    """Preservation of identities and composition on a probe set of
    composable pair lists."""
    for probe in probes:
        for f in probe:
            ident = pair_identity(f.src, f.kind)
            if pr_apply_mor(e, ident) != pair_identity(apply_obj(e, f.src), f.kind):
                return False
        for f, g in zip(probe, probe[1:]):
            lhs = pr_apply_mor(e, pair_compose(g, f))
            rhs = pair_compose(pr_apply_mor(e, g), pr_apply_mor(e, f))
            if lhs != rhs:
                return False
    return True


def check_local_continuity(
    e: FunctorExpr,
    a: FinPoset,
    b: FinPoset,
    kind: Kind = Kind.EP,
    cap: int = DEFAULT_PAIR_CAP,
) -> bool:
    """Monotone hom-action plus preservation of witnessed lubs on the
    enumerated hom-poset a -> b.

    For fun-free expressions the action on plain maps is tested over the
    full hom-poset, where the pointwise order is nontrivial.  The pair-level
    hom-order is discrete (each leg determines the other antitonically), so
    there the check reduces to preservation of constant chains.
    """
    if not has_fun(e):
        from .finposet import monotone_maps

        maps = monotone_maps(a, b)
        if len(maps) > cap:
            raise CapExceeded(f"hom-poset has {len(maps)} maps, cap {cap}")
        images = {f: apply_mor(e, f) for f in maps}
        for f in maps:
            for g in maps:
                if not leq_map(f, g):
                    continue
                if not leq_map(images[f], images[g]):
                    return False
                # witnessed two-term chain: the image lub must be the image
                # of the lub (= the top term)
                chain = MapChain((images[f], images[g]), 1)
                if lub_map_chain(chain) != images[g]:
                    return False
    pairs = enumerate_pairs(a, b, kind, cap)
    images_pr = {f: pr_apply_mor(e, f) for f in pairs}
    for f in pairs:
        for g in pairs:
            if pair_leq(f, g) and not pair_leq(images_pr[f], images_pr[g]):
                return False
        ff = images_pr[f]
        for side in ("l", "r"):
            chain = MapChain((getattr(ff, side),), 0)
            if lub_map_chain(chain) != getattr(ff, side):
                return False
    return True


@dataclass(frozen=True)
class PreservationResult:
    image: Cocone
    colimiting: bool
    locally_determined: LdReport


def preserves_cocone(
    e: FunctorExpr, k: Cocone, elem_cap: int = DEFAULT_FS_CAP, pair_cap: int = DEFAULT_PAIR_CAP
) -> PreservationResult:
    """Apply the functor to the whole cocone and rerun the checkers on the
    image."""
    objects = tuple(apply_obj(e, p, elem_cap) for p in k.chain.objects)
    links = tuple(pr_apply_mor(e, f, elem_cap) for f in k.chain.links)
    image_chain = OmegaChain(objects, links, k.chain.stab_index)
    validate_chain(image_chain)
    image = Cocone(
        image_chain,
        apply_obj(e, k.apex, elem_cap),
        tuple(pr_apply_mor(e, leg, elem_cap) for leg in k.legs),
    )
    return PreservationResult(
        image,
        is_colimiting(image, pair_cap),
        check_local_determination(image),
    )
