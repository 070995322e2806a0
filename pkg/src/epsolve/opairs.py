"""Projection (embedding-projection) pairs and adjoint pairs.

Both kinds share one representation with a kind tag: the proofs for the
two kinds are near-identical and so is the code.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cache

from .errors import CapExceeded, InvalidPair, ShapeMismatch
from .finposet import (
    FinPoset,
    MonotoneMap,
    compose,
    identity,
    is_monotone,
    leq_map,
    map_from_json,
    map_to_json,
    monotone_maps,
)

DEFAULT_PAIR_CAP = 64


class Kind(str, enum.Enum):
    EP = "EP"
    ADJ = "ADJ"


def _check_shapes(l: MonotoneMap, r: MonotoneMap) -> None:
    if l.dom != r.cod or l.cod != r.dom:
        raise ShapeMismatch("pair legs must be l: A->B, r: B->A")


def is_ep_pair(l: MonotoneMap, r: MonotoneMap) -> bool:
    """r∘l = id and l∘r <= id."""
    _check_shapes(l, r)
    return compose(r, l) == identity(l.dom) and leq_map(compose(l, r), identity(l.cod))


def is_adjoint_pair(l: MonotoneMap, r: MonotoneMap) -> bool:
    """l∘r <= id and id <= r∘l."""
    _check_shapes(l, r)
    return leq_map(compose(l, r), identity(l.cod)) and leq_map(
        identity(l.dom), compose(r, l)
    )


_CHECKS = {Kind.EP: is_ep_pair, Kind.ADJ: is_adjoint_pair}


def _valid_tables(kind: Kind, l: MonotoneMap, r: MonotoneMap) -> bool:
    """Same predicate as _CHECKS[kind] on raw tables, for hot paths."""
    lt, rt = l.table, r.table
    bleq = l.cod.leq
    if kind is Kind.EP:
        return all(rt[v] == i for i, v in enumerate(lt)) and all(
            bleq[lt[rt[j]]][j] for j in range(len(rt))
        )
    aleq = l.dom.leq
    return all(bleq[lt[rt[j]]][j] for j in range(len(rt))) and all(
        aleq[i][rt[v]] for i, v in enumerate(lt)
    )


@dataclass(frozen=True, eq=False)
class PairHom:
    kind: Kind
    l: MonotoneMap
    r: MonotoneMap

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, PairHom):
            return NotImplemented
        return self.kind == other.kind and self.l == other.l and self.r == other.r

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.kind, self.l, self.r))
            self.__dict__["_hash"] = h
        return h

    @property
    def src(self) -> FinPoset:
        return self.l.dom

    @property
    def tgt(self) -> FinPoset:
        return self.l.cod


def make_pair(kind: Kind, l: MonotoneMap, r: MonotoneMap) -> PairHom:
    if not _CHECKS[kind](l, r):
        raise InvalidPair(f"not a valid {kind.value} pair")
    return PairHom(kind, l, r)


def pair_identity(p: FinPoset, kind: Kind = Kind.EP) -> PairHom:
    i = identity(p)
    return PairHom(kind, i, i)


@cache
def pair_compose(g: PairHom, f: PairHom) -> PairHom:
    """(g∘f)^L = g^L∘f^L, (g∘f)^R = f^R∘g^R."""
    if g.kind != f.kind:
        raise ShapeMismatch("pair_compose: kind mismatch")
    if f.tgt != g.src:
        raise ShapeMismatch("pair_compose: tgt(f) != src(g)")
    out = PairHom(f.kind, compose(g.l, f.l), compose(f.r, g.r))
    # composition of valid pairs is valid; asserted as a runtime invariant
    assert _valid_tables(out.kind, out.l, out.r)
    return out


def pair_leq(f: PairHom, g: PairHom) -> bool:
    """Componentwise hom-order on pairs."""
    if f.kind != g.kind:
        raise ShapeMismatch("pair_leq: kind mismatch")
    if f.src != g.src or f.tgt != g.tgt:
        raise ShapeMismatch("pair_leq: endpoint mismatch")
    return leq_map(f.l, g.l) and leq_map(f.r, g.r)


def is_iso_pair(f: PairHom) -> bool:
    lt, rt = f.l.table, f.r.table
    return all(rt[v] == i for i, v in enumerate(lt)) and all(
        lt[v] == j for j, v in enumerate(rt)
    )


def pair_inverse(f: PairHom) -> PairHom:
    if not is_iso_pair(f):
        raise InvalidPair("pair_inverse: not an isomorphism pair")
    return PairHom(f.kind, f.r, f.l)


def bottom_inclusion_pair(pt: FinPoset, q: FinPoset, kind: Kind = Kind.EP) -> PairHom:
    """The unique pair from the one-point poset into a pointed poset:
    embed at bottom, project to the point."""
    if len(pt) != 1:
        raise ShapeMismatch("bottom_inclusion_pair: source must be the one-point poset")
    if not q.is_pointed:
        raise ShapeMismatch("bottom_inclusion_pair: target must be pointed")
    from .finposet import const_map

    return make_pair(kind, const_map(pt, q, q.bottom), const_map(q, pt, pt.elems[0]))


def derived_right_leg(l: MonotoneMap) -> MonotoneMap | None:
    """The only possible right leg for l, for either kind: both pair notions
    make (l, r) a Galois connection, forcing r(b) = max {a : l(a) <= b}."""
    a, b = l.dom, l.cod
    table = []
    for jb in range(len(b)):
        cands = [ia for ia in range(len(a)) if b.leq[l.table[ia]][jb]]
        best = None
        for ia in cands:
            if all(a.leq[other][ia] for other in cands):
                best = ia
                break
        if best is None:
            return None
        table.append(best)
    return MonotoneMap(b, a, tuple(table))


@cache
def enumerate_pairs(
    a: FinPoset, b: FinPoset, kind: Kind = Kind.EP, cap: int = DEFAULT_PAIR_CAP
) -> tuple[PairHom, ...]:
    """All valid pairs a -> b of the given kind, in a deterministic order.

    Each component determines the other, so only left legs are enumerated;
    the derived right leg is then checked against the kind's invariant.
    """
    if len(a) * len(b) > cap:
        raise CapExceeded(f"enumerate_pairs: |A|*|B| = {len(a) * len(b)} > cap {cap}")
    check = _CHECKS[kind]
    out = []
    for l in monotone_maps(a, b):
        r = derived_right_leg(l)
        if r is not None and check(l, r):
            out.append(PairHom(kind, l, r))
    return tuple(out)


def pair_to_json(f: PairHom) -> dict:
    return {"kind": f.kind.value, "l": map_to_json(f.l), "r": map_to_json(f.r)}


def pair_from_json(obj: dict, named=None) -> PairHom:
    kind = Kind(obj["kind"])
    l = map_from_json(obj["l"], named)
    r = map_from_json(obj["r"], named)
    if not is_monotone(l) or not is_monotone(r):
        raise InvalidPair("pair legs must be monotone")
    return make_pair(kind, l, r)
