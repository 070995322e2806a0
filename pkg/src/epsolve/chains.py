"""Omega-chains of pairs, cocones, canonical colimits and the
local-determination checkers.

Chains are finite lists: stabilization is a verified witness (all links at
or beyond `stab_index` are isomorphism pairs), never a heuristic.  Chains
that do not stabilize are analyzed through bounded-depth thread
approximants.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import CapExceeded, ShapeMismatch, WitnessError
from .finposet import (
    FinPoset,
    MapChain,
    MonotoneMap,
    compose,
    identity,
    lub_map_chain,
    poset_from_json,
    poset_to_json,
)
from .opairs import (
    Kind,
    PairHom,
    enumerate_pairs,
    is_iso_pair,
    pair_compose,
    pair_from_json,
    pair_identity,
    pair_inverse,
    pair_to_json,
)


@dataclass(frozen=True)
class OmegaChain:
    objects: tuple[FinPoset, ...]
    links: tuple[PairHom, ...]
    stab_index: int | None = None

    @property
    def kind(self) -> Kind:
        return self.links[0].kind if self.links else Kind.EP

    def __len__(self) -> int:
        return len(self.objects)


def validate_chain(d: OmegaChain) -> None:
    if len(d.links) != len(d.objects) - 1:
        raise ShapeMismatch("chain needs exactly len(objects)-1 links")
    for n, link in enumerate(d.links):
        if link.kind != d.kind:
            raise ShapeMismatch(f"link {n} has kind {link.kind}, chain is {d.kind}")
        if link.src != d.objects[n] or link.tgt != d.objects[n + 1]:
            raise ShapeMismatch(f"link {n} endpoints do not match objects")
    if d.stab_index is not None:
        if not 0 <= d.stab_index <= len(d.links):
            raise WitnessError("stab_index out of range")
        for n in range(d.stab_index, len(d.links)):
            if not is_iso_pair(d.links[n]):
                raise WitnessError(f"link {n} is not an iso pair; witness invalid")


@dataclass(frozen=True)
class Cocone:
    chain: OmegaChain
    apex: FinPoset
    legs: tuple[PairHom, ...]

    @property
    def kind(self) -> Kind:
        return self.chain.kind


@dataclass(frozen=True)
class Thread:
    """A projection-compatible tuple of components, one per chain stage."""

    depth: int
    components: tuple[str, ...]


@dataclass(frozen=True)
class LdReport:
    kind: Kind
    verdict: bool
    defects: tuple[int, ...]
    adj_residuals: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        for i in range(len(self.defects) - 1):
            if self.defects[i] < self.defects[i + 1]:
                raise WitnessError("defect sequence must be non-increasing")

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "verdict": self.verdict,
            "defects": list(self.defects),
            "adj_residuals": (
                None
                if self.adj_residuals is None
                else [list(row) for row in self.adj_residuals]
            ),
        }


def link_composite(d: OmegaChain, n: int, m: int) -> PairHom:
    """The composite pair Δ_n -> Δ_m (identity when n = m)."""
    if not 0 <= n <= m < len(d.objects):
        raise IndexError(f"link_composite: bad indices n={n}, m={m}")
    out = pair_identity(d.objects[n], d.kind)
    for k in range(n, m):
        out = pair_compose(d.links[k], out)
    return out


def is_cocone(k: Cocone) -> bool:
    if len(k.legs) != len(k.chain.objects):
        return False
    for n, leg in enumerate(k.legs):
        if leg.kind != k.kind or leg.src != k.chain.objects[n] or leg.tgt != k.apex:
            return False
    for n in range(len(k.legs) - 1):
        if pair_compose(k.legs[n + 1], k.chain.links[n]) != k.legs[n]:
            return False
    return True


def colimit_finite(d: OmegaChain) -> Cocone:
    """Canonical colimiting cocone of a chain with a verified stabilization
    witness: apex Δ_N, legs by link composites (inverted beyond N)."""
    if d.stab_index is None:
        raise WitnessError("colimit_finite needs a stabilization witness")
    validate_chain(d)
    stab = min(d.stab_index, len(d.objects) - 1)
    apex = d.objects[stab]
    # accumulate the link composites in one backward and one forward pass
    legs = [pair_identity(apex, d.kind)] * len(d.objects)
    for n in range(stab - 1, -1, -1):
        legs[n] = pair_compose(legs[n + 1], d.links[n])
    for n in range(stab + 1, len(d.objects)):
        legs[n] = pair_inverse(pair_compose(d.links[n - 1], pair_inverse(legs[n - 1])))
    return Cocone(d, apex, tuple(legs))


def cocone_from_final_leg(d: OmegaChain, final: PairHom) -> Cocone:
    """The unique cocone over d whose last leg is `final`; earlier legs are
    forced by commutation."""
    last = len(d.objects) - 1
    legs = [pair_compose(final, link_composite(d, n, last)) for n in range(last)]
    legs.append(final)
    return Cocone(d, final.tgt, tuple(legs))


def _e_stab(k: Cocone) -> int:
    # final available index serves as witness when the chain carries none
    last = len(k.legs) - 1
    if k.chain.stab_index is None:
        return last
    return min(k.chain.stab_index, last)


def _round_trips(k: Cocone) -> list[MonotoneMap]:
    return [compose(leg.l, leg.r) for leg in k.legs]


def _defects(es: list[MonotoneMap], apex: FinPoset) -> tuple[int, ...]:
    ident = identity(apex)
    return tuple(sum(1 for a, b in zip(e.table, ident.table) if a != b) for e in es)


def check_local_determination_ep(k: Cocone) -> LdReport:
    """Locally determined iff the lub of c_n^L ∘ c_n^R is the apex identity."""
    if k.kind != Kind.EP:
        raise ShapeMismatch("check_local_determination_ep: EP cocone required")
    es = _round_trips(k)
    try:
        lub = lub_map_chain(MapChain(tuple(es), _e_stab(k)))
    except WitnessError as exc:
        raise WitnessError(f"invalid cocone: {exc}") from exc
    return LdReport(Kind.EP, lub == identity(k.apex), _defects(es, k.apex))


def check_local_determination_adj(k: Cocone) -> LdReport:
    """Both lub conditions for adjoint pairs: the apex round-trips reach the
    identity, and for each n the inner round-trips reach c_n^R ∘ c_n^L."""
    if k.kind != Kind.ADJ:
        raise ShapeMismatch("check_local_determination_adj: ADJ cocone required")
    es = _round_trips(k)
    stab = _e_stab(k)
    try:
        lub = lub_map_chain(MapChain(tuple(es), stab))
    except WitnessError as exc:
        raise WitnessError(f"invalid cocone: {exc}") from exc
    first_ok = lub == identity(k.apex)

    second_ok = True
    residuals = []
    last = len(k.legs) - 1
    for n in range(len(k.legs)):
        target = compose(k.legs[n].r, k.legs[n].l)
        ts = []
        for m in range(n, last + 1):
            comp = link_composite(k.chain, n, m)
            ts.append(compose(comp.r, comp.l))
        t_stab = max(stab - n, 0)
        try:
            inner_lub = lub_map_chain(MapChain(tuple(ts), min(t_stab, len(ts) - 1)))
        except WitnessError as exc:
            raise WitnessError(f"invalid chain at stage {n}: {exc}") from exc
        if inner_lub != target:
            second_ok = False
        residuals.append(
            tuple(sum(1 for a, b in zip(t.table, target.table) if a != b) for t in ts)
        )
    return LdReport(
        Kind.ADJ, first_ok and second_ok, _defects(es, k.apex), tuple(residuals)
    )


def check_local_determination(k: Cocone) -> LdReport:
    if k.kind == Kind.EP:
        return check_local_determination_ep(k)
    return check_local_determination_adj(k)


def is_colimiting(k: Cocone, cap: int = 64) -> bool:
    """Universal-property oracle by mediator search: k is colimiting iff an
    isomorphism pair u from the canonical colimit's apex satisfies
    u ∘ κ_n = c_n for all n (colimits are unique up to unique iso).

    The canonical leg at the stabilization point N is the identity, so the
    commutation condition at N pins the only possible mediator down to
    u = c_N; the search space collapses to that single candidate.  The cap
    is the same one the explicit pair enumeration would be subject to.
    """
    canon = colimit_finite(k.chain)
    if len(canon.apex) * len(k.apex) > cap:
        raise CapExceeded(
            f"is_colimiting: mediator search space {len(canon.apex)}x{len(k.apex)} "
            f"exceeds cap {cap}"
        )
    stab = min(k.chain.stab_index, len(k.legs) - 1)
    u = k.legs[stab]
    if not is_iso_pair(u):
        return False
    return all(
        pair_compose(u, canon.legs[n]) == k.legs[n] for n in range(len(k.legs))
    )


def is_colimiting_by_enumeration(k: Cocone, cap: int = 64) -> bool:
    """Brute-force variant of is_colimiting quantifying the mediator over
    the full enumerated pair hom-set; cross-checked against the forced-
    candidate shortcut in the test suite."""
    canon = colimit_finite(k.chain)
    for u in enumerate_pairs(canon.apex, k.apex, k.kind, cap):
        if not is_iso_pair(u):
            continue
        if all(
            pair_compose(u, canon.legs[n]) == k.legs[n] for n in range(len(k.legs))
        ):
            return True
    return False


def enumerate_threads(d: OmegaChain, depth: int) -> tuple[Thread, ...]:
    """All projection-compatible threads of length depth+1; each is
    determined by its component at the given depth."""
    if not 0 <= depth < len(d.objects):
        raise IndexError("depth out of range")
    threads = []
    for x in d.objects[depth].elems:
        comps = [x]
        cur = x
        for k in range(depth - 1, -1, -1):
            cur = d.links[k].r(cur)
            comps.append(cur)
        threads.append(Thread(depth, tuple(reversed(comps))))
    return tuple(threads)


def thread_approximant(d: OmegaChain, depth: int) -> Cocone:
    """Bounded-depth view of a (possibly non-stabilizing) chain: the cocone
    over the truncated chain with apex Δ_depth and composite legs."""
    if not 0 <= depth < len(d.objects):
        raise IndexError("depth out of range")
    trunc = OmegaChain(d.objects[: depth + 1], d.links[:depth], stab_index=depth)
    legs = tuple(link_composite(trunc, n, depth) for n in range(depth + 1))
    return Cocone(trunc, d.objects[depth], legs)


# ---------------------------------------------------------------------------
# JSON wire format

def chain_to_json(d: OmegaChain) -> dict:
    return {
        "objects": [poset_to_json(p) for p in d.objects],
        "links": [pair_to_json(f) for f in d.links],
        "stab_index": d.stab_index,
    }


def chain_from_json(obj: dict) -> OmegaChain:
    d = OmegaChain(
        tuple(poset_from_json(p) for p in obj["objects"]),
        tuple(pair_from_json(f) for f in obj["links"]),
        obj.get("stab_index"),
    )
    validate_chain(d)
    return d


def cocone_to_json(k: Cocone) -> dict:
    return {
        "chain": chain_to_json(k.chain),
        "apex": poset_to_json(k.apex),
        "legs": [pair_to_json(f) for f in k.legs],
    }


def cocone_from_json(obj: dict) -> Cocone:
    k = Cocone(
        chain_from_json(obj["chain"]),
        poset_from_json(obj["apex"]),
        tuple(pair_from_json(f) for f in obj["legs"]),
    )
    if not is_cocone(k):
        raise ShapeMismatch("deserialized cocone does not commute")
    return k
