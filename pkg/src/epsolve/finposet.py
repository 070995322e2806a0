"""Finite (optionally pointed) posets and monotone maps.

Every finite poset is an omega-cpo: ascending chains stabilize, so
continuity coincides with monotonicity and least upper bounds of chains
are computed exactly from an explicit stabilization witness.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cache, cached_property

from .errors import CapExceeded, InvalidPoset, NotPointed, ShapeMismatch, WitnessError

#: hard ceiling on monotone-map enumerations, independent of caller caps
HARD_ENUM_LIMIT = 100_000

#: default element cap for function_space
DEFAULT_FS_CAP = 512


@dataclass(frozen=True)
class Violation:
    """Names the first poset axiom that failed and a witness."""

    axiom: str
    witness: tuple[str, ...]


@dataclass(frozen=True, eq=False)
class FinPoset:
    elems: tuple[str, ...]
    leq: tuple[tuple[bool, ...], ...]
    bottom: str | None = None

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FinPoset):
            return NotImplemented
        return (
            self.elems == other.elems
            and self.bottom == other.bottom
            and self.leq == other.leq
        )

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.elems, self.leq, self.bottom))
            self.__dict__["_hash"] = h
        return h

    @cached_property
    def _pos(self) -> dict[str, int]:
        return {e: i for i, e in enumerate(self.elems)}

    def __len__(self) -> int:
        return len(self.elems)

    def index(self, e: str) -> int:
        return self._pos[e]

    def le(self, a: str, b: str) -> bool:
        return self.leq[self._pos[a]][self._pos[b]]

    @property
    def is_pointed(self) -> bool:
        return self.bottom is not None

    def __repr__(self) -> str:
        b = f", bottom={self.bottom!r}" if self.bottom is not None else ""
        return f"FinPoset({list(self.elems)!r}{b})"


def make_poset(elems, pairs, bottom=None) -> FinPoset:
    """Build a poset from a list of strict/non-strict `a <= b` pairs.

    The reflexive-transitive closure of `pairs` is taken; the result is
    validated and InvalidPoset raised if antisymmetry fails.
    """
    elems = tuple(elems)
    n = len(elems)
    pos = {e: i for i, e in enumerate(elems)}
    mat = [[i == j for j in range(n)] for i in range(n)]
    for a, b in pairs:
        mat[pos[a]][pos[b]] = True
    # Floyd-Warshall style transitive closure
    for k in range(n):
        for i in range(n):
            if mat[i][k]:
                row = mat[i]
                mk = mat[k]
                for j in range(n):
                    if mk[j]:
                        row[j] = True
    p = FinPoset(elems, tuple(tuple(r) for r in mat), bottom)
    v = validate_poset(p)
    if v is not None:
        raise InvalidPoset(v)
    return p


def validate_poset(p: FinPoset) -> Violation | None:
    """Check all poset axioms; return the first violation or None."""
    n = len(p.elems)
    if len(set(p.elems)) != n:
        seen = set()
        for e in p.elems:
            if e in seen:
                return Violation("distinct-elems", (e,))
            seen.add(e)
    if len(p.leq) != n or any(len(row) != n for row in p.leq):
        return Violation("shape", ())
    for i in range(n):
        if not p.leq[i][i]:
            return Violation("reflexivity", (p.elems[i],))
    for i in range(n):
        for j in range(n):
            if i != j and p.leq[i][j] and p.leq[j][i]:
                return Violation("antisymmetry", (p.elems[i], p.elems[j]))
    for i in range(n):
        for j in range(n):
            if not p.leq[i][j]:
                continue
            for k in range(n):
                if p.leq[j][k] and not p.leq[i][k]:
                    return Violation("transitivity", (p.elems[i], p.elems[j], p.elems[k]))
    if p.bottom is not None:
        if p.bottom not in p.elems:
            return Violation("bottom-membership", (p.bottom,))
        b = p.elems.index(p.bottom)
        for j in range(n):
            if not p.leq[b][j]:
                return Violation("bottom-least", (p.bottom, p.elems[j]))
    return None


# ---------------------------------------------------------------------------
# small catalog used throughout tests, the CLI registry and the suites

@cache
def one_point() -> FinPoset:
    return FinPoset(("*",), ((True,),), "*")


@cache
def chain_poset(n: int) -> FinPoset:
    """Total order v0 < v1 < ... < v{n-1} with v0 as bottom."""
    elems = tuple(f"v{i}" for i in range(n))
    leq = tuple(tuple(i <= j for j in range(n)) for i in range(n))
    return FinPoset(elems, leq, "v0")


@cache
def diamond() -> FinPoset:
    return make_poset(
        ("bot", "left", "right", "top"),
        [("bot", "left"), ("bot", "right"), ("left", "top"), ("right", "top")],
        bottom="bot",
    )


@cache
def flat(k: int) -> FinPoset:
    """k incomparable points over a shared bottom."""
    elems = ("bot",) + tuple(f"a{i}" for i in range(k))
    return make_poset(elems, [("bot", e) for e in elems[1:]], bottom="bot")


@cache
def antichain(k: int) -> FinPoset:
    elems = tuple(f"a{i}" for i in range(k))
    leq = tuple(tuple(i == j for j in range(k)) for i in range(k))
    return FinPoset(elems, leq, elems[0] if k == 1 else None)


# ---------------------------------------------------------------------------
# monotone maps

@dataclass(frozen=True, eq=False)
class MonotoneMap:
    dom: FinPoset
    cod: FinPoset
    table: tuple[int, ...]  # cod indices, aligned with dom.elems

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, MonotoneMap):
            return NotImplemented
        return (
            self.table == other.table
            and self.dom == other.dom
            and self.cod == other.cod
        )

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.dom, self.cod, self.table))
            self.__dict__["_hash"] = h
        return h

    def __call__(self, e: str) -> str:
        return self.cod.elems[self.table[self.dom.index(e)]]

    def mapping(self) -> dict[str, str]:
        return {d: self.cod.elems[v] for d, v in zip(self.dom.elems, self.table)}

    def __repr__(self) -> str:
        items = ",".join(f"{d}->{c}" for d, c in self.mapping().items())
        return f"MonotoneMap({{{items}}})"


def map_from_dict(dom: FinPoset, cod: FinPoset, mapping: dict[str, str]) -> MonotoneMap:
    missing = [e for e in dom.elems if e not in mapping]
    if missing:
        raise ShapeMismatch(f"map table missing entries for {missing}")
    return MonotoneMap(dom, cod, tuple(cod.index(mapping[e]) for e in dom.elems))


def is_monotone(f: MonotoneMap) -> bool:
    n = len(f.dom)
    leq_d, leq_c, t = f.dom.leq, f.cod.leq, f.table
    return all(
        leq_c[t[i]][t[j]]
        for i in range(n)
        for j in range(n)
        if leq_d[i][j]
    )


@cache
def identity(p: FinPoset) -> MonotoneMap:
    return MonotoneMap(p, p, tuple(range(len(p))))


def const_map(p: FinPoset, q: FinPoset, target: str) -> MonotoneMap:
    return MonotoneMap(p, q, (q.index(target),) * len(p))


@cache
def compose(g: MonotoneMap, f: MonotoneMap) -> MonotoneMap:
    """g after f."""
    if f.cod != g.dom:
        raise ShapeMismatch("compose: cod(f) != dom(g)")
    return MonotoneMap(f.dom, g.cod, tuple(g.table[v] for v in f.table))


def leq_map(f: MonotoneMap, g: MonotoneMap) -> bool:
    """Pointwise order on a hom-set."""
    if f.dom != g.dom or f.cod != g.cod:
        raise ShapeMismatch("leq_map: maps must share dom and cod")
    leq = f.cod.leq
    return all(leq[a][b] for a, b in zip(f.table, g.table))


# ---------------------------------------------------------------------------
# chains of maps with an explicit stabilization witness

@dataclass(frozen=True)
class MapChain:
    terms: tuple[MonotoneMap, ...]
    stab_index: int


def validate_map_chain(c: MapChain) -> None:
    if not c.terms:
        raise WitnessError("empty chain")
    if not 0 <= c.stab_index < len(c.terms):
        raise WitnessError(f"stab_index {c.stab_index} out of range")
    for i in range(len(c.terms) - 1):
        if not leq_map(c.terms[i], c.terms[i + 1]):
            raise WitnessError(f"chain not increasing at index {i}")
    w = c.terms[c.stab_index]
    for j in range(c.stab_index + 1, len(c.terms)):
        if c.terms[j] != w:
            raise WitnessError(f"stabilization witness fails at index {j}")


def lub_map_chain(c: MapChain) -> MonotoneMap:
    """Least upper bound of a witnessed eventually-constant chain."""
    validate_map_chain(c)
    return c.terms[c.stab_index]


# ---------------------------------------------------------------------------
# constructions

def product(p: FinPoset, q: FinPoset) -> FinPoset:
    elems = tuple(f"({a},{b})" for a in p.elems for b in q.elems)
    np_, nq = len(p), len(q)
    leq = tuple(
        tuple(
            p.leq[i1][i2] and q.leq[j1][j2]
            for i2 in range(np_)
            for j2 in range(nq)
        )
        for i1 in range(np_)
        for j1 in range(nq)
    )
    bottom = None
    if p.is_pointed and q.is_pointed:
        bottom = f"({p.bottom},{q.bottom})"
    return FinPoset(elems, leq, bottom)


def coproduct(p: FinPoset, q: FinPoset) -> FinPoset:
    """Disjoint union glued below a fresh bottom (sum of pointed posets)."""
    if not (p.is_pointed and q.is_pointed):
        raise NotPointed("coproduct requires pointed posets")
    elems = ("sum-bottom",) + tuple(f"inl({a})" for a in p.elems) + tuple(
        f"inr({b})" for b in q.elems
    )
    np_, nq = len(p), len(q)
    n = 1 + np_ + nq
    rows = []
    for i in range(n):
        row = [False] * n
        if i == 0:
            row = [True] * n
        elif i <= np_:
            for j in range(np_):
                row[1 + j] = p.leq[i - 1][j]
        else:
            for j in range(nq):
                row[1 + np_ + j] = q.leq[i - 1 - np_][j]
        rows.append(tuple(row))
    return FinPoset(elems, tuple(rows), "sum-bottom")


def lift(p: FinPoset) -> FinPoset:
    elems = ("lift-bottom",) + tuple(f"up({e})" for e in p.elems)
    n = len(p) + 1
    rows = [tuple([True] * n)]
    for i in range(len(p)):
        rows.append((False,) + tuple(p.leq[i][j] for j in range(len(p))))
    return FinPoset(elems, tuple(rows), "lift-bottom")


def _enumerate_monotone(p: FinPoset, q: FinPoset, limit: int) -> tuple[MonotoneMap, ...]:
    n, m = len(p), len(q)
    if n == 0:
        return (MonotoneMap(p, q, ()),)
    out: list[MonotoneMap] = []
    tab = [0] * n
    leq_p, leq_q = p.leq, q.leq

    def rec(i: int) -> None:
        if i == n:
            out.append(MonotoneMap(p, q, tuple(tab)))
            if len(out) > limit:
                raise CapExceeded(f"more than {limit} monotone maps {p!r} -> {q!r}")
            return
        for v in range(m):
            ok = True
            for j in range(i):
                if leq_p[j][i] and not leq_q[tab[j]][v]:
                    ok = False
                    break
                if leq_p[i][j] and not leq_q[v][tab[j]]:
                    ok = False
                    break
            if ok:
                tab[i] = v
                rec(i + 1)

    rec(0)
    return tuple(out)


@cache
def monotone_maps(p: FinPoset, q: FinPoset) -> tuple[MonotoneMap, ...]:
    """All monotone maps p -> q in a fixed (table-lexicographic) order."""
    return _enumerate_monotone(p, q, HARD_ENUM_LIMIT)


def fs_name(f: MonotoneMap) -> str:
    """Deterministic element name for a map inside a function-space poset."""
    return "{" + ",".join(f"{d}:{c}" for d, c in f.mapping().items()) + "}"


def function_space_maps(
    p: FinPoset, q: FinPoset, cap: int = DEFAULT_FS_CAP
) -> tuple[FinPoset, tuple[MonotoneMap, ...]]:
    """The poset of monotone maps p -> q together with the maps themselves,
    aligned index-for-index with the poset's elements."""
    maps = monotone_maps(p, q)
    if len(maps) > cap:
        raise CapExceeded(f"function space has {len(maps)} elements, cap {cap}")
    elems = tuple(fs_name(f) for f in maps)
    leq = tuple(tuple(leq_map(f, g) for g in maps) for f in maps)
    bottom = None
    if q.is_pointed:
        bottom = fs_name(const_map(p, q, q.bottom))
    return FinPoset(elems, leq, bottom), maps


def function_space(p: FinPoset, q: FinPoset, cap: int = DEFAULT_FS_CAP) -> FinPoset:
    return function_space_maps(p, q, cap)[0]


# ---------------------------------------------------------------------------
# canonical forms and isomorphism

def _refine_ranks(p: FinPoset) -> list[int]:
    """Iterated order-invariant refinement of element classes."""
    n = len(p)
    bot = p.elems.index(p.bottom) if p.bottom is not None else -1
    key: list = [
        (
            sum(p.leq[j][i] for j in range(n)),
            sum(p.leq[i][j] for j in range(n)),
            i == bot,
        )
        for i in range(n)
    ]
    while True:
        ranks = {k: r for r, k in enumerate(sorted(set(key)))}
        rk = [ranks[k] for k in key]
        new = [
            (
                rk[i],
                tuple(sorted(rk[j] for j in range(n) if p.leq[j][i])),
                tuple(sorted(rk[j] for j in range(n) if p.leq[i][j])),
            )
            for i in range(n)
        ]
        if len(set(new)) == len(set(key)):
            return rk
        key = new


@cache
def _canonical(p: FinPoset) -> tuple[str, tuple[int, ...]]:
    """Canonical label and the witnessing element ordering.

    Exact: searches all orderings compatible with the refined invariant
    classes and keeps the lexicographically least relation matrix.
    """
    n = len(p)
    rk = _refine_ranks(p)
    groups: dict[int, list[int]] = {}
    for i, r in enumerate(rk):
        groups.setdefault(r, []).append(i)
    ordered_groups = [groups[r] for r in sorted(groups)]
    count = 1
    for g in ordered_groups:
        for k in range(2, len(g) + 1):
            count *= k
        if count > 50_000:
            raise CapExceeded("poset too symmetric/large for canonicalization")

    best_bits: str | None = None
    best_order: tuple[int, ...] | None = None
    for perms in itertools.product(*(itertools.permutations(g) for g in ordered_groups)):
        order = tuple(itertools.chain.from_iterable(perms))
        bits = "".join(
            "1" if p.leq[order[i]][order[j]] else "0"
            for i in range(n)
            for j in range(n)
        )
        if best_bits is None or bits < best_bits:
            best_bits, best_order = bits, order
    assert best_order is not None
    if p.bottom is not None:
        bslot = best_order.index(p.elems.index(p.bottom))
    else:
        bslot = -1
    form = f"P{n};{best_bits};bot={bslot}"
    return form, best_order


def canonical_form(p: FinPoset) -> str:
    """Invariant under order-isomorphism; distinguishes non-isomorphic posets."""
    return _canonical(p)[0]


def iso_check(p: FinPoset, q: FinPoset) -> MonotoneMap | None:
    """An order-isomorphism p -> q witnessing canonical-form equality, or None."""
    fp, op = _canonical(p)
    fq, oq = _canonical(q)
    if fp != fq:
        return None
    table = [0] * len(p)
    for slot in range(len(p)):
        table[op[slot]] = oq[slot]
    return MonotoneMap(p, q, tuple(table))


# ---------------------------------------------------------------------------
# JSON wire format

def poset_to_json(p: FinPoset) -> dict:
    return {
        "elems": list(p.elems),
        "leq": [[bool(b) for b in row] for row in p.leq],
        "bottom": p.bottom,
    }


def poset_from_json(obj: dict) -> FinPoset:
    p = FinPoset(
        tuple(obj["elems"]),
        tuple(tuple(bool(b) for b in row) for row in obj["leq"]),
        obj.get("bottom"),
    )
    v = validate_poset(p)
    if v is not None:
        raise InvalidPoset(v)
    return p


def map_to_json(f: MonotoneMap) -> dict:
    return {
        "dom": poset_to_json(f.dom),
        "cod": poset_to_json(f.cod),
        "table": f.mapping(),
    }


def map_from_json(obj: dict, named: dict[str, FinPoset] | None = None) -> MonotoneMap:
    def poset_of(x):
        if isinstance(x, str):
            if not named or x not in named:
                raise InvalidPoset(f"unknown poset name {x!r}")
            return named[x]
        return poset_from_json(x)

    f = map_from_dict(poset_of(obj["dom"]), poset_of(obj["cod"]), obj["table"])
    if not is_monotone(f):
        raise ShapeMismatch("deserialized map is not monotone")
    return f
