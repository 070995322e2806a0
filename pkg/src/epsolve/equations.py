"""Recursive domain equations: concrete syntax, the initial chain from the
one-point poset, and run reports.

Grammar (LL(1), whitespace-insensitive, case-sensitive)::

    equation := 'D' '=' expr
    expr     := term ('+' term)*          # infix sugar for sum
    term     := 'D' | 'unit' | 'lift' '(' expr ')' | 'sum' '(' expr ',' expr ')'
              | 'prod' '(' expr ',' expr ')' | 'fun' '(' expr ',' expr ')'
              | 'const' '(' name ')' | '(' expr ')'
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .chains import (
    Cocone,
    OmegaChain,
    check_local_determination,
    colimit_finite,
    thread_approximant,
)
from .errors import CapExceeded
from .finposet import (
    FinPoset,
    MonotoneMap,
    canonical_form,
    chain_poset,
    const_map,
    diamond,
    flat,
    one_point,
)
from .functors import (
    Compose,
    Const,
    Fun,
    FunctorExpr,
    Id,
    Lift,
    Prod,
    Sum,
    apply_obj,
    pr_apply_mor,
)
from .opairs import Kind, PairHom, bottom_inclusion_pair, is_iso_pair

#: posets addressable from the concrete syntax via const(<name>)
NAMED_POSETS: dict[str, FinPoset] = {
    "1": one_point(),
    "unit": one_point(),
    "2-chain": chain_poset(2),
    "3-chain": chain_poset(3),
    "4-chain": chain_poset(4),
    "diamond": diamond(),
    "flat2": flat(2),
}


class EquationSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class EquationSpec:
    text: str
    body: FunctorExpr
    depth: int = 4
    elem_cap: int = 512
    pair_cap: int = 64


_TOKEN_RE = re.compile(r"\s*(=|\+|\(|\)|,|[A-Za-z0-9_\-*]+)")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            col = len(text) - len(stripped) + 1
            raise EquationSyntaxError(f"unexpected character {stripped[0]!r}", 1, col)
        if m.group(1):
            tokens.append((m.group(1), m.start(1) + 1))
        pos = m.end()
    tokens.append((None, len(text) + 1))  # end marker
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0]

    def col(self):
        return self.tokens[self.i][1]

    def take(self, expected=None):
        tok, col = self.tokens[self.i]
        if expected is not None and tok != expected:
            shown = tok if tok is not None else "end of input"
            raise EquationSyntaxError(f"expected {expected!r}, found {shown!r}", 1, col)
        self.i += 1
        return tok

    def parse_equation(self) -> FunctorExpr:
        self.take("D")
        self.take("=")
        body = self.parse_expr()
        if self.peek() is not None:
            raise EquationSyntaxError(f"trailing input {self.peek()!r}", 1, self.col())
        return body

    def parse_expr(self) -> FunctorExpr:
        out = self.parse_term()
        while self.peek() == "+":
            self.take("+")
            out = Sum(out, self.parse_term())
        return out

    def parse_term(self) -> FunctorExpr:
        tok = self.peek()
        col = self.col()
        if tok == "D":
            self.take()
            return Id()
        if tok in ("unit", "1"):
            self.take()
            return Const(one_point(), "unit")
        if tok == "lift":
            self.take()
            self.take("(")
            arg = self.parse_expr()
            self.take(")")
            return Lift(arg)
        if tok in ("sum", "prod", "fun", "compose"):
            self.take()
            self.take("(")
            a = self.parse_expr()
            self.take(",")
            b = self.parse_expr()
            self.take(")")
            return {"sum": Sum, "prod": Prod, "fun": Fun, "compose": Compose}[tok](a, b)
        if tok == "const":
            self.take()
            self.take("(")
            name_col = self.col()
            name = self.take()
            if name not in NAMED_POSETS:
                raise EquationSyntaxError(f"unknown poset name {name!r}", 1, name_col)
            self.take(")")
            return Const(NAMED_POSETS[name], name)
        if tok == "(":
            self.take()
            out = self.parse_expr()
            self.take(")")
            return out
        shown = tok if tok is not None else "end of input"
        raise EquationSyntaxError(f"expected a functor term, found {shown!r}", 1, col)


def parse_functor(text: str) -> FunctorExpr:
    """Parse a bare functor expression (no 'D =' prefix)."""
    p = _Parser(text)
    out = p.parse_expr()
    if p.peek() is not None:
        raise EquationSyntaxError(f"trailing input {p.peek()!r}", 1, p.col())
    return out


def parse_equation(text: str, depth: int = 4, elem_cap: int = 512, pair_cap: int = 64) -> EquationSpec:
    body = _Parser(text).parse_equation()
    if depth < 0:
        raise ValueError("depth must be >= 0")
    return EquationSpec(text, body, depth, elem_cap, pair_cap)


def iterate(spec: EquationSpec) -> OmegaChain:
    """The initial chain Δ_0 = 1, Δ_{n+1} = F(Δ_n), with ep links obtained
    by applying the functor to the unique starting pair."""
    start = one_point()
    objects = [start]
    links: list[PairHom] = []
    for n in range(spec.depth):
        try:
            nxt = apply_obj(spec.body, objects[-1], spec.elem_cap)
        except CapExceeded as exc:
            raise CapExceeded(f"cap exceeded at stage {n + 1}: {exc}") from exc
        if n == 0:
            links.append(bottom_inclusion_pair(start, nxt))
        else:
            links.append(pr_apply_mor(spec.body, links[-1], spec.elem_cap))
        objects.append(nxt)
    # smallest n such that every later link is an iso pair; None when the
    # final link is not an iso (no stabilization observed at this depth)
    n = len(links)
    while n > 0 and is_iso_pair(links[n - 1]):
        n -= 1
    stab = n if (n < len(links) or not links) else None
    return OmegaChain(tuple(objects), tuple(links), stab)


@dataclass
class RunReport:
    equation: str
    depth: int
    seed: int | None
    stages: list[dict] = field(default_factory=list)
    stabilized_at: int | None = None
    ld: dict | None = None
    defect_matrix: list[list[int]] | None = None
    theorem_suite: dict | None = None

    def to_json(self) -> dict:
        return {
            "equation": self.equation,
            "depth": self.depth,
            "seed": self.seed,
            "stages": self.stages,
            "stabilized_at": self.stabilized_at,
            "ld": self.ld,
            "defect_matrix": self.defect_matrix,
            "theorem_suite": self.theorem_suite,
        }


def solve_report(spec: EquationSpec, seed: int | None = None) -> RunReport:
    """Iterate the equation and assemble the stage/defect report."""
    d = iterate(spec)
    report = RunReport(spec.text, spec.depth, seed, stabilized_at=d.stab_index)

    # per-depth defect rows from thread approximants (row d has entries n <= d)
    matrix = []
    last_row: list[int] = []
    for depth in range(len(d.objects)):
        approx = thread_approximant(d, depth)
        ld = check_local_determination(approx)
        row = list(ld.defects)
        matrix.append(row)
        last_row = row
    report.defect_matrix = matrix

    for n, p in enumerate(d.objects):
        report.stages.append(
            {
                "n": n,
                "size": len(p),
                "canonical_form": canonical_form(p),
                "defect": last_row[n] if n < len(last_row) else 0,
            }
        )

    if d.stab_index is not None:
        cocone = colimit_finite(d)
        report.ld = check_local_determination(cocone).to_json()
    return report


def report_json_bytes(report: RunReport) -> bytes:
    import json

    return (json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n").encode()


def run_solver_determinism(name: str = "P6"):
    """Solver growth and determinism: D = lift(D) at depth 4 reports sizes
    1..5 with final-row defects 4-n, and identical runs are byte-identical."""
    from .suite import PropertyResult

    spec = parse_equation("D = lift(D)", depth=4)
    r1 = solve_report(spec, seed=0)
    r2 = solve_report(parse_equation("D = lift(D)", depth=4), seed=0)
    sizes = [s["size"] for s in r1.stages]
    defects = [s["defect"] for s in r1.stages]
    ok = (
        sizes == [1, 2, 3, 4, 5]
        and defects == [4 - n for n in range(5)]
        and report_json_bytes(r1) == report_json_bytes(r2)
    )
    failures = [] if ok else [{"sizes": sizes, "defects": defects}]
    return PropertyResult(name, ok, 1, failures)
