"""Formulas over procedure-backed atoms and what it costs to decide them.

The cost of deciding a statement is not a single number: with vector budgets
the cheapest verification strategies form a Pareto frontier, and a statement
belongs to the budget-r domain exactly when some frontier point fits under r.

Text grammar (used by scenario files and the CLI):

    statement := ATOM | '!' statement
               | '(' statement '&' statement ')'
               | '(' statement '|' statement ')'
               | '(' statement '->' statement ')'
    ATOM      := [A-Za-z0-9_]+

Binary connectives always take parentheses; whitespace between tokens is
ignored.  The canonical rendering is compact (no spaces), so rendered length
is what the language bound N(r) sees.
"""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Union

from .errors import NoStrategy, StatementSyntaxError, UncoveredAtom
from .resources import ResourceVector, pareto_min, sorted_vectors
from .world import DetermineTruth, Procedure, SpendLedger, World


# --- AST --------------------------------------------------------------------
# Statements are deeply nested and live in hot dict/set paths inside the
# prover, so each node caches its structural hash after the first computation.

@dataclass(frozen=True)
class Atom:
    claim_id: str

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            h = hash((0, self.claim_id))
            object.__setattr__(self, "_hash", h)
            return h


@dataclass(frozen=True)
class Not:
    inner: "Statement"

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            h = hash((1, self.inner))
            object.__setattr__(self, "_hash", h)
            return h


@dataclass(frozen=True)
class And:
    left: "Statement"
    right: "Statement"

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            h = hash((2, self.left, self.right))
            object.__setattr__(self, "_hash", h)
            return h


@dataclass(frozen=True)
class Or:
    left: "Statement"
    right: "Statement"

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            h = hash((3, self.left, self.right))
            object.__setattr__(self, "_hash", h)
            return h


@dataclass(frozen=True)
class Implies:
    left: "Statement"
    right: "Statement"

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            h = hash((4, self.left, self.right))
            object.__setattr__(self, "_hash", h)
            return h


Statement = Union[Atom, Not, And, Or, Implies]

_BINOP_GLYPH = {And: "&", Or: "|", Implies: "->"}


def render(s: Statement) -> str:
    if isinstance(s, Atom):
        return s.claim_id
    if isinstance(s, Not):
        return "!" + render(s.inner)
    glyph = _BINOP_GLYPH[type(s)]
    return f"({render(s.left)}{glyph}{render(s.right)})"


def rendered_length(s: Statement) -> int:
    return len(render(s))


def atoms_of(s: Statement) -> frozenset[str]:
    if isinstance(s, Atom):
        return frozenset({s.claim_id})
    if isinstance(s, Not):
        return atoms_of(s.inner)
    return atoms_of(s.left) | atoms_of(s.right)


def subformulas(s: Statement) -> frozenset[Statement]:
    if isinstance(s, Atom):
        return frozenset({s})
    if isinstance(s, Not):
        return frozenset({s}) | subformulas(s.inner)
    return frozenset({s}) | subformulas(s.left) | subformulas(s.right)


def evaluate(s: Statement, valuation: Mapping[str, bool]) -> bool:
    if isinstance(s, Atom):
        return bool(valuation[s.claim_id])
    if isinstance(s, Not):
        return not evaluate(s.inner, valuation)
    if isinstance(s, And):
        return evaluate(s.left, valuation) and evaluate(s.right, valuation)
    if isinstance(s, Or):
        return evaluate(s.left, valuation) or evaluate(s.right, valuation)
    return (not evaluate(s.left, valuation)) or evaluate(s.right, valuation)


def statement_sort_key(s: Statement) -> tuple[int, str]:
    text = render(s)
    return (len(text), text)


# --- parsing ----------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(->|[()!&|]|[A-Za-z0-9_]+)")


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise StatementSyntaxError(f"bad character at offset {pos}: {text[pos:pos + 8]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


def parse(text: str) -> Statement:
    tokens = _tokenize(text)
    pos = 0

    def peek() -> Optional[str]:
        return tokens[pos] if pos < len(tokens) else None

    def take(expected: Optional[str] = None) -> str:
        nonlocal pos
        tok = peek()
        if tok is None:
            raise StatementSyntaxError("unexpected end of input")
        if expected is not None and tok != expected:
            raise StatementSyntaxError(f"expected {expected!r}, found {tok!r}")
        pos += 1
        return tok

    def statement() -> Statement:
        tok = peek()
        if tok == "!":
            take()
            return Not(statement())
        if tok == "(":
            take()
            left = statement()
            op = take()
            right = statement()
            take(")")
            if op == "&":
                return And(left, right)
            if op == "|":
                return Or(left, right)
            if op == "->":
                return Implies(left, right)
            raise StatementSyntaxError(f"unknown connective {op!r}")
        if tok is not None and re.fullmatch(r"[A-Za-z0-9_]+", tok):
            take()
            return Atom(tok)
        raise StatementSyntaxError(f"unexpected token {tok!r}")

    result = statement()
    if pos != len(tokens):
        raise StatementSyntaxError(f"trailing tokens: {' '.join(tokens[pos:])}")
    return result


def enumerate_statements(atom_ids: Iterable[str], max_render_length: int) -> list[Statement]:
    """All statements of rendered length <= the bound, ascending by length.

    Deterministic: per length, atoms first, then negations, then &, |, ->
    pairs ordered by left-length then construction order."""
    names = sorted(a for a in atom_ids if len(a) <= max_render_length)
    by_len: dict[int, list[Statement]] = {}

    def bucket(n: int) -> list[Statement]:
        return by_len.setdefault(n, [])

    for name in names:
        bucket(len(name)).append(Atom(name))
    out: list[Statement] = []
    for length in range(1, max_render_length + 1):
        fresh: list[Statement] = list(by_len.get(length, []))
        for inner in by_len.get(length - 1, []):
            fresh.append(Not(inner))
        for ctor, overhead in ((And, 3), (Or, 3), (Implies, 4)):
            need = length - overhead
            for l_left in range(1, need):
                for left in by_len.get(l_left, []):
                    for right in by_len.get(need - l_left, []):
                        fresh.append(ctor(left, right))
        by_len[length] = fresh
        out.extend(fresh)
    return out


# --- verification strategies and cost ----------------------------------------

@dataclass(frozen=True)
class VerificationStrategy:
    """A choice of deciding procedure per atom, plus what is already built."""

    assignments: tuple[tuple[str, str], ...]  # (atom_id, procedure_id), sorted
    prebuilt: frozenset[str] = frozenset()

    @classmethod
    def of(cls, mapping: Mapping[str, str], prebuilt: Iterable[str] = ()) -> "VerificationStrategy":
        return cls(tuple(sorted(mapping.items())), frozenset(prebuilt))

    def procedure_for(self, atom_id: str) -> str:
        for a, p in self.assignments:
            if a == atom_id:
                return p
        raise UncoveredAtom(atom_id)

    def covers(self, atom_ids: Iterable[str]) -> bool:
        have = {a for a, _ in self.assignments}
        return set(atom_ids) <= have


@dataclass(frozen=True)
class CostResult:
    frontier: tuple[ResourceVector, ...]
    witnesses: tuple[tuple[ResourceVector, tuple[VerificationStrategy, ...]], ...]

    def witness_for(self, point: ResourceVector) -> tuple[VerificationStrategy, ...]:
        for p, ws in self.witnesses:
            if p == point:
                return ws
        raise KeyError(point)


def strategy_cost(s: Statement, strategy: VerificationStrategy, world: World) -> ResourceVector:
    """Implementations for each distinct atom plus one-time construction of
    each distinct piece of equipment not already built.  Negation is free;
    duplicate subformulas are collapsed before costing."""
    needed = sorted(atoms_of(s))
    if not strategy.covers(needed):
        missing = sorted(set(needed) - {a for a, _ in strategy.assignments})
        raise UncoveredAtom(", ".join(missing))
    n = 2 * world.dimension + 2
    total = ResourceVector.zeros(n)
    built: set[str] = set(strategy.prebuilt)
    for atom_id in needed:
        proc = world.procedure(strategy.procedure_for(atom_id))
        if world.true_purposes.get(proc.id) != DetermineTruth(atom_id):
            raise NoStrategy(f"{proc.id} does not actually decide {atom_id}")
        total = total.add(proc.implementation_cost)
        for eq_id in sorted(proc.equipment_used):
            if eq_id not in built:
                total = total.add(world.equipment_item(eq_id).construction_cost)
                built.add(eq_id)
    return total


def _covering_strategies(
    s: Statement, world: World, prebuilt: frozenset[str] = frozenset()
) -> list[VerificationStrategy]:
    needed = sorted(atoms_of(s))
    per_atom: list[list[str]] = []
    for atom_id in needed:
        procs = world.verifiers_for(atom_id)
        if not procs:
            raise NoStrategy(f"no procedure decides {atom_id}")
        per_atom.append(procs)
    out = []
    for combo in itertools.product(*per_atom):
        out.append(VerificationStrategy(tuple(zip(needed, combo)), prebuilt))
    return out


def min_cost(s: Statement, world: World) -> CostResult:
    """Pareto frontier of verification costs over every covering strategy."""
    strategies = _covering_strategies(s, world)
    costs: dict[VerificationStrategy, ResourceVector] = {
        st: strategy_cost(s, st, world) for st in strategies
    }
    frontier = sorted_vectors(pareto_min(costs.values()))
    witnesses = []
    for point in frontier:
        ws = tuple(st for st in strategies if costs[st] == point)
        witnesses.append((point, ws))
    return CostResult(tuple(frontier), tuple(witnesses))


def in_domain(s: Statement, budget: ResourceVector, world: World) -> bool:
    """Whether some minimal verification cost of ``s`` fits inside ``budget``."""
    return domain_diagnostic(s, budget, world) is None


def domain_diagnostic(s: Statement, budget: ResourceVector, world: World) -> Optional[str]:
    """None when the statement is in the budget's domain, else the reason."""
    try:
        result = min_cost(s, world)
    except NoStrategy as exc:
        return f"no-strategy: {exc}"
    if any(point.leq(budget) for point in result.frontier):
        return None
    return "frontier-exceeds-budget"


class VerifyOutcome(enum.Enum):
    TRUE = "True"
    FALSE = "False"
    INSUFFICIENT = "InsufficientResources"


def verify(
    s: Statement,
    budget: Optional[ResourceVector],
    world: World,
    ledger: SpendLedger,
) -> VerifyOutcome:
    """Decide ``s`` by actually running one admissible strategy.

    The cheapest strategy that fits both ``budget`` (when given) and the
    ledger cap is charged; prior construction recorded in the ledger makes
    later verifications cheaper.  Truth comes from the chosen procedures'
    outputs, never from peeking at ground truth directly.
    """
    try:
        strategies = _covering_strategies(s, world, prebuilt=frozenset(ledger.built))
    except NoStrategy:
        return VerifyOutcome.INSUFFICIENT
    admissible: list[tuple[tuple, VerificationStrategy, ResourceVector]] = []
    for st in strategies:
        cost = strategy_cost(s, st, world)
        if budget is not None and not cost.leq(budget):
            continue
        if not ledger.can_spend(cost):
            continue
        admissible.append(((cost.sort_key(), st.assignments), st, cost))
    if not admissible:
        return VerifyOutcome.INSUFFICIENT
    admissible.sort(key=lambda item: item[0])
    _, chosen, cost = admissible[0]
    valuation: dict[str, bool] = {}
    loc = world.default_location()
    fresh: set[str] = set()
    for atom_id, proc_id in chosen.assignments:
        proc = world.procedure(proc_id)
        valuation[atom_id] = proc.output_fn(world, loc) == "1"
        fresh |= set(proc.equipment_used) - ledger.built
    ledger.commit(cost, fresh, f"verify:{render(s)}")
    return VerifyOutcome.TRUE if evaluate(s, valuation) else VerifyOutcome.FALSE


def non_closure_witness(
    budget: ResourceVector, world: World
) -> Optional[tuple[Statement, Statement]]:
    """Atoms S, T both decidable within budget whose conjunction is not.

    Exhaustive over the world's atom registry in sorted order, so the first
    witness is deterministic; None when the domain happens to be closed."""
    names = world.atoms()
    memo: dict[str, bool] = {}

    def atom_fits(name: str) -> bool:
        if name not in memo:
            memo[name] = in_domain(Atom(name), budget, world)
        return memo[name]

    for a, b in itertools.combinations(names, 2):
        if not (atom_fits(a) and atom_fits(b)):
            continue
        conj = And(Atom(a), Atom(b))
        if not in_domain(conj, budget, world):
            return (Atom(a), Atom(b))
    return None
