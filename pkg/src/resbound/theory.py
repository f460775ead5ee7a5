"""Axiom admission, Gödel coding, and budget-bounded Hilbert proof search.

The object logic is quantifier-free classical propositional logic: nine
axiom schemas (implication, classical contraposition, conjunction and
disjunction introduction/elimination) with modus ponens as the only rule.
A proof is a sequence of formulas, each an admitted axiom, a schema
instance, or modus ponens over earlier steps.  Every step must fit the
theory's language bound N(r), and the whole proof is priced as expressions
held for the remainder of the proof: step i of k pays its creation and
display cost plus maintenance for the k-i intervals it stays alive, so
longer proofs pay superlinear energy.

Search enumerates derivations of increasing size (number of distinct proof
steps).  Schema metavariables range over the subformula closure of the
admitted axioms and the goal, plus the negations of those subformulas,
capped at N(r).  The search is exhaustive within the configured step bound;
a missing proof means no proof exists within those bounds and the budget.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import MalformedCode, StatementTooLong
from .expressions import Alphabet, CostParameters, Expression, expression_cost, max_length
from .resources import ResourceVector
from .statements import (
    And,
    Atom,
    Implies,
    Not,
    Or,
    Statement,
    atoms_of,
    enumerate_statements,
    evaluate,
    in_domain,
    render,
    rendered_length,
    statement_sort_key,
    subformulas,
)
from .world import World


# --- Gödel coding -----------------------------------------------------------

_DIGITS = Alphabet.from_string("0123456789")


@dataclass(frozen=True)
class GodelMap:
    """Fixed-width decimal index coding of expressions over an alphabet."""

    alphabet: Alphabet

    @property
    def width(self) -> int:
        return len(str(self.alphabet.size - 1))

    def encode_text(self, text: str) -> str:
        w = self.width
        return "".join(str(self.alphabet.index_of(ch)).zfill(w) for ch in text)

    def decode_text(self, code: str) -> str:
        w = self.width
        if len(code) % w != 0:
            raise MalformedCode(f"code length {len(code)} not a multiple of width {w}")
        out = []
        for i in range(0, len(code), w):
            chunk = code[i : i + w]
            if not chunk.isdigit():
                raise MalformedCode(f"non-digit chunk {chunk!r}")
            idx = int(chunk)
            if idx >= self.alphabet.size:
                raise MalformedCode(f"index {idx} out of range")
            out.append(self.alphabet.symbols[idx])
        return "".join(out)

    def encode(self, expr: Expression) -> Expression:
        return Expression(self.encode_text(expr.text), _DIGITS)

    def decode(self, code: Union[Expression, str]) -> Expression:
        text = code.text if isinstance(code, Expression) else code
        return Expression(self.decode_text(text), self.alphabet)


def godel_encode(expr: Expression) -> Expression:
    return GodelMap(expr.alphabet).encode(expr)


def godel_decode(code: Union[Expression, str], alphabet: Alphabet) -> Expression:
    return GodelMap(alphabet).decode(code)


# --- axiom schemas -----------------------------------------------------------

_A = Atom("?a")
_B = Atom("?b")
_C = Atom("?c")


@dataclass(frozen=True)
class Schema:
    index: int
    name: str
    metavars: tuple[str, ...]
    template: Statement


SCHEMAS: tuple[Schema, ...] = (
    Schema(0, "weakening", ("?a", "?b"), Implies(_A, Implies(_B, _A))),
    Schema(
        1,
        "distribution",
        ("?a", "?b", "?c"),
        Implies(
            Implies(_A, Implies(_B, _C)),
            Implies(Implies(_A, _B), Implies(_A, _C)),
        ),
    ),
    Schema(
        2,
        "contraposition",
        ("?a", "?b"),
        Implies(Implies(Not(_A), Not(_B)), Implies(_B, _A)),
    ),
    Schema(3, "and-elim-left", ("?a", "?b"), Implies(And(_A, _B), _A)),
    Schema(4, "and-elim-right", ("?a", "?b"), Implies(And(_A, _B), _B)),
    Schema(5, "and-intro", ("?a", "?b"), Implies(_A, Implies(_B, And(_A, _B)))),
    Schema(6, "or-intro-left", ("?a", "?b"), Implies(_A, Or(_A, _B))),
    Schema(7, "or-intro-right", ("?a", "?b"), Implies(_B, Or(_A, _B))),
    Schema(
        8,
        "or-elim",
        ("?a", "?b", "?c"),
        Implies(
            Implies(_A, _C),
            Implies(Implies(_B, _C), Implies(Or(_A, _B), _C)),
        ),
    ),
)


def substitute(template: Statement, bindings: dict[str, Statement]) -> Statement:
    if isinstance(template, Atom):
        return bindings.get(template.claim_id, template)
    if isinstance(template, Not):
        return Not(substitute(template.inner, bindings))
    ctor = type(template)
    return ctor(substitute(template.left, bindings), substitute(template.right, bindings))


# --- axioms and theories ------------------------------------------------------

class Justification:
    VERIFIED_IN_WORLD = "verified"
    POSTULATED = "postulated"


@dataclass(frozen=True)
class AxiomCandidate:
    statement: Statement
    justification: str = Justification.VERIFIED_IN_WORLD


@dataclass(frozen=True)
class AdmittedAxiom:
    statement: Statement
    justification: str


@dataclass(frozen=True)
class RejectedAxiom:
    statement: Statement
    justification: str
    reason: str


@dataclass(frozen=True)
class AxiomSet:
    admitted: tuple[AdmittedAxiom, ...]
    rejected: tuple[RejectedAxiom, ...] = ()


def admit_axioms(
    candidates: tuple[AxiomCandidate, ...],
    budget: ResourceVector,
    world: World,
    cost_params: CostParameters,
) -> AxiomSet:
    """Filter candidates down to those the budget can express and decide.

    Every candidate must fit the language bound and be decidable within the
    budget.  Truth in the world is additionally required of verified
    candidates; postulated ones are taken on the scenario author's word,
    which is exactly the hole negative-control scenarios poke at.
    """
    cap = max_length(budget, cost_params)
    admitted: list[AdmittedAxiom] = []
    rejected: list[RejectedAxiom] = []
    for cand in candidates:
        length = rendered_length(cand.statement)
        if cap is not None and length > cap:
            rejected.append(RejectedAxiom(cand.statement, cand.justification, "statement-too-long"))
            continue
        if not in_domain(cand.statement, budget, world):
            rejected.append(RejectedAxiom(cand.statement, cand.justification, "outside-domain"))
            continue
        if cand.justification == Justification.VERIFIED_IN_WORLD and not evaluate(
            cand.statement, world.ground_truth
        ):
            rejected.append(RejectedAxiom(cand.statement, cand.justification, "false-in-world"))
            continue
        admitted.append(AdmittedAxiom(cand.statement, cand.justification))
    return AxiomSet(tuple(admitted), tuple(rejected))


@dataclass(frozen=True, eq=False)
class Theory:
    budget: ResourceVector
    axioms: AxiomSet
    cost_params: CostParameters
    world: World
    candidates: tuple[AxiomCandidate, ...] = ()
    max_proof_steps: int = 4
    name: str = "T"
    _prove_cache: dict = field(default_factory=dict, repr=False)

    def length_cap(self) -> Optional[int]:
        return max_length(self.budget, self.cost_params)

    def render_expression(self, s: Statement) -> Expression:
        return Expression(render(s), self.world.alphabet)


def build_theory(
    budget: ResourceVector,
    candidates: tuple[AxiomCandidate, ...],
    world: World,
    cost_params: CostParameters,
    max_proof_steps: int = 4,
    name: str = "T",
) -> Theory:
    axioms = admit_axioms(candidates, budget, world, cost_params)
    return Theory(budget, axioms, cost_params, world, candidates, max_proof_steps, name)


# --- proof objects ------------------------------------------------------------

@dataclass(frozen=True)
class SchemaInstance:
    schema_index: int
    bindings: tuple[tuple[str, Statement], ...]


@dataclass(frozen=True)
class TheoryAxiom:
    axiom_index: int


@dataclass(frozen=True)
class ModusPonens:
    implication_step: int
    antecedent_step: int


StepJustification = Union[SchemaInstance, TheoryAxiom, ModusPonens]


@dataclass(frozen=True)
class ProofStep:
    statement: Statement
    justification: StepJustification
    cost: ResourceVector


@dataclass(frozen=True)
class Proof:
    steps: tuple[ProofStep, ...]
    cost: ResourceVector

    @property
    def conclusion(self) -> Statement:
        return self.steps[-1].statement


def check_proof(theory: Theory, proof: Proof) -> list[str]:
    """Independent validation: every justification re-derived, every cost
    recomputed.  Returns a list of problems; empty means the proof stands."""
    problems: list[str] = []
    cap = theory.length_cap()
    k = len(proof.steps)
    total = ResourceVector.zeros(len(theory.budget.components))
    admitted = theory.axioms.admitted
    for pos, step in enumerate(proof.steps):
        text = render(step.statement)
        if cap is not None and len(text) > cap:
            problems.append(f"step {pos}: formula exceeds language bound")
        just = step.justification
        if isinstance(just, TheoryAxiom):
            if not (0 <= just.axiom_index < len(admitted)):
                problems.append(f"step {pos}: axiom index out of range")
            elif admitted[just.axiom_index].statement != step.statement:
                problems.append(f"step {pos}: statement is not the cited axiom")
        elif isinstance(just, SchemaInstance):
            if not (0 <= just.schema_index < len(SCHEMAS)):
                problems.append(f"step {pos}: schema index out of range")
            else:
                schema = SCHEMAS[just.schema_index]
                bindings = dict(just.bindings)
                if set(bindings) != set(schema.metavars):
                    problems.append(f"step {pos}: bindings do not match schema metavariables")
                elif substitute(schema.template, bindings) != step.statement:
                    problems.append(f"step {pos}: statement is not the cited instance")
        elif isinstance(just, ModusPonens):
            i, j = just.implication_step, just.antecedent_step
            if not (0 <= i < pos and 0 <= j < pos):
                problems.append(f"step {pos}: modus ponens must cite earlier steps")
            else:
                expected = Implies(proof.steps[j].statement, step.statement)
                if proof.steps[i].statement != expected:
                    problems.append(f"step {pos}: cited steps do not fit modus ponens")
        else:
            problems.append(f"step {pos}: unknown justification {just!r}")
        expected_cost = expression_cost(
            Expression(text, theory.world.alphabet), k - 1 - pos, theory.cost_params
        )
        if step.cost != expected_cost:
            problems.append(f"step {pos}: cost mismatch")
        total = total.add(expected_cost)
    if proof.cost != total:
        problems.append("total cost mismatch")
    if not total.leq(theory.budget):
        problems.append("proof cost exceeds budget")
    return problems


# --- proof search -------------------------------------------------------------

_render_cache: dict[Statement, str] = {}


def _crender(s: Statement) -> str:
    text = _render_cache.get(s)
    if text is None:
        text = render(s)
        _render_cache[s] = text
    return text


_len_cache: dict[Statement, int] = {}


def _clen(s: Statement) -> int:
    n = _len_cache.get(s)
    if n is None:
        if isinstance(s, Atom):
            n = len(s.claim_id)
        elif isinstance(s, Not):
            n = 1 + _clen(s.inner)
        elif isinstance(s, Implies):
            n = 4 + _clen(s.left) + _clen(s.right)
        else:
            n = 3 + _clen(s.left) + _clen(s.right)
        _len_cache[s] = n
    return n


@dataclass(frozen=True, eq=False)
class _Derivation:
    statement: Statement
    kind: str  # "axiom" | "schema" | "mp"
    key: tuple  # (step count, total rendered length); renders only break ties
    axiom_index: int = -1
    schema_index: int = -1
    bindings: tuple[tuple[str, Statement], ...] = ()
    premises: tuple["_Derivation", ...] = ()
    nodes: frozenset[Statement] = frozenset()
    tie: Optional[tuple] = None


def _tie(d: _Derivation) -> tuple:
    if d.tie is None:
        object.__setattr__(d, "tie", tuple(sorted(_crender(n) for n in d.nodes)))
    return d.tie


# interning pool members keeps instance-cache keys and cached hashes warm
# across goals; equality stays structural everywhere
_pool_intern: dict[Statement, Statement] = {}


def _intern(s: Statement) -> Statement:
    got = _pool_intern.get(s)
    if got is None:
        _pool_intern[s] = s
        got = s
    return got


def _instantiation_pool(theory: Theory, goal: Statement, cap: Optional[int]) -> list[Statement]:
    seeds: set[Statement] = {goal}
    for ax in theory.axioms.admitted:
        seeds.add(ax.statement)
    subs: set[Statement] = set()
    for s in seeds:
        subs |= subformulas(s)
    closed = subs | {Not(s) for s in subs}
    pool = [_intern(s) for s in closed if cap is None or len(_crender(s)) <= cap]
    return sorted(pool, key=lambda s: (len(_crender(s)), _crender(s)))


def _schema_shape(template: Statement) -> tuple[int, dict[str, int]]:
    """Rendered length of an instance as const + sum(coeff_v * len(binding_v))."""
    if isinstance(template, Atom):
        if template.claim_id.startswith("?"):
            return 0, {template.claim_id: 1}
        return len(template.claim_id), {}
    if isinstance(template, Not):
        const, coeffs = _schema_shape(template.inner)
        return const + 1, coeffs
    overhead = 4 if isinstance(template, Implies) else 3
    c1, k1 = _schema_shape(template.left)
    c2, k2 = _schema_shape(template.right)
    merged = dict(k1)
    for var, count in k2.items():
        merged[var] = merged.get(var, 0) + count
    return overhead + c1 + c2, merged


_SCHEMA_SHAPES = [_schema_shape(schema.template) for schema in SCHEMAS]

# instances are pure syntax, so substitution results are shared globally
_instance_cache: dict[tuple[int, tuple[Statement, ...]], Statement] = {}


def _base_derivations(theory: Theory, pool: list[Statement], cap: Optional[int]) -> list[_Derivation]:
    out: list[_Derivation] = []
    seen: set[Statement] = set()
    for idx, ax in enumerate(theory.axioms.admitted):
        if ax.statement in seen:
            continue
        seen.add(ax.statement)
        out.append(
            _Derivation(
                ax.statement,
                "axiom",
                (1, _clen(ax.statement)),
                axiom_index=idx,
                nodes=frozenset({ax.statement}),
            )
        )
    pool_lens = [_clen(p) for p in pool]
    longest = max(pool_lens, default=0)
    cache = _instance_cache
    for schema in SCHEMAS:
        const, coeff_map = _SCHEMA_SHAPES[schema.index]
        coeffs = [coeff_map[v] for v in schema.metavars]
        arity = len(schema.metavars)
        worst = const + longest * sum(coeffs)
        if cap is not None and worst > cap:
            combos = (
                tuple(pool[i] for i in combo_idx)
                for combo_idx in itertools.product(range(len(pool)), repeat=arity)
                if const + sum(c * pool_lens[i] for c, i in zip(coeffs, combo_idx)) <= cap
            )
        else:
            combos = itertools.product(pool, repeat=arity)
        for combo in combos:
            cache_key = (schema.index,) + combo
            inst = cache.get(cache_key)
            if inst is None:
                inst = substitute(schema.template, dict(zip(schema.metavars, combo)))
                _len_cache[inst] = const + sum(
                    c * _clen(s) for c, s in zip(coeffs, combo)
                )
                cache[cache_key] = inst
            if inst in seen:
                continue
            seen.add(inst)
            out.append(
                _Derivation(
                    inst,
                    "schema",
                    (1, _clen(inst)),
                    schema_index=schema.index,
                    bindings=tuple(zip(schema.metavars, combo)),
                    nodes=frozenset({inst}),
                )
            )
    return out


def _saturate(base: list[_Derivation], max_steps: int) -> dict[Statement, _Derivation]:
    best: dict[Statement, _Derivation] = {}
    ante_index: dict[Statement, list[Statement]] = {}
    indexed: set[Statement] = set()
    queue: deque[Statement] = deque()

    def try_mp(f_stmt: Statement) -> None:
        fd = best.get(f_stmt)
        xd = best.get(f_stmt.left)
        if fd is None or xd is None:
            return
        right = f_stmt.right
        nodes = fd.nodes | xd.nodes | {right}
        count = len(nodes)
        if count > max_steps:
            return
        cur = best.get(right)
        key = (count, sum(_clen(n) for n in nodes))
        if cur is not None and cur.key < key:
            return
        cand = _Derivation(right, "mp", key, premises=(fd, xd), nodes=nodes)
        if cur is not None and cur.key == key and _tie(cur) <= _tie(cand):
            return
        best[right] = cand
        queue.append(right)

    for d in base:
        cur = best.get(d.statement)
        if cur is None or d.key < cur.key or (d.key == cur.key and _tie(d) < _tie(cur)):
            best[d.statement] = d
            queue.append(d.statement)
    while queue:
        stmt = queue.popleft()
        if isinstance(stmt, Implies):
            if stmt not in indexed:
                indexed.add(stmt)
                ante_index.setdefault(stmt.left, []).append(stmt)
            try_mp(stmt)
        for f_stmt in ante_index.get(stmt, ()):
            try_mp(f_stmt)
    return best


def _chosen_subdag(root: _Derivation) -> dict[Statement, _Derivation]:
    chosen: dict[Statement, _Derivation] = {}

    def walk(d: _Derivation) -> None:
        if d.statement in chosen:
            return
        chosen[d.statement] = d
        for p in d.premises:
            walk(p)

    walk(root)
    return chosen


def _topological_orders(
    chosen: dict[Statement, _Derivation], root: Statement, limit: int = 5040
):
    """All orderings with premises before conclusions and the goal last."""
    deps: dict[Statement, set[Statement]] = {}
    for stmt, d in chosen.items():
        deps[stmt] = {p.statement for p in d.premises}
    rest = sorted((s for s in chosen if s != root), key=statement_sort_key)
    produced = 0

    def extend(placed: list[Statement], remaining: list[Statement]):
        nonlocal produced
        if produced >= limit:
            return
        if not remaining:
            produced += 1
            yield placed + [root]
            return
        placed_set = set(placed)
        for i, stmt in enumerate(remaining):
            if deps[stmt] <= placed_set:
                yield from extend(placed + [stmt], remaining[:i] + remaining[i + 1 :])

    yield from extend([], rest)


def _order_cost(
    order: list[Statement], theory: Theory
) -> tuple[ResourceVector, list[ResourceVector]]:
    k = len(order)
    per_step = []
    total = ResourceVector.zeros(len(theory.budget.components))
    for pos, stmt in enumerate(order):
        cost = expression_cost(theory.render_expression(stmt), k - 1 - pos, theory.cost_params)
        per_step.append(cost)
        total = total.add(cost)
    return total, per_step


def _linearize(theory: Theory, root: _Derivation) -> Optional[Proof]:
    chosen = _chosen_subdag(root)
    candidates: list[tuple[tuple, list[Statement], list[ResourceVector], ResourceVector]] = []
    for order in _topological_orders(chosen, root.statement):
        total, per_step = _order_cost(order, theory)
        if not total.leq(theory.budget):
            continue
        key = (total.sort_key(), tuple(render(s) for s in order))
        candidates.append((key, order, per_step, total))
    if not candidates:
        return None
    candidates.sort(key=lambda item: item[0])
    _, order, per_step, total = candidates[0]
    index = {stmt: pos for pos, stmt in enumerate(order)}
    steps = []
    for pos, stmt in enumerate(order):
        d = chosen[stmt]
        if d.kind == "axiom":
            just: StepJustification = TheoryAxiom(d.axiom_index)
        elif d.kind == "schema":
            just = SchemaInstance(d.schema_index, d.bindings)
        else:
            just = ModusPonens(index[d.premises[0].statement], index[d.premises[1].statement])
        steps.append(ProofStep(stmt, just, per_step[pos]))
    proof = Proof(tuple(steps), total)
    problems = check_proof(theory, proof)
    if problems:
        raise AssertionError("internal proof checker rejected a found proof: " + "; ".join(problems))
    return proof


def _entailed(axiom_statements: list[Statement], goal: Statement) -> bool:
    """Classical entailment over the mentioned atoms.  The schemas are all
    tautologies and modus ponens preserves truth, so anything not entailed is
    unprovable; this prunes hopeless searches exactly."""
    names = sorted(atoms_of(goal).union(*(atoms_of(a) for a in axiom_statements)))
    for bits in itertools.product((False, True), repeat=len(names)):
        valuation = dict(zip(names, bits))
        if all(evaluate(a, valuation) for a in axiom_statements) and not evaluate(
            goal, valuation
        ):
            return False
    return True


def prove(theory: Theory, goal: Statement, max_steps: Optional[int] = None) -> Optional[Proof]:
    """A cheapest found proof of ``goal`` within the budget, or None."""
    cap = theory.length_cap()
    if cap is not None and rendered_length(goal) > cap:
        raise StatementTooLong(render(goal))
    steps = theory.max_proof_steps if max_steps is None else max_steps
    key = (render(goal), steps)
    if key in theory._prove_cache:
        return theory._prove_cache[key]
    proof = None
    if _entailed([a.statement for a in theory.axioms.admitted], goal):
        pool = _instantiation_pool(theory, goal, cap)
        base = _base_derivations(theory, pool, cap)
        best = _saturate(base, steps)
        root = best.get(goal)
        proof = _linearize(theory, root) if root is not None else None
    theory._prove_cache[key] = proof
    return proof


def is_theorem(theory: Theory, goal: Statement, max_steps: Optional[int] = None) -> bool:
    return prove(theory, goal, max_steps) is not None


def theorems_up_to(
    theory: Theory, size_bound: int, max_steps: Optional[int] = None
) -> list[Statement]:
    """All theorems among statements of rendered length <= the bound (and
    within the language bound), in canonical order."""
    cap = theory.length_cap()
    bound = size_bound if cap is None else min(size_bound, cap)
    found = [
        s
        for s in enumerate_statements(theory.world.atoms(), bound)
        if is_theorem(theory, s, max_steps)
    ]
    return sorted(found, key=statement_sort_key)


@dataclass(frozen=True)
class SoundnessReport:
    checked: int
    theorems: tuple[Statement, ...]
    violations: tuple[Statement, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def soundness_check(
    theory: Theory, size_bound: int = 7, max_steps: Optional[int] = None
) -> SoundnessReport:
    """Every enumerated theorem must be true under the world's ground truth."""
    theorems = theorems_up_to(theory, size_bound, max_steps)
    violations = tuple(
        s for s in theorems if not evaluate(s, theory.world.ground_truth)
    )
    return SoundnessReport(len(theorems), tuple(theorems), violations)
