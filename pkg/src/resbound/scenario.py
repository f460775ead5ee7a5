"""Scenario files: one JSON document drives every command.

Schema (``schema_version: 1``), all resource vectors as arrays of 2d+2
decimal-rational strings:

    {
      "schema_version": 1,
      "dimension": 1,
      "alphabet": "AB()!&|->_0123456789",
      "cost_model": {"delta": [...], "delta_e": "1/100",
                     "overhead_base": [...], "overhead_slope": [...]},
      "world": {
        "ground_truth": {"A": true, ...},
        "direct_atoms": ["E"],                  # zero-cost deciders, auto-built
        "string_claims": [{"atom": "B01", "claim": "concat(01,1) == 011",
                           "cost": [...]}],     # truth computed, decider auto-built
        "equipment": [{"id", "construction_cost", "purpose"}],
        "procedures": [{"id", "equipment", "instructions",
                        "implementation_cost", "declared_purpose",
                        "output": {"constant": s} | {"atom": a, "when_true", "when_false"}}],
        "true_purposes": {id: purpose, ...},
        "verifier_of": [[verifier_id, verified_id], ...]
      },
      "axioms": [{"statement": text, "justification": "verified"|"postulated"}],
      "budget": [...], "domain_budget": [...],
      "grid": [[...], ...],
      "statements": [text, ...], "prove": [text, ...],
      "observers": [{"name", "cap": [...]|null,
                     "actions": [{"verify": text, "strategy": {atom: proc}} |
                                 {"implement": proc, "at": [coords], "spacetime": proc}]}],
      "reflection": {"target": text, "stages": n, "budget_step": [...]},
      "search": {"max_steps": n, "size_bound": n}
    }

Purposes: {"kind": "measure_property"|"compute_prediction", "property", "figures"},
{"kind": "measure_spacetime", "figures"}, {"kind": "determine_truth", "statement"},
{"kind": "none"}, {"kind": "opaque", "text"}.

Validation reports every problem found, each anchored to its section path.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Union

from .errors import ScenarioError, StatementSyntaxError
from .expressions import Alphabet, CostParameters, Expression
from .stringterms import claim_truth
from .observer import Action, ImplementProcedure, ObserverScript, VerifyStatement
from .resources import ResourceVector
from .statements import Statement, atoms_of, parse, render
from .theory import AxiomCandidate, Justification, Theory, build_theory
from .lattice import TheoryGrid
from .world import (
    ComputePrediction,
    DetermineTruth,
    Equipment,
    Location,
    MeasureProperty,
    MeasureSpaceTime,
    NoPurpose,
    Opaque,
    Procedure,
    Purpose,
    World,
    constant_output,
    truth_output,
    verifier_relation_is_acyclic,
)

_ATOM_RE = re.compile(r"[A-Za-z0-9_]+\Z")


@dataclass(frozen=True)
class SearchLimits:
    max_steps: int = 4
    size_bound: int = 7


@dataclass(frozen=True)
class ReflectionConfig:
    target: Statement
    stages: int
    budget_step: ResourceVector


@dataclass(frozen=True, eq=False)
class Scenario:
    schema_version: int
    dimension: int
    alphabet: Alphabet
    cost_model: CostParameters
    world: World
    axiom_candidates: tuple[AxiomCandidate, ...]
    budget: ResourceVector
    domain_budget: ResourceVector
    grid: tuple[ResourceVector, ...]
    statements: tuple[Statement, ...]
    prove_targets: tuple[Statement, ...]
    observers: tuple[ObserverScript, ...]
    reflection: Optional[ReflectionConfig]
    search: SearchLimits

    def base_theory(self, max_steps: Optional[int] = None) -> Theory:
        steps = max_steps if max_steps is not None else self.search.max_steps
        return build_theory(
            self.budget, self.axiom_candidates, self.world, self.cost_model, steps
        )

    def theory_grid(self, max_steps: Optional[int] = None) -> TheoryGrid:
        steps = max_steps if max_steps is not None else self.search.max_steps
        return TheoryGrid.build(
            self.grid, self.axiom_candidates, self.world, self.cost_model, steps
        )


class _Problems:
    def __init__(self):
        self.items: list[str] = []

    def add(self, path: str, message: str) -> None:
        self.items.append(f"{path}: {message}")

    def __bool__(self) -> bool:
        return bool(self.items)


def _parse_vector(raw: Any, n: int, path: str, problems: _Problems) -> Optional[ResourceVector]:
    if not isinstance(raw, list):
        problems.add(path, "expected an array of rational strings")
        return None
    if len(raw) != n:
        problems.add(path, f"expected {n} components, got {len(raw)}")
        return None
    values = []
    for i, item in enumerate(raw):
        try:
            values.append(Fraction(str(item)))
        except (ValueError, ZeroDivisionError):
            problems.add(f"{path}[{i}]", f"not a rational: {item!r}")
            return None
    if any(v < 0 for v in values):
        problems.add(path, "components must be nonnegative")
        return None
    return ResourceVector(tuple(values))


def _parse_purpose(raw: Any, path: str, problems: _Problems) -> Purpose:
    if not isinstance(raw, dict) or "kind" not in raw:
        problems.add(path, "purpose must be an object with a 'kind'")
        return NoPurpose()
    kind = raw.get("kind")
    try:
        if kind == "measure_property":
            return MeasureProperty(str(raw["property"]), int(raw["figures"]))
        if kind == "compute_prediction":
            return ComputePrediction(str(raw["property"]), int(raw["figures"]))
        if kind == "measure_spacetime":
            return MeasureSpaceTime(int(raw["figures"]))
        if kind == "determine_truth":
            return DetermineTruth(str(raw["statement"]))
        if kind == "none":
            return NoPurpose()
        if kind == "opaque":
            return Opaque(str(raw.get("text", "")))
    except (KeyError, ValueError) as exc:
        problems.add(path, f"bad purpose fields: {exc}")
        return NoPurpose()
    problems.add(path, f"unknown purpose kind {kind!r}")
    return NoPurpose()


def _parse_statement(
    text: Any, alphabet: Alphabet, atoms: set[str], path: str, problems: _Problems
) -> Optional[Statement]:
    if not isinstance(text, str):
        problems.add(path, "statement must be a string")
        return None
    try:
        stmt = parse(text)
    except StatementSyntaxError as exc:
        problems.add(path, f"parse error: {exc}")
        return None
    for ch in render(stmt):
        if ch not in alphabet:
            problems.add(path, f"rendered character {ch!r} not in alphabet")
            return None
    dangling = sorted(atoms_of(stmt) - atoms)
    if dangling:
        problems.add(path, f"unknown atoms: {', '.join(dangling)}")
        return None
    return stmt


def loads(text: str) -> Scenario:
    problems = _Problems()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError([f"line {exc.lineno}, column {exc.colno}: {exc.msg}"]) from None
    if not isinstance(doc, dict):
        raise ScenarioError(["top level: expected an object"])

    version = doc.get("schema_version")
    if version != 1:
        problems.add("schema_version", f"unsupported version {version!r} (expected 1)")

    dimension = doc.get("dimension", 1)
    if not isinstance(dimension, int) or dimension < 0:
        problems.add("dimension", "must be a nonnegative integer")
        dimension = 1
    n = 2 * dimension + 2

    alpha_raw = doc.get("alphabet", "")
    alphabet = None
    if not isinstance(alpha_raw, str) or len(alpha_raw) < 2:
        problems.add("alphabet", "must be a string of at least 2 symbols")
    else:
        try:
            alphabet = Alphabet.from_string(alpha_raw)
        except ValueError as exc:
            problems.add("alphabet", str(exc))
    if alphabet is None:
        raise ScenarioError(problems.items)

    cm_raw = doc.get("cost_model", {})
    zeros = ["0"] * n
    delta = _parse_vector(cm_raw.get("delta", ["1"] * n), n, "cost_model.delta", problems)
    base = _parse_vector(cm_raw.get("overhead_base", zeros), n, "cost_model.overhead_base", problems)
    slope = _parse_vector(
        cm_raw.get("overhead_slope", zeros), n, "cost_model.overhead_slope", problems
    )
    try:
        delta_e = Fraction(str(cm_raw.get("delta_e", "0")))
        if delta_e < 0:
            problems.add("cost_model.delta_e", "must be nonnegative")
            delta_e = Fraction(0)
    except (ValueError, ZeroDivisionError):
        problems.add("cost_model.delta_e", "not a rational")
        delta_e = Fraction(0)
    cost_model = None
    if delta and base and slope:
        cost_model = CostParameters(delta, delta_e, base, slope)

    # --- world ---
    w_raw = doc.get("world", {})
    if not isinstance(w_raw, dict):
        problems.add("world", "expected an object")
        w_raw = {}
    gt_raw = w_raw.get("ground_truth", {})
    ground_truth: dict[str, bool] = {}
    if not isinstance(gt_raw, dict):
        problems.add("world.ground_truth", "expected an object")
    else:
        for name, value in gt_raw.items():
            if not _ATOM_RE.match(name):
                problems.add("world.ground_truth", f"bad atom name {name!r}")
                continue
            if not isinstance(value, bool):
                problems.add(f"world.ground_truth.{name}", "truth value must be boolean")
                continue
            ground_truth[name] = value
    atoms = set(ground_truth)

    equipment: dict[str, Equipment] = {}
    for i, eq_raw in enumerate(w_raw.get("equipment", []) or []):
        path = f"world.equipment[{i}]"
        eq_id = eq_raw.get("id")
        if not isinstance(eq_id, str) or not eq_id:
            problems.add(path, "missing id")
            continue
        if eq_id in equipment:
            problems.add(path, f"duplicate equipment id {eq_id!r}")
            continue
        cost = _parse_vector(
            eq_raw.get("construction_cost", zeros), n, f"{path}.construction_cost", problems
        )
        purpose = _parse_purpose(
            eq_raw.get("purpose", {"kind": "none"}), f"{path}.purpose", problems
        )
        if cost is not None:
            equipment[eq_id] = Equipment(eq_id, cost, purpose)

    procedures: dict[str, Procedure] = {}
    true_purposes: dict[str, Purpose] = {}
    for i, p_raw in enumerate(w_raw.get("procedures", []) or []):
        path = f"world.procedures[{i}]"
        p_id = p_raw.get("id")
        if not isinstance(p_id, str) or not p_id:
            problems.add(path, "missing id")
            continue
        if p_id in procedures or p_id in equipment:
            problems.add(path, f"duplicate id {p_id!r}")
            continue
        eq_used = p_raw.get("equipment", []) or []
        for eq_id in eq_used:
            if eq_id not in equipment:
                problems.add(f"{path}.equipment", f"unknown equipment id {eq_id!r}")
        impl = _parse_vector(
            p_raw.get("implementation_cost", zeros), n, f"{path}.implementation_cost", problems
        )
        declared = _parse_purpose(
            p_raw.get("declared_purpose", {"kind": "none"}), f"{path}.declared_purpose", problems
        )
        instructions_text = p_raw.get("instructions", "")
        try:
            instructions = Expression(str(instructions_text), alphabet)
        except ValueError as exc:
            problems.add(f"{path}.instructions", str(exc))
            instructions = Expression("", alphabet)
        out_raw = p_raw.get("output", {})
        if "constant" in out_raw:
            text_out = str(out_raw["constant"])
            bad = [ch for ch in text_out if ch not in alphabet]
            if bad:
                problems.add(f"{path}.output", f"characters {bad!r} not in alphabet")
            output_fn = constant_output(text_out)
        elif "atom" in out_raw:
            atom_ref = str(out_raw["atom"])
            if atom_ref not in atoms:
                problems.add(f"{path}.output", f"unknown atom {atom_ref!r}")
            output_fn = truth_output(
                atom_ref,
                str(out_raw.get("when_true", "1")),
                str(out_raw.get("when_false", "0")),
            )
        else:
            problems.add(f"{path}.output", "output needs 'constant' or 'atom'")
            output_fn = constant_output("")
        if impl is not None:
            procedures[p_id] = Procedure(
                p_id, frozenset(eq_used), instructions, impl, declared, output_fn
            )

    for i, atom in enumerate(w_raw.get("direct_atoms", []) or []):
        path = f"world.direct_atoms[{i}]"
        if atom not in atoms:
            problems.add(path, f"unknown atom {atom!r}")
            continue
        p_id = f"direct_{atom}"
        if p_id in procedures:
            problems.add(path, f"procedure id {p_id!r} already taken")
            continue
        procedures[p_id] = Procedure(
            p_id,
            frozenset(),
            Expression("", alphabet),
            ResourceVector.zeros(n),
            DetermineTruth(atom),
            truth_output(atom),
        )
        true_purposes[p_id] = DetermineTruth(atom)

    for i, claim_raw in enumerate(w_raw.get("string_claims", []) or []):
        path = f"world.string_claims[{i}]"
        atom = claim_raw.get("atom")
        if not isinstance(atom, str) or not _ATOM_RE.match(atom):
            problems.add(path, f"bad claim atom name {atom!r}")
            continue
        if atom in ground_truth:
            problems.add(path, f"atom {atom!r} already declared in ground_truth")
            continue
        if any(ch not in alphabet for ch in atom):
            problems.add(path, f"atom {atom!r} has characters outside the alphabet")
            continue
        try:
            truth = claim_truth(str(claim_raw.get("claim", "")), alphabet)
        except StatementSyntaxError as exc:
            problems.add(path, f"bad claim: {exc}")
            continue
        cost = _parse_vector(
            claim_raw.get("cost", zeros), n, f"{path}.cost", problems
        )
        p_id = f"eval_{atom}"
        if p_id in procedures or cost is None:
            if p_id in procedures:
                problems.add(path, f"procedure id {p_id!r} already taken")
            continue
        ground_truth[atom] = truth
        atoms.add(atom)
        procedures[p_id] = Procedure(
            p_id,
            frozenset(),
            Expression("", alphabet),
            cost,
            DetermineTruth(atom),
            truth_output(atom),
        )
        true_purposes[p_id] = DetermineTruth(atom)

    tp_raw = w_raw.get("true_purposes", {}) or {}
    for subject, purpose_raw in tp_raw.items():
        path = f"world.true_purposes.{subject}"
        if subject not in procedures and subject not in equipment:
            problems.add(path, f"unknown subject {subject!r}")
            continue
        purpose = _parse_purpose(purpose_raw, path, problems)
        if isinstance(purpose, DetermineTruth) and purpose.statement_id not in atoms:
            problems.add(path, f"determine_truth target {purpose.statement_id!r} not in ground truth")
            continue
        true_purposes[subject] = purpose

    verifier_edges = []
    for i, pair in enumerate(w_raw.get("verifier_of", []) or []):
        path = f"world.verifier_of[{i}]"
        if not (isinstance(pair, list) and len(pair) == 2):
            problems.add(path, "expected [verifier, verified] pair")
            continue
        a, b = pair
        for side in (a, b):
            if side not in procedures and side not in equipment:
                problems.add(path, f"unknown id {side!r}")
        verifier_edges.append((str(a), str(b)))
    if verifier_edges and not verifier_relation_is_acyclic(verifier_edges):
        problems.add("world.verifier_of", "verifier relation must be acyclic")

    world = World(
        dimension=dimension,
        alphabet=alphabet,
        equipment=equipment,
        procedures=procedures,
        ground_truth=ground_truth,
        true_purposes=true_purposes,
        verifier_of=tuple(verifier_edges),
    )

    # --- budgets, axioms, targets ---
    budget = _parse_vector(doc.get("budget", ["0"] * n), n, "budget", problems)
    domain_budget = budget
    if "domain_budget" in doc:
        domain_budget = _parse_vector(doc["domain_budget"], n, "domain_budget", problems)

    candidates: list[AxiomCandidate] = []
    for i, ax_raw in enumerate(doc.get("axioms", []) or []):
        path = f"axioms[{i}]"
        stmt = _parse_statement(ax_raw.get("statement"), alphabet, atoms, path, problems)
        just = ax_raw.get("justification", "verified")
        if just not in (Justification.VERIFIED_IN_WORLD, Justification.POSTULATED):
            problems.add(path, f"unknown justification {just!r}")
            continue
        if stmt is not None:
            candidates.append(AxiomCandidate(stmt, just))

    grid = []
    for i, point in enumerate(doc.get("grid", []) or []):
        v = _parse_vector(point, n, f"grid[{i}]", problems)
        if v is not None:
            grid.append(v)

    statements = []
    for i, text_raw in enumerate(doc.get("statements", []) or []):
        stmt = _parse_statement(text_raw, alphabet, atoms, f"statements[{i}]", problems)
        if stmt is not None:
            statements.append(stmt)
    prove_targets = []
    for i, text_raw in enumerate(doc.get("prove", []) or []):
        stmt = _parse_statement(text_raw, alphabet, atoms, f"prove[{i}]", problems)
        if stmt is not None:
            prove_targets.append(stmt)

    observers = []
    seen_names = set()
    for i, ob_raw in enumerate(doc.get("observers", []) or []):
        path = f"observers[{i}]"
        name = ob_raw.get("name", f"observer{i}")
        if name in seen_names:
            problems.add(path, f"duplicate observer name {name!r}")
            continue
        seen_names.add(name)
        cap = None
        if ob_raw.get("cap") is not None:
            cap = _parse_vector(ob_raw["cap"], n, f"{path}.cap", problems)
        actions: list[Action] = []
        for j, act_raw in enumerate(ob_raw.get("actions", []) or []):
            a_path = f"{path}.actions[{j}]"
            if "verify" in act_raw:
                stmt = _parse_statement(act_raw["verify"], alphabet, atoms, a_path, problems)
                hint = None
                if "strategy" in act_raw:
                    pairs = []
                    for atom_id, proc_id in sorted(act_raw["strategy"].items()):
                        if proc_id not in procedures:
                            problems.add(a_path, f"unknown procedure {proc_id!r} in strategy")
                        pairs.append((str(atom_id), str(proc_id)))
                    hint = tuple(pairs)
                if stmt is not None:
                    actions.append(VerifyStatement(stmt, hint))
            elif "implement" in act_raw:
                proc_id = act_raw["implement"]
                if proc_id not in procedures:
                    problems.add(a_path, f"unknown procedure {proc_id!r}")
                coords = act_raw.get("at", ["0"] * (dimension + 1))
                st_id = act_raw.get("spacetime")
                if st_id is not None and st_id not in procedures:
                    problems.add(a_path, f"unknown space-time procedure {st_id!r}")
                actions.append(
                    ImplementProcedure(str(proc_id), Location(tuple(str(c) for c in coords)), st_id)
                )
            else:
                problems.add(a_path, "action needs 'verify' or 'implement'")
        observers.append(ObserverScript(str(name), tuple(actions), cap))

    reflection = None
    if doc.get("reflection"):
        r_raw = doc["reflection"]
        target = _parse_statement(r_raw.get("target"), alphabet, atoms, "reflection.target", problems)
        stages = r_raw.get("stages", 1)
        if not isinstance(stages, int) or stages < 1:
            problems.add("reflection.stages", "must be a positive integer")
            stages = 1
        step_vec = _parse_vector(
            r_raw.get("budget_step", ["0"] * n), n, "reflection.budget_step", problems
        )
        if target is not None and step_vec is not None:
            reflection = ReflectionConfig(target, stages, step_vec)

    s_raw = doc.get("search", {}) or {}
    max_steps = s_raw.get("max_steps", 4)
    size_bound = s_raw.get("size_bound", 7)
    if not isinstance(max_steps, int) or max_steps < 1:
        problems.add("search.max_steps", "must be a positive integer")
        max_steps = 4
    if not isinstance(size_bound, int) or size_bound < 1:
        problems.add("search.size_bound", "must be a positive integer")
        size_bound = 7
    search = SearchLimits(max_steps, size_bound)

    if problems or budget is None or cost_model is None:
        if not problems:
            problems.add("budget", "missing")
        raise ScenarioError(problems.items)

    return Scenario(
        schema_version=1,
        dimension=dimension,
        alphabet=alphabet,
        cost_model=cost_model,
        world=world,
        axiom_candidates=tuple(candidates),
        budget=budget,
        domain_budget=domain_budget if domain_budget is not None else budget,
        grid=tuple(grid),
        statements=tuple(statements),
        prove_targets=tuple(prove_targets),
        observers=tuple(observers),
        reflection=reflection,
        search=search,
    )


def load(path: Union[str, Path]) -> Scenario:
    return loads(Path(path).read_text())
