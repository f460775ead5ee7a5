"""Procedures, equipment, purposes, and the implementation operation.

A world is the metatheory's ground truth: what each atomic claim's truth value
is, and what every procedure and piece of equipment is actually for.  Spending
is tracked by a ledger that charges equipment construction at most once, so
conjunctions of verifications that share equipment cost less than the sum of
their standalone costs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

from .errors import (
    InsufficientResources,
    UnknownEquipment,
    UnknownProcedure,
    UnknownSubject,
)
from .expressions import Alphabet, Expression
from .resources import ResourceVector


# --- purposes -------------------------------------------------------------

@dataclass(frozen=True)
class MeasureProperty:
    property_name: str
    n_figures: int

    def __post_init__(self):
        if self.n_figures < 1:
            raise ValueError("n_figures must be >= 1")


@dataclass(frozen=True)
class ComputePrediction:
    property_name: str
    n_figures: int

    def __post_init__(self):
        if self.n_figures < 1:
            raise ValueError("n_figures must be >= 1")


@dataclass(frozen=True)
class MeasureSpaceTime:
    n_figures: int

    def __post_init__(self):
        if self.n_figures < 1:
            raise ValueError("n_figures must be >= 1")


@dataclass(frozen=True)
class DetermineTruth:
    statement_id: str


@dataclass(frozen=True)
class NoPurpose:
    pass


@dataclass(frozen=True)
class Opaque:
    text: str


Purpose = Union[MeasureProperty, ComputePrediction, MeasureSpaceTime,
                DetermineTruth, NoPurpose, Opaque]


@dataclass(frozen=True)
class Location:
    """A (d+1)-tuple of n-figure coordinate strings."""

    coords: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))

    def is_valid(self, numerals: str = "01", n_figures: Optional[int] = None) -> bool:
        for c in self.coords:
            if not c or any(ch not in numerals for ch in c):
                return False
            if n_figures is not None and len(c) != n_figures:
                return False
        return True


@dataclass(frozen=True)
class Equipment:
    id: str
    construction_cost: ResourceVector
    purpose: Purpose = NoPurpose()


OutputFn = Callable[["World", Location], str]


@dataclass(frozen=True)
class Procedure:
    id: str
    equipment_used: frozenset[str]
    instructions: Expression
    implementation_cost: ResourceVector
    declared_purpose: Purpose
    output_fn: OutputFn

    def __post_init__(self):
        object.__setattr__(self, "equipment_used", frozenset(self.equipment_used))


@dataclass(frozen=True)
class World:
    """Immutable after construction; ledgers carry all mutable spend state."""

    dimension: int
    alphabet: Alphabet
    equipment: dict[str, Equipment]
    procedures: dict[str, Procedure]
    ground_truth: dict[str, bool]
    true_purposes: dict[str, Purpose]
    verifier_of: tuple[tuple[str, str], ...] = ()

    def procedure(self, proc_id: str) -> Procedure:
        try:
            return self.procedures[proc_id]
        except KeyError:
            raise UnknownProcedure(proc_id) from None

    def equipment_item(self, eq_id: str) -> Equipment:
        try:
            return self.equipment[eq_id]
        except KeyError:
            raise UnknownEquipment(eq_id) from None

    def true_purpose(self, subject_id: str) -> Purpose:
        if subject_id not in self.procedures and subject_id not in self.equipment:
            raise UnknownSubject(subject_id)
        return self.true_purposes.get(subject_id, NoPurpose())

    def atoms(self) -> list[str]:
        return sorted(self.ground_truth)

    def verifiers_for(self, atom_id: str) -> list[str]:
        """Procedure ids whose actual purpose is deciding this atom."""
        return sorted(
            pid
            for pid, proc in self.procedures.items()
            if self.true_purposes.get(pid) == DetermineTruth(atom_id)
        )

    def default_location(self) -> Location:
        return Location(("0",) * (self.dimension + 1))

    def extended(
        self,
        equipment: Sequence[Equipment] = (),
        procedures: Sequence[Procedure] = (),
        ground_truth: Optional[dict[str, bool]] = None,
        true_purposes: Optional[dict[str, Purpose]] = None,
    ) -> "World":
        """A copy with extra registry entries (reflection grows worlds this way)."""
        eq = dict(self.equipment)
        for e in equipment:
            eq[e.id] = e
        procs = dict(self.procedures)
        for p in procedures:
            procs[p.id] = p
        gt = dict(self.ground_truth)
        gt.update(ground_truth or {})
        tp = dict(self.true_purposes)
        tp.update(true_purposes or {})
        return World(self.dimension, self.alphabet, eq, procs, gt, tp, self.verifier_of)


def verifier_relation_is_acyclic(edges: Sequence[tuple[str, str]]) -> bool:
    graph: dict[str, list[str]] = {}
    for a, b in edges:
        graph.setdefault(a, []).append(b)
    WHITE, GRAY, BLACK = 0, 1, 2
    color: dict[str, int] = {}

    def visit(node: str) -> bool:
        color[node] = GRAY
        for succ in graph.get(node, ()):
            state = color.get(succ, WHITE)
            if state == GRAY:
                return False
            if state == WHITE and not visit(succ):
                return False
        color[node] = BLACK
        return True

    return all(visit(n) for n in list(graph) if color.get(n, WHITE) == WHITE)


# --- spending -------------------------------------------------------------

@dataclass
class SpendLedger:
    """Single-owner record of resources spent against one world.

    ``cap`` bounds total spend when present; equipment construction is charged
    the first time any procedure using it is costed, and never again.
    """

    world: World
    cap: Optional[ResourceVector] = None
    spent: ResourceVector = None  # type: ignore[assignment]
    built: set[str] = field(default_factory=set)
    log: list[tuple[str, ResourceVector]] = field(default_factory=list)

    def __post_init__(self):
        if self.spent is None:
            n = 2 * self.world.dimension + 2
            self.spent = ResourceVector.zeros(n)

    def remaining(self) -> Optional[ResourceVector]:
        if self.cap is None:
            return None
        return self.cap.sub_saturating(self.spent)

    def can_spend(self, cost: ResourceVector) -> bool:
        if self.cap is None:
            return True
        return self.spent.add(cost).leq(self.cap)

    def preview_cost(
        self, procedures: Sequence[Procedure], prebuilt: frozenset[str] = frozenset()
    ) -> tuple[ResourceVector, set[str]]:
        """Cost of implementing each procedure once, constructing any equipment
        not already built.  No state change."""
        total = ResourceVector.zeros(len(self.spent.components))
        fresh: set[str] = set()
        for proc in procedures:
            total = total.add(proc.implementation_cost)
            for eq_id in sorted(proc.equipment_used):
                if eq_id in self.built or eq_id in prebuilt or eq_id in fresh:
                    continue
                total = total.add(self.world.equipment_item(eq_id).construction_cost)
                fresh.add(eq_id)
        return total, fresh

    def commit(self, cost: ResourceVector, fresh: set[str], label: str) -> None:
        if not self.can_spend(cost):
            raise InsufficientResources(label)
        self.spent = self.spent.add(cost)
        self.built |= fresh
        self.log.append((label, cost))

    def charge(self, procedures: Sequence[Procedure], label: str) -> ResourceVector:
        """Atomically cost and commit; InsufficientResources leaves no trace."""
        cost, fresh = self.preview_cost(procedures)
        if not self.can_spend(cost):
            raise InsufficientResources(label)
        self.commit(cost, fresh, label)
        return cost

    def snapshot(self) -> tuple[ResourceVector, frozenset[str]]:
        return self.spent, frozenset(self.built)


def procedure_cost(proc: Procedure, ledger: SpendLedger) -> ResourceVector:
    """Implementation cost plus construction of not-yet-built equipment; the
    equipment is marked built so repeat calls charge implementation only."""
    cost, fresh = ledger.preview_cost([proc])
    ledger.built |= fresh
    return cost


def implement(
    proc: Procedure,
    spacetime_proc: Procedure,
    location: Location,
    world: World,
    ledger: SpendLedger,
) -> Expression:
    """Actually carry out ``proc`` at ``location`` (as fixed by the space-time
    procedure), debiting the ledger; returns the output symbol string."""
    if proc.id not in world.procedures:
        raise UnknownProcedure(proc.id)
    if spacetime_proc.id not in world.procedures:
        raise UnknownProcedure(spacetime_proc.id)
    if not isinstance(spacetime_proc.declared_purpose, MeasureSpaceTime):
        raise UnknownProcedure(
            f"{spacetime_proc.id} is not declared as a space-time measurement"
        )
    ledger.charge([proc, spacetime_proc], f"implement:{proc.id}@{','.join(location.coords)}")
    return Expression(proc.output_fn(world, location), world.alphabet)


def purpose_holds(subject: Union[Procedure, Equipment, str], purpose: Purpose, world: World) -> bool:
    """Whether the subject's actual purpose in this world is ``purpose``."""
    subject_id = subject if isinstance(subject, str) else subject.id
    return world.true_purpose(subject_id) == purpose


def equipment_working(proc: Procedure, world: World) -> bool:
    """All equipment used by the procedure has its declared purpose in truth."""
    return all(
        purpose_holds(eq_id, world.equipment_item(eq_id).purpose, world)
        for eq_id in sorted(proc.equipment_used)
    )


def agreement(
    p_ex: Procedure,
    p_th: Procedure,
    p_st: Procedure,
    x_ex: Location,
    x_th: Location,
    world: World,
    ledger: SpendLedger,
) -> bool:
    """Outputs of the experiment and the theoretical computation coincide."""
    out_ex = implement(p_ex, p_st, x_ex, world, ledger)
    out_th = implement(p_th, p_st, x_th, world, ledger)
    return out_ex.text == out_th.text


def pur(p_ex: Procedure, p_st: Procedure, p_th: Procedure, world: World) -> bool:
    """All three procedures actually have their declared purposes."""
    return (
        purpose_holds(p_ex, p_ex.declared_purpose, world)
        and purpose_holds(p_st, p_st.declared_purpose, world)
        and purpose_holds(p_th, p_th.declared_purpose, world)
    )


def theory_experiment_test(
    p_ex: Procedure,
    p_th: Procedure,
    p_st: Procedure,
    x_ex: Location,
    x_th: Location,
    world: World,
    ledger: SpendLedger,
) -> bool:
    """Output agreement alone is necessary but not sufficient; the purposes
    must hold as well."""
    ag = agreement(p_ex, p_th, p_st, x_ex, x_th, world, ledger)
    return ag and pur(p_ex, p_st, p_th, world)


# --- output function helpers (scenario tables compile to these) ------------

def constant_output(text: str) -> OutputFn:
    def fn(world: World, location: Location) -> str:
        return text

    return fn


def truth_output(atom_id: str, when_true: str = "1", when_false: str = "0") -> OutputFn:
    def fn(world: World, location: Location) -> str:
        return when_true if world.ground_truth.get(atom_id, False) else when_false

    return fn
