"""Resource-bounded deduction engine.

Theories, domains and languages limited by exact-rational budget vectors:
what can be expressed, verified and proved under a given amount of space,
time, momentum and energy, how those theories order into a lattice, and how
observers spend their way through it.
"""

from .resources import OrderRelation, ResourceVector, compare, pareto_min, vec
from .expressions import (
    Alphabet,
    CostParameters,
    Expression,
    expression_cost,
    in_language,
    max_length,
    max_length_component,
)
from .statements import (
    And,
    Atom,
    Implies,
    Not,
    Or,
    Statement,
    VerificationStrategy,
    VerifyOutcome,
    in_domain,
    min_cost,
    non_closure_witness,
    parse,
    render,
    strategy_cost,
    verify,
)
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
    SpendLedger,
    World,
    agreement,
    implement,
    procedure_cost,
    pur,
    purpose_holds,
    theory_experiment_test,
)
from .theory import (
    AxiomCandidate,
    GodelMap,
    Justification,
    Proof,
    Theory,
    admit_axioms,
    build_theory,
    check_proof,
    godel_decode,
    godel_encode,
    is_theorem,
    prove,
    soundness_check,
    theorems_up_to,
)
from .lattice import (
    Quadrant,
    TheoryGrid,
    classify_pair,
    extension_edges,
    first_appearance_theorem,
)
from .reflection import reflect_extend, reflection_chain, val_statement
from .stringterms import claim_truth, eval_claim, eval_term, parse_claim
from .observer import (
    ImplementProcedure,
    ObserverScript,
    ObserverState,
    VerifyStatement,
    knowledge_statement,
    locate_in_lattice,
    run,
    step,
)
from .scenario import Scenario, load

__all__ = [name for name in dir() if not name.startswith("_")]
