from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resbound import (
    Alphabet,
    And,
    Atom,
    AxiomCandidate,
    Expression,
    GodelMap,
    Implies,
    Justification,
    Not,
    build_theory,
    check_proof,
    godel_decode,
    godel_encode,
    is_theorem,
    prove,
    soundness_check,
    theorems_up_to,
    vec,
)
from resbound.errors import MalformedCode, StatementTooLong
from resbound.statements import parse, render
from resbound.theory import ModusPonens, SCHEMAS, SchemaInstance, TheoryAxiom, substitute

from proof_oracle import oracle_provable

AMPLE = vec(10**6, 10**6, 10**6, 10**6)


def theory_with(std_world, std_cost, axioms, budget=AMPLE, steps=4):
    candidates = tuple(AxiomCandidate(parse(t)) for t in axioms)
    return build_theory(budget, candidates, std_world, std_cost, steps)


# --- Gödel map -----------------------------------------------------------------

def test_godel_empty():
    alpha = Alphabet.from_string("abcd")
    assert GodelMap(alpha).encode_text("") == ""


def test_godel_width_one_example():
    alpha = Alphabet.from_string("abcd")
    gm = GodelMap(alpha)
    assert gm.width == 1
    assert gm.encode_text("ba") == "10"
    assert gm.decode_text("10") == "ba"


def test_godel_wide_alphabet(std_alphabet):
    gm = GodelMap(std_alphabet)
    assert gm.width == 2
    code = gm.encode(Expression("(A->B)", std_alphabet))
    assert len(code.text) == 12
    assert gm.decode(code).text == "(A->B)"


def test_godel_malformed():
    gm = GodelMap(Alphabet.from_string("abcd"))
    with pytest.raises(MalformedCode):
        gm.decode_text("9")  # index out of range
    wide = GodelMap(Alphabet.from_string("abcdefghijkl"))
    with pytest.raises(MalformedCode):
        wide.decode_text("013")  # dangling half-chunk
    with pytest.raises(MalformedCode):
        wide.decode_text("0a")


@given(st.text(alphabet="abcd", max_size=24))
def test_godel_roundtrip(text):
    alpha = Alphabet.from_string("abcd")
    expr = Expression(text, alpha)
    assert godel_decode(godel_encode(expr), alpha).text == text


@given(st.text(alphabet="abcd", max_size=12), st.text(alphabet="abcd", max_size=12))
def test_godel_injective(t1, t2):
    gm = GodelMap(Alphabet.from_string("abcd"))
    if t1 != t2:
        assert gm.encode_text(t1) != gm.encode_text(t2)


# --- admission ------------------------------------------------------------------

def test_admit_zero_cost_atom_any_budget(std_world):
    # a direct observation: free to decide and free to write down
    from resbound import CostParameters, DetermineTruth, Expression, Procedure
    from resbound.world import truth_output

    free = CostParameters.uniform(4, delta=0, delta_e=0)
    direct = Procedure(
        "direct_A",
        frozenset(),
        Expression("", std_world.alphabet),
        vec(0, 0, 0, 0),
        DetermineTruth("A"),
        truth_output("A"),
    )
    world = std_world.extended(
        procedures=[direct], true_purposes={"direct_A": DetermineTruth("A")}
    )
    for budget in (vec(0, 0, 0, 0), vec(1, 1, 1, 1), AMPLE):
        theory = build_theory(budget, (AxiomCandidate(Atom("A")),), world, free)
        assert [render(a.statement) for a in theory.axioms.admitted] == ["A"]


def test_admit_rejects_outside_domain(std_world, std_cost):
    # N([2,2,2,2]) = 1 admits the rendering, but deciding A costs [3,2,1,1]
    theory = theory_with(std_world, std_cost, ["A"], budget=vec(2, 2, 2, 2))
    assert not theory.axioms.admitted
    assert theory.axioms.rejected[0].reason == "outside-domain"


def test_admit_rejects_overlong(std_world, std_cost):
    # N([4,4,4,4]) = 3 under the standard cost model; (A->B) needs 6 symbols
    theory = theory_with(std_world, std_cost, ["(A->B)"], budget=vec(4, 4, 4, 4))
    assert theory.axioms.rejected[0].reason == "statement-too-long"


def test_admit_rejects_false_verified(std_world, std_cost):
    theory = theory_with(std_world, std_cost, ["C"])
    assert theory.axioms.rejected[0].reason == "false-in-world"


def test_admit_keeps_false_postulated(std_world, std_cost):
    candidates = (AxiomCandidate(Atom("C"), Justification.POSTULATED),)
    theory = build_theory(AMPLE, candidates, std_world, std_cost)
    assert [render(a.statement) for a in theory.axioms.admitted] == ["C"]


# --- prove ----------------------------------------------------------------------

def test_prove_modus_ponens_three_steps(std_world, std_cost):
    theory = theory_with(std_world, std_cost, ["A", "(A->B)"])
    proof = prove(theory, Atom("B"))
    assert proof is not None
    assert len(proof.steps) == 3
    assert proof.conclusion == Atom("B")
    assert isinstance(proof.steps[-1].justification, ModusPonens)
    assert not check_proof(theory, proof)


def test_prove_axiom_one_step(std_world, std_cost):
    theory = theory_with(std_world, std_cost, ["A", "(A->B)"])
    proof = prove(theory, Implies(Atom("A"), Atom("B")))
    assert proof is not None and len(proof.steps) == 1
    assert isinstance(proof.steps[0].justification, TheoryAxiom)


def test_prove_exact_cost_and_budget_boundary(std_world, std_cost):
    # steps A, (A->B), B; lengths 1, 6, 1; delta = 1, delta_e = 1/100:
    # non-energy 2*(1+6+1) = 16; cheapest order [A, (A->B), B] pays
    # maintenance (2*1 + 1*6)/100, so energy = 16 + 2/25
    exact = vec(16, 16, 16, Fraction(402, 25))
    theory = theory_with(std_world, std_cost, ["A", "(A->B)"], budget=exact)
    proof = prove(theory, Atom("B"))
    assert proof is not None
    assert proof.cost == exact

    below = vec(15, 16, 16, 17)
    smaller = theory_with(std_world, std_cost, ["A", "(A->B)"], budget=below)
    assert prove(smaller, Atom("B")) is None


def test_prove_too_long_statement(std_world, std_cost):
    theory = theory_with(std_world, std_cost, ["A"], budget=vec(4, 4, 4, 4))  # N = 3
    with pytest.raises(StatementTooLong):
        prove(theory, Implies(Atom("A"), Atom("B")))


def test_prove_via_schema_instance(std_world, std_cost):
    theory = theory_with(std_world, std_cost, ["(A&B)"])
    proof = prove(theory, Atom("A"))
    assert proof is not None
    kinds = [type(s.justification) for s in proof.steps]
    assert SchemaInstance in kinds and ModusPonens in kinds
    assert not check_proof(theory, proof)


def test_prove_deterministic(std_world, std_cost):
    runs = []
    for _ in range(2):
        theory = theory_with(std_world, std_cost, ["A", "(A->B)"])
        proof = prove(theory, Atom("B"))
        runs.append([(render(s.statement), repr(s.justification)) for s in proof.steps])
    assert runs[0] == runs[1]


# --- is_theorem / theorems_up_to --------------------------------------------------

def test_is_theorem_fixture(std_world, std_cost):
    theory = theory_with(std_world, std_cost, ["A", "(A->B)"])
    assert is_theorem(theory, Atom("B"))
    assert not is_theorem(theory, Atom("C"))
    assert not is_theorem(theory, Atom("D"))


def test_theorems_up_to_contains_axioms_and_mp(std_world, std_cost):
    theory = theory_with(std_world, std_cost, ["A", "(A->B)"])
    theorems = theorems_up_to(theory, 6)
    assert Atom("A") in theorems
    assert Atom("B") in theorems
    assert Implies(Atom("A"), Atom("B")) in theorems


def test_theorems_subset_of_size_bound(std_cost):
    from tests_support_random_world import random_truth_world

    world = random_truth_world((True, True), names=("A", "B"))
    theory = build_theory(AMPLE, (AxiomCandidate(parse("A")), AxiomCandidate(parse("(A->B)"))), world, std_cost)
    for s in theorems_up_to(theory, 7):
        assert len(render(s)) <= 7


def test_no_axioms_tiny_bound_schema_instances_only(std_cost):
    from tests_support_random_world import random_truth_world

    world = random_truth_world((True, True), names=("A", "B"))
    theory = build_theory(AMPLE, (), world, std_cost)
    assert theorems_up_to(theory, 7) == []
    ten = theorems_up_to(theory, 10)
    assert ten
    for s in ten:
        proof = prove(theory, s)
        assert len(proof.steps) == 1
        assert isinstance(proof.steps[0].justification, SchemaInstance)


# --- proof checker negatives -------------------------------------------------------

def test_check_proof_catches_tampering(std_world, std_cost):
    from resbound.theory import Proof, ProofStep

    theory = theory_with(std_world, std_cost, ["A", "(A->B)"])
    proof = prove(theory, Atom("B"))

    swapped = Proof(
        tuple(
            ProofStep(s.statement, TheoryAxiom(0), s.cost) if i == 2 else s
            for i, s in enumerate(proof.steps)
        ),
        proof.cost,
    )
    assert check_proof(theory, swapped)

    wrong_cost = Proof(
        tuple(
            ProofStep(s.statement, s.justification, s.cost.add(vec(1, 0, 0, 0)))
            for s in proof.steps
        ),
        proof.cost,
    )
    assert check_proof(theory, wrong_cost)


def test_schema_substitution_roundtrip():
    for schema in SCHEMAS:
        bindings = {v: Atom(f"Z{i}") for i, v in enumerate(schema.metavars)}
        inst = substitute(schema.template, bindings)
        assert "?" not in render(inst)


# --- oracle agreement --------------------------------------------------------------

@pytest.mark.parametrize(
    "axioms",
    [
        ["A", "(A->B)"],
        ["B", "(B->D)", "(A->B)"],
        ["(A&D)"],
    ],
)
def test_engine_agrees_with_oracle_small(std_world, std_cost, axioms):
    from resbound.statements import enumerate_statements

    theory = theory_with(std_world, std_cost, axioms)
    cap = theory.length_cap()
    axiom_stmts = [a.statement for a in theory.axioms.admitted]
    for s in enumerate_statements(["A", "B"], 5):
        engine = is_theorem(theory, s)
        oracle = oracle_provable(s, axiom_stmts, theory.budget, std_cost, cap)
        assert engine == oracle, render(s)


# --- soundness -----------------------------------------------------------------------

def test_soundness_clean_fixture(std_world, std_cost):
    theory = theory_with(std_world, std_cost, ["A", "(A->B)"])
    report = soundness_check(theory, 5)
    assert report.ok and report.checked > 0


def test_soundness_flags_false_postulate(std_world, std_cost):
    candidates = (
        AxiomCandidate(parse("A")),
        AxiomCandidate(parse("C"), Justification.POSTULATED),
    )
    theory = build_theory(AMPLE, candidates, std_world, std_cost)
    report = soundness_check(theory, 5)
    assert not report.ok
    assert Atom("C") in report.violations


@settings(max_examples=8, deadline=None)
@given(st.tuples(st.booleans(), st.booleans(), st.booleans()))
def test_soundness_random_truths_verified_only(truths):
    from tests_support_random_world import random_truth_world  # local helper

    world = random_truth_world(truths, names=("A", "B", "C"))
    cost = __import__("resbound").CostParameters.uniform(4, delta=1, delta_e=0)
    candidates = tuple(
        AxiomCandidate(parse(t))
        for t in ["A", "B", "(A->B)", "(C->A)", "(A&B)", "!C"]
    )
    theory = build_theory(AMPLE, candidates, world, cost)
    report = soundness_check(theory, 5)
    assert report.ok
