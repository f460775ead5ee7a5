import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resbound import (
    And,
    Atom,
    DetermineTruth,
    Expression,
    Implies,
    Not,
    Or,
    Procedure,
    SpendLedger,
    VerificationStrategy,
    VerifyOutcome,
    World,
    in_domain,
    min_cost,
    non_closure_witness,
    parse,
    render,
    strategy_cost,
    vec,
    verify,
)
from resbound.errors import NoStrategy, StatementSyntaxError, UncoveredAtom
from resbound.statements import (
    atoms_of,
    enumerate_statements,
    evaluate,
    rendered_length,
    subformulas,
)
from resbound.world import truth_output
from resbound.expressions import Alphabet


# --- grammar -----------------------------------------------------------------

@pytest.mark.parametrize(
    "text,expected",
    [
        ("A", Atom("A")),
        ("!A", Not(Atom("A"))),
        ("(A&B)", And(Atom("A"), Atom("B"))),
        ("(A | B)", Or(Atom("A"), Atom("B"))),
        ("( A -> B )", Implies(Atom("A"), Atom("B"))),
        ("!(A&!B)", Not(And(Atom("A"), Not(Atom("B"))))),
        ("Thm_r0_01", Atom("Thm_r0_01")),
    ],
)
def test_parse(text, expected):
    assert parse(text) == expected


@pytest.mark.parametrize("text", ["", "A&B", "(A&)", "(A&B", "A B", "(A ^ B)", "()"])
def test_parse_rejects(text):
    with pytest.raises(StatementSyntaxError):
        parse(text)


def statements_over(atom_names, max_depth=3):
    atoms = st.sampled_from([Atom(a) for a in atom_names])
    return st.recursive(
        atoms,
        lambda sub: st.one_of(
            sub.map(Not),
            st.tuples(sub, sub).map(lambda p: And(*p)),
            st.tuples(sub, sub).map(lambda p: Or(*p)),
            st.tuples(sub, sub).map(lambda p: Implies(*p)),
        ),
        max_leaves=4,
    )


@given(statements_over("ABCD"))
def test_render_parse_roundtrip(s):
    assert parse(render(s)) == s


def test_enumerate_statements_lengths():
    got = enumerate_statements(["A", "B"], 6)
    assert Atom("A") in got
    assert Not(Atom("A")) in got
    assert And(Atom("A"), Atom("B")) in got
    assert Implies(Atom("A"), Atom("B")) in got
    assert all(rendered_length(s) <= 6 for s in got)
    lengths = [rendered_length(s) for s in got]
    assert lengths == sorted(lengths)


def test_enumerate_statements_exhaustive_small():
    got = set(enumerate_statements(["A"], 3))
    assert got == {Atom("A"), Not(Atom("A")), Not(Not(Atom("A")))}


# --- strategy cost -------------------------------------------------------------

def test_strategy_cost_single_atom(tiny_world):
    strat = VerificationStrategy.of({"X": "pX"})
    assert strategy_cost(Atom("X"), strat, tiny_world) == vec(3, 3)


def test_negation_costs_the_same(tiny_world):
    strat = VerificationStrategy.of({"X": "pX"})
    assert strategy_cost(Not(Atom("X")), strat, tiny_world) == vec(3, 3)


def test_conjunction_shares_equipment(tiny_world):
    strat = VerificationStrategy.of({"X": "pX", "Y": "pY"})
    cost = strategy_cost(And(Atom("X"), Atom("Y")), strat, tiny_world)
    assert cost == vec(5, 5)
    # max(r(S), r(T)) <= r(S & T) <= r(S) + r(T)
    assert vec(3, 3).leq(cost) and cost.leq(vec(6, 6))


def test_uncovered_atom(tiny_world):
    with pytest.raises(UncoveredAtom):
        strategy_cost(And(Atom("X"), Atom("Y")), VerificationStrategy.of({"X": "pX"}), tiny_world)


def test_prebuilt_equipment_discount(tiny_world):
    strat = VerificationStrategy.of({"X": "pX"}, prebuilt=["e0"])
    assert strategy_cost(Atom("X"), strat, tiny_world) == vec(2, 2)


# --- min_cost -------------------------------------------------------------------

def test_min_cost_singleton(tiny_world):
    result = min_cost(Atom("X"), tiny_world)
    assert result.frontier == (vec(3, 3),)
    (witnesses,) = [ws for _, ws in result.witnesses]
    assert witnesses[0].procedure_for("X") == "pX"


def two_procedure_world():
    alpha = Alphabet.from_string("W01()!&|->_")
    procs = {
        "pW1": Procedure(
            "pW1", frozenset(), Expression("", alpha), vec(1, 3), DetermineTruth("W"), truth_output("W")
        ),
        "pW2": Procedure(
            "pW2", frozenset(), Expression("", alpha), vec(3, 1), DetermineTruth("W"), truth_output("W")
        ),
    }
    return World(
        0,
        alpha,
        {},
        procs,
        {"W": True},
        {"pW1": DetermineTruth("W"), "pW2": DetermineTruth("W")},
    )


def test_min_cost_frontier_two_points():
    world = two_procedure_world()
    result = min_cost(Atom("W"), world)
    assert set(result.frontier) == {vec(1, 3), vec(3, 1)}


def test_min_cost_dedups_conjunction(std_world):
    s = Atom("A")
    assert min_cost(And(s, s), std_world).frontier == min_cost(s, std_world).frontier


def test_min_cost_no_strategy(std_world):
    with pytest.raises(NoStrategy):
        min_cost(Atom("Zed"), std_world)


def test_min_cost_std_world_b(std_world):
    result = min_cost(Atom("B"), std_world)
    assert set(result.frontier) == {vec(4, 3, 1, 1), vec(2, 5, 2, 2)}


# --- in_domain -------------------------------------------------------------------

def test_in_domain_frontier_fit():
    world = two_procedure_world()
    assert in_domain(Atom("W"), vec(2, 3), world)
    assert not in_domain(Atom("W"), vec(2, 2), world)


def test_in_domain_zero_cost_atoms():
    alpha = Alphabet.from_string("E01()!&|->_")
    procs = {
        "pE": Procedure(
            "pE", frozenset(), Expression("", alpha), vec(0, 0), DetermineTruth("E"), truth_output("E")
        )
    }
    world = World(0, alpha, {}, procs, {"E": True}, {"pE": DetermineTruth("E")})
    assert in_domain(And(Atom("E"), Not(Atom("E"))), vec(0, 0), world)


def test_in_domain_no_strategy_is_false(std_world):
    assert not in_domain(Atom("Zed"), vec(9, 9, 9, 9), std_world)


@given(statements_over("ABCD"), st.integers(0, 6), st.integers(0, 6))
@settings(max_examples=60, deadline=None)
def test_in_domain_monotone(s, bump_i, amount):
    world = test_in_domain_monotone.world
    r = vec(4, 4, 2, 2)
    bigger_comps = list(r.components)
    bigger_comps[bump_i % 4] += amount
    bigger = vec(*bigger_comps)
    if in_domain(s, r, world):
        assert in_domain(s, bigger, world)


def test_frontier_minimality_probe(std_world):
    for s in [Atom("A"), Atom("B"), And(Atom("A"), Atom("B")), Or(Atom("B"), Atom("C"))]:
        frontier = min_cost(s, std_world).frontier
        for f in frontier:
            assert in_domain(s, f, std_world)
            for i, c in enumerate(f.components):
                if c == 0:
                    continue
                probe = list(f.components)
                probe[i] = c / 2
                assert not in_domain(s, vec(*probe), std_world)


# --- verify ---------------------------------------------------------------------

def test_verify_true_atom_debits(std_world):
    ledger = SpendLedger(std_world)
    assert verify(Atom("A"), vec(9, 9, 9, 9), std_world, ledger) is VerifyOutcome.TRUE
    assert ledger.spent == vec(3, 2, 1, 1)


def test_verify_insufficient_leaves_ledger(std_world):
    ledger = SpendLedger(std_world)
    out = verify(Atom("A"), vec(0, 0, 0, 0), std_world, ledger)
    assert out is VerifyOutcome.INSUFFICIENT
    assert ledger.spent.is_zero() and not ledger.built


def test_verify_conjunction_with_false_atom(std_world):
    ledger = SpendLedger(std_world)
    out = verify(And(Atom("A"), Atom("C")), vec(9, 9, 9, 9), std_world, ledger)
    assert out is VerifyOutcome.FALSE


def test_verify_picks_cheapest_within_budget(std_world):
    # budget excludes the pB route ([4,3,1,1]) but admits pB2 ([2,5,2,2])
    ledger = SpendLedger(std_world)
    out = verify(Atom("B"), vec(3, 5, 2, 2), std_world, ledger)
    assert out is VerifyOutcome.TRUE
    assert ledger.spent == vec(2, 5, 2, 2)


def test_verify_uses_ledger_context(std_world):
    ledger = SpendLedger(std_world)
    verify(Atom("A"), None, std_world, ledger)          # builds the scope
    before = ledger.spent
    verify(Atom("B"), None, std_world, ledger)
    delta = ledger.spent.sub_saturating(before)
    assert delta == vec(2, 2, 1, 1)  # pB implementation only, scope reused


def test_verify_no_strategy_is_insufficient(std_world):
    ledger = SpendLedger(std_world)
    assert verify(Atom("Zed"), None, std_world, ledger) is VerifyOutcome.INSUFFICIENT


# --- non-closure ------------------------------------------------------------------

def test_non_closure_witness_found(disjoint_world):
    witness = non_closure_witness(vec(3, 3), disjoint_world)
    assert witness == (Atom("S"), Atom("T"))
    s, t = witness
    assert in_domain(s, vec(3, 3), disjoint_world)
    assert in_domain(t, vec(3, 3), disjoint_world)
    assert not in_domain(And(s, t), vec(3, 3), disjoint_world)


def test_non_closure_none_for_single_zero_cost_atom():
    alpha = Alphabet.from_string("E01()!&|->_")
    procs = {
        "pE": Procedure(
            "pE", frozenset(), Expression("", alpha), vec(0, 0), DetermineTruth("E"), truth_output("E")
        )
    }
    world = World(0, alpha, {}, procs, {"E": True}, {"pE": DetermineTruth("E")})
    assert non_closure_witness(vec(1, 1), world) is None


def test_non_closure_none_when_sharing_collapses(tiny_world):
    # atoms cost [3,3] each; the shared instrument makes the pair cost [5,5]
    assert non_closure_witness(vec(5, 5), tiny_world) is None


# --- algebraic properties over the fixture world -----------------------------------

@given(statements_over("ABCD"))
@settings(max_examples=80, deadline=None)
def test_negation_frontier_equality(s):
    world = test_negation_frontier_equality.world
    assert min_cost(Not(s), world).frontier == min_cost(s, world).frontier


@given(statements_over("ABCD"), statements_over("ABCD"))
@settings(max_examples=60, deadline=None)
def test_conjunction_disjunction_bounds(s, t):
    world = test_conjunction_disjunction_bounds.world
    fs = min_cost(s, world).frontier
    ft = min_cost(t, world).frontier
    for combined in (And(s, t), Or(s, t)):
        fc = min_cost(combined, world).frontier
        for c in fc:
            assert any(a.join(b).leq(c) for a in fs for b in ft)
        for a in fs:
            for b in ft:
                assert any(c.leq(a.add(b)) for c in fc)


@given(statements_over("ABCD"))
@settings(max_examples=40, deadline=None)
def test_verify_matches_ground_truth_when_affordable(s):
    world = test_verify_matches_ground_truth_when_affordable.world
    ledger = SpendLedger(world)
    out = verify(s, None, world, ledger)
    expected = evaluate(s, world.ground_truth)
    assert out is (VerifyOutcome.TRUE if expected else VerifyOutcome.FALSE)


@pytest.fixture(autouse=True)
def _attach_world(std_world):
    for fn in (
        test_in_domain_monotone,
        test_negation_frontier_equality,
        test_conjunction_disjunction_bounds,
        test_verify_matches_ground_truth_when_affordable,
    ):
        fn.world = std_world


def test_subformulas_and_atoms():
    s = parse("((A&B)->!C)")
    assert atoms_of(s) == frozenset({"A", "B", "C"})
    assert parse("(A&B)") in subformulas(s)
    assert parse("!C") in subformulas(s)
