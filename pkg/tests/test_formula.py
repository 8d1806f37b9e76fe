from hypothesis import given, strategies as st

from aftkit.formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    K,
    Not,
    Or,
    atoms,
    cnf_clauses,
    holds,
    implies,
    is_objective,
    normalize,
    objective_atoms,
    satisfiable,
    simplify,
    to_text,
    top_modal_occurrences,
    worlds_of,
)

p, q, r = Atom("p"), Atom("q"), Atom("r")


def test_objective_atoms_ignore_modal_scope():
    f = Or((K(Or((p, q))), q))
    assert atoms(f) == {"p", "q"}
    assert objective_atoms(f) == {"q"}
    assert not is_objective(f)


def test_polarity_of_top_modal_occurrences():
    f = Or((Not(p), K(p)))
    g = Not(K(Or((p, q))))
    assert top_modal_occurrences(f) == [(K(p), True)]
    assert top_modal_occurrences(g) == [(K(Or((p, q))), False)]


def test_implication_sugar():
    assert implies(p, q) == Or((Not(p), q))


def test_printing():
    f = Or((K(Or((p, q))), q))
    assert to_text(f) == "K(p | q) | q"
    assert to_text(Or((p, Not(K(p)))), unicode=True) == "p ∨ ¬Kp"


def test_simplify_constants():
    assert simplify(Or((FALSE, K(q), q))) == normalize(Or((K(q), q)))
    assert simplify(Or((TRUE, K(q)))) == TRUE
    assert simplify(Not(Not(p))) == p


def test_cnf_drops_tautologies():
    assert cnf_clauses(Or((p, Not(p)))) == []
    assert cnf_clauses(And((p, FALSE))) == [[p], []]


formulas = st.recursive(
    st.sampled_from([p, q, r, TRUE, FALSE]),
    lambda kids: st.one_of(kids.map(Not), st.lists(kids, min_size=2, max_size=3).map(And),
                          st.lists(kids, min_size=2, max_size=3).map(Or)),
    max_leaves=8,
)


@given(formulas)
def test_cnf_is_equivalent(f):
    clauses = cnf_clauses(f)
    for w in worlds_of(["p", "q", "r"]):
        want = holds(f, w)
        got = all(any(holds(l, w) for l in c) for c in clauses)
        assert want == got


@given(formulas)
def test_normalize_preserves_truth(f):
    for w in worlds_of(["p", "q", "r"]):
        assert holds(f, w) == holds(normalize(f), w)


def test_satisfiable():
    assert satisfiable([p, Not(q)], ["p", "q"])
    assert not satisfiable([p, Not(p)], ["p"])
