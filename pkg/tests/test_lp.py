import pytest

from aftkit import lp
from aftkit.lattice import check_approximation, is_symmetric, well_founded
from aftkit.poset import Splitting
from aftkit.syntax import format_lp, parse_lp


def atoms(P, mask):
    return set(lp.decode(P, mask))


def test_fitting_is_a_symmetric_approximation(E):
    A = lp.fitting(E)
    assert check_approximation(A) is None
    assert is_symmetric(A)


def test_E_semantics(E):
    wf = lp.solve(E, "wf")
    assert (atoms(E, wf.lower), atoms(E, wf.upper)) == (set(), {"p", "q", "s"})
    kk = lp.solve(E, "kk")
    assert (atoms(E, kk.lower), atoms(E, kk.upper)) == (set(), {"p", "q", "s"})
    assert sorted(sorted(atoms(E, m)) for m in lp.solve(E, "supported")) == [["p"], ["q"]]
    exact = lp.solve(E, "stable", exact_only=True)
    assert sorted(sorted(atoms(E, p.lower)) for p in exact) == [["p"], ["q"]]


@pytest.mark.parametrize("sem", lp.SEMANTICS)
def test_split_matches_monolithic_on_E(E, sem):
    a, b = lp.solve(E, sem), lp.solve(E, sem, "split")
    if isinstance(a, list):
        assert sorted(a) == sorted(b)
    else:
        assert a == b


def test_bad_splitting_is_rejected(E):
    bad = Splitting.from_blocks([["s"], ["p", "q", "r"]], [(0, 1)])
    with pytest.raises(lp.SplittingError) as e:
        lp.validate_splitting(E, bad)
    assert e.value.edge is not None


def test_partial_evaluation_strings(E):
    parts = lp.strata_programs(E, lp.compute_splitting(E))
    top = [c for cs in parts.values() for c in cs if c.head == "s"]
    assert format_lp(lp.partial_evaluate(top, ["s"], ({"p", "q"}, set()))) == "s.\n"
    assert lp.partial_evaluate(top, ["s"], (set(), {"p", "q"})).clauses == ()


def test_component_approximation_of_top_stratum(E):
    split = lp.compute_splitting(E)
    top = split.stratum_of("s")
    A = lp.component_approximation(E, split, top, (set(), {"p", "q"}))
    assert tuple(well_founded(A)) == (0, 1)


def test_tautology_and_constraint_free_body():
    P = parse_lp("p :- p.\nq :- true.\nr :- false.")
    assert atoms(P, lp.solve(P, "wf").upper) == {"q"}


def test_even_prefix_structure():
    P = lp.even_prefix(2)
    assert P.alphabet[0] == "even(0)"
    assert len(P.clauses) == 5
    wf = lp.solve(P, "wf", "split")
    assert wf.lower == wf.upper
    assert atoms(P, wf.lower) == {"even(0)", "odd(1)", "even(2)"}


def test_trace_records_strata(E):
    trace = []
    lp.solve(E, "wf", "split", trace=trace)
    assert len(trace) == 3
    assert all(set(t) >= {"stratum", "seconds"} for t in trace)
