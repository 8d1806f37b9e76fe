import pytest

from aftkit.poset import PosetError, Splitting, StratumPoset, condensation


def test_chain_closure_and_linearization():
    p = StratumPoset.chain(["a", "b", "c"])
    assert p.precedes("a", "c")
    assert not p.precedes("c", "a")
    assert p.linearization == ("a", "b", "c")
    assert p.downset("b") == {"a", "b"}
    assert p.covers() == [("a", "b"), ("b", "c")]


def test_cycle_rejected():
    with pytest.raises(PosetError):
        StratumPoset(("a", "b"), frozenset({("a", "b"), ("b", "a")}))


def test_levels_group_incomparable_strata():
    p = StratumPoset(("r", "x", "y", "t"), frozenset({("r", "x"), ("r", "y"), ("x", "t"), ("y", "t")}))
    assert p.levels() == [("r",), ("x", "y"), ("t",)]


def test_check_linearization():
    p = StratumPoset.chain([0, 1])
    assert p.check_linearization([0, 1]) == (0, 1)
    with pytest.raises(PosetError):
        p.check_linearization([1, 0])


def test_splitting_rejects_overlap():
    with pytest.raises(PosetError):
        Splitting.from_blocks([["p"], ["p", "q"]])


def test_condensation_of_E_dependencies():
    # edges (body atom, head)
    edges = [("q", "p"), ("r", "p"), ("p", "q"), ("r", "q"), ("p", "s"), ("q", "s")]
    s = condensation(["p", "q", "r", "s"], edges)
    blocks = [set(s.blocks[i]) for i in s.poset.linearization]
    assert blocks == [{"r"}, {"p", "q"}, {"s"}]
    a, b, c = s.poset.linearization
    assert s.poset.precedes(a, b) and s.poset.precedes(b, c)


def test_atoms_below_and_upto():
    s = Splitting.from_blocks([["p"], ["q"], ["r"]], [(0, 1)])
    assert s.atoms_below(1) == {"p"}
    assert s.atoms_upto(2) == {"r"}
