import pytest
from hypothesis import given, strategies as st

from aftkit.lattice import (
    Approximation,
    Bilattice,
    BudgetExceeded,
    ChainLattice,
    ExplicitLattice,
    LatticeOperator,
    MimicWitness,
    MonotonicityError,
    NotExactError,
    PowersetLattice,
    PwsLattice,
    all_fixpoints,
    approximation_fixpoints,
    check_approximation,
    check_lattice,
    count_applications,
    exact_operator,
    is_monotone,
    kripke_kleene,
    lfp,
    stable_fixpoints,
    verify_mimics,
    well_founded,
)


@pytest.mark.parametrize("lat", [PowersetLattice(2), PwsLattice(1), ChainLattice(4),
                                 Bilattice(PowersetLattice(1))])
def test_lattice_laws(lat):
    check_lattice(lat)


def test_pws_order_is_reverse_inclusion():
    L = PwsLattice(2)
    assert L.bottom == 0b1111 and L.top == 0
    assert L.leq(0b1111, 0b0001)
    assert not L.leq(0b0001, 0b0011)


def test_explicit_lattice_diamond():
    order = {("0", "a"), ("0", "b"), ("0", "1"), ("a", "1"), ("b", "1")}
    L = ExplicitLattice(["0", "a", "b", "1"], lambda x, y: x == y or (x, y) in order)
    assert L.lub("a", "b") == "1" and L.glb("a", "b") == "0"


def test_lfp_on_powerset():
    L = PowersetLattice(3)
    assert lfp(lambda x: x | 1 | ((x & 1) << 1), L) == 0b011


def test_lfp_rejects_descent():
    L = ChainLattice(3)
    with pytest.raises(MonotonicityError):
        lfp(lambda x: 2 if x == 0 else 0, L)


def test_is_monotone_witness():
    L = PowersetLattice(1)
    assert is_monotone(lambda x: 1 - x, L) == (0, 1)


def _negation_approx():
    # program p <- not p on one atom: A(x, y) = (¬y, ¬x)
    L = PowersetLattice(1)
    return Approximation(L, lambda x, y: 1 - y, lambda x, y: 1 - x, symmetric_declared=True)


def test_negation_loop_fixpoints():
    A = _negation_approx()
    assert kripke_kleene(A) == (0, 1)
    assert well_founded(A) == (0, 1)
    # (1, 0) is stable too, just inconsistent
    assert set(stable_fixpoints(A)) == {(0, 1), (1, 0)}
    assert check_approximation(A) is None
    assert set(approximation_fixpoints(A)) == {(0, 1), (1, 0)}


def test_exact_operator_rejects_inexact():
    L = PowersetLattice(1)
    A = Approximation(L, lambda x, y: 0, lambda x, y: 1)
    with pytest.raises(NotExactError):
        exact_operator(A)


def test_application_counter():
    A = _negation_approx()
    with count_applications() as box:
        well_founded(A)
    assert box[0] > 0


def test_budget(monkeypatch):
    monkeypatch.setenv("AFTKIT_BUDGET", "4")
    with pytest.raises(BudgetExceeded):
        all_fixpoints(lambda x: x, PowersetLattice(3))
    assert len(all_fixpoints(lambda x: x, PowersetLattice(3), budget=8)) == 8


def test_image_hint_restricts_scan():
    op = LatticeOperator(lambda x: 0b10, image_hint=[0b10])
    assert all_fixpoints(op, PowersetLattice(10), budget=1) == [0b10]


@given(st.integers(0, 15), st.integers(0, 15))
def test_bilattice_precision(x, y):
    B = Bilattice(PowersetLattice(4))
    a = (x & y, x | y)
    b = (x, x)
    assert B.leq(a, b)


def test_mimic_identity_embedding():
    L = PowersetLattice(2)
    op = lambda x: x | 1
    r = verify_mimics(MimicWitness(L, L, lambda x: x, op, op))
    assert r.ok and r.fixpoints_match and r.lfp_match


def test_mimic_detects_non_commuting():
    L = PowersetLattice(1)
    r = verify_mimics(MimicWitness(L, L, lambda x: x, lambda x: 1, lambda x: x))
    assert not r.ok and r.violations[0][0] == "commutation"
