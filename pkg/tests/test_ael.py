import pytest

from aftkit import ael
from aftkit.formula import Atom, K, Not, Or, to_text
from aftkit.lattice import check_approximation, is_symmetric
from aftkit.theory import ModalTheory

p, q = Atom("p"), Atom("q")


def pws(space, q):
    return sorted(sorted(w) for w in space.decode(q))


def test_compile_matches_definition(F):
    sp = ael.PwsSpace(F.alphabet)
    for P in range(1 << sp.worlds):
        for S in (0, sp.full, sp.pws([["p", "q"]])):
            for X in range(sp.worlds):
                for f in F.formulas:
                    assert bool(sp.compile(f)(P, S) >> X & 1) == ael.evaluate(sp, (P, S), X, f)


def test_dtu_two_step_agrees(F):
    sp = ael.PwsSpace(F.alphabet)
    for P in range(0, 1 << sp.worlds, 3):
        for S in range(0, 1 << sp.worlds, 5):
            assert ael.dtu(F, P, S, sp) == ael.dtu_two_step(F, P, S, sp)


def test_dt_is_symmetric_approximation(F):
    A = ael.dt(F)
    assert is_symmetric(A)
    assert check_approximation(A) is None


def test_F_kk_and_wf(F):
    sp = ael.PwsSpace(F.alphabet)
    kk = ael.solve(F, "kk")
    assert kk.lower == sp.full and pws(sp, kk.upper) == [["p", "q"]]
    wf = ael.solve(F, "wf")
    assert pws(sp, wf.upper) == [["p", "q"], ["q"]]
    assert [pws(sp, x) for x in ael.solve(F, "expansions")] == [[["p"], ["p", "q"]]]


def test_F_normal_form(F):
    st = ael.AelStrata(F)
    top = st.split.stratum_of("q")
    assert [to_text(f, unicode=True) for f in st.normal_form(top)] == ["q ∨ Kp ∨ Kq"]


def test_separation_predicate(F):
    # K(p | q) mixes the two strata
    assert not ael.is_modally_separated(F)
    sep = ModalTheory.build([Or((p, Not(K(p)))), Or((q, K(p), K(q)))]).with_splitting(F.splitting)
    assert ael.is_modally_separated(sep)


def test_kappa_roundtrip(F):
    st = ael.AelStrata(F)
    for a in range(1, 4):
        for b in range(1, 4):
            q_ = st.kappa((a, b))
            assert ael.is_disconnected(st.space, st.split, q_)
            assert st.kappa_inverse(q_) == (a, b)


def test_connected_structure_has_no_preimage(F):
    st = ael.AelStrata(F)
    conn = st.space.pws([["p"], ["q"]])
    assert ael.disconnection_witness(st.space, st.split, conn) is not None
    with pytest.raises(ValueError):
        st.kappa_inverse(conn)


def test_T_refuses_split_kk(T):
    assert not ael.is_permaconsistent(T)
    with pytest.raises(ael.SemanticRefusal):
        ael.solve(T, "kk", "split")
    with pytest.raises(ael.SemanticRefusal):
        ael.solve(T, "wf", "split")


@pytest.mark.parametrize("sem", ["expansions", "partial_expansions", "extensions", "partial_extensions"])
def test_T_consistent_semantics_survive_splitting(T, sem):
    mono = ael.solve(T, sem, consistent_only=True)
    split = ael.solve(T, sem, "split")
    assert sorted(map(tuple, split) if sem.startswith("partial") else split) == \
        sorted(map(tuple, mono) if sem.startswith("partial") else mono)


def test_permaconsistency_worst_case():
    assert ael.is_permaconsistent_formulas([Or((p, Not(K(p))))], ["p"])
    assert not ael.is_permaconsistent_formulas([Not(K(p))], ["p"])


def test_stratification_inference():
    T = ModalTheory.build([Or((p, Not(K(p)))), Or((K(Or((p, q))), q))])
    split = ael.infer_stratification(T)
    assert split.poset.precedes(split.stratum_of("p"), split.stratum_of("q"))


def test_unstratifiable_splitting_rejected(F):
    from aftkit.poset import Splitting
    wrong = Splitting.from_blocks([["q"], ["p"]], [(0, 1)])
    with pytest.raises(ael.StratificationError):
        ael.AelStrata(F, wrong)
