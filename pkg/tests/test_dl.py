import pytest

from aftkit import ael, dl
from aftkit.formula import TRUE, Atom, K, Not, Or, normalize
from aftkit.poset import Splitting
from aftkit.syntax import parse_dl
from aftkit.theory import Default, DefaultTheory

motive, suspect, guilty = Atom("motive"), Atom("suspect"), Atom("guilty")


def test_konolige_shape():
    d = Default(Atom("a"), (Atom("b"),), Atom("c"))
    want = Or((Not(K(Atom("a"))), K(Not(Atom("b"))), Atom("c")))
    assert normalize(dl.konolige(d)) == normalize(want)


def test_murder_partition_and_inversion(murder):
    assert dl.is_stratifiable(murder, murder.splitting)
    inverted = Splitting.from_blocks([["suspect"], ["guilty", "motive"]], [(0, 1)])
    with pytest.raises(dl.DefaultStratificationError, match="suspect"):
        dl.check_stratifiable(murder, inverted)


def test_inferred_partition_is_valid(murder):
    split = dl.infer_partition(murder)
    assert dl.is_stratifiable(murder, split)


@pytest.mark.parametrize("sem", dl.SEMANTICS)
def test_split_matches_consistent_monolithic(murder, sem):
    mono = ael.consistent(sem, dl.semantics(murder, sem))
    split = dl.semantics(murder, sem, "split")
    if sem in ("kk", "wf"):
        assert split == mono
    else:
        assert sorted(map(tuple, split) if sem.startswith("partial") else split) == \
            sorted(map(tuple, mono) if sem.startswith("partial") else mono)


def test_murder_extension(murder):
    sp = ael.PwsSpace(murder.alphabet)
    (ext,) = dl.semantics(murder, "extensions")
    assert sorted(sorted(w) for w in sp.decode(ext)) == [["guilty", "motive", "suspect"],
                                                        ["motive", "suspect"]]


def test_defaults_from_component():
    f = Or((Not(K(Atom("a"))), K(Atom("b")), Atom("c")))
    D = dl.defaults_from_component([f, Atom("d")])
    (d,) = D.defaults
    assert d.prerequisite == Atom("a")
    assert d.justifications == (Not(Atom("b")),)
    assert D.axioms == (Atom("d"),)


def test_separated_components_by_lower_evaluation():
    D = parse_dl("""
        : ~a / a.
        a : b / b.
        stratum s0: a
        stratum s1: b
        order s0 < s1
    """)
    assert dl.is_modally_separated(D)
    st = ael.AelStrata(dl.konolige_theory(D, with_strata=True))
    top = D.splitting.stratum_of("b")
    low = D.splitting.stratum_of("a")
    only_a = st.local[low].pws([["a"]])
    con, lib = dl.component_defaults(D, top, {low: only_a}, {low: only_a})
    assert con == lib
    assert con.defaults[0].prerequisite == TRUE


def test_axiom_across_strata_rejected():
    D = DefaultTheory(("a", "b"), (), (Or((Atom("a"), Atom("b"))),))
    split = Splitting.from_blocks([["a"], ["b"]], [(0, 1)])
    with pytest.raises(dl.DefaultStratificationError, match="axiom"):
        dl.check_stratifiable(D, split)
