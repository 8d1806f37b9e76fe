import os
import subprocess
import sys

import pytest

from aftkit import ael, canon, dl, document, lp, oracle, syntax
from aftkit.oracle import ConfigError, GeneratorConfig, OracleBudgetError
from conftest import CORPUS, load


def test_independent_of_engines():
    code = (
        "import sys, aftkit.oracle\n"
        "bad = [m for m in ('lattice', 'stratify', 'lp', 'ael', 'dl') if 'aftkit.' + m in sys.modules]\n"
        "print(','.join(bad))\n"
    )
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True)
    assert out.stdout.strip() == ""


def test_seed_is_deterministic():
    cfg = GeneratorConfig(seed=42)
    a = syntax.format_lp(*oracle.gen_stratifiable_program_planted(cfg))
    b = syntax.format_lp(*oracle.gen_stratifiable_program_planted(cfg))
    assert a == b
    assert syntax.format_ael(oracle.gen_stratifiable_ael(cfg)) == \
        syntax.format_ael(oracle.gen_stratifiable_ael(cfg))
    assert syntax.format_dl(oracle.gen_stratifiable_defaults(cfg)) == \
        syntax.format_dl(oracle.gen_stratifiable_defaults(cfg))


def test_single_stratum_config():
    P, split = oracle.gen_stratifiable_program_planted(GeneratorConfig(seed=3, max_strata=1))
    assert len(split.indices) == 1
    lp.validate_splitting(P, split)


@pytest.mark.parametrize("bad", [
    dict(min_strata=3, max_strata=2),
    dict(min_strata=0),
    dict(min_items=5, max_items=2),
    dict(max_atoms=1, min_strata=2),
])
def test_config_bounds(bad):
    with pytest.raises(ConfigError):
        oracle.gen_stratifiable_program(GeneratorConfig(**bad))


def test_thousand_draws_pass_validators():
    for seed in range(1000):
        cfg = GeneratorConfig(seed=seed)
        P, split = oracle.gen_stratifiable_program_planted(cfg)
        lp.validate_splitting(P, split)
        T = oracle.gen_stratifiable_ael(cfg)
        ael.AelStrata(T)
        D = oracle.gen_stratifiable_defaults(cfg)
        dl.check_stratifiable(D, D.splitting)


def test_budget():
    P = lp.even_prefix(3)
    with pytest.raises(OracleBudgetError):
        oracle.oracle_semantics_lp(P, "wf")


def test_golden_values(E, F):
    assert oracle.oracle_semantics_lp(E, "wf") == [canon.pair([], ["p", "q", "s"])]
    full = canon.pws([[], ["p"], ["q"], ["p", "q"]])
    assert oracle.oracle_semantics_ael(F, "kk") == [canon.pair(full, [["p", "q"]])]
    assert oracle.oracle_semantics_lp(syntax.parse_lp("p."), "supported") == [["p"]]


def test_compare_reports_missing_model():
    ok = oracle.compare("x", "stable", [["p"], ["q"]], [["q"], ["p"]])
    assert ok.match
    rep = oracle.compare("x", "stable", [["p"]], [["p"], ["q"]])
    assert not rep.match
    assert rep.counterexample == {"side": "oracle", "model": ["q"]}


@pytest.mark.parametrize("sem", lp.SEMANTICS)
def test_E_sweep(E, sem):
    got = document.lp_models(E, sem, lp.solve(E, sem))
    assert oracle.compare(E, sem, got, oracle.oracle_semantics_lp(E, sem)).match


def _engine_models(name, sem):
    inst = load(name)
    if name.endswith(".lp"):
        return document.lp_models(inst, sem, lp.solve(inst, sem))
    if name.endswith(".dl"):
        return document.ael_models(ael.PwsSpace(inst.alphabet), sem, dl.semantics(inst, sem))
    return document.ael_models(ael.PwsSpace(inst.alphabet), sem, ael.solve(inst, sem))


MANIFEST = oracle.load_manifest(CORPUS)


@pytest.mark.parametrize("name,sem", [(n, s) for n, d in sorted(MANIFEST.items()) for s in sorted(d)])
def test_corpus_manifest(name, sem):
    assert canon.digest(_engine_models(name, sem)) == MANIFEST[name][sem]


def test_persist_failure(tmp_path):
    path = oracle.persist_failure(str(tmp_path), "bad.lp", "p.\n", {"wf": [canon.pair(["p"], ["p"])]})
    assert os.path.exists(path)
    assert set(oracle.load_manifest(str(tmp_path))["bad.lp"]) == {"wf"}


def test_three_atom_ael_agreement():
    # the definitional oracle is slow at three atoms; a few draws suffice here
    for seed in range(3):
        T = oracle.gen_stratifiable_ael(GeneratorConfig(seed=seed, max_atoms=3, max_strata=2,
                                                        max_stratum_atoms=2))
        sp = ael.PwsSpace(T.alphabet)
        for sem in ("expansions", "extensions", "kk"):
            got = document.ael_models(sp, sem, ael.solve(T, sem))
            assert oracle.compare(T, sem, got, oracle.oracle_semantics_ael(T, sem)).match
