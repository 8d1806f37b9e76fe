import jsonschema
import pytest

from aftkit import bench, document, lp


@pytest.mark.parametrize("family,strata", [("chain", 5), ("grid", 25)])
def test_generated_splitting_is_valid(family, strata):
    P, split = bench.generate(family, 5, 3)
    lp.validate_splitting(P, split)
    assert len(split.indices) == strata
    assert len(P.alphabet) == 3 * strata


def test_chain_bodies_stay_local():
    P, split = bench.chain(6, 3)
    order = split.poset.linearization
    for c in P.clauses:
        i = order.index(split.stratum_of(c.head))
        for a in c.body_atoms():
            assert order.index(split.stratum_of(a)) in (i - 1, i)


def test_single_stratum_is_no_better():
    r = bench.run("chain", 1, 4)
    assert r["strata"] == 1 and r["agree"]
    # the split run solves the same single stratum, plus bookkeeping
    assert r["split"]["applications"] >= r["monolithic"]["applications"]


@pytest.mark.parametrize("sem", lp.SEMANTICS)
def test_report_schema(sem):
    r = bench.run("grid", 2, 2, sem)
    jsonschema.validate(r, document.load_schema("bench_report.json"))
    assert r["agree"]


def test_split_needs_fewer_applications():
    r = bench.run("chain", 16, 4)
    assert r["split"]["applications"] < r["monolithic"]["applications"]


def test_unknown_family():
    with pytest.raises(ValueError):
        bench.generate("tree", 2, 2)
