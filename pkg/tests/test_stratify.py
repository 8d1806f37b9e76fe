from aftkit.lattice import Approximation, PowersetLattice, all_fixpoints, lfp, well_founded
from aftkit.poset import StratumPoset
from aftkit.stratify import (
    ProductLattice,
    component,
    component_approximation,
    incremental_fixpoints,
    incremental_lfp,
    incremental_well_founded,
    is_stratifiable,
    is_stratifiable_approximation,
    stratifiability_witness,
)


def _prod():
    P = StratumPoset.chain([0, 1])
    return ProductLattice(P, {0: PowersetLattice(1), 1: PowersetLattice(1)})


def test_product_basics():
    L = _prod()
    assert L.size == 4 and L.height == 2
    assert L.extend({0: 1}) == (1, 0)
    assert L.extend({0: 1}, "top") == (1, 1)


def test_stratifiable_and_not():
    L = _prod()
    up = lambda x: (1, x[0])  # stratum 1 copies stratum 0
    down = lambda x: (x[1], 1)  # stratum 0 looks upward
    assert is_stratifiable(up, L)
    assert not is_stratifiable(down, L)
    assert stratifiability_witness(down, L)[2] == 0


def test_incremental_matches_global():
    L = _prod()
    op = lambda x: (1, x[0])
    assert incremental_fixpoints(op, L) == all_fixpoints(op, L)
    assert incremental_lfp(op, L) == lfp(op, L)


def test_component_operator():
    L = _prod()
    c = component(lambda x: (1, 1 - x[0]), L, 1, {0: 1})
    assert c(0) == 0 and c(1) == 0


def test_incremental_well_founded_matches():
    L = _prod()
    # q <- not p, p <- true
    A = Approximation(L, lambda x, y: (1, 1 - y[0]), lambda x, y: (1, 1 - x[0]))
    assert is_stratifiable_approximation(A, L)
    assert incremental_well_founded(A, L) == well_founded(A)
    ca = component_approximation(A, L, 1, {0: 1}, {0: 1})
    assert ca.first(0, 1) == 0
