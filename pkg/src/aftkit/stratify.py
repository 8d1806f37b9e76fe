"""Product lattices over a stratum poset and stratum-by-stratum fixpoints.

Elements of a :class:`ProductLattice` are tuples aligned with
``poset.indices``.  Partial elements (restrictions to a down-set) are plain
dicts from index to factor value.

Every incremental routine accepts an optional ``components`` callback
``components(i, u)`` returning the component operator (or approximation) of
stratum ``i`` in context ``u``.  Frontends use it to supply cheap,
syntactically derived components; without it the generic construction of
:func:`component` is used, which evaluates the global operator.
"""
from __future__ import annotations

import time
from concurrent.futures import Executor
from dataclasses import dataclass
from itertools import product
from typing import Any, Callable, Mapping, Optional, Sequence

from .lattice import (
    Approximation,
    BilatticePair,
    BudgetExceeded,
    FiniteLattice,
    LatticeOperator,
    all_fixpoints,
    approximation_fixpoints,
    kripke_kleene,
    lfp,
    resolve_budget,
    stable_fixpoints,
    well_founded,
)
from .poset import StratumPoset


class ProductLattice(FiniteLattice):
    """⊗ L_i ordered componentwise."""

    def __init__(self, poset: StratumPoset, factors: Mapping):
        if set(factors) != set(poset.indices):
            raise ValueError("need exactly one factor lattice per stratum")
        self.poset = poset
        self.factors = {i: factors[i] for i in poset.indices}
        self.position = {i: k for k, i in enumerate(poset.indices)}
        self.bottom = tuple(self.factors[i].bottom for i in poset.indices)
        self.top = tuple(self.factors[i].top for i in poset.indices)

    def factor(self, i) -> FiniteLattice:
        return self.factors[i]

    def leq(self, x, y):
        return all(self.factors[i].leq(a, b) for i, a, b in zip(self.poset.indices, x, y))

    def glb(self, x, y):
        return tuple(self.factors[i].glb(a, b) for i, a, b in zip(self.poset.indices, x, y))

    def lub(self, x, y):
        return tuple(self.factors[i].lub(a, b) for i, a, b in zip(self.poset.indices, x, y))

    def elements(self):
        return product(*(list(self.factors[i].elements()) for i in self.poset.indices))

    @property
    def size(self):
        n = 1
        for f in self.factors.values():
            if f.size is None:
                return None
            n *= f.size
        return n

    @property
    def height(self):
        total = 0
        for f in self.factors.values():
            if f.height is None:
                return None
            total += f.height
        return total

    def sort_key(self, x):
        return tuple(self.factors[i].sort_key(a) for i, a in zip(self.poset.indices, x))

    # restriction / extension

    def value(self, x, i):
        return x[self.position[i]]

    def restrict(self, x, indices) -> dict:
        return {i: x[self.position[i]] for i in self.poset.indices if i in indices}

    def below(self, x, i) -> dict:
        """x restricted to the strata strictly below i."""
        return self.restrict(x, self.poset.strictly_below(i))

    def upto(self, x, i) -> dict:
        return self.restrict(x, self.poset.downset(i))

    def extend(self, partial: Mapping, fill: str = "bottom") -> tuple:
        """Complete a partial element, filling missing strata with factor bottoms (or tops)."""
        return tuple(
            partial[i] if i in partial else getattr(self.factors[i], fill)
            for i in self.poset.indices
        )

    def from_dict(self, d: Mapping) -> tuple:
        return tuple(d[i] for i in self.poset.indices)

    def to_dict(self, x) -> dict:
        return dict(zip(self.poset.indices, x))


def bilattice_view(pair) -> tuple:
    """(x, y) with tuple components -> tuple of per-stratum pairs."""
    return tuple(BilatticePair(a, b) for a, b in zip(pair[0], pair[1]))


def from_bilattice_view(items: Sequence) -> BilatticePair:
    return BilatticePair(tuple(p[0] for p in items), tuple(p[1] for p in items))


# -- stratifiability ---------------------------------------------------------

def is_stratifiable(op: Callable, prod: ProductLattice, budget: Optional[int] = None) -> bool:
    return stratifiability_witness(op, prod, budget) is None


def stratifiability_witness(op: Callable, prod: ProductLattice, budget: Optional[int] = None):
    """None if op is stratifiable, else (x, y, i) with x|⪯i = y|⪯i but op(x)|⪯i ≠ op(y)|⪯i."""
    xs = prod.enumerate(budget)
    vals = {x: op(x) for x in xs}
    for i in prod.poset.indices:
        down = prod.poset.downset(i)
        seen: dict = {}
        for x in xs:
            key = tuple(sorted(prod.restrict(x, down).items(), key=lambda kv: prod.position[kv[0]]))
            out = tuple(sorted(prod.restrict(vals[x], down).items(), key=lambda kv: prod.position[kv[0]]))
            if key in seen:
                y, prev = seen[key]
                if prev != out:
                    return (y, x, i)
            else:
                seen[key] = (x, out)
    return None


def is_stratifiable_approximation(A: Approximation, prod: ProductLattice,
                                  budget: Optional[int] = None) -> bool:
    """Stratifiability of A read as an operator on ⊗ L_i²."""
    return approximation_stratifiability_witness(A, prod, budget) is None


def approximation_stratifiability_witness(A: Approximation, prod: ProductLattice,
                                          budget: Optional[int] = None):
    xs = prod.enumerate(budget)
    limit = resolve_budget(budget)
    if len(xs) ** 2 > limit:
        raise BudgetExceeded(f"{len(xs)}² pairs exceed budget {limit}")
    for i in prod.poset.indices:
        down = prod.poset.downset(i)
        seen: dict = {}
        for x in xs:
            for y in xs:
                key = (tuple(prod.restrict(x, down).values()), tuple(prod.restrict(y, down).values()))
                r = A.apply(x, y)
                out = (tuple(prod.restrict(r[0], down).values()), tuple(prod.restrict(r[1], down).values()))
                if key in seen:
                    if seen[key][1] != out:
                        return (seen[key][0], (x, y), i)
                else:
                    seen[key] = ((x, y), out)
    return None


# -- components --------------------------------------------------------------

@dataclass(frozen=True)
class ComponentOperator:
    """The operator O_i^u on L_i (callable)."""

    index: Any
    context: Mapping
    fn: Callable

    def __call__(self, a):
        return self.fn(a)

    apply = __call__

    @property
    def image_hint(self):
        return None


def component(op: Callable, prod: ProductLattice, i, u: Mapping) -> ComponentOperator:
    """O_i^u(a) = O(y)(i) for the canonical extension y of u ⊔ a."""
    pos = prod.position[i]
    ctx = dict(u)

    def fn(a):
        full = dict(ctx)
        full[i] = a
        return op(prod.extend(full))[pos]

    return ComponentOperator(i, ctx, fn)


def component_approximation(A: Approximation, prod: ProductLattice, i, u: Mapping,
                            v: Mapping) -> Approximation:
    """A_i^{(u,v)} on L_i², canonical extension with (⊥, ⊤) in unassigned strata."""
    pos = prod.position[i]
    lo, hi = dict(u), dict(v)

    def first(a, b):
        x, y = dict(lo), dict(hi)
        x[i], y[i] = a, b
        return A.first(prod.extend(x, "bottom"), prod.extend(y, "top"))[pos]

    def second(a, b):
        x, y = dict(lo), dict(hi)
        x[i], y[i] = a, b
        return A.second(prod.extend(x, "bottom"), prod.extend(y, "top"))[pos]

    return Approximation(prod.factors[i], first, second, counted=False)


def _default_components(op, prod):
    return lambda i, u: component(op, prod, i, u)


def _default_approx_components(A, prod):
    return lambda i, u: component_approximation(A, prod, i, u[0], u[1])


def _order(prod: ProductLattice, order):
    return prod.poset.linearization if order is None else prod.poset.check_linearization(order)


def _record(trace, i, t0, results):
    if trace is not None:
        trace.append({"stratum": i, "seconds": time.perf_counter() - t0, "results": results})


# -- incremental construction ------------------------------------------------

def incremental_fixpoints(op: Callable, prod: ProductLattice, components=None,
                          order=None, budget: Optional[int] = None,
                          keep: Optional[Callable] = None, trace: Optional[list] = None) -> list:
    """All x with x(i) a fixpoint of O_i^{x|≺i} for every i, by depth-first search."""
    comps = components or _default_components(op, prod)
    lin = _order(prod, order)
    out = []

    def dfs(k, assigned):
        if k == len(lin):
            out.append(prod.from_dict(assigned))
            return
        i = lin[k]
        t0 = time.perf_counter()
        u = {j: assigned[j] for j in prod.poset.strictly_below(i)}
        fps = all_fixpoints(comps(i, u), prod.factors[i], budget)
        if keep is not None:
            fps = [a for a in fps if keep(i, a)]
        _record(trace, i, t0, len(fps))
        for a in fps:
            assigned[i] = a
            dfs(k + 1, assigned)
            del assigned[i]

    dfs(0, {})
    return sorted(out, key=prod.sort_key)


def _deterministic(solve_one, prod, order, executor, trace):
    lin = _order(prod, order)
    assigned: dict = {}

    def run(i):
        t0 = time.perf_counter()
        r = solve_one(i, {j: assigned[j] for j in prod.poset.strictly_below(i)})
        return i, r, t0

    if executor is None or order is not None:
        for i in lin:
            _, r, t0 = run(i)
            assigned[i] = r
            _record(trace, i, t0, 1)
    else:
        for level in prod.poset.levels():
            results = list(executor.map(run, level))
            for i, r, t0 in results:
                assigned[i] = r
                _record(trace, i, t0, 1)
    return assigned


def incremental_lfp(op: Callable, prod: ProductLattice, components=None, order=None,
                    executor: Optional[Executor] = None, trace: Optional[list] = None):
    """x(i) = lfp(O_i^{x|≺i}), stratum by stratum."""
    comps = components or _default_components(op, prod)
    assigned = _deterministic(lambda i, u: lfp(comps(i, u), prod.factors[i]),
                              prod, order, executor, trace)
    return prod.from_dict(assigned)


def _approx_search(solve, A, prod, components, order, keep, trace, budget):
    comps = components or _default_approx_components(A, prod)
    lin = _order(prod, order)
    out = []

    def dfs(k, lo, hi):
        if k == len(lin):
            out.append(BilatticePair(prod.from_dict(lo), prod.from_dict(hi)))
            return
        i = lin[k]
        t0 = time.perf_counter()
        below = prod.poset.strictly_below(i)
        u = ({j: lo[j] for j in below}, {j: hi[j] for j in below})
        fps = solve(comps(i, u), budget)
        if keep is not None:
            fps = [p for p in fps if keep(i, p)]
        _record(trace, i, t0, len(fps))
        for a, b in fps:
            lo[i], hi[i] = a, b
            dfs(k + 1, lo, hi)
            del lo[i], hi[i]

    dfs(0, {}, {})
    bil = A.bilattice if isinstance(A, Approximation) else None
    key = bil.sort_key if bil is not None else (lambda p: (prod.sort_key(p[0]), prod.sort_key(p[1])))
    return sorted(out, key=key)


def incremental_stable_fixpoints(A: Optional[Approximation], prod: ProductLattice, components=None,
                                 order=None, keep: Optional[Callable] = None,
                                 trace: Optional[list] = None, budget: Optional[int] = None) -> list:
    """Stable fixpoints assembled from stable fixpoints of the component approximations.

    ``A`` may be None when ``components`` is given.  ``keep(i, pair)`` can
    reject per-stratum candidates before branching on them.
    """
    return _approx_search(stable_fixpoints, A, prod, components, order, keep, trace, budget)


def incremental_approximation_fixpoints(A: Optional[Approximation], prod: ProductLattice,
                                        components=None, order=None,
                                        keep: Optional[Callable] = None,
                                        trace: Optional[list] = None,
                                        budget: Optional[int] = None) -> list:
    """Fixpoints of A assembled from fixpoints of the component approximations."""
    return _approx_search(approximation_fixpoints, A, prod, components, order, keep, trace, budget)


def _pair_deterministic(solve, A, prod, components, order, executor, trace):
    comps = components or _default_approx_components(A, prod)
    lin = _order(prod, order)
    lo: dict = {}
    hi: dict = {}

    def run(i):
        t0 = time.perf_counter()
        below = prod.poset.strictly_below(i)
        r = solve(comps(i, ({j: lo[j] for j in below}, {j: hi[j] for j in below})))
        return i, r, t0

    if executor is None or order is not None:
        for i in lin:
            _, r, t0 = run(i)
            lo[i], hi[i] = r
            _record(trace, i, t0, 1)
    else:
        for level in prod.poset.levels():
            for i, r, t0 in list(executor.map(run, level)):
                lo[i], hi[i] = r
                _record(trace, i, t0, 1)
    return BilatticePair(prod.from_dict(lo), prod.from_dict(hi))


def incremental_well_founded(A: Optional[Approximation], prod: ProductLattice, components=None,
                             order=None, executor: Optional[Executor] = None,
                             trace: Optional[list] = None) -> BilatticePair:
    """(x, y)(i) = lfp(C of the component approximation at (x, y)|≺i)."""
    return _pair_deterministic(well_founded, A, prod, components, order, executor, trace)


def incremental_kripke_kleene(A: Optional[Approximation], prod: ProductLattice, components=None,
                              order=None, executor: Optional[Executor] = None,
                              trace: Optional[list] = None) -> BilatticePair:
    """(x, y)(i) = least ≤p fixpoint of the component approximation at (x, y)|≺i."""
    return _pair_deterministic(kripke_kleene, A, prod, components, order, executor, trace)


def exact_components(pair_components: Callable) -> Callable:
    """Turn a provider of component approximations into one of exact component
    operators: stratum ``i`` in context ``u`` maps ``a`` to A_i^{(u,u)}¹(a, a)."""

    def comps(i, u):
        A = pair_components(i, (u, u))
        return LatticeOperator(lambda a: A.first(a, a), image_hint=A.image_hint, counted=False)

    return comps
