"""Finite complete lattices, operators, approximations and their fixpoints.

Everything is computed by explicit iteration or enumeration; lattices are
assumed finite throughout.  Powerset and possible-world-structure lattices
use Python ints as bitsets.
"""
from __future__ import annotations

import contextvars
import os
from contextlib import contextmanager
from dataclasses import dataclass, field
from functools import reduce
from itertools import product
from typing import Any, Callable, Hashable, Iterable, Iterator, NamedTuple, Optional, Sequence

DEFAULT_BUDGET = 1 << 20


class LatticeError(Exception):
    pass


class BudgetExceeded(LatticeError):
    """An enumeration would visit more elements than the configured budget."""


class MonotonicityError(LatticeError):
    def __init__(self, message, before=None, after=None):
        super().__init__(message)
        self.before = before
        self.after = after


class NotExactError(LatticeError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def resolve_budget(budget: Optional[int]) -> int:
    if budget is not None:
        return budget
    env = os.environ.get("AFTKIT_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


# -- application counting ---------------------------------------------------

_counter: contextvars.ContextVar = contextvars.ContextVar("aftkit_applications", default=None)


@contextmanager
def count_applications():
    """Count primitive operator applications made inside the block.

    Yields a one-element list whose single entry holds the running count.
    """
    box = [0]
    token = _counter.set(box)
    try:
        yield box
    finally:
        _counter.reset(token)


def _tick():
    box = _counter.get()
    if box is not None:
        box[0] += 1


# -- lattices ---------------------------------------------------------------

class FiniteLattice:
    """A finite complete lattice.

    Subclasses supply ``leq``, ``glb``, ``lub``, ``bottom``, ``top`` and, when
    they can, ``elements`` and ``size``.
    """

    bottom: Any
    top: Any

    def leq(self, x, y) -> bool:
        raise NotImplementedError

    def glb(self, x, y):
        raise NotImplementedError

    def lub(self, x, y):
        raise NotImplementedError

    def elements(self) -> Iterator:
        raise LatticeError(f"{type(self).__name__} cannot enumerate its elements")

    @property
    def size(self) -> Optional[int]:
        return None

    @property
    def height(self) -> Optional[int]:
        """Length of the longest chain, when known."""
        return None

    def meet(self, xs: Iterable):
        return reduce(self.glb, xs, self.top)

    def join(self, xs: Iterable):
        return reduce(self.lub, xs, self.bottom)

    def sort_key(self, x):
        return x

    def lt(self, x, y) -> bool:
        return x != y and self.leq(x, y)

    def enumerate(self, budget: Optional[int] = None) -> list:
        limit = resolve_budget(budget)
        n = self.size
        if n is not None and n > limit:
            raise BudgetExceeded(f"lattice has {n} elements, budget is {limit}")
        out = []
        for x in self.elements():
            out.append(x)
            if len(out) > limit:
                raise BudgetExceeded(f"lattice exceeds budget of {limit} elements")
        return out


class PowersetLattice(FiniteLattice):
    """Subsets of an n-element universe as n-bit ints, ordered by inclusion."""

    def __init__(self, n: int):
        self.n = n
        self.bottom = 0
        self.top = (1 << n) - 1

    def leq(self, x, y):
        return x & ~y == 0

    def glb(self, x, y):
        return x & y

    def lub(self, x, y):
        return x | y

    def elements(self):
        return iter(range(1 << self.n))

    @property
    def size(self):
        return 1 << self.n

    @property
    def height(self):
        return self.n

    def __eq__(self, other):
        return type(other) is PowersetLattice and other.n == self.n

    def __hash__(self):
        return hash(("powerset", self.n))

    def __repr__(self):
        return f"PowersetLattice({self.n})"


class PwsLattice(FiniteLattice):
    """Possible world structures over n atoms in the knowledge order.

    A structure is a bitset over the 2**n interpretations.  More worlds means
    less knowledge: Q ≤ Q' iff Q ⊇ Q', so bottom is the full set and top is
    the empty one.
    """

    def __init__(self, n: int):
        self.n = n
        self.worlds = 1 << n
        self.full = (1 << self.worlds) - 1
        self.bottom = self.full
        self.top = 0

    def leq(self, x, y):
        return y & ~x == 0

    def glb(self, x, y):
        return x | y

    def lub(self, x, y):
        return x & y

    def elements(self):
        return iter(range(1 << self.worlds))

    @property
    def size(self):
        return 1 << self.worlds

    @property
    def height(self):
        return self.worlds

    def __eq__(self, other):
        return type(other) is PwsLattice and other.n == self.n

    def __hash__(self):
        return hash(("pws", self.n))

    def __repr__(self):
        return f"PwsLattice({self.n})"


class ChainLattice(FiniteLattice):
    """The chain 0 < 1 < ... < n-1."""

    def __init__(self, n: int):
        if n < 1:
            raise LatticeError("a lattice needs at least one element")
        self.n = n
        self.bottom = 0
        self.top = n - 1

    def leq(self, x, y):
        return x <= y

    def glb(self, x, y):
        return min(x, y)

    def lub(self, x, y):
        return max(x, y)

    def elements(self):
        return iter(range(self.n))

    @property
    def size(self):
        return self.n

    @property
    def height(self):
        return self.n - 1


class ExplicitLattice(FiniteLattice):
    """A lattice given by an element list and an order predicate.

    Meets and joins are found by search, so this is meant for small
    hand-built examples and randomly generated test lattices.
    """

    def __init__(self, elements: Sequence[Hashable], leq: Callable[[Any, Any], bool]):
        self._elements = tuple(elements)
        self._leq = leq
        self._rank = {x: k for k, x in enumerate(self._elements)}
        lows = [x for x in self._elements if all(leq(x, y) for y in self._elements)]
        highs = [x for x in self._elements if all(leq(y, x) for y in self._elements)]
        if len(lows) != 1 or len(highs) != 1:
            raise LatticeError("order has no unique bottom/top")
        self.bottom, self.top = lows[0], highs[0]
        self._glb = {}
        self._lub = {}
        for x in self._elements:
            for y in self._elements:
                lower = [z for z in self._elements if leq(z, x) and leq(z, y)]
                upper = [z for z in self._elements if leq(x, z) and leq(y, z)]
                g = [z for z in lower if all(leq(w, z) for w in lower)]
                u = [z for z in upper if all(leq(z, w) for w in upper)]
                if len(g) != 1 or len(u) != 1:
                    raise LatticeError(f"elements {x!r} and {y!r} lack a unique glb/lub")
                self._glb[x, y] = g[0]
                self._lub[x, y] = u[0]

    def leq(self, x, y):
        return self._leq(x, y)

    def glb(self, x, y):
        return self._glb[x, y]

    def lub(self, x, y):
        return self._lub[x, y]

    def elements(self):
        return iter(self._elements)

    @property
    def size(self):
        return len(self._elements)

    def sort_key(self, x):
        return self._rank[x]


def check_lattice(lat: FiniteLattice, budget: Optional[int] = None) -> None:
    """Exhaustively verify the lattice laws; raise LatticeError on failure."""
    xs = lat.enumerate(budget)
    for x in xs:
        if not lat.leq(x, x):
            raise LatticeError(f"leq not reflexive at {x!r}")
        if not (lat.leq(lat.bottom, x) and lat.leq(x, lat.top)):
            raise LatticeError(f"{x!r} escapes bottom/top")
    for x in xs:
        for y in xs:
            if x != y and lat.leq(x, y) and lat.leq(y, x):
                raise LatticeError(f"leq not antisymmetric at {x!r}, {y!r}")
            g, u = lat.glb(x, y), lat.lub(x, y)
            if not (lat.leq(g, x) and lat.leq(g, y) and lat.leq(x, u) and lat.leq(y, u)):
                raise LatticeError(f"bound law fails at {x!r}, {y!r}")
            for z in xs:
                if lat.leq(x, y) and lat.leq(y, z) and not lat.leq(x, z):
                    raise LatticeError(f"leq not transitive at {x!r}, {y!r}, {z!r}")
                if lat.leq(z, x) and lat.leq(z, y) and not lat.leq(z, g):
                    raise LatticeError(f"glb not greatest at {x!r}, {y!r}")
                if lat.leq(x, z) and lat.leq(y, z) and not lat.leq(u, z):
                    raise LatticeError(f"lub not least at {x!r}, {y!r}")


# -- bilattice --------------------------------------------------------------

class BilatticePair(NamedTuple):
    """An (under-estimate, over-estimate) pair of lattice elements."""

    lower: Any
    upper: Any

    def swap(self) -> "BilatticePair":
        return BilatticePair(self.upper, self.lower)

    def is_exact(self) -> bool:
        return self.lower == self.upper

    def is_consistent(self, lat: FiniteLattice) -> bool:
        return lat.leq(self.lower, self.upper)


class Bilattice(FiniteLattice):
    """L² under the precision order."""

    def __init__(self, base: FiniteLattice):
        self.base = base
        self.bottom = BilatticePair(base.bottom, base.top)
        self.top = BilatticePair(base.top, base.bottom)

    def leq(self, a, b):
        return self.base.leq(a[0], b[0]) and self.base.leq(b[1], a[1])

    def glb(self, a, b):
        return BilatticePair(self.base.glb(a[0], b[0]), self.base.lub(a[1], b[1]))

    def lub(self, a, b):
        return BilatticePair(self.base.lub(a[0], b[0]), self.base.glb(a[1], b[1]))

    def elements(self):
        xs = list(self.base.elements())
        return (BilatticePair(x, y) for x, y in product(xs, xs))

    @property
    def size(self):
        n = self.base.size
        return None if n is None else n * n

    @property
    def height(self):
        h = self.base.height
        return None if h is None else 2 * h

    def sort_key(self, a):
        return (self.base.sort_key(a[0]), self.base.sort_key(a[1]))

    def __eq__(self, other):
        return isinstance(other, Bilattice) and other.base == self.base

    def __hash__(self):
        return hash(("bilattice", self.base))


# -- operators --------------------------------------------------------------

class LatticeOperator:
    """A total function from a lattice to itself.

    ``image_hint`` may name a finite collection known to contain every value
    the operator can return; fixpoint scans then visit only that collection
    (a fixpoint is always its own image).
    """

    def __init__(self, fn: Callable, monotone_declared: bool = False,
                 image_hint: Optional[Iterable] = None, counted: bool = True):
        self._fn = fn
        self.monotone_declared = monotone_declared
        self.image_hint = image_hint
        self.counted = counted

    def __call__(self, x):
        if self.counted:
            _tick()
        return self._fn(x)

    apply = __call__


class Approximation:
    """A ≤p-monotone operator on the bilattice of ``lattice``.

    Built from its two projections ``first(x, y)`` and ``second(x, y)``.
    """

    def __init__(self, lattice: FiniteLattice, first: Callable, second: Callable,
                 image_hint: Optional[Iterable] = None, symmetric_declared: bool = False,
                 counted: bool = True):
        self.lattice = lattice
        self._first = first
        self._second = second
        self.image_hint = image_hint
        self.symmetric_declared = symmetric_declared
        self.counted = counted

    @classmethod
    def from_function(cls, lattice: FiniteLattice, fn: Callable, **kw) -> "Approximation":
        """Wrap a pair-valued function; each projection re-evaluates ``fn``."""
        return cls(lattice, lambda x, y: fn(x, y)[0], lambda x, y: fn(x, y)[1], **kw)

    def first(self, x, y):
        if self.counted:
            _tick()
        return self._first(x, y)

    def second(self, x, y):
        if self.counted:
            _tick()
        return self._second(x, y)

    def __call__(self, pair) -> BilatticePair:
        x, y = pair
        return BilatticePair(self.first(x, y), self.second(x, y))

    def apply(self, x, y) -> BilatticePair:
        return BilatticePair(self.first(x, y), self.second(x, y))

    @property
    def bilattice(self) -> Bilattice:
        return Bilattice(self.lattice)

    def as_operator(self) -> LatticeOperator:
        return LatticeOperator(self.__call__, monotone_declared=True, counted=False)

    def candidates(self, budget: Optional[int] = None) -> list:
        """Elements of L that may occur as a projection value."""
        if self.image_hint is not None:
            hint = list(dict.fromkeys(self.image_hint))
            limit = resolve_budget(budget)
            if len(hint) > limit:
                raise BudgetExceeded(f"image hint has {len(hint)} elements, budget is {limit}")
            return sorted(hint, key=self.lattice.sort_key)
        return self.lattice.enumerate(budget)


# -- least fixpoints ---------------------------------------------------------

def lfp(op: Callable, lat: FiniteLattice, start=None):
    """Least fixpoint of a monotone operator by Kleene iteration from bottom.

    Raises MonotonicityError as soon as an iterate fails to lie above its
    predecessor; on a finite lattice a strictly ascending chain must stop.
    """
    x = lat.bottom if start is None else start
    steps = 0
    limit = lat.height
    while True:
        nxt = op(x)
        if nxt == x:
            return x
        if not lat.leq(x, nxt):
            raise MonotonicityError(
                f"iteration descended after {steps} steps: {x!r} -> {nxt!r}", x, nxt)
        x = nxt
        steps += 1
        if limit is not None and steps > limit:
            raise MonotonicityError(f"iteration exceeded lattice height {limit}", x, nxt)


def all_fixpoints(op: Callable, lat: FiniteLattice, budget: Optional[int] = None) -> list:
    """Every x with op(x) == x, in canonical order."""
    hint = getattr(op, "image_hint", None)
    if hint is not None:
        cands = list(dict.fromkeys(hint))
        limit = resolve_budget(budget)
        if len(cands) > limit:
            raise BudgetExceeded(f"image hint has {len(cands)} elements, budget is {limit}")
    else:
        cands = lat.enumerate(budget)
    return sorted((x for x in cands if op(x) == x), key=lat.sort_key)


def is_monotone(op: Callable, lat: FiniteLattice, budget: Optional[int] = None):
    """Return None if monotone, else a witness pair (x, y) with x ≤ y, op(x) ≰ op(y)."""
    xs = lat.enumerate(budget)
    vals = {x: op(x) for x in xs}
    for x in xs:
        for y in xs:
            if lat.leq(x, y) and not lat.leq(vals[x], vals[y]):
                return (x, y)
    return None


# -- approximation theory ---------------------------------------------------

def lower_stable(A: Approximation, y):
    """lfp of x ↦ A¹(x, y)."""
    return lfp(lambda x: A.first(x, y), A.lattice)


def upper_stable(A: Approximation, x):
    """lfp of y ↦ A²(x, y)."""
    return lfp(lambda y: A.second(x, y), A.lattice)


def partial_stable(A: Approximation) -> Approximation:
    """The operator (x, y) ↦ (lower_stable(A, y), upper_stable(A, x))."""
    return Approximation(
        A.lattice,
        lambda x, y: lower_stable(A, y),
        lambda x, y: upper_stable(A, x),
        image_hint=A.image_hint,
        counted=False,
    )


def kripke_kleene(A: Approximation) -> BilatticePair:
    return BilatticePair(*lfp(A, A.bilattice))


def well_founded(A: Approximation) -> BilatticePair:
    C = partial_stable(A)
    return BilatticePair(*lfp(C, A.bilattice))


def stable_fixpoints(A: Approximation, budget: Optional[int] = None) -> list:
    """All fixpoints of the partial stable operator.

    A fixpoint (x, y) has y = upper_stable(A, x), a value of A², so scanning
    the candidate upper bounds y and solving x = lower_stable(A, y) is
    exhaustive.
    """
    out = []
    for y in A.candidates(budget):
        x = lower_stable(A, y)
        if upper_stable(A, x) == y:
            out.append(BilatticePair(x, y))
    return sorted(out, key=A.bilattice.sort_key)


def approximation_fixpoints(A: Approximation, budget: Optional[int] = None) -> list:
    """All (x, y) with A(x, y) == (x, y)."""
    cands = A.candidates(budget)
    limit = resolve_budget(budget)
    if len(cands) ** 2 > limit:
        raise BudgetExceeded(f"{len(cands)}² candidate pairs exceed budget {limit}")
    out = []
    for y in cands:
        for x in cands:
            if A.first(x, y) == x and A.second(x, y) == y:
                out.append(BilatticePair(x, y))
    return sorted(out, key=A.bilattice.sort_key)


def exact_operator(A: Approximation, budget: Optional[int] = None) -> LatticeOperator:
    """The operator x ↦ A¹(x, x) approximated by an exact A."""
    for x in A.lattice.enumerate(budget):
        if A.first(x, x) != A.second(x, x):
            raise NotExactError(f"approximation is not exact at {x!r}", witness=x)
    return LatticeOperator(lambda x: A.first(x, x), image_hint=A.image_hint, counted=False)


def exact_operator_unchecked(A: Approximation) -> LatticeOperator:
    return LatticeOperator(lambda x: A.first(x, x), image_hint=A.image_hint, counted=False)


def extensions(A: Approximation, budget: Optional[int] = None) -> list:
    """Fixpoints of the lower stable operator y ↦ lower_stable(A, y)."""
    out = [y for y in A.candidates(budget) if lower_stable(A, y) == y]
    return sorted(out, key=A.lattice.sort_key)


def check_approximation(A: Approximation, budget: Optional[int] = None):
    """None if A is ≤p-monotone; else a witness pair of bilattice elements."""
    return is_monotone(A, A.bilattice, budget)


def is_symmetric(A: Approximation, budget: Optional[int] = None) -> bool:
    xs = A.lattice.enumerate(budget)
    return all(A.first(x, y) == A.second(y, x) for x in xs for y in xs)


def is_exact(A: Approximation, budget: Optional[int] = None) -> bool:
    return all(A.first(x, x) == A.second(x, x) for x in A.lattice.enumerate(budget))


def is_consistent(A: Approximation, budget: Optional[int] = None) -> bool:
    lat = A.lattice
    xs = lat.enumerate(budget)
    return all(lat.leq(A.first(x, y), A.second(x, y))
               for x in xs for y in xs if lat.leq(x, y))


# -- mimicking --------------------------------------------------------------

@dataclass
class MimicWitness:
    """A map ``k`` from the source lattice into the target lattice, together
    with a source operator that is meant to mimic a target operator.

    ``domain`` optionally restricts every check to a subset of the source
    (for instance its consistent elements).  Chain continuity of ``k`` holds
    automatically because every chain in a finite lattice is finite.
    """

    source: FiniteLattice
    target: FiniteLattice
    k: Callable
    source_op: Callable
    target_op: Callable
    domain: Optional[Iterable] = None


@dataclass
class MimicReport:
    commutes: bool = True
    image_covered: bool = True
    central_elements: bool = True
    source_monotone: bool = True
    fixpoints_match: Optional[bool] = None
    lfp_match: Optional[bool] = None
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_mimics(w: MimicWitness, budget: Optional[int] = None) -> MimicReport:
    rep = MimicReport()
    src = list(w.domain) if w.domain is not None else w.source.enumerate(budget)
    src_set = set(src)
    kv = {x: w.k(x) for x in src}

    for x in src:
        ox = w.source_op(x)
        if w.domain is not None and ox not in src_set:
            continue
        if w.k(ox) != w.target_op(kv[x]):
            rep.commutes = False
            rep.violations.append(("commutation", x))
            break

    image = set(kv.values())
    targets = list(image) if w.domain is not None else w.target.enumerate(budget)
    for y in targets:
        if w.target_op(y) not in image:
            rep.image_covered = False
            rep.violations.append(("image", y))
            break

    pre: dict = {}
    for x, y in kv.items():
        pre.setdefault(y, []).append(x)
    for y, fibre in pre.items():
        if not any(all(w.source.leq(c, z) or w.source.leq(z, c) for z in fibre) for c in fibre):
            rep.central_elements = False
            rep.violations.append(("central", y))
            break

    src_vals = {x: w.source_op(x) for x in src}
    for x in src:
        for z in src:
            if w.source.leq(x, z) and not w.source.leq(src_vals[x], src_vals[z]):
                rep.source_monotone = False
                rep.violations.append(("monotone", (x, z)))
                break
        if not rep.source_monotone:
            break

    if rep.ok:
        src_fp = {kv[x] for x in src if src_vals[x] == x}
        tgt_fp = {y for y in targets if w.target_op(y) == y}
        rep.fixpoints_match = src_fp == tgt_fp
        if not rep.fixpoints_match:
            rep.violations.append(("fixpoints", sorted(src_fp ^ tgt_fp, key=repr)[:1]))
        if w.domain is None:
            rep.lfp_match = w.k(lfp(w.source_op, w.source)) == lfp(w.target_op, w.target)
            if not rep.lfp_match:
                rep.violations.append(("lfp", None))
    return rep
