"""Finite stratum posets and alphabet splittings.

Pure data; nothing here depends on the lattice machinery, so the oracle
module may use it freely.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence


class PosetError(ValueError):
    pass


@dataclass(frozen=True)
class StratumPoset:
    """A finite partial order on stratum indices.

    ``below`` holds the strict relation as (i, j) pairs meaning i ≺ j; the
    constructor closes it transitively and rejects cycles.
    """

    indices: tuple
    below: frozenset = frozenset()
    _closure: dict = field(default=None, repr=False, compare=False, hash=False)
    _linear: tuple = field(default=None, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if len(set(self.indices)) != len(self.indices):
            raise PosetError("duplicate stratum index")
        known = set(self.indices)
        for i, j in self.below:
            if i not in known or j not in known:
                raise PosetError(f"order mentions unknown stratum {i!r} or {j!r}")
        succ = {i: set() for i in self.indices}
        for i, j in self.below:
            if i == j:
                raise PosetError(f"stratum {i!r} cannot precede itself")
            succ[i].add(j)
        # strict down-sets: pred[j] = {i | i ≺ j}
        pred = {i: set() for i in self.indices}
        for start in self.indices:
            stack = list(succ[start])
            seen = set()
            while stack:
                node = stack.pop()
                if node in seen:
                    continue
                seen.add(node)
                stack.extend(succ[node])
            if start in seen:
                raise PosetError(f"order is cyclic through stratum {start!r}")
            for node in seen:
                pred[node].add(start)
        object.__setattr__(self, "_closure", {i: frozenset(p) for i, p in pred.items()})
        object.__setattr__(
            self, "below", frozenset((i, j) for j, ps in pred.items() for i in ps)
        )
        object.__setattr__(self, "_linear", self._topological())

    @classmethod
    def chain(cls, indices: Sequence[Hashable]) -> "StratumPoset":
        idx = tuple(indices)
        return cls(idx, frozenset(zip(idx, idx[1:])))

    @classmethod
    def antichain(cls, indices: Sequence[Hashable]) -> "StratumPoset":
        return cls(tuple(indices))

    def precedes(self, i, j) -> bool:
        """i ≺ j (strict)."""
        return i in self._closure[j]

    def leq(self, i, j) -> bool:
        return i == j or i in self._closure[j]

    def strictly_below(self, i) -> frozenset:
        return self._closure[i]

    def downset(self, i) -> frozenset:
        return self._closure[i] | {i}

    def _topological(self) -> tuple:
        position = {i: n for n, i in enumerate(self.indices)}
        remaining = {i: set(self._closure[i]) for i in self.indices}
        order = []
        while remaining:
            ready = sorted((i for i, p in remaining.items() if not p), key=position.get)
            nxt = ready[0]
            order.append(nxt)
            del remaining[nxt]
            for p in remaining.values():
                p.discard(nxt)
        return tuple(order)

    @property
    def linearization(self) -> tuple:
        return self._linear

    def check_linearization(self, order: Sequence) -> tuple:
        order = tuple(order)
        if set(order) != set(self.indices) or len(order) != len(self.indices):
            raise PosetError("linearization must list every stratum exactly once")
        seen = set()
        for i in order:
            if not self._closure[i] <= seen:
                raise PosetError(f"stratum {i!r} listed before one of its predecessors")
            seen.add(i)
        return order

    def levels(self) -> list[tuple]:
        """Antichains of strata whose predecessors all lie in earlier levels.

        Strata inside one level are mutually incomparable and may be solved
        concurrently.
        """
        depth = {}
        for i in self._linear:
            depth[i] = 1 + max((depth[j] for j in self._closure[i]), default=-1)
        out: dict[int, list] = {}
        for i in self._linear:
            out.setdefault(depth[i], []).append(i)
        return [tuple(out[d]) for d in sorted(out)]

    def covers(self) -> list[tuple]:
        """Hasse diagram edges (i, j): i ≺ j with nothing strictly between."""
        edges = []
        for i, j in sorted(self.below, key=lambda e: (self.indices.index(e[0]), self.indices.index(e[1]))):
            if not any(i in self._closure[k] and k in self._closure[j] for k in self.indices):
                edges.append((i, j))
        return edges


@dataclass(frozen=True)
class Splitting:
    """A partition of an alphabet indexed by a stratum poset."""

    poset: StratumPoset
    blocks: Mapping  # index -> tuple of atom names

    def __post_init__(self):
        blocks = {i: tuple(self.blocks[i]) for i in self.poset.indices}
        if set(self.blocks) != set(self.poset.indices):
            raise PosetError("every stratum needs exactly one block")
        owner = {}
        for i, atoms in blocks.items():
            for a in atoms:
                if a in owner:
                    raise PosetError(f"atom {a!r} appears in strata {owner[a]!r} and {i!r}")
                owner[a] = i
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "_owner", owner)

    @classmethod
    def from_blocks(cls, blocks: Sequence[Iterable[str]], order: Iterable[tuple] = (),
                    names: Sequence[Hashable] | None = None) -> "Splitting":
        names = tuple(names) if names is not None else tuple(range(len(blocks)))
        return cls(StratumPoset(names, frozenset(order)),
                   {n: tuple(b) for n, b in zip(names, blocks)})

    @property
    def indices(self) -> tuple:
        return self.poset.indices

    @property
    def atoms(self) -> frozenset:
        return frozenset(self._owner)

    def stratum_of(self, atom: str):
        try:
            return self._owner[atom]
        except KeyError:
            raise PosetError(f"atom {atom!r} is not covered by the splitting") from None

    def covers_exactly(self, alphabet: Iterable[str]) -> bool:
        return set(alphabet) == set(self._owner)

    def atoms_below(self, i) -> frozenset:
        return frozenset(a for j in self.poset.strictly_below(i) for a in self.blocks[j])

    def atoms_upto(self, i) -> frozenset:
        return self.atoms_below(i) | frozenset(self.blocks[i])

    def block_names(self) -> dict:
        return {i: str(i) for i in self.poset.indices}


def condensation(nodes: Sequence[str], edges: Iterable[tuple[str, str]]) -> Splitting:
    """Strongly connected components of a digraph as a splitting.

    An edge (a, b) means b depends on a, so a's component precedes b's.
    Components are named ``s0, s1, ...`` in topological order with ties
    broken by first node occurrence.
    """
    nodes = list(dict.fromkeys(nodes))
    succ = {n: [] for n in nodes}
    for a, b in edges:
        if b not in succ[a]:
            succ[a].append(b)
    # iterative Tarjan
    index_of, low, on_stack = {}, {}, set()
    stack, comps, counter = [], [], 0
    for root in nodes:
        if root in index_of:
            continue
        work = [(root, iter(succ[root]))]
        index_of[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for nxt in it:
                if nxt not in index_of:
                    index_of[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter(succ[nxt])))
                    advanced = True
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], index_of[nxt])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[node])
            if low[node] == index_of[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == node:
                        break
                comps.append(comp)
    position = {n: k for k, n in enumerate(nodes)}
    comp_of = {}
    for c in comps:
        for n in c:
            comp_of[n] = id(c)
    by_id = {id(c): sorted(c, key=position.get) for c in comps}
    order = set()
    for a in nodes:
        for b in succ[a]:
            if comp_of[a] != comp_of[b]:
                order.add((comp_of[a], comp_of[b]))
    # name components by a topological order, ties by first member position
    temp = StratumPoset(tuple(sorted(by_id, key=lambda c: position[by_id[c][0]])), frozenset(order))
    names = {c: f"s{k}" for k, c in enumerate(temp.linearization)}
    poset = StratumPoset(tuple(names[c] for c in temp.linearization),
                         frozenset((names[a], names[b]) for a, b in order))
    return Splitting(poset, {names[c]: tuple(by_id[c]) for c in temp.linearization})
