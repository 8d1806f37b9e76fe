"""Ground normal logic programs: four-valued evaluation, the Fitting
approximation, the four classical semantics and splitting-based solving.

Interpretations are ints over the program alphabet: bit k is ``alphabet[k]``.
"""
from __future__ import annotations

from concurrent.futures import Executor
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .lattice import (
    Approximation,
    BilatticePair,
    LatticeOperator,
    PowersetLattice,
    all_fixpoints,
    kripke_kleene,
    stable_fixpoints,
    well_founded,
)
from .poset import Splitting, condensation
from .stratify import (
    ProductLattice,
    exact_components,
    incremental_fixpoints,
    incremental_kripke_kleene,
    incremental_stable_fixpoints,
    incremental_well_founded,
)
from .theory import AlphabetError, Clause, Literal, Program

SEMANTICS = ("supported", "kk", "stable", "wf")


class SplittingError(ValueError):
    def __init__(self, message, edge=None):
        super().__init__(message)
        self.edge = edge


# -- compilation -------------------------------------------------------------

@dataclass(frozen=True)
class Rule:
    head: int  # single-bit mask
    pos: int
    neg: int


def compile_rules(P: Program, index: Optional[Mapping[str, int]] = None) -> tuple:
    """Bitmask rules; clauses with a false constant vanish, true constants are dropped."""
    if index is None:
        index = {a: k for k, a in enumerate(P.alphabet)}
    rules = []
    for c in P.clauses:
        pos = neg = 0
        dead = False
        for b in c.body:
            if isinstance(b, bool):
                if not b:
                    dead = True
                continue
            try:
                bit = 1 << index[b.atom]
            except KeyError:
                raise AlphabetError(f"atom {b.atom!r} is not in the alphabet") from None
            if b.positive:
                pos |= bit
            else:
                neg |= bit
        if not dead:
            rules.append(Rule(1 << index[c.head], pos, neg))
    return tuple(rules)


def _up(rules, X: int, Y: int) -> int:
    out = 0
    for r in rules:
        if r.pos & ~X == 0 and r.neg & Y == 0:
            out |= r.head
    return out


def encode(P: Program, atoms: Iterable[str]) -> int:
    index = {a: k for k, a in enumerate(P.alphabet)}
    mask = 0
    for a in atoms:
        try:
            mask |= 1 << index[a]
        except KeyError:
            raise AlphabetError(f"atom {a!r} is not in the alphabet") from None
    return mask


def decode(P: Program, mask: int) -> frozenset:
    return frozenset(a for k, a in enumerate(P.alphabet) if mask >> k & 1)


def decode_pair(P: Program, pair) -> tuple:
    return (decode(P, pair[0]), decode(P, pair[1]))


# -- evaluation --------------------------------------------------------------

def eval_literal(pair, lit, alphabet=None) -> bool:
    """H_{(X,Y)} of a single body item; X, Y are atom sets."""
    X, Y = pair
    if isinstance(lit, bool):
        return lit
    if alphabet is not None and lit.atom not in alphabet:
        raise AlphabetError(f"atom {lit.atom!r} is not in the alphabet")
    return lit.atom in X if lit.positive else lit.atom not in Y


def eval_body(pair, body, alphabet=None) -> bool:
    """H_{(X,Y)}(body): positive atoms are read in X, negated ones in Y."""
    return all(eval_literal(pair, b, alphabet) for b in body)


def up(P: Program, X, Y):
    """U_P(X, Y).  Accepts and returns atom sets, or ints when given ints."""
    if isinstance(X, int) and isinstance(Y, int):
        return _up(compile_rules(P), X, Y)
    return frozenset(c.head for c in P.clauses if eval_body((X, Y), c.body, set(P.alphabet)))


def fitting(P: Program) -> Approximation:
    """The approximation (X, Y) ↦ (U_P(X, Y), U_P(Y, X)) on 2^Σ."""
    rules = compile_rules(P)
    return Approximation(
        PowersetLattice(len(P.alphabet)),
        lambda X, Y: _up(rules, X, Y),
        lambda X, Y: _up(rules, Y, X),
        symmetric_declared=True,
    )


def tp(P: Program) -> LatticeOperator:
    """Two-valued immediate consequence operator."""
    rules = compile_rules(P)
    return LatticeOperator(lambda X: _up(rules, X, X))


def positive_tp(P: Program) -> LatticeOperator:
    """Consequence operator of a negation-free program (monotone)."""
    rules = compile_rules(P)
    if any(r.neg for r in rules):
        raise ValueError("program has negative body literals")
    return LatticeOperator(lambda X: _up(rules, X, X), monotone_declared=True)


# -- dependency analysis ----------------------------------------------------

def dependency_order(P: Program) -> frozenset:
    """{(p, q) | some clause has head q and p in its body}."""
    return frozenset((p, c.head) for c in P.clauses for p in c.body_atoms())


def compute_splitting(P: Program) -> Splitting:
    """Finest splitting: strongly connected components of the dependency graph."""
    edges = sorted(dependency_order(P), key=lambda e: (P.alphabet.index(e[0]), P.alphabet.index(e[1])))
    return condensation(P.alphabet, edges)


def validate_splitting(P: Program, split: Splitting) -> Splitting:
    if not split.covers_exactly(P.alphabet):
        missing = sorted(set(P.alphabet) - split.atoms)
        extra = sorted(split.atoms - set(P.alphabet))
        raise SplittingError(f"splitting does not partition the alphabet (missing {missing}, unknown {extra})")
    for c in P.clauses:
        j = split.stratum_of(c.head)
        for p in c.body_atoms():
            i = split.stratum_of(p)
            if not split.poset.leq(i, j):
                raise SplittingError(
                    f"dependency {p} -> {c.head} violates the order: stratum {i} of {p} "
                    f"is not below stratum {j} of {c.head}", edge=(p, c.head, i, j))
    return split


def strata_programs(P: Program, split: Splitting) -> dict:
    """P_i: the clauses whose head lies in stratum i."""
    out = {i: [] for i in split.indices}
    for c in P.clauses:
        out[split.stratum_of(c.head)].append(c)
    return {i: tuple(cs) for i, cs in out.items()}


def partial_evaluate(clauses: Iterable[Clause], local: Iterable[str], pair, simplify: bool = True) -> Program:
    """⌊P_i⌋(U, V): literals over atoms outside ``local`` become H_{(U,V)} constants.

    ``pair`` holds the atom sets (U, V) over the lower strata.  With
    ``simplify``, clauses containing f are dropped and t is removed from bodies.
    """
    local = tuple(local)
    keep = set(local)
    U, V = pair
    out = []
    for c in clauses:
        if c.head not in keep:
            raise AlphabetError(f"clause head {c.head!r} is outside the stratum")
        body = []
        dead = False
        for b in c.body:
            if isinstance(b, Literal) and b.atom not in keep:
                b = eval_literal((U, V), b)
            if isinstance(b, bool):
                if simplify:
                    if not b:
                        dead = True
                        break
                    continue
            body.append(b)
        if not dead:
            out.append(Clause(c.head, tuple(body)))
    return Program(local, tuple(out))


class LpStrata:
    """A validated splitting of a program with per-stratum data prepared for solving."""

    def __init__(self, P: Program, split: Optional[Splitting] = None):
        self.program = P
        self.split = validate_splitting(P, split) if split is not None else compute_splitting(P)
        self.blocks = self.split.blocks
        self.clauses = strata_programs(P, self.split)
        self.product = ProductLattice(self.split.poset,
                                      {i: PowersetLattice(len(b)) for i, b in self.blocks.items()})
        gidx = {a: k for k, a in enumerate(P.alphabet)}
        self._global_bits = {i: [gidx[a] for a in b] for i, b in self.blocks.items()}
        self._local_index = {i: {a: k for k, a in enumerate(b)} for i, b in self.blocks.items()}

    def atoms_of(self, i, mask: int) -> set:
        b = self.blocks[i]
        return {b[k] for k in range(len(b)) if mask >> k & 1}

    def context_atoms(self, u: Mapping) -> set:
        out = set()
        for j, m in u.items():
            out |= self.atoms_of(j, m)
        return out

    def component_programs(self, i, u: Mapping, v: Mapping, simplify: bool = True) -> tuple:
        U, V = self.context_atoms(u), self.context_atoms(v)
        con = partial_evaluate(self.clauses[i], self.blocks[i], (U, V), simplify)
        lib = partial_evaluate(self.clauses[i], self.blocks[i], (V, U), simplify)
        return con, lib

    def component_approximation(self, i, u: Mapping, v: Mapping) -> Approximation:
        """(A, B) ↦ (U_{P′}(A, B), U_{P″}(B, A)) with P′ = ⌊P_i⌋(U,V), P″ = ⌊P_i⌋(V,U)."""
        con, lib = self.component_programs(i, u, v)
        r1 = compile_rules(con, self._local_index[i])
        r2 = compile_rules(lib, self._local_index[i])
        return Approximation(self.product.factors[i],
                             lambda A, B: _up(r1, A, B),
                             lambda A, B: _up(r2, B, A))

    def components(self, i, ctx) -> Approximation:
        return self.component_approximation(i, ctx[0], ctx[1])

    def assemble(self, x: tuple) -> int:
        mask = 0
        for i, m in zip(self.product.poset.indices, x):
            bits = self._global_bits[i]
            for k in range(len(bits)):
                if m >> k & 1:
                    mask |= 1 << bits[k]
        return mask

    def assemble_pair(self, pair) -> BilatticePair:
        return BilatticePair(self.assemble(pair[0]), self.assemble(pair[1]))

    def split_element(self, mask: int) -> tuple:
        return tuple(
            sum(1 << k for k, g in enumerate(self._global_bits[i]) if mask >> g & 1)
            for i in self.product.poset.indices
        )


def component_approximation(P: Program, split: Splitting, i, pair) -> Approximation:
    """Component approximation of stratum ``i`` in the context of atom sets (U, V)."""
    st = LpStrata(P, split)
    U, V = (set(pair[0]), set(pair[1]))
    below = split.atoms_below(i)
    if not (U | V) <= below:
        raise AlphabetError("context mentions atoms outside the lower strata")
    u = {j: sum(1 << k for k, a in enumerate(st.blocks[j]) if a in U) for j in split.poset.strictly_below(i)}
    v = {j: sum(1 << k for k, a in enumerate(st.blocks[j]) if a in V) for j in split.poset.strictly_below(i)}
    return st.component_approximation(i, u, v)


# -- semantics ---------------------------------------------------------------

def solve(P: Program, semantics: str, mode: str = "monolithic", splitting: Optional[Splitting] = None,
          exact_only: bool = False, budget: Optional[int] = None, trace: Optional[list] = None,
          executor: Optional[Executor] = None):
    """Models of P as ints (supported), pairs of ints (kk, wf) or lists of pairs (stable)."""
    if semantics not in SEMANTICS:
        raise ValueError(f"unknown semantics {semantics!r}; choose from {', '.join(SEMANTICS)}")
    if mode == "monolithic":
        if splitting is not None:
            validate_splitting(P, splitting)
        return _solve_monolithic(P, semantics, exact_only, budget)
    if mode != "split":
        raise ValueError(f"unknown mode {mode!r}")
    return _solve_split(LpStrata(P, splitting), semantics, exact_only, budget, trace, executor)


def _solve_monolithic(P, semantics, exact_only, budget):
    A = fitting(P)
    if semantics == "supported":
        return all_fixpoints(tp(P), A.lattice, budget)
    if semantics == "kk":
        return kripke_kleene(A)
    if semantics == "wf":
        return well_founded(A)
    out = stable_fixpoints(A, budget)
    return [p for p in out if p.is_exact()] if exact_only else out


def _solve_split(st: LpStrata, semantics, exact_only, budget, trace, executor):
    prod = st.product
    if semantics == "supported":
        xs = incremental_fixpoints(None, prod, components=exact_components(st.components),
                                   budget=budget, trace=trace)
        return sorted(st.assemble(x) for x in xs)
    if semantics == "kk":
        return st.assemble_pair(incremental_kripke_kleene(None, prod, st.components,
                                                         executor=executor, trace=trace))
    if semantics == "wf":
        return st.assemble_pair(incremental_well_founded(None, prod, st.components,
                                                        executor=executor, trace=trace))
    keep = (lambda i, p: p[0] == p[1]) if exact_only else None
    pairs = incremental_stable_fixpoints(None, prod, st.components, keep=keep, trace=trace, budget=budget)
    return sorted((st.assemble_pair(p) for p in pairs), key=lambda p: (p[0], p[1]))


def semantics(P: Program, which: str, mode: str = "monolithic", **kw):
    return solve(P, which, mode, **kw)


def even_prefix(n: int) -> Program:
    """Ground prefix of even(0). odd(X+1) <- even(X). even(X+1) <- odd(X). up to X+1 = n."""
    clauses = [Clause("even(0)")]
    for k in range(n):
        clauses.append(Clause(f"odd({k + 1})", (Literal(f"even({k})"),)))
        clauses.append(Clause(f"even({k + 1})", (Literal(f"odd({k})"),)))
    return Program.build(clauses)
