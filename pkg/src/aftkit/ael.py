"""Auto-epistemic logic over belief pairs of possible world structures.

A world is an int over the alphabet (bit k is ``alphabet[k]``); a possible
world structure is an int over the 2**n worlds.  ``PwsSpace`` holds the
bookkeeping for one alphabet.  ``AelStrata`` adds a stratification: one
local space per stratum, the map κ, the per-stratum operator D̃ and its
components.
"""
from __future__ import annotations

from itertools import product
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    Const,
    Formula,
    K,
    Not,
    Or,
    atoms,
    cnf_clauses,
    conj,
    disj,
    flatten,
    is_objective,
    map_top_modal,
    objective_atoms,
    simplify,
    subformulas,
    to_text,
    top_modal_occurrences,
)
from .lattice import (
    Approximation,
    BilatticePair,
    LatticeOperator,
    PwsLattice,
    approximation_fixpoints,
    extensions,
    kripke_kleene,
    all_fixpoints,
    stable_fixpoints,
    well_founded,
)
from .poset import PosetError, Splitting, condensation
from .stratify import (
    ProductLattice,
    exact_components,
    incremental_approximation_fixpoints,
    incremental_fixpoints,
    incremental_kripke_kleene,
    incremental_stable_fixpoints,
    incremental_well_founded,
)
from .theory import AlphabetError, ModalTheory

SEMANTICS = ("expansions", "partial_expansions", "kk", "extensions", "partial_extensions", "wf")
HINT_LIMIT = 16  # at most 2**16 candidate structures from modal assignments


class StratificationError(ValueError):
    pass


class SemanticRefusal(Exception):
    """A split-mode request the stratification results do not cover."""


# -- possible world structures ------------------------------------------------

class PwsSpace:
    def __init__(self, alphabet: Sequence[str]):
        self.alphabet = tuple(alphabet)
        self.n = len(self.alphabet)
        self.index = {a: k for k, a in enumerate(self.alphabet)}
        self.worlds = 1 << self.n
        self.full = (1 << self.worlds) - 1
        self.atom_mask = {}
        for k, a in enumerate(self.alphabet):
            m = 0
            for w in range(self.worlds):
                if w >> k & 1:
                    m |= 1 << w
            self.atom_mask[a] = m
        self._compiled: dict = {}
        self.lattice = PwsLattice(self.n)

    def world(self, atoms_: Iterable[str]) -> int:
        w = 0
        for a in atoms_:
            try:
                w |= 1 << self.index[a]
            except KeyError:
                raise AlphabetError(f"atom {a!r} is not in the alphabet") from None
        return w

    def world_atoms(self, w: int) -> frozenset:
        return frozenset(a for k, a in enumerate(self.alphabet) if w >> k & 1)

    def pws(self, worlds: Iterable[Iterable[str]]) -> int:
        m = 0
        for x in worlds:
            m |= 1 << self.world(x)
        return m

    def members(self, q: int) -> list:
        return [w for w in range(self.worlds) if q >> w & 1]

    def decode(self, q: int) -> list:
        """Worlds of q as sorted atom lists, in canonical order."""
        order = {a: k for k, a in enumerate(self.alphabet)}
        out = [sorted(self.world_atoms(w), key=order.get) for w in self.members(q)]
        return sorted(out, key=lambda ws: (len(ws), [order[a] for a in ws]))

    def mod(self, phi: Formula) -> int:
        """Models of an objective formula."""
        return self.compile(phi)(0, 0)

    def compile(self, phi: Formula) -> Callable[[int, int], int]:
        """φ ↦ ((P, S) ↦ {X | H_{(P,S),X}(φ) = t})."""
        fn = self._compiled.get(phi)
        if fn is None:
            fn = self._compile(phi)
            self._compiled[phi] = fn
        return fn

    def _compile(self, phi):
        full = self.full
        if is_objective(phi):
            m = self._objective(phi)
            return lambda P, S: m
        if isinstance(phi, Not):
            g = self.compile(phi.arg)
            return lambda P, S: full ^ g(S, P)
        if isinstance(phi, And):
            gs = [self.compile(a) for a in phi.args]

            def f_and(P, S):
                m = full
                for g in gs:
                    m &= g(P, S)
                    if not m:
                        break
                return m
            return f_and
        if isinstance(phi, Or):
            gs = [self.compile(a) for a in phi.args]

            def f_or(P, S):
                m = 0
                for g in gs:
                    m |= g(P, S)
                return m
            return f_or
        if isinstance(phi, K):
            g = self.compile(phi.arg)
            return lambda P, S: full if P & ~g(P, S) == 0 else 0
        raise TypeError(phi)

    def _objective(self, phi):
        if isinstance(phi, Const):
            return self.full if phi.value else 0
        if isinstance(phi, Atom):
            try:
                return self.atom_mask[phi.name]
            except KeyError:
                raise AlphabetError(f"atom {phi.name!r} is not in the alphabet") from None
        if isinstance(phi, Not):
            return self.full ^ self._objective(phi.arg)
        if isinstance(phi, And):
            m = self.full
            for a in phi.args:
                m &= self._objective(a)
            return m
        if isinstance(phi, Or):
            m = 0
            for a in phi.args:
                m |= self._objective(a)
            return m
        raise TypeError(phi)


def evaluate(space: PwsSpace, pair, X: int, phi: Formula) -> bool:
    """H_{(P,S),X}(φ) straight from the inductive definition."""
    P, S = pair
    if isinstance(phi, Const):
        return phi.value
    if isinstance(phi, Atom):
        if phi.name not in space.index:
            raise AlphabetError(f"atom {phi.name!r} is not in the alphabet")
        return bool(X >> space.index[phi.name] & 1)
    if isinstance(phi, Not):
        return not evaluate(space, (S, P), X, phi.arg)
    if isinstance(phi, And):
        return all(evaluate(space, pair, X, a) for a in phi.args)
    if isinstance(phi, Or):
        return any(evaluate(space, pair, X, a) for a in phi.args)
    if isinstance(phi, K):
        return all(evaluate(space, pair, Y, phi.arg) for Y in space.members(P))
    raise TypeError(phi)


def models(space: PwsSpace, phi: Formula, P: int, S: int) -> int:
    return space.compile(phi)(P, S)


def substitute_modal(space: PwsSpace, phi: Formula, P: int, S: int) -> Formula:
    """⌊φ⌋(P, S): every non-nested K-subformula replaced by its truth value."""

    def walk(f, p, s):
        if isinstance(f, K):
            return TRUE if space.compile(f)(p, s) else FALSE
        if isinstance(f, Not):
            return Not(walk(f.arg, s, p))
        if isinstance(f, (And, Or)):
            return type(f)(walk(a, p, s) for a in f.args)
        return f

    return walk(phi, P, S)


def _theory_fns(space, formulas):
    return [space.compile(f) for f in formulas]


def _dtu(fns, full, P, S):
    m = full
    for g in fns:
        m &= g(P, S)
        if not m:
            break
    return m


def dtu(T: ModalTheory, P: int, S: int, space: Optional[PwsSpace] = None) -> int:
    """D^u_T(P, S) = {X | every φ ∈ T has H_{(P,S),X}(φ) = t}."""
    space = space or PwsSpace(T.alphabet)
    return _dtu(_theory_fns(space, T.formulas), space.full, P, S)


def dtu_two_step(T: ModalTheory, P: int, S: int, space: Optional[PwsSpace] = None) -> int:
    """The same set, computed as Mod(⌊T⌋(P, S))."""
    space = space or PwsSpace(T.alphabet)
    m = space.full
    for f in T.formulas:
        m &= space.mod(substitute_modal(space, f, P, S))
    return m


def modal_variables(formulas: Iterable[Formula]) -> list:
    """(Kψ, polarity) pairs over all non-nested K occurrences."""
    out: dict = {}
    for f in formulas:
        for occ in top_modal_occurrences(f):
            out.setdefault(occ, None)
    return list(out)


def assign_modal(phi: Formula, values: Mapping) -> Formula:
    return map_top_modal(phi, lambda k, pos: Const(values[(k, pos)]))


def image_hint(space: PwsSpace, formulas: Sequence[Formula], limit: int = HINT_LIMIT):
    """Every possible value of D^u: models of the theory under each t/f
    assignment to its non-nested modal occurrences.  None if too many."""
    formulas = list(formulas)
    variables = modal_variables(formulas)
    if len(variables) > limit:
        return None
    pos = {v: k for k, v in enumerate(variables)}
    tables = []
    for f in formulas:
        own = list(dict.fromkeys(top_modal_occurrences(f)))
        table = {}
        for bits in product((False, True), repeat=len(own)):
            vals = dict(zip(own, bits))
            table[bits] = space.mod(assign_modal(f, vals))
        tables.append(([pos[v] for v in own], table))
    out = set()
    for bits in product((False, True), repeat=len(variables)):
        m = space.full
        for idx, table in tables:
            m &= table[tuple(bits[k] for k in idx)]
        out.add(m)
    return sorted(out)


def dt(T: ModalTheory, space: Optional[PwsSpace] = None) -> Approximation:
    """(P, S) ↦ (D^u(S, P), D^u(P, S)) on the bilattice of possible world structures."""
    space = space or PwsSpace(T.alphabet)
    fns = _theory_fns(space, T.formulas)
    full = space.full
    return Approximation(
        space.lattice,
        lambda P, S: _dtu(fns, full, S, P),
        lambda P, S: _dtu(fns, full, P, S),
        image_hint=image_hint(space, T.formulas),
        symmetric_declared=True,
    )


def expansion_operator(T: ModalTheory, space: Optional[PwsSpace] = None) -> LatticeOperator:
    """D_T: Q ↦ D^u(Q, Q)."""
    A = dt(T, space)
    return LatticeOperator(lambda Q: A.second(Q, Q), image_hint=A.image_hint, counted=False)


def is_consistent_pws(q: int) -> bool:
    return q != 0


def is_consistent_pair(pair) -> bool:
    return pair[0] != 0 and pair[1] != 0


def solve_monolithic(T: ModalTheory, semantics: str, budget: Optional[int] = None,
                     space: Optional[PwsSpace] = None):
    if semantics not in SEMANTICS:
        raise ValueError(f"unknown semantics {semantics!r}; choose from {', '.join(SEMANTICS)}")
    space = space or PwsSpace(T.alphabet)
    A = dt(T, space)
    if semantics == "expansions":
        return all_fixpoints(LatticeOperator(lambda Q: A.second(Q, Q), image_hint=A.image_hint,
                                             counted=False), space.lattice, budget)
    if semantics == "partial_expansions":
        return approximation_fixpoints(A, budget)
    if semantics == "kk":
        return kripke_kleene(A)
    if semantics == "extensions":
        return extensions(A, budget)
    if semantics == "partial_extensions":
        return stable_fixpoints(A, budget)
    return well_founded(A)


# -- stratification ------------------------------------------------------------

def infer_stratification(T: ModalTheory) -> Splitting:
    """Condense the relation "objective atoms of φ depend on every atom of φ".

    A formula without objective atoms ties its atoms into one stratum so that
    some stratum can host it.
    """
    edges = []
    for f in T.formulas:
        at = sorted(atoms(f), key=T.alphabet.index)
        obj = sorted(objective_atoms(f), key=T.alphabet.index)
        if obj:
            edges.extend((a, b) for a in at for b in obj)
        else:
            edges.extend((a, b) for a in at for b in at)
    return condensation(T.alphabet, edges)


def place_formula(phi: Formula, split: Splitting):
    """The stratum i with At_O(φ) ⊆ Σ_i and At(φ) below or in i."""
    obj = objective_atoms(phi)
    at = atoms(phi)
    try:
        if obj:
            owners = {split.stratum_of(a) for a in obj}
            if len(owners) != 1:
                raise StratificationError(
                    f"objective atoms of {to_text(phi)} lie in several strata: {sorted(map(str, owners))}")
            i = owners.pop()
            if not at <= split.atoms_upto(i):
                bad = sorted(at - split.atoms_upto(i))
                raise StratificationError(
                    f"{to_text(phi)} is placed in stratum {i} but mentions {bad} from other strata")
            return i
        for i in split.poset.linearization:
            if at <= split.atoms_upto(i):
                return i
    except PosetError as e:
        raise StratificationError(str(e)) from None
    raise StratificationError(f"no stratum lies above all atoms of {to_text(phi)}")


def stratify_theory(T: ModalTheory, split: Optional[Splitting] = None) -> ModalTheory:
    split = split or T.splitting or infer_stratification(T)
    if not split.covers_exactly(T.alphabet):
        missing = sorted(set(T.alphabet) - split.atoms)
        extra = sorted(split.atoms - set(T.alphabet))
        raise StratificationError(f"partition does not match the alphabet (missing {missing}, unknown {extra})")
    strata = tuple(place_formula(f, split) for f in T.formulas)
    return T.with_splitting(split, strata)


def check_stratified(T: ModalTheory, split: Splitting, strata: Sequence) -> None:
    """Raise unless every φ ∈ T_i has At_O(φ) ⊆ Σ_i and At(φ) ⊆ ⋃_{j⪯i} Σ_j."""
    for f, i in zip(T.formulas, strata):
        if not objective_atoms(f) <= set(split.blocks[i]):
            raise StratificationError(f"objective atoms of {to_text(f)} are not all in stratum {i}")
        if not atoms(f) <= split.atoms_upto(i):
            raise StratificationError(f"{to_text(f)} mentions atoms above stratum {i}")


def is_permaconsistent_formulas(formulas: Sequence[Formula], alphabet: Sequence[str]) -> bool:
    """Worst case: positive modal occurrences become f, negative ones t."""
    space = PwsSpace(alphabet)
    m = space.full
    for f in formulas:
        m &= space.mod(map_top_modal(f, lambda k, pos: FALSE if pos else TRUE))
    return m != 0


def worst_case(formulas: Sequence[Formula]) -> list:
    return [map_top_modal(f, lambda k, pos: FALSE if pos else TRUE) for f in formulas]


# -- modal separation -----------------------------------------------------------

def _is_modal_literal(f):
    return isinstance(f, K) or (isinstance(f, Not) and isinstance(f.arg, K))


def _separate_k(psi: Formula, local: frozenset) -> Formula:
    """K(ψ) rewritten as a combination of K(objective clause) literals whose
    clauses mention only ``local`` atoms or only other atoms."""
    inner = map_top_modal(psi, lambda k, pos: _separate_k(k.arg, local))
    parts = []
    for clause in cnf_clauses(inner):
        obj = [l for l in clause if not _is_modal_literal(l)]
        modal = [l for l in clause if _is_modal_literal(l)]
        mine = [l for l in obj if atoms(l) <= local]
        other = [l for l in obj if not atoms(l) <= local]
        ks = []
        if mine:
            ks.append(K(disj(mine)))
        if other:
            ks.append(K(disj(other)))
        if not obj:
            ks.append(K(FALSE))
        parts.append(disj(ks + modal))
    return conj(parts)


def normal_form_formula(phi: Formula, local: Iterable[str]) -> Formula:
    local = frozenset(local)
    out = map_top_modal(phi, lambda k, pos: _separate_k(k.arg, local))
    return simplify(flatten(out))


def normal_form(formulas: Sequence[Formula], split: Splitting, i) -> list:
    """[T_i]: every K-subformula is K over a clause of Σ_i atoms only or of lower atoms only."""
    local = frozenset(split.blocks[i])
    return [normal_form_formula(f, local) for f in formulas]


def is_modally_separated(T: ModalTheory) -> bool:
    st = stratify_theory(T)
    for f, i in zip(st.formulas, st.strata):
        local = set(st.splitting.blocks[i])
        for g in _all_k(f):
            at = atoms(g.arg)
            if at and not (at <= local or not (at & local)):
                return False
    return True


def _all_k(f):
    return [g for g in subformulas(f) if isinstance(g, K)]


# -- the stratified machinery ---------------------------------------------------

class AelStrata:
    """A stratified theory with everything needed for incremental solving."""

    def __init__(self, T: ModalTheory, split: Optional[Splitting] = None):
        st = stratify_theory(T, split)
        self.theory = st
        self.split = st.splitting
        self.poset = self.split.poset
        self.space = PwsSpace(T.alphabet)
        self.blocks = self.split.blocks
        self.local = {i: PwsSpace(b) for i, b in self.blocks.items()}
        self.product = ProductLattice(self.poset, {i: self.local[i].lattice for i in self.poset.indices})
        self.formulas = {i: st.stratum(i) for i in self.poset.indices}
        gidx = self.space.index
        # lift[i][lw]: global world carrying local world lw of stratum i
        self.lift = {}
        self.proj = {}
        sel = {}
        for i, b in self.blocks.items():
            bits = [gidx[a] for a in b]
            self.lift[i] = [sum(1 << bits[k] for k in range(len(b)) if lw >> k & 1)
                            for lw in range(1 << len(b))]
            mask = sum(1 << g for g in bits)
            sel[i] = mask
            inv = {g: lw for lw, g in enumerate(self.lift[i])}
            self.proj[i] = [inv[w & mask] for w in range(self.space.worlds)]
        self._fns = {i: _theory_fns(self.space, fs) for i, fs in self.formulas.items()}
        self._nf: dict = {}
        self._hint: dict = {}

    # κ and friends

    def kappa_partial(self, parts: Mapping) -> int:
        """κ of a partial element; strata outside ``parts`` are left unconstrained."""
        cur = [0]
        for i in self.poset.indices:
            if i in parts:
                q = parts[i]
                lws = [lw for lw in range(1 << len(self.blocks[i])) if q >> lw & 1]
            else:
                lws = range(1 << len(self.blocks[i]))
            lifts = [self.lift[i][lw] for lw in lws]
            cur = [g | l for g in cur for l in lifts]
            if not cur:
                return 0
        m = 0
        for w in cur:
            m |= 1 << w
        return m

    def kappa(self, q: tuple) -> int:
        return self.kappa_partial(self.product.to_dict(q))

    def kappa_bar(self, pair) -> BilatticePair:
        return BilatticePair(self.kappa(pair[0]), self.kappa(pair[1]))

    def restrict_pws(self, q: int, i) -> int:
        """Q|Σ_i as a local structure."""
        out = 0
        for w in self.space.members(q):
            out |= 1 << self.proj[i][w]
        return out

    def kappa_inverse(self, q: int) -> tuple:
        if q == 0:
            raise ValueError("the empty structure has many preimages")
        parts = tuple(self.restrict_pws(q, i) for i in self.poset.indices)
        if self.kappa(parts) != q:
            w = disconnection_witness(self.space, self.split, q)
            raise ValueError(f"structure is connected; witness {w}")
        return parts

    # D̃

    def _stratum_models(self, i, P: int, S: int) -> int:
        m = _dtu(self._fns[i], self.space.full, P, S)
        out = 0
        for lw, g in enumerate(self.lift[i]):
            if m >> g & 1:
                out |= 1 << lw
        return out

    def tilde_dtu(self, P: tuple, S: tuple) -> tuple:
        """Stratum i: models over Σ_i of T_i under κ̄ of the restrictions to ⪯i."""
        out = []
        Pd, Sd = self.product.to_dict(P), self.product.to_dict(S)
        for i in self.poset.indices:
            down = self.poset.downset(i)
            Pc = self.kappa_partial({j: Pd[j] for j in down})
            Sc = self.kappa_partial({j: Sd[j] for j in down})
            out.append(self._stratum_models(i, Pc, Sc))
        return tuple(out)

    def tilde_dt(self) -> Approximation:
        return Approximation(self.product,
                             lambda P, S: self.tilde_dtu(S, P),
                             lambda P, S: self.tilde_dtu(P, S),
                             symmetric_declared=True)

    # components

    def normal_form(self, i) -> list:
        if i not in self._nf:
            self._nf[i] = normal_form(self.formulas[i], self.split, i)
        return self._nf[i]

    def stratum_hint(self, i):
        if i not in self._hint:
            self._hint[i] = image_hint(self.local[i], self.formulas[i])
        return self._hint[i]

    def lower_substitute(self, i, formulas, U: Mapping, V: Mapping) -> list:
        """⌊φ⌋(Ũ, Ṽ)_i: K-subformulas over lower (or no) atoms become truth values."""
        local = set(self.blocks[i])
        Pc = self.kappa_partial(U)
        Sc = self.kappa_partial(V)

        def walk(f, p, s):
            if isinstance(f, K):
                if atoms(f.arg) <= local and atoms(f.arg):
                    return f
                return TRUE if self.space.compile(f)(p, s) else FALSE
            if isinstance(f, Not):
                return Not(walk(f.arg, s, p))
            if isinstance(f, (And, Or)):
                return type(f)(walk(a, p, s) for a in f.args)
            return f

        return [walk(f, Pc, Sc) for f in formulas]

    def component_theories(self, i, U: Mapping, V: Mapping) -> tuple:
        """(conservative, liberal) = (⌊[T_i]⌋(Ũ,Ṽ)_i, ⌊[T_i]⌋(Ṽ,Ũ)_i)."""
        nf = self.normal_form(i)
        return self.lower_substitute(i, nf, U, V), self.lower_substitute(i, nf, V, U)

    def theory_component(self, i, U: Mapping, V: Mapping) -> Approximation:
        """(P_i, S_i) ↦ (D^u_lib(S_i, P_i), D^u_con(P_i, S_i)); exact on consistent pairs."""
        con, lib = self.component_theories(i, U, V)
        sp = self.local[i]
        fc, fl = _theory_fns(sp, con), _theory_fns(sp, lib)
        full = sp.full
        return Approximation(sp.lattice,
                             lambda a, b: _dtu(fl, full, b, a),
                             lambda a, b: _dtu(fc, full, a, b),
                             image_hint=self.stratum_hint(i))

    def direct_component(self, i, U: Mapping, V: Mapping) -> Approximation:
        """The component of D̃ evaluated from T_i itself on κ̄ of the restricted pair."""
        lo, hi = dict(U), dict(V)

        def first(a, b):
            return self._stratum_models(i, self.kappa_partial({**hi, i: b}), self.kappa_partial({**lo, i: a}))

        def second(a, b):
            return self._stratum_models(i, self.kappa_partial({**lo, i: a}), self.kappa_partial({**hi, i: b}))

        return Approximation(self.local[i].lattice, first, second, image_hint=self.stratum_hint(i))

    def component(self, i, U: Mapping, V: Mapping) -> Approximation:
        """Component of D̃ at stratum i: the pair of component theories on
        consistent local pairs, direct evaluation on the others."""
        dc = self.direct_component(i, U, V)
        if not (all(U.values()) and all(V.values())):
            # an empty lower structure makes every K true, local ones included
            return dc
        th = self.theory_component(i, U, V)

        def first(a, b):
            return (th if a and b else dc)._first(a, b)

        def second(a, b):
            return (th if a and b else dc)._second(a, b)

        return Approximation(self.local[i].lattice, first, second, image_hint=self.stratum_hint(i))

    def components(self, i, ctx) -> Approximation:
        return self.component(i, ctx[0], ctx[1])

    def is_permaconsistent(self) -> bool:
        return all(is_permaconsistent_formulas(self.formulas[i], self.blocks[i])
                   for i in self.poset.indices)

    def assemble(self, q: tuple) -> int:
        return self.kappa(q)

    def assemble_pair(self, pair) -> BilatticePair:
        return self.kappa_bar(pair)


def kappa(strata: AelStrata, q: tuple) -> int:
    return strata.kappa(q)


def disconnection_witness(space: PwsSpace, split: Splitting, q: int):
    """(X, Y, i) with Y|Σ_i ∪ X|Σ_j (j ≠ i) missing from q, or None."""
    masks = {i: space.world(split.blocks[i]) for i in split.indices}
    ws = space.members(q)
    for x in ws:
        for y in ws:
            for i in split.indices:
                z = (y & masks[i]) | (x & ~masks[i])
                if not q >> z & 1:
                    return (sorted(space.world_atoms(x)), sorted(space.world_atoms(y)), i)
    return None


def is_disconnected(space: PwsSpace, split: Splitting, q: int) -> bool:
    return disconnection_witness(space, split, q) is None


def is_permaconsistent(T: ModalTheory, split: Optional[Splitting] = None) -> bool:
    if split is None and T.splitting is None:
        return is_permaconsistent_formulas(T.formulas, T.alphabet)
    return AelStrata(T, split).is_permaconsistent()


def _consistent_filter(semantics, result):
    if semantics in ("expansions", "extensions"):
        return [q for q in result if q]
    if semantics in ("partial_expansions", "partial_extensions"):
        return [p for p in result if is_consistent_pair(p)]
    return result


def solve_split(T: ModalTheory, semantics: str, split: Optional[Splitting] = None,
                budget: Optional[int] = None, trace: Optional[list] = None, executor=None,
                strata: Optional[AelStrata] = None):
    """Consistent models assembled stratum by stratum.

    KK and WF are only available for permaconsistent theories; otherwise
    :class:`SemanticRefusal` is raised.
    """
    if semantics not in SEMANTICS:
        raise ValueError(f"unknown semantics {semantics!r}; choose from {', '.join(SEMANTICS)}")
    st = strata or AelStrata(T, split)
    prod = st.product
    if semantics in ("kk", "wf"):
        if not st.is_permaconsistent():
            raise SemanticRefusal(
                "the theory is not permaconsistent, so its stratified Kripke-Kleene and "
                "well-founded pairs need not match the global ones; only the consistent "
                "fixpoints and consistent stable fixpoints are preserved by splitting "
                "(use partial_expansions or partial_extensions)")
        run = incremental_kripke_kleene if semantics == "kk" else incremental_well_founded
        return st.kappa_bar(run(None, prod, st.components, executor=executor, trace=trace))
    both = lambda i, p: p[0] != 0 and p[1] != 0
    if semantics == "expansions":
        xs = incremental_fixpoints(None, prod, components=exact_components(st.components),
                                   keep=lambda i, a: a != 0, budget=budget, trace=trace)
        return sorted(st.kappa(x) for x in xs)
    if semantics == "partial_expansions":
        ps = incremental_approximation_fixpoints(None, prod, st.components, keep=both,
                                                 trace=trace, budget=budget)
        return sorted((st.kappa_bar(p) for p in ps), key=_pair_key(st))
    exact = semantics == "extensions"
    keep = (lambda i, p: p[0] == p[1] and p[0] != 0) if exact else both
    ps = incremental_stable_fixpoints(None, prod, st.components, keep=keep, trace=trace, budget=budget)
    if exact:
        return sorted(st.kappa(p[0]) for p in ps)
    return sorted((st.kappa_bar(p) for p in ps), key=_pair_key(st))


def _pair_key(st):
    lat = st.space.lattice
    return lambda p: (lat.sort_key(p[0]), lat.sort_key(p[1]))


def solve(T: ModalTheory, semantics: str, mode: str = "monolithic", splitting: Optional[Splitting] = None,
          budget: Optional[int] = None, trace: Optional[list] = None, executor=None,
          consistent_only: bool = False):
    if mode == "monolithic":
        out = solve_monolithic(T, semantics, budget)
        return _consistent_filter(semantics, out) if consistent_only else out
    if mode == "split":
        return solve_split(T, semantics, splitting, budget, trace, executor)
    raise ValueError(f"unknown mode {mode!r}")


def semantics(T: ModalTheory, which: str, mode: str = "monolithic", **kw):
    return solve(T, which, mode, **kw)


def consistent(semantics_name: str, result):
    """Drop inconsistent structures or pairs from a result."""
    return _consistent_filter(semantics_name, result)
