"""Default logic through the Konolige transformation.

Every semantics of ⟨D, W⟩ is the corresponding semantics of the modal
theory m(D, W); nothing here computes extensions by other means.
"""
from __future__ import annotations

from typing import Mapping, Optional, Sequence

from . import ael
from .formula import (
    FALSE,
    TRUE,
    Formula,
    K,
    Not,
    atoms,
    cnf_clauses,
    conj,
    disj,
    implies,
    is_objective,
    nnf,
    simplify,
    to_text,
)
from .poset import PosetError, Splitting, condensation
from .theory import Default, DefaultTheory, ModalTheory

SEMANTICS = ael.SEMANTICS


class DefaultStratificationError(ValueError):
    pass


def konolige(d: Default) -> Formula:
    """m(d) = Kα ∧ ¬K¬β₁ ∧ … ∧ ¬K¬βₙ ⇒ γ."""
    body = [K(d.prerequisite)] + [Not(K(Not(b))) for b in d.justifications]
    return implies(conj(body), d.consequence)


def konolige_theory(dt: DefaultTheory, with_strata: bool = False) -> ModalTheory:
    formulas = [konolige(d) for d in dt.defaults] + list(dt.axioms)
    T = ModalTheory(dt.alphabet, tuple(formulas))
    if with_strata:
        split = dt.splitting or infer_partition(dt)
        return T.with_splitting(split, default_strata(dt, split))
    return T


def _name(d: Default) -> str:
    return format_default(d)


def format_default(d: Default) -> str:
    pre = "" if d.prerequisite == TRUE else to_text(d.prerequisite)
    just = ", ".join(to_text(b) for b in d.justifications)
    return f"{pre} : {just} / {to_text(d.consequence)}".strip()


def default_strata(dt: DefaultTheory, split: Splitting) -> list:
    """Stratum index for every formula of m(D, W): defaults then axioms."""
    check_stratifiable(dt, split)
    out = []
    for d in dt.defaults:
        out.append(_place(split, atoms(d.consequence), d.atoms()))
    for w in dt.axioms:
        out.append(_place(split, atoms(w), atoms(w)))
    return out


def _place(split: Splitting, owner_atoms, all_atoms):
    if owner_atoms:
        return split.stratum_of(next(iter(owner_atoms)))
    for i in split.poset.linearization:
        if all_atoms <= split.atoms_upto(i):
            return i
    raise DefaultStratificationError(f"no stratum lies above atoms {sorted(all_atoms)}")


def check_stratifiable(dt: DefaultTheory, split: Splitting) -> None:
    """Raise unless ⟨D, W⟩ is stratifiable over ``split``."""
    if not split.covers_exactly(dt.alphabet):
        raise DefaultStratificationError("partition does not match the alphabet")
    try:
        for d in dt.defaults:
            owners = {split.stratum_of(a) for a in atoms(d.consequence)}
            if len(owners) > 1:
                raise DefaultStratificationError(
                    f"consequence of default {_name(d)} has atoms in strata {sorted(map(str, owners))}")
            if owners:
                i = owners.pop()
                outside = sorted(d.atoms() - split.atoms_upto(i))
                if outside:
                    raise DefaultStratificationError(
                        f"default {_name(d)} belongs to stratum {i} but mentions {outside}")
        for w in dt.axioms:
            owners = {split.stratum_of(a) for a in atoms(w)}
            if len(owners) > 1:
                raise DefaultStratificationError(
                    f"axiom {to_text(w)} has atoms in strata {sorted(map(str, owners))}")
    except PosetError as e:
        raise DefaultStratificationError(str(e)) from None


def is_stratifiable(dt: DefaultTheory, split: Splitting) -> bool:
    try:
        check_stratifiable(dt, split)
    except DefaultStratificationError:
        return False
    return True


def infer_partition(dt: DefaultTheory) -> Splitting:
    """Condense "atoms of cons(d) depend on all atoms of d" plus axiom co-occurrence."""
    order = {a: k for k, a in enumerate(dt.alphabet)}
    edges = []
    for d in dt.defaults:
        at = sorted(d.atoms(), key=order.get)
        cons = sorted(atoms(d.consequence), key=order.get) or at
        edges.extend((a, b) for a in at for b in cons)
    for w in dt.axioms:
        at = sorted(atoms(w), key=order.get)
        edges.extend((a, b) for a in at for b in at)
    return condensation(dt.alphabet, edges)


def semantics(dt: DefaultTheory, which: str, mode: str = "monolithic",
              splitting: Optional[Splitting] = None, **kw):
    if mode == "split":
        split = splitting or dt.splitting or infer_partition(dt)
        T = konolige_theory(dt).with_splitting(split, default_strata(dt, split))
        return ael.solve_split(T, which, split, **kw)
    return ael.solve(konolige_theory(dt), which, mode, **kw)


solve = semantics


# -- back from modal theories to defaults --------------------------------------

def _is_modal_literal(f):
    return isinstance(f, K) or (isinstance(f, Not) and isinstance(f.arg, K))


def defaults_from_component(formulas: Sequence[Formula], alphabet: Optional[Sequence[str]] = None) -> DefaultTheory:
    """Rewrite a theory without nested K as defaults plus axioms.

    Each CNF clause ¬Kα₁ ∨ … ∨ ¬Kα_m ∨ Kβ₁ ∨ … ∨ Kβₙ ∨ γ becomes the default
    α₁ ∧ … ∧ α_m : ¬β₁, …, ¬βₙ / γ; clauses without modal literals become axioms.
    """
    defaults, axioms = [], []
    for phi in formulas:
        for clause in cnf_clauses(phi):
            pre = [l.arg.arg for l in clause if isinstance(l, Not) and isinstance(l.arg, K)]
            pos = [l.arg for l in clause if isinstance(l, K)]
            obj = [l for l in clause if not _is_modal_literal(l)]
            gamma = disj(obj)
            if not pre and not pos:
                axioms.append(gamma)
                continue
            for f in pre + pos:
                if not is_objective(f):
                    raise ValueError("component theory contains a nested modal operator")
            defaults.append(Default(simplify(conj(pre)),
                                    tuple(simplify(nnf(Not(b))) for b in pos), gamma))
    if alphabet is None:
        seen: dict = {}
        for phi in formulas:
            for a in sorted(atoms(phi)):
                seen.setdefault(a, None)
        alphabet = tuple(seen)
    return DefaultTheory(tuple(alphabet), tuple(defaults), tuple(axioms))


def is_modally_separated(dt: DefaultTheory, split: Optional[Splitting] = None) -> bool:
    """No prerequisite or justification of a default in D_i mixes Σ_i and lower atoms."""
    split = split or dt.splitting or infer_partition(dt)
    strata = default_strata(dt, split)
    for d, i in zip(dt.defaults, strata):
        local = set(split.blocks[i])
        for f in (d.prerequisite, *d.justifications):
            at = atoms(f)
            if at & local and at - local:
                return False
    return True


def lower_evaluate(dt: DefaultTheory, split: Splitting, strata: ael.AelStrata, i,
                   U: Mapping, V: Mapping) -> DefaultTheory:
    """⌊D_i⌋(Ũ, Ṽ)_i with W_i: prerequisites and justifications over lower
    atoms replaced by their truth value under the context."""
    index = default_strata(dt, split)
    local = set(split.blocks[i])
    sp = strata.space
    Pc, Sc = strata.kappa_partial(U), strata.kappa_partial(V)

    def lower(f):
        return not (atoms(f) & local)

    out = []
    for d, j in zip(dt.defaults, index[:len(dt.defaults)]):
        if j != i:
            continue
        pre = d.prerequisite
        if lower(pre):
            # Kα sits under one negation in m(d): evaluate on the swapped pair
            pre = TRUE if sp.compile(K(pre))(Sc, Pc) else FALSE
        just = []
        for b in d.justifications:
            if lower(b):
                just.append(FALSE if sp.compile(K(Not(b)))(Pc, Sc) else TRUE)
            else:
                just.append(b)
        out.append(Default(pre, tuple(just), d.consequence))
    axioms = [w for w, j in zip(dt.axioms, index[len(dt.defaults):]) if j == i]
    return DefaultTheory(tuple(split.blocks[i]), tuple(out), tuple(axioms))


def component_defaults(dt: DefaultTheory, i, U: Mapping, V: Mapping,
                       split: Optional[Splitting] = None) -> tuple:
    """(conservative, liberal) component theories of stratum i presented as
    default theories."""
    split = split or dt.splitting or infer_partition(dt)
    T = konolige_theory(dt).with_splitting(split, default_strata(dt, split))
    st = ael.AelStrata(T, split)
    if is_modally_separated(dt, split):
        return (lower_evaluate(dt, split, st, i, U, V), lower_evaluate(dt, split, st, i, V, U))
    con, lib = st.component_theories(i, U, V)
    block = split.blocks[i]
    return defaults_from_component(con, block), defaults_from_component(lib, block)
