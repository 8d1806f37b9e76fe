"""Plain data for the three input languages.

Nothing here touches the lattice machinery.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional, Sequence, Union

from .formula import Atom, Formula, atoms, subformulas
from .poset import Splitting


class AlphabetError(ValueError):
    pass


class Literal(NamedTuple):
    atom: str
    positive: bool = True

    def negate(self) -> "Literal":
        return Literal(self.atom, not self.positive)

    def __str__(self):
        return self.atom if self.positive else f"not {self.atom}"


# Clause bodies may hold the constants True/False as partial-evaluation residue.
BodyItem = Union[Literal, bool]


@dataclass(frozen=True)
class Clause:
    head: str
    body: tuple = ()

    def body_atoms(self) -> list:
        return [b.atom for b in self.body if isinstance(b, Literal)]

    def __str__(self):
        if not self.body:
            return f"{self.head}."
        parts = [("true" if b else "false") if isinstance(b, bool) else str(b) for b in self.body]
        return f"{self.head} :- {', '.join(parts)}."


def _ordered_atoms(clauses: Iterable[Clause]) -> tuple:
    seen: dict = {}
    for c in clauses:
        seen.setdefault(c.head, None)
        for a in c.body_atoms():
            seen.setdefault(a, None)
    return tuple(seen)


@dataclass(frozen=True)
class Program:
    """A ground normal program; ``alphabet`` fixes the bit layout."""

    alphabet: tuple
    clauses: tuple = ()

    def __post_init__(self):
        known = set(self.alphabet)
        if len(known) != len(self.alphabet):
            raise AlphabetError("alphabet lists an atom twice")
        for c in self.clauses:
            for a in [c.head, *c.body_atoms()]:
                if a not in known:
                    raise AlphabetError(f"atom {a!r} is not in the alphabet")

    @classmethod
    def build(cls, clauses: Iterable[Clause], alphabet: Optional[Sequence[str]] = None) -> "Program":
        clauses = tuple(clauses)
        found = _ordered_atoms(clauses)
        if alphabet is None:
            return cls(found, clauses)
        alphabet = tuple(alphabet)
        return cls(alphabet, clauses)

    def subprogram(self, clauses: Iterable[Clause], alphabet: Optional[Sequence[str]] = None) -> "Program":
        return Program(tuple(alphabet) if alphabet is not None else self.alphabet, tuple(clauses))

    def __str__(self):
        return "\n".join(str(c) for c in self.clauses)


@dataclass(frozen=True)
class ModalTheory:
    """A finite set of modal formulas.

    ``strata`` optionally assigns each formula position a stratum index of
    ``splitting``.
    """

    alphabet: tuple
    formulas: tuple = ()
    splitting: Optional[Splitting] = field(default=None, compare=False)
    strata: Optional[tuple] = field(default=None, compare=False)

    def __post_init__(self):
        known = set(self.alphabet)
        if len(known) != len(self.alphabet):
            raise AlphabetError("alphabet lists an atom twice")
        for f in self.formulas:
            extra = atoms(f) - known
            if extra:
                raise AlphabetError(f"atoms {sorted(extra)} are not in the alphabet")

    @classmethod
    def build(cls, formulas: Iterable[Formula], alphabet: Optional[Sequence[str]] = None,
              splitting: Optional[Splitting] = None) -> "ModalTheory":
        formulas = tuple(formulas)
        if alphabet is None:
            seen: dict = {}
            for f in formulas:
                for a in _atoms_in_order(f):
                    seen.setdefault(a, None)
            if splitting is not None:
                for i in splitting.indices:
                    for a in splitting.blocks[i]:
                        seen.setdefault(a, None)
            alphabet = tuple(seen)
        return cls(tuple(alphabet), formulas, splitting)

    def with_splitting(self, splitting: Splitting, strata: Optional[Sequence] = None) -> "ModalTheory":
        return ModalTheory(self.alphabet, self.formulas, splitting,
                           tuple(strata) if strata is not None else None)

    def stratum(self, i) -> list:
        if self.strata is None:
            raise ValueError("theory has no stratum assignment")
        return [f for f, s in zip(self.formulas, self.strata) if s == i]


def _atoms_in_order(f: Formula) -> list:
    return [g.name for g in subformulas(f) if isinstance(g, Atom)]


@dataclass(frozen=True)
class Default:
    """α : β₁, …, βₙ / γ."""

    prerequisite: Formula
    justifications: tuple
    consequence: Formula

    def atoms(self) -> frozenset:
        out = atoms(self.prerequisite) | atoms(self.consequence)
        for b in self.justifications:
            out |= atoms(b)
        return out


@dataclass(frozen=True)
class DefaultTheory:
    alphabet: tuple
    defaults: tuple = ()
    axioms: tuple = ()
    splitting: Optional[Splitting] = field(default=None, compare=False)

    def __post_init__(self):
        known = set(self.alphabet)
        for d in self.defaults:
            extra = d.atoms() - known
            if extra:
                raise AlphabetError(f"atoms {sorted(extra)} are not in the alphabet")
        for w in self.axioms:
            extra = atoms(w) - known
            if extra:
                raise AlphabetError(f"atoms {sorted(extra)} are not in the alphabet")

    @classmethod
    def build(cls, defaults: Iterable[Default], axioms: Iterable[Formula] = (),
              alphabet: Optional[Sequence[str]] = None,
              splitting: Optional[Splitting] = None) -> "DefaultTheory":
        defaults, axioms = tuple(defaults), tuple(axioms)
        if alphabet is None:
            seen: dict = {}
            for d in defaults:
                for f in (d.prerequisite, *d.justifications, d.consequence):
                    for a in _atoms_in_order(f):
                        seen.setdefault(a, None)
            for w in axioms:
                for a in _atoms_in_order(w):
                    seen.setdefault(a, None)
            if splitting is not None:
                for i in splitting.indices:
                    for a in splitting.blocks[i]:
                        seen.setdefault(a, None)
            alphabet = tuple(seen)
        return cls(tuple(alphabet), defaults, axioms, splitting)

    def with_splitting(self, splitting: Splitting) -> "DefaultTheory":
        return DefaultTheory(self.alphabet, self.defaults, self.axioms, splitting)
