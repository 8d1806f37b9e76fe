"""Propositional and modal formulas over ∧, ∨, ¬, K and the constants t/f.

Formulas are immutable and hashable.  ``And``/``Or`` are n-ary; nothing is
simplified on construction, so substituted constants stay visible until
:func:`simplify` is called.
"""
from __future__ import annotations

from itertools import product as _product
from typing import Callable, Iterable, Iterator


class Formula:
    __slots__ = ("_hash",)

    def __and__(self, other):
        return And((self, other))

    def __or__(self, other):
        return Or((self, other))

    def __invert__(self):
        return Not(self)

    def __str__(self):
        return to_text(self, unicode=True)

    def __lt__(self, other):
        return sort_key(self) < sort_key(other)


class Const(Formula):
    __slots__ = ("value",)

    def __init__(self, value: bool):
        self.value = bool(value)
        self._hash = hash(("const", self.value))

    def __eq__(self, other):
        return type(other) is Const and other.value == self.value

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "TRUE" if self.value else "FALSE"


TRUE = Const(True)
FALSE = Const(False)


class Atom(Formula):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        self._hash = hash(("atom", name))

    def __eq__(self, other):
        return type(other) is Atom and other.name == self.name

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Atom({self.name!r})"


class Not(Formula):
    __slots__ = ("arg",)

    def __init__(self, arg: Formula):
        self.arg = arg
        self._hash = hash(("not", arg))

    def __eq__(self, other):
        return type(other) is Not and other._hash == self._hash and other.arg == self.arg

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Not({self.arg!r})"


class K(Formula):
    __slots__ = ("arg",)

    def __init__(self, arg: Formula):
        self.arg = arg
        self._hash = hash(("K", arg))

    def __eq__(self, other):
        return type(other) is K and other._hash == self._hash and other.arg == self.arg

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"K({self.arg!r})"


class _Nary(Formula):
    __slots__ = ("args",)
    tag = ""

    def __init__(self, args: Iterable[Formula]):
        self.args = tuple(args)
        self._hash = hash((self.tag, self.args))

    def __eq__(self, other):
        return type(other) is type(self) and other._hash == self._hash and other.args == self.args

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"{type(self).__name__}({list(self.args)!r})"


class And(_Nary):
    __slots__ = ()
    tag = "and"


class Or(_Nary):
    __slots__ = ()
    tag = "or"


def implies(a: Formula, b: Formula) -> Formula:
    return Or((Not(a), b))


def conj(items: Iterable[Formula]) -> Formula:
    items = tuple(items)
    if not items:
        return TRUE
    return items[0] if len(items) == 1 else And(items)


def disj(items: Iterable[Formula]) -> Formula:
    items = tuple(items)
    if not items:
        return FALSE
    return items[0] if len(items) == 1 else Or(items)


# -- accessors ---------------------------------------------------------------

def atoms(phi: Formula) -> frozenset:
    """At(φ)."""
    out: set = set()

    def walk(f):
        if isinstance(f, Atom):
            out.add(f.name)
        elif isinstance(f, (Not, K)):
            walk(f.arg)
        elif isinstance(f, _Nary):
            for a in f.args:
                walk(a)

    walk(phi)
    return frozenset(out)


def objective_atoms(phi: Formula) -> frozenset:
    """At_O(φ): atoms with an occurrence outside every K."""
    out: set = set()

    def walk(f):
        if isinstance(f, Atom):
            out.add(f.name)
        elif isinstance(f, Not):
            walk(f.arg)
        elif isinstance(f, _Nary):
            for a in f.args:
                walk(a)

    walk(phi)
    return frozenset(out)


def is_objective(phi: Formula) -> bool:
    return not any(isinstance(f, K) for f in subformulas(phi))


def subformulas(phi: Formula) -> Iterator[Formula]:
    yield phi
    if isinstance(phi, (Not, K)):
        yield from subformulas(phi.arg)
    elif isinstance(phi, _Nary):
        for a in phi.args:
            yield from subformulas(a)


def modal_subformulas(phi: Formula) -> list:
    """Distinct K-subformulas, outermost first."""
    return list(dict.fromkeys(f for f in subformulas(phi) if isinstance(f, K)))


def top_modal_occurrences(phi: Formula) -> list:
    """(Kψ, positive) for every K occurrence not nested inside another K.

    Polarity counts enclosing negations.
    """
    out = []

    def walk(f, pos):
        if isinstance(f, K):
            out.append((f, pos))
        elif isinstance(f, Not):
            walk(f.arg, not pos)
        elif isinstance(f, _Nary):
            for a in f.args:
                walk(a, pos)

    walk(phi, True)
    return out


def map_top_modal(phi: Formula, fn: Callable[[K, bool], Formula]) -> Formula:
    """Replace each non-nested Kψ by fn(Kψ, positive)."""

    def walk(f, pos):
        if isinstance(f, K):
            return fn(f, pos)
        if isinstance(f, Not):
            return Not(walk(f.arg, not pos))
        if isinstance(f, _Nary):
            return type(f)(walk(a, pos) for a in f.args)
        return f

    return walk(phi, True)


def substitute(phi: Formula, table: dict) -> Formula:
    """Replace subformulas found in ``table`` (checked top-down)."""
    if phi in table:
        return table[phi]
    if isinstance(phi, Not):
        return Not(substitute(phi.arg, table))
    if isinstance(phi, K):
        return K(substitute(phi.arg, table))
    if isinstance(phi, _Nary):
        return type(phi)(substitute(a, table) for a in phi.args)
    return phi


# -- classical evaluation ----------------------------------------------------

def holds(phi: Formula, world: frozenset | set, modal: Callable[[K], bool] | None = None) -> bool:
    """Classical truth in ``world`` (a set of true atoms); K-subformulas are
    delegated to ``modal``."""
    if isinstance(phi, Const):
        return phi.value
    if isinstance(phi, Atom):
        return phi.name in world
    if isinstance(phi, Not):
        return not holds(phi.arg, world, modal)
    if isinstance(phi, And):
        return all(holds(a, world, modal) for a in phi.args)
    if isinstance(phi, Or):
        return any(holds(a, world, modal) for a in phi.args)
    if isinstance(phi, K):
        if modal is None:
            raise ValueError("modal formula evaluated without a modal valuation")
        return modal(phi)
    raise TypeError(phi)


def worlds_of(alphabet) -> list:
    alphabet = list(alphabet)
    return [frozenset(a for a, bit in zip(alphabet, bits) if bit)
            for bits in _product((0, 1), repeat=len(alphabet))]


def satisfiable(formulas: Iterable[Formula], alphabet) -> bool:
    fs = list(formulas)
    return any(all(holds(f, w) for f in fs) for w in worlds_of(alphabet))


# -- normalization -----------------------------------------------------------

def nnf(phi: Formula) -> Formula:
    """Push negations to atoms, constants and K-subformulas."""

    def pos(f):
        if isinstance(f, Not):
            return neg(f.arg)
        if isinstance(f, _Nary):
            return type(f)(pos(a) for a in f.args)
        if isinstance(f, K):
            return K(nnf(f.arg))
        return f

    def neg(f):
        if isinstance(f, Not):
            return pos(f.arg)
        if isinstance(f, Const):
            return Const(not f.value)
        if isinstance(f, And):
            return Or(neg(a) for a in f.args)
        if isinstance(f, Or):
            return And(neg(a) for a in f.args)
        if isinstance(f, K):
            return Not(K(nnf(f.arg)))
        return Not(f)

    return pos(phi)


_RANK = {Const: 0, Atom: 1, Not: 2, K: 3, And: 4, Or: 5}


def sort_key(phi: Formula):
    if isinstance(phi, Const):
        return (0, int(phi.value))
    if isinstance(phi, Atom):
        return (1, phi.name)
    if isinstance(phi, (Not, K)):
        return (_RANK[type(phi)], sort_key(phi.arg))
    return (_RANK[type(phi)], len(phi.args), tuple(sort_key(a) for a in phi.args))


def flatten(phi: Formula) -> Formula:
    """Associativity/commutativity normal form: flatten nested ∧/∨, sort and
    deduplicate their arguments.  No other simplification."""
    if isinstance(phi, (Not, K)):
        return type(phi)(flatten(phi.arg))
    if isinstance(phi, _Nary):
        cls = type(phi)
        items = []
        for a in phi.args:
            a = flatten(a)
            if type(a) is cls:
                items.extend(a.args)
            else:
                items.append(a)
        items = sorted(set(items), key=sort_key)
        return items[0] if len(items) == 1 else cls(items)
    return phi


def normalize(phi: Formula) -> Formula:
    """Negation normal form followed by AC flattening; used for structural comparison."""
    return flatten(nnf(phi))


def equivalent_shape(a: Formula, b: Formula) -> bool:
    return normalize(a) == normalize(b)


def simplify(phi: Formula) -> Formula:
    """Constant propagation plus AC flattening."""
    if isinstance(phi, Not):
        a = simplify(phi.arg)
        if isinstance(a, Const):
            return Const(not a.value)
        if isinstance(a, Not):
            return a.arg
        return Not(a)
    if isinstance(phi, K):
        return K(simplify(phi.arg))
    if isinstance(phi, _Nary):
        absorbing = isinstance(phi, Or)
        items = []
        for a in phi.args:
            a = simplify(a)
            if isinstance(a, Const):
                if a.value == absorbing:
                    return Const(absorbing)
                continue
            items.append(a)
        if not items:
            return Const(not absorbing)
        return flatten(type(phi)(items)) if len(items) > 1 else items[0]
    return phi


def cnf_clauses(phi: Formula, is_literal: Callable[[Formula], bool] | None = None) -> list:
    """CNF by distribution as a list of clauses, each a list of literals.

    The input is first put in negation normal form; ``is_literal`` decides
    which subformulas are opaque (by default atoms, constants, K's and their
    negations).  Clauses containing t or complementary literals are dropped,
    f is removed from clauses.
    """
    phi = nnf(phi)

    def lit(f):
        if is_literal is not None and is_literal(f):
            return True
        return isinstance(f, (Atom, Const, K)) or (isinstance(f, Not) and isinstance(f.arg, (Atom, K)))

    def go(f):
        if isinstance(f, And):
            out = []
            for a in f.args:
                out.extend(go(a))
            return out
        if isinstance(f, Or):
            parts = [go(a) for a in f.args]
            out = [[]]
            for p in parts:
                out = [c + d for c in out for d in p]
            return out
        if lit(f):
            return [[f]]
        raise TypeError(f"unexpected subformula in NNF: {f!r}")

    result = []
    seen = set()
    for clause in go(phi):
        lits = []
        trivial = False
        for l in clause:
            if l == TRUE:
                trivial = True
                break
            if l == FALSE or l in lits:
                continue
            lits.append(l)
        if trivial:
            continue
        if any(Not(l) in lits for l in lits if not isinstance(l, Not)):
            continue
        key = frozenset(lits)
        if key in seen:
            continue
        seen.add(key)
        result.append(sorted(lits, key=sort_key))
    return result


# -- printing ----------------------------------------------------------------

_PREC = {Or: 1, And: 2}


def to_text(phi: Formula, unicode: bool = False) -> str:
    """Render in the ``.ael`` surface syntax, or with logic symbols."""
    sym = {"not": "¬", "and": " ∧ ", "or": " ∨ ", "t": "t", "f": "f"} if unicode else \
          {"not": "~", "and": " & ", "or": " | ", "t": "true", "f": "false"}

    def go(f, ctx):
        if isinstance(f, Const):
            return sym["t"] if f.value else sym["f"]
        if isinstance(f, Atom):
            return f.name
        if isinstance(f, K):
            inner = f.arg
            if unicode and isinstance(inner, (Atom, Const)):
                return "K" + go(inner, 3)
            return "K(" + go(inner, 0) + ")"
        if isinstance(f, Not):
            return sym["not"] + go(f.arg, 3)
        p = _PREC[type(f)]
        s = (sym["and"] if isinstance(f, And) else sym["or"]).join(go(a, p) for a in f.args)
        return f"({s})" if p <= ctx else s

    return go(phi, 0)
