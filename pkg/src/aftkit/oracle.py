"""Brute-force reference semantics and random instance generators.

This module deliberately avoids the lattice and engine modules: every
semantics is recomputed here from its definition by scanning the whole
(bi)lattice.  Only the plain data types and the canonical output shapes are
shared.
"""
from __future__ import annotations

import json
import os
import random
from dataclasses import asdict, dataclass
from itertools import combinations
from typing import Callable, Optional, Sequence

from . import canon
from .formula import FALSE, TRUE, And, Atom, Const, Formula, K, Not, Or
from .poset import Splitting
from .theory import Clause, Default, DefaultTheory, Literal, ModalTheory, Program

LP_LIMIT = 4
AEL_LIMIT = 3


class OracleBudgetError(RuntimeError):
    pass


class ConfigError(ValueError):
    pass


# -- generators ------------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorConfig:
    seed: int = 0
    max_atoms: int = 6
    min_strata: int = 1
    max_strata: int = 3
    max_stratum_atoms: int = 3
    min_items: int = 1  # clauses, formulas or defaults
    max_items: int = 6
    max_body: int = 3
    negation: float = 0.4
    modal: float = 0.5
    order_density: float = 0.6
    max_depth: int = 2
    max_justifications: int = 2
    axioms: float = 0.3

    def check(self):
        if self.min_strata < 1 or self.min_strata > self.max_strata:
            raise ConfigError("need 1 <= min_strata <= max_strata")
        if self.max_stratum_atoms < 1 or self.min_strata > self.max_atoms:
            raise ConfigError("atom budget too small for the requested strata")
        if self.min_items > self.max_items:
            raise ConfigError("min_items exceeds max_items")


def _atom_names(n: int) -> list:
    base = "pqrstuvwxyz"
    return [base[k] if k < len(base) else f"a{k}" for k in range(n)]


def _plant(cfg: GeneratorConfig, rng: random.Random) -> Splitting:
    cfg.check()
    s = rng.randint(cfg.min_strata, cfg.max_strata)
    sizes = []
    budget = cfg.max_atoms
    for k in range(s):
        room = budget - (s - k - 1)
        sizes.append(rng.randint(1, max(1, min(cfg.max_stratum_atoms, room))))
        budget -= sizes[-1]
    names = _atom_names(sum(sizes))
    blocks, k = [], 0
    for n in sizes:
        blocks.append(names[k:k + n])
        k += n
    names = [f"s{i}" for i in range(s)]
    order = [(names[i], names[j]) for i, j in combinations(range(s), 2) if rng.random() < cfg.order_density]
    return Splitting.from_blocks(blocks, order, names)


def _upto(split: Splitting, i) -> list:
    return [a for j in split.indices if split.poset.leq(j, i) for a in split.blocks[j]]


def gen_stratifiable_program_planted(cfg: GeneratorConfig) -> tuple:
    rng = random.Random(cfg.seed)
    split = _plant(cfg, rng)
    alphabet = [a for i in split.indices for a in split.blocks[i]]
    clauses = []
    for _ in range(rng.randint(cfg.min_items, cfg.max_items)):
        i = rng.choice(split.indices)
        head = rng.choice(split.blocks[i])
        pool = _upto(split, i)
        body = tuple(Literal(rng.choice(pool), rng.random() >= cfg.negation)
                     for _ in range(rng.randint(0, cfg.max_body)))
        clauses.append(Clause(head, body))
    return Program(tuple(alphabet), tuple(clauses)), split


def gen_stratifiable_program(cfg: GeneratorConfig) -> Program:
    return gen_stratifiable_program_planted(cfg)[0]


def _gen_formula(rng, cfg, local, pool, depth, modal_ok=True) -> Formula:
    """Objective atoms from ``local``; K-subformulas may use all of ``pool``."""
    if depth <= 0 or rng.random() < 0.3:
        if modal_ok and rng.random() < cfg.modal:
            return K(_gen_formula(rng, cfg, pool, pool, depth - 1, modal_ok=rng.random() < 0.2))
        if not local:
            return TRUE if rng.random() < 0.5 else FALSE
        a = Atom(rng.choice(local))
        return Not(a) if rng.random() < cfg.negation else a
    r = rng.random()
    if r < 0.2:
        return Not(_gen_formula(rng, cfg, local, pool, depth - 1, modal_ok))
    kids = [_gen_formula(rng, cfg, local, pool, depth - 1, modal_ok) for _ in range(2)]
    return And(kids) if r < 0.55 else Or(kids)


def gen_stratifiable_ael(cfg: GeneratorConfig) -> ModalTheory:
    rng = random.Random(cfg.seed)
    split = _plant(cfg, rng)
    alphabet = [a for i in split.indices for a in split.blocks[i]]
    fs = []
    for _ in range(rng.randint(cfg.min_items, cfg.max_items)):
        i = rng.choice(split.indices)
        fs.append(_gen_formula(rng, cfg, list(split.blocks[i]), _upto(split, i), cfg.max_depth))
    return ModalTheory(tuple(alphabet), tuple(fs), split)


def _gen_objective(rng, cfg, pool, depth) -> Formula:
    plain = GeneratorConfig(**{**asdict(cfg), "modal": 0.0})
    return _gen_formula(rng, plain, pool, pool, depth, modal_ok=False)


def gen_stratifiable_defaults(cfg: GeneratorConfig) -> DefaultTheory:
    rng = random.Random(cfg.seed)
    split = _plant(cfg, rng)
    alphabet = [a for i in split.indices for a in split.blocks[i]]
    ds, ws = [], []
    for _ in range(rng.randint(cfg.min_items, cfg.max_items)):
        i = rng.choice(split.indices)
        local, pool = list(split.blocks[i]), _upto(split, i)
        if rng.random() < cfg.axioms:
            ws.append(_gen_objective(rng, cfg, local, cfg.max_depth - 1))
            continue
        pre = TRUE if rng.random() < 0.3 else _gen_objective(rng, cfg, pool, cfg.max_depth - 1)
        just = tuple(_gen_objective(rng, cfg, pool, cfg.max_depth - 1)
                     for _ in range(rng.randint(0, cfg.max_justifications)))
        cons = Atom(rng.choice(local))
        if rng.random() < cfg.negation:
            cons = Not(cons)
        ds.append(Default(pre, just, cons))
    return DefaultTheory(tuple(alphabet), tuple(ds), tuple(ws), split)


# -- logic programs -----------------------------------------------------------------

def _subsets(alphabet) -> list:
    out = []
    for r in range(len(alphabet) + 1):
        out.extend(frozenset(c) for c in combinations(alphabet, r))
    return out


def _lit_true(item, pos_world, neg_world) -> bool:
    """Body item under a pair: positive atoms read pos_world, negated ones neg_world."""
    if isinstance(item, bool):
        return item
    if item.positive:
        return item.atom in pos_world
    return item.atom not in neg_world


def _immediate(P: Program, X: frozenset, Y: frozenset) -> frozenset:
    return frozenset(c.head for c in P.clauses if all(_lit_true(b, X, Y) for b in c.body))


def _least(fixpoints: list, leq: Callable):
    for f in fixpoints:
        if all(leq(f, g) for g in fixpoints):
            return f
    raise AssertionError("no least element among fixpoints")


def _sub(a, b):
    return a <= b


def _pleq_sets(p, q):
    return p[0] <= q[0] and q[1] <= p[1]


def oracle_semantics_lp(P: Program, which: str, limit: int = LP_LIMIT) -> list:
    """Canonical models of ``which`` (supported, kk, stable, wf, exact_stable)."""
    if len(P.alphabet) > limit:
        raise OracleBudgetError(f"{len(P.alphabet)} atoms exceed the oracle limit {limit}")
    sets = _subsets(P.alphabet)
    pairs = [(x, y) for x in sets for y in sets]

    def fitting(x, y):
        return _immediate(P, x, y), _immediate(P, y, x)

    def lfp_by_scan(f):
        return _least([z for z in sets if f(z) == z], _sub)

    def cdown(y):
        return lfp_by_scan(lambda z: _immediate(P, z, y))

    def cup(x):
        return lfp_by_scan(lambda z: _immediate(P, z, x))

    if which == "supported":
        return canon.models(canon.interp(x) for x in sets if _immediate(P, x, x) == x)
    if which == "kk":
        fps = [p for p in pairs if fitting(*p) == p]
        return [_lp_pair(_least(fps, _pleq_sets))]
    if which in ("stable", "exact_stable"):
        st = [(x, y) for x, y in pairs if x == cdown(y) and y == cup(x)]
        if which == "exact_stable":
            return canon.models(canon.interp(x) for x, y in st if x == y)
        return canon.models(_lp_pair(p) for p in st)
    if which == "wf":
        down = {y: cdown(y) for y in sets}
        up_ = {x: cup(x) for x in sets}
        fps = [(x, y) for x, y in pairs if down[y] == x and up_[x] == y]
        return [_lp_pair(_least(fps, _pleq_sets))]
    raise ValueError(f"unknown semantics {which!r}")


def _lp_pair(p) -> dict:
    return canon.pair(canon.interp(p[0]), canon.interp(p[1]))


# -- auto-epistemic logic --------------------------------------------------------------

class _Ael:
    """Belief-pair evaluation straight from the inductive definition.

    Worlds are frozensets of atoms, structures frozensets of worlds.
    """

    def __init__(self, alphabet, formulas):
        self.alphabet = tuple(alphabet)
        self.formulas = tuple(formulas)
        self.worlds = _subsets(self.alphabet)
        self.structures = [frozenset(c) for r in range(len(self.worlds) + 1)
                           for c in combinations(self.worlds, r)]
        self.full = frozenset(self.worlds)
        self._du: dict = {}

    def holds(self, P, S, X, f) -> bool:
        if isinstance(f, Const):
            return f.value
        if isinstance(f, Atom):
            return f.name in X
        if isinstance(f, Not):
            return not self.holds(S, P, X, f.arg)
        if isinstance(f, And):
            return all(self.holds(P, S, X, a) for a in f.args)
        if isinstance(f, Or):
            return any(self.holds(P, S, X, a) for a in f.args)
        if isinstance(f, K):
            return all(self.holds(P, S, Y, f.arg) for Y in P)
        raise TypeError(f)

    def du(self, P, S) -> frozenset:
        key = (P, S)
        r = self._du.get(key)
        if r is None:
            r = frozenset(X for X in self.worlds if all(self.holds(P, S, X, f) for f in self.formulas))
            self._du[key] = r
        return r

    # knowledge order: Q ≤ Q' iff Q ⊇ Q'
    @staticmethod
    def kleq(a, b):
        return a >= b

    def pleq(self, p, q):
        return self.kleq(p[0], q[0]) and self.kleq(q[1], p[1])

    def lfp_scan(self, f):
        return _least([z for z in self.structures if f(z) == z], self.kleq)

    def cdown(self, y):
        return self.lfp_scan(lambda z: self.du(y, z))

    def cup(self, x):
        return self.lfp_scan(lambda z: self.du(x, z))


def oracle_semantics_ael(T: ModalTheory, which: str, limit: int = AEL_LIMIT) -> list:
    if len(T.alphabet) > limit:
        raise OracleBudgetError(f"{len(T.alphabet)} atoms exceed the oracle limit {limit}")
    o = _Ael(T.alphabet, T.formulas)
    Ws = o.structures
    if which == "expansions":
        return canon.models(canon.pws(q) for q in Ws if o.du(q, q) == q)
    if which == "extensions":
        return canon.models(canon.pws(q) for q in Ws if o.cdown(q) == q)
    if which == "partial_expansions":
        return canon.models(_ael_pair((p, s)) for p in Ws for s in Ws
                            if o.du(s, p) == p and o.du(p, s) == s)
    if which == "kk":
        fps = [(p, s) for p in Ws for s in Ws if o.du(s, p) == p and o.du(p, s) == s]
        return [_ael_pair(_least(fps, o.pleq))]
    if which == "partial_extensions":
        down = {y: o.cdown(y) for y in Ws}
        return canon.models(_ael_pair((x, y)) for y in Ws for x in [down[y]] if o.cup(x) == y)
    if which == "wf":
        down = {y: o.cdown(y) for y in Ws}
        up_ = {x: o.cup(x) for x in Ws}
        fps = [(x, y) for x in Ws for y in Ws if down[y] == x and up_[x] == y]
        return [_ael_pair(_least(fps, o.pleq))]
    raise ValueError(f"unknown semantics {which!r}")


def _ael_pair(p) -> dict:
    return canon.pair(canon.pws(p[0]), canon.pws(p[1]))


def konolige_formulas(D: DefaultTheory) -> list:
    """m(D, W), restated here so the oracle does not lean on the engine."""
    out = []
    for d in D.defaults:
        body = [K(d.prerequisite)] + [Not(K(Not(b))) for b in d.justifications]
        out.append(Or((Not(And(body)), d.consequence)))
    return out + list(D.axioms)


def oracle_semantics_dl(D: DefaultTheory, which: str, limit: int = AEL_LIMIT) -> list:
    return oracle_semantics_ael(ModalTheory(D.alphabet, tuple(konolige_formulas(D))), which, limit)


def consistent_only(which: str, models: list) -> list:
    """Drop models mentioning the empty structure (AEL/DL consistency)."""
    def ok(m):
        if isinstance(m, dict):
            return bool(m["lower"]) and bool(m["upper"])
        return bool(m)
    return [m for m in models if ok(m)]


# -- comparison -----------------------------------------------------------------------

@dataclass
class EquivalenceReport:
    digest: str
    semantics: str
    match: bool
    counterexample: Optional[dict] = None
    engine_count: int = 0
    oracle_count: int = 0

    def to_dict(self) -> dict:
        return asdict(self)

    def __str__(self):
        if self.match:
            return f"{self.digest} {self.semantics}: match ({self.engine_count} models)"
        ce = self.counterexample
        return f"{self.digest} {self.semantics}: MISMATCH, {ce['side']} has {canon.dumps(ce['model'])}"


def instance_digest(instance) -> str:
    return canon.digest(repr(instance))


def compare(instance, which: str, engine_result: Sequence, oracle_result: Sequence) -> EquivalenceReport:
    """Set equality of canonical model lists; the smallest model found on one
    side only is reported."""
    eng = {canon.model_key(m): m for m in engine_result}
    orc = {canon.model_key(m): m for m in oracle_result}
    digest = instance if isinstance(instance, str) else instance_digest(instance)
    diff = [(k, "engine") for k in eng if k not in orc] + [(k, "oracle") for k in orc if k not in eng]
    report = EquivalenceReport(digest, which, not diff, engine_count=len(eng), oracle_count=len(orc))
    if diff:
        k, side = min(diff, key=lambda d: (len(d[0]), d[0]))
        report.counterexample = {"side": side, "model": (eng if side == "engine" else orc)[k]}
    return report


# -- regression corpus ----------------------------------------------------------------

MANIFEST = "manifest.json"


def load_manifest(directory: str) -> dict:
    path = os.path.join(directory, MANIFEST)
    if not os.path.exists(path):
        return {}
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def save_manifest(directory: str, manifest: dict) -> None:
    with open(os.path.join(directory, MANIFEST), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def persist_failure(directory: str, name: str, text: str, expected: dict) -> str:
    """Store a failing instance and its oracle models (per semantics) in the corpus."""
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, name)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    manifest = load_manifest(directory)
    manifest[name] = {sem: canon.digest(models) for sem, models in expected.items()}
    save_manifest(directory, manifest)
    return path
