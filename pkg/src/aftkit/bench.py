"""Monolithic versus stratum-by-stratum solving on generated programs.

``chain(n, k)`` has n strata of k atoms in a line; every clause body uses
atoms of its own stratum and the one before.  Derivations cross strata both
through negation and through a long positive chain, which is what makes a
global iteration expensive.  ``grid(n, k)`` arranges n*n strata in a square
where each stratum sees its left and upper neighbours.
"""
from __future__ import annotations

import time
from typing import Optional

from . import lp
from .lattice import count_applications
from .poset import Splitting
from .theory import Clause, Literal, Program

FAMILIES = ("chain", "grid")


def _atom(j, m) -> str:
    return f"x{j}_{m}"


def _stratum_clauses(name, k, prev: list) -> list:
    """Atom 0 of each stratum negates atom 0 below it; the remaining atoms
    continue one positive chain that runs through every stratum."""
    out = []
    if not prev:
        out.append(Clause(_atom(name, 0)))
    for p in prev:
        out.append(Clause(_atom(name, 0), (Literal(_atom(p, 0), False),)))
    for m in range(1, k):
        if m == 1 and prev:
            for p in prev:
                out.append(Clause(_atom(name, 1), (Literal(_atom(p, k - 1)),)))
        else:
            out.append(Clause(_atom(name, m), (Literal(_atom(name, m - 1)),)))
        if prev:
            out.append(Clause(_atom(name, m), (Literal(_atom(name, 0)), Literal(_atom(prev[0], m), False))))
    return out


def chain(n: int, k: int) -> tuple:
    """(program, planted splitting) for the chain family."""
    if n < 1 or k < 1:
        raise ValueError("chain needs n >= 1 and k >= 1")
    clauses = []
    for j in range(n):
        clauses += _stratum_clauses(j, k, [j - 1] if j else [])
    blocks = [[_atom(j, m) for m in range(k)] for j in range(n)]
    split = Splitting.from_blocks(blocks, [(j, j + 1) for j in range(n - 1)])
    return Program.build(clauses, [a for b in blocks for a in b]), split


def grid(n: int, k: int) -> tuple:
    if n < 1 or k < 1:
        raise ValueError("grid needs n >= 1 and k >= 1")
    names = [f"{r}{c}" if n <= 10 else f"{r}_{c}" for r in range(n) for c in range(n)]
    name = {(r, c): names[r * n + c] for r in range(n) for c in range(n)}
    clauses, blocks, order = [], [], []
    for r in range(n):
        for c in range(n):
            prev = [name[q] for q in ((r - 1, c), (r, c - 1)) if q[0] >= 0 and q[1] >= 0]
            clauses += _stratum_clauses(name[(r, c)], k, prev)
            blocks.append([_atom(name[(r, c)], m) for m in range(k)])
            order += [(p, name[(r, c)]) for p in prev]
    split = Splitting.from_blocks(blocks, order, names)
    return Program.build(clauses, [a for b in blocks for a in b]), split


def generate(family: str, n: int, k: int) -> tuple:
    if family == "chain":
        return chain(n, k)
    if family == "grid":
        return grid(n, k)
    raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")


def _measure(fn):
    with count_applications() as box:
        t0 = time.perf_counter()
        result = fn()
        seconds = time.perf_counter() - t0
    return result, box[0], seconds


def run(family: str, n: int, k: int, semantics: str = "wf", budget: Optional[int] = None,
        repeat: int = 1) -> dict:
    """Solve the generated program both ways; best wall time over ``repeat`` runs."""
    P, split = generate(family, n, k)
    lp.validate_splitting(P, split)
    best = {}
    results = {}
    for mode in ("monolithic", "split"):
        times = []
        for _ in range(max(1, repeat)):
            res, count, secs = _measure(
                lambda: lp.solve(P, semantics, mode, splitting=split if mode == "split" else None,
                                 budget=budget))
            times.append(secs)
        best[mode] = {"applications": count, "seconds": round(min(times), 6)}
        results[mode] = res
    mono, spl = best["monolithic"], best["split"]
    return {
        "family": family,
        "n": n,
        "k": k,
        "semantics": semantics,
        "atoms": len(P.alphabet),
        "strata": len(split.indices),
        "monolithic": mono,
        "split": spl,
        "application_ratio": round(spl["applications"] / mono["applications"], 6) if mono["applications"] else 0.0,
        "speedup": round(mono["seconds"] / spl["seconds"], 3) if spl["seconds"] else 0.0,
        "agree": _same(results["monolithic"], results["split"]),
    }


def _same(a, b) -> bool:
    if isinstance(a, list):
        return sorted(a) == sorted(b)
    return tuple(a) == tuple(b)
