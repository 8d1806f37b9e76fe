"""Canonical, JSON-ready shapes for models.

Interpretations are sorted atom lists, possible world structures sorted
lists of interpretations, pairs ``{"lower": ..., "upper": ...}``.  A result
is always a list of models, so single-model semantics give a list of one.
"""
from __future__ import annotations

import hashlib
import json
from typing import Iterable


def interp(atoms: Iterable[str]) -> list:
    return sorted(atoms)


def _interp_key(i: list):
    return (len(i), i)


def pws(worlds: Iterable[Iterable[str]]) -> list:
    return sorted((interp(w) for w in worlds), key=_interp_key)


def pair(lower, upper) -> dict:
    return {"lower": lower, "upper": upper}


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def model_key(model) -> str:
    return dumps(model)


def models(items: Iterable) -> list:
    """Deduplicate and order a collection of canonical models."""
    seen = {}
    for m in items:
        seen.setdefault(model_key(m), m)
    return [seen[k] for k in sorted(seen, key=lambda k: (len(k), k))]


def digest(obj) -> str:
    return hashlib.sha256(dumps(obj).encode("utf-8")).hexdigest()[:16]
