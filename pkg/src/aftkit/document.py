"""Model documents: engine results in canonical JSON form."""
from __future__ import annotations

import json
from importlib import resources
from typing import Optional

from . import canon
from .poset import Splitting

MULTI = {"supported", "stable", "expansions", "partial_expansions", "extensions", "partial_extensions"}


def _lp_interp(P, mask: int) -> list:
    return canon.interp(a for k, a in enumerate(P.alphabet) if mask >> k & 1)


def lp_models(P, semantics: str, result, exact_only: bool = False) -> list:
    if semantics == "supported":
        return canon.models(_lp_interp(P, x) for x in result)
    if semantics in ("kk", "wf"):
        return [canon.pair(_lp_interp(P, result[0]), _lp_interp(P, result[1]))]
    if exact_only:
        return canon.models(_lp_interp(P, p[0]) for p in result)
    return canon.models(canon.pair(_lp_interp(P, p[0]), _lp_interp(P, p[1])) for p in result)


def _pws(space, q: int) -> list:
    return canon.pws(space.world_atoms(w) for w in space.members(q))


def ael_models(space, semantics: str, result) -> list:
    if semantics in ("kk", "wf"):
        result = [result]
    if semantics in ("expansions", "extensions"):
        return canon.models(_pws(space, q) for q in result)
    return canon.models(canon.pair(_pws(space, p[0]), _pws(space, p[1])) for p in result)


def splitting_dict(split: Optional[Splitting]) -> Optional[dict]:
    if split is None:
        return None
    return {
        "strata": [{"name": str(i), "atoms": sorted(split.blocks[i])} for i in split.poset.linearization],
        "order": [[str(i), str(j)] for i, j in split.poset.covers()],
    }


def build(dialect: str, semantics: str, mode: str, models: list, splitting: Optional[Splitting] = None,
          trace: Optional[list] = None, seconds: float = 0.0, deterministic: bool = False,
          alphabet=(), notes: Optional[dict] = None) -> dict:
    z = (lambda t: 0.0) if deterministic else (lambda t: round(t, 6))
    doc = {
        "dialect": dialect,
        "semantics": semantics,
        "mode": mode,
        "alphabet": sorted(alphabet),
        "count": len(models),
        "models": models,
        "splitting": splitting_dict(splitting),
        "timing": {
            "total_seconds": z(seconds),
            "strata": [{"stratum": str(e["stratum"]), "seconds": z(e["seconds"]), "results": e["results"]}
                       for e in (trace or [])],
        },
    }
    if notes:
        doc["notes"] = notes
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _show_interp(i: list) -> str:
    return "{" + ", ".join(i) + "}"


def _show(m) -> str:
    if isinstance(m, dict):
        return f"({_show_interp(m['lower'])}, {_show_interp(m['upper'])})"
    return _show_interp(m)


def render_text(doc: dict) -> str:
    lines = [f"{doc['semantics']} ({doc['mode']}): {doc['count']} model(s)"]
    pws_like = doc["dialect"] in ("ael", "dl")
    for m in doc["models"]:
        lines.append("  " + (_show_pws_model(m) if pws_like else _show(m)))
    return "\n".join(lines) + "\n"


def _show_pws(q: list) -> str:
    return "{" + ", ".join(_show_interp(w) for w in q) + "}"


def _show_pws_model(m) -> str:
    if isinstance(m, dict):
        return f"({_show_pws(m['lower'])}, {_show_pws(m['upper'])})"
    return _show_pws(m)


def load_schema(name: str) -> dict:
    text = resources.files("aftkit").joinpath("schemas", name).read_text(encoding="utf-8")
    return json.loads(text)
