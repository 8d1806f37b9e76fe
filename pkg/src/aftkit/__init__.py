"""Stratified approximation fixpoint theory for logic programs, auto-epistemic
logic and default logic."""

from .syntax import parse_ael, parse_dl, parse_lp, parse_splitting

__version__ = "0.1.0"

__all__ = ["parse_lp", "parse_ael", "parse_dl", "parse_splitting", "__version__"]
