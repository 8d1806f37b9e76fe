"""Readers and writers for ``.lp``, ``.ael``, ``.dl`` and splitting files.

All three dialects share the lexer.  Lines of the form ``stratum NAME: a b``
and ``order A < B`` may appear in any file and form a splitting; a bare
splitting file contains nothing else.  ``#alphabet a b c.`` fixes the
alphabet (and its bit order) explicitly.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .formula import FALSE, TRUE, And, Atom, Formula, K, Not, Or, implies, to_text
from .poset import PosetError, Splitting
from .theory import Clause, Default, DefaultTheory, Literal, ModalTheory, Program


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    kind: str  # ident, sym, end
    text: str
    line: int
    col: int


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_SYMS = (":-", "=>", "~", "&", "|", "(", ")", ",", ".", ":", "/")
_STRATUM = re.compile(r"^\s*stratum\s+([A-Za-z0-9_]+)\s*:(.*)$")
_ORDER = re.compile(r"^\s*order\s+([A-Za-z0-9_]+)\s*<\s*([A-Za-z0-9_]+)\s*$")
_ALPHA = re.compile(r"^\s*#alphabet\b(.*)$")
_ARG = re.compile(r"[A-Za-z0-9_,()]")


def _strip_comment(line: str) -> str:
    k = line.find("%")
    return line if k < 0 else line[:k]


class _Source:
    """Directive lines pulled out of a source text, the rest tokenized."""

    def __init__(self, text: str, modal: bool):
        self.blocks: dict = {}
        self.order: list = []
        self.alphabet: Optional[tuple] = None
        self.alphabet_at = (1, 1)
        self.modal = modal
        self.tokens: list = []
        for ln, raw in enumerate(text.splitlines(), 1):
            line = _strip_comment(raw)
            m = _STRATUM.match(line)
            if m:
                name = m.group(1)
                if name in self.blocks:
                    raise ParseError(f"stratum {name!r} declared twice", ln, line.index(name) + 1)
                self.blocks[name] = tuple(m.group(2).split())
                continue
            m = _ORDER.match(line)
            if m:
                self.order.append((m.group(1), m.group(2)))
                continue
            m = _ALPHA.match(line)
            if m:
                if self.alphabet is not None:
                    raise ParseError("alphabet declared twice", ln, line.index("#") + 1)
                body = m.group(1).strip()
                if not body.endswith("."):
                    raise ParseError("alphabet declaration must end with '.'", ln, len(line))
                names = tuple(body[:-1].split())
                if len(set(names)) != len(names):
                    raise ParseError("alphabet lists an atom twice", ln, line.index("#") + 1)
                self.alphabet = names
                self.alphabet_at = (ln, line.index("#") + 1)
                continue
            self._lex(line, ln)
        self.tokens.append(Token("end", "", len(text.splitlines()) + 1, 1))

    def _lex(self, line: str, ln: int):
        k = 0
        n = len(line)
        while k < n:
            c = line[k]
            if c.isspace():
                k += 1
                continue
            m = _IDENT.match(line, k)
            if m:
                start = k
                k = m.end()
                word = m.group()
                if k < n and line[k] == "(" and not (self.modal and word == "K"):
                    # ground term suffix such as even(3): consume a balanced group
                    depth = 0
                    j = k
                    while j < n:
                        if line[j] == "(":
                            depth += 1
                        elif line[j] == ")":
                            depth -= 1
                            if depth == 0:
                                break
                        elif not _ARG.match(line[j]):
                            break
                        j += 1
                    if j >= n or depth != 0:
                        raise ParseError("unbalanced parenthesis in atom name", ln, k + 1)
                    k = j + 1
                self.tokens.append(Token("ident", line[start:k], ln, start + 1))
                continue
            for s in _SYMS:
                if line.startswith(s, k):
                    self.tokens.append(Token("sym", s, ln, k + 1))
                    k += len(s)
                    break
            else:
                raise ParseError(f"unexpected character {c!r}", ln, k + 1)

    def splitting(self) -> Optional[Splitting]:
        if not self.blocks:
            if self.order:
                raise ParseError("order given without strata", 1, 1)
            return None
        names = tuple(self.blocks)
        try:
            return Splitting.from_blocks([self.blocks[n] for n in names], self.order, names)
        except PosetError as e:
            raise ParseError(str(e), 1, 1) from None


class _Parser:
    def __init__(self, src: _Source):
        self.toks = src.tokens
        self.k = 0
        self.modal = src.modal
        self.forbid_k = False

    @property
    def tok(self) -> Token:
        return self.toks[self.k]

    def at(self, text: str) -> bool:
        return self.tok.kind == "sym" and self.tok.text == text

    def eat(self, text: str) -> Token:
        t = self.tok
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        self.k += 1
        return t

    def error(self, msg: str) -> ParseError:
        t = self.tok
        found = "end of input" if t.kind == "end" else repr(t.text)
        return ParseError(f"{msg}, found {found}", t.line, t.col)

    def done(self) -> bool:
        return self.tok.kind == "end"

    def ident(self) -> str:
        t = self.tok
        if t.kind != "ident":
            raise self.error("expected an atom")
        self.k += 1
        return t.text

    # formulas: implication < or < and < unary

    def formula(self) -> Formula:
        left = self.disjunction()
        if self.at("=>"):
            self.k += 1
            return implies(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        items = [self.conjunction()]
        while self.at("|"):
            self.k += 1
            items.append(self.conjunction())
        return items[0] if len(items) == 1 else Or(items)

    def conjunction(self) -> Formula:
        items = [self.unary()]
        while self.at("&"):
            self.k += 1
            items.append(self.unary())
        return items[0] if len(items) == 1 else And(items)

    def unary(self) -> Formula:
        t = self.tok
        if self.at("~"):
            self.k += 1
            return Not(self.unary())
        if self.at("("):
            self.k += 1
            f = self.formula()
            self.eat(")")
            return f
        if t.kind == "ident":
            self.k += 1
            if t.text == "true":
                return TRUE
            if t.text == "false":
                return FALSE
            if t.text == "K" and self.modal:
                self.eat("(")
                f = self.formula()
                self.eat(")")
                return K(f)
            if t.text == "K" or (self.forbid_k and t.text.startswith("K(")):
                raise ParseError("modal operator K is not allowed here", t.line, t.col)
            return Atom(t.text)
        raise self.error("expected a formula")


def _alphabet(src: _Source, found: tuple) -> tuple:
    split = src.splitting()
    if src.alphabet is not None:
        extra = [a for a in found if a not in src.alphabet]
        if extra:
            raise ParseError(f"atoms {extra} are not in the declared alphabet", *src.alphabet_at)
        return src.alphabet
    out = dict.fromkeys(found)
    if split is not None:
        for i in split.indices:
            for a in split.blocks[i]:
                out.setdefault(a, None)
    return tuple(out)


def parse_lp(text: str) -> Program:
    src = _Source(text, modal=False)
    p = _Parser(src)
    clauses = []
    while not p.done():
        head = p.ident()
        if head in ("not", "true", "false"):
            t = p.toks[p.k - 1]
            raise ParseError(f"{head!r} cannot be a clause head", t.line, t.col)
        body = []
        if p.at(":-"):
            p.k += 1
            while True:
                t = p.tok
                name = p.ident()
                if name == "not":
                    body.append(Literal(p.ident(), False))
                elif name == "true":
                    body.append(True)
                elif name == "false":
                    body.append(False)
                else:
                    body.append(Literal(name, True))
                if p.at(","):
                    p.k += 1
                    continue
                break
        p.eat(".")
        clauses.append(Clause(head, tuple(body)))
    found = []
    for c in clauses:
        found.append(c.head)
        found.extend(c.body_atoms())
    return Program(_alphabet(src, tuple(dict.fromkeys(found))), tuple(clauses))


def _formula_atoms(fs) -> tuple:
    out: dict = {}
    for f in fs:
        for a in _atoms_in_order(f):
            out.setdefault(a, None)
    return tuple(out)


def _atoms_in_order(f):
    if isinstance(f, Atom):
        yield f.name
    elif isinstance(f, (Not, K)):
        yield from _atoms_in_order(f.arg)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            yield from _atoms_in_order(a)


def parse_ael(text: str) -> ModalTheory:
    src = _Source(text, modal=True)
    p = _Parser(src)
    fs = []
    while not p.done():
        fs.append(p.formula())
        p.eat(".")
    return ModalTheory(_alphabet(src, _formula_atoms(fs)), tuple(fs), src.splitting())


def parse_dl(text: str) -> DefaultTheory:
    src = _Source(text, modal=False)
    p = _Parser(src)
    p.forbid_k = True
    defaults, axioms = [], []
    while not p.done():
        t = p.tok
        if t.kind == "ident" and t.text == "axiom" and not _next_is_rule_sym(p):
            p.k += 1
            axioms.append(p.formula())
            p.eat(".")
            continue
        pre = TRUE if p.at(":") else p.formula()
        p.eat(":")
        just = []
        if not p.at("/"):
            just.append(p.formula())
            while p.at(","):
                p.k += 1
                just.append(p.formula())
        p.eat("/")
        cons = p.formula()
        p.eat(".")
        defaults.append(Default(pre, tuple(just), cons))
    fs = []
    for d in defaults:
        fs.extend([d.prerequisite, *d.justifications, d.consequence])
    fs.extend(axioms)
    return DefaultTheory(_alphabet(src, _formula_atoms(fs)), tuple(defaults), tuple(axioms), src.splitting())


def _next_is_rule_sym(p: _Parser) -> bool:
    nxt = p.toks[p.k + 1]
    return nxt.kind == "sym" and nxt.text in (":", "&", "|", "=>", "/", ",", ".")


def parse_splitting(text: str) -> Splitting:
    src = _Source(text, modal=False)
    if src.tokens[0].kind != "end":
        t = src.tokens[0]
        raise ParseError("splitting files hold only 'stratum' and 'order' lines", t.line, t.col)
    split = src.splitting()
    if split is None:
        raise ParseError("no strata declared", 1, 1)
    return split


PARSERS = {"lp": parse_lp, "ael": parse_ael, "dl": parse_dl}


def detect_dialect(path: str) -> str:
    for ext in PARSERS:
        if path.endswith("." + ext):
            return ext
    raise ValueError(f"cannot tell the dialect of {path!r}; pass --dialect")


# -- printing ------------------------------------------------------------------

def format_splitting(split: Splitting) -> str:
    lines = [f"stratum {i}: {' '.join(split.blocks[i])}" for i in split.indices]
    lines += [f"order {i} < {j}" for i, j in split.poset.covers()]
    return "\n".join(lines)


def _alphabet_line(alphabet, derived) -> list:
    return [] if tuple(alphabet) == tuple(derived) else [f"#alphabet {' '.join(alphabet)}."]


def format_lp(P: Program, splitting: Optional[Splitting] = None) -> str:
    found = []
    for c in P.clauses:
        found.append(c.head)
        found.extend(c.body_atoms())
    lines = _alphabet_line(P.alphabet, dict.fromkeys(found))
    lines += [str(c) for c in P.clauses]
    if splitting is not None:
        lines.append(format_splitting(splitting))
    return "\n".join(lines) + "\n"


def format_ael(T: ModalTheory) -> str:
    lines = _alphabet_line(T.alphabet, _derived(T.formulas, T.splitting))
    lines += [to_text(f) + "." for f in T.formulas]
    if T.splitting is not None:
        lines.append(format_splitting(T.splitting))
    return "\n".join(lines) + "\n"


def _derived(fs, split):
    out = dict.fromkeys(_formula_atoms(fs))
    if split is not None:
        for i in split.indices:
            for a in split.blocks[i]:
                out.setdefault(a, None)
    return tuple(out)


def format_default(d: Default) -> str:
    pre = "" if d.prerequisite == TRUE else to_text(d.prerequisite) + " "
    just = ", ".join(to_text(b) for b in d.justifications)
    sep = " " if just else ""
    return f"{pre}:{sep}{just} / {to_text(d.consequence)}."


def format_dl(D: DefaultTheory) -> str:
    fs = []
    for d in D.defaults:
        fs.extend([d.prerequisite, *d.justifications, d.consequence])
    fs.extend(D.axioms)
    lines = _alphabet_line(D.alphabet, _derived(fs, D.splitting))
    lines += [format_default(d) for d in D.defaults]
    lines += [f"axiom {to_text(w)}." for w in D.axioms]
    if D.splitting is not None:
        lines.append(format_splitting(D.splitting))
    return "\n".join(lines) + "\n"

