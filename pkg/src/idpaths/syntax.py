"""Concrete syntax: one tokenizer, recursive-descent parsers and the derivation file format.

Printing is done by ``str`` on every object; each parser here accepts that
output, so ``parse(str(x))`` gives back ``x`` up to alpha.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import kernel, paths, terms
from .errors import EndpointMismatch, ParseError
from .kernel import (
    Apply,
    Arrow,
    Base,
    Derivation,
    EmbeddedPath,
    IdT,
    IsType,
    Lam,
    PathJudg,
    PathWitness,
    Pi,
    Rewr,
    TermVar,
    Typing,
)
from .paths import RULE_NAMES

_TOKEN = re.compile(
    r"""
    (?P<space>\s+)
  | (?P<punct>=>|->|[()\[\]{}<>.,:\#\\=λ])
  | (?P<ident>[^\W\d]\w*'*)
    """,
    re.VERBOSE,
)

# unicode spellings accepted for the path constructors
ALIASES = {"ρ": "rho", "σ": "sigma", "τ": "tau", "ξ": "xi", "μ": "mu", "ν": "nu", "β": "beta", "η": "eta", "α": "alpha"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str, line: int = 1, column: int = 1) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, column)
        chunk = m.group()
        if m.lastgroup == "punct":
            out.append(Token("punct", "\\" if chunk == "λ" else chunk, line, column))
        elif m.lastgroup == "ident":
            out.append(Token("ident", ALIASES.get(chunk, chunk), line, column))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            column = len(chunk) - chunk.rfind("\n")
        else:
            column += len(chunk)
        pos = m.end()
    out.append(Token("end", "", line, column))
    return out


class Parser:
    def __init__(self, text: str, line: int = 1, column: int = 1) -> None:
        self.tokens = tokenize(text, line, column)
        self.i = 0

    # -------------------------------------------------------- token plumbing

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.column)

    def at(self, text: str) -> bool:
        return self.tok.kind == "punct" and self.tok.text == text

    def advance(self) -> Token:
        tok = self.tok
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def ident(self) -> str:
        if self.tok.kind != "ident":
            raise self.error(f"expected an identifier, found {self.tok.text or 'end of input'!r}")
        return self.advance().text

    def finish(self) -> None:
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r} after a complete expression")

    # -------------------------------------------------------- lambda terms

    def _binders(self) -> list[str]:
        self.expect("\\")
        names = [self.ident()]
        while self.tok.kind == "ident":
            names.append(self.ident())
        self.expect(".")
        return names

    def term(self) -> terms.Term:
        if self.at("\\"):
            names = self._binders()
            body = self.term()
            for name in reversed(names):
                body = terms.Abs(name, body)
            return body
        t = self._term_atom()
        while self.tok.kind == "ident" or self.at("(") or self.at("\\"):
            t = terms.App(t, self.term() if self.at("\\") else self._term_atom())
        return t

    def _term_atom(self) -> terms.Term:
        if self.tok.kind == "ident":
            return terms.Var(self.advance().text)
        if self.at("("):
            self.advance()
            t = self.term()
            self.expect(")")
            return t
        raise self.error(f"expected a term, found {self.tok.text or 'end of input'!r}")

    # -------------------------------------------------------- paths

    def endpoint(self) -> paths.Endpoint:
        if self.at("{"):
            self.advance()
            p = self.path()
            self.expect("}")
            return p
        return self.term()

    def path(self) -> paths.Path:
        start = self.tok
        try:
            return self._path()
        except (EndpointMismatch, ValueError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise self.error(f"ill-formed path: {exc}", start) from exc

    def _path(self) -> paths.Path:
        if self.at("#"):
            self.advance()
            name = self.ident()
            self.expect(":")
            src = self.endpoint()
            self.expect("->")
            tgt = self.endpoint()
            return paths.Atom(name, src, tgt)
        head = self.tok
        name = self.ident()
        if name == "rho":
            self.expect("[")
            at = self.endpoint()
            self.expect("]")
            return paths.Rho(at)
        if name in ("beta", "eta", "alpha"):
            self.expect("[")
            lhs = self.term()
            self.expect("=>")
            rhs = self.term()
            self.expect("]")
            return self._basic(name, lhs, rhs, head)
        if name in RULE_NAMES:
            self.expect("{")
            before = self.path()
            self.expect("=>")
            after = self.path()
            self.expect("}")
            return paths.RuleStep(name, before, after)
        self.expect("(")
        if name == "sigma":
            p = paths.Sigma(self.path())
        elif name == "tau":
            left = self.path()
            self.expect(",")
            p = paths.Tau(left, self.path())
        elif name == "xi":
            binder = self.ident()
            self.expect(".")
            p = paths.Xi(binder, self.path())
        elif name == "mu":
            fun = self.term()
            self.expect(",")
            p = paths.Mu(fun, self.path())
        elif name == "nu":
            fun_path = self.path()
            self.expect(",")
            p = paths.Nu(fun_path, self.term())
        else:
            raise self.error(f"unknown path constructor {name!r}", head)
        self.expect(")")
        return p

    def _basic(self, kind: str, lhs: terms.Term, rhs: terms.Term, head: Token) -> paths.Path:
        if kind == "alpha":
            return paths.AlphaStep(lhs, rhs)
        for site in terms.contraction_sites(lhs):
            if site.kind == kind and terms.alpha_eq(site.result, rhs):
                return paths.basic_step(lhs, terms.RedexSite(site.position, kind, rhs))
        raise self.error(f"no single {kind} step takes {lhs} to {rhs}", head)

    # -------------------------------------------------------- proof terms

    def proof_term(self) -> kernel.ProofTerm:
        if self.at("\\"):
            names = self._binders()
            body = self.proof_term()
            for name in reversed(names):
                body = Lam(name, body)
            return body
        pt = self._pt_atom()
        while self.tok.kind == "ident" or self.at("(") or self.at("<") or self.at("\\"):
            pt = Apply(pt, self.proof_term() if self.at("\\") else self._pt_atom())
        return pt

    def _pt_atom(self) -> kernel.ProofTerm:
        if self.tok.kind == "ident":
            if self.tok.text == "REWR" and self.peek().text == "(":
                return self._rewr()
            return TermVar(self.advance().text)
        if self.at("<"):
            self.advance()
            p = self.path()
            self.expect(">")
            if not self.at("("):
                return EmbeddedPath(p)
            self.advance()
            lhs = self.proof_term()
            if self.at(")"):
                # not a witness: the embedded path applied to one argument
                self.advance()
                return Apply(EmbeddedPath(p), lhs)
            self.expect(",")
            rhs = self.proof_term()
            self.expect(")")
            return PathWitness(p, lhs, rhs)
        if self.at("("):
            self.advance()
            pt = self.proof_term()
            self.expect(")")
            return pt
        raise self.error(f"expected a proof term, found {self.tok.text or 'end of input'!r}")

    def _rewr(self) -> Rewr:
        self.advance()
        self.expect("(")
        major = self.proof_term()
        self.expect(",")
        bound = self.ident()
        self.expect(".")
        minor = self.proof_term()
        self.expect(")")
        return Rewr(major, bound, minor)

    # -------------------------------------------------------- types and judgments

    def type_expr(self) -> kernel.TypeExpr:
        dom = self._type_atom()
        if self.at("->"):
            self.advance()
            return Arrow(dom, self.type_expr())
        return dom

    def _type_atom(self) -> kernel.TypeExpr:
        if self.at("("):
            self.advance()
            ty = self.type_expr()
            self.expect(")")
            return ty
        name = self.ident()
        if name == "Id" and self.at("["):
            self.advance()
            carrier = self.type_expr()
            self.expect("]")
            self.expect("(")
            lhs = self.proof_term()
            self.expect(",")
            rhs = self.proof_term()
            self.expect(")")
            return IdT(carrier, lhs, rhs)
        if name == "Pi" and self.at("("):
            self.advance()
            binder = self.ident()
            self.expect(":")
            domain = self.type_expr()
            self.expect(")")
            return Pi(binder, domain, self.type_expr())
        return Base(name)

    def judgment(self) -> kernel.Judgment:
        if self.tok.text == "type" and self.tok.kind == "ident" and self.peek().text not in (":", "="):
            self.advance()
            return IsType(self.type_expr())
        lhs = self.proof_term()
        if self.at("="):
            self.advance()
            self.expect("[")
            p = self.path()
            self.expect("]")
            rhs = self.proof_term()
            self.expect(":")
            return PathJudg(lhs, p, rhs, self.type_expr())
        self.expect(":")
        return Typing(lhs, self.type_expr())


def _whole(method: str, text: str, line: int = 1, column: int = 1):
    parser = Parser(text, line, column)
    result = getattr(parser, method)()
    parser.finish()
    return result


def parse_term(text: str) -> terms.Term:
    return _whole("term", text)


def parse_path(text: str) -> paths.Path:
    return _whole("path", text)


def parse_proof_term(text: str) -> kernel.ProofTerm:
    return _whole("proof_term", text)


def parse_type(text: str) -> kernel.TypeExpr:
    return _whole("type_expr", text)


def parse_judgment(text: str, line: int = 1, column: int = 1) -> kernel.Judgment:
    return _whole("judgment", text, line, column)


# ---------------------------------------------------------------- derivation files
#
#   (rule IdI1
#     (label h)
#     (conclusion "<judgment>")
#     (premises (rule ...) ...)
#     (discharge a b))

_SEXP = re.compile(r'(?P<space>\s+)|(?P<comment>;[^\n]*)|(?P<open>\()|(?P<close>\))|(?P<string>"[^"]*")|(?P<atom>[^\s()";]+)')


@dataclass(frozen=True)
class SAtom:
    text: str
    line: int
    column: int
    quoted: bool = False


@dataclass(frozen=True)
class SList:
    items: tuple
    line: int
    column: int


def read_sexp(text: str) -> list:
    stack: list[list] = [[]]
    opens: list[tuple[int, int]] = []
    line, column, pos = 1, 1, 0
    while pos < len(text):
        m = _SEXP.match(text, pos)
        if m is None:
            raise ParseError("unterminated string", line, column)
        kind, chunk = m.lastgroup, m.group()
        if kind == "open":
            stack.append([])
            opens.append((line, column))
        elif kind == "close":
            if len(stack) == 1:
                raise ParseError("unbalanced ')'", line, column)
            items = stack.pop()
            start = opens.pop()
            stack[-1].append(SList(tuple(items), *start))
        elif kind == "string":
            # judgments never contain quotes, so strings need no escapes
            stack[-1].append(SAtom(chunk[1:-1], line, column + 1, True))
        elif kind == "atom":
            stack[-1].append(SAtom(chunk, line, column))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            column = len(chunk) - chunk.rfind("\n")
        else:
            column += len(chunk)
        pos = m.end()
    if len(stack) > 1:
        raise ParseError("unbalanced '('", *opens[-1])
    return stack[0]


def _derivation(node) -> Derivation:
    if not isinstance(node, SList) or not node.items or getattr(node.items[0], "text", None) != "rule":
        raise ParseError("expected (rule <tag> ...)", node.line, node.column)
    if len(node.items) < 2 or not isinstance(node.items[1], SAtom):
        raise ParseError("a rule needs a tag", node.line, node.column)
    tag = node.items[1].text
    label = conclusion = None
    premises: list[Derivation] = []
    discharged: list[str] = []
    for field_node in node.items[2:]:
        if not isinstance(field_node, SList) or not field_node.items or not isinstance(field_node.items[0], SAtom):
            raise ParseError("expected a (field ...) entry", field_node.line, field_node.column)
        key, rest = field_node.items[0].text, field_node.items[1:]
        if key == "label":
            label = _single_atom(field_node, rest).text
        elif key == "conclusion":
            text = _single_atom(field_node, rest)
            conclusion = parse_judgment(text.text, text.line, text.column)
        elif key == "premises":
            premises = [_derivation(p) for p in rest]
        elif key == "discharge":
            discharged = [_single_atom(field_node, (a,)).text for a in rest]
        else:
            raise ParseError(f"unknown field {key!r}", field_node.line, field_node.column)
    if conclusion is None:
        raise ParseError("a rule needs a conclusion", node.line, node.column)
    try:
        return Derivation(tag, conclusion, tuple(premises), frozenset(discharged), label, node.line)
    except ValueError as exc:
        raise ParseError(str(exc), node.items[1].line, node.items[1].column) from exc


def _single_atom(parent: SList, rest) -> SAtom:
    if len(rest) != 1 or not isinstance(rest[0], SAtom):
        raise ParseError("expected exactly one value", parent.line, parent.column)
    return rest[0]


def parse_derivation(text: str) -> Derivation:
    nodes = read_sexp(text)
    if len(nodes) != 1:
        raise ParseError(f"expected one derivation, found {len(nodes)}", 1, 1)
    return _derivation(nodes[0])


def format_derivation(d: Derivation, indent: int = 0) -> str:
    pad = "  " * indent
    lines = [f"{pad}(rule {d.rule}"]
    if d.label:
        lines.append(f"{pad}  (label {d.label})")
    lines.append(f'{pad}  (conclusion "{d.conclusion}")')
    if d.premises:
        lines.append(f"{pad}  (premises")
        lines.extend(format_derivation(p, indent + 2) for p in d.premises)
        lines[-1] += ")"
    if d.discharged:
        lines.append(f"{pad}  (discharge {' '.join(sorted(d.discharged))})")
    lines[-1] += ")"
    return "\n".join(lines)
