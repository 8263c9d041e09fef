"""Text formats: schema/FD files, fact files, queries and DIMACS 3CNF.

Every parser reports the offending line number.  Formatters produce text the
parsers read back to an equal value.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .exceptions import ParseError, SchemaError
from .generators import Cnf3
from .model import (
    FD, Atom, ConjunctiveQuery, Const, Database, Fact, FDSet, RelationDecl, Schema, Var, substitute,
)
from .safety import FRESH_PREFIX

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<string>'(?:[^'\\\n]|\\.)*')
  | (?P<arrow>->)
  | (?P<turnstile>:-)
  | (?P<word>[A-Za-z0-9_]+)
  | (?P<punct>[(),:.])
""", re.VERBOSE)

_BARE = re.compile(r"[A-Za-z0-9_]+\Z")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass
class _Tok:
    kind: str
    text: str
    line: int


def _tokenize(text: str) -> List[_Tok]:
    out, line, pos = [], 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line)
        kind = m.lastgroup
        if kind == "nl":
            out.append(_Tok("nl", "\n", line))
            line += 1
        elif kind == "string":
            out.append(_Tok("string", _unquote(m.group(), line), line))
        elif kind not in ("ws", "comment"):
            out.append(_Tok(kind, m.group(), line))
        pos = m.end()
    return out


def _unquote(s: str, line: int) -> str:
    body = s[1:-1]
    out, i = [], 0
    while i < len(body):
        c = body[i]
        if c == "\\":
            nxt = body[i + 1]
            if nxt not in "\\'":
                raise ParseError(f"unknown escape \\{nxt}", line)
            out.append(nxt)
            i += 2
        else:
            out.append(c)
            i += 1
    value = "".join(out)
    _check_constant(value, line)
    return value


def _check_constant(value: str, line: int):
    if value.startswith(FRESH_PREFIX):
        raise ParseError(f"constants may not start with {FRESH_PREFIX!r}", line)


def quote_constant(value: str) -> str:
    """Bare token when possible, otherwise a single-quoted string."""
    if _BARE.match(value):
        return value
    return "'" + value.replace("\\", "\\\\").replace("'", "\\'") + "'"


class _Stream:
    def __init__(self, toks: List[_Tok]):
        self.toks = toks
        self.i = 0

    def peek(self) -> Optional[_Tok]:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def line(self) -> Optional[int]:
        t = self.peek()
        return t.line if t else (self.toks[-1].line if self.toks else None)

    def take(self, kind: str, text: Optional[str] = None) -> _Tok:
        t = self.peek()
        if t is None or t.kind != kind or (text is not None and t.text != text):
            want = text or kind
            got = "end of input" if t is None else repr(t.text)
            raise ParseError(f"expected {want}, got {got}", self.line())
        self.i += 1
        return t

    def accept(self, kind: str, text: Optional[str] = None) -> Optional[_Tok]:
        t = self.peek()
        if t is not None and t.kind == kind and (text is None or t.text == text):
            self.i += 1
            return t
        return None


def _lines(text: str) -> List[List[_Tok]]:
    lines, cur = [], []
    for t in _tokenize(text):
        if t.kind == "nl":
            if cur:
                lines.append(cur)
            cur = []
        else:
            cur.append(t)
    if cur:
        lines.append(cur)
    return lines


def _ident(s: _Stream, what: str) -> str:
    t = s.take("word")
    if not _IDENT.match(t.text):
        raise ParseError(f"invalid {what} {t.text!r}", t.line)
    return t.text


# -- schema and FDs ----------------------------------------------------------

def parse_schema_fds(text: str) -> Tuple[Schema, FDSet]:
    """``relation R(A, B)`` and ``fd R: A -> B`` lines; ``#`` starts a comment."""
    decls: dict = {}
    raw_fds = []
    for toks in _lines(text):
        s = _Stream(toks)
        line = toks[0].line
        head = s.take("word").text
        if head == "relation":
            name = _ident(s, "relation name")
            s.take("punct", "(")
            attrs = [_ident(s, "attribute")]
            while s.accept("punct", ","):
                attrs.append(_ident(s, "attribute"))
            s.take("punct", ")")
            if name in decls:
                raise ParseError(f"relation {name} declared twice", line)
            try:
                decls[name] = RelationDecl(name, tuple(attrs))
            except SchemaError as exc:
                raise ParseError(str(exc), line) from None
        elif head == "fd":
            name = _ident(s, "relation name")
            s.take("punct", ":")
            lhs = []
            while s.peek() is not None and s.peek().kind == "word":
                lhs.append(_ident(s, "attribute"))
            s.take("arrow")
            rhs = []
            while s.peek() is not None and s.peek().kind == "word":
                rhs.append(_ident(s, "attribute"))
            raw_fds.append((name, lhs, rhs, line))
        else:
            raise ParseError(f"expected 'relation' or 'fd', got {head!r}", line)
        if s.peek() is not None:
            raise ParseError(f"unexpected {s.peek().text!r}", s.line())
    schema = Schema(decls.values())
    fds = []
    for name, lhs, rhs, line in raw_fds:
        if name not in schema:
            raise ParseError(f"FD over undeclared relation {name}", line)
        unknown = sorted(set(lhs + rhs) - set(schema[name].attributes))
        if unknown:
            raise ParseError(f"{name} has no attribute(s) {', '.join(unknown)}", line)
        if len(set(lhs)) != len(lhs) or len(set(rhs)) != len(rhs):
            raise ParseError("an FD side repeats an attribute", line)
        fds.append(FD(name, frozenset(lhs), frozenset(rhs)))
    return schema, FDSet(schema, fds)


def format_schema_fds(schema: Schema, sigma: Optional[FDSet] = None) -> str:
    out = [f"relation {d.name}({', '.join(d.attributes)})" for d in schema]
    for dep in (sigma or ()):
        order = schema[dep.relation].attributes
        parts = [f"fd {dep.relation}:"] + [a for a in order if a in dep.lhs] + ["->"]
        parts += [a for a in order if a in dep.rhs]
        out.append(" ".join(parts))
    return "\n".join(out) + "\n"


# -- facts -------------------------------------------------------------------

def _value(s: _Stream) -> str:
    t = s.peek()
    if t is not None and t.kind == "string":
        s.i += 1
        return t.text
    t = s.take("word")
    return t.text


def parse_facts(text: str, schema: Schema) -> Database:
    """One ``R(v1, v2, ...)`` per line; duplicates collapse."""
    facts = set()
    for toks in _lines(text):
        s = _Stream(toks)
        line = toks[0].line
        name = _ident(s, "relation name")
        if name not in schema:
            raise ParseError(f"undeclared relation {name}", line)
        s.take("punct", "(")
        values = [_value(s)]
        while s.accept("punct", ","):
            values.append(_value(s))
        s.take("punct", ")")
        if s.peek() is not None:
            raise ParseError(f"unexpected {s.peek().text!r}", s.line())
        if len(values) != schema[name].arity:
            raise ParseError(
                f"{name} expects {schema[name].arity} values, got {len(values)}", line)
        facts.add(Fact(name, tuple(values)))
    return Database(schema, facts)


def format_facts(db: Database) -> str:
    return "".join(
        f"{f.relation}({', '.join(quote_constant(v) for v in f.values)})\n" for f in db)


# -- queries -----------------------------------------------------------------

@dataclass(frozen=True)
class ParsedQuery:
    head: Tuple[Var, ...]
    body: ConjunctiveQuery

    def ground(self, answer: Sequence[str] = ()) -> ConjunctiveQuery:
        """The Boolean query obtained by binding the head to ``answer``."""
        answer = tuple(answer)
        if len(answer) != len(self.head):
            raise ParseError(
                f"the query has {len(self.head)} answer variable(s), got {len(answer)} value(s)")
        q = self.body
        for x, c in zip(self.head, answer):
            _check_constant(c, None)
            q = substitute(q, x, c)
        return q


def _term(s: _Stream):
    t = s.peek()
    if t is None:
        raise ParseError("unexpected end of query", s.line())
    if t.kind == "string":
        s.i += 1
        return Const(t.text)
    t = s.take("word")
    if t.text.isdigit():
        return Const(t.text)
    if not _IDENT.match(t.text):
        raise ParseError(f"invalid term {t.text!r}", t.line)
    return Var(t.text)


def parse_query(text: str, schema: Optional[Schema] = None) -> ParsedQuery:
    """``Ans(x) :- R(x, 'c', y), S(y).`` with identifiers as variables and
    quoted tokens or numerals as constants."""
    toks = [t for t in _tokenize(text) if t.kind != "nl"]
    s = _Stream(toks)
    head_tok = s.take("word")
    if head_tok.text != "Ans":
        raise ParseError(f"query head must be Ans, got {head_tok.text!r}", head_tok.line)
    s.take("punct", "(")
    head: List[Var] = []
    if not s.accept("punct", ")"):
        head.append(Var(_ident(s, "answer variable")))
        while s.accept("punct", ","):
            head.append(Var(_ident(s, "answer variable")))
        s.take("punct", ")")
    s.take("turnstile")
    atoms = []
    if s.peek() is None or s.peek().kind != "word":
        raise ParseError("the query body is empty", s.line())
    while True:
        line = s.line()
        name = _ident(s, "relation name")
        s.take("punct", "(")
        terms = [_term(s)]
        while s.accept("punct", ","):
            terms.append(_term(s))
        s.take("punct", ")")
        atom = Atom(name, tuple(terms))
        if schema is not None:
            if name not in schema:
                raise ParseError(f"undeclared relation {name}", line)
            if len(terms) != schema[name].arity:
                raise ParseError(f"{name} expects {schema[name].arity} terms, got {len(terms)}", line)
        atoms.append(atom)
        if not s.accept("punct", ","):
            break
    s.accept("punct", ".")
    if s.peek() is not None:
        raise ParseError(f"unexpected {s.peek().text!r}", s.line())
    body = ConjunctiveQuery(tuple(atoms))
    unbound = [x.name for x in head if x not in body.variables]
    if unbound:
        raise ParseError(f"answer variable(s) {', '.join(unbound)} do not occur in the body")
    if len(set(head)) != len(head):
        raise ParseError("repeated answer variable")
    return ParsedQuery(tuple(head), body)


def format_term(t) -> str:
    if isinstance(t, Var):
        return t.name
    return t.value if t.value.isdigit() else "'" + t.value.replace("\\", "\\\\").replace("'", "\\'") + "'"


def format_query(q: ConjunctiveQuery, head: Sequence[Var] = ()) -> str:
    atoms = ", ".join(f"{a.relation}({', '.join(format_term(t) for t in a.terms)})" for a in q.atoms)
    return f"Ans({', '.join(v.name for v in head)}) :- {atoms}."


# -- DIMACS ------------------------------------------------------------------

def parse_dimacs(text: str) -> Cnf3:
    """DIMACS CNF restricted to clauses of exactly three literals."""
    declared = None
    clauses, current = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf" or declared is not None:
                raise ParseError("malformed problem line", lineno)
            try:
                declared = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise ParseError("malformed problem line", lineno) from None
            continue
        if declared is None:
            raise ParseError("clause before the problem line", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"bad literal {tok!r}", lineno) from None
            if lit == 0:
                if len(current) != 3:
                    raise ParseError(f"clause has {len(current)} literals, expected 3", lineno)
                if len({abs(l) for l in current}) != 3:
                    raise ParseError("a clause repeats a variable", lineno)
                clauses.append(tuple(current))
                current = []
            else:
                if abs(lit) > declared[0]:
                    raise ParseError(f"literal {lit} exceeds declared variable count", lineno)
                current.append(lit)
    if current:
        raise ParseError("last clause is not terminated by 0")
    if declared is None:
        raise ParseError("missing problem line")
    if declared[1] != len(clauses):
        raise ParseError(f"problem line declares {declared[1]} clauses, found {len(clauses)}")
    return Cnf3(tuple(clauses))


def format_dimacs(phi: Cnf3) -> str:
    n = max(phi.variables, default=0)
    body = "".join(" ".join(map(str, c)) + " 0\n" for c in phi.clauses)
    return f"p cnf {n} {phi.m}\n" + body
