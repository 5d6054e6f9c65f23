"""Line-oriented file formats for ontologies (``.ont``) and protocols (``.sts``).

Both grammars are keyword-led, one statement per line, ``#`` to end of line
is a comment. Parsing never raises: every malformed line produces an error
:class:`Diagnostic` and parsing resumes on the next line. Loaders in
:mod:`commont.ontology` and :mod:`commont.protocol` turn the declarations into
checked models.

Ontology statements::

    content <Name> [: <Parent> (, <Parent>)*]
    act <Name> : <Parent> (, <Parent>)* [content=<C>] [replyto=<Act>] [system=<Tag>] [condition=<C>]

Protocol statements::

    protocol <Name>
    roles <R1> <R2>
    state <Id> [initial] [final]
    transition <Src> -> <Dst> on <ActClass> from <Role> to <Role>
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator

from .errors import Diagnostic, SourceSpan

__all__ = [
    "ActDecl",
    "ContentDecl",
    "Diagnostic",
    "IDENTIFIER",
    "ProtocolDecl",
    "SourceSpan",
    "StateDecl",
    "TransitionDecl",
    "parse_ontology_file",
    "parse_protocol_file",
    "serialize",
    "serialize_ontology",
    "serialize_protocol",
]

# A hyphen directly followed by '>' belongs to an arrow, not to the name.
IDENTIFIER = r"[A-Za-z](?:[A-Za-z0-9_]|-(?!>))*"
_IDENT_FULL = re.compile(rf"{IDENTIFIER}\Z")
_TOKEN = re.compile(
    rf"(?P<ident>{IDENTIFIER})|(?P<arrow>->)|(?P<punct>[:,=])|(?P<space>\s+)|(?P<bad>.)"
)

ACT_OPTIONS = ("content", "replyto", "system", "condition")


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    col: int


@dataclass(frozen=True)
class ContentDecl:
    name: str
    parents: tuple[str, ...]
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class ActDecl:
    name: str
    parents: tuple[str, ...]
    content: str | None = None
    reply_to: str | None = None
    system: str | None = None
    condition: str | None = None
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class StateDecl:
    name: str
    initial: bool = False
    final: bool = False
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class TransitionDecl:
    source: str
    target: str
    act: str
    sender: str
    receiver: str
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass
class ProtocolDecl:
    name: str | None = None
    roles: tuple[str, ...] = ()
    states: list[StateDecl] = field(default_factory=list)
    transitions: list[TransitionDecl] = field(default_factory=list)
    span: SourceSpan | None = None


class _LineError(Exception):
    def __init__(self, col: int, message: str, code: str = "E002"):
        super().__init__(message)
        self.col = col
        self.message = message
        self.code = code


class _Cursor:
    def __init__(self, tokens: list[_Tok], end_col: int):
        self.tokens = tokens
        self.pos = 0
        self.end_col = end_col

    def peek(self, offset: int = 0) -> _Tok | None:
        i = self.pos + offset
        return self.tokens[i] if i < len(self.tokens) else None

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def _col(self) -> int:
        tok = self.peek()
        return tok.col if tok else self.end_col

    def ident(self, what: str) -> str:
        tok = self.peek()
        if tok is None or tok.kind != "ident":
            found = f"'{tok.text}'" if tok else "end of line"
            raise _LineError(self._col(), f"expected {what}, found {found}")
        self.pos += 1
        return tok.text

    def punct(self, text: str) -> None:
        tok = self.peek()
        if tok is None or tok.text != text:
            found = f"'{tok.text}'" if tok else "end of line"
            raise _LineError(self._col(), f"expected '{text}', found {found}")
        self.pos += 1

    def keyword(self, word: str) -> None:
        tok = self.peek()
        if tok is None or tok.kind != "ident" or tok.text != word:
            found = f"'{tok.text}'" if tok else "end of line"
            raise _LineError(self._col(), f"expected '{word}', found {found}")
        self.pos += 1

    def expect_end(self) -> None:
        tok = self.peek()
        if tok is not None:
            raise _LineError(tok.col, f"unexpected '{tok.text}'")


def _lines(text: str) -> Iterator[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        hash_at = raw.find("#")
        yield lineno, raw if hash_at < 0 else raw[:hash_at]


def _tokenize(line: str) -> list[_Tok]:
    tokens = []
    for m in _TOKEN.finditer(line):
        kind = m.lastgroup
        if kind == "space":
            continue
        if kind == "bad":
            raise _LineError(m.start() + 1, f"invalid character {m.group()!r}", "E003")
        tokens.append(_Tok(kind, m.group(), m.start() + 1))
    return tokens


def _name_list(cur: _Cursor, what: str) -> list[str]:
    names = [cur.ident(what)]
    while cur.peek() is not None and cur.peek().text == ",":
        cur.pos += 1
        names.append(cur.ident(what))
    return names


def _error(filename: str, lineno: int, col: int, message: str, code: str) -> Diagnostic:
    return Diagnostic("error", SourceSpan(filename, lineno, col), message, code)


# -- ontology ---------------------------------------------------------------


def _parse_ontology_line(cur: _Cursor, span: SourceSpan) -> ContentDecl | ActDecl:
    head = cur.peek()
    if head.kind != "ident" or head.text not in ("content", "act"):
        raise _LineError(head.col, f"unknown statement '{head.text}'", "E001")
    cur.pos += 1
    if head.text == "content":
        name = cur.ident("content class name")
        parents: list[str] = []
        if not cur.at_end():
            cur.punct(":")
            parents = _name_list(cur, "parent class name")
        cur.expect_end()
        return ContentDecl(name, tuple(parents), span)

    name = cur.ident("act class name")
    cur.punct(":")
    parents = _name_list(cur, "parent class name")
    options: dict[str, str] = {}
    while not cur.at_end():
        key_tok = cur.peek()
        key = cur.ident("option")
        if key not in ACT_OPTIONS:
            raise _LineError(key_tok.col, f"unknown option '{key}'", "E004")
        if key in options:
            raise _LineError(key_tok.col, f"duplicate option '{key}'", "E005")
        cur.punct("=")
        options[key] = cur.ident(f"value for '{key}'")
    return ActDecl(
        name,
        tuple(parents),
        content=options.get("content"),
        reply_to=options.get("replyto"),
        system=options.get("system"),
        condition=options.get("condition"),
        span=span,
    )


def parse_ontology_file(
    text: str, filename: str = "<string>"
) -> tuple[list[ContentDecl | ActDecl], list[Diagnostic]]:
    """Parse ontology source into declarations (file order) and diagnostics."""
    decls: list[ContentDecl | ActDecl] = []
    diags: list[Diagnostic] = []
    seen: dict[str, SourceSpan] = {}
    for lineno, line in _lines(text):
        try:
            tokens = _tokenize(line)
            if not tokens:
                continue
            span = SourceSpan(filename, lineno, tokens[0].col)
            decl = _parse_ontology_line(_Cursor(tokens, len(line) + 1), span)
        except _LineError as exc:
            diags.append(_error(filename, lineno, exc.col, exc.message, exc.code))
            continue
        if decl.name in seen:
            diags.append(
                _error(
                    filename,
                    lineno,
                    span.column,
                    f"'{decl.name}' already declared at line {seen[decl.name].line}",
                    "E006",
                )
            )
            continue
        seen[decl.name] = span
        decls.append(decl)
    return decls, diags


# -- protocol ---------------------------------------------------------------


def parse_protocol_file(
    text: str, filename: str = "<string>"
) -> tuple[ProtocolDecl, list[Diagnostic]]:
    """Parse protocol source. Cross-line checks (states, roles) run at the end."""
    decl = ProtocolDecl()
    diags: list[Diagnostic] = []
    for lineno, line in _lines(text):
        try:
            tokens = _tokenize(line)
            if not tokens:
                continue
            span = SourceSpan(filename, lineno, tokens[0].col)
            cur = _Cursor(tokens, len(line) + 1)
            head = cur.ident("statement keyword")
            if head == "protocol":
                if decl.name is not None:
                    raise _LineError(span.column, "duplicate 'protocol' statement", "E201")
                decl.name = cur.ident("protocol name")
                decl.span = span
                cur.expect_end()
            elif head == "roles":
                if decl.roles:
                    raise _LineError(span.column, "duplicate 'roles' statement", "E202")
                first = cur.ident("role name")
                second_col = cur._col()
                second = cur.ident("second role name")
                cur.expect_end()
                if first == second:
                    raise _LineError(second_col, "the two roles must differ", "E202")
                decl.roles = (first, second)
            elif head == "state":
                name = cur.ident("state id")
                flags = set()
                while not cur.at_end():
                    tok = cur.peek()
                    flag = cur.ident("'initial' or 'final'")
                    if flag not in ("initial", "final"):
                        raise _LineError(tok.col, f"unknown state flag '{flag}'", "E210")
                    if flag in flags:
                        raise _LineError(tok.col, f"duplicate flag '{flag}'", "E210")
                    flags.add(flag)
                if any(s.name == name for s in decl.states):
                    raise _LineError(span.column, f"state '{name}' already declared", "E203")
                if "initial" in flags and any(s.initial for s in decl.states):
                    # Keep the state so later lines do not cascade into more errors.
                    diags.append(_error(filename, lineno, span.column, "more than one initial state", "E204"))
                    flags.discard("initial")
                decl.states.append(StateDecl(name, "initial" in flags, "final" in flags, span))
            elif head == "transition":
                source = cur.ident("source state")
                cur.punct("->")
                target = cur.ident("target state")
                cur.keyword("on")
                act = cur.ident("act class")
                cur.keyword("from")
                sender = cur.ident("sender role")
                cur.keyword("to")
                receiver = cur.ident("receiver role")
                cur.expect_end()
                decl.transitions.append(TransitionDecl(source, target, act, sender, receiver, span))
            else:
                raise _LineError(span.column, f"unknown statement '{head}'", "E001")
        except _LineError as exc:
            diags.append(_error(filename, lineno, exc.col, exc.message, exc.code))

    def whole_file(message: str, code: str) -> None:
        diags.append(Diagnostic("error", SourceSpan(filename, 1, 1), message, code))

    if decl.name is None:
        whole_file("missing 'protocol' statement", "E201")
    if not decl.roles:
        whole_file("missing 'roles' statement", "E202")
    if decl.states and not any(s.initial for s in decl.states):
        whole_file("no state is marked 'initial'", "E205")
    if not decl.states:
        whole_file("no states declared", "E205")
    elif not any(s.final for s in decl.states):
        whole_file("no state is marked 'final'", "E206")
    declared = {s.name for s in decl.states}
    for t in decl.transitions:
        for state in (t.source, t.target):
            if state not in declared:
                diags.append(
                    Diagnostic("error", t.span, f"transition names undeclared state '{state}'", "E207")
                )
        if decl.roles:
            for role in (t.sender, t.receiver):
                if role not in decl.roles:
                    diags.append(Diagnostic("error", t.span, f"unknown role '{role}'", "E208"))
        if t.sender == t.receiver:
            diags.append(Diagnostic("error", t.span, "sender and receiver must differ", "E209"))
    return decl, diags


# -- serialization ----------------------------------------------------------


def serialize_ontology(ontology) -> str:
    """Canonical text for the user-declared part of an ontology.

    Content classes come first, then act classes, each in declaration order.
    """
    lines = []
    for cls in ontology.user_content_classes():
        if cls.parents == (ontology.CONTENT_ROOT,):
            lines.append(f"content {cls.name}")
        else:
            lines.append(f"content {cls.name} : {', '.join(cls.parents)}")
    for cls in ontology.user_act_classes():
        parts = [f"act {cls.name} : {', '.join(cls.parents)}"]
        for key, value in (
            ("content", cls.content_class),
            ("replyto", cls.in_reply_to),
            ("system", cls.system_tag),
            ("condition", cls.condition),
        ):
            if value is not None:
                parts.append(f"{key}={value}")
        lines.append(" ".join(parts))
    return "".join(line + "\n" for line in lines)


def serialize_protocol(protocol) -> str:
    """Canonical text for a protocol; states keep their declaration order."""
    lines = [f"protocol {protocol.name}", f"roles {protocol.roles[0]} {protocol.roles[1]}"]
    for state in protocol.states:
        flags = []
        if state == protocol.initial:
            flags.append("initial")
        if state in protocol.finals:
            flags.append("final")
        lines.append(" ".join(["state", state, *flags]))
    for t in protocol.transitions:
        lines.append(
            f"transition {t.source} -> {t.target} on {t.act_class} from {t.sender} to {t.receiver}"
        )
    return "".join(line + "\n" for line in lines)


def serialize(model) -> str:
    if hasattr(model, "transitions"):
        return serialize_protocol(model)
    return serialize_ontology(model)


def is_identifier(text: str) -> bool:
    return bool(_IDENT_FULL.match(text))
