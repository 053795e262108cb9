"""Turtle 1.1 reader and canonical writer.

The reader accepts the practically useful subset of Turtle: prefix and base
directives (both @-style and SPARQL-style), the ``a`` keyword,
predicate-object and object lists, labeled and anonymous blank nodes,
collections ``( ... )`` (expanded to rdf:first/rdf:rest), language tags,
datatyped literals, numeric and boolean shorthand, all four string quoting
forms, and comments. Syntax errors carry a 1-based line and column.

The writer produces one deterministic rendering per triple set + prefix map:
prefix declarations sorted by prefix, IRI subjects sorted lexicographically
(blank-node subjects last, by label), rdf:type first within a subject and
emitted as ``a``, remaining predicates sorted by full IRI, objects sorted
(IRIs, then literals by lexical form, then blank nodes). Insertion order can
never change a single output byte, which is what makes golden-file tests and
version diffs meaningful. Output ends with exactly one trailing newline.
Collections are never emitted.
"""

from __future__ import annotations

import re
from typing import Iterable, Optional
from urllib.parse import urljoin

from fairvoc.errors import FairvocError
from fairvoc.rdf.model import (
    BlankNode,
    Graph,
    Iri,
    Literal,
    RdfModelError,
    RdfNode,
    SubjectNode,
    Triple,
    node_sort_key,
)

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"

_RDF_TYPE = Iri(RDF_NS + "type")
_RDF_FIRST = Iri(RDF_NS + "first")
_RDF_REST = Iri(RDF_NS + "rest")
_RDF_NIL = Iri(RDF_NS + "nil")
_XSD_INTEGER = Iri(XSD_NS + "integer")
_XSD_DECIMAL = Iri(XSD_NS + "decimal")
_XSD_DOUBLE = Iri(XSD_NS + "double")
_XSD_BOOLEAN = Iri(XSD_NS + "boolean")


class TurtleParseError(FairvocError):
    """Syntax or reference error in a Turtle document, with 1-based position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


# ---------------------------------------------------------------------------
# Reader
# ---------------------------------------------------------------------------

_ABSOLUTE_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")
_STRING_ESCAPES = {
    "t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f",
    '"': '"', "'": "'", "\\": "\\",
}
_LOCAL_ESCAPABLE = set("_~.-!$&'()*+,;=/?#@%")
_DECLARED_BLANK_RE = re.compile(r"_:([A-Za-z0-9_][A-Za-z0-9_.\-]*)")


def _is_pn_chars_base(ch: str) -> bool:
    return ch.isalpha()


def _is_pn_chars(ch: str) -> bool:
    return ch.isalpha() or ch.isdigit() or ch in "_-" or ch == "·"


class _Reader:
    def __init__(self, text: str, base: Optional[str]):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1
        self.base = base
        self.prefixes: dict[str, str] = {}
        self.triples: set[Triple] = set()
        # Fresh anonymous labels must not collide with labels written in the
        # document, so reserve everything that lexically looks like one.
        self._reserved = set(_DECLARED_BLANK_RE.findall(text))
        self._anon_counter = 0

    # -- low-level scanning --------------------------------------------------

    def _peek(self, ahead: int = 0) -> str:
        i = self.pos + ahead
        return self.text[i] if i < len(self.text) else ""

    def _advance(self, n: int = 1) -> str:
        taken = self.text[self.pos:self.pos + n]
        for ch in taken:
            if ch == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
        self.pos += n
        return taken

    def _error(self, message: str, line: Optional[int] = None, col: Optional[int] = None):
        raise TurtleParseError(message, line or self.line, col or self.col)

    def _skip_ws(self):
        while self.pos < len(self.text):
            ch = self._peek()
            if ch in " \t\r\n":
                self._advance()
            elif ch == "#":
                while self.pos < len(self.text) and self._peek() != "\n":
                    self._advance()
            else:
                return

    def _expect(self, token: str):
        self._skip_ws()
        if self.text.startswith(token, self.pos):
            self._advance(len(token))
        else:
            self._error(f"expected {token!r}")

    def _at_eof(self) -> bool:
        self._skip_ws()
        return self.pos >= len(self.text)

    # -- tokens ---------------------------------------------------------------

    def _read_unicode_escape(self, width: int) -> str:
        digits = self.text[self.pos:self.pos + width]
        if len(digits) < width or any(c not in "0123456789abcdefABCDEF" for c in digits):
            self._error(f"bad \\u escape: expected {width} hex digits")
        self._advance(width)
        return chr(int(digits, 16))

    def _read_iriref(self) -> Iri:
        line, col = self.line, self.col
        self._advance()  # '<'
        out: list[str] = []
        while True:
            ch = self._peek()
            if ch == "":
                self._error("unterminated IRI", line, col)
            if ch == ">":
                self._advance()
                break
            if ch == "\\":
                self._advance()
                esc = self._peek()
                if esc == "u":
                    self._advance()
                    out.append(self._read_unicode_escape(4))
                elif esc == "U":
                    self._advance()
                    out.append(self._read_unicode_escape(8))
                else:
                    self._error("only \\u and \\U escapes are allowed in IRIs")
            elif ord(ch) <= 0x20 or ch in '<"{}|^`':
                self._error(f"character {ch!r} must be escaped in an IRI")
            else:
                out.append(self._advance())
        raw = "".join(out)
        if not _ABSOLUTE_RE.match(raw):
            if self.base is None:
                self._error(f"relative IRI {raw!r} and no base given", line, col)
            raw = urljoin(self.base, raw)
        try:
            return Iri(raw)
        except RdfModelError as exc:
            self._error(str(exc), line, col)

    def _read_pname_or_keyword(self) -> tuple[str, object]:
        """Returns ("pname", Iri), ("a", None), ("bool", Literal) or ("kw", word)."""
        line, col = self.line, self.col
        start = self.pos
        # PN_PREFIX part (possibly empty, for ":local")
        if _is_pn_chars_base(self._peek()):
            self._advance()
            while True:
                ch = self._peek()
                if _is_pn_chars(ch):
                    self._advance()
                elif ch == "." and _is_pn_chars(self._peek(1)):
                    self._advance()
                else:
                    break
        word = self.text[start:self.pos]
        if self._peek() != ":":
            if word == "a":
                return ("a", None)
            if word in ("true", "false"):
                return ("bool", Literal(word, datatype=_XSD_BOOLEAN))
            if word.upper() in ("PREFIX", "BASE"):
                return ("kw", word.upper())
            self._error(f"unexpected token {word!r}", line, col)
        self._advance()  # ':'
        local = self._read_pn_local()
        if word not in self.prefixes:
            self._error(f"undefined prefix {word + ':'!r}", line, col)
        try:
            return ("pname", Iri(self.prefixes[word] + local))
        except RdfModelError as exc:
            self._error(str(exc), line, col)

    def _read_pn_local(self) -> str:
        out: list[str] = []
        while True:
            ch = self._peek()
            if ch == "%":
                h = self.text[self.pos + 1:self.pos + 3]
                if len(h) < 2 or any(c not in "0123456789abcdefABCDEF" for c in h):
                    self._error("bad %-sequence in prefixed name")
                out.append(self._advance(3))
            elif ch == "\\":
                esc = self._peek(1)
                if esc not in _LOCAL_ESCAPABLE:
                    self._error(f"cannot escape {esc!r} in a prefixed name")
                self._advance(2)
                out.append(esc)
            elif ch.isalpha() or ch.isdigit() or ch in "_-:":
                out.append(self._advance())
            elif ch == ".":
                nxt = self._peek(1)
                if nxt.isalpha() or nxt.isdigit() or nxt in "_-:%\\." :
                    out.append(self._advance())
                else:
                    break
            else:
                break
        return "".join(out)

    def _read_blank_label(self) -> BlankNode:
        line, col = self.line, self.col
        self._advance(2)  # '_:'
        start = self.pos
        ch = self._peek()
        if not (ch.isalpha() or ch.isdigit() or ch == "_"):
            self._error("bad blank node label", line, col)
        self._advance()
        while True:
            ch = self._peek()
            if ch.isalpha() or ch.isdigit() or ch in "_-":
                self._advance()
            elif ch == ".":
                nxt = self._peek(1)
                if nxt.isalpha() or nxt.isdigit() or nxt in "_-.":
                    self._advance()
                else:
                    break
            else:
                break
        return BlankNode(self.text[start:self.pos])

    def _fresh_blank(self) -> BlankNode:
        while True:
            label = f"b{self._anon_counter}"
            self._anon_counter += 1
            if label not in self._reserved:
                self._reserved.add(label)
                return BlankNode(label)

    def _read_string(self) -> str:
        line, col = self.line, self.col
        quote = self._peek()
        long_form = self.text.startswith(quote * 3, self.pos)
        self._advance(3 if long_form else 1)
        closer = quote * 3 if long_form else quote
        out: list[str] = []
        while True:
            if self.pos >= len(self.text):
                self._error("unterminated string", line, col)
            if self.text.startswith(closer, self.pos):
                self._advance(len(closer))
                return "".join(out)
            ch = self._peek()
            if ch == "\\":
                self._advance()
                esc = self._peek()
                if esc == "u":
                    self._advance()
                    out.append(self._read_unicode_escape(4))
                elif esc == "U":
                    self._advance()
                    out.append(self._read_unicode_escape(8))
                elif esc in _STRING_ESCAPES:
                    self._advance()
                    out.append(_STRING_ESCAPES[esc])
                else:
                    self._error(f"unknown escape \\{esc}")
            elif not long_form and ch in "\n\r":
                self._error("newline in single-quoted string; use triple quotes", line, col)
            else:
                out.append(self._advance())

    _NUMBER_RE = re.compile(
        r"[+-]?(?:"
        r"\d+\.\d*(?:[eE][+-]?\d+)?"
        r"|\.\d+(?:[eE][+-]?\d+)?"
        r"|\d+(?:[eE][+-]?\d+)?"
        r")"
    )

    def _read_number(self) -> Literal:
        m = self._NUMBER_RE.match(self.text, self.pos)
        if not m:
            self._error("malformed number")
        lexical = m.group(0)
        # "1." is integer one followed by the statement dot.
        if lexical.endswith(".") and "e" not in lexical.lower():
            lexical = lexical[:-1]
        self._advance(len(lexical))
        if "e" in lexical.lower():
            dt = _XSD_DOUBLE
        elif "." in lexical:
            dt = _XSD_DECIMAL
        else:
            dt = _XSD_INTEGER
        return Literal(lexical, datatype=dt)

    def _read_langtag(self) -> str:
        self._advance()  # '@'
        start = self.pos
        if not self._peek().isalpha():
            self._error("malformed language tag")
        while self._peek().isalpha():
            self._advance()
        while self._peek() == "-" and (self._peek(1).isalpha() or self._peek(1).isdigit()):
            self._advance()
            while self._peek().isalpha() or self._peek().isdigit():
                self._advance()
        return self.text[start:self.pos]

    # -- grammar --------------------------------------------------------------

    def parse(self) -> Graph:
        while not self._at_eof():
            if self._peek() == "@":
                self._read_at_directive()
                continue
            kind = self._classify_bare_word()
            if kind in ("PREFIX", "BASE"):
                self._read_sparql_directive(kind)
                continue
            self._read_triples_statement()
        return Graph(self.triples, self.prefixes)

    def _classify_bare_word(self) -> Optional[str]:
        m = re.match(r"[A-Za-z]+", self.text[self.pos:self.pos + 8])
        if m and m.group(0).upper() in ("PREFIX", "BASE"):
            after = self._peek(len(m.group(0)))
            if after != ":":
                return m.group(0).upper()
        return None

    def _read_at_directive(self):
        line, col = self.line, self.col
        word = re.match(r"@[a-zA-Z]*", self.text[self.pos:])
        name = word.group(0) if word else "@"
        if name == "@prefix":
            self._advance(len(name))
            self._read_prefix_binding()
            self._expect(".")
        elif name == "@base":
            self._advance(len(name))
            self._skip_ws()
            self.base = self._read_iriref().value
            self._expect(".")
        else:
            self._error(f"unknown directive {name!r}", line, col)

    def _read_sparql_directive(self, kind: str):
        self._advance(len(kind))
        if kind == "PREFIX":
            self._read_prefix_binding()
        else:
            self._skip_ws()
            self.base = self._read_iriref().value

    def _read_prefix_binding(self):
        self._skip_ws()
        start = self.pos
        while _is_pn_chars(self._peek()) or (
            self._peek() == "." and _is_pn_chars(self._peek(1))
        ):
            self._advance()
        prefix = self.text[start:self.pos]
        if self._peek() != ":":
            self._error("expected ':' in prefix declaration")
        self._advance()
        self._skip_ws()
        if self._peek() != "<":
            self._error("expected IRI in prefix declaration")
        self.prefixes[prefix] = self._read_iriref().value

    def _read_triples_statement(self):
        self._skip_ws()
        ch = self._peek()
        if ch == "[":
            subject = self._read_blank_node_property_list()
            self._skip_ws()
            if self._peek() != ".":
                self._read_predicate_object_list(subject)
        else:
            subject = self._read_subject()
            self._read_predicate_object_list(subject)
        self._expect(".")

    def _read_subject(self) -> SubjectNode:
        self._skip_ws()
        ch = self._peek()
        if ch == "<":
            return self._read_iriref()
        if ch == "_" and self._peek(1) == ":":
            return self._read_blank_label()
        if ch == "(":
            return self._read_collection()
        if ch == "":
            self._error("unexpected end of input; expected a subject")
        kind, value = self._read_pname_or_keyword()
        if kind != "pname":
            self._error("expected a subject")
        return value  # type: ignore[return-value]

    def _read_predicate(self) -> Iri:
        self._skip_ws()
        ch = self._peek()
        if ch == "<":
            return self._read_iriref()
        if ch == "":
            self._error("unexpected end of input; expected a predicate")
        kind, value = self._read_pname_or_keyword()
        if kind == "a":
            return _RDF_TYPE
        if kind != "pname":
            self._error("expected a predicate")
        return value  # type: ignore[return-value]

    def _read_predicate_object_list(self, subject: SubjectNode):
        while True:
            predicate = self._read_predicate()
            while True:
                obj = self._read_object()
                self.triples.add(Triple(subject, predicate, obj))
                self._skip_ws()
                if self._peek() == ",":
                    self._advance()
                    continue
                break
            self._skip_ws()
            if self._peek() == ";":
                self._advance()
                self._skip_ws()
                # A dangling ';' before '.' or ']' is legal Turtle.
                if self._peek() in ".]" or self._peek() == ";":
                    while self._peek() == ";":
                        self._advance()
                        self._skip_ws()
                    if self._peek() in ".]":
                        return
                continue
            return

    def _read_object(self) -> RdfNode:
        self._skip_ws()
        ch = self._peek()
        if ch == "":
            self._error("unexpected end of input; expected an object")
        if ch == "<":
            return self._read_iriref()
        if ch == "_" and self._peek(1) == ":":
            return self._read_blank_label()
        if ch == "[":
            return self._read_blank_node_property_list()
        if ch == "(":
            return self._read_collection()
        if ch in "\"'":
            lexical = self._read_string()
            if self._peek() == "@":
                return Literal(lexical, lang=self._read_langtag())
            if self._peek() == "^" and self._peek(1) == "^":
                self._advance(2)
                self._skip_ws()
                if self._peek() == "<":
                    dt = self._read_iriref()
                else:
                    kind, value = self._read_pname_or_keyword()
                    if kind != "pname":
                        self._error("expected a datatype IRI after '^^'")
                    dt = value  # type: ignore[assignment]
                return Literal(lexical, datatype=dt)
            return Literal(lexical)
        if ch.isdigit() or ch in "+-" or (
            ch == "." and self._peek(1).isdigit()
        ):
            return self._read_number()
        if ch == ".":
            self._error("expected an object")
        kind, value = self._read_pname_or_keyword()
        if kind in ("pname", "bool"):
            return value  # type: ignore[return-value]
        self._error("expected an object")

    def _read_blank_node_property_list(self) -> BlankNode:
        self._advance()  # '['
        node = self._fresh_blank()
        self._skip_ws()
        if self._peek() == "]":
            self._advance()
            return node
        self._read_predicate_object_list(node)
        self._skip_ws()
        if self._peek() != "]":
            self._error("expected ']'")
        self._advance()
        return node

    def _read_collection(self) -> SubjectNode:
        self._advance()  # '('
        items: list[RdfNode] = []
        while True:
            self._skip_ws()
            if self._peek() == ")":
                self._advance()
                break
            if self._peek() == "":
                self._error("unterminated collection")
            items.append(self._read_object())
        if not items:
            return _RDF_NIL
        head = self._fresh_blank()
        node = head
        for i, item in enumerate(items):
            self.triples.add(Triple(node, _RDF_FIRST, item))
            if i + 1 < len(items):
                nxt = self._fresh_blank()
                self.triples.add(Triple(node, _RDF_REST, nxt))
                node = nxt
            else:
                self.triples.add(Triple(node, _RDF_REST, _RDF_NIL))
        return head


def parse_turtle(data: bytes | str, base: Optional[Iri | str] = None) -> Graph:
    """Parse a UTF-8 Turtle document into a Graph.

    Raises TurtleParseError (with 1-based line/column) on syntax errors,
    undefined prefixes, and relative IRIs when no base is given.
    """
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise TurtleParseError(f"input is not valid UTF-8: {exc}", 1, 1)
    else:
        text = data.lstrip("﻿")
    base_str = base.value if isinstance(base, Iri) else base
    return _Reader(text, base_str).parse()


# ---------------------------------------------------------------------------
# Canonical writer
# ---------------------------------------------------------------------------

_SAFE_LOCAL_RE = re.compile(r"^[A-Za-z0-9_][A-Za-z0-9_\-]*$")
_BARE_INTEGER_RE = re.compile(r"^[+-]?\d+$")
_BARE_DECIMAL_RE = re.compile(r"^[+-]?\d*\.\d+$")
_BARE_DOUBLE_RE = re.compile(r"^[+-]?(?:\d+\.\d*|\.?\d+)[eE][+-]?\d+$")
_LITERAL_ESCAPES = {
    "\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r",
    "\t": "\\t", "\b": "\\b", "\f": "\\f",
}


def _escape_literal(s: str) -> str:
    out: list[str] = []
    for ch in s:
        if ch in _LITERAL_ESCAPES:
            out.append(_LITERAL_ESCAPES[ch])
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def _compress_iri(iri: Iri, prefixes: dict[str, str]) -> str:
    best: Optional[tuple[int, str, str]] = None
    for prefix, ns in prefixes.items():
        if iri.value.startswith(ns):
            local = iri.value[len(ns):]
            if local and _SAFE_LOCAL_RE.match(local):
                candidate = (-len(ns), prefix, local)
                if best is None or candidate < best:
                    best = candidate
    if best is None:
        return f"<{iri.value}>"
    return f"{best[1]}:{best[2]}"


def _render_node(node: RdfNode, prefixes: dict[str, str]) -> str:
    if isinstance(node, Iri):
        return _compress_iri(node, prefixes)
    if isinstance(node, BlankNode):
        return f"_:{node.label}"
    if node.lang is not None:
        return f'"{_escape_literal(node.lexical)}"@{node.lang}'
    if node.datatype is not None:
        dt = node.datatype
        if dt == _XSD_BOOLEAN and node.lexical in ("true", "false"):
            return node.lexical
        if dt == _XSD_INTEGER and _BARE_INTEGER_RE.match(node.lexical):
            return node.lexical
        if dt == _XSD_DECIMAL and _BARE_DECIMAL_RE.match(node.lexical):
            return node.lexical
        if dt == _XSD_DOUBLE and _BARE_DOUBLE_RE.match(node.lexical):
            return node.lexical
        return f'"{_escape_literal(node.lexical)}"^^{_compress_iri(dt, prefixes)}'
    return f'"{_escape_literal(node.lexical)}"'


def _subject_sort_key(node: SubjectNode) -> tuple:
    if isinstance(node, Iri):
        return (0, node.value)
    return (1, node.label)


def serialize_canonical_turtle(g: Graph) -> bytes:
    """Render a graph as deterministic Turtle (UTF-8 bytes).

    Identical triple sets and prefix maps always yield byte-identical output.
    """
    prefixes = g.prefixes
    lines: list[str] = []
    for prefix, ns in sorted(prefixes.items()):
        lines.append(f"@prefix {prefix}: <{ns}> .")

    by_subject: dict[SubjectNode, dict[Iri, set[RdfNode]]] = {}
    for t in g:
        by_subject.setdefault(t.subject, {}).setdefault(t.predicate, set()).add(t.object)

    for subject in sorted(by_subject, key=_subject_sort_key):
        if lines:
            lines.append("")
        preds = by_subject[subject]
        ordered = sorted(preds, key=lambda p: (0 if p == _RDF_TYPE else 1, p.value))
        subj_str = _render_node(subject, prefixes)
        for i, pred in enumerate(ordered):
            pred_str = "a" if pred == _RDF_TYPE else _compress_iri(pred, prefixes)
            objs = sorted(preds[pred], key=node_sort_key)
            obj_str = ", ".join(_render_node(o, prefixes) for o in objs)
            head = subj_str if i == 0 else "   "
            tail = " ;" if i + 1 < len(ordered) else " ."
            lines.append(f"{head} {pred_str} {obj_str}{tail}")

    if not lines:
        return b""
    return ("\n".join(lines) + "\n").encode("utf-8")
