"""Minimal RDF data model: IRIs, literals, blank nodes, triples, graphs.

A Graph is a set of triples plus a prefix map. Graph values are treated as
immutable after construction: every operation in this package returns a new
Graph instead of mutating its input, so graphs can be shared freely between
threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Union

from fairvoc.errors import FairvocError

_SCHEME_RE = re.compile(r"^([A-Za-z][A-Za-z0-9+.\-]*):")
# Characters Turtle forbids unescaped inside an IRIREF; whitespace and other
# control characters are rejected separately.
_FORBIDDEN_IRI_CHARS = frozenset('<>"{}|^`\\')
_LANGTAG_RE = re.compile(r"^[A-Za-z]+(-[A-Za-z0-9]+)*$")
_BLANK_LABEL_RE = re.compile(r"^[A-Za-z0-9_][A-Za-z0-9_.\-]*$")


class RdfModelError(FairvocError):
    """An RDF value violates a model invariant."""


@dataclass(frozen=True, order=True)
class Iri:
    """An absolute IRI. The scheme is lowercased on construction."""

    value: str

    def __post_init__(self):
        m = _SCHEME_RE.match(self.value)
        if not m:
            raise RdfModelError(f"not an absolute IRI: {self.value!r}")
        for ch in self.value:
            if ch in _FORBIDDEN_IRI_CHARS or ord(ch) <= 0x20:
                raise RdfModelError(
                    f"forbidden character {ch!r} in IRI: {self.value!r}"
                )
        scheme = m.group(1)
        if not scheme.islower():
            object.__setattr__(
                self, "value", scheme.lower() + self.value[m.end(1):]
            )

    @property
    def scheme(self) -> str:
        return self.value.split(":", 1)[0]

    @property
    def local_name(self) -> str:
        """Last path-or-fragment segment (used as a default local-id)."""
        tail = self.value
        if "#" in tail:
            tail = tail.rsplit("#", 1)[1]
        else:
            tail = tail.rstrip("/").rsplit("/", 1)[-1]
        return tail

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Literal:
    """An RDF literal.

    ``lang`` and ``datatype`` are mutually exclusive; a language-tagged
    literal has the implicit datatype rdf:langString and stores its tag
    lowercased.
    """

    lexical: str
    lang: Optional[str] = None
    datatype: Optional[Iri] = None

    def __post_init__(self):
        if self.lang is not None:
            if self.datatype is not None:
                raise RdfModelError(
                    "a literal cannot carry both a language tag and a datatype"
                )
            if not _LANGTAG_RE.match(self.lang):
                raise RdfModelError(f"malformed language tag: {self.lang!r}")
            object.__setattr__(self, "lang", self.lang.lower())

    def sort_key(self) -> tuple:
        return (self.lexical, self.lang or "", self.datatype.value if self.datatype else "")


@dataclass(frozen=True, order=True)
class BlankNode:
    label: str

    def __post_init__(self):
        if not _BLANK_LABEL_RE.match(self.label) or self.label.endswith("."):
            raise RdfModelError(f"bad blank node label: {self.label!r}")


RdfNode = Union[Iri, Literal, BlankNode]
SubjectNode = Union[Iri, BlankNode]


def node_sort_key(node: RdfNode) -> tuple:
    """Total deterministic order over nodes: IRIs, then literals, then blanks."""
    if isinstance(node, Iri):
        return (0, node.value, "", "")
    if isinstance(node, Literal):
        return (1, *node.sort_key())
    return (2, node.label, "", "")


@dataclass(frozen=True)
class Triple:
    subject: SubjectNode
    predicate: Iri
    object: RdfNode

    def __post_init__(self):
        if not isinstance(self.subject, (Iri, BlankNode)):
            raise RdfModelError("triple subject must be an IRI or blank node")
        if not isinstance(self.predicate, Iri):
            raise RdfModelError("triple predicate must be an IRI")
        if not isinstance(self.object, (Iri, Literal, BlankNode)):
            raise RdfModelError("triple object must be an RDF node")

    def sort_key(self) -> tuple:
        return (node_sort_key(self.subject), self.predicate.value, node_sort_key(self.object))


class Graph:
    """A set of triples plus a prefix map (prefix string -> namespace IRI).

    Duplicate inserts are no-ops (set semantics). Equality compares triple
    sets only; use :func:`isomorphic` when blank-node labels may differ.
    """

    __slots__ = ("_triples", "_prefixes")

    def __init__(
        self,
        triples: Iterable[Triple] = (),
        prefixes: Optional[Mapping[str, str]] = None,
    ):
        self._triples: frozenset[Triple] = frozenset(triples)
        self._prefixes: dict[str, str] = dict(prefixes or {})
        for prefix, ns in self._prefixes.items():
            if not _SCHEME_RE.match(ns):
                raise RdfModelError(
                    f"namespace for prefix {prefix!r} is not absolute: {ns!r}"
                )

    @property
    def prefixes(self) -> dict[str, str]:
        return dict(self._prefixes)

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __contains__(self, t: Triple) -> bool:
        return t in self._triples

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._triples == other._triples

    def __repr__(self) -> str:
        return f"<Graph {len(self._triples)} triples, {len(self._prefixes)} prefixes>"

    def triples(
        self,
        subject: Optional[SubjectNode] = None,
        predicate: Optional[Iri] = None,
        obj: Optional[RdfNode] = None,
    ) -> Iterator[Triple]:
        """Iterate matching triples; None acts as a wildcard."""
        for t in self._triples:
            if subject is not None and t.subject != subject:
                continue
            if predicate is not None and t.predicate != predicate:
                continue
            if obj is not None and t.object != obj:
                continue
            yield t

    def subjects(
        self, predicate: Optional[Iri] = None, obj: Optional[RdfNode] = None
    ) -> list[SubjectNode]:
        """Distinct matching subjects in deterministic order."""
        seen = {t.subject for t in self.triples(None, predicate, obj)}
        return sorted(seen, key=node_sort_key)

    def objects(
        self, subject: Optional[SubjectNode] = None, predicate: Optional[Iri] = None
    ) -> list[RdfNode]:
        """Distinct matching objects in deterministic order."""
        seen = {t.object for t in self.triples(subject, predicate, None)}
        return sorted(seen, key=node_sort_key)

    def value(
        self, subject: Optional[SubjectNode], predicate: Optional[Iri]
    ) -> Optional[RdfNode]:
        """First matching object in deterministic order, or None."""
        objs = self.objects(subject, predicate)
        return objs[0] if objs else None

    def with_triples(self, extra: Iterable[Triple]) -> "Graph":
        return Graph(self._triples.union(extra), self._prefixes)

    def without_triples(self, gone: Iterable[Triple]) -> "Graph":
        return Graph(self._triples.difference(gone), self._prefixes)


def subject_description(g: Graph, s: Iri) -> Graph:
    """All triples about ``s`` plus the closure of blank nodes it references.

    Follows blank nodes appearing in object position transitively so the
    result is self-contained. Unknown subjects yield an empty graph. The
    prefix map is copied.
    """
    collected: set[Triple] = set()
    queue: list[SubjectNode] = [s]
    visited: set[SubjectNode] = set()
    while queue:
        node = queue.pop()
        if node in visited:
            continue
        visited.add(node)
        for t in g.triples(node, None, None):
            collected.add(t)
            if isinstance(t.object, BlankNode) and t.object not in visited:
                queue.append(t.object)
    return Graph(collected, g.prefixes)


def graph_merge(a: Graph, b: Graph) -> Graph:
    """Triple-set union of two graphs.

    Prefix conflicts resolve in favor of ``a``; a conflicting prefix from
    ``b`` is renamed deterministically by appending the first free numeric
    suffix ("2", "3", ...).
    """
    prefixes = a.prefixes
    for prefix, ns in sorted(b.prefixes.items()):
        if prefix not in prefixes:
            prefixes[prefix] = ns
        elif prefixes[prefix] != ns:
            n = 2
            while f"{prefix}{n}" in prefixes:
                n += 1
            prefixes[f"{prefix}{n}"] = ns
    return Graph(set(a).union(set(b)), prefixes)


def _term_token(node: RdfNode, signatures: dict[str, str]) -> str:
    if isinstance(node, BlankNode):
        return "~" + signatures.get(node.label, "")
    if isinstance(node, Iri):
        return "<" + node.value + ">"
    return repr(node.sort_key())


def canonical_blank_labels(g: Graph) -> dict[str, str]:
    """Relabeling map for blank nodes based on iterated structural signatures.

    Sufficient for graphs with shallow blank-node structure, which is all the
    encoders in this package ever emit.
    """
    blanks = sorted(
        {n.label for t in g for n in (t.subject, t.object) if isinstance(n, BlankNode)}
    )
    sig: dict[str, str] = {b: "" for b in blanks}
    for _ in range(max(1, len(blanks))):
        refined: dict[str, str] = {}
        for b in blanks:
            parts: list[str] = []
            for t in g:
                if isinstance(t.subject, BlankNode) and t.subject.label == b:
                    parts.append("s|" + t.predicate.value + "|" + _term_token(t.object, sig))
                if isinstance(t.object, BlankNode) and t.object.label == b:
                    parts.append("o|" + t.predicate.value + "|" + _term_token(t.subject, sig))
            refined[b] = ";".join(sorted(parts))
        sig = refined
    ranked = sorted(blanks, key=lambda b: (sig[b], b))
    return {b: f"c{i}" for i, b in enumerate(ranked)}


def _relabeled(g: Graph) -> frozenset[Triple]:
    mapping = canonical_blank_labels(g)

    def swap(node: RdfNode) -> RdfNode:
        if isinstance(node, BlankNode):
            return BlankNode(mapping[node.label])
        return node

    return frozenset(
        Triple(swap(t.subject), t.predicate, swap(t.object)) for t in g
    )


def isomorphic(a: Graph, b: Graph) -> bool:
    """Triple-set equality up to blank-node relabeling."""
    if len(a) != len(b):
        return False
    return _relabeled(a) == _relabeled(b)
