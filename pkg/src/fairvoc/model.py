"""Encoding-independent in-memory vocabulary model.

Terms, collections and scheme metadata live here, keyed by local-id; IRIs
are minted once (see iri_policy) and never change afterwards. Hierarchy is
stored as ``broader`` only — the reciprocal narrower direction is derived at
encoding time so there is a single source of truth.

Vocabulary values are assembled by a builder (ingest, decode, or test code)
and treated as immutable afterwards; mutating operations elsewhere in the
package work on deep copies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date, datetime
from enum import Enum
from typing import NamedTuple, Optional, Union

from fairvoc.errors import FairvocError
from fairvoc.rdf.model import Iri


class VocabModelError(FairvocError):
    """A vocabulary value violates a structural invariant."""


class Status(str, Enum):
    ACTIVE = "active"
    DEPRECATED = "deprecated"


NOTE_KINDS = ("note", "scopeNote", "changeNote", "historyNote")


class Note(NamedTuple):
    kind: str  # one of NOTE_KINDS
    lang: str  # BCP-47 tag, lowercased; "" means untagged
    text: str


class DanglingRef(NamedTuple):
    source_id: str  # local-id of the term or collection holding the reference
    ref_kind: str  # broader | related | collection | member | subCollection
    missing_target: str


DateLike = Union[date, datetime]


def as_date(value: Optional[DateLike]) -> Optional[date]:
    if isinstance(value, datetime):
        return value.date()
    return value


def parse_date_like(text: str) -> DateLike:
    """ISO 8601 calendar date, or a full timestamp when the source has one."""
    if "T" in text:
        return datetime.fromisoformat(text)
    return date.fromisoformat(text)


@dataclass
class TermMeta:
    """Per-item provenance annotations."""

    created: Optional[DateLike] = None
    modified: Optional[DateLike] = None
    creator: Optional[str] = None
    source: Optional[Union[str, Iri]] = None
    see_also: list[Iri] = field(default_factory=list)

    def is_empty(self) -> bool:
        return not (
            self.created or self.modified or self.creator
            or self.source or self.see_also
        )


@dataclass
class VocabTerm:
    iri: Iri
    local_id: str
    pref_labels: dict[str, str] = field(default_factory=dict)  # lang -> label
    alt_labels: dict[str, list[str]] = field(default_factory=dict)
    definitions: dict[str, str] = field(default_factory=dict)
    notations: list[str] = field(default_factory=list)
    notes: list[Note] = field(default_factory=list)
    broader: set[str] = field(default_factory=set)  # local-ids
    related: set[str] = field(default_factory=set)
    collections: set[str] = field(default_factory=set)  # collection ids
    status: Status = Status.ACTIVE
    replaced_by: Optional[Iri] = None
    meta: TermMeta = field(default_factory=TermMeta)

    def __post_init__(self):
        if self.local_id in self.broader:
            raise VocabModelError(
                f"term {self.local_id!r} lists itself as broader"
            )
        for note in self.notes:
            if note.kind not in NOTE_KINDS:
                raise VocabModelError(f"unknown note kind {note.kind!r}")

    def has_label(self) -> bool:
        return any(v.strip() for v in self.pref_labels.values())

    def has_definition(self) -> bool:
        return any(v.strip() for v in self.definitions.values())

    def is_complete(self) -> bool:
        """Minimal usefulness gate: at least one label and one definition."""
        return self.has_label() and self.has_definition()


@dataclass
class VocabCollection:
    """A labeled subset of terms; may nest, may overlap with others."""

    id: str
    iri: Iri
    label: dict[str, str] = field(default_factory=dict)
    members: set[str] = field(default_factory=set)  # term local-ids
    sub_collections: set[str] = field(default_factory=set)


@dataclass
class VocabMetadata:
    """Scheme-level description: provenance, lifecycle, license, versioning."""

    title: dict[str, str] = field(default_factory=dict)
    description: dict[str, str] = field(default_factory=dict)
    creators: list[str] = field(default_factory=list)
    publisher: Optional[str] = None
    source_citation: Optional[Union[str, Iri]] = None
    license_iri: Optional[Iri] = None
    created: Optional[DateLike] = None
    modified: Optional[DateLike] = None
    status: Optional[str] = None
    version_info: Optional[str] = None
    prior_version: Optional[Iri] = None
    replaces: Optional[Iri] = None
    is_replaced_by: Optional[Iri] = None
    backwards_compatible_with: Optional[Iri] = None
    incompatible_with: Optional[Iri] = None
    converter_attribution: Optional[str] = None

    def __post_init__(self):
        created, modified = as_date(self.created), as_date(self.modified)
        if created and modified and created > modified:
            raise VocabModelError(
                f"created date {created} is after modified date {modified}"
            )


@dataclass
class Vocabulary:
    scheme_iri: Iri
    meta: VocabMetadata = field(default_factory=VocabMetadata)
    terms: dict[str, VocabTerm] = field(default_factory=dict)
    collections: dict[str, VocabCollection] = field(default_factory=dict)

    def __post_init__(self):
        seen_iris: dict[Iri, str] = {}
        for local_id, term in self.terms.items():
            if term.local_id != local_id:
                raise VocabModelError(
                    f"term keyed {local_id!r} carries local_id {term.local_id!r}"
                )
            if term.iri == self.scheme_iri:
                raise VocabModelError(
                    f"term {local_id!r} reuses the scheme IRI {term.iri}"
                )
            if term.iri in seen_iris:
                raise VocabModelError(
                    f"terms {seen_iris[term.iri]!r} and {local_id!r} share IRI {term.iri}"
                )
            seen_iris[term.iri] = local_id
        for cid, coll in self.collections.items():
            if coll.id != cid:
                raise VocabModelError(
                    f"collection keyed {cid!r} carries id {coll.id!r}"
                )
        self._check_collection_nesting()

    def _check_collection_nesting(self):
        # Nesting must be acyclic; DFS with a path set.
        visiting: set[str] = set()
        done: set[str] = set()

        def visit(cid: str):
            if cid in done or cid not in self.collections:
                return
            if cid in visiting:
                raise VocabModelError(f"collection nesting cycle through {cid!r}")
            visiting.add(cid)
            for sub in self.collections[cid].sub_collections:
                visit(sub)
            visiting.discard(cid)
            done.add(cid)

        for cid in sorted(self.collections):
            visit(cid)

    def term_by_iri(self, iri: Iri) -> Optional[VocabTerm]:
        for term in self.terms.values():
            if term.iri == iri:
                return term
        return None


def resolve_refs(v: Vocabulary) -> list[DanglingRef]:
    """Every reference that does not resolve; empty means referentially closed."""
    out: list[DanglingRef] = []
    for local_id in sorted(v.terms):
        term = v.terms[local_id]
        for target in sorted(term.broader):
            if target not in v.terms:
                out.append(DanglingRef(local_id, "broader", target))
        for target in sorted(term.related):
            if target not in v.terms:
                out.append(DanglingRef(local_id, "related", target))
        for target in sorted(term.collections):
            if target not in v.collections:
                out.append(DanglingRef(local_id, "collection", target))
    for cid in sorted(v.collections):
        coll = v.collections[cid]
        for target in sorted(coll.members):
            if target not in v.terms:
                out.append(DanglingRef(cid, "member", target))
        for target in sorted(coll.sub_collections):
            if target not in v.collections:
                out.append(DanglingRef(cid, "subCollection", target))
    return out


def hierarchy_roots(v: Vocabulary) -> set[str]:
    """Local-ids of all terms with no broader reference."""
    return {local_id for local_id, term in v.terms.items() if not term.broader}


def narrower_map(v: Vocabulary) -> dict[str, set[str]]:
    """Derived inverse of broader: parent local-id -> child local-ids."""
    out: dict[str, set[str]] = {local_id: set() for local_id in v.terms}
    for local_id, term in v.terms.items():
        for parent in term.broader:
            if parent in out:
                out[parent].add(local_id)
    return out


def elementary_cycles(adjacency: dict[str, set[str]]) -> list[list[str]]:
    """All elementary cycles of a small digraph, each listed once.

    Each cycle starts at its lexicographically smallest member; the result is
    sorted. Enumeration restricts every cycle to nodes >= its start node,
    which yields each cycle exactly once.
    """
    cycles: list[list[str]] = []
    nodes = sorted(adjacency)

    def search(start: str, node: str, path: list[str], on_path: set[str]):
        for nxt in sorted(adjacency.get(node, ())):
            if nxt == start:
                cycles.append(list(path))
            elif nxt > start and nxt not in on_path and nxt in adjacency:
                path.append(nxt)
                on_path.add(nxt)
                search(start, nxt, path, on_path)
                on_path.discard(nxt)
                path.pop()

    for start in nodes:
        search(start, start, [start], {start})
    return sorted(cycles)


def find_broader_cycles(v: Vocabulary) -> list[list[str]]:
    """Elementary cycles in the broader digraph (should be none)."""
    adjacency = {
        local_id: {t for t in term.broader if t in v.terms}
        for local_id, term in v.terms.items()
    }
    return elementary_cycles(adjacency)
