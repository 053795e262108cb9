"""Tabular (CSV/TSV) ingestion under a declarative mapping configuration.

A mapping config assigns a role to every column of the legacy table; headers
may carry a language suffix (``prefLabel@fr``) that overrides the default
language. Ingestion is deliberately conservative: cells are trimmed but
otherwise preserved verbatim — no spelling fixes, no case normalization —
so the first encoded version stays anchored to the legacy source. Quality
problems become findings, not silent repairs.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from fairvoc.errors import FairvocError
from fairvoc.findings import Finding, finding
from fairvoc.iri_policy import (
    EmptySlugError,
    IriPolicy,
    MintLedger,
    mint_iri,
    slugify,
)
from fairvoc.model import (
    Note,
    TermMeta,
    VocabCollection,
    VocabMetadata,
    VocabTerm,
    Vocabulary,
    parse_date_like,
)
from fairvoc.rdf.model import Iri, RdfModelError

ROLES = frozenset({
    "id", "prefLabel", "altLabel", "definition", "notation", "broader",
    "related", "collection", "note", "scopeNote", "source", "created",
    "modified", "ignore",
})
# Cells in these roles may hold several values joined by the multi-value
# separator.
MULTI_VALUE_ROLES = frozenset({
    "altLabel", "notation", "broader", "related", "collection", "note",
    "scopeNote",
})
BROADER_REF_MODES = ("byId", "byLabel")


class IngestError(FairvocError):
    """Unusable input file or mapping configuration."""


@dataclass
class MappingConfig:
    column_roles: dict[str, str]
    iri_policy: IriPolicy
    delimiter: str = ","
    multi_value_separator: str = "|"
    default_lang: str = "en"
    broader_ref_mode: str = "byId"
    scheme_meta: VocabMetadata = field(default_factory=VocabMetadata)

    def __post_init__(self):
        if len(self.delimiter) != 1:
            raise IngestError("delimiter must be a single character")
        if len(self.multi_value_separator) != 1:
            raise IngestError("multiValueSeparator must be a single character")
        if self.broader_ref_mode not in BROADER_REF_MODES:
            raise IngestError(
                f"broaderRefMode must be one of {BROADER_REF_MODES}, "
                f"got {self.broader_ref_mode!r}"
            )
        pref_langs: dict[str, str] = {}
        has_definition = False
        for header, role in self.column_roles.items():
            if role not in ROLES:
                raise IngestError(f"unknown column role {role!r} for {header!r}")
            lang = header_lang(header, self.default_lang)
            if role == "prefLabel":
                if lang in pref_langs:
                    raise IngestError(
                        f"columns {pref_langs[lang]!r} and {header!r} both map "
                        f"to prefLabel for language {lang!r}"
                    )
                pref_langs[lang] = header
            if role == "definition":
                has_definition = True
        if not pref_langs:
            raise IngestError("no column maps to prefLabel")
        if not has_definition:
            raise IngestError(
                "no column maps to definition; a label and a definition per "
                "term are the minimum for a useful vocabulary"
            )

    @classmethod
    def from_dict(cls, data: dict) -> "MappingConfig":
        known = {
            "columnRoles", "iriPolicy", "delimiter", "multiValueSeparator",
            "defaultLang", "broaderRefMode", "schemeMeta",
        }
        unknown = set(data) - known
        if unknown:
            raise IngestError(f"unknown mapping config keys: {sorted(unknown)}")
        for required in ("columnRoles", "iriPolicy"):
            if required not in data:
                raise IngestError(f"mapping config requires {required!r}")
        default_lang = data.get("defaultLang", "en")
        return cls(
            column_roles=dict(data["columnRoles"]),
            iri_policy=IriPolicy.from_dict(data["iriPolicy"]),
            delimiter=data.get("delimiter", ","),
            multi_value_separator=data.get("multiValueSeparator", "|"),
            default_lang=default_lang,
            broader_ref_mode=data.get("broaderRefMode", "byId"),
            scheme_meta=_meta_from_dict(data.get("schemeMeta", {}), default_lang),
        )


def load_mapping_config(path: Union[str, Path]) -> MappingConfig:
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IngestError(f"cannot read mapping config: {exc}")
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise IngestError(f"mapping config is not valid JSON: {exc}")
    if not isinstance(data, dict):
        raise IngestError("mapping config must be a JSON object")
    return MappingConfig.from_dict(data)


def _meta_from_dict(data: dict, default_lang: str) -> VocabMetadata:
    def lang_map(value) -> dict[str, str]:
        if value is None:
            return {}
        if isinstance(value, str):
            return {default_lang: value}
        return {str(k).lower(): str(v) for k, v in value.items()}

    def opt_iri(value) -> Optional[Iri]:
        if value is None:
            return None
        try:
            return Iri(str(value))
        except RdfModelError as exc:
            raise IngestError(f"schemeMeta IRI field: {exc}")

    def opt_date(value):
        if value is None:
            return None
        try:
            return parse_date_like(str(value))
        except ValueError as exc:
            raise IngestError(f"schemeMeta date field: {exc}")

    source = data.get("sourceCitation")
    if isinstance(source, str) and source.startswith(("http://", "https://")):
        source = Iri(source)
    known = {
        "title", "description", "creators", "publisher", "sourceCitation",
        "licenseIri", "created", "modified", "status", "versionInfo",
        "priorVersion", "replaces", "isReplacedBy", "backwardsCompatibleWith",
        "incompatibleWith", "converterAttribution",
    }
    unknown = set(data) - known
    if unknown:
        raise IngestError(f"unknown schemeMeta keys: {sorted(unknown)}")
    return VocabMetadata(
        title=lang_map(data.get("title")),
        description=lang_map(data.get("description")),
        creators=list(data.get("creators", [])),
        publisher=data.get("publisher"),
        source_citation=source,
        license_iri=opt_iri(data.get("licenseIri")),
        created=opt_date(data.get("created")),
        modified=opt_date(data.get("modified")),
        status=data.get("status"),
        version_info=data.get("versionInfo"),
        prior_version=opt_iri(data.get("priorVersion")),
        replaces=opt_iri(data.get("replaces")),
        is_replaced_by=opt_iri(data.get("isReplacedBy")),
        backwards_compatible_with=opt_iri(data.get("backwardsCompatibleWith")),
        incompatible_with=opt_iri(data.get("incompatibleWith")),
        converter_attribution=data.get("converterAttribution"),
    )


def header_lang(header: str, default_lang: str) -> str:
    """Language for a column: the ``@tag`` suffix if present, else the default."""
    if "@" in header:
        return header.rsplit("@", 1)[1].lower()
    return default_lang.lower()


@dataclass
class SourceRow:
    """One data record; row numbers count file records, header included."""

    row_number: int
    cells: dict[str, str]


def parse_table(data: Union[bytes, str], cfg: MappingConfig) -> list[SourceRow]:
    """RFC 4180-style parse. Rows whose cells are all empty are skipped."""
    if isinstance(data, bytes):
        text = data.decode("utf-8-sig")
    else:
        text = data.lstrip("﻿")
    reader = csv.reader(io.StringIO(text, newline=""), delimiter=cfg.delimiter)
    try:
        header = next(reader)
    except StopIteration:
        raise IngestError("input has no header row")
    header = [h.strip() for h in header]
    unknown = [h for h in header if h not in cfg.column_roles]
    if unknown:
        raise IngestError(
            f"headers not present in columnRoles: {', '.join(repr(h) for h in unknown)}"
        )
    rows: list[SourceRow] = []
    for record_number, record in enumerate(reader, start=2):
        if len(record) != len(header):
            raise IngestError(
                f"row {record_number}: expected {len(header)} cells, "
                f"found {len(record)}"
            )
        cells = {h: record[i].strip() for i, h in enumerate(header)}
        if all(not v for v in cells.values()):
            continue
        rows.append(SourceRow(record_number, cells))
    return rows


def build_vocabulary(
    rows: list[SourceRow],
    cfg: MappingConfig,
    policy: Optional[IriPolicy] = None,
) -> tuple[Vocabulary, list[Finding]]:
    """Assemble a draft Vocabulary from parsed rows.

    Deterministic: the same rows and config always produce a structurally
    identical vocabulary, minted IRIs included. Rows that fail the
    label+definition completeness gate still yield draft terms, flagged
    R3-INCOMPLETE. Unresolvable or ambiguous broader/related references are
    dropped after being reported, so the draft stays encodable.
    """
    policy = policy or cfg.iri_policy
    strategy = policy.effective_strategy(len(rows))
    ledger = MintLedger()
    findings: list[Finding] = []
    terms: dict[str, VocabTerm] = {}
    collections: dict[str, VocabCollection] = {}
    explicit_ids: dict[str, int] = {}  # id cell -> first row
    id_to_local: dict[str, str] = {}
    row_of_term: dict[str, int] = {}
    pending_refs: list[tuple[str, str, str, int]] = []  # local, kind, raw ref, row

    for row in rows:
        values = _row_values(row, cfg)
        explicit_id = values.single("id")
        if explicit_id:
            if explicit_id in explicit_ids:
                findings.append(finding(
                    "E-DUP-ID",
                    f"id {explicit_id!r} already used in row "
                    f"{explicit_ids[explicit_id]}; row {row.row_number} skipped",
                    row.row_number,
                ))
                continue
            explicit_ids[explicit_id] = row.row_number

        label = _mint_label(values, cfg, explicit_id, row.row_number)
        iri, local_id = mint_iri(
            policy, ledger, label=label, provided_id=explicit_id,
            strategy=strategy,
        )
        if explicit_id:
            id_to_local[explicit_id] = local_id

        term = VocabTerm(
            iri=iri,
            local_id=local_id,
            pref_labels=values.lang_single("prefLabel"),
            alt_labels=values.lang_multi("altLabel"),
            definitions=values.lang_single("definition"),
            notations=values.multi("notation"),
            notes=_notes(values),
            meta=_term_meta(values, row.row_number),
        )
        terms[local_id] = term
        row_of_term[local_id] = row.row_number

        for ref in values.multi("broader"):
            pending_refs.append((local_id, "broader", ref, row.row_number))
        for ref in values.multi("related"):
            pending_refs.append((local_id, "related", ref, row.row_number))

        for name in values.multi("collection"):
            cid = slugify(name, policy.ascii_fold)
            if cid not in collections:
                collections[cid] = VocabCollection(
                    id=cid,
                    iri=policy.term_iri(f"collection/{cid}"),
                    label={header_lang("collection", cfg.default_lang): name},
                )
            collections[cid].members.add(local_id)
            term.collections.add(cid)

        if not term.is_complete():
            missing = []
            if not term.has_label():
                missing.append("label")
            if not term.has_definition():
                missing.append("definition")
            findings.append(finding(
                "R3-INCOMPLETE",
                f"term {local_id!r} lacks a {' and a '.join(missing)}",
                row.row_number,
            ))

    label_index: dict[str, list[str]] = {}
    for local_id, term in terms.items():
        key = term.pref_labels.get(cfg.default_lang.lower(), "").strip()
        if key:
            label_index.setdefault(key, []).append(local_id)

    for local_id, kind, raw, row_number in pending_refs:
        target = _resolve_ref(raw, cfg, terms, id_to_local, label_index)
        if target == "":
            findings.append(finding(
                "R6-AMBIGUOUS-REF",
                f"{kind} reference {raw!r} matches several terms; dropped",
                row_number,
            ))
        elif target is None or target not in terms:
            findings.append(finding(
                "R6-DANGLING-REF",
                f"{kind} reference {raw!r} does not resolve; dropped",
                row_number,
            ))
        elif target == local_id:
            findings.append(finding(
                "R6-DANGLING-REF",
                f"{kind} reference {raw!r} points at the term itself; dropped",
                row_number,
            ))
        else:
            getattr(terms[local_id], kind).add(target)

    vocab = Vocabulary(
        scheme_iri=policy.scheme_iri(),
        meta=_copy_meta(cfg.scheme_meta),
        terms=terms,
        collections=collections,
    )
    return vocab, findings


class _RowValues:
    """Cells of one row grouped by role, with language resolution."""

    def __init__(self, by_role: dict[str, list[tuple[str, str]]], separator: str):
        self._by_role = by_role  # role -> [(lang, raw cell)]
        self._separator = separator

    def single(self, role: str) -> str:
        for _, value in self._by_role.get(role, []):
            if value:
                return value
        return ""

    def multi(self, role: str) -> list[str]:
        out: list[str] = []
        for _, value in self._by_role.get(role, []):
            out.extend(p.strip() for p in value.split(self._separator) if p.strip())
        return out

    def lang_single(self, role: str) -> dict[str, str]:
        out: dict[str, str] = {}
        for lang, value in self._by_role.get(role, []):
            if value:
                out[lang] = value
        return out

    def lang_multi(self, role: str) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {}
        for lang, value in self._by_role.get(role, []):
            parts = [p.strip() for p in value.split(self._separator) if p.strip()]
            if parts:
                out.setdefault(lang, []).extend(parts)
        return out

    def lang_pairs(self, role: str) -> list[tuple[str, str]]:
        return [(lang, v) for lang, v in self._by_role.get(role, []) if v]


def _row_values(row: SourceRow, cfg: MappingConfig) -> _RowValues:
    by_role: dict[str, list[tuple[str, str]]] = {}
    for header, value in row.cells.items():
        role = cfg.column_roles[header]
        if role == "ignore":
            continue
        lang = header_lang(header, cfg.default_lang)
        by_role.setdefault(role, []).append((lang, value))
    return _RowValues(by_role, cfg.multi_value_separator)


def _mint_label(
    values: _RowValues, cfg: MappingConfig, explicit_id: str, row_number: int
) -> str:
    labels = values.lang_single("prefLabel")
    preferred = labels.get(cfg.default_lang.lower())
    if preferred:
        return preferred
    for lang in sorted(labels):
        if labels[lang]:
            return labels[lang]
    if explicit_id:
        return explicit_id
    # Last resort so a label-less draft row still gets a stable identifier.
    return f"term {row_number}"


def _notes(values: _RowValues) -> list[Note]:
    out: list[Note] = []
    for role, kind in (("note", "note"), ("scopeNote", "scopeNote")):
        for lang, cell in values.lang_pairs(role):
            for part in cell.split(values._separator):
                part = part.strip()
                if part:
                    out.append(Note(kind, lang, part))
    return out


def _term_meta(values: _RowValues, row_number: int) -> TermMeta:
    source: Union[str, Iri, None] = values.single("source") or None
    if isinstance(source, str) and source.startswith(("http://", "https://")):
        try:
            source = Iri(source)
        except RdfModelError:
            pass  # keep the raw string; fidelity over repair
    created = _date_cell(values.single("created"), row_number)
    modified = _date_cell(values.single("modified"), row_number)
    return TermMeta(created=created, modified=modified, source=source)


def _date_cell(value: str, row_number: int):
    if not value:
        return None
    try:
        return parse_date_like(value)
    except ValueError:
        raise IngestError(f"row {row_number}: unparseable date {value!r}")


def _resolve_ref(
    raw: str,
    cfg: MappingConfig,
    terms: dict[str, VocabTerm],
    id_to_local: dict[str, str],
    label_index: dict[str, list[str]],
) -> Optional[str]:
    """Target local-id, None when unresolved, "" when ambiguous."""
    if cfg.broader_ref_mode == "byLabel":
        candidates = label_index.get(raw, [])
        if len(candidates) > 1:
            return ""
        return candidates[0] if candidates else None
    if raw in id_to_local:
        return id_to_local[raw]
    return raw if raw in terms else None


def _copy_meta(meta: VocabMetadata) -> VocabMetadata:
    import copy

    return copy.deepcopy(meta)
