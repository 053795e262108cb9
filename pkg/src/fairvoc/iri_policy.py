"""Persistent identifier minting and hygiene checks.

Term IRIs follow the template ``<baseDomain>/<vocabPath>/<localId>``. The
local-id comes from one of three strategies: a slug of the primary label, a
zero-padded sequence number, or an identifier supplied by the source. Once
minted, an IRI is never re-assigned: the ledger binds each local-id at first
mint and later label edits leave the IRI untouched.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from typing import Optional

from fairvoc.errors import FairvocError
from fairvoc.findings import Finding, finding
from fairvoc.rdf.model import Iri

STRATEGIES = ("slug", "numeric", "provided")
COLLISION_MODES = ("strict", "autoSuffix")

# Above this many rows the auto strategy switches from slugs to sequence
# numbers: label-based ids stop being manageable for large vocabularies.
AUTO_SLUG_LIMIT = 500

_PROVIDED_ID_RE = re.compile(r"^[A-Za-z0-9._~\-]+$")
_VERSION_SEGMENT_RE = re.compile(r"^v?\d+(\.\d+)*$")


class IriPolicyError(FairvocError):
    """Bad policy configuration."""


class EmptySlugError(FairvocError):
    code = "E-EMPTY-SLUG"


class DuplicateIriError(FairvocError):
    code = "E-IRI-DUP"


class InvalidProvidedIdError(FairvocError):
    code = "E-BAD-PROVIDED-ID"


@dataclass
class IriPolicy:
    base_domain: Iri
    vocab_path: str = ""
    strategy: Optional[str] = None  # None = choose by vocabulary size
    numeric_width: int = 5
    collision_mode: str = "strict"
    ascii_fold: bool = False

    def __post_init__(self):
        if isinstance(self.base_domain, str):
            self.base_domain = Iri(self.base_domain)
        if self.base_domain.scheme not in ("http", "https"):
            raise IriPolicyError(
                f"base domain must be http(s), got {self.base_domain}"
            )
        if "#" in self.base_domain.value:
            raise IriPolicyError("base domain must not contain a fragment")
        if self.vocab_path.strip("/") != self.vocab_path or "#" in self.vocab_path:
            raise IriPolicyError(
                f"vocab path must not start or end with '/' or contain '#': {self.vocab_path!r}"
            )
        if self.strategy is not None and self.strategy not in STRATEGIES:
            raise IriPolicyError(f"unknown strategy {self.strategy!r}")
        if self.numeric_width < 1:
            raise IriPolicyError("numeric width must be >= 1")
        if self.collision_mode not in COLLISION_MODES:
            raise IriPolicyError(f"unknown collision mode {self.collision_mode!r}")

    def effective_strategy(self, term_count: int) -> str:
        if self.strategy is not None:
            return self.strategy
        return "slug" if term_count <= AUTO_SLUG_LIMIT else "numeric"

    def scheme_iri(self) -> Iri:
        return Iri(_join(self.base_domain.value, self.vocab_path))

    def term_iri(self, local_id: str) -> Iri:
        return Iri(_join(self.base_domain.value, self.vocab_path, local_id))

    @classmethod
    def from_dict(cls, data: dict) -> "IriPolicy":
        known = {
            "baseDomain": "base_domain",
            "vocabPath": "vocab_path",
            "strategy": "strategy",
            "numericWidth": "numeric_width",
            "collisionMode": "collision_mode",
            "asciiFold": "ascii_fold",
        }
        unknown = set(data) - set(known)
        if unknown:
            raise IriPolicyError(f"unknown iriPolicy keys: {sorted(unknown)}")
        if "baseDomain" not in data:
            raise IriPolicyError("iriPolicy requires baseDomain")
        kwargs = {py: data[js] for js, py in known.items() if js in data}
        kwargs["base_domain"] = Iri(kwargs["base_domain"])
        return cls(**kwargs)


def _join(*parts: str) -> str:
    pieces = [p.strip("/") for p in parts if p and p.strip("/")]
    return "/".join(pieces)


@dataclass
class MintLedger:
    """Tracks assigned local-ids within one (baseDomain, vocabPath) context."""

    used: set[str] = field(default_factory=set)
    next_seq: int = 1


def slugify(label: str, ascii_fold: bool = False) -> str:
    """Lowercased label with runs of non-letter/digit/hyphen characters
    collapsed to single hyphens.

    With ascii_fold, diacritics are stripped via canonical decomposition and
    remaining non-ASCII letters are dropped. Raises EmptySlugError when
    nothing survives.
    """
    s = label.strip().lower()
    if ascii_fold:
        s = unicodedata.normalize("NFKD", s)
        s = "".join(ch for ch in s if not unicodedata.combining(ch))
        s = s.encode("ascii", "ignore").decode("ascii")
    out: list[str] = []
    pending_sep = False
    for ch in s:
        if ch.isalpha() or ch.isdigit() or ch == "-":
            if pending_sep and out:
                out.append("-")
            pending_sep = False
            out.append(ch)
        else:
            pending_sep = True
    slug = "".join(out).strip("-")
    if not slug:
        raise EmptySlugError(f"label {label!r} leaves nothing to slug")
    return slug


def mint_iri(
    policy: IriPolicy,
    ledger: MintLedger,
    label: Optional[str] = None,
    provided_id: Optional[str] = None,
    strategy: Optional[str] = None,
) -> tuple[Iri, str]:
    """Mint the next term IRI, recording the local-id in the ledger.

    The ledger is updated in place; replaying the same ordered inputs against
    a fresh ledger reproduces the same IRIs exactly.
    """
    strat = strategy or policy.effective_strategy(0)
    if strat == "provided":
        if not provided_id:
            raise InvalidProvidedIdError("provided strategy requires an id")
        if not _PROVIDED_ID_RE.match(provided_id):
            raise InvalidProvidedIdError(
                f"provided id {provided_id!r} contains characters outside [A-Za-z0-9._~-]"
            )
        candidate = provided_id
    elif strat == "numeric":
        candidate = str(ledger.next_seq).zfill(policy.numeric_width)
        ledger.next_seq += 1
    elif strat == "slug":
        if label is None:
            raise EmptySlugError("slug strategy requires a label")
        candidate = slugify(label, policy.ascii_fold)
    else:
        raise IriPolicyError(f"unknown strategy {strat!r}")

    local_id = candidate
    if local_id in ledger.used:
        if policy.collision_mode == "strict":
            raise DuplicateIriError(
                f"local-id {local_id!r} already minted under "
                f"{policy.scheme_iri()}"
            )
        n = 2
        while f"{candidate}-{n}" in ledger.used:
            n += 1
        local_id = f"{candidate}-{n}"
    ledger.used.add(local_id)
    return policy.term_iri(local_id), local_id


def check_iri_hygiene(iri: Iri) -> list[Finding]:
    """Identifier-scheme lint for one term IRI.

    The final path segment is the local-id and is exempt from the version
    checks: purely numeric local-ids are a legitimate identifier strategy,
    not embedded version metadata.
    """
    out: list[Finding] = []
    if iri.scheme not in ("http", "https"):
        out.append(finding(
            "R5-NOT-HTTP",
            f"scheme {iri.scheme!r} is not dereferenceable over HTTP",
            iri.value,
        ))
    if "#" in iri.value:
        out.append(finding(
            "R5-HASH",
            "hash IRIs return the whole vocabulary instead of one term; "
            "prefer slash IRIs",
            iri.value,
        ))
    segments = _path_segments(iri)
    for segment in segments[:-1]:
        if _VERSION_SEGMENT_RE.match(segment) or "version" in segment.lower():
            out.append(finding(
                "R5-VERSION",
                f"path segment {segment!r} looks like version metadata "
                "embedded in the identifier",
                iri.value,
            ))
            break
    if len(segments) > 6:
        out.append(finding(
            "R5-LONG-PATH",
            f"{len(segments)} path segments; long IRI paths are "
            "hard to sustain",
            iri.value,
        ))
    return out


def _path_segments(iri: Iri) -> list[str]:
    value = iri.value.split("#", 1)[0]
    rest = value.split("://", 1)
    path = rest[1].split("/", 1) if len(rest) == 2 else (None, "")
    if len(rest) == 2 and len(path) == 2:
        return [seg for seg in path[1].split("/") if seg]
    return []
