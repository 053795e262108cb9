"""Well-known namespaces used by the encoders and checks."""

from __future__ import annotations

from fairvoc.rdf.model import Iri


class Namespace:
    """Attribute access mints IRIs in the namespace: ``SKOS.prefLabel``."""

    def __init__(self, base: str):
        self.base = base

    def __getattr__(self, name: str) -> Iri:
        if name.startswith("__"):
            raise AttributeError(name)
        return Iri(self.base + name)

    def term(self, name: str) -> Iri:
        return Iri(self.base + name)


DCTERMS = Namespace("http://purl.org/dc/terms/")
OWL = Namespace("http://www.w3.org/2002/07/owl#")
RDF = Namespace("http://www.w3.org/1999/02/22-rdf-syntax-ns#")
RDFS = Namespace("http://www.w3.org/2000/01/rdf-schema#")
SKOS = Namespace("http://www.w3.org/2004/02/skos/core#")
XSD = Namespace("http://www.w3.org/2001/XMLSchema#")

# Prefix map every encoder output carries.
STANDARD_PREFIXES: dict[str, str] = {
    "dcterms": DCTERMS.base,
    "owl": OWL.base,
    "rdf": RDF.base,
    "rdfs": RDFS.base,
    "skos": SKOS.base,
    "xsd": XSD.base,
}
