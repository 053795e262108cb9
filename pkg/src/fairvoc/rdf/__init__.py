"""Minimal RDF core: data model plus Turtle reader/writer."""

from fairvoc.rdf.model import (
    BlankNode,
    Graph,
    Iri,
    Literal,
    RdfModelError,
    RdfNode,
    Triple,
    graph_merge,
    isomorphic,
    node_sort_key,
    subject_description,
)
from fairvoc.rdf.turtle import (
    TurtleParseError,
    parse_turtle,
    serialize_canonical_turtle,
)

__all__ = [
    "BlankNode",
    "Graph",
    "Iri",
    "Literal",
    "RdfModelError",
    "RdfNode",
    "Triple",
    "TurtleParseError",
    "graph_merge",
    "isomorphic",
    "node_sort_key",
    "parse_turtle",
    "serialize_canonical_turtle",
    "subject_description",
]
