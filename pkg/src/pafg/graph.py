"""Minimal directed-graph substrate shared by application graphs and PAFGs.

Graphs are immutable values: mutating operations return a new graph, which
keeps before/after comparison cheap for rewrite passes. Vertices are opaque
string identifiers; edges are ordered pairs. Self-loops and parallel edges
are rejected at construction.
"""

from dataclasses import dataclass

from .errors import (
    DuplicateEdgeError,
    DuplicateVertexError,
    SelfLoopError,
    UnknownEdgeError,
    UnknownVertexError,
)


@dataclass(frozen=True)
class DirectedGraph:
    vertices: frozenset
    edges: frozenset

    def __post_init__(self):
        for src, snk in self.edges:
            if src == snk:
                raise SelfLoopError(f"self-loop on {src!r}")
            if src not in self.vertices or snk not in self.vertices:
                raise UnknownVertexError(f"edge ({src!r}, {snk!r}) has endpoint outside vertex set")

    @classmethod
    def empty(cls):
        return cls(frozenset(), frozenset())

    @classmethod
    def of(cls, vertices=(), edges=()):
        return cls(frozenset(vertices), frozenset(edges))

    def add_vertex(self, v):
        if v in self.vertices:
            raise DuplicateVertexError(f"vertex {v!r} already present")
        return DirectedGraph(self.vertices | {v}, self.edges)

    def add_edge(self, src, snk):
        if src not in self.vertices:
            raise UnknownVertexError(f"unknown source vertex {src!r}")
        if snk not in self.vertices:
            raise UnknownVertexError(f"unknown sink vertex {snk!r}")
        if src == snk:
            raise SelfLoopError(f"self-loop on {src!r}")
        if (src, snk) in self.edges:
            raise DuplicateEdgeError(f"edge ({src!r}, {snk!r}) already present")
        return DirectedGraph(self.vertices, self.edges | {(src, snk)})

    def remove_edge(self, src, snk):
        if (src, snk) not in self.edges:
            raise UnknownEdgeError(f"edge ({src!r}, {snk!r}) not present")
        return DirectedGraph(self.vertices, self.edges - {(src, snk)})

    def remove_vertex(self, v):
        """Remove v along with all of its incident edges."""
        self._require(v)
        kept = frozenset(e for e in self.edges if v not in e)
        return DirectedGraph(self.vertices - {v}, kept)

    def _require(self, v):
        if v not in self.vertices:
            raise UnknownVertexError(f"unknown vertex {v!r}")

    def in_edges(self, v):
        self._require(v)
        return {e for e in self.edges if e[1] == v}

    def out_edges(self, v):
        self._require(v)
        return {e for e in self.edges if e[0] == v}

    def pred(self, v):
        return {src for src, _ in self.in_edges(v)}

    def succ(self, v):
        return {snk for _, snk in self.out_edges(v)}
