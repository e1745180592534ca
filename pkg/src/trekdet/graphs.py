"""Mixed graphs, directed graphs and the constructions built on them.

Vertex ids supplied by users are small nonnegative integers.  Two derived
kinds of vertex appear in constructed graphs:

* a subdivision vertex for the bidirected edge ``i <-> j`` is the tuple
  ``(min(i, j), max(i, j))``;
* the opposite copy of a vertex ``v`` in the trek graph is ``Opp(v)``.
"""

from __future__ import annotations

import graphlib
import re
from types import MappingProxyType
from functools import cached_property, lru_cache
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Hashable, Iterable, Mapping, Optional, Tuple, Union

Vertex = Hashable
Edge = Tuple[Vertex, Vertex]


class GraphError(ValueError):
    """Base class for invalid graph input."""

    def __init__(self, message: str, lineno: Optional[int] = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class GraphSyntaxError(GraphError):
    pass


class LoopEdgeError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


class UndeclaredVertexError(GraphError):
    pass


class CyclicGraphError(ValueError):
    """Raised by operations that are only defined on acyclic graphs."""


@dataclass(frozen=True)
class Opp:
    """The opposite copy ``v^opp`` of a vertex in the trek graph."""

    vertex: Vertex

    def __repr__(self) -> str:
        return f"Opp({self.vertex!r})"


@lru_cache(maxsize=None, typed=True)
def vertex_key(v: Vertex):
    """Total order on every kind of vertex id used in this package."""
    if isinstance(v, bool):
        raise TypeError(f"invalid vertex id {v!r}")
    if isinstance(v, int):
        return (0, v)
    if isinstance(v, tuple):
        return (1, tuple(vertex_key(x) for x in v))
    if isinstance(v, Opp):
        return (2, vertex_key(v.vertex))
    raise TypeError(f"invalid vertex id {v!r}")


def vertex_name(v: Vertex) -> str:
    if isinstance(v, tuple):
        return "(" + ",".join(vertex_name(x) for x in v) + ")"
    if isinstance(v, Opp):
        return vertex_name(v.vertex) + "'"
    return str(v)


def edge_key(e: Edge):
    return (vertex_key(e[0]), vertex_key(e[1]))


# -- variables -------------------------------------------------------------


@dataclass(frozen=True)
class VariableId:
    """A model parameter: ``lambda(i, j)`` for an edge, ``omega(i, j)`` for a
    covariance entry of the error terms (stored with ``i <= j``)."""

    kind: str
    i: Vertex
    j: Vertex

    def __post_init__(self):
        if self.kind not in ("lambda", "omega"):
            raise ValueError(f"unknown variable kind {self.kind!r}")
        if self.kind == "omega" and vertex_key(self.i) > vertex_key(self.j):
            raise ValueError("omega variables are stored with i <= j")

    @cached_property
    def sort_key(self):
        return (0 if self.kind == "lambda" else 1, vertex_key(self.i), vertex_key(self.j))

    @cached_property
    def name(self) -> str:
        prefix = "l" if self.kind == "lambda" else "w"
        return f"{prefix}_{vertex_name(self.i)}_{vertex_name(self.j)}"

    def __repr__(self) -> str:
        return self.name


def lambda_var(i: Vertex, j: Vertex) -> VariableId:
    return VariableId("lambda", i, j)


def omega_var(i: Vertex, j: Vertex) -> VariableId:
    if vertex_key(i) > vertex_key(j):
        i, j = j, i
    return VariableId("omega", i, j)


_VERTEX_TOKEN = r"(\(\d+,\d+\)|\d+)"
_VARIABLE_RE = re.compile(rf"([lw])_{_VERTEX_TOKEN}_{_VERTEX_TOKEN}$")


def _parse_vertex_token(tok: str) -> Vertex:
    if tok.startswith("("):
        a, b = tok[1:-1].split(",")
        return (int(a), int(b))
    return int(tok)


def variable_from_name(name: str) -> VariableId:
    """Inverse of :attr:`VariableId.name`."""
    m = _VARIABLE_RE.match(name)
    if not m:
        raise ValueError(f"not a variable name: {name!r}")
    kind = "lambda" if m.group(1) == "l" else "omega"
    return VariableId(kind, _parse_vertex_token(m.group(2)), _parse_vertex_token(m.group(3)))


# -- graphs ----------------------------------------------------------------


def _sorted_vertices(vs: Iterable[Vertex]) -> Tuple[Vertex, ...]:
    return tuple(sorted(vs, key=vertex_key))


@dataclass(frozen=True)
class MixedGraph:
    """Graph with directed edges ``i -> j`` and bidirected edges ``i <-> j``.

    Bidirected edges are stored as ``(min, max)`` pairs.
    """

    vertices: Tuple[Vertex, ...]
    directed_edges: FrozenSet[Edge] = frozenset()
    bidirected_edges: FrozenSet[Edge] = frozenset()

    def __post_init__(self):
        vertices = tuple(self.vertices)
        if len(set(vertices)) != len(vertices):
            raise GraphError("duplicate vertex")
        object.__setattr__(self, "vertices", vertices)
        vset = set(vertices)
        directed = frozenset(tuple(e) for e in self.directed_edges)
        bidirected = set()
        for e in self.bidirected_edges:
            i, j = e
            bidirected.add((i, j) if vertex_key(i) <= vertex_key(j) else (j, i))
        for i, j in list(directed) + list(bidirected):
            if i == j:
                raise LoopEdgeError(f"loop edge at {i}")
            if i not in vset or j not in vset:
                raise UndeclaredVertexError(f"edge ({i}, {j}) uses an undeclared vertex")
        object.__setattr__(self, "directed_edges", directed)
        object.__setattr__(self, "bidirected_edges", frozenset(bidirected))

    def has_bidirected(self, i: Vertex, j: Vertex) -> bool:
        if vertex_key(i) > vertex_key(j):
            i, j = j, i
        return (i, j) in self.bidirected_edges

    @property
    def directed_part(self) -> "DiGraph":
        return DiGraph(self.vertices, self.directed_edges)

    def variables(self) -> Tuple[VariableId, ...]:
        out = [lambda_var(i, j) for i, j in self.directed_edges]
        out += [omega_var(v, v) for v in self.vertices]
        out += [omega_var(i, j) for i, j in self.bidirected_edges]
        return tuple(sorted(out, key=lambda v: v.sort_key))


@dataclass(frozen=True)
class DiGraph:
    """Directed graph without loops or multiple edges.

    ``provenance`` optionally tags each vertex with its origin: ``"original"``,
    ``"subdivision"`` or ``"opposite"``.  It does not take part in equality.
    """

    vertices: Tuple[Vertex, ...]
    edges: FrozenSet[Edge] = frozenset()
    provenance: Optional[Mapping[Vertex, str]] = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        vertices = tuple(self.vertices)
        if len(set(vertices)) != len(vertices):
            raise GraphError("duplicate vertex")
        object.__setattr__(self, "vertices", vertices)
        edges = frozenset(tuple(e) for e in self.edges)
        vset = set(vertices)
        succ: Dict[Vertex, list] = {v: [] for v in vertices}
        pred: Dict[Vertex, list] = {v: [] for v in vertices}
        for i, j in edges:
            if i == j:
                raise LoopEdgeError(f"loop edge at {i}")
            if i not in vset or j not in vset:
                raise UndeclaredVertexError(f"edge ({i}, {j}) uses an undeclared vertex")
            succ[i].append(j)
            pred[j].append(i)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "_succ", {v: tuple(sorted(s, key=vertex_key)) for v, s in succ.items()})
        object.__setattr__(self, "_pred", {v: tuple(sorted(p, key=vertex_key)) for v, p in pred.items()})
        if self.provenance is not None:
            _check_provenance(self)

    def successors(self, v: Vertex) -> Tuple[Vertex, ...]:
        return self._succ[v]

    def predecessors(self, v: Vertex) -> Tuple[Vertex, ...]:
        return self._pred[v]

    def has_edge(self, i: Vertex, j: Vertex) -> bool:
        return (i, j) in self.edges


def _check_provenance(g: DiGraph) -> None:
    for v in g.vertices:
        tag = g.provenance.get(v)
        if tag not in ("original", "subdivision", "opposite"):
            raise GraphError(f"vertex {v!r} has invalid provenance {tag!r}")
        if tag == "subdivision" and (len(g.successors(v)) != 2 or g.predecessors(v)):
            raise GraphError(f"subdivision vertex {v!r} must have two out-edges and no in-edges")


GraphLike = Union[MixedGraph, DiGraph]


def as_digraph(g: GraphLike) -> DiGraph:
    """View a graph without bidirected edges as a :class:`DiGraph`."""
    if isinstance(g, DiGraph):
        return g
    if g.bidirected_edges:
        raise ValueError("graph has bidirected edges; apply bidirected_subdivision first")
    return g.directed_part


# -- parsing ---------------------------------------------------------------


def parse_graph(text: str) -> MixedGraph:
    """Parse the line-oriented graph format::

        node <id>
        dedge <i> <j>      # directed edge i -> j
        bedge <i> <j>      # bidirected edge i <-> j
    """
    vertices: list = []
    declared: set = set()
    directed: list = []
    seen_directed: set = set()
    bidirected: list = []
    seen_bidirected: set = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        verb, args = parts[0], parts[1:]
        try:
            ids = [int(a) for a in args]
        except ValueError:
            raise GraphSyntaxError(f"vertex ids must be integers: {line!r}", lineno) from None
        if any(v < 0 for v in ids):
            raise GraphSyntaxError(f"vertex ids must be nonnegative: {line!r}", lineno)
        if verb == "node":
            if len(ids) != 1:
                raise GraphSyntaxError("'node' takes exactly one id", lineno)
            if ids[0] in declared:
                raise GraphSyntaxError(f"node {ids[0]} declared twice", lineno)
            declared.add(ids[0])
            vertices.append(ids[0])
        elif verb in ("dedge", "bedge"):
            if len(ids) != 2:
                raise GraphSyntaxError(f"'{verb}' takes exactly two ids", lineno)
            i, j = ids
            if i == j:
                raise LoopEdgeError(f"loop edge at {i}", lineno)
            for v in (i, j):
                if v not in declared:
                    raise UndeclaredVertexError(f"vertex {v} is not declared", lineno)
            if verb == "dedge":
                if (i, j) in seen_directed:
                    raise DuplicateEdgeError(f"duplicate edge {i} -> {j}", lineno)
                seen_directed.add((i, j))
                directed.append((i, j))
            else:
                key = (min(i, j), max(i, j))
                if key in seen_bidirected:
                    raise DuplicateEdgeError(f"duplicate edge {i} <-> {j}", lineno)
                seen_bidirected.add(key)
                bidirected.append(key)
        else:
            raise GraphSyntaxError(f"unknown directive {verb!r}", lineno)
    return MixedGraph(tuple(vertices), frozenset(directed), frozenset(bidirected))


def format_graph(g: MixedGraph) -> str:
    """Render ``g`` in the format read by :func:`parse_graph`."""
    lines = [f"node {v}" for v in g.vertices]
    lines += [f"dedge {i} {j}" for i, j in sorted(g.directed_edges, key=edge_key)]
    lines += [f"bedge {i} {j}" for i, j in sorted(g.bidirected_edges, key=edge_key)]
    return "\n".join(lines) + "\n"


def graph_to_dict(g: GraphLike) -> dict:
    """Structured export of a graph."""
    if isinstance(g, MixedGraph):
        return {
            "vertices": list(g.vertices),
            "directed_edges": [list(e) for e in sorted(g.directed_edges, key=edge_key)],
            "bidirected_edges": [list(e) for e in sorted(g.bidirected_edges, key=edge_key)],
        }
    return {
        "vertices": [vertex_name(v) for v in g.vertices],
        "edges": [[vertex_name(i), vertex_name(j)] for i, j in sorted(g.edges, key=edge_key)],
    }


# -- constructions ---------------------------------------------------------


@lru_cache(maxsize=1024)
def bidirected_subdivision(g: MixedGraph) -> DiGraph:
    """Replace each ``i <-> j`` by a new source vertex ``(i, j)`` with edges
    ``(i, j) -> i`` and ``(i, j) -> j``."""
    vertices = list(g.vertices)
    edges = set(g.directed_edges)
    provenance = {v: "original" for v in g.vertices}
    for i, j in sorted(g.bidirected_edges, key=edge_key):
        s = (i, j)
        vertices.append(s)
        provenance[s] = "subdivision"
        edges.add((s, i))
        edges.add((s, j))
    return DiGraph(tuple(vertices), frozenset(edges), MappingProxyType(provenance))


def is_acyclic(g: GraphLike) -> bool:
    if isinstance(g, MixedGraph):
        g = g.directed_part
    ts = graphlib.TopologicalSorter({v: g.predecessors(v) for v in g.vertices})
    try:
        ts.prepare()
    except graphlib.CycleError:
        return False
    return True


def build_trek_graph(g: DiGraph) -> Tuple[DiGraph, Dict[Edge, VariableId]]:
    """Disjoint union of the opposite graph and ``g``, joined by ``v^opp -> v``.

    Returns the graph and the edge labelling: ``j^opp -> i^opp`` and ``i -> j``
    both carry ``lambda(i, j)``; ``v^opp -> v`` carries ``omega(v, v)``.
    """
    g = as_digraph(g)
    vertices = [Opp(v) for v in g.vertices] + list(g.vertices)
    labels: Dict[Edge, VariableId] = {}
    for i, j in g.edges:
        labels[(Opp(j), Opp(i))] = lambda_var(i, j)
        labels[(i, j)] = lambda_var(i, j)
    for v in g.vertices:
        labels[(Opp(v), v)] = omega_var(v, v)
    provenance = {Opp(v): "opposite" for v in g.vertices}
    provenance.update({v: "original" for v in g.vertices})
    return DiGraph(tuple(vertices), frozenset(labels), provenance), labels
