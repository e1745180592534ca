"""Self-avoiding flows and trek flows in directed graphs.

A self-avoiding flow from ``A`` to ``B`` is a family of vertex-disjoint
self-avoiding paths linking ``A`` to ``B`` together with vertex-disjoint
directed cycles avoiding those paths.  A trek flow pairs a flow from a set
of tops ``S`` into ``A`` with a flow from the same ``S`` into ``B``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from .graphs import (
    DiGraph,
    Edge,
    Opp,
    Vertex,
    VariableId,
    as_digraph,
    build_trek_graph,
    lambda_var,
    omega_var,
    vertex_key,
)
from .polynomial import Monomial, Polynomial, RationalExpr

Path = Tuple[Vertex, ...]
Cycle = Tuple[Vertex, ...]


def permutation_sign(perm: Sequence[int]) -> int:
    """Sign of the permutation ``i -> perm[i]`` of ``range(len(perm))``."""
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        v = start
        while not seen[v]:
            seen[v] = True
            v = perm[v]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def canonical_cycle(vertices: Sequence[Vertex]) -> Cycle:
    """Rotate a cycle (given in traversal order) to start at its least vertex."""
    vs = list(vertices)
    m = min(range(len(vs)), key=lambda i: vertex_key(vs[i]))
    return tuple(vs[m:] + vs[:m])


def _path_edges(p: Sequence[Vertex]) -> List[Edge]:
    return list(zip(p, p[1:]))


def _cycle_edges(c: Sequence[Vertex]) -> List[Edge]:
    return list(zip(c, c[1:] + c[:1]))


@dataclass(frozen=True)
class SelfAvoidingFlow:
    """Paths (vertex sequences, source first) and cycles (canonical rotation).

    Both are kept sorted so that equality has set semantics.
    """

    paths: Tuple[Path, ...]
    cycles: Tuple[Cycle, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "paths", tuple(sorted((tuple(p) for p in self.paths), key=_seq_key)))
        object.__setattr__(self, "cycles", tuple(sorted((canonical_cycle(c) for c in self.cycles), key=_seq_key)))

    @cached_property
    def sources(self) -> FrozenSet[Vertex]:
        return frozenset(p[0] for p in self.paths)

    @cached_property
    def sinks(self) -> FrozenSet[Vertex]:
        return frozenset(p[-1] for p in self.paths)

    @cached_property
    def path_map(self) -> Dict[Vertex, Vertex]:
        return {p[0]: p[-1] for p in self.paths}

    @cached_property
    def edge_list(self) -> Tuple[Edge, ...]:
        out: List[Edge] = []
        for p in self.paths:
            out.extend(_path_edges(p))
        for c in self.cycles:
            out.extend(_cycle_edges(c))
        return tuple(out)

    @cached_property
    def edges(self) -> FrozenSet[Edge]:
        return frozenset(self.edge_list)

    @cached_property
    def visited(self) -> FrozenSet[Vertex]:
        return frozenset(v for p in self.paths for v in p) | frozenset(v for c in self.cycles for v in c)

    @cached_property
    def in_edge(self) -> Dict[Vertex, Edge]:
        return {e[1]: e for e in self.edge_list}

    @cached_property
    def out_edge(self) -> Dict[Vertex, Edge]:
        return {e[0]: e for e in self.edge_list}

    def is_valid(self, g: DiGraph) -> bool:
        """Check edges exist and all disjointness conditions hold."""
        seen: set = set()
        for p in self.paths:
            if len(set(p)) != len(p) or seen & set(p):
                return False
            seen |= set(p)
        for c in self.cycles:
            if len(c) < 2 or len(set(c)) != len(c) or seen & set(c):
                return False
            seen |= set(c)
        return all(g.has_edge(*e) for e in self.edge_list)


def _seq_key(seq):
    return tuple(vertex_key(v) for v in seq)


def flow_sign(f: SelfAvoidingFlow, A: Sequence[Vertex], B: Sequence[Vertex]) -> int:
    """Sign of the induced bijection ``A -> B`` times ``(-1)^(number of cycles)``."""
    pos = {b: n for n, b in enumerate(B)}
    pm = f.path_map
    if len(pm) != len(A) or set(pm) != set(A) or set(pm.values()) != set(B):
        raise ValueError("flow does not connect A to B")
    sign = permutation_sign([pos[pm[a]] for a in A])
    return -sign if len(f.cycles) % 2 else sign


def flow_monomial(f: SelfAvoidingFlow, labels: Optional[Mapping[Edge, VariableId]] = None) -> Monomial:
    if labels is None:
        return Monomial([lambda_var(u, v) for u, v in f.edge_list])
    return Monomial([labels[e] for e in f.edge_list])


# -- enumeration -------------------------------------------------------------


@lru_cache(maxsize=256)
def simple_cycles(g: DiGraph) -> Tuple[Cycle, ...]:
    """All directed simple cycles of ``g`` in canonical form, sorted."""
    nxg = nx.DiGraph()
    nxg.add_nodes_from(range(len(g.vertices)))
    index = {v: n for n, v in enumerate(g.vertices)}
    nxg.add_edges_from((index[i], index[j]) for i, j in g.edges)
    cycles = [canonical_cycle([g.vertices[n] for n in c]) for c in nx.simple_cycles(nxg)]
    return tuple(sorted(cycles, key=_seq_key))


def _cycle_packings(cycles: Sequence[Cycle], blocked: FrozenSet[Vertex]) -> Iterator[Tuple[Cycle, ...]]:
    usable = [(c, frozenset(c)) for c in cycles if not blocked.intersection(c)]
    chosen: List[Cycle] = []

    def rec(start: int, used: FrozenSet[Vertex]):
        yield tuple(chosen)
        for n in range(start, len(usable)):
            c, cs = usable[n]
            if used.isdisjoint(cs):
                chosen.append(c)
                yield from rec(n + 1, used | cs)
                chosen.pop()

    yield from rec(0, frozenset())


def _check_sets(A: Sequence[Vertex], B: Sequence[Vertex], g: DiGraph) -> None:
    if len(A) != len(B):
        raise ValueError(f"|A| = {len(A)} differs from |B| = {len(B)}")
    for S in (A, B):
        if len(set(S)) != len(S):
            raise ValueError("vertex sets must not repeat vertices")
        for v in S:
            if v not in g._succ:
                raise ValueError(f"vertex {v!r} not in graph")


def _forward_path_systems(g: DiGraph, A: Sequence[Vertex], B: Sequence[Vertex]) -> Iterator[Tuple[Path, ...]]:
    sources, targets = frozenset(A), frozenset(B)
    used: set = set()
    paths: List[Path] = []

    def extend(idx: int):
        if idx == len(A):
            yield tuple(paths)
            return
        a = A[idx]
        if a in used:
            return
        yield from walk(idx, [a], {a})

    def walk(idx: int, path: List[Vertex], onpath: set):
        v = path[-1]
        if v in targets:
            p = tuple(path)
            paths.append(p)
            used.update(p)
            yield from extend(idx + 1)
            used.difference_update(p)
            paths.pop()
            return
        for w in g.successors(v):
            if w in used or w in onpath or w in sources:
                continue
            path.append(w)
            onpath.add(w)
            yield from walk(idx, path, onpath)
            onpath.discard(w)
            path.pop()

    yield from extend(0)


def enumerate_flows(g: DiGraph, A: Sequence[Vertex], B: Sequence[Vertex]) -> List[SelfAvoidingFlow]:
    """All self-avoiding flows from ``A`` to ``B``, in a deterministic order."""
    g = as_digraph(g)
    A, B = tuple(A), tuple(B)
    _check_sets(A, B, g)
    return list(_enumerate_flows(g, A, B))


@lru_cache(maxsize=1024)
def _enumerate_flows(g: DiGraph, A: Tuple[Vertex, ...], B: Tuple[Vertex, ...]) -> Tuple[SelfAvoidingFlow, ...]:
    cycles = simple_cycles(g)
    out = []
    for paths in _forward_path_systems(g, A, B):
        blocked = frozenset(v for p in paths for v in p)
        for cs in _cycle_packings(cycles, blocked):
            out.append(SelfAvoidingFlow(paths, cs))
    return tuple(out)


def _backward_path_systems(g: DiGraph, X: Sequence[Vertex]) -> Iterator[Tuple[Path, ...]]:
    """Vertex-disjoint path families ending at ``X`` from arbitrary tops."""
    ends = frozenset(X)
    used: set = set()
    paths: List[Path] = []

    def extend(idx: int):
        if idx == len(X):
            yield tuple(paths)
            return
        x = X[idx]
        yield from walk(idx, [x], {x})

    def walk(idx: int, rev: List[Vertex], onpath: set):
        p = tuple(reversed(rev))
        paths.append(p)
        used.update(p)
        yield from extend(idx + 1)
        used.difference_update(p)
        paths.pop()
        for w in g.predecessors(rev[-1]):
            if w in used or w in onpath or w in ends:
                continue
            rev.append(w)
            onpath.add(w)
            yield from walk(idx, rev, onpath)
            onpath.discard(w)
            rev.pop()

    yield from extend(0)


@lru_cache(maxsize=512)
def flows_into(g: DiGraph, X: Tuple[Vertex, ...]) -> Dict[FrozenSet[Vertex], Tuple[SelfAvoidingFlow, ...]]:
    """Self-avoiding flows into ``X`` grouped by their set of sources."""
    cycles = simple_cycles(g)
    grouped: Dict[FrozenSet[Vertex], List[SelfAvoidingFlow]] = {}
    for paths in _backward_path_systems(g, X):
        blocked = frozenset(v for p in paths for v in p)
        S = frozenset(p[0] for p in paths)
        bucket = grouped.setdefault(S, [])
        for cs in _cycle_packings(cycles, blocked):
            bucket.append(SelfAvoidingFlow(paths, cs))
    return {S: tuple(fs) for S, fs in grouped.items()}


# -- trek flows --------------------------------------------------------------


@dataclass(frozen=True)
class TrekFlow:
    """``left`` is a flow from the tops into ``A``, ``right`` one into ``B``."""

    left: SelfAvoidingFlow
    right: SelfAvoidingFlow

    def __post_init__(self):
        if self.left.sources != self.right.sources:
            raise ValueError("left and right flows must start at the same tops")

    @property
    def tops(self) -> FrozenSet[Vertex]:
        return self.left.sources

    def is_valid(self, g: DiGraph) -> bool:
        return self.left.is_valid(g) and self.right.is_valid(g)


def _sorted_tops(S) -> Tuple[Vertex, ...]:
    return tuple(sorted(S, key=vertex_key))


def enumerate_trek_flows(g: DiGraph, A: Sequence[Vertex], B: Sequence[Vertex]) -> List[TrekFlow]:
    """All self-avoiding trek flows from ``A`` to ``B``.

    Tops are visited in sorted order; for each set of tops, pairs of left and
    right flows in enumeration order.
    """
    return list(iter_trek_flows(g, A, B))


def iter_trek_flows(g: DiGraph, A: Sequence[Vertex], B: Sequence[Vertex]) -> Iterator[TrekFlow]:
    g = as_digraph(g)
    A, B = tuple(A), tuple(B)
    _check_sets(A, B, g)
    left, right = flows_into(g, A), flows_into(g, B)
    for S in sorted(left.keys() & right.keys(), key=lambda S: _seq_key(_sorted_tops(S))):
        for fl in left[S]:
            for fr in right[S]:
                yield TrekFlow(fl, fr)


def trek_flows_via_trek_graph(g: DiGraph, A: Sequence[Vertex], B: Sequence[Vertex]) -> List[TrekFlow]:
    """Trek flows obtained from self-avoiding flows in the trek graph from
    ``A^opp`` to ``B``, each translated back to a pair of flows in ``g``."""
    g = as_digraph(g)
    h, _ = build_trek_graph(g)
    out = []
    for f in enumerate_flows(h, [Opp(a) for a in A], list(B)):
        out.append(_split_trek_graph_flow(f))
    return out


def _split_trek_graph_flow(f: SelfAvoidingFlow) -> TrekFlow:
    left_paths, right_paths, left_cycles, right_cycles = [], [], [], []
    for p in f.paths:
        cut = next(n for n, v in enumerate(p) if not isinstance(v, Opp))
        # p = a^opp ... s^opp, s, ..., b
        left_paths.append(tuple(v.vertex for v in reversed(p[:cut])))
        right_paths.append(tuple(p[cut:]))
    for c in f.cycles:
        if isinstance(c[0], Opp):
            left_cycles.append(tuple(v.vertex for v in reversed(c)))
        else:
            right_cycles.append(c)
    return TrekFlow(SelfAvoidingFlow(left_paths, left_cycles), SelfAvoidingFlow(right_paths, right_cycles))


def trek_flow_sign(
    t: TrekFlow, A: Sequence[Vertex], B: Sequence[Vertex], tops_order: Optional[Sequence[Vertex]] = None
) -> int:
    """``sign(F_R) * sign(F_L)`` with one ordering of the tops for both."""
    S = tuple(tops_order) if tops_order is not None else _sorted_tops(t.tops)
    if set(S) != t.tops or len(S) != len(t.tops):
        raise ValueError("tops_order must list the tops exactly once")
    return flow_sign(t.left, S, A) * flow_sign(t.right, S, B)


def trek_flow_monomial(t: TrekFlow) -> Monomial:
    vars_ = [omega_var(s, s) for s in t.tops]
    vars_ += [lambda_var(u, v) for u, v in t.left.edge_list + t.right.edge_list]
    return Monomial(vars_)


@dataclass(frozen=True)
class UpDownCycleSet:
    cycles: FrozenSet[FrozenSet[Edge]] = field(default_factory=frozenset)

    def __len__(self) -> int:
        return len(self.cycles)

    def __iter__(self):
        return iter(sorted(self.cycles, key=lambda c: sorted(map(_seq_key, c))))


def up_down_successors(t: TrekFlow) -> Dict[Edge, Edge]:
    """Arrows of the digraph on edges used by exactly one side."""
    L, R = t.left, t.right
    arrow: Dict[Edge, Edge] = {}
    for e in L.edges - R.edges:
        y = e[1]
        if y in R.visited:
            f = R.in_edge.get(y)
        else:
            f = L.out_edge.get(y)
        if f is not None:
            arrow[e] = f
    for e in R.edges - L.edges:
        x = e[0]
        if x in L.visited:
            f = L.out_edge.get(x)
        else:
            f = R.in_edge.get(x)
        if f is not None:
            arrow[e] = f
    return arrow


def up_down_cycles(t: TrekFlow) -> UpDownCycleSet:
    """Supports of the directed cycles of the up-down digraph of ``t``."""
    arrow = up_down_successors(t)
    state: Dict[Edge, int] = {}
    found = []
    for start in arrow:
        if start in state:
            continue
        trail = []
        e = start
        while e is not None and e not in state:
            state[e] = 1
            trail.append(e)
            e = arrow.get(e)
        if e is not None and state[e] == 1:
            found.append(frozenset(trail[trail.index(e):]))
        for x in trail:
            state[x] = 2
    return UpDownCycleSet(frozenset(found))


# -- path matrices -------------------------------------------------------------


def path_matrix_det(
    g: DiGraph,
    A: Sequence[Vertex],
    B: Sequence[Vertex],
    labels: Optional[Mapping[Edge, VariableId]] = None,
) -> RationalExpr:
    """Determinant of the weighted path matrix from ``A`` to ``B`` as a ratio
    of signed flow sums; edge weights default to ``lambda(i, j)``."""
    g = as_digraph(g)
    num = _signed_flow_sum(enumerate_flows(g, A, B), A, B, labels)
    den = _signed_flow_sum(enumerate_flows(g, (), ()), (), (), labels)
    return RationalExpr(num, den)


def _signed_flow_sum(flows, A, B, labels) -> Polynomial:
    terms: Dict[Tuple[int, ...], int] = {}
    for f in flows:
        key = tuple(flow_monomial(f, labels))
        terms[key] = terms.get(key, 0) + flow_sign(f, A, B)
    return Polynomial(terms)


# -- sign of a pair (delta, upsilon) -----------------------------------------


def pair_sign(
    delta: Mapping[int, int],
    upsilon: Mapping[int, int],
    X: Optional[Sequence[int]] = None,
    Y: Optional[Sequence[int]] = None,
) -> int:
    """Sign of ``(delta, upsilon)`` on two copies of ``[k] = {1..k}``.

    ``delta`` is a permutation of ``[k]`` (arrows down from the first copy to
    the second) and ``upsilon`` a bijection ``[k]-Y -> [k]-X`` (arrows up).
    Following arrows from each ``x`` in ``X`` ends in ``Y`` and defines
    ``pi: X -> Y``; the sign is ``sign(pi) * (-1)^(number of cycles)``.
    ``X`` and ``Y`` are implied by ``upsilon`` and are checked if given.
    """
    k = len(delta)
    ks = set(range(1, k + 1))
    if set(delta) != ks or set(delta.values()) != ks:
        raise ValueError("delta must be a permutation of 1..k")
    if len(set(upsilon.values())) != len(upsilon) or not set(upsilon) <= ks or not set(upsilon.values()) <= ks:
        raise ValueError("upsilon must be injective into 1..k")
    X_ = sorted(ks - set(upsilon.values()))
    Y_ = sorted(ks - set(upsilon))
    if X is not None and sorted(X) != X_:
        raise ValueError("upsilon's image is not [k] - X")
    if Y is not None and sorted(Y) != Y_:
        raise ValueError("upsilon's domain is not [k] - Y")
    visited = set()
    pi = {}
    for x in X_:
        cur = x
        while True:
            visited.add(cur)
            down = delta[cur]
            if down in upsilon:
                cur = upsilon[down]
            else:
                pi[x] = down
                break
    cycles = 0
    for start in sorted(ks - visited):
        if start in visited:
            continue
        cur = start
        while cur not in visited:
            visited.add(cur)
            cur = upsilon[delta[cur]]
        cycles += 1
    perm = [Y_.index(pi[x]) for x in X_]
    sign = permutation_sign(perm)
    return -sign if cycles % 2 else sign
