"""Treks, trek monomials, tailswapping and single-entry covariance expansions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .graphs import CyclicGraphError, MixedGraph, Vertex, is_acyclic, lambda_var, omega_var, vertex_key
from .polynomial import Monomial, Polynomial

Path = Tuple[Vertex, ...]


class TailswapError(ValueError):
    pass


@dataclass(frozen=True)
class Trek:
    """Pair of directed paths given as vertex sequences.

    ``left`` runs from the top ``s`` down to the initial vertex ``i`` and
    ``right`` from ``t`` down to the final vertex ``j``; an empty path is the
    1-tuple of its base vertex.
    """

    left: Path
    right: Path

    @property
    def top_left(self) -> Vertex:
        return self.left[0]

    @property
    def top_right(self) -> Vertex:
        return self.right[0]

    @property
    def initial(self) -> Vertex:
        return self.left[-1]

    @property
    def final(self) -> Vertex:
        return self.right[-1]

    @property
    def bridging(self) -> bool:
        return self.left[0] != self.right[0]

    @property
    def left_edges(self) -> Tuple[Tuple[Vertex, Vertex], ...]:
        return tuple(zip(self.left, self.left[1:]))

    @property
    def right_edges(self) -> Tuple[Tuple[Vertex, Vertex], ...]:
        return tuple(zip(self.right, self.right[1:]))

    @property
    def degree(self) -> int:
        return len(self.left) + len(self.right) - 2

    def sort_key(self):
        return (tuple(map(vertex_key, self.left)), tuple(map(vertex_key, self.right)))

    def is_valid(self, g: MixedGraph) -> bool:
        for u, v in self.left_edges + self.right_edges:
            if (u, v) not in g.directed_edges:
                return False
        return not self.bridging or g.has_bidirected(self.top_left, self.top_right)


@dataclass(frozen=True)
class TrekStats:
    i_count: int
    e_count: int


def _walks_into(g: MixedGraph, v: Vertex, max_len: int) -> List[Path]:
    """All walks with at most ``max_len`` edges that end at ``v``."""
    pred: Dict[Vertex, List[Vertex]] = {u: [] for u in g.vertices}
    for a, b in g.directed_edges:
        pred[b].append(a)
    out: List[Path] = []
    stack: List[Path] = [(v,)]
    while stack:
        walk = stack.pop()
        out.append(walk)
        if len(walk) - 1 < max_len:
            for u in pred[walk[0]]:
                stack.append((u,) + walk)
    return out


def _default_degree(g: MixedGraph, max_degree: Optional[int]) -> int:
    if max_degree is not None:
        if max_degree < 0:
            raise ValueError("max_degree must be nonnegative")
        return max_degree
    if not is_acyclic(g):
        raise CyclicGraphError("max_degree is required when the directed part has cycles")
    # each side of a trek in a DAG has at most |V| - 1 edges
    return 2 * max(len(g.vertices) - 1, 0)


def enumerate_treks(g: MixedGraph, i: Vertex, j: Vertex, max_degree: Optional[int] = None) -> List[Trek]:
    """All treks from ``i`` to ``j`` using at most ``max_degree`` directed edges.

    ``max_degree`` may be omitted for acyclic graphs, giving every trek.
    Treks are ordered lexicographically by left path, then right path.
    """
    for v in (i, j):
        if v not in g.vertices:
            raise ValueError(f"vertex {v!r} not in graph")
    d = _default_degree(g, max_degree)
    lefts = _walks_into(g, i, d)
    rights = _walks_into(g, j, d)
    treks = []
    for pl in lefts:
        s = pl[0]
        budget = d - (len(pl) - 1)
        for pr in rights:
            if len(pr) - 1 > budget:
                continue
            t = pr[0]
            if s == t or g.has_bidirected(s, t):
                treks.append(Trek(pl, pr))
    treks.sort(key=Trek.sort_key)
    return treks


def trek_monomial(t: Trek) -> Monomial:
    vars_ = [lambda_var(u, v) for u, v in t.left_edges + t.right_edges]
    vars_.append(omega_var(t.top_left, t.top_right))
    return Monomial(vars_)


def trek_stats(t: Trek) -> TrekStats:
    i_count = sum(
        1
        for k, a in enumerate(t.left)
        for l, b in enumerate(t.right)
        if a == b and (k, l) != (0, 0)
    )
    e_count = len(set(t.left_edges) & set(t.right_edges))
    return TrekStats(i_count, e_count)


def tailswap(t: Trek, k: int, l: int) -> Trek:
    """Exchange the parts of both paths above the shared vertex
    ``t.left[k] == t.right[l]``."""
    if not (0 <= k < len(t.left) and 0 <= l < len(t.right)):
        raise TailswapError(f"position ({k}, {l}) out of range")
    if t.left[k] != t.right[l]:
        raise TailswapError(f"left[{k}]={t.left[k]!r} differs from right[{l}]={t.right[l]!r}")
    return Trek(t.right[: l + 1] + t.left[k + 1 :], t.left[: k + 1] + t.right[l + 1 :])


def tailswap_class(t: Trek) -> List[Trek]:
    """Every trek reachable from ``t`` by repeated tailswapping, sorted."""
    seen = {t}
    frontier = [t]
    while frontier:
        cur = frontier.pop()
        for k, a in enumerate(cur.left):
            for l, b in enumerate(cur.right):
                if a == b:
                    nxt = tailswap(cur, k, l)
                    if nxt not in seen:
                        seen.add(nxt)
                        frontier.append(nxt)
    return sorted(seen, key=Trek.sort_key)


def sigma_entry_truncated(g: MixedGraph, i: Vertex, j: Vertex, max_degree: Optional[int] = None) -> Polynomial:
    """Sum of trek monomials over the treks of :func:`enumerate_treks`."""
    terms: Dict[Tuple[int, ...], int] = {}
    for t in enumerate_treks(g, i, j, max_degree):
        key = tuple(trek_monomial(t))
        terms[key] = terms.get(key, 0) + 1
    return Polynomial(terms)


def sigma_entry_collapsed(g: MixedGraph, i: Vertex, j: Vertex) -> List[Tuple[Trek, int]]:
    """One representative per tailswap class with coefficient ``2^(i(T)-e(T))``.

    Classes are formed by tailswap orbits; the coefficient comes from the
    statistics of the representative alone.
    """
    if not is_acyclic(g):
        raise CyclicGraphError("collapsed expansion requires an acyclic directed part")
    remaining = enumerate_treks(g, i, j)
    done = set()
    out = []
    for t in remaining:
        if t in done:
            continue
        done.update(tailswap_class(t))
        st = trek_stats(t)
        out.append((t, 2 ** (st.i_count - st.e_count)))
    return out


def collapsed_polynomial(classes: List[Tuple[Trek, int]]) -> Polynomial:
    p = Polynomial()
    for t, c in classes:
        p = p + Polynomial.from_monomial(trek_monomial(t), c)
    return p
