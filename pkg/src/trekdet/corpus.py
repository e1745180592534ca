"""Seeded random graph corpora for cross-checking expansions against the oracle."""

from __future__ import annotations

import itertools
import random
from typing import Iterator, List, Sequence, Tuple

from .graphs import MixedGraph, Vertex, is_acyclic

ACYCLIC_SEED = 20240601
CYCLIC_SEED = 20240602


def random_mixed_dag(
    rng: random.Random, n: int, p_directed: float = 0.4, p_bidirected: float = 0.2
) -> MixedGraph:
    vertices = list(range(1, n + 1))
    order = vertices[:]
    rng.shuffle(order)
    directed, bidirected = [], []
    for a, b in itertools.combinations(range(n), 2):
        if rng.random() < p_directed:
            directed.append((order[a], order[b]))
        if rng.random() < p_bidirected:
            i, j = sorted((order[a], order[b]))
            bidirected.append((i, j))
    return MixedGraph(tuple(vertices), frozenset(directed), frozenset(bidirected))


def random_cyclic_digraph(rng: random.Random, n: int, p: float = 0.35) -> MixedGraph:
    """Random digraph on ``n >= 2`` vertices with at least one directed cycle."""
    if n < 2:
        raise ValueError("a directed cycle needs two vertices")
    vertices = tuple(range(1, n + 1))
    while True:
        edges = frozenset((i, j) for i in vertices for j in vertices if i != j and rng.random() < p)
        g = MixedGraph(vertices, edges)
        if not is_acyclic(g):
            return g


def acyclic_corpus(count: int = 200, max_vertices: int = 6, seed: int = ACYCLIC_SEED) -> List[MixedGraph]:
    """DAGs with bidirected edges; vertex counts cycle through ``1..max_vertices``.

    Every fourth graph is forced to carry at least one bidirected edge so the
    corpus always exercises the subdivision.
    """
    rng = random.Random(seed)
    out = []
    for n_graph in range(count):
        n = 1 + n_graph % max_vertices
        while True:
            g = random_mixed_dag(rng, n)
            if n_graph % 4 != 0 or n < 2 or g.bidirected_edges:
                break
        out.append(g)
    return out


def cyclic_corpus(count: int = 100, max_vertices: int = 5, seed: int = CYCLIC_SEED) -> List[MixedGraph]:
    rng = random.Random(seed)
    return [random_cyclic_digraph(rng, 2 + n_graph % (max_vertices - 1)) for n_graph in range(count)]


def vertex_set_pairs(vertices: Sequence[Vertex], max_size: int) -> Iterator[Tuple[Tuple[Vertex, ...], Tuple[Vertex, ...]]]:
    """All pairs ``(A, B)`` of equal-size vertex subsets (sorted) up to ``max_size``."""
    for k in range(min(max_size, len(vertices)) + 1):
        subsets = list(itertools.combinations(vertices, k))
        for A in subsets:
            for B in subsets:
                yield A, B


def corpus_records(acyclic_max_k: int = 3, cyclic_max_k: int = 2) -> Iterator[dict]:
    """Structured determinant records for every corpus case, in a fixed order."""
    from .determinant import result_record
    from .graphs import graph_to_dict

    for name, graphs, max_k in (("acyclic", acyclic_corpus(), acyclic_max_k), ("cyclic", cyclic_corpus(), cyclic_max_k)):
        for n_graph, g in enumerate(graphs):
            for A, B in vertex_set_pairs(g.vertices, max_k):
                rec = result_record(g, A, B)
                rec.update(corpus=name, index=n_graph, graph=graph_to_dict(g), A=list(A), B=list(B))
                yield rec


def main(argv: Sequence[str] = None) -> None:
    import argparse
    import json
    import sys

    parser = argparse.ArgumentParser(description="Dump structured records for the seeded corpora as JSON lines.")
    parser.add_argument("--acyclic-max-k", type=int, default=3)
    parser.add_argument("--cyclic-max-k", type=int, default=2)
    args = parser.parse_args(argv)
    out = sys.stdout
    for rec in corpus_records(args.acyclic_max_k, args.cyclic_max_k):
        out.write(json.dumps(rec, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
