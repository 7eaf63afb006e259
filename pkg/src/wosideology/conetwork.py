"""Weighted co-authorship networks and Louvain community detection."""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass

import numpy as np

from .corpus import Corpus
from .diagnostics import INFO, emit

MIN_GAIN = 1e-7


@dataclass(frozen=True)
class CoNetwork:
    level: str
    nodes: tuple
    edges: tuple  # ((u, v, weight), ...) with u < v
    pruned: tuple = ()  # entities dropped for lacking a surviving edge

    def adjacency(self) -> np.ndarray:
        index = {n: i for i, n in enumerate(self.nodes)}
        a = np.zeros((len(self.nodes), len(self.nodes)))
        for u, v, w in self.edges:
            a[index[u], index[v]] = a[index[v], index[u]] = w
        return a

    def neighbors(self) -> dict:
        adj = {n: {} for n in self.nodes}
        for u, v, w in self.edges:
            adj[u][v] = w
            adj[v][u] = w
        return adj

    @property
    def total_weight(self) -> int:
        return sum(w for _, _, w in self.edges)


@dataclass(frozen=True)
class Partition:
    assignment: dict
    modularity: float

    def communities(self) -> list[list]:
        groups = defaultdict(list)
        for node, c in self.assignment.items():
            groups[c].append(node)
        return [sorted(groups[c]) for c in sorted(groups)]


def pair_weights(corpus: Corpus, level: str) -> Counter:
    """Co-occurrence counts; a pair gains at most 1 per publication."""
    weights = Counter()
    for pub in corpus.publications:
        entities = sorted(set(corpus.publication_entities(pub, level)))
        for u, v in itertools.combinations(entities, 2):
            weights[u, v] += 1
    return weights


def network_from_weights(level: str, weights, min_edge_weight: int = 2, entities=(), diagnostics=None) -> CoNetwork:
    if min_edge_weight < 1:
        raise ValueError("min_edge_weight must be >= 1")
    edges = sorted((u, v, w) for (u, v), w in weights.items() if w >= min_edge_weight)
    nodes = sorted({n for u, v, _ in edges for n in (u, v)})
    seen = set(entities) | {n for pair in weights for n in pair}
    pruned = tuple(sorted(seen - set(nodes)))
    if pruned:
        emit(diagnostics, INFO, f"network:{level}",
             f"{len(pruned)} entities without an edge of weight >= {min_edge_weight} not plotted")
    return CoNetwork(level, tuple(nodes), tuple(edges), pruned)


def build_network(corpus: Corpus, level: str, min_edge_weight: int = 2, diagnostics=None) -> CoNetwork:
    entities = {e for pub in corpus.publications for e in corpus.publication_entities(pub, level)}
    return network_from_weights(level, pair_weights(corpus, level), min_edge_weight, entities, diagnostics)


def network_degrees(network: CoNetwork, weighted: bool = True) -> dict:
    """Total collaboration links per node (sum of incident weights)."""
    degrees = {n: 0 for n in network.nodes}
    for u, v, w in network.edges:
        step = w if weighted else 1
        degrees[u] += step
        degrees[v] += step
    return degrees


def modularity(network: CoNetwork, assignment: dict, resolution: float = 1.0) -> float:
    """Newman modularity of ``assignment`` on the weighted network."""
    m = network.total_weight
    if m == 0:
        return 0.0
    internal = defaultdict(float)
    degree_sum = defaultdict(float)
    for u, v, w in network.edges:
        degree_sum[assignment[u]] += w
        degree_sum[assignment[v]] += w
        if assignment[u] == assignment[v]:
            internal[assignment[u]] += w
    return sum(internal[c] / m - resolution * (degree_sum[c] / (2 * m)) ** 2 for c in degree_sum)


def _one_level(adj, degree, m2, order, resolution):
    """Local-moving phase on an aggregated graph; returns node -> community."""
    community = list(range(len(adj)))
    tot = list(degree)
    moved_any = False
    improved = True
    while improved:
        improved = False
        for i in order:
            ci = community[i]
            ki = degree[i]
            links = defaultdict(float)
            for j, w in adj[i].items():
                if j != i:
                    links[community[j]] += w
            tot[ci] -= ki
            best, best_gain = ci, links.get(ci, 0.0) - resolution * tot[ci] * ki / m2
            for c, w_ic in links.items():
                gain = w_ic - resolution * tot[c] * ki / m2
                if gain > best_gain + 1e-12:
                    best, best_gain = c, gain
            tot[best] += ki
            if best != ci:
                community[i] = best
                improved = moved_any = True
    return community, moved_any


def louvain(network: CoNetwork, seed: int = 42, resolution: float = 1.0) -> Partition:
    """Two-phase greedy modularity optimization.

    Node visit order at every level is a shuffle drawn from ``seed``;
    the same (network, seed) always yields the same partition.
    """
    nodes = list(network.nodes)
    if network.total_weight == 0:
        return Partition({n: i for i, n in enumerate(nodes)}, 0.0)

    rng = np.random.default_rng(seed)
    index = {n: i for i, n in enumerate(nodes)}
    adj = [defaultdict(float) for _ in nodes]
    for u, v, w in network.edges:
        adj[index[u]][index[v]] += w
        adj[index[v]][index[u]] += w
    membership = list(range(len(nodes)))  # original node -> current super-node
    m2 = 2.0 * network.total_weight
    q = modularity(network, dict(zip(nodes, membership)), resolution)

    while True:
        # self-loops carry twice the internal weight so degree = row sum
        degree = [sum(row.values()) for row in adj]
        order = [int(i) for i in rng.permutation(len(adj))]
        community, moved = _one_level(adj, degree, m2, order, resolution)
        if not moved:
            break
        labels = {c: k for k, c in enumerate(dict.fromkeys(community))}
        candidate = [labels[community[s]] for s in membership]
        new_q = modularity(network, dict(zip(nodes, candidate)), resolution)
        if new_q - q < MIN_GAIN:
            break
        membership, q = candidate, new_q
        new_adj = [defaultdict(float) for _ in labels]
        for i, row in enumerate(adj):
            ci = labels[community[i]]
            for j, w in row.items():
                new_adj[ci][labels[community[j]]] += w
        adj = new_adj

    # dense ids in order of first appearance along the sorted node list
    dense = {c: k for k, c in enumerate(dict.fromkeys(membership))}
    assignment = {n: dense[c] for n, c in zip(nodes, membership)}
    return Partition(assignment, modularity(network, assignment, resolution))
