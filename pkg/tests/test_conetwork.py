import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import corpus_of, record
from wosideology.conetwork import (
    CoNetwork,
    build_network,
    louvain,
    modularity,
    network_degrees,
    network_from_weights,
)
from wosideology.corpus import apply_exclusions, FilterConfig


def net(edges, nodes=None):
    edges = tuple(sorted((min(u, v), max(u, v), w) for u, v, w in edges))
    if nodes is None:
        nodes = sorted({n for u, v, _ in edges for n in (u, v)})
    return CoNetwork("author", tuple(nodes), edges)


def q_oracle(network, assignment):
    """Modularity by the textbook double sum over node pairs."""
    nodes = list(network.nodes)
    index = {n: i for i, n in enumerate(nodes)}
    a = np.zeros((len(nodes), len(nodes)))
    for u, v, w in network.edges:
        a[index[u], index[v]] += w
        a[index[v], index[u]] += w
    k = a.sum(1)
    m2 = a.sum()
    if m2 == 0:
        return 0.0
    total = 0.0
    for i, u in enumerate(nodes):
        for j, v in enumerate(nodes):
            if assignment[u] == assignment[v]:
                total += a[i, j] - k[i] * k[j] / m2
    return total / m2


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def best_partitions(network):
    scored = []
    for part in set_partitions(list(network.nodes)):
        assignment = {n: c for c, block in enumerate(part) for n in block}
        scored.append((q_oracle(network, assignment), sorted(sorted(b) for b in part)))
    top = max(q for q, _ in scored)
    return top, [p for q, p in scored if abs(q - top) < 1e-12]


TWO_CLIQUES = [("a", "b", 1), ("a", "c", 1), ("b", "c", 1), ("d", "e", 1), ("d", "f", 1), ("e", "f", 1), ("c", "d", 1)]
K4 = [(u, v, 1) for u, v in itertools.combinations("abcd", 2)]


# {{{ construction

def test_build_network_thresholds():
    corpus = corpus_of(record(au=["A, A", "B, B"]), record(au=["A, A", "B, B"]), record(au=["A, A", "C, C"]),
                       record(au=["D, D"]))
    network = build_network(corpus, "author", 2)
    assert network.edges == (("a, A", "b, B", 2),)
    assert network.nodes == ("a, A", "b, B")
    assert set(network.pruned) == {"c, C", "d, D"}
    assert build_network(corpus, "author", 1).edges == (("a, A", "b, B", 2), ("a, A", "c, C", 1))


def test_single_author_has_no_edges():
    assert build_network(corpus_of(record(au=["A, A"])), "author", 1).edges == ()


def test_pair_counts_once_per_publication():
    corpus = corpus_of(record(au=["A, A", "B, B"], af=["A, Ann", "B, Bob"],
                              c1=["[A, Ann] Univ One, Paris, France", "[A, Ann] Univ Two, Paris, France",
                                  "[B, Bob] Univ Three, Rome, Italy"]))
    assert build_network(corpus, "country", 1).edges == (("France", "Italy", 1),)
    inst = build_network(corpus, "institution", 1)
    assert all(w == 1 for _, _, w in inst.edges) and len(inst.edges) == 3


def test_invalid_threshold():
    with pytest.raises(ValueError):
        network_from_weights("author", {}, 0)


def test_permuted_publications_same_edges():
    recs = [record(au=random.Random(i).sample(["A, A", "B, B", "C, C", "D, D", "E, E"], 3), ut=f"WOS:{i}")
            for i in range(30)]
    corpus = corpus_of(*recs)
    shuffled = list(corpus.publications)
    random.Random(1).shuffle(shuffled)
    other = apply_exclusions(shuffled, FilterConfig(min_citations=0))
    assert build_network(corpus, "author", 1) == build_network(other, "author", 1)


def test_degrees():
    network = net([("a", "b", 2), ("a", "c", 3)])
    assert network_degrees(network)["a"] == 5
    assert network_degrees(network, weighted=False)["a"] == 2
    star = net([("hub", x, 1) for x in "wxyz"])
    assert network_degrees(star)["hub"] == 4
    assert network_degrees(net([], nodes=["lonely"])) == {"lonely": 0}


@settings(max_examples=50)
@given(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6), st.integers(1, 5)), max_size=15))
def test_degree_sum(raw):
    weights = {}
    for u, v, w in raw:
        if u != v:
            weights[min(u, v), max(u, v)] = w
    network = network_from_weights("author", weights, 1)
    assert sum(network_degrees(network).values()) == 2 * network.total_weight
    assert all(u < v for u, v, _ in network.edges)


# }}}

# {{{ modularity

def test_modularity_disjoint_cliques():
    network = net([e for e in TWO_CLIQUES if e[:2] != ("c", "d")])
    assignment = {n: int(n in "def") for n in "abcdef"}
    assert modularity(network, assignment) == pytest.approx(0.5)
    assert q_oracle(network, assignment) == pytest.approx(0.5)


def test_modularity_k4_single_and_singletons():
    network = net(K4)
    assert modularity(network, dict.fromkeys("abcd", 0)) == pytest.approx(0.0, abs=1e-15)
    singletons = {n: i for i, n in enumerate("abcd")}
    assert modularity(network, singletons) == pytest.approx(-4 * (3 / 12) ** 2)


def test_modularity_zero_weight():
    assert modularity(net([], nodes=["a", "b"]), {"a": 0, "b": 1}) == 0.0


# }}}

# {{{ louvain

def test_two_cliques_exhaustive_optimum():
    network = net(TWO_CLIQUES)
    top, optima = best_partitions(network)
    assert optima == [[["a", "b", "c"], ["d", "e", "f"]]]
    part = louvain(network, seed=42)
    assert part.communities() == optima[0]
    assert part.modularity == pytest.approx(top, abs=1e-12)


def test_k4_single_community():
    network = net(K4)
    top, optima = best_partitions(network)
    assert top == pytest.approx(0.0, abs=1e-12) and optima == [[["a", "b", "c", "d"]]]
    part = louvain(network)
    assert set(part.assignment.values()) == {0}
    assert part.modularity == pytest.approx(0.0, abs=1e-12)


def test_edgeless_graph_singletons():
    part = louvain(net([], nodes=["a", "b", "c"]))
    assert sorted(part.assignment.values()) == [0, 1, 2]
    assert part.modularity == 0.0


def _random_weighted(seed, n=12, p=0.3):
    rng = np.random.default_rng(seed)
    edges = [(f"n{u:02d}", f"n{v:02d}", int(rng.integers(1, 4)))
             for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
    return net(edges)


@pytest.mark.parametrize("seed", range(15))
def test_louvain_contract_on_random_graphs(seed):
    network = _random_weighted(seed)
    if not network.edges:
        return
    part = louvain(network, seed=seed)
    assert set(part.assignment) == set(network.nodes)
    assert sorted(set(part.assignment.values())) == list(range(len(set(part.assignment.values()))))
    assert part.modularity == pytest.approx(q_oracle(network, part.assignment), abs=1e-9)
    singletons = {n: i for i, n in enumerate(network.nodes)}
    assert part.modularity >= q_oracle(network, singletons)
    assert -0.5 <= part.modularity <= 1
    assert louvain(network, seed=seed) == part


def test_louvain_weights_matter():
    # a heavy bridge pulls c and d together
    heavy = [("a", "b", 1), ("a", "c", 1), ("b", "c", 1), ("d", "e", 1), ("d", "f", 1), ("e", "f", 1), ("c", "d", 10)]
    part = louvain(net(heavy))
    assert part.assignment["c"] == part.assignment["d"]
    assert part.modularity == pytest.approx(best_partitions(net(heavy))[0], abs=1e-12)

# }}}
