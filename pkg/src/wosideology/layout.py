"""Kamada-Kawai stress layout for co-authorship networks.

Ideal distances are unweighted hop counts rescaled so their mean over the
component is 1.  Stress is ``sum_{u<v} (|p_u - p_v| - d_uv)^2 / d_uv^2``.
Each sweep moves every node once by a safeguarded Newton step on its own
stress term, so total stress never increases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .conetwork import CoNetwork


@dataclass
class Layout:
    positions: dict
    stress: float
    initial_stress: float = 0.0
    histories: list = field(default_factory=list)  # per component, stress after each sweep


def ideal_distances(n: int, edges) -> np.ndarray:
    """Hop-count distances of a connected graph scaled to unit mean."""
    if n == 1:
        return np.zeros((1, 1))
    rows = [u for u, v in edges] + [v for u, v in edges]
    cols = [v for u, v in edges] + [u for u, v in edges]
    graph = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    d = shortest_path(graph, unweighted=True, directed=False)
    return d / d[np.triu_indices(n, 1)].mean()


def stress(pos: np.ndarray, d: np.ndarray) -> float:
    n = len(pos)
    if n < 2:
        return 0.0
    iu = np.triu_indices(n, 1)
    diff = pos[:, None, :] - pos[None, :, :]
    dist = np.sqrt((diff ** 2).sum(-1))[iu]
    return float((((dist - d[iu]) / d[iu]) ** 2).sum())


def circular_init(n: int, rng) -> np.ndarray:
    """Points on a circle whose mean chord length is about 1, in shuffled order."""
    order = rng.permutation(n)
    angles = 2 * math.pi * order / n
    radius = math.pi / 4
    return radius * np.column_stack([np.cos(angles), np.sin(angles)])


def _node_stress(p, others, d_row):
    dist = np.sqrt(((p - others) ** 2).sum(-1))
    return float((((dist - d_row) / d_row) ** 2).sum())


def _node_step(p, others, d_row):
    delta = p - others
    dist = np.sqrt((delta ** 2).sum(-1))
    dist = np.maximum(dist, 1e-12)
    k = 1.0 / d_row ** 2
    grad = (2 * k * (1 - d_row / dist))[:, None] * delta
    grad = grad.sum(0)
    # Hessian of sum_k k (|p - q| - d)^2 in 2D
    coef = k * d_row / dist ** 3
    hxx = (2 * (k - coef * delta[:, 1] ** 2)).sum()
    hyy = (2 * (k - coef * delta[:, 0] ** 2)).sum()
    hxy = (2 * coef * delta[:, 0] * delta[:, 1]).sum()
    hess = np.array([[hxx, hxy], [hxy, hyy]])
    step = -grad
    if np.linalg.det(hess) > 1e-12 and hxx > 0:
        step = -np.linalg.solve(hess, grad)
    return step, grad


def _optimize(pos, d, tolerance, max_iter):
    n = len(pos)
    current = stress(pos, d)
    history = [current]
    idx = np.arange(n)
    for _ in range(max_iter):
        for m in range(n):
            mask = idx != m
            others, d_row = pos[mask], d[m, mask]
            before = _node_stress(pos[m], others, d_row)
            step, _ = _node_step(pos[m], others, d_row)
            for _ in range(40):
                trial = pos[m] + step
                if _node_stress(trial, others, d_row) < before:
                    pos[m] = trial
                    break
                step = step / 2
        new = stress(pos, d)
        history.append(new)
        if current == 0 or (current - new) / current < tolerance:
            current = new
            break
        current = new
    return pos, history


def _pack(blocks):
    """Place component layouts on a grid, padding each cell by its diameter."""
    cols = max(1, math.ceil(math.sqrt(len(blocks))))
    placed = []
    y = 0.0
    for r in range(0, len(blocks), cols):
        row = blocks[r:r + cols]
        x = 0.0
        row_height = 0.0
        for pos in row:
            lo, hi = pos.min(0), pos.max(0)
            diameter = max(float(np.linalg.norm(hi - lo)), 1.0)
            width, height = hi - lo
            cell = pos - lo + np.array([x + diameter / 2, y + diameter / 2])
            placed.append(cell)
            x += width + diameter
            row_height = max(row_height, height + diameter)
        y += row_height
    return placed


def kamada_kawai(network: CoNetwork, seed: int = 42, tolerance: float = 1e-7, max_iter: int = 500) -> Layout:
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    nodes = list(network.nodes)
    if not nodes:
        return Layout({}, 0.0)
    index = {n: i for i, n in enumerate(nodes)}
    pairs = [(index[u], index[v]) for u, v, _ in network.edges]
    graph = csr_matrix((np.ones(len(pairs)), ([u for u, _ in pairs], [v for _, v in pairs])),
                       shape=(len(nodes), len(nodes)))
    n_comp, labels = connected_components(graph, directed=False)
    rng = np.random.default_rng(seed)

    members = [list(np.flatnonzero(labels == c)) for c in range(n_comp)]
    members.sort(key=lambda m: (-len(m), m[0]))
    blocks, histories, initial, final = [], [], 0.0, 0.0
    for comp in members:
        local = {g: i for i, g in enumerate(comp)}
        sub_edges = [(local[u], local[v]) for u, v in pairs if u in local]
        d = ideal_distances(len(comp), sub_edges)
        if len(comp) == 1:
            pos, history = np.zeros((1, 2)), [0.0]
        else:
            pos = circular_init(len(comp), rng)
            pos, history = _optimize(pos, d, tolerance, max_iter)
        initial += history[0]
        final += history[-1]
        histories.append(history)
        blocks.append(pos - pos.mean(0))
    placed = _pack(blocks)
    positions = {}
    for comp, pos in zip(members, placed):
        for g, p in zip(comp, pos):
            positions[nodes[g]] = (float(p[0]), float(p[1]))
    return Layout(dict(sorted(positions.items())), final, initial, histories)


def layout_stress(network: CoNetwork, positions: dict) -> float:
    """Recompute total stress of ``positions`` (sum over components)."""
    nodes = list(network.nodes)
    index = {n: i for i, n in enumerate(nodes)}
    pairs = [(index[u], index[v]) for u, v, _ in network.edges]
    graph = csr_matrix((np.ones(len(pairs)), ([u for u, _ in pairs], [v for _, v in pairs])),
                       shape=(len(nodes), len(nodes)))
    n_comp, labels = connected_components(graph, directed=False)
    total = 0.0
    for c in range(n_comp):
        comp = list(np.flatnonzero(labels == c))
        local = {g: i for i, g in enumerate(comp)}
        sub_edges = [(local[u], local[v]) for u, v in pairs if u in local]
        d = ideal_distances(len(comp), sub_edges)
        pos = np.array([positions[nodes[g]] for g in comp])
        total += stress(pos, d)
    return total
