"""
Random problem instances: Erdos-Renyi and pseudo Chung-Lu graphs (via
networkx) and Sherrington-Kirkpatrick coupling matrices.
"""
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import networkx as nx
import numpy as np

from superapp.apps.qaoa_limits.exceptions import InvalidParameterError
from superapp.apps.qaoa_limits.simulator import IsingHamiltonian

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GraphInstance:
    n: int
    edges: tuple
    labels: tuple = None

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise InvalidParameterError(f'Vertex count must be a positive integer, got {self.n}')
        edges = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise InvalidParameterError(f'Self-loop on vertex {u}')
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidParameterError(f'Edge ({u}, {v}) out of range for n={self.n}')
            edges.append((min(u, v), max(u, v)))
        if len(set(edges)) != len(edges):
            raise InvalidParameterError('Duplicate edges in graph instance')
        object.__setattr__(self, 'edges', tuple(sorted(edges)))
        if self.labels is not None:
            labels = tuple(int(label) for label in self.labels)
            if len(labels) != self.n or min(labels, default=0) < 0:
                raise InvalidParameterError(f'Need one non-negative label per vertex, got {len(labels)} for n={self.n}')
            object.__setattr__(self, 'labels', labels)

    @classmethod
    def from_networkx(cls, graph, labels=None):
        graph = nx.convert_node_labels_to_integers(graph, ordering='sorted')
        return cls(graph.number_of_nodes(), tuple(graph.edges()), labels)

    def to_networkx(self):
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges)
        if self.labels is not None:
            nx.set_node_attributes(graph, dict(enumerate(self.labels)), 'label')
        return graph

    def to_hamiltonian(self):
        return IsingHamiltonian.from_edges(self.n, self.edges)

    def degrees(self):
        counts = np.zeros(self.n, dtype=np.int64)
        for u, v in self.edges:
            counts[u] += 1
            counts[v] += 1
        return counts

    def as_dict(self):
        data = {'n': self.n, 'edges': [list(edge) for edge in self.edges]}
        if self.labels is not None:
            data['labels'] = list(self.labels)
        return data

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(int(data['n']), tuple(tuple(edge) for edge in data['edges']), data.get('labels'))
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidParameterError(f'Graph data needs "n" and "edges": {e}')


@dataclass(frozen=True)
class SKInstance:
    n: int
    couplings: np.ndarray

    def __post_init__(self):
        couplings = np.asarray(self.couplings, dtype=float)
        if couplings.shape != (self.n, self.n):
            raise InvalidParameterError(f'Coupling matrix must be {self.n}x{self.n}, got {couplings.shape}')
        if not np.array_equal(couplings, couplings.T) or np.any(np.diag(couplings) != 0):
            raise InvalidParameterError('SK couplings must be symmetric with zero diagonal')
        couplings.setflags(write=False)
        object.__setattr__(self, 'couplings', couplings)

    def to_hamiltonian(self):
        rows, cols = np.triu_indices(self.n, k=1)
        return IsingHamiltonian(
            self.n,
            tuple(((int(i), int(j)), float(self.couplings[i, j])) for i, j in zip(rows, cols)),
        )


def sample_er(n, d, seed=None):
    """
    Erdos-Renyi graph on n vertices with edge probability d / (n - 1).

    Args:
        n: vertex count, at least 2
        d: expected degree in [0, n - 1]
        seed: integer seed

    Returns:
        GraphInstance
    """
    if int(n) != n or n < 2:
        raise InvalidParameterError(f'ER graphs need an integer n >= 2, got {n}')
    if not math.isfinite(d) or not 0 <= d <= n - 1:
        raise InvalidParameterError(f'Expected degree must lie in [0, {n - 1}], got {d}')
    graph = nx.gnp_random_graph(int(n), d / (n - 1), seed=seed)
    return GraphInstance.from_networkx(graph)


def chung_lu_edge_probabilities(n, dist):
    degrees = np.asarray(dist.degrees)
    return np.outer(degrees, degrees) / ((n - 1) * dist.mean_degree)


def sample_chung_lu(n, dist, seed=None):
    """
    Pseudo Chung-Lu graph: i.i.d. labels with probabilities q_l, then
    independent edges with probability d_l d_l' / ((n - 1) mean_degree).
    """
    if int(n) != n or n < 2:
        raise InvalidParameterError(f'Chung-Lu graphs need an integer n >= 2, got {n}')
    n = int(n)
    minimum_n = 1 + dist.max_degree ** 2 / dist.mean_degree
    if n < minimum_n:
        raise InvalidParameterError(
            f'Chung-Lu ensemble {dist} needs n >= {minimum_n:.3f} so every edge probability is at most 1, got {n}'
        )
    probabilities = chung_lu_edge_probabilities(n, dist)
    if np.any(probabilities > 1):
        raise InvalidParameterError(f'Chung-Lu edge probability exceeds 1 for n={n}, dist={dist}')

    rng = np.random.default_rng(seed)
    labels = rng.choice(len(dist), size=n, p=dist.probabilities)
    present = [label for label in range(len(dist)) if np.any(labels == label)]
    nodelist = [int(v) for label in present for v in np.flatnonzero(labels == label)]
    graph = nx.stochastic_block_model(
        [int(np.sum(labels == label)) for label in present],
        probabilities[np.ix_(present, present)].tolist(),
        nodelist=nodelist,
        seed=int(rng.integers(2 ** 32)),
    )
    edges = tuple((int(u), int(v)) for u, v in graph.edges())
    return GraphInstance(n, edges, tuple(int(label) for label in labels))


def sample_sk(n, seed=None):
    if int(n) != n or n < 2:
        raise InvalidParameterError(f'SK instances need an integer n >= 2, got {n}')
    n = int(n)
    rng = np.random.default_rng(seed)
    upper = np.triu(rng.standard_normal((n, n)), k=1) / math.sqrt(n)
    return SKInstance(n, upper + upper.T)


def read_graph(path):
    """
    Load a graph from JSON ({n, edges, labels?}) or from a whitespace
    separated edge list; edge-list vertices are relabelled 0..n-1 in sorted order.
    """
    path = Path(path)
    try:
        if path.suffix.lower() == '.json':
            with open(path, 'r', encoding='utf-8') as f:
                return GraphInstance.from_dict(json.load(f))
        graph = nx.read_edgelist(path, nodetype=str, data=False, encoding='utf-8')
    except (OSError, json.JSONDecodeError) as e:
        raise InvalidParameterError(f'Cannot read graph from {path}: {e}')
    graph.remove_edges_from(nx.selfloop_edges(graph))
    logger.info(f'Read {graph.number_of_nodes()} vertices and {graph.number_of_edges()} edges from {path}')
    return GraphInstance.from_networkx(graph)


def write_graph(graph, path):
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(graph.as_dict(), f, indent=2, sort_keys=True)
        f.write('\n')
