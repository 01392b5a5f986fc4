"""Small directed-graph helpers for vertex shifts given by 0/1 adjacency matrices."""
from __future__ import annotations

from collections import deque

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components


def essential_states(A) -> frozenset:
    """States lying on some bi-infinite path: repeatedly drop sources and sinks."""
    A = np.asarray(A, dtype=bool)
    alive = np.ones(A.shape[0], dtype=bool)
    while True:
        sub = A & alive[:, None] & alive[None, :]
        keep = alive & sub.any(axis=1) & sub.any(axis=0)
        if (keep == alive).all():
            return frozenset(int(i) for i in np.flatnonzero(alive))
        alive = keep


def strong_components(A) -> tuple[int, np.ndarray]:
    n, labels = connected_components(csr_matrix(np.asarray(A, dtype=np.int8)), directed=True,
                                     connection="strong")
    return n, labels


def is_strongly_connected(A) -> bool:
    A = np.asarray(A, dtype=bool)
    return A.shape[0] > 0 and strong_components(A)[0] == 1


def shortest_path(A, a: int, b: int, allowed=None) -> list:
    """Vertex list of a shortest path a -> ... -> b with at least one edge."""
    A = np.asarray(A, dtype=bool)
    n = A.shape[0]
    ok = set(range(n)) if allowed is None else set(allowed)
    prev = {}
    q = deque()
    for c in np.flatnonzero(A[a]):
        c = int(c)
        if c in ok and c not in prev:
            prev[c] = a
            q.append(c)
    while q:
        u = q.popleft()
        if u == b:
            path = [b]
            while True:
                path.append(prev[path[-1]])
                if path[-1] == a:
                    return path[::-1]
        for c in np.flatnonzero(A[u]):
            c = int(c)
            if c in ok and c not in prev:
                prev[c] = u
                q.append(c)
    raise ValueError(f"no path from {a} to {b}")


def shortest_cycle_through(A, s: int, allowed=None) -> list:
    """States of a shortest cycle starting at s (s listed once)."""
    return shortest_path(A, s, s, allowed)[:-1]


def simple_cycles(A, allowed=None, max_len: int = 8) -> list:
    """Simple cycles up to ``max_len``, each listed from its smallest state."""
    A = np.asarray(A, dtype=bool)
    ok = sorted(range(A.shape[0]) if allowed is None else allowed)
    out = []
    for s in ok:
        stack = [(s, [s])]
        while stack:
            u, path = stack.pop()
            for c in np.flatnonzero(A[u]):
                c = int(c)
                if c == s:
                    out.append(tuple(path))
                elif c > s and c in ok and c not in path and len(path) < max_len:
                    stack.append((c, path + [c]))
    return sorted(set(out), key=lambda c: (len(c), c))
