"""Generators and certificate checkers for matrices separating the matrix
cones, plus the combinatorial test for graphs whose doubly nonnegative
matrices always factor through psd factors.

The certificates are finite lists of linear-algebraic conditions with
explicit residuals; a valid certificate is the machine-checkable part of the
separation argument, serialized with its residuals for audit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded
from .lorentz import GramLorentzFactorization, LorentzVector
from .matcore import spectral

GRAPH_CAP = 24


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    residual: float


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph on vertices 0..n-1; no loops, no duplicates."""

    n: int
    edges: frozenset

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("graph needs at least one vertex")
        norm = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge {e} out of range for n = {self.n}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        return cls(n=n, edges=frozenset(tuple(e) for e in edges))

    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.n, self.n))
        for u, v in self.edges:
            A[u, v] = A[v, u] = 1.0
        return A

    def neighbor_lists(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            out[u].append(v)
            out[v].append(u)
        return [sorted(x) for x in out]

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges


@dataclass(frozen=True, eq=False)
class NotCpCertificate:
    """Checked conditions placing a Gram matrix outside the completely
    positive cone: paired vectors with a common nonzero midpoint, orthogonal
    pairs, an odd subset summing to a multiple of the midpoint, and
    nonnegative pairwise inner products."""

    pairs: tuple
    center_c: np.ndarray
    odd_subset_J: tuple
    checks: dict
    tol: float

    @property
    def valid(self) -> bool:
        return all(c.ok for c in self.checks.values())


@dataclass(frozen=True, eq=False)
class NotVnaCertificate:
    """Checked conditions placing a doubly nonnegative matrix outside the
    closure of the cone of psd-factorizable matrices: two index sets spanning
    the full Gram space, each with a pivot orthogonal to the rest of its set,
    pivots non-parallel but not orthogonal to each other."""

    subset_I: tuple
    subset_J: tuple
    i_star: int
    j_star: int
    checks: dict
    tol: float

    @property
    def valid(self) -> bool:
        return all(c.ok for c in self.checks.values())


def check_not_cp(vectors, pairs, J, tol: float = 1e-9) -> NotCpCertificate:
    """Evaluate the four not-completely-positive conditions on a paired family.

    ``vectors`` is the whole family, ``pairs`` a perfect matching of its
    indices, and ``J`` an odd-size subset of indices whose vectors must sum to
    |J| times the common midpoint. An even |J| or a zero midpoint is a usage
    error and raises; condition failures only mark the certificate invalid.
    """
    V = np.atleast_2d(np.asarray(vectors, dtype=float))
    n = V.shape[0]
    pair_list = [(int(i), int(j)) for i, j in pairs]
    flat = [k for p in pair_list for k in p]
    if sorted(flat) != list(range(n)):
        raise ValueError("pairs must form a perfect matching of the vector indices")
    subset = tuple(int(j) for j in J)
    if len(subset) % 2 == 0:
        raise ValueError("the subset must have odd cardinality")
    if any(not 0 <= j < n for j in subset):
        raise ValueError("subset index out of range")

    mids = np.stack([(V[i] + V[j]) / 2.0 for i, j in pair_list])
    c = mids.mean(axis=0)
    if np.linalg.norm(c) <= tol:
        raise ValueError("common midpoint is zero; the certificate requires a nonzero center")

    res_mid = float(np.abs(mids - c).max())
    res_orth = float(max(abs(V[i] @ V[j]) for i, j in pair_list))
    res_sum = float(np.abs(V[list(subset)].sum(axis=0) - len(subset) * c).max())
    gram_full = V @ V.T
    res_nonneg = float(max(0.0, -gram_full.min()))

    checks = {
        "common_midpoint": CheckResult(res_mid <= tol, res_mid),
        "orthogonal_pairs": CheckResult(res_orth <= tol, res_orth),
        "odd_subset_sum": CheckResult(res_sum <= tol, res_sum),
        "nonnegative_inner_products": CheckResult(res_nonneg <= tol, res_nonneg),
    }
    return NotCpCertificate(pairs=tuple(pair_list), center_c=c, odd_subset_J=subset,
                            checks=checks, tol=tol)


def cycle_vectors(n: int) -> GramLorentzFactorization:
    """n = 2l (l odd, >= 3) unit-circle cone vectors (1, cos(2 pi k / n), sin(2 pi k / n)).

    Their Gram matrix is the circulant with entries 1 + cos(2 pi (k - k') / n);
    antipodal vectors pair up ((k, k + l)), and the even-indexed half sums to
    l times the cone axis, which is what `check_not_cp` certifies.
    """
    if n % 2 != 0:
        raise ValueError("n must be even")
    half = n // 2
    if half % 2 == 0 or half < 3:
        raise ValueError("n / 2 must be odd and at least 3")
    vecs = tuple(
        LorentzVector(1.0, np.array([math.cos(2 * math.pi * k / n),
                                     math.sin(2 * math.pi * k / n)]))
        for k in range(n))
    return GramLorentzFactorization(vectors=vecs)


def cycle_pairing(n: int) -> tuple[list[tuple[int, int]], list[int]]:
    """The antipodal pairing and the odd even-indexed subset for cycle_vectors(n)."""
    half = n // 2
    return [(k, k + half) for k in range(half)], list(range(0, n, 2))


def check_not_vna(X: np.ndarray, I, J, i_star: int, j_star: int,
                  tol: float = 1e-9) -> NotVnaCertificate:
    """Evaluate the five closure-separation conditions on a doubly nonnegative matrix.

    Span equality of the index sets is tested through ranks of principal
    submatrices (Gram ranks equal span dimensions), pivot orthogonality reads
    directly off the matrix entries, and non-parallelism of the pivots is the
    strict 2 x 2 determinant, i.e. strictness in Cauchy-Schwarz.
    """
    a = np.asarray(X, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    n = a.shape[0]
    if np.abs(a - a.T).max() > 1e-10:
        raise ValueError("matrix must be symmetric")
    if a.min() < -1e-12:
        raise ValueError("matrix must be entrywise nonnegative")
    rep = spectral((a + a.T) / 2)
    if not rep.is_psd:
        raise ValueError("matrix must be positive semidefinite")
    set_i = tuple(int(i) for i in I)
    set_j = tuple(int(j) for j in J)
    for idx in (*set_i, *set_j, i_star, j_star):
        if not 0 <= idx < n:
            raise ValueError(f"index {idx} out of range")
    if i_star not in set_i or j_star not in set_j:
        raise ValueError("pivots must belong to their index sets")

    rank_full = rep.rank
    rank_i = spectral(a[np.ix_(set_i, set_i)]).rank
    rank_j = spectral(a[np.ix_(set_j, set_j)]).rank
    span_defect = float((rank_full - rank_i) + (rank_full - rank_j))

    res_orth_i = float(max((abs(a[i_star, i]) for i in set_i if i != i_star), default=0.0))
    res_orth_j = float(max((abs(a[j_star, j]) for j in set_j if j != j_star), default=0.0))
    det2 = float(a[i_star, i_star] * a[j_star, j_star] - a[i_star, j_star] ** 2)
    cross = float(abs(a[i_star, j_star]))

    checks = {
        "spanning_subsets": CheckResult(span_defect == 0.0, span_defect),
        "pivot_i_orthogonal": CheckResult(res_orth_i <= tol, res_orth_i),
        "pivot_j_orthogonal": CheckResult(res_orth_j <= tol, res_orth_j),
        "pivots_not_parallel": CheckResult(det2 > tol, max(0.0, tol - det2)),
        "pivots_not_orthogonal": CheckResult(cross > tol, max(0.0, tol - cross)),
    }
    return NotVnaCertificate(subset_I=set_i, subset_J=set_j, i_star=int(i_star),
                             j_star=int(j_star), checks=checks, tol=tol)


def odd_cycle_dnn(t: int) -> np.ndarray:
    """Adjacency matrix of the (2t+1)-cycle shifted by its least eigenvalue.

    Doubly nonnegative, supported exactly on the cycle, with rank 2t - 1
    (the least eigenvalue has multiplicity two). For t >= 2 it passes
    `check_not_vna` with the index sets from `odd_cycle_index_sets`.
    """
    if t < 2:
        raise ValueError("t must be at least 2")
    n = 2 * t + 1
    A = np.zeros((n, n))
    for i in range(n):
        A[i, (i + 1) % n] = A[(i + 1) % n, i] = 1.0
    lam = float(np.linalg.eigvalsh(A)[0])
    return A - lam * np.eye(n)


def odd_cycle_index_sets(t: int) -> tuple[list[int], list[int], int, int]:
    """The certificate index sets for odd_cycle_dnn(t): drop the two
    neighbors of each pivot (0-indexed)."""
    n = 2 * t + 1
    set_i = [i for i in range(n) if i not in (1, n - 1)]
    set_j = [j for j in range(n) if j not in (0, 2)]
    return set_i, set_j, 0, 1


def support_graph(X: np.ndarray, tol: float = 1e-10) -> Graph:
    """Graph with an edge wherever an off-diagonal entry is nonzero (above tol)."""
    a = np.asarray(X, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    if np.abs(a - a.T).max() > 1e-10:
        raise ValueError("matrix must be symmetric")
    n = a.shape[0]
    edges = {(u, v) for u in range(n) for v in range(u + 1, n) if abs(a[u, v]) > tol}
    return Graph(n=n, edges=frozenset(edges))


def _two_color(adj: list[list[int]], comp: list[int]) -> bool:
    color = {comp[0]: 0}
    queue = [comp[0]]
    while queue:
        u = queue.pop()
        for v in adj[u]:
            if v not in color:
                color[v] = 1 - color[u]
                queue.append(v)
            elif color[v] == color[u]:
                return False
    return True


def _components(adj: list[list[int]], n: int) -> list[list[int]]:
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        stack, comp = [s], []
        seen[s] = True
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    stack.append(v)
        comps.append(sorted(comp))
    return comps


def _two_color_induced(adj: list[list[int]], verts: set[int]) -> bool:
    color: dict[int, int] = {}
    for s in sorted(verts):
        if s in color:
            continue
        color[s] = 0
        stack = [s]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in verts:
                    continue
                if v not in color:
                    color[v] = 1 - color[u]
                    stack.append(v)
                elif color[v] == color[u]:
                    return False
    return True


def _blocks(adj: list[list[int]], comp: list[int]) -> list[set[int]]:
    """Biconnected components (as vertex sets) of one connected component."""
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    blocks: list[set[int]] = []
    edge_stack: list[tuple[int, int]] = []
    timer = [0]

    def dfs(u: int, parent: int) -> None:
        disc[u] = low[u] = timer[0]
        timer[0] += 1
        for v in adj[u]:
            if v == parent:
                continue
            if v not in disc:
                edge_stack.append((u, v))
                dfs(v, u)
                low[u] = min(low[u], low[v])
                if low[v] >= disc[u]:
                    block = set()
                    while True:
                        e = edge_stack.pop()
                        block.update(e)
                        if e == (u, v):
                            break
                    blocks.append(block)
            elif disc[v] < disc[u]:
                edge_stack.append((u, v))
                low[u] = min(low[u], disc[v])

    dfs(comp[0], -1)
    return blocks


def _odd_cycle_in_block(adj: list[list[int]], block: set[int]):
    """First odd cycle of length >= 5 inside one block, exploring start
    vertices and neighbors in ascending order; None if there is none."""
    for start in sorted(block):
        path = [start]
        on_path = {start}

        def extend():
            u = path[-1]
            for v in adj[u]:
                if v not in block or v < start:
                    continue
                if v == start:
                    if len(path) >= 5 and len(path) % 2 == 1:
                        return list(path)
                    continue
                if v in on_path:
                    continue
                path.append(v)
                on_path.add(v)
                found = extend()
                if found is not None:
                    return found
                on_path.discard(v)
                path.pop()
            return None

        hit = extend()
        if hit is not None:
            return hit
    return None


def is_cpsd_graph(G: Graph, cap: int = GRAPH_CAP):
    """Whether every doubly nonnegative matrix supported on G factors through
    psd factors; equivalently, whether G has no odd cycle of length >= 5 as a
    subgraph.

    Returns (True, None) or (False, witness_cycle). Bipartite components and
    blocks are skipped outright (no odd cycles at all); the remaining search
    enumerates simple cycles per biconnected block with vertices explored in
    ascending order, so the witness is deterministic: the first odd cycle of
    length at least five found by that order. Worst-case exponential in the
    block size, hence the vertex cap.
    """
    if G.n > cap:
        raise CapExceeded(f"graph has {G.n} vertices, cap is {cap}")
    adj = G.neighbor_lists()
    for comp in _components(adj, G.n):
        if len(comp) < 5:
            continue
        if _two_color(adj, comp):
            continue
        for block in sorted(_blocks(adj, comp), key=sorted):
            if len(block) < 5:
                continue
            if _two_color_induced(adj, block):
                continue
            hit = _odd_cycle_in_block(adj, block)
            if hit is not None:
                return False, hit
    return True, None
