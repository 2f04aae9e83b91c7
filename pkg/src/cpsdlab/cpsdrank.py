"""Factorizations X_ij = Tr(P_i P_j) with Hermitian psd factors: verification,
size-preserving combinators, and lower bounds on the smallest achievable
factor size.

The smallest factor size itself is never "computed"; the honest output is a
BoundReport pairing certified lower bounds with an optional constructive
upper bound.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded
from .matcore import PSD_TOL, RANK_TOL, HermMatrix, gram_vectors, spectral

HADAMARD_ENTRY_CAP = 20


@dataclass(frozen=True, eq=False)
class CpsdFactorization:
    """Family of same-size Hermitian psd factors; psd is enforced at construction."""

    d: int
    factors: tuple[HermMatrix, ...]

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError("factor size must be at least 1")
        if not self.factors:
            raise ValueError("factorization needs at least one factor")
        for k, p in enumerate(self.factors):
            if p.n != self.d:
                raise ValueError(f"factor {k} has size {p.n}, expected {self.d}")
            if not spectral(p).is_psd:
                raise ValueError(f"factor {k} is not positive semidefinite")

    @property
    def n(self) -> int:
        return len(self.factors)

    def gram(self) -> np.ndarray:
        """The matrix Tr(P_i P_j) this family factorizes."""
        F = np.stack([p.entries for p in self.factors])
        g = np.einsum("auv,bvu->ab", F, F)
        return g.real


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    max_residual: float
    tol: float
    factors_psd: bool


@dataclass(frozen=True)
class BoundReport:
    """Certified bracket on the smallest factor size of a given matrix.

    Real-valued lower bounds are kept alongside their integer ceiling (the
    factor size is integral). ``upper``, when present, comes from an explicit
    verified factorization or construction named by ``upper_provenance``.
    Ceilings snap within 1e-9 of an integer downwards, so float noise on an
    exactly-integral bound cannot inflate the reported ceiling.
    """

    lower_analytic: float
    lower_rank: float
    lower_combined_int: int
    upper: int | None = None
    upper_provenance: str | None = None

    def __post_init__(self) -> None:
        if self.upper is not None and self.lower_combined_int > self.upper:
            raise ValueError(
                f"inconsistent report: ceiling lower bound {self.lower_combined_int} "
                f"exceeds upper bound {self.upper}"
            )


def ceil_snapped(value: float, snap: float = 1e-9) -> int:
    """Ceiling that forgives float noise just above an integer."""
    return int(math.ceil(value - snap))


def verify_factorization(X: np.ndarray, f: CpsdFactorization, tol: float = 1e-8) -> VerifyReport:
    """Check max_ij |X_ij - Tr(P_i P_j)| <= tol and that every factor is psd."""
    a = np.asarray(X, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("target matrix must be square")
    if a.shape[0] != f.n:
        raise ValueError(f"target size {a.shape[0]} does not match factor count {f.n}")
    residual = float(np.abs(a - f.gram()).max())
    psd_ok = all(spectral(p).is_psd for p in f.factors)
    return VerifyReport(ok=residual <= tol and psd_ok, max_residual=residual,
                        tol=tol, factors_psd=psd_ok)


def _check_nonnegative(X: np.ndarray) -> np.ndarray:
    a = np.asarray(X, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    if a.min() < 0:
        raise ValueError(f"matrix has a negative entry: {a.min():.3e}")
    return a


def analytic_lower_bound(X: np.ndarray) -> float:
    """(sum_i sqrt(X_ii))^2 / sum_ij X_ij, a trace-based lower bound on factor size.

    Never exceeds the matrix size. Requires entrywise nonnegative input with
    positive total sum.
    """
    a = _check_nonnegative(X)
    total = float(a.sum())
    if total <= 0:
        raise ValueError("matrix has zero total sum")
    return float(np.sqrt(np.diag(a)).sum() ** 2) / total


def scaled_analytic_bound(X: np.ndarray, iters: int = 100) -> float:
    """Best analytic bound over searched positive diagonal congruences D X D.

    Coordinate-wise multiplicative updates; each sweep fixes all but one scale
    and moves it to the stationary point of the one-variable bound. The result
    is never below the unscaled bound.
    """
    a = _check_nonnegative(X)
    if a.sum() <= 0:
        raise ValueError("matrix has zero total sum")
    n = a.shape[0]
    s = np.sqrt(np.diag(a))

    def bound(dvec: np.ndarray) -> float:
        num = float((dvec * s).sum()) ** 2
        den = float(dvec @ a @ dvec)
        return num / den if den > 0 else 0.0

    d = np.ones(n)
    best = bound(d)
    for _ in range(max(0, iters)):
        moved = False
        for k in range(n):
            if s[k] == 0.0:
                continue
            rest = d.copy()
            rest[k] = 0.0
            num_rest = float((rest * s).sum())
            cross = float(rest @ a[k])
            den_rest = float(rest @ a @ rest)
            # stationary point of ((num_rest + t s_k)^2)/(den_rest + 2 t cross + t^2 a_kk)
            denom = cross * s[k] - num_rest * a[k, k]
            if abs(denom) < 1e-300:
                continue
            t = (num_rest * cross - s[k] * den_rest) / denom
            if not np.isfinite(t) or t <= 0:
                continue
            cand = d.copy()
            cand[k] = t
            val = bound(cand)
            if val > best + 1e-15:
                d, best, moved = cand, val, True
        if not moved:
            break
    return max(best, analytic_lower_bound(a))


def rank_lower_bound(X: np.ndarray) -> float:
    """sqrt(rank X); valid because size-d Hermitian factors live in a d^2-dimensional space."""
    a = np.asarray(X, dtype=float)
    rep = spectral((a + a.T) / 2)
    if not rep.is_psd:
        raise ValueError("matrix is not positive semidefinite")
    return math.sqrt(rep.rank)


def scale(f: CpsdFactorization, diag: np.ndarray) -> CpsdFactorization:
    """Factorization of D X D for a positive diagonal D: P_i -> diag_i * P_i."""
    dvec = np.asarray(diag, dtype=float)
    if dvec.shape != (f.n,):
        raise ValueError(f"diagonal length {dvec.shape} does not match factor count {f.n}")
    if dvec.min() <= 0:
        raise ValueError("diagonal entries must be strictly positive")
    return CpsdFactorization(
        d=f.d, factors=tuple(HermMatrix(w * p.entries) for w, p in zip(dvec, f.factors)))


def permute(f: CpsdFactorization, perm) -> CpsdFactorization:
    """Factorization of P X P^T: reorder the factors by the permutation."""
    p = list(perm)
    if sorted(p) != list(range(f.n)):
        raise ValueError(f"not a permutation of 0..{f.n - 1}: {p}")
    return CpsdFactorization(d=f.d, factors=tuple(f.factors[i] for i in p))


def add(f: CpsdFactorization, g: CpsdFactorization) -> CpsdFactorization:
    """Factorization of X + Y via blockwise factors P_i (+) Q_i."""
    if f.n != g.n:
        raise ValueError(f"factor counts differ: {f.n} vs {g.n}")
    from .matcore import direct_sum

    return CpsdFactorization(
        d=f.d + g.d,
        factors=tuple(direct_sum(p, q) for p, q in zip(f.factors, g.factors)))


def dsum(f: CpsdFactorization, g: CpsdFactorization) -> CpsdFactorization:
    """Factorization of the block-diagonal X (+) Y; factor sizes and counts add."""
    from .matcore import direct_sum

    zero_g = HermMatrix(np.zeros((g.d, g.d)))
    zero_f = HermMatrix(np.zeros((f.d, f.d)))
    padded_f = [direct_sum(p, zero_g) for p in f.factors]
    padded_g = [direct_sum(zero_f, q) for q in g.factors]
    return CpsdFactorization(d=f.d + g.d, factors=tuple(padded_f + padded_g))


def conjugate(f: CpsdFactorization, U: np.ndarray) -> CpsdFactorization:
    """Factorization with every factor replaced by U* P U for a unitary U.

    Conjugation leaves every trace inner product, and hence the factorized
    matrix, unchanged.
    """
    u = np.asarray(U, dtype=complex)
    if u.shape != (f.d, f.d):
        raise ValueError(f"unitary must be {f.d} x {f.d}, got {u.shape}")
    if np.abs(u.conj().T @ u - np.eye(f.d)).max() > 1e-10:
        raise ValueError("matrix is not unitary")
    return CpsdFactorization(
        d=f.d, factors=tuple(HermMatrix(u.conj().T @ p.entries @ u) for p in f.factors))


def compress(f: CpsdFactorization, rank_tol: float = RANK_TOL) -> CpsdFactorization:
    """Equivalent factorization of size rank(sum_i P_i).

    Every factor's range sits inside the range of the factor sum, so
    restricting all factors to that subspace changes no inner products. The
    result never has larger factors, and for a size-optimal input it is a
    no-op.
    """
    total = np.sum([p.entries for p in f.factors], axis=0)
    w, Q = np.linalg.eigh((total + total.conj().T) / 2)
    keep = w > rank_tol * max(1.0, abs(float(w[-1])))
    basis = Q[:, keep]
    r = int(keep.sum())
    if r == 0:
        # all factors numerically zero
        return CpsdFactorization(
            d=1, factors=tuple(HermMatrix(np.zeros((1, 1))) for _ in f.factors))
    return CpsdFactorization(
        d=r,
        factors=tuple(HermMatrix(basis.conj().T @ p.entries @ basis) for p in f.factors))


def hadamard_sqrt_psd(X: np.ndarray, entry_cap: int = HADAMARD_ENTRY_CAP,
                      psd_tol: float = PSD_TOL):
    """Search for a psd Hadamard square root of a symmetric nonnegative matrix.

    Returns a symmetric sign pattern s (entries +-1, diagonal +1) such that
    s o sqrt(X) is psd, or None when no pattern works. Signs vary only on
    off-diagonal support entries (diagonal roots are forced nonnegative, and
    the sign of a zero entry is irrelevant); patterns are scanned in
    lexicographic order with +1 before -1, so the returned pattern is the
    lexicographically smallest valid one and the output is deterministic.
    """
    a = _check_nonnegative(X)
    if np.abs(a - a.T).max() > 1e-12:
        raise ValueError("matrix must be symmetric")
    n = a.shape[0]
    if n > 20:
        raise CapExceeded(f"matrix size {n} exceeds the Hadamard search cap 20")
    support = [(i, j) for i in range(n) for j in range(i + 1, n) if a[i, j] > 1e-10]
    if len(support) > entry_cap:
        raise CapExceeded(
            f"{len(support)} off-diagonal support entries exceed the cap {entry_cap}")
    root = np.sqrt(a)
    for signs in itertools.product((1, -1), repeat=len(support)):
        pattern = np.ones((n, n), dtype=int)
        cand = root.copy()
        for s, (i, j) in zip(signs, support):
            pattern[i, j] = pattern[j, i] = s
            cand[i, j] = cand[j, i] = s * root[i, j]
        if spectral(cand, psd_tol=psd_tol).is_psd:
            return pattern
    return None


def rank_one_factors(root: np.ndarray, rank_tol: float = RANK_TOL) -> CpsdFactorization:
    """Rank-one factorization of root o root from a symmetric psd root.

    Gram vectors g_i of the root give factors g_i g_i^T with
    Tr(P_i P_j) = <g_i, g_j>^2 = root_ij^2; the factor size is the numerical
    rank of the root.
    """
    V = gram_vectors(np.asarray(root, dtype=float), rank_tol=rank_tol)
    r = max(1, V.shape[1])
    factors = []
    for row in V:
        v = np.zeros(r)
        v[: V.shape[1]] = row
        factors.append(HermMatrix(np.outer(v, v)))
    return CpsdFactorization(d=r, factors=tuple(factors))


def support_bound_witness(G) -> tuple[CpsdFactorization, int]:
    """Constructive witness bounding the least factor size over matrices with support G.

    For a graph with at least one edge, shift the adjacency matrix by its
    least eigenvalue (multiplicity m) and project onto the spans of the Gram
    vectors of the shifted matrix: the resulting rank-one projectors P_u
    satisfy Tr(P_u P_v) = 0 exactly when u and v are non-adjacent, witnessing
    a factor size of n - m. The edgeless graph degenerates (the shifted matrix
    is zero), so it gets the diagonal witness {e_u e_u^T} of size n instead.
    Returns (factorization, bound).
    """
    from .separations import Graph  # local import: avoids a module cycle

    if not isinstance(G, Graph):
        raise TypeError("expected a Graph")
    n = G.n
    if not G.edges:
        eye = np.eye(n)
        factors = tuple(HermMatrix(np.outer(eye[u], eye[u])) for u in range(n))
        return CpsdFactorization(d=n, factors=factors), n
    A = G.adjacency()
    w = np.linalg.eigvalsh(A)
    tau = float(w[0])
    mult = int(np.count_nonzero(np.abs(w - tau) <= RANK_TOL * max(1.0, float(np.abs(w).max()))))
    shifted = A - tau * np.eye(n)
    V = gram_vectors(shifted)
    d = max(1, V.shape[1])
    factors = []
    for row in V:
        norm = float(np.linalg.norm(row))
        v = np.zeros(d)
        if norm > 0:
            v[: V.shape[1]] = row / norm
        factors.append(HermMatrix(np.outer(v, v)))
    return CpsdFactorization(d=d, factors=tuple(factors)), n - mult


def bound_report(X: np.ndarray, scale_search: bool = False, iters: int = 100,
                 upper: int | None = None,
                 upper_provenance: str | None = None) -> BoundReport:
    """Assemble the certified lower bounds (and optional upper bound) for X."""
    a = np.asarray(X, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or np.abs(a - a.T).max() > 1e-10:
        raise ValueError("bounds need a square symmetric matrix")
    analytic = scaled_analytic_bound(X, iters=iters) if scale_search else analytic_lower_bound(X)
    rank_b = rank_lower_bound(X)
    return BoundReport(
        lower_analytic=analytic,
        lower_rank=rank_b,
        lower_combined_int=ceil_snapped(max(analytic, rank_b)),
        upper=upper,
        upper_provenance=upper_provenance,
    )
