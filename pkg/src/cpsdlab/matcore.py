"""Dense Hermitian matrix kernel.

Everything downstream (cone embeddings, factorizations, behaviors) is built
on a small set of exact-arithmetic-free primitives: validated Hermitian
carriers, spectral classification with explicit tolerances, Gram/Kronecker/
direct-sum algebra, and the complex-to-real embedding that identifies a
Hermitian matrix with a real symmetric one of twice the size.

All operations are pure functions on immutable values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERM_TOL = 1e-12
RANK_TOL = 1e-8
PSD_TOL = 1e-9


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class HermMatrix:
    """Square complex Hermitian matrix.

    Input with asymmetry at most ``HERM_TOL`` (entrywise, absolute) is
    symmetrized to (X + X*)/2, which absorbs float round-off without masking
    genuinely non-Hermitian data; larger asymmetry raises. The diagonal is
    exactly real after symmetrization.
    """

    entries: np.ndarray

    def __post_init__(self) -> None:
        a = np.array(self.entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        if a.shape[0] == 0:
            raise ValueError("empty matrix")
        asym = np.abs(a - a.conj().T).max()
        if asym > HERM_TOL:
            raise ValueError(f"matrix is not Hermitian: asymmetry {asym:.3e} > {HERM_TOL:.0e}")
        object.__setattr__(self, "entries", _freeze((a + a.conj().T) / 2))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def is_real(self, tol: float = HERM_TOL) -> bool:
        return bool(np.abs(self.entries.imag).max() <= tol)


@dataclass(frozen=True)
class SpectralReport:
    """Eigenvalue summary of a Hermitian matrix.

    ``rank`` counts eigenvalues strictly above ``rank_tol * max(1, |lambda_max|)``
    and ``is_psd`` holds iff the least eigenvalue is at least
    ``-psd_tol * max(1, |lambda_max|)``. The absolute thresholds actually
    applied are recorded so a report is auditable on its own.
    """

    eigenvalues: np.ndarray
    rank: int
    is_psd: bool
    tolerance_used: float
    psd_tolerance_used: float

    @property
    def min(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def max(self) -> float:
        return float(self.eigenvalues[-1])


def _as_herm_array(X: HermMatrix | np.ndarray) -> np.ndarray:
    if isinstance(X, HermMatrix):
        return X.entries
    return HermMatrix(np.asarray(X)).entries


def gram(vectors) -> HermMatrix:
    """Gram matrix of equal-length vectors, conjugate-linear in the first slot."""
    if len(vectors) == 0:
        raise ValueError("gram of an empty family")
    lengths = {len(v) for v in vectors}
    if len(lengths) != 1:
        raise ValueError(f"ragged vector lengths: {sorted(lengths)}")
    V = np.array(vectors, dtype=complex)
    return HermMatrix(V.conj() @ V.T)


def spectral(X: HermMatrix | np.ndarray, rank_tol: float = RANK_TOL,
             psd_tol: float = PSD_TOL) -> SpectralReport:
    """Eigenvalues (ascending), numerical rank and psd flag of a Hermitian matrix."""
    if rank_tol <= 0 or psd_tol <= 0:
        raise ValueError("tolerances must be positive")
    a = _as_herm_array(X)
    try:
        w = np.linalg.eigvalsh(a)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(f"eigensolver failed to converge: {exc}") from exc
    scale = max(1.0, abs(float(w[-1])))
    rank_cut = rank_tol * scale
    psd_cut = psd_tol * scale
    return SpectralReport(
        eigenvalues=_freeze(w),
        rank=int(np.count_nonzero(w > rank_cut)),
        is_psd=bool(w[0] >= -psd_cut),
        tolerance_used=rank_cut,
        psd_tolerance_used=psd_cut,
    )


def kron(A: HermMatrix, B: HermMatrix) -> HermMatrix:
    """Kronecker product; preserves Hermiticity and positive semidefiniteness."""
    return HermMatrix(np.kron(A.entries, B.entries))


def direct_sum(A: HermMatrix, B: HermMatrix) -> HermMatrix:
    """Block-diagonal stacking of two Hermitian matrices."""
    n, m = A.n, B.n
    out = np.zeros((n + m, n + m), dtype=complex)
    out[:n, :n] = A.entries
    out[n:, n:] = B.entries
    return HermMatrix(out)


def trace_inner(A: HermMatrix, B: HermMatrix) -> float:
    """Hilbert-Schmidt inner product Tr(A B*) of two same-size Hermitian matrices."""
    if A.n != B.n:
        raise ValueError(f"size mismatch: {A.n} vs {B.n}")
    val = complex(np.tensordot(A.entries, B.entries.conj().T, axes=([0, 1], [1, 0])))
    if abs(val.imag) > 1e-10:
        raise ValueError(f"inner product has nonreal value {val}")
    return float(val.real)


def real_embed(X: HermMatrix) -> np.ndarray:
    """Isometric embedding of a Hermitian n x n matrix as a real symmetric 2n x 2n one.

    Maps X to (1/sqrt(2)) [[Re X, -Im X], [Im X, Re X]]; positive
    semidefiniteness is preserved in both directions and Hilbert-Schmidt inner
    products are preserved exactly.
    """
    re, im = X.entries.real, X.entries.imag
    return np.block([[re, -im], [im, re]]) / np.sqrt(2.0)


def gram_vectors(X: np.ndarray, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Rows are vectors in R^r whose Gram matrix reproduces the real psd matrix X.

    r is the numerical rank of X; eigenvalues at or below the rank cut are
    truncated, so the reconstruction error is bounded by the cut.
    """
    a = np.asarray(X, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    w, Q = np.linalg.eigh((a + a.T) / 2)
    scale = max(1.0, float(np.abs(w).max()) if w.size else 1.0)
    keep = w > rank_tol * scale
    if w.size and w[0] < -PSD_TOL * scale:
        raise ValueError(f"matrix is not psd: min eigenvalue {w[0]:.3e}")
    return Q[:, keep] * np.sqrt(w[keep])
