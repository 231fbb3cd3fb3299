"""Dominant eigenvalues of dense symmetric nonnegative matrices by power iteration.

The iteration runs on ``M + sigma*I`` with ``sigma = ||M||_inf / 4`` so that a
bipartite spectrum (``-rho`` also an eigenvalue) cannot stall it, starts from
the all-ones vector, and stops only when both the Rayleigh quotient has
settled and the residual ``||Mx - rho x||_inf <= tol * ||M||_inf`` holds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError, ConvergenceError, DisconnectedGraphError
from .graph import Graph, adjacency_matrix, all_pairs_distances, components

__all__ = [
    "SpectralResult",
    "dominant_eigenvalue",
    "dominant_eigenvalue_batch",
    "distance_spectral_radius",
    "adjacency_spectral_radius",
    "DEFAULT_TOL",
    "DEFAULT_MAX_ITER",
]

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 1_000_000


@dataclass(frozen=True)
class SpectralResult:
    value: float
    method: str
    residual: float
    iterations: int
    eigvec: np.ndarray | None = None

    def to_dict(self) -> dict:
        return {"value": self.value, "method": self.method,
                "residual": self.residual, "iterations": self.iterations}


def _check_matrix(m):
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ContractError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.array_equal(m, m.T):
        raise ContractError("matrix is not symmetric")
    if (m < 0).any():
        raise ContractError("matrix has a negative entry")
    return m


def dominant_eigenvalue(m, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> SpectralResult:
    """Largest eigenvalue of a symmetric nonnegative matrix.

    The returned eigenvector has unit 2-norm and is entrywise positive when
    ``m`` is irreducible.  ``residual`` is ``||Mx - rho x||_inf``.
    """
    if tol <= 0:
        raise ContractError("tol must be positive")
    m = _check_matrix(m)
    n = m.shape[0]
    norm = float(np.abs(m).sum(axis=1).max())
    x = np.full(n, 1.0 / np.sqrt(n))
    if norm == 0.0:
        return SpectralResult(0.0, "eigensolver", 0.0, 0, x)
    sigma = norm / 4.0
    rho = float(x @ m @ x)
    for it in range(1, max_iter + 1):
        y = m @ x + sigma * x
        x = y / np.linalg.norm(y)
        mx = m @ x
        rho_new = float(x @ mx)
        residual = float(np.abs(mx - rho_new * x).max())
        settled = abs(rho_new - rho) < tol * max(1.0, abs(rho_new))
        rho = rho_new
        if settled and residual <= tol * norm:
            return SpectralResult(rho, "eigensolver", residual, it, x)
    raise ConvergenceError(
        f"power iteration did not converge in {max_iter} iterations (residual {residual:.3e})",
        best=SpectralResult(rho, "eigensolver", residual, max_iter, x))


def dominant_eigenvalue_batch(ms, tol: float = DEFAULT_TOL, max_iter: int = 10_000):
    """Vectorised :func:`dominant_eigenvalue` over a stack ``(B, n, n)``.

    Same shift, start vector and stopping rule; ``M x`` is carried between
    steps so each step costs one batched product.  Inputs are trusted to be
    symmetric and nonnegative.  Returns ``(values, residuals, iterations)``;
    raises ConvergenceError if any matrix in the stack fails to converge.
    """
    ms = np.asarray(ms, dtype=float)
    b, n, _ = ms.shape
    norms = np.abs(ms).sum(axis=2).max(axis=1)
    values = np.zeros(b)
    residuals = np.zeros(b)
    iters = np.zeros(b, dtype=np.int64)
    idx = np.flatnonzero(norms > 0)
    m = ms[idx]
    nrm = norms[idx]
    sigma = nrm / 4.0
    x = np.full((idx.size, n), 1.0 / np.sqrt(n))
    mx = np.matmul(m, x[:, :, None])[:, :, 0]
    rho = np.einsum("bi,bi->b", x, mx)
    for it in range(1, max_iter + 1):
        if idx.size == 0:
            break
        y = mx + sigma[:, None] * x
        x = y / np.linalg.norm(y, axis=1, keepdims=True)
        mx = np.matmul(m, x[:, :, None])[:, :, 0]
        r_new = np.einsum("bi,bi->b", x, mx)
        res = np.abs(mx - r_new[:, None] * x).max(axis=1)
        settled = np.abs(r_new - rho) < tol * np.maximum(1.0, np.abs(r_new))
        done = settled & (res <= tol * nrm)
        rho = r_new
        if done.any():
            fin = idx[done]
            values[fin] = r_new[done]
            residuals[fin] = res[done]
            iters[fin] = it
            keep = ~done
            idx, m, nrm, sigma = idx[keep], m[keep], nrm[keep], sigma[keep]
            x, mx, rho = x[keep], mx[keep], rho[keep]
    if idx.size:
        raise ConvergenceError(f"{idx.size} matrices did not converge in {max_iter} iterations",
                               best=(rho, idx))
    return values, residuals, iters


def distance_spectral_radius(g: Graph, tol: float = DEFAULT_TOL) -> SpectralResult:
    d = all_pairs_distances(g)
    if not d.connected:
        raise DisconnectedGraphError("distance spectral radius needs a connected graph")
    return dominant_eigenvalue(d.to_array(), tol=tol)


def adjacency_spectral_radius(g: Graph, tol: float = DEFAULT_TOL) -> SpectralResult:
    """Largest adjacency eigenvalue, taken as the maximum over components."""
    if g.n == 0:
        return SpectralResult(0.0, "eigensolver", 0.0, 0, None)
    a = adjacency_matrix(g, dtype=float)
    best = None
    for verts, _ in components(g):
        idx = sorted(verts)
        res = dominant_eigenvalue(a[np.ix_(idx, idx)], tol=tol)
        if best is None or res.value > best[0].value:
            best = (res, idx)
    res, idx = best
    vec = np.zeros(g.n)
    vec[idx] = res.eigvec
    return SpectralResult(res.value, res.method, res.residual, res.iterations, vec)
