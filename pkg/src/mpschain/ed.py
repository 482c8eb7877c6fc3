"""Independent exact-diagonalization oracle on the full d^N Hilbert space.

Dense operators are assembled from Kronecker products, independently of the
tensor-contraction path in parent.chain_apply, so the two routes check each
other.  Basis convention, fixed package-wide: site 1 is the most significant
digit and the physical order is the family label order (1, 0, -1 for spin-1).
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .parent import LocalHamiltonian, chain_apply

#: Hard ceiling for dense diagonalization (full spectra, kernel counts).
DEFAULT_DENSE_MAX_SITES = 8
#: Hard ceiling for matrix-free iterative work.
DEFAULT_ITER_MAX_SITES = 12

_ENV_CAP = "MPSCHAIN_MAX_SITES"


def dense_max_sites() -> int:
    cap = os.environ.get(_ENV_CAP)
    return min(int(cap), DEFAULT_DENSE_MAX_SITES) if cap else DEFAULT_DENSE_MAX_SITES


def iter_max_sites() -> int:
    cap = os.environ.get(_ENV_CAP)
    return int(cap) if cap else DEFAULT_ITER_MAX_SITES


class AmbiguousKernelError(RuntimeError):
    """Kernel count is gap-ambiguous; carries the (low, high) candidate range."""

    def __init__(self, low: int, high: int, message: str):
        super().__init__(message)
        self.low = low
        self.high = high


class LanczosConvergenceError(RuntimeError):
    """Iterative ground-energy solve did not converge; carries diagnostics."""


@dataclass(frozen=True)
class ChainOperator:
    """H = sum over periodic windows of a local k-site term, on n_sites sites."""

    n_sites: int
    local: LocalHamiltonian
    mode: str = "auto"  # dense | matrix-free | auto

    def __post_init__(self):
        if self.n_sites < self.local.k:
            raise ValueError("chain shorter than the local term's support")
        if self.mode not in ("dense", "matrix-free", "auto"):
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def d(self) -> int:
        k = self.local.k
        d = round(self.local.dim ** (1.0 / k))
        if d**k != self.local.dim:
            raise ValueError("local dimension is not a clean power")
        return d

    @property
    def dim(self) -> int:
        return self.d**self.n_sites

    def is_dense(self) -> bool:
        if self.mode == "dense":
            return True
        if self.mode == "matrix-free":
            return False
        return self.n_sites <= dense_max_sites()

    def apply(self, state: np.ndarray) -> np.ndarray:
        return chain_apply(self.local, self.n_sites, state)


def _embed_window(hmat: np.ndarray, d: int, n_sites: int, start: int, k: int) -> np.ndarray:
    """Dense embedding of a k-site term on sites start..start+k-1 (mod n_sites)."""
    sites = [(start + j) % n_sites for j in range(k)]
    big = np.kron(hmat, np.eye(d ** (n_sites - k)))
    # axis j of the kron result is the j-th window site followed by the rest
    order = sites + [s for s in range(n_sites) if s not in sites]
    inv = np.argsort(order)
    tensor = big.reshape((d,) * (2 * n_sites))
    perm = list(inv) + [n_sites + int(i) for i in inv]
    return tensor.transpose(perm).reshape(d**n_sites, d**n_sites)


def dense_chain(local_matrix: np.ndarray, k: int, n_sites: int) -> np.ndarray:
    """Dense periodic chain sum of an arbitrary k-site matrix (Kronecker embedding)."""
    h = np.asarray(local_matrix)
    d = round(h.shape[0] ** (1.0 / k))
    if d**k != h.shape[0]:
        raise ValueError("local dimension is not a clean power")
    if n_sites > dense_max_sites():
        raise ValueError(f"n_sites {n_sites} exceeds the dense cap {dense_max_sites()}")
    out = np.zeros((d**n_sites, d**n_sites), dtype=h.dtype)
    for start in range(n_sites - k + 1):
        out += np.kron(np.eye(d**start), np.kron(h, np.eye(d ** (n_sites - start - k))))
    for start in range(n_sites - k + 1, n_sites):
        out += _embed_window(h, d, n_sites, start, k)
    return out


def dense_matrix(op: ChainOperator) -> np.ndarray:
    """Explicit d^N x d^N matrix of the chain, built by Kronecker embedding."""
    return dense_chain(op.local.matrix, op.local.k, op.n_sites)


def _lanczos_smallest(matvec, dim: int, max_iter: int = 400, tol: float = 1e-11, seed: int = 1234) -> float:
    """Smallest eigenvalue by Lanczos with full reorthogonalization.

    A fixed-seed start vector keeps runs reproducible.
    """
    from scipy.linalg import eigh_tridiagonal

    rng = np.random.default_rng(seed)
    q = rng.standard_normal(dim)
    q /= np.linalg.norm(q)
    basis = [q]
    alphas: list[float] = []
    betas: list[float] = []
    theta_prev = np.inf
    w = matvec(q)
    for it in range(max_iter):
        alphas.append(float(basis[-1] @ w))
        w = w - alphas[-1] * basis[-1]
        if len(basis) > 1:
            w = w - betas[-1] * basis[-2]
        for u in basis:  # full reorthogonalization
            w = w - (u @ w) * u
        theta = eigh_tridiagonal(alphas, betas, eigvals_only=True, select="i", select_range=(0, 0))[0]
        b = float(np.linalg.norm(w))
        if b < 1e-13 or (it >= 3 and abs(theta - theta_prev) <= tol * max(1.0, abs(theta))):
            return float(theta)
        theta_prev = theta
        betas.append(b)
        q = w / b
        basis.append(q)
        w = matvec(q)
    raise LanczosConvergenceError(
        f"no convergence after {max_iter} iterations; last Ritz value {theta_prev:.6e}, "
        f"last increment {abs(theta - theta_prev):.3e}"
    )


def ground_energy(op: ChainOperator) -> float:
    """Smallest eigenvalue, dense below the dense cap and Lanczos above it."""
    if op.n_sites > iter_max_sites():
        raise ValueError(f"n_sites {op.n_sites} exceeds the iterative cap {iter_max_sites()}")
    if op.is_dense():
        return float(np.linalg.eigvalsh(dense_matrix(op))[0])
    return _lanczos_smallest(op.apply, op.dim)


def spectrum(op: ChainOperator) -> np.ndarray:
    """Full sorted spectrum (dense path only)."""
    return np.sort(np.linalg.eigvalsh(dense_matrix(op)))


def kernel_dimension(op: ChainOperator, tol: float = 1e-8) -> int:
    """Number of eigenvalues at most tol, with a spectral-gap sanity check.

    The first eigenvalue above the count must be at least 100 * tol away,
    otherwise the count is ambiguous and AmbiguousKernelError reports the
    candidate range instead of a silent number.
    """
    w = spectrum(op)
    count = int(np.sum(w <= tol))
    if count < len(w) and w[count] < 100 * tol:
        high = int(np.sum(w <= 100 * tol))
        raise AmbiguousKernelError(
            count, high, f"no clean spectral gap above {tol:g}: kernel dimension in [{count}, {high}]"
        )
    return count


def overlap_with_kernel(op: ChainOperator, state: np.ndarray, tol: float = 1e-10) -> float:
    """Residual ||H state|| / ||state||; at most tol certifies kernel membership."""
    state = np.asarray(state)
    if state.shape != (op.dim,):
        raise ValueError(f"state must have length {op.dim}")
    del tol  # interface threshold for callers; the residual itself is returned
    nrm = np.linalg.norm(state)
    if nrm == 0.0:
        raise ValueError("zero state has no kernel residual")
    return float(np.linalg.norm(op.apply(state)) / nrm)


def report(op: ChainOperator, kernel_tol: float = 1e-8) -> dict:
    """Spectrum/degeneracy summary as a JSON-ready dictionary."""
    w = spectrum(op)
    try:
        kdim: int | list[int] = kernel_dimension(op, kernel_tol)
    except AmbiguousKernelError as exc:
        kdim = [exc.low, exc.high]
    return {
        "n_sites": op.n_sites,
        "ground_energy": float(w[0]),
        "kernel_dim": kdim,
        "kernel_tol": kernel_tol,
        "spectrum_head": [float(x) for x in w[:20]],
    }
