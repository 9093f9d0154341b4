"""Eigenvalues, kernel dimensions and spectral gaps of the chain.

Dense diagonalization handles blocks up to a few thousand states; larger
particle sectors go through a seeded Lanczos solver.  Chain-level gaps
are assembled sector by sector (the Hamiltonian conserves particle
number), with kernel dimensions of the open chain cross-checked against
root-tiling counts instead of relying on a tolerance alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .hamiltonian import ModelParams, sector_hamiltonian
from .tiling import roots_by_particle_number

DENSE_LIMIT = 16384
DENSE_SECTOR = 4096
DEFAULT_SEED = 0


class SolverConvergenceError(RuntimeError):
    """The iterative eigensolver did not converge within its iteration cap."""


class KernelMismatchError(RuntimeError):
    """Detected kernel dimension disagrees with the expected count."""


@dataclass
class SpectrumResult:
    """Low part of a spectrum with its kernel/gap summary."""

    eigenvalues: np.ndarray
    kernel_dim: int
    gap: float
    method: str
    zero_tol: float


def dense_spectrum(op):
    """All eigenvalues of a symmetric operator, ascending."""
    dim = op.shape[0]
    if dim > DENSE_LIMIT:
        raise ValueError(f"dimension {dim} exceeds the dense budget {DENSE_LIMIT}")
    mat = op.toarray() if sparse.issparse(op) else np.asarray(op)
    return np.linalg.eigvalsh(mat)


def lowest_eigenvalues(op, k, tol=0.0, seed=DEFAULT_SEED):
    """k smallest eigenvalues via restarted Lanczos with a seeded start
    vector; falls back to dense diagonalization for small blocks.

    Two standard Lanczos pathologies are handled explicitly.  ARPACK's
    relative stopping rule never certifies an exactly-zero Ritz value, so
    the solve runs on op + sigma*1 with a positive spectral shift sigma.
    And a single Krylov run can under-report the multiplicity of a
    degenerate extreme cluster, so converged eigenvectors are deflated
    (pushed above the spectrum) and the solve repeats until a full round
    finds nothing new below the k-th collected value.  Every returned
    value is a converged eigenvalue of ``op``.
    """
    dim = op.shape[0]
    if k >= dim - 1 or dim <= 64:
        return dense_spectrum(op)[: min(k, dim)]
    rng = np.random.default_rng(seed)
    norm_est = float(abs(op).sum(axis=1).max())
    sigma = 1.0 + norm_est  # spectrum of op + sigma becomes O(1) positive
    lift = 4.0 * sigma  # deflation shift, beyond the lifted spectrum
    found_vals = []
    found_vecs = []
    atol = max(1e-8, 10.0 * tol * sigma)

    def matvec(x):
        x = np.ravel(x)
        y = op @ x + sigma * x
        for vec in found_vecs:
            y = y + lift * vec * (vec @ x)
        return y

    deflated = sparse.linalg.LinearOperator((dim, dim), matvec=matvec, dtype=float)
    stalls = 0
    while True:
        if len(found_vals) >= k:
            cut = np.sort(found_vals)[k - 1] - atol
        else:
            cut = math.inf
        want = min(max(k - len(found_vals) + 4, 8), dim - 1)
        v0 = rng.standard_normal(dim)
        try:
            vals, vecs = eigsh(
                deflated, k=want, which="SA", tol=tol, v0=v0, maxiter=40 * dim
            )
        except ArpackNoConvergence as exc:
            raise SolverConvergenceError(
                f"Lanczos did not converge for k={want}, dim={dim}"
            ) from exc
        new_below = 0
        for val, vec in zip(vals - sigma, vecs.T):
            if val > 1.5 * sigma:
                continue  # a deflated copy, not a fresh eigenpair
            for old in found_vecs:
                vec = vec - old * (old @ vec)
            nrm = np.linalg.norm(vec)
            if nrm < 1e-8:
                continue
            found_vals.append(float(val))
            found_vecs.append(vec / nrm)
            if val < cut:
                new_below += 1
        if len(found_vals) >= k and new_below == 0:
            break  # a full round produced nothing new below the k-th value
        if new_below == 0:
            stalls += 1
            if stalls >= 3:
                raise SolverConvergenceError(
                    f"deflation stalled at {len(found_vals)}/{k}, dim={dim}"
                )
        else:
            stalls = 0
    return np.sort(np.asarray(found_vals))[:k]


def default_zero_tol(op):
    """1e-10 scaled by a cheap upper estimate of the operator norm."""
    norm_inf = float(abs(op).sum(axis=1).max()) if sparse.issparse(op) else float(
        np.abs(op).sum(axis=1).max()
    )
    return 1e-10 * max(norm_inf, 1.0)


def analyze(eigenvalues, zero_tol, method="dense", strict=True):
    """Kernel count and gap from a sorted spectrum.

    Flags spectra with an eigenvalue inside [zero_tol, 10*zero_tol): there
    the kernel/excited split is not numerically trustworthy.
    """
    eigenvalues = np.sort(np.asarray(eigenvalues))
    kernel = int(np.searchsorted(eigenvalues, zero_tol))
    if strict and np.any(
        (eigenvalues >= zero_tol) & (eigenvalues < 10.0 * zero_tol)
    ):
        raise KernelMismatchError(
            f"eigenvalue too close to zero_tol={zero_tol:g} to classify"
        )
    gap = float(eigenvalues[kernel]) if kernel < eigenvalues.size else 0.0
    return SpectrumResult(eigenvalues, kernel, gap, method, zero_tol)


def kernel_dimension(op, zero_tol=None):
    """Number of eigenvalues below zero_tol (default 1e-10 * ||op||)."""
    if zero_tol is None:
        zero_tol = default_zero_tol(op)
    return analyze(dense_spectrum(op), zero_tol).kernel_dim


def spectral_gap(op, expected_kernel=None, zero_tol=None):
    """First eigenvalue above the kernel of a PSD operator."""
    if zero_tol is None:
        zero_tol = default_zero_tol(op)
    res = analyze(dense_spectrum(op), zero_tol)
    if expected_kernel is not None and res.kernel_dim != expected_kernel:
        raise KernelMismatchError(
            f"kernel dimension {res.kernel_dim} != expected {expected_kernel}"
        )
    return res.gap


def open_kernel_dims(L):
    """Kernel dimension of the open chain per particle sector, from the
    root-tiling census (plus the lone extra state at L = 7)."""
    counts = dict(roots_by_particle_number(L))
    if L == 7:
        counts[4] = counts.get(4, 0) + 1
    return counts


def _sector_low_spectrum(L, N, params, bc, k, zero_tol, seed, expected_kernel=None):
    """Lowest eigenvalues of one particle sector, dense when affordable."""
    H = sector_hamiltonian(L, N, params, bc)
    dim = H.shape[0]
    if dim <= DENSE_SECTOR:
        return dense_spectrum(H), "dense"
    want = max(k, (expected_kernel or 0) + 4)
    while True:
        vals = lowest_eigenvalues(H, want, tol=1e-12, seed=seed)
        if np.any(vals >= zero_tol) or want >= dim - 1:
            return vals, "iterative"
        want = min(2 * want, dim - 1)


@lru_cache(maxsize=256)
def chain_gap(L, params, bc="open", zero_tol=1e-10, k_low=8, seed=DEFAULT_SEED):
    """Spectral gap and kernel dimension of the chain on [1, L].

    Diagonalizes sector by sector; the gap is the smallest above-kernel
    eigenvalue over all sectors.  For open chains with L >= 8 or
    L in {5, 6, 7} the per-sector kernel dimensions are checked against
    the root census.
    """
    if bc == "periodic" and L < 8:
        raise ValueError("periodic spectra are only taken for L >= 8")
    # the kernel equals the tiling-state span only away from the
    # commuting point: at lambda = 0 the edge modes drop to zero energy
    expected = (
        open_kernel_dims(L)
        if bc == "open" and params.lam > 0 and (L >= 8 or L in (5, 6, 7))
        else None
    )
    kernel_total = 0
    gap = math.inf
    for N in range(L + 1):
        exp_n = expected.get(N, 0) if expected is not None else None
        vals, _method = _sector_low_spectrum(
            L, N, params, bc, k_low, zero_tol, seed, exp_n
        )
        res = analyze(vals, zero_tol, strict=False)
        if exp_n is not None and res.kernel_dim != exp_n:
            raise KernelMismatchError(
                f"L={L} N={N}: kernel {res.kernel_dim} != roots {exp_n}"
            )
        kernel_total += res.kernel_dim
        if res.kernel_dim < res.eigenvalues.size:
            gap = min(gap, float(res.eigenvalues[res.kernel_dim]))
    return gap, kernel_total


def sector_ground_energy(L, N, params, bc="open", seed=DEFAULT_SEED):
    """Minimum eigenvalue of the N-particle block."""
    H = sector_hamiltonian(L, N, params, bc)
    if H.shape[0] <= DENSE_SECTOR:
        return float(dense_spectrum(H)[0])
    return float(lowest_eigenvalues(H, 1, tol=1e-12, seed=seed)[0])


def inverse_compressibility(L, N, params, magnetic_length=1.0):
    """|Lambda| (E_{L+1}(N) + E_{L-1}(N) - 2 E_L(N)) / (2 pi l^2)^2."""
    if L < 9:
        raise ValueError("compressibility threshold needs L >= 9")
    e_plus = sector_ground_energy(L + 1, N, params)
    e_minus = sector_ground_energy(L - 1, N, params)
    e_mid = sector_ground_energy(L, N, params)
    return L * (e_plus + e_minus - 2.0 * e_mid) / (2.0 * math.pi * magnetic_length**2) ** 2


@dataclass
class SweepRow:
    lam: float
    kappa: float
    L: int
    bc: str
    kernel_dim: int
    gap: float
    low: np.ndarray = field(repr=False)


def gap_sweep(L, bc, lambda_grid, kappa_rule="physical", kappa_fixed=1.0,
              n_low=10, zero_tol=1e-10, seed=DEFAULT_SEED, workers=None):
    """One row per lambda: couplings, kernel dimension, gap and the n_low
    smallest eigenvalues.  ``kappa_rule`` is "fixed" or "physical"."""
    lambda_grid = list(lambda_grid)
    if kappa_rule not in ("fixed", "physical"):
        raise ValueError("kappa_rule must be 'fixed' or 'physical'")

    def one(lam):
        from .hamiltonian import physical_kappa

        if kappa_rule == "fixed":
            kappa = kappa_fixed
        else:
            if lam <= 0:
                raise ValueError("the physical kappa rule needs lambda > 0")
            kappa = physical_kappa(lam)
        params = ModelParams(lam, kappa)
        kernel_total = 0
        gap = math.inf
        all_vals = []
        for N in range(L + 1):
            vals, _ = _sector_low_spectrum(L, N, params, bc, n_low + 2, zero_tol, seed)
            res = analyze(vals, zero_tol, strict=False)
            kernel_total += res.kernel_dim
            if res.kernel_dim < res.eigenvalues.size:
                gap = min(gap, float(res.eigenvalues[res.kernel_dim]))
            all_vals.append(res.eigenvalues)
        merged = np.sort(np.concatenate(all_vals))[: max(n_low, 1)]
        low = np.pad(merged, (0, max(0, n_low - merged.size)), constant_values=np.nan)
        return SweepRow(lam, kappa, L, bc, kernel_total, gap, low[:n_low])

    if workers is None or workers <= 1 or len(lambda_grid) <= 1:
        return [one(lam) for lam in lambda_grid]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, lambda_grid))
