"""Spin-1/2 chain Hamiltonian in the occupation basis.

H = sum_x n_x n_{x+2} + kappa sum_x q_x^* q_x  with
q_x = s^-_{x+1} s^-_{x+2} - lambda s^-_x s^-_{x+3}, built under open,
periodic or soft-Dirichlet boundary conditions.  Basis index = packed
occupation bits, site 1 at bit 0, |1> = occupied.  All matrix entries are
real (lambda >= 0); storage is CSR with deterministic triplet order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse

BOUNDARY_CONDITIONS = ("open", "periodic", "dirichlet")
MAX_FULL_L = 30


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless couplings of the chain."""

    lam: float
    kappa: float

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("lambda must be nonnegative")
        if self.kappa <= 0:
            raise ValueError("kappa must be positive")


def physical_kappa(lam):
    """Hopping weight on the physical one-parameter family,
    kappa(lambda) = (3^(3/4)/4) lambda^(-3/4)."""
    if lam <= 0:
        raise ValueError("the physical family needs lambda > 0")
    return (3.0 ** 0.75 / 4.0) * lam ** (-0.75)


def _pair_terms(L, bc):
    """Site tuples (x, x+1, x+2, x+3) of the hopping terms and (x, x+2) of
    the electrostatic terms, 0-based, with wraparound for periodic."""
    if bc == "periodic":
        nn2 = [(x % L, (x + 2) % L) for x in range(L)]
        quads = [tuple((x + k) % L for k in range(4)) for x in range(L)]
    else:
        nn2 = [(x, x + 2) for x in range(L - 2)]
        quads = [(x, x + 1, x + 2, x + 3) for x in range(L - 3)]
        if bc == "dirichlet":
            nn2 = nn2 + [(0, 1), (L - 2, L - 1)]
    return nn2, quads


def _assemble(configs, lookup, L, params, bc):
    """Sparse Hamiltonian block on the given sorted configuration array.

    ``lookup`` maps a config array to basis positions (or -1 when the
    target leaves the basis, which cannot happen for number-conserving
    terms on a full particle sector).
    """
    lam, kappa = params.lam, params.kappa
    nn2, quads = _pair_terms(L, bc)
    n = configs.size
    bits = [(configs >> x) & 1 for x in range(L)]

    diag = np.zeros(n)
    for x, y in nn2:
        diag += (bits[x] & bits[y]).astype(float)
    for a, b, c, d in quads:
        diag += kappa * (bits[b] & bits[c]).astype(float)
        diag += kappa * lam * lam * (bits[a] & bits[d]).astype(float)

    rows = [np.arange(n)]
    cols = [np.arange(n)]
    vals = [diag]
    if lam > 0:
        for a, b, c, d in quads:
            # |1001> -> |0110| on sites (a,b,c,d), amplitude -kappa*lambda
            mask = (bits[a] & ~bits[b] & ~bits[c] & bits[d]).astype(bool)
            if not mask.any():
                continue
            src = configs[mask]
            dst = src - (1 << a) - (1 << d) + (1 << b) + (1 << c)
            i = np.nonzero(mask)[0]
            j = lookup(dst)
            rows.extend((i, j))
            cols.extend((j, i))
            v = np.full(i.size, -kappa * lam)
            vals.extend((v, v))
    H = sparse.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n, n),
    )
    return H.tocsr()


def build(L, params, bc="open"):
    """Full-space Hamiltonian on [1, L] as a symmetric CSR matrix."""
    if bc not in BOUNDARY_CONDITIONS:
        raise ValueError(f"unknown boundary condition {bc!r}")
    if L < 4:
        raise ValueError("chains need at least 4 sites")
    if L > MAX_FULL_L:
        raise ValueError("dimension overflow; use sector_hamiltonian instead")
    configs = np.arange(2**L, dtype=np.int64)
    return _assemble(configs, lambda dst: dst, L, params, bc)


def sector_basis(L, N):
    """All C(L, N) configurations with N particles, ascending."""
    if not 0 <= N <= L:
        raise ValueError("particle number out of range")
    configs = np.arange(2**L, dtype=np.int64)
    return configs[np.bitwise_count(configs) == N]


def sector_block(H, L, N):
    """Restriction of a full-space H to the N-particle sector."""
    basis = sector_basis(L, N)
    return H[basis][:, basis].tocsr()


def sector_hamiltonian(L, N, params, bc="open"):
    """N-particle block built directly on the sector basis (no 2**L
    intermediate)."""
    if bc not in BOUNDARY_CONDITIONS:
        raise ValueError(f"unknown boundary condition {bc!r}")
    if L < 4:
        raise ValueError("chains need at least 4 sites")
    basis = sector_basis(L, N)

    def lookup(dst):
        pos = np.searchsorted(basis, dst)
        return pos

    return _assemble(basis, lookup, L, params, bc)


def boundary_mode_block(params):
    """The invariant 2x2 block of the open chain on the edge-mode pair
    |11001...> , |10110...> and its eigenvalues in closed form:
    kappa lam^2 + [(1+kappa) +- sqrt((1+kappa)^2 + 4 kappa^2 lam^2)]/2.
    """
    lam, kappa = params.lam, params.kappa
    block = np.array(
        [
            [kappa * lam * lam, -kappa * lam],
            [-kappa * lam, 1.0 + kappa * (1.0 + lam * lam)],
        ]
    )
    disc = math.sqrt((1.0 + kappa) ** 2 + 4.0 * kappa**2 * lam**2)
    lo = kappa * lam * lam + ((1.0 + kappa) - disc) / 2.0
    hi = kappa * lam * lam + ((1.0 + kappa) + disc) / 2.0
    return block, (lo, hi)


@dataclass
class SymmetryOps:
    """Translation permutation and the two diagonal unitaries of the ring."""

    T: np.ndarray  # permutation: T|sigma> = |shift(sigma)>
    U: np.ndarray  # diagonal of exp(2 pi i N / L)
    V: np.ndarray  # diagonal of exp(2 pi i sum_x x n_x / L)

    def translation_matrix(self):
        dim = self.T.size
        return sparse.coo_matrix(
            (np.ones(dim), (self.T, np.arange(dim))), shape=(dim, dim)
        ).tocsr()


def symmetry_ops(L):
    """U, V and the cyclic shift T of the L-site ring; they satisfy
    VT = UTV and UT = TU."""
    configs = np.arange(2**L, dtype=np.int64)
    top = (configs >> (L - 1)) & 1
    shifted = ((configs << 1) & ((1 << L) - 1)) | top
    number = np.bitwise_count(configs)
    weighted = np.zeros(2**L)
    for x in range(1, L + 1):
        weighted += x * ((configs >> (x - 1)) & 1)
    U = np.exp(2j * np.pi * number / L)
    V = np.exp(2j * np.pi * weighted / L)
    return SymmetryOps(T=shifted, U=U, V=V)


def dump_operator(H, stream):
    """Matrix-Market coordinate dump (1-based, symmetric lower triangle)."""
    coo = sparse.tril(H).tocoo()
    stream.write("%%MatrixMarket matrix coordinate real symmetric\n")
    stream.write(f"{H.shape[0]} {H.shape[1]} {coo.nnz}\n")
    order = np.lexsort((coo.row, coo.col))
    for k in order:
        stream.write(f"{coo.row[k] + 1} {coo.col[k] + 1} {coo.data[k]:.17g}\n")


def load_operator(stream):
    """Read back a symmetric Matrix-Market coordinate dump."""
    header = stream.readline()
    if "coordinate" not in header:
        raise ValueError("not a coordinate Matrix-Market file")
    line = stream.readline()
    while line.startswith("%"):
        line = stream.readline()
    nrows, ncols, nnz = (int(tok) for tok in line.split())
    rows, cols, vals = [], [], []
    for _ in range(nnz):
        r, c, v = stream.readline().split()
        rows.append(int(r) - 1)
        cols.append(int(c) - 1)
        vals.append(float(v))
    lower = sparse.coo_matrix((vals, (rows, cols)), shape=(nrows, ncols)).tocsr()
    strict = sparse.tril(lower, k=-1)
    return lower + strict.T
