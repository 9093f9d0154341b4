"""Rigorous spectral-gap certificates.

Three ingredients: the f-curve whose value below 1/3 certifies the
martingale hypothesis, the resulting open-chain bound
min(gap_8, gap_9, gap_10) (1 - sqrt(3 f))^2 / 3, and a finite-size
criterion transferring open-chain gaps to the ring.  The martingale
overlap norm ||G_2 (1 - G) G_1|| is also evaluated exactly at desk scale
from the ground-state projectors, sector by particle-number sector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .hamiltonian import ModelParams, build
from .spectra import chain_gap, dense_spectrum
from .states import alpha, ground_basis, norm_sq_closed, vmd_state
from .tiling import all_tilings, enumerate_roots, particle_content

F_ERROR_BOUND = 0.0052  # certified |f - f^(n)| for n >= 73 on r in [0, 35]
F_N_MAX = 73
F_R_MAX = 35.0


@dataclass(frozen=True)
class SpectralConstants:
    """Scalars derived from the squeezing weight r = lambda^2."""

    r: float
    mu_plus: float
    mu_minus: float
    mu: float
    delta_mu: float
    beta: float

    @classmethod
    def from_r(cls, r):
        if r < 0:
            raise ValueError("the squeezing weight must be nonnegative")
        s = math.sqrt(1.0 + 4.0 * r)
        mu_p = (1.0 + s) / 2.0
        mu_m = (1.0 - s) / 2.0
        return cls(r, mu_p, mu_m, mu_m / mu_p, s, abs(mu_m / mu_p))


def f_n(n, r):
    """One member of the overlap-norm family:
    r a_{n-2} a_n [ (1 - a_{n-1}(1+r))^2/(1+2r) + a_{n-3} r (1-a_{n-1})^2/(1+r) ]
    with a_k the norm ratios.  Defined for n >= 4; accepts array r."""
    if n < 4:
        raise ValueError("the family starts at n = 4")
    r = np.asarray(r, dtype=float)
    a_n = alpha(n, r)
    a_1 = alpha(n - 1, r)
    a_2 = alpha(n - 2, r)
    a_3 = alpha(n - 3, r)
    val = r * a_2 * a_n * (
        (1.0 - a_1 * (1.0 + r)) ** 2 / (1.0 + 2.0 * r)
        + a_3 * r * (1.0 - a_1) ** 2 / (1.0 + r)
    )
    return float(val) if np.ndim(val) == 0 else val


def f_approx(r, n_max=F_N_MAX):
    """max_{4 <= m <= n_max} f_m(r) and its certified upper bound.

    The certificate (true f <= value + 0.0052) holds for n_max >= 73 and
    r <= 35; outside that range the second return value is None.
    """
    arr = np.asarray(r, dtype=float)
    stack = np.stack([f_n(m, arr) for m in range(4, n_max + 1)])
    value = stack.max(axis=0)
    certifiable = n_max >= F_N_MAX and bool(np.all(arr <= F_R_MAX)) and bool(
        np.all(arr >= 0.0)
    )
    certified = value + F_ERROR_BOUND if certifiable else None
    if np.ndim(value) == 0:
        value = float(value)
        certified = None if certified is None else float(certified)
    return value, certified


@dataclass
class FCurve:
    """f evaluated on a grid, with the uniform truncation error bound."""

    n_max: int
    r_grid: np.ndarray
    values: np.ndarray
    error_bound: float


def f_curve(r_grid, n_max=F_N_MAX):
    r_grid = np.asarray(list(r_grid), dtype=float)
    values, certified = f_approx(r_grid, n_max)
    err = F_ERROR_BOUND if certified is not None else math.inf
    return FCurve(n_max, r_grid, np.asarray(values), err)


def martingale_bound(gamma_loc, epsilon, ell=3):
    """gamma (1 - epsilon sqrt(ell))^2, or 0 when the overlap is too large."""
    if epsilon * math.sqrt(ell) >= 1.0:
        return 0.0
    return gamma_loc * (1.0 - epsilon * math.sqrt(ell)) ** 2


def obc_gap_bound(lam, small_gaps):
    """Volume-uniform open-chain gap bound
    min(small_gaps) (1 - sqrt(3 f))^2 / 3, evaluated with the certified
    upper bound for f; returns 0.0 when the certificate fails 3f < 1."""
    _, certified = f_approx(lam * lam)
    if certified is None or certified >= 1.0 / 3.0:
        return 0.0
    return min(small_gaps) * (1.0 - math.sqrt(3.0 * certified)) ** 2 / 3.0


@dataclass
class KnabeInputs:
    """Numerical inputs of the finite-size criterion at subchain order n."""

    n: int
    gamma: float  # min gap of the 6- and 7-site open chains
    Gamma: float  # max operator norm of the same
    g_n: float  # min open-chain gap over lengths 3(n+1) .. 3(n+1)+5

    @property
    def criterion_ok(self):
        return self.g_n > self.Gamma / self.n


def knabe_inputs(params, n=2, zero_tol=1e-10):
    if n < 2:
        raise ValueError("the criterion needs n >= 2")
    gaps67 = []
    norms67 = []
    for m in (6, 7):
        spec = dense_spectrum(build(m, params, "open"))
        gaps67.append(chain_gap(m, params, "open", zero_tol)[0])
        norms67.append(float(spec[-1]))
    g_n = min(
        chain_gap(3 * (n + 1) + r, params, "open", zero_tol)[0] for r in range(6)
    )
    return KnabeInputs(n, min(gaps67), max(norms67), g_n)


def periodic_gap_bound(inputs):
    """gamma n / (2 Gamma (n-1)) * (g_n - Gamma/n); 0 when the criterion
    g_n > Gamma/n fails (flag via ``inputs.criterion_ok``)."""
    value = (
        inputs.gamma
        * inputs.n
        / (2.0 * inputs.Gamma * (inputs.n - 1))
        * (inputs.g_n - inputs.Gamma / inputs.n)
    )
    return max(value, 0.0)


def knabe_finite_size_bound(min_subchain_gap, n):
    """Generic finite-size criterion for projector chains:
    gap >= n/(n-1) (min subchain gap - 1/n)."""
    if n < 2:
        raise ValueError("the criterion needs n >= 2")
    return n / (n - 1.0) * (min_subchain_gap - 1.0 / n)


# --- exact martingale overlap norm ------------------------------------------


def _sector_positions(L):
    """configs -> position map per particle number, ascending configs."""
    configs = np.arange(2**L, dtype=np.int64)
    weights = np.bitwise_count(configs)
    sectors = {}
    for N in range(L + 1):
        basis = configs[weights == N]
        sectors[N] = {int(c): i for i, c in enumerate(basis)}
    return sectors


def _column_matrix(states, sector_index, dim):
    """Sparse matrix whose columns are the normalized states (assumed
    mutually orthogonal and number-definite) landing in one sector."""
    rows, cols, vals = [], [], []
    k = 0
    for st in states:
        nrm = math.sqrt(st.norm_sq())
        if nrm == 0.0:
            continue
        for c, a in st.amps.items():
            rows.append(sector_index[c])
            cols.append(k)
            vals.append(a / nrm)
        k += 1
    return sparse.coo_matrix((vals, (rows, cols)), shape=(dim, k)).tocsc()


def _embedded_ground_states(L, lam, interval):
    """States psi_{[a,b]}(R) (x) full basis on the complement, grouped by
    total particle number."""
    a, b = interval
    m = b - a + 1
    rest = L - m
    shift = a - 1
    by_number = {}
    for root in enumerate_roots(m):
        psi = vmd_state(root, lam)
        if not psi.amps:
            continue
        n_core = root.particle_count()
        shifted = {c << shift: amp for c, amp in psi.amps.items()}
        for tau in range(2**rest):
            # distribute the complement bits around [a, b]
            low = tau & ((1 << (a - 1)) - 1)
            high = (tau >> (a - 1)) << (b)
            tau_bits = low | high
            n_tot = n_core + int(tau).bit_count()
            amps = {c | tau_bits: amp for c, amp in shifted.items()}
            from .states import SparseState

            by_number.setdefault(n_tot, []).append(SparseState(L, amps))
    return by_number


def martingale_epsilon(L, lam, with_reduction=False):
    """Exact overlap norm ||G_2 (1 - G) G_1|| on [1, L], with G_1 the
    ground projector of the first L-3 sites and G_2 of the last nine.

    Evaluated sector by sector (all three projectors conserve particle
    number); the norm is the largest singular value over sectors.  With
    ``with_reduction`` also returns the same norm with the tiling
    projector inserted, which must coincide.
    """
    if lam == 0:
        raise ValueError("the overlap norm is defined for lambda != 0")
    if L < 11:
        raise ValueError("the overlap geometry needs L >= 11")
    if L > 13:
        raise ValueError("2**L exceeds the dense budget (L <= 13)")

    sectors = _sector_positions(L)
    dims = {N: len(ix) for N, ix in sectors.items()}

    ground_by_n = {}
    for st in ground_basis(L, lam):
        if not st.amps:
            continue
        n_tot = int(next(iter(st.amps))).bit_count()
        ground_by_n.setdefault(n_tot, []).append(st)

    left_by_n = _embedded_ground_states(L, lam, (1, L - 3))
    right_by_n = _embedded_ground_states(L, lam, (L - 8, L))

    tiling_mask = {}
    if with_reduction:
        for t in all_tilings(L):
            c = particle_content(t)
            tiling_mask.setdefault(int(c).bit_count(), set()).add(c)

    eps = 0.0
    eps_red = 0.0
    for N in range(L + 1):
        b1 = _column_matrix(left_by_n.get(N, []), sectors[N], dims[N])
        b2 = _column_matrix(right_by_n.get(N, []), sectors[N], dims[N])
        if b1.shape[1] == 0 or b2.shape[1] == 0:
            continue
        bg = _column_matrix(ground_by_n.get(N, []), sectors[N], dims[N])
        b2t_b1 = (b2.T @ b1).toarray()
        if bg.shape[1]:
            b2t_bg = (b2.T @ bg).toarray()
            bgt_b1 = (bg.T @ b1).toarray()
            core = b2t_b1 - b2t_bg @ bgt_b1
        else:
            core = b2t_b1
        eps = max(eps, float(np.linalg.norm(core, 2)))
        if with_reduction:
            mask = np.zeros(dims[N])
            for c in tiling_mask.get(N, ()):
                mask[sectors[N][c]] = 1.0
            D = sparse.diags(mask)
            cb1 = (D @ b1).tocsc()
            b2t_cb1 = (b2.T @ cb1).toarray()
            if bg.shape[1]:
                core_red = b2t_cb1 - (b2.T @ bg).toarray() @ (bg.T @ cb1).toarray()
            else:
                core_red = b2t_cb1
            eps_red = max(eps_red, float(np.linalg.norm(core_red, 2)))
    if with_reduction:
        return eps, eps_red
    return eps


def reduction_identity_gap(L, lam):
    """|eps - eps_with_tiling_projector|; zero up to roundoff."""
    eps, eps_red = martingale_epsilon(L, lam, with_reduction=True)
    return abs(eps - eps_red)


# --- report assembly ---------------------------------------------------------


def bounds_report(lam, kappa=None, knabe_n=2, martingale_L=11, zero_tol=1e-10):
    """All certificate numbers for one coupling, as a plain dict
    (the CLI serializes this to JSON)."""
    from .hamiltonian import physical_kappa

    if kappa is None:
        kappa = physical_kappa(lam)
    params = ModelParams(lam, kappa)
    r = lam * lam
    f_value, f_certified = f_approx(r)
    threshold_ok = f_certified is not None and f_certified < 1.0 / 3.0
    small_gaps = [chain_gap(m, params, "open", zero_tol)[0] for m in (8, 9, 10)]
    report = {
        "lambda": lam,
        "kappa": kappa,
        "r": r,
        "f_value": f_value,
        "f_certified": f_certified,
        "threshold_ok": threshold_ok,
        "small_gaps": small_gaps,
        "obc_bound": obc_gap_bound(lam, small_gaps),
    }
    if knabe_n is not None:
        ki = knabe_inputs(params, knabe_n, zero_tol)
        report["knabe"] = {
            "n": ki.n,
            "gamma": ki.gamma,
            "Gamma": ki.Gamma,
            "g_n": ki.g_n,
            "criterion_ok": ki.criterion_ok,
            "pbc_bound": periodic_gap_bound(ki),
        }
    if martingale_L is not None and lam > 0:
        eps = martingale_epsilon(martingale_L, lam)
        report["martingale"] = {"L": martingale_L, "epsilon_sq": eps * eps}
    return report
