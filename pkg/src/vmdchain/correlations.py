"""Diagonal correlation functions of root states at large volume.

Expectations of products of single-site occupation weights factorize over
the fragments of a root state, and inside each monomer run they obey the
same two-term recursion as the norm.  The forward DP below evaluates any
such observable in O(L) without materializing a state vector, with
per-step renormalization so chains of thousands of sites stay in range.

Also here: the closed-form densities and string order of the squeezed
Tao-Thouless state, the single-dislocation expectations, and correlators
of dislocation states smeared over the void position.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .states import alpha
from .tiling import Domino, RootTiling, monomer_root


@dataclass
class DiagonalObservable:
    """Product of per-site occupation weights; sites off the support
    weigh 1.  ``factors[x] = (w0, w1)`` is the weight of n_x = 0 / 1."""

    factors: dict[int, tuple[float, float]] = field(default_factory=dict)

    @classmethod
    def occupation(cls, *sites):
        """n_{x1} n_{x2} ... as an observable."""
        return cls({x: (0.0, 1.0) for x in sites})

    def times(self, other):
        merged = dict(self.factors)
        for x, (w0, w1) in other.factors.items():
            a0, a1 = merged.get(x, (1.0, 1.0))
            merged[x] = (a0 * w0, a1 * w1)
        return DiagonalObservable(merged)

    def weight(self, x, occ):
        w = self.factors.get(x)
        if w is None:
            return 1.0
        return w[occ]

    def sup_norm(self):
        out = 1.0
        for w0, w1 in self.factors.values():
            out *= max(abs(w0), abs(w1))
        return out

    def support(self):
        return set(self.factors)


def decay_rate(lam):
    """Correlation decay rate (1/3) ln((sqrt(4 lam^2+1)+1)/(sqrt(4 lam^2+1)-1));
    diverges as lam -> 0 (the product-state limit)."""
    if lam <= 0:
        raise ValueError("the decay rate is defined for lambda > 0")
    s = math.sqrt(4.0 * lam * lam + 1.0)
    return math.log((s + 1.0) / (s - 1.0)) / 3.0


def tt_density_exact(site_class, r):
    """Bulk density of the squeezed Tao-Thouless state by residue class:
    1/sqrt(4r+1) on the particle sites (class 0) and (1 - 1/sqrt(4r+1))/2
    on the two neighbor classes (+-1)."""
    peak = 1.0 / math.sqrt(4.0 * r + 1.0)
    if site_class == 0:
        return peak
    if site_class in (1, -1):
        return (1.0 - peak) / 2.0
    raise ValueError("site_class must be 0, +1 or -1")


def _segments(root):
    """Split a root into fixed tiles and substitutable monomer runs.

    Returns a list of ('fixed', kind, start) and
    ('run', [(start, length), ...]) entries; a run's slots are its basic
    monomers plus an optional trailing right 1-/2-monomer.
    """
    segs = []
    run = []
    for kind, start in root.dominoes():
        extend = kind is Domino.MONOMER or (
            run and kind in (Domino.RIGHT_1MONOMER, Domino.RIGHT_2MONOMER)
        )
        if extend:
            run.append((start, kind.length))
        else:
            if run:
                segs.append(("run", run))
                run = []
            segs.append(("fixed", kind, start))
    if run:
        segs.append(("run", run))
    return segs


def _fixed_weight(obs, kind, start):
    out = 1.0
    particles = set(kind.particle_offsets)
    for off in range(kind.length):
        out *= obs.weight(start + off, 1 if off in particles else 0)
    return out


def _monomer_weight(obs, start, length):
    out = obs.weight(start, 1)
    for off in range(1, length):
        out *= obs.weight(start + off, 0)
    return out


def _dimer_weight(obs, start, total_len):
    """Weight of the (possibly truncated) dimer pattern 011 0...0 covering
    two adjacent slots starting at ``start``."""
    out = obs.weight(start, 0) * obs.weight(start + 1, 1) * obs.weight(start + 2, 1)
    for off in range(3, total_len):
        out *= obs.weight(start + off, 0)
    return out


def _run_ratio(obs, slots, r):
    """<weights> over one monomer run: numerator and denominator DPs share
    the recursion a_k = m_k a_{k-1} + r d_k a_{k-2}, renormalized each step
    by the denominator."""
    a_prev2, a_prev = 1.0, None
    b_prev2, b_prev = 1.0, None
    for k, (start, length) in enumerate(slots):
        m_k = _monomer_weight(obs, start, length)
        if k == 0:
            a_prev, b_prev = m_k, 1.0
            continue
        prev_start = slots[k - 1][0]
        d_k = _dimer_weight(obs, prev_start, 3 + length)
        a = m_k * a_prev + r * d_k * a_prev2
        b = b_prev + r * b_prev2
        a_prev2, a_prev = a_prev / b, a / b
        b_prev2, b_prev = b_prev / b, 1.0
    return a_prev / b_prev


def diag_expectation(root, lam, obs):
    """Normalized expectation <psi, O psi>/||psi||^2 of a product-form
    diagonal observable in the root state, via the fragment DP."""
    L = root.length
    for x in obs.support():
        if not 1 <= x <= L:
            raise ValueError(f"observable site {x} outside [1, {L}]")
    r = lam * lam
    out = 1.0
    for seg in _segments(root):
        if seg[0] == "fixed":
            _, kind, start = seg
            out *= _fixed_weight(obs, kind, start)
        else:
            out *= _run_ratio(obs, seg[1], r)
    return out


def brute_expectation(root, lam, obs):
    """Direct expectation on the expanded state vector; oracle for the DP."""
    from .states import vmd_state

    psi = vmd_state(root, lam)
    num = 0.0
    den = 0.0
    for config, amp in psi.amps.items():
        w = 1.0
        for x, (w0, w1) in obs.factors.items():
            w *= w1 if (config >> (x - 1)) & 1 else w0
        num += amp * amp * w
        den += amp * amp
    return num / den


def truncated_pair(root, lam, x, y):
    """<n_x n_y> - <n_x><n_y> in the root state."""
    if x == y:
        raise ValueError("the truncated pair needs two distinct sites")
    both = diag_expectation(root, lam, DiagonalObservable.occupation(x, y))
    nx = diag_expectation(root, lam, DiagonalObservable.occupation(x))
    ny = diag_expectation(root, lam, DiagonalObservable.occupation(y))
    return both - nx * ny


def fit_decay(root, lam, sites, d_min=30, d_max=150, floor=1e-13):
    """Fitted exponential decay rate of |<n_x n_y> - <n_x><n_y>| over the
    given (same-residue) sites: the |slope| of ln|truncated| against
    separation, using pairs with separation in [d_min, d_max] and
    magnitudes above ``floor``."""
    sites = sorted(sites)
    singles = {
        x: diag_expectation(root, lam, DiagonalObservable.occupation(x))
        for x in sites
    }
    seps, logs = [], []
    for i, x in enumerate(sites):
        for y in sites[i + 1:]:
            d = y - x
            if d < d_min or d > d_max:
                continue
            both = diag_expectation(root, lam, DiagonalObservable.occupation(x, y))
            t = both - singles[x] * singles[y]
            if abs(t) < floor:
                continue
            seps.append(d)
            logs.append(math.log(abs(t)))
    if len(seps) < 4:
        raise ValueError(f"only {len(seps)} usable pairs; need at least 4")
    slope = np.polyfit(np.asarray(seps), np.asarray(logs), 1)[0]
    return abs(float(slope))


def string_order(k, ell, lam, L):
    """String-order expectations (O^z, Obar^z) between blocks 3k and
    3 ell in the pure-monomer root state on [1, L].

    O^z dresses the endpoint differences -(n_{3k+2} - n_{3k}) and
    (n_{3 ell+2} - n_{3 ell}) with the parity string; Obar^z is the bare
    string exp(i pi sum (n_{3j+2} - n_{3j})).
    """
    if not (0 < k < ell):
        raise ValueError("need 0 < k < ell")
    if 3 * ell + 2 > L:
        raise ValueError("string endpoint outside the interval")
    root = monomer_root(L)
    string = DiagonalObservable(
        {x: (1.0, -1.0) for j in range(k + 1, ell) for x in (3 * j, 3 * j + 2)}
    )
    oz_bar = diag_expectation(root, lam, string)
    oz = 0.0
    for left, sgn_l in ((3 * k + 2, 1.0), (3 * k, -1.0)):
        for right, sgn_r in ((3 * ell + 2, 1.0), (3 * ell, -1.0)):
            obs = string.times(DiagonalObservable.occupation(left, right))
            oz -= sgn_l * sgn_r * diag_expectation(root, lam, obs)
    return oz, oz_bar


def string_order_limits(r):
    """Long-distance limits of (O^z, Obar^z): ((sqrt(4r+1)-1)^2/(4r+1),
    1/(4r+1))."""
    s = math.sqrt(4.0 * r + 1.0)
    return (s - 1.0) ** 2 / (s * s), 1.0 / (s * s)


# --- single dislocation states ----------------------------------------------


def _consts(r):
    s = math.sqrt(4.0 * r + 1.0)
    mu_p = (1.0 + s) / 2.0
    mu = (1.0 - s) / (1.0 + s)
    return mu_p, mu, s  # mu_plus, mu, delta_mu


def dislocation_expectation(k, j, r):
    """Density <n_{3j}> in the infinite chain with a single void at 3k."""
    if r <= 0:
        raise ValueError("dislocation formulas need r > 0")
    mu_p, mu, dmu = _consts(r)
    if j == k:
        return 0.0
    base = (1.0 - mu ** abs(j - k)) / dmu
    return base if j < k else base * r / mu_p


def dislocation_pair(k, j, r):
    """Pair density <n_0 n_{3j}> (j > 1) in the single-void state at 3k."""
    if r <= 0:
        raise ValueError("dislocation formulas need r > 0")
    if j <= 1:
        raise ValueError("the pair formula is stated for j > 1")
    mu_p, mu, dmu = _consts(r)
    if j < k:
        return (1.0 - mu**j) * (1.0 - mu ** (k - j)) / dmu**2
    if k >= 0:
        return dislocation_expectation(k, 0, r) * dislocation_expectation(k, j, r)
    return (
        r**2
        / (mu_p**2 * dmu**2)
        * (1.0 - mu ** (j - 1))
        * (1.0 - mu ** (-k))
    )


def dislocation_truncated_pair(k, j, r):
    return dislocation_pair(k, j, r) - dislocation_expectation(
        k, 0, r
    ) * dislocation_expectation(k, j, r)


def dislocation_root(k, n):
    """Finite-volume stand-in for the single-void state: n+k monomers, a
    void, then n-k monomers, on 6n+1 sites.  Chain coordinate 3m sits at
    local site 3m + 3n + 1."""
    if abs(k) >= n:
        raise ValueError("void offset must satisfy |k| < n")
    monos = tuple(range(1, 3 * (n + k), 3)) + tuple(
        range(3 * (n + k) + 2, 6 * n + 1, 3)
    )
    return RootTiling(6 * n + 1, None, None, (3 * (n + k) + 1,), monos)


def dislocation_expectation_dp(k, j, r, n=200):
    """DP evaluation of <n_{3j}> on the finite dislocation state."""
    root = dislocation_root(k, n)
    site = 3 * j + 3 * n + 1
    return diag_expectation(root, math.sqrt(r), DiagonalObservable.occupation(site))


def dislocation_pair_dp(k, j, r, n=200):
    root = dislocation_root(k, n)
    x = 3 * n + 1
    y = 3 * j + 3 * n + 1
    return diag_expectation(
        root, math.sqrt(r), DiagonalObservable.occupation(x, y)
    )


# --- smeared dislocations -----------------------------------------------------


def inverse_square_weights(k_max):
    """c_k proportional to 1/k for k = 1..k_max, normalized in l^2."""
    norm = math.sqrt(sum(1.0 / k**2 for k in range(1, k_max + 1)))
    return {k: (1.0 / k) / norm for k in range(1, k_max + 1)}


def smeared_correlation(weights, j, r, tol=1e-9):
    """Truncated correlator <n_0 n_{3j}> - <n_0><n_{3j}> of the state
    smeared over void positions with amplitudes c_k (cross terms between
    distinct void positions vanish for diagonal observables)."""
    if j <= 1:
        raise ValueError("the smeared correlator is stated for j > 1")
    total = sum(c * c for c in weights.values())
    if abs(total - 1.0) > tol:
        raise ValueError(f"weights are not normalized: sum |c_k|^2 = {total}")
    pair = 0.0
    n0 = 0.0
    nj = 0.0
    for k, c in weights.items():
        p = c * c
        if p == 0.0:
            continue
        pair += p * dislocation_pair(k, j, r)
        n0 += p * dislocation_expectation(k, 0, r)
        nj += p * dislocation_expectation(k, j, r)
    return pair - n0 * nj


def clustering_bound(d, lam, norm_product=1.0):
    """Right side of the exponential clustering estimate:
    8 |A1||A2| exp(-c(lambda)(d - 20)/2)."""
    return 8.0 * norm_product * math.exp(-decay_rate(lam) * (d - 20.0) / 2.0)


class MonomerRunTable:
    """O(1) occupation correlators of the pure-monomer root on [1, L].

    Every site of the run reports either "its slot is a monomer" (slot
    offset 0) or "a dimer starts at its slot" (offsets 1 and 2), so all
    densities reduce to partition-function ratios of the slot chain.
    Independent of the forward DP; used as a fast batch path and as an
    oracle for it.
    """

    def __init__(self, L, lam, exact=False):
        self.L = L
        n, rem = divmod(L, 3)
        self.slots = n + (1 if rem else 0)
        if exact:
            from fractions import Fraction

            self.r = Fraction(lam) ** 2
            C = [Fraction(1), Fraction(1)]
        else:
            self.r = lam * lam
            C = [1.0, 1.0]
        # C[m] = partition function of m slots
        for m in range(2, self.slots + 1):
            C.append(C[m - 1] + self.r * C[m - 2])
        self.C = C

    def _event(self, x):
        """(slot index 1-based, kind) with kind 'm' = monomer at slot,
        'd' = dimer starting at slot."""
        if not 1 <= x <= self.L:
            raise ValueError("site outside the interval")
        slot, off = divmod(x - 1, 3)
        return (slot + 1, "m") if off == 0 else (slot + 1, "d")

    def density(self, x):
        i, kind = self._event(x)
        C, s, r = self.C, self.slots, self.r
        if kind == "m":
            return C[i - 1] * C[s - i] / C[s]
        if i + 1 > s:
            return 0
        return r * C[i - 1] * C[s - i - 1] / C[s]

    def pair(self, x, y):
        """<n_x n_y> for any two sites of the run."""
        (i, a), (j, b) = sorted((self._event(x), self._event(y)))
        C, s, r = self.C, self.slots, self.r
        if (i, a) == (j, b):
            return self.density(x)
        if i == j or (a == "d" and j == i + 1):
            return 0  # overlapping, incompatible coverings
        if a == "m" and b == "m":
            return C[i - 1] * C[j - i - 1] * C[s - j] / C[s]
        if a == "m" and b == "d":
            return r * C[i - 1] * C[j - i - 1] * C[s - j - 1] / C[s] if j < s else 0
        if a == "d" and b == "m":
            return r * C[i - 1] * C[j - i - 2] * C[s - j] / C[s]
        return (
            r * r * C[i - 1] * C[j - i - 2] * C[s - j - 1] / C[s] if j < s else 0
        )

    def truncated(self, x, y):
        return self.pair(x, y) - self.density(x) * self.density(y)


def trimming_envelope(n, r):
    """2 (1 + beta - beta^3) beta^n: the trimming bound on how much a
    norm-one diagonal observable expectation moves when the monomer tail
    grows beyond n fragments."""
    mu_p, mu, _ = _consts(r)
    beta = abs(mu)
    return 2.0 * (1.0 + beta - beta**3) * beta**n


def alpha_inequalities(N, r):
    """The three trimming inequalities at odd N: returns the tuple of
    slacks (all must be nonnegative):
    beta - (1 - a_N), (1 - a_N), (1 - a_{N+1}) - beta,
    beta(1+beta-beta^3) - (1 - a_{N+1}), beta^2 - (1-a_N)(1-a_{N+1})."""
    if N % 2 == 0:
        raise ValueError("stated for odd N")
    mu_p, mu, _ = _consts(r)
    beta = abs(mu)
    g_n = 1.0 - alpha(N, r)
    g_n1 = 1.0 - alpha(N + 1, r)
    return (
        beta - g_n,
        g_n,
        g_n1 - beta,
        beta * (1.0 + beta - beta**3) - g_n1,
        beta**2 - g_n * g_n1,
    )
