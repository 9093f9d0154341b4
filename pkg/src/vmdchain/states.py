"""Fragmented-MPS ground states in the occupation basis.

A root tiling R labels the state sum_D lambda^{#dimers(D)} |content(D)>
over all tilings D derived from R.  States are kept unnormalized (the
closed-form norms below supply normalization at use sites) and sparse:
a dict from packed configuration to real amplitude.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import sparse

from .tiling import (
    Domino,
    RootTiling,
    bits_to_string,
    enumerate_roots,
    expand_root,
    monomer_root,
    particle_content,
    string_to_bits,
)


@dataclass
class SparseState:
    """Sparse real vector on the occupation basis of [1, length].

    Amplitudes are stored for nonzero entries only.  The empty interval
    (length 0) is the scalar 1, represented as {0: amp}.
    """

    length: int
    amps: dict[int, float] = field(default_factory=dict)

    def norm_sq(self):
        return sum(a * a for a in self.amps.values())

    def inner(self, other):
        if other.length != self.length:
            raise ValueError("states live on different intervals")
        small, big = (self.amps, other.amps) if len(self.amps) <= len(other.amps) else (other.amps, self.amps)
        return sum(a * big.get(c, 0.0) for c, a in small.items())

    def tensor(self, other):
        """Tensor product with ``other`` placed to the right (higher sites)."""
        shift = self.length
        amps = {}
        for c1, a1 in self.amps.items():
            for c2, a2 in other.amps.items():
                amps[c1 | (c2 << shift)] = a1 * a2
        return SparseState(self.length + other.length, amps)

    def scale(self, factor):
        if factor == 0.0:
            return SparseState(self.length, {})
        return SparseState(self.length, {c: factor * a for c, a in self.amps.items()})

    def add(self, other):
        if other.length != self.length:
            raise ValueError("states live on different intervals")
        amps = dict(self.amps)
        for c, a in other.amps.items():
            s = amps.get(c, 0.0) + a
            if s == 0.0:
                amps.pop(c, None)
            else:
                amps[c] = s
        return SparseState(self.length, amps)

    def to_dense(self):
        vec = np.zeros(2**self.length)
        for c, a in self.amps.items():
            vec[c] = a
        return vec

    def to_json(self):
        terms = [
            {"config": bits_to_string(c, self.length), "amp": a}
            for c, a in sorted(self.amps.items())
        ]
        return json.dumps({"length": self.length, "terms": terms})

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        amps = {string_to_bits(t["config"]): float(t["amp"]) for t in data["terms"]}
        return cls(int(data["length"]), amps)


SCALAR_ONE = SparseState(0, {0: 1.0})


def basis_state(bits, length):
    return SparseState(length, {bits: 1.0})


def vmd_state(root, lam):
    """Unnormalized ground state labeled by ``root``: each derived tiling
    contributes its configuration weighted by lam**(number of dimer-type
    tiles, boundary dimers included)."""
    amps = {}
    for tiling in expand_root(root):
        amp = float(lam) ** tiling.dimer_count
        if amp != 0.0:
            amps[particle_content(tiling)] = amp
    return SparseState(root.length, amps)


def squeezed_tt(n, j=3, lam=1.0):
    """The squeezed Tao-Thouless fragment of n monomers, the last of
    length j, on 3(n-1)+j sites; n = 0 gives the empty-interval scalar."""
    if n < 0:
        raise ValueError("monomer count must be nonnegative")
    if j not in (1, 2, 3):
        raise ValueError("last monomer length must be 1, 2 or 3")
    if n == 0:
        return SparseState(0, {0: 1.0})
    return vmd_state(monomer_root(3 * (n - 1) + j), lam)


# configurations of the (truncated) dimer tiles, used by the recursions
SIGMA_D = {1: "0110", 2: "01100", 3: "011000"}


def eta_state(n, j, lam):
    """The excitation fragment orthogonal to the n-monomer state:
    -lam * alpha_{n-1} phi_{n-1} (x) phi_1^{(j)}  +  phi_{n-2} (x) |dimer_j>.
    """
    if n < 2:
        raise ValueError("excitation fragments need n >= 2")
    first = squeezed_tt(n - 1, 3, lam).tensor(squeezed_tt(1, j, lam))
    second = squeezed_tt(n - 2, 3, lam).tensor(
        basis_state(string_to_bits(SIGMA_D[j]), len(SIGMA_D[j]))
    )
    return first.scale(-lam * alpha(n - 1, lam * lam)).add(second)


def norm_sq_closed(n, r):
    """Squared norm of the n-monomer fragment at weight r = lambda**2:
    (mu_+^{n+1} - mu_-^{n+1}) / (mu_+ - mu_-)."""
    s = np.sqrt(1.0 + 4.0 * np.asarray(r, dtype=float))
    mu_p = (1.0 + s) / 2.0
    mu_m = (1.0 - s) / 2.0
    val = (mu_p ** (n + 1) - mu_m ** (n + 1)) / (mu_p - mu_m)
    return float(val) if np.isscalar(r) or np.ndim(r) == 0 else val


def alpha(n, r):
    """Norm ratio |phi_{n-1}|^2 / |phi_n|^2 = (1 - mu^n)/(mu_+ (1 - mu^{n+1}))."""
    if n < 1:
        raise ValueError("alpha is defined for n >= 1")
    r = np.asarray(r, dtype=float)
    s = np.sqrt(1.0 + 4.0 * r)
    mu_p = (1.0 + s) / 2.0
    mu = (1.0 - s) / (1.0 + s)
    val = (1.0 - mu**n) / (mu_p * (1.0 - mu ** (n + 1)))
    return float(val) if np.ndim(val) == 0 else val


def norm_sq_exact(n, r):
    """Exact-rational norm recursion C_n = C_{n-1} + r C_{n-2}; oracle for
    the closed form."""
    r = Fraction(r)
    a, b = Fraction(1), Fraction(1)  # C_0, C_1
    for _ in range(max(n - 1, 0)):
        a, b = b, b + r * a
    return a if n == 0 else b


def alpha_exact(n, r):
    return norm_sq_exact(n - 1, r) / norm_sq_exact(n, r)


def ground_projector(L, lam, as_sparse=True):
    """Orthogonal projector onto the span of all (normalized) root states
    of [1, L].  For L = 7 the kernel picks up one extra configuration,
    1100011, which is appended to the basis."""
    if L < 5:
        raise ValueError("ground projectors are built for L >= 5")
    if L > 14:
        raise ValueError("2**L exceeds the dense budget (L <= 14)")
    dim = 2**L
    rows, cols, vals = [], [], []
    for psi in ground_basis(L, lam):
        nrm = psi.norm_sq()
        if nrm == 0.0:
            continue
        items = list(psi.amps.items())
        for c1, a1 in items:
            for c2, a2 in items:
                rows.append(c1)
                cols.append(c2)
                vals.append(a1 * a2 / nrm)
    G = sparse.coo_matrix((vals, (rows, cols)), shape=(dim, dim)).tocsr()
    return G if as_sparse else G.toarray()


def ground_basis(L, lam):
    """Orthogonal (unnormalized) basis of the zero-energy space of the
    open chain on [1, L]: the root states, plus |1100011> when L = 7."""
    states = [vmd_state(root, lam) for root in enumerate_roots(L)]
    if L == 7:
        states.append(basis_state(string_to_bits("1100011"), 7))
    return states


def fragmented_form(root, lam):
    """Reassemble the root state as the tensor product of boundary factors,
    voids and monomer fragments read off the root tiling; equals
    ``vmd_state(root, lam)`` and exercises the fragmentation theorem."""
    state = SCALAR_ONE
    run = 0  # pending count of consecutive basic monomers

    def flush(state, run, j=3):
        return state.tensor(squeezed_tt(run, j, lam)) if run else state

    for kind, _start in root.dominoes():
        if kind is Domino.MONOMER:
            run += 1
        elif kind is Domino.RIGHT_1MONOMER:
            state, run = flush(state, run + 1, 1), 0
        elif kind is Domino.RIGHT_2MONOMER:
            state, run = flush(state, run + 1, 2), 0
        elif kind is Domino.VOID:
            state, run = flush(state, run), 0
            state = state.tensor(basis_state(0, 1))
        elif kind is Domino.LEFT_DIMER:
            state = state.tensor(basis_state(string_to_bits("11000"), 5).scale(lam))
        elif kind is Domino.RIGHT_DIMER:
            state, run = flush(state, run), 0
            state = state.tensor(basis_state(string_to_bits("011"), 3).scale(lam))
        else:
            raise ValueError("roots contain no substituted dimers")
    return flush(state, run)
