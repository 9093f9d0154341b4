"""Void-monomer-dimer (VMD) domino combinatorics on finite intervals.

An interval [1, L] is covered by dominoes from a fixed catalog: voids
(1 site, empty), monomers (3 sites, particle on the first site), dimers
(6 sites, particles on sites 2-3) and boundary-truncated variants.  A
*root tiling* uses only voids, monomers and the four boundary tiles; the
full set of VMD tilings is generated from roots by substituting adjacent
monomer pairs with dimers.  Every VMD tiling maps injectively to an
occupation bit pattern, and this module supplies both directions of that
map together with enumeration, counting, and the diagonal projector onto
tiling configurations.

Configurations are packed into Python ints with site 1 at bit 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy import sparse


class Domino(Enum):
    """Domino catalog: token, covered length, particle offsets, dimer weight.

    ``weighted`` marks tiles contributing one factor of the squeezing
    parameter to a state amplitude (all dimer-type tiles).
    """

    VOID = ("v", 1, (), False)
    MONOMER = ("m", 3, (0,), False)
    DIMER = ("d", 6, (1, 2), True)
    LEFT_DIMER = ("dl", 5, (0, 1), True)
    RIGHT_DIMER = ("dr", 3, (1, 2), True)
    RIGHT_1MONOMER = ("m1", 1, (0,), False)
    RIGHT_2MONOMER = ("m2", 2, (0,), False)
    TRUNC_1DIMER = ("d1", 4, (1, 2), True)
    TRUNC_2DIMER = ("d2", 5, (1, 2), True)

    def __init__(self, token, length, particle_offsets, dimer_weighted):
        self.token = token
        self.length = length
        self.particle_offsets = particle_offsets
        self.dimer_weighted = dimer_weighted

    @property
    def rank(self):
        """Position in the canonical kind order used for sorting."""
        return _KIND_RANK[self]


# Canonical kind order for deterministic enumeration output.
_KIND_ORDER = (
    Domino.VOID,
    Domino.MONOMER,
    Domino.DIMER,
    Domino.LEFT_DIMER,
    Domino.RIGHT_DIMER,
    Domino.RIGHT_1MONOMER,
    Domino.RIGHT_2MONOMER,
    Domino.TRUNC_1DIMER,
    Domino.TRUNC_2DIMER,
)
_KIND_RANK = {kind: i for i, kind in enumerate(_KIND_ORDER)}
_TOKEN_TO_KIND = {kind.token: kind for kind in Domino}

# Tiles allowed in roots at the two edges; interior tiles are voids/monomers.
LEFT_BC = (None, Domino.LEFT_DIMER)
RIGHT_BC = (None, Domino.RIGHT_DIMER, Domino.RIGHT_1MONOMER, Domino.RIGHT_2MONOMER)


@dataclass(frozen=True)
class RootTiling:
    """A root tiling of [1, L]: boundary tiles plus voids and monomers.

    ``voids`` and ``monomer_starts`` are sorted site indices; together with
    the boundary tiles they must cover [1, L] exactly.
    """

    length: int
    left_bc: Domino | None
    right_bc: Domino | None
    voids: tuple[int, ...]
    monomer_starts: tuple[int, ...]

    def dominoes(self):
        """Ordered (kind, start_site) covering of the interval."""
        tiles = []
        if self.left_bc is not None:
            tiles.append((self.left_bc, 1))
        tiles.extend((Domino.VOID, x) for x in self.voids)
        tiles.extend((Domino.MONOMER, x) for x in self.monomer_starts)
        tiles.sort(key=lambda t: t[1])
        if self.right_bc is not None:
            tiles.append((self.right_bc, self.length - self.right_bc.length + 1))
        return tiles

    def particle_count(self):
        n = len(self.monomer_starts)
        if self.left_bc is not None:
            n += 2
        if self.right_bc is not None:
            n += len(self.right_bc.particle_offsets)
        return n

    def sort_key(self):
        return tuple(kind.rank for kind, _ in self.dominoes())


@dataclass(frozen=True)
class VmdTiling:
    """Ordered domino covering of [1, L], dimers included.

    ``dimer_count`` counts the dimer-weighted tiles, i.e. the power of the
    squeezing parameter carried by the corresponding basis configuration.
    """

    dominoes: tuple[tuple[Domino, int], ...]

    @property
    def length(self):
        kind, start = self.dominoes[-1]
        return start + kind.length - 1

    @property
    def dimer_count(self):
        return sum(1 for kind, _ in self.dominoes if kind.dimer_weighted)


def _validate_root(root):
    pos = 1
    for kind, start in root.dominoes():
        if start != pos:
            raise ValueError(f"root tiles do not abut at site {pos}")
        if kind in (Domino.DIMER, Domino.TRUNC_1DIMER, Domino.TRUNC_2DIMER):
            raise ValueError("truncated/basic dimers cannot appear in a root")
        pos += kind.length
    if pos != root.length + 1:
        raise ValueError("root tiles do not cover the interval")


@lru_cache(maxsize=None)
def _interior_count(n):
    """Number of tilings of n sites by voids and monomers (exact int)."""
    if n < 0:
        return 0
    if n < 3:
        return 1
    a, b, c = 1, 1, 1  # counts for lengths n-3, n-2, n-1
    for _ in range(3, n + 1):
        a, b, c = b, c, c + a
    return c


def count_roots(L):
    """Number of root tilings of [1, L], by the void/monomer recursion
    summed over all boundary-tile pairs that fit the interval.
    """
    if L < 0:
        raise ValueError("interval length must be nonnegative")
    if L == 0:
        return 0
    total = 0
    for left in LEFT_BC:
        for right in RIGHT_BC:
            covered = (left.length if left else 0) + (right.length if right else 0)
            if covered <= L:
                total += _interior_count(L - covered)
    return total


def _interior_fillings(start, n):
    """All void/monomer coverings of n sites starting at ``start``,
    as (voids, monomer_starts) tuples."""
    if n == 0:
        return [((), ())]
    out = []
    # void first
    for voids, monos in _interior_fillings(start + 1, n - 1):
        out.append(((start,) + voids, monos))
    # monomer first
    if n >= 3:
        for voids, monos in _interior_fillings(start + 3, n - 3):
            out.append((voids, (start,) + monos))
    return out


def enumerate_roots(L):
    """Every root tiling of [1, L] exactly once, sorted lexicographically
    by the domino-kind sequence (kind order: v < m < d < dl < dr < m1 < m2).
    """
    if L < 0:
        raise ValueError("interval length must be nonnegative")
    if L == 0:
        return []
    roots = []
    for left in LEFT_BC:
        for right in RIGHT_BC:
            llen = left.length if left else 0
            rlen = right.length if right else 0
            mid = L - llen - rlen
            if mid < 0:
                continue
            for voids, monos in _interior_fillings(llen + 1, mid):
                roots.append(RootTiling(L, left, right, voids, monos))
    roots.sort(key=RootTiling.sort_key)
    return roots


def _expand_run(kinds, starts):
    """Monomer-dimer coverings of a run of monomer slots.

    ``kinds`` lists the slot tiles of the root run, i.e. some MONOMERs
    optionally followed by one right boundary monomer.  A dimer may replace
    two adjacent slots; replacing (MONOMER, RIGHT_jMONOMER) yields the
    truncated j-dimer.
    """
    if not kinds:
        return [()]
    out = []
    first = (kinds[0], starts[0])
    for rest in _expand_run(kinds[1:], starts[1:]):
        out.append((first,) + rest)
    if len(kinds) >= 2 and kinds[0] is Domino.MONOMER:
        if kinds[1] is Domino.MONOMER:
            merged = Domino.DIMER
        elif kinds[1] is Domino.RIGHT_1MONOMER:
            merged = Domino.TRUNC_1DIMER
        elif kinds[1] is Domino.RIGHT_2MONOMER:
            merged = Domino.TRUNC_2DIMER
        else:
            merged = None
        if merged is not None:
            for rest in _expand_run(kinds[2:], starts[2:]):
                out.append(((merged, starts[0]),) + rest)
    return out


def expand_root(root):
    """All VMD tilings derived from ``root`` by substituting disjoint
    adjacent monomer pairs (the root itself included).  Boundary dimers
    never participate in substitutions.
    """
    _validate_root(root)
    tiles = root.dominoes()
    # split into maximal substitutable runs and fixed tiles
    groups = []  # list of ('fixed', (kind, start)) or ('run', kinds, starts)
    run_kinds, run_starts = [], []
    for kind, start in tiles:
        if kind is Domino.MONOMER or (
            kind in (Domino.RIGHT_1MONOMER, Domino.RIGHT_2MONOMER) and run_kinds
        ):
            run_kinds.append(kind)
            run_starts.append(start)
        else:
            if run_kinds:
                groups.append(("run", tuple(run_kinds), tuple(run_starts)))
                run_kinds, run_starts = [], []
            groups.append(("fixed", (kind, start)))
    if run_kinds:
        groups.append(("run", tuple(run_kinds), tuple(run_starts)))

    expansions = [()]
    for group in groups:
        if group[0] == "fixed":
            expansions = [prefix + (group[1],) for prefix in expansions]
        else:
            _, kinds, starts = group
            variants = _expand_run(list(kinds), list(starts))
            expansions = [p + v for p in expansions for v in variants]
    return [VmdTiling(tuple(t)) for t in expansions]


def particle_content(tiling):
    """Packed occupation bits of a tiling (site 1 = bit 0)."""
    bits = 0
    for kind, start in tiling.dominoes:
        for off in kind.particle_offsets:
            bits |= 1 << (start + off - 1)
    return bits


def content_of_root(root):
    bits = 0
    for kind, start in root.dominoes():
        for off in kind.particle_offsets:
            bits |= 1 << (start + off - 1)
    return bits


def parse_configuration(bits, L):
    """The unique VMD tiling whose particle content equals ``bits``, or
    ``None`` if the configuration is not in the image of the content map.

    Single deterministic pass: ``11`` at the left edge forces the left
    dimer; an interior ``011`` starts a dimer whose kind is fixed by the
    distance to the right edge; any other particle starts a monomer-type
    tile.  Injectivity of the content map guarantees at most one parse.
    """
    if bits < 0 or bits >> L:
        raise ValueError("configuration bits exceed the interval")

    def bit(x):  # 1-based site
        return (bits >> (x - 1)) & 1

    tiles = []
    x = 1
    while x <= L:
        rem = L - x + 1
        if bit(x):
            if x == 1 and rem >= 2 and bit(2):
                # only the left dimer starts with two particles
                if rem >= 5 and not (bit(3) or bit(4) or bit(5)):
                    tiles.append((Domino.LEFT_DIMER, 1))
                    x += 5
                    continue
                return None
            if rem >= 3:
                if bit(x + 1) or bit(x + 2):
                    return None
                tiles.append((Domino.MONOMER, x))
                x += 3
            elif rem == 2:
                if bit(x + 1):
                    return None
                tiles.append((Domino.RIGHT_2MONOMER, x))
                x += 2
            else:
                tiles.append((Domino.RIGHT_1MONOMER, x))
                x += 1
        else:
            if rem >= 3 and bit(x + 1) and bit(x + 2):
                if rem == 3:
                    tiles.append((Domino.RIGHT_DIMER, x))
                    x += 3
                elif rem == 4:
                    if bit(x + 3):
                        return None
                    tiles.append((Domino.TRUNC_1DIMER, x))
                    x += 4
                elif rem == 5:
                    if bit(x + 3) or bit(x + 4):
                        return None
                    tiles.append((Domino.TRUNC_2DIMER, x))
                    x += 5
                else:
                    if bit(x + 3) or bit(x + 4) or bit(x + 5):
                        return None
                    tiles.append((Domino.DIMER, x))
                    x += 6
            else:
                tiles.append((Domino.VOID, x))
                x += 1
    return VmdTiling(tuple(tiles))


_REVERSE_SUBST = {
    Domino.DIMER: (Domino.MONOMER, Domino.MONOMER),
    Domino.TRUNC_1DIMER: (Domino.MONOMER, Domino.RIGHT_1MONOMER),
    Domino.TRUNC_2DIMER: (Domino.MONOMER, Domino.RIGHT_2MONOMER),
}


def root_of(tiling):
    """The unique root of a VMD tiling: reverse-substitute every interior
    and truncated dimer (boundary dimers stay)."""
    left_bc = None
    right_bc = None
    voids = []
    monos = []
    for kind, start in tiling.dominoes:
        if kind in _REVERSE_SUBST:
            first, second = _REVERSE_SUBST[kind]
            monos.append(start)
            if second is Domino.MONOMER:
                monos.append(start + 3)
            else:
                right_bc = second
        elif kind is Domino.VOID:
            voids.append(start)
        elif kind is Domino.MONOMER:
            monos.append(start)
        elif kind is Domino.LEFT_DIMER:
            left_bc = kind
        else:
            right_bc = kind
    return RootTiling(tiling.length, left_bc, right_bc, tuple(voids), tuple(monos))


def induced_tiling(tiling, sub):
    """Tiling on the subinterval ``sub = (a, b)`` whose particle content is
    the restriction of ``tiling``'s.  Requires b - a + 1 >= 5: the boundary
    catalog is complete only from five sites up.
    """
    a, b = sub
    if b - a + 1 < 5:
        raise ValueError("induced tilings need subintervals of at least 5 sites")
    if a < 1 or b > tiling.length:
        raise ValueError("subinterval not contained in the tiling's interval")
    bits = particle_content(tiling)
    mask = ((1 << (b - a + 1)) - 1)
    sub_bits = (bits >> (a - 1)) & mask
    induced = parse_configuration(sub_bits, b - a + 1)
    if induced is None:
        raise ValueError("restriction is not a tiling configuration")
    return induced


def max_particle_number(L):
    """Maximal particle count over all roots of [1, L] and a witness."""
    best = None
    for root in enumerate_roots(L):
        n = root.particle_count()
        if best is None or n > best[0]:
            best = (n, root)
    if best is None:
        raise ValueError("empty interval has no roots")
    return best


def all_tilings(L):
    """Every VMD tiling of [1, L] (disjoint union over roots)."""
    out = []
    for root in enumerate_roots(L):
        out.extend(expand_root(root))
    return out


def tiling_projector(L, max_dense=14):
    """Diagonal 0/1 projector onto tiling configurations of [1, L],
    as a sparse matrix on the full 2**L occupation basis."""
    if L > max_dense:
        raise ValueError(f"2**{L} exceeds the dense budget (L <= {max_dense})")
    diag = np.zeros(2**L)
    for t in all_tilings(L):
        diag[particle_content(t)] = 1.0
    return sparse.diags(diag, format="csr")


def monomer_root(L):
    """The pure-monomer root of [1, L]: monomers padded by a right 1- or
    2-monomer when L is not a multiple of three."""
    if L < 1:
        raise ValueError("interval length must be positive")
    n, rem = divmod(L, 3)
    monos = tuple(range(1, 3 * n + 1, 3))
    right = None
    if rem == 1:
        right = Domino.RIGHT_1MONOMER
    elif rem == 2:
        right = Domino.RIGHT_2MONOMER
    return RootTiling(L, None, right, (), monos)


def roots_by_particle_number(L):
    """Map N -> number of roots of [1, L] with N particles."""
    counts = {}
    for root in enumerate_roots(L):
        n = root.particle_count()
        counts[n] = counts.get(n, 0) + 1
    return counts


# --- text grammar -----------------------------------------------------------

def root_to_text(root):
    """Whitespace-separated domino tokens, e.g. ``dl m m v m m2``."""
    return " ".join(kind.token for kind, _ in root.dominoes())


def root_from_text(text, length=None):
    """Parse the token grammar back into a root tiling.

    With ``length`` given, the tokens must cover exactly that many sites.
    """
    kinds = []
    for token in text.split():
        kind = _TOKEN_TO_KIND.get(token)
        if kind is None:
            raise ValueError(f"unknown domino token {token!r}")
        kinds.append(kind)
    if not kinds:
        raise ValueError("empty root description")
    covered = sum(k.length for k in kinds)
    if length is not None and covered != length:
        raise ValueError(f"tokens cover {covered} sites, expected {length}")
    left_bc = None
    right_bc = None
    voids = []
    monos = []
    pos = 1
    for i, kind in enumerate(kinds):
        if kind is Domino.LEFT_DIMER:
            if i != 0:
                raise ValueError("left dimer must be the first tile")
            left_bc = kind
        elif kind in (Domino.RIGHT_DIMER, Domino.RIGHT_1MONOMER, Domino.RIGHT_2MONOMER):
            if i != len(kinds) - 1:
                raise ValueError("right boundary tile must be the last tile")
            right_bc = kind
        elif kind is Domino.VOID:
            voids.append(pos)
        elif kind is Domino.MONOMER:
            monos.append(pos)
        else:
            raise ValueError(f"{kind.token!r} is not a root tile")
        pos += kind.length
    root = RootTiling(covered, left_bc, right_bc, tuple(voids), tuple(monos))
    _validate_root(root)
    return root


def tiling_to_text(tiling):
    return " ".join(kind.token for kind, _ in tiling.dominoes)


def bits_to_string(bits, L):
    """Occupation string with site 1 leftmost, e.g. 011000 for a dimer."""
    return "".join("1" if (bits >> x) & 1 else "0" for x in range(L))


def string_to_bits(s):
    bits = 0
    for i, ch in enumerate(s):
        if ch == "1":
            bits |= 1 << i
        elif ch != "0":
            raise ValueError("occupation strings contain only 0 and 1")
    return bits
