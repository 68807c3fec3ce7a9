"""Builders: the concatenation code S_tau, blockwise products of point
permutations, the Mollard composition, and the Hadamard analog A_tau.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from ._bits import parity
from .algebra import BitMatrix, PointPerm
from .codes import CosetUnionCode, ExplicitCode, LinearCode, extended_hamming
from .errors import BudgetExceeded

S_TAU_MAX_R = 5
HADAMARD_MAX_R = 4
MOLLARD_BUDGET_BITS = 20


def build_s_tau(tau: PointPerm) -> CosetUnionCode:
    """S_tau = union over a of (H + e_a + e_0) x (H + e_tau(a) + e_0).

    The base code is H x H with H the extended Hamming code of length
    2^r; the representative of coset a is (e_a + e_0 | e_tau(a) + e_0).
    Contains the all-zero word since tau fixes 0.
    """
    tau.require_zero_fixing()
    r = tau.r
    if r > S_TAU_MAX_R:
        raise BudgetExceeded(f"build_s_tau supports r <= {S_TAU_MAX_R}, got {r}")
    if r < 3:
        raise ValueError(f"build_s_tau needs r >= 3, got {r}")
    n = 1 << r
    h = extended_hamming(r)
    gen_rows = tuple(h.generators.row_bits) + tuple(
        row << n for row in h.generators.row_bits
    )
    base = LinearCode(2 * n, BitMatrix(len(gen_rows), 2 * n, gen_rows))
    reps = tuple(
        (((1 << a) ^ 1) if a else 0)
        | ((((1 << tau.images[a]) ^ 1) if tau.images[a] else 0) << n)
        for a in range(n)
    )
    return CosetUnionCode(r=r, base=base, reps=reps)


def tau_product(tau: PointPerm, tau2: PointPerm) -> PointPerm:
    """The blockwise permutation (tau|tau2) of F^{r+r'}.

    Under the little-endian concatenation the low r bits of a combined
    point hold the first factor.  The product of induced permutations is
    induced (by an automorphism of the direct product group), so the
    flag is carried over as the conjunction.
    """
    tau.require_zero_fixing()
    tau2.require_zero_fixing()
    r, r2 = tau.r, tau2.r
    mask = (1 << r) - 1
    images = tuple(
        tau.images[p & mask] | (tau2.images[p >> r] << r) for p in range(1 << (r + r2))
    )
    return PointPerm(r + r2, images, induced=tau.induced and tau2.induced)


# ---------------------------------------------------------------------------
# Mollard composition
# ---------------------------------------------------------------------------


def p1(z: int, t: int, m: int) -> int:
    """Row sums: coordinate i of p1 is the parity of row i of z."""
    row_mask = (1 << m) - 1
    return sum(parity((z >> (i * m)) & row_mask) << i for i in range(t))


def p2(z: int, t: int, m: int) -> int:
    """Column sums: coordinate j of p2 is the parity of column j of z."""
    out = 0
    for j in range(m):
        acc = 0
        for i in range(t):
            acc ^= (z >> (i * m + j)) & 1
        out |= acc << j
    return out


def zero_phi(_: int) -> int:
    return 0


@dataclass(frozen=True)
class MollardCode:
    """M(C,D) = {z : p1(z) in C, p2(z) in phi(p1(z)) + D}.

    Coordinates are pairs (row, col) flattened row-major: (i, j) -> i*m + j.
    """

    t: int
    m: int
    c: ExplicitCode
    d: ExplicitCode
    phi: Callable[[int], int] = field(default=zero_phi, compare=False)

    @property
    def length(self) -> int:
        return self.t * self.m

    @property
    def size(self) -> int:
        return self.c.size * self.d.size * (1 << (self.t * self.m - self.t - self.m + 1))

    def contains(self, z: int) -> bool:
        u = p1(z, self.t, self.m)
        if u not in self.c.words:
            return False
        return (p2(z, self.t, self.m) ^ self.phi(u)) in self.d.words

    def materialize(self) -> ExplicitCode:
        if self.length > MOLLARD_BUDGET_BITS:
            raise BudgetExceeded(
                f"cannot enumerate 2^{self.length} candidate words"
            )
        c_set = frozenset(self.c.words)
        d_set = frozenset(self.d.words)
        words = []
        for z in range(1 << self.length):
            u = p1(z, self.t, self.m)
            if u in c_set and (p2(z, self.t, self.m) ^ self.phi(u)) in d_set:
                words.append(z)
        return ExplicitCode(self.length, tuple(words))


def mollard(c: ExplicitCode, d: ExplicitCode, phi: Callable[[int], int] = zero_phi) -> MollardCode:
    """The Mollard composition of two extended perfect codes containing 0."""
    t, m = c.length, d.length
    return MollardCode(t=t, m=m, c=c, d=d, phi=phi)


def dub1(pi, t: int, m: int) -> tuple[int, ...]:
    """Lift a coordinate permutation of C to M(C,D): (i, j) -> (pi(i), j)."""
    return tuple(pi[i] * m + j for i in range(t) for j in range(m))


def dub2(pi, t: int, m: int) -> tuple[int, ...]:
    """Lift a coordinate permutation of D to M(C,D): (i, j) -> (i, pi(j))."""
    return tuple(i * m + pi[j] for i in range(t) for j in range(m))


def apply_coordinate_perm(word: int, perm: tuple[int, ...]) -> int:
    """Position perm[p] of the image carries position p of the word."""
    return sum(((word >> p) & 1) << perm[p] for p in range(len(perm)))


# ---------------------------------------------------------------------------
# Hadamard analog
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HadamardCode:
    r: int
    tau: PointPerm
    words: ExplicitCode


def _half_space_words(r: int) -> list[tuple[int, int]]:
    """For each a: the complementary pair with supports <x,a>=0 and <x,a>=1."""
    n = 1 << r
    all_ones = (1 << n) - 1
    out = []
    for a in range(n):
        w0 = sum((1 - parity(x & a)) << x for x in range(n))
        out.append((w0, w0 ^ all_ones))
    return out


def hadamard_a_tau(tau: PointPerm) -> HadamardCode:
    """A_tau = union over a of C_a x C_tau(a); 2^{r+2} words of length 2^{r+1}."""
    tau.require_zero_fixing()
    r = tau.r
    if r > HADAMARD_MAX_R:
        raise BudgetExceeded(f"hadamard_a_tau supports r <= {HADAMARD_MAX_R}, got {r}")
    n = 1 << r
    halves = _half_space_words(r)
    words = set()
    for a in range(n):
        for u in halves[a]:
            for v in halves[tau.images[a]]:
                words.add(u | (v << n))
    assert len(words) == 4 * n
    return HadamardCode(r=r, tau=tau, words=ExplicitCode(2 * n, tuple(sorted(words))))
