"""GF(2) vectors, matrices, and permutations of the binary space F^r.

Conventions (global for the whole package):

* A point of F^r is an integer in [0, 2^r); bit j of the integer is
  coordinate j+1 of the vector (little-endian).
* A matrix row is a bit-packed integer; bit j of row i is the entry in
  row i+1, column j+1.  M acts on column vectors: (M b)_i = <row_i, b>.
* GL(r,2) is enumerated in ascending lexicographic order of the row
  tuple (row 0 first), i.e. the numeric order of row-major encodings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from ._bits import parity, span_dim, weight
from .errors import BudgetExceeded, DimensionMismatch, NotInvertible, ZeroNotFixed

GL_ENUM_MAX_R = 6
SWEEP_MAX_R = 5


@dataclass(frozen=True)
class BitWord:
    """Fixed-length vector over GF(2); addition is XOR."""

    length: int
    value: int

    def __post_init__(self):
        if not 0 <= self.value < (1 << self.length):
            raise ValueError(f"value out of range for length {self.length}")

    def __xor__(self, other: "BitWord") -> "BitWord":
        if self.length != other.length:
            raise DimensionMismatch("word lengths differ")
        return BitWord(self.length, self.value ^ other.value)

    __add__ = __xor__

    def __and__(self, other: "BitWord") -> "BitWord":
        if self.length != other.length:
            raise DimensionMismatch("word lengths differ")
        return BitWord(self.length, self.value & other.value)

    @property
    def weight(self) -> int:
        return weight(self.value)

    def bit(self, j: int) -> int:
        return (self.value >> j) & 1

    def bits(self) -> tuple[int, ...]:
        return tuple((self.value >> j) & 1 for j in range(self.length))


@dataclass(frozen=True)
class BitMatrix:
    """Dense GF(2) matrix with bit-packed rows."""

    rows: int
    cols: int
    row_bits: tuple[int, ...]

    def __post_init__(self):
        if len(self.row_bits) != self.rows:
            raise ValueError("row count mismatch")
        for row in self.row_bits:
            if not 0 <= row < (1 << self.cols):
                raise ValueError("row value out of range")

    def entry(self, i: int, j: int) -> int:
        return (self.row_bits[i] >> j) & 1

    def apply(self, b: int) -> int:
        """Matrix-vector product M b on bit-packed vectors."""
        v = 0
        for i, row in enumerate(self.row_bits):
            v |= parity(row & b) << i
        return v

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch("inner dimensions differ")
        return BitMatrix(self.rows, other.cols, _mul_rows(self.row_bits, other.row_bits))

    def transpose(self) -> "BitMatrix":
        cols = tuple(
            sum(((self.row_bits[i] >> j) & 1) << i for i in range(self.rows))
            for j in range(self.cols)
        )
        return BitMatrix(self.cols, self.rows, cols)


def identity_matrix(r: int) -> BitMatrix:
    return BitMatrix(r, r, tuple(1 << i for i in range(r)))


def matrix_from_rows(rows) -> BitMatrix:
    rows = tuple(int(x) for x in rows)
    cols = max((x.bit_length() for x in rows), default=0)
    return BitMatrix(len(rows), max(cols, len(rows)), rows)


def _mul_rows(a_rows, b_rows) -> tuple[int, ...]:
    out = []
    for ra in a_rows:
        acc = 0
        x, j = ra, 0
        while x:
            if x & 1:
                acc ^= b_rows[j]
            x >>= 1
            j += 1
        out.append(acc)
    return tuple(out)


def rank(m: BitMatrix) -> int:
    """GF(2) row rank."""
    return span_dim(m.row_bits)


def invert(m: BitMatrix) -> BitMatrix:
    """Inverse over GF(2); raises NotInvertible for singular input."""
    if m.rows != m.cols:
        raise NotInvertible("matrix is not square")
    n = m.rows
    # Gauss-Jordan on [M | I] packed as rows of 2n bits.
    aug = [m.row_bits[i] | (1 << (n + i)) for i in range(n)]
    row_at = 0
    for col in range(n):
        piv = next((k for k in range(row_at, n) if (aug[k] >> col) & 1), None)
        if piv is None:
            raise NotInvertible("matrix is singular over GF(2)")
        aug[row_at], aug[piv] = aug[piv], aug[row_at]
        for k in range(n):
            if k != row_at and (aug[k] >> col) & 1:
                aug[k] ^= aug[row_at]
        row_at += 1
    return BitMatrix(n, n, tuple(row >> n for row in aug))


def gl_order(r: int) -> int:
    """|GL(r,2)| = prod_{i<r} (2^r - 2^i)."""
    out = 1
    for i in range(r):
        out *= (1 << r) - (1 << i)
    return out


def _gl_rows(r: int):
    """All invertible r x r matrices as row tuples, in enumeration order.

    r <= 4 filters every row tuple by rank; r in {5, 6} builds rows
    incrementally, each new row outside the span of the previous ones.
    """
    if r <= 4:
        n = 1 << r
        return [rows for rows in product(range(n), repeat=r) if span_dim(rows) == r]
    out = []
    n = 1 << r

    def extend(rows, basis):
        if len(rows) == r:
            out.append(tuple(rows))
            return
        for cand in range(1, n):
            red = cand
            for p, pv in basis:
                if (red >> p) & 1:
                    red ^= pv
            if red == 0:
                continue
            extend(rows + [cand], basis + [(red.bit_length() - 1, red)])

    extend([], [])
    return out


_GL_CACHE: dict[int, list] = {}


def gl_rows_cached(r: int) -> list:
    if r not in _GL_CACHE:
        _GL_CACHE[r] = _gl_rows(r)
    return _GL_CACHE[r]


def gl_enumerate(r: int):
    """Yield every matrix of GL(r,2) exactly once, in enumeration order."""
    if not 1 <= r <= GL_ENUM_MAX_R:
        raise BudgetExceeded(f"gl_enumerate supports 1 <= r <= {GL_ENUM_MAX_R}, got {r}")
    if r <= 4:
        for rows in gl_rows_cached(r):
            yield BitMatrix(r, r, rows)
    else:
        # too large to cache; rebuild the stream on every call
        n = 1 << r

        def extend(rows, basis):
            if len(rows) == r:
                yield BitMatrix(r, r, tuple(rows))
                return
            for cand in range(1, n):
                red = cand
                for p, pv in basis:
                    if (red >> p) & 1:
                        red ^= pv
                if red == 0:
                    continue
                yield from extend(rows + [cand], basis + [(red.bit_length() - 1, red)])

        yield from extend([], [])


@dataclass(frozen=True)
class PointPerm:
    """Permutation of the 2^r points of F^r.

    `images[i]` is the image of point i.  The `induced` flag marks
    permutations produced by an automorphism of a regular subgroup of
    GA(r,2); it is provenance, not part of equality.
    """

    r: int
    images: tuple[int, ...]
    induced: bool = field(default=False, compare=False)

    def __post_init__(self):
        n = 1 << self.r
        if len(self.images) != n or sorted(self.images) != list(range(n)):
            raise ValueError(f"images is not a permutation of [0, {n})")

    def __call__(self, p: int) -> int:
        return self.images[p]

    @property
    def zero_fixing(self) -> bool:
        return self.images[0] == 0

    def require_zero_fixing(self):
        if not self.zero_fixing:
            raise ZeroNotFixed("permutation does not fix 0")


def identity_perm(r: int) -> PointPerm:
    return PointPerm(r, tuple(range(1 << r)))


def sigma_m(m: BitMatrix) -> PointPerm:
    """The linear point permutation b -> M b."""
    r = m.rows
    return PointPerm(r, tuple(m.apply(b) for b in range(1 << r)))


def sigma_am(a: int, m: BitMatrix) -> PointPerm:
    """The affine point permutation b -> a + M b."""
    r = m.rows
    return PointPerm(r, tuple(a ^ m.apply(b) for b in range(1 << r)))


def compose(tau: PointPerm, tau2: PointPerm) -> PointPerm:
    """(tau o tau2)(a) = tau(tau2(a))."""
    if tau.r != tau2.r:
        raise DimensionMismatch("permutations live over different dimensions")
    return PointPerm(tau.r, tuple(tau.images[x] for x in tau2.images))

def invert_perm(tau: PointPerm) -> PointPerm:
    out = [0] * len(tau.images)
    for i, v in enumerate(tau.images):
        out[v] = i
    return PointPerm(tau.r, tuple(out), induced=tau.induced)


def is_linear(tau: PointPerm) -> BitMatrix | None:
    """The matrix M with tau = sigma_M, or None if tau is not linear.

    M is read off the images of the standard basis and then verified on
    all 2^r points; a basis-only check would accept non-additive maps.
    """
    tau.require_zero_fixing()
    r = tau.r
    rows = tuple(
        sum(((tau.images[1 << j] >> i) & 1) << j for j in range(r)) for i in range(r)
    )
    m = BitMatrix(r, r, rows)
    for b in range(1 << r):
        if m.apply(b) != tau.images[b]:
            return None
    return m


@dataclass(frozen=True)
class AffineTransform:
    """(a, M) acting as b -> a + M b."""

    a: int
    m: BitMatrix

    def apply(self, b: int) -> int:
        return self.a ^ self.m.apply(b)

    def compose(self, other: "AffineTransform") -> "AffineTransform":
        # (a, M)(b, N) maps x to a + M(b + N x)
        return AffineTransform(self.a ^ self.m.apply(other.a), self.m @ other.m)

    def as_perm(self) -> PointPerm:
        return sigma_am(self.a, self.m)


# ---------------------------------------------------------------------------
# Vectorized sweeps over GL(r,2) / GA(r,2)
# ---------------------------------------------------------------------------

_SIGMA_CACHE: dict[int, np.ndarray] = {}


def _sigma_table(r: int) -> np.ndarray:
    """(|GL|, 2^r) int8 table of sigma_M images, in enumeration order."""
    if r not in _SIGMA_CACHE:
        rows = np.array(gl_rows_cached(r), dtype=np.int64)
        brange = np.arange(1 << r, dtype=np.int64)
        tab = np.zeros((len(rows), 1 << r), dtype=np.int8)
        for i in range(r):
            tab |= ((np.bitwise_count(rows[:, i : i + 1] & brange[None, :]) & 1) << i).astype(
                np.int8
            )
        _SIGMA_CACHE[r] = tab
    return _SIGMA_CACHE[r]


def _linear_mask(maps: np.ndarray, r: int) -> np.ndarray:
    """Row mask of point maps (N, 2^r) that are linear (additive, fix 0)."""
    brange = np.arange(1 << r)
    basis = maps[:, [1 << j for j in range(r)]]
    pred = np.zeros_like(maps)
    for j in range(r):
        idx = np.flatnonzero((brange >> j) & 1)
        pred[:, idx] ^= basis[:, j : j + 1]
    return (maps == pred).all(axis=1) & (maps[:, 0] == 0)


def _matrix_from_map(images, r: int) -> BitMatrix:
    rows = tuple(
        sum(((int(images[1 << j]) >> i) & 1) << j for j in range(r)) for i in range(r)
    )
    return BitMatrix(r, r, rows)


def count_linear_products(left: PointPerm, right: PointPerm) -> int:
    """#{A in GL(r,2) : left o sigma_A o right is linear}."""
    if left.r != right.r:
        raise DimensionMismatch("permutations live over different dimensions")
    r = left.r
    if r > SWEEP_MAX_R:
        raise BudgetExceeded(f"GL sweep supports r <= {SWEEP_MAX_R}, got {r}")
    left_a = np.array(left.images, dtype=np.int8)
    right_a = np.array(right.images, dtype=np.int64)
    if r <= 4:
        cand = left_a[_sigma_table(r)[:, right_a]]
        return int(_linear_mask(cand, r).sum())
    return sum(
        1
        for m in gl_enumerate(r)
        if is_linear(compose(compose(left, sigma_m(m)), right)) is not None
    )


def double_coset_member(tau_p: PointPerm, tau: PointPerm, group: str = "GL"):
    """Witness that tau' lies in the double coset of tau under GL or GA.

    For group="GL": returns (A, B) in GL x GL with tau' = sigma_B o tau o
    sigma_A^{-1}, or None.  Sweeps A in enumeration order and accepts the
    first A for which the derived map B := tau' o sigma_A o tau^{-1} is
    linear at all 2^r points.

    For group="GA": same sweep over affine (a, A); the derived map must
    be affine (translation part read off at 0); returns a pair of
    AffineTransform witnesses or None.  Zero-fixing is not required of
    the inputs in the GA variant.
    """
    if tau_p.r != tau.r:
        raise DimensionMismatch("permutations live over different dimensions")
    r = tau.r
    if r > SWEEP_MAX_R:
        raise BudgetExceeded(f"double_coset_member supports r <= {SWEEP_MAX_R}, got {r}")
    if group == "GL":
        tau_p.require_zero_fixing()
        tau.require_zero_fixing()
        return _gl_member(tau_p, tau)
    if group == "GA":
        return _ga_member(tau_p, tau)
    raise ValueError(f"unknown group {group!r}")


def _gl_member(tau_p: PointPerm, tau: PointPerm):
    r = tau.r
    tinv = np.array(invert_perm(tau).images, dtype=np.int64)
    taup_a = np.array(tau_p.images, dtype=np.int8)
    if r <= 4:
        cand = taup_a[_sigma_table(r)[:, tinv]]
        mask = _linear_mask(cand, r)
        hits = np.flatnonzero(mask)
        if len(hits) == 0:
            return None
        k = int(hits[0])
        a_mat = BitMatrix(r, r, gl_rows_cached(r)[k])
        b_mat = _matrix_from_map(cand[k], r)
        return a_mat, b_mat
    tau_inv = invert_perm(tau)
    for m in gl_enumerate(r):
        cand = compose(compose(tau_p, sigma_m(m)), tau_inv)
        b = is_linear(cand)
        if b is not None:
            return m, b
    return None


_GA_CACHE: dict[int, np.ndarray] = {}


def _ga_table(r: int) -> np.ndarray:
    """(|GL| * 2^r, 2^r) table of sigma_{a,A} images; A-major, then a."""
    if r not in _GA_CACHE:
        sig = _sigma_table(r)
        n = 1 << r
        trans = np.arange(n, dtype=np.int8)
        # row (k, a) = a ^ sig[k]
        tab = (sig[:, None, :] ^ trans[None, :, None]).reshape(-1, n)
        _GA_CACHE[r] = tab
    return _GA_CACHE[r]


def _ga_member(tau_p: PointPerm, tau: PointPerm):
    r = tau.r
    n = 1 << r
    tinv = np.array(invert_perm(tau).images, dtype=np.int64)
    taup_a = np.array(tau_p.images, dtype=np.int8)
    if r <= 4:
        cand = taup_a[_ga_table(r)[:, tinv]]
        trans = cand[:, 0:1].copy()
        mask = _linear_mask(cand ^ trans, r)
        hits = np.flatnonzero(mask)
        if len(hits) == 0:
            return None
        idx = int(hits[0])
        k, a = divmod(idx, n)
        a_part = AffineTransform(a, BitMatrix(r, r, gl_rows_cached(r)[k]))
        b_part = AffineTransform(int(trans[idx, 0]), _matrix_from_map(cand[idx] ^ trans[idx], r))
        return a_part, b_part
    tau_inv = invert_perm(tau)
    for m in gl_enumerate(r):
        for a in range(n):
            cand = compose(compose(tau_p, sigma_am(a, m)), tau_inv)
            t0 = cand.images[0]
            lin = PointPerm(r, tuple(x ^ t0 for x in cand.images))
            b = is_linear(lin)
            if b is not None:
                return AffineTransform(a, m), AffineTransform(t0, b)
    return None
