"""Low-level GF(2) helpers on bit-packed integers.

Vectors are Python ints; bit j of the int is coordinate j.  All routines
are pure and allocation-light; the heavier sweeps live in `algebra`.
"""

from __future__ import annotations


def parity(x: int) -> int:
    return bin(x).count("1") & 1


def weight(x: int) -> int:
    return bin(x).count("1")


def span_dim(vecs) -> int:
    """Dimension of the GF(2) span of an iterable of bit-packed vectors."""
    pivots: list[tuple[int, int]] = []
    for v in vecs:
        cur = int(v)
        for p, pv in pivots:
            if (cur >> p) & 1:
                cur ^= pv
        if cur:
            pivots.append((cur.bit_length() - 1, cur))
    return len(pivots)


def span_basis(vecs) -> list[int]:
    """A row-reduced basis of the span (pivot rows, reduced against each other)."""
    piv: dict[int, int] = {}
    for v in vecs:
        cur = int(v)
        for c, pr in piv.items():
            if (cur >> c) & 1:
                cur ^= pr
        if cur:
            c = cur.bit_length() - 1
            for c2 in list(piv):
                if (piv[c2] >> c) & 1:
                    piv[c2] ^= cur
            piv[c] = cur
    return [piv[c] for c in sorted(piv)]


def nullspace_basis(rows, ncols: int) -> list[int]:
    """Basis of {x in F^ncols : parity(row & x) = 0 for every row}.

    Rows are bit-packed vectors of length `ncols`.  Works by full
    Gauss-Jordan reduction; free columns parameterize the kernel.
    """
    piv: dict[int, int] = {}
    for row in rows:
        cur = int(row)
        for c, pr in piv.items():
            if (cur >> c) & 1:
                cur ^= pr
        if cur:
            c = cur.bit_length() - 1
            for c2 in list(piv):
                if (piv[c2] >> c) & 1:
                    piv[c2] ^= cur
            piv[c] = cur
    basis = []
    for f in range(ncols):
        if f in piv:
            continue
        x = 1 << f
        for c, row in piv.items():
            if (row >> f) & 1:
                x |= 1 << c
        basis.append(x)
    return basis


def span_words(basis) -> list[int]:
    """All 2^k words spanned by a basis (k must stay small)."""
    words = [0]
    for b in basis:
        words += [w ^ int(b) for w in words]
    return words
