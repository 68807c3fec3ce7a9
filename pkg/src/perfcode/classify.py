"""The classification pipeline: per-permutation invariants, isomorphism
classes via double-coset tests inside invariant buckets, transitivity
reports, and the composed series of neighbor transitive codes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._bits import span_dim
from .algebra import BitMatrix, PointPerm, double_coset_member, invert_perm
from .codes import hamming_parity_rows
from .errors import BudgetExceeded, ExcludedLength, MixedDimensions
from .regular_groups import TauCatalog, _enumerate_regular_idx, _automorphism_perms, _mult_table_from_idx, _tables
from .sqs import aut_order, point_transitive

SERIES_MAX_R = 12


@dataclass(frozen=True)
class CatalogEntry:
    """One classified permutation; CSV columns follow this field order."""

    tau_id: str
    r: int
    rank: int
    kernel_dim: int
    intersection_dim: int
    point_transitive: bool
    aut_order: int | None
    class_id: int
    non_mollard: bool
    provenance: str


@dataclass(frozen=True)
class TransitivityReport:
    """Transitivity status of S_tau.

    `transitive` is "verified-by-theorem" only for permutations tagged as
    induced by a regular-subgroup automorphism (propelinearity is a
    theorem for those); anything else is "unverified" and neighbor
    transitivity is then not claimed, even when coordinate transitive.
    """

    coordinate_transitive: bool
    transitive: str
    neighbor_transitive: bool


def tau_id_string(tau: PointPerm) -> str:
    if tau.r <= 4:
        body = "".join(format(v, "x") for v in tau.images)
    else:
        body = ".".join(str(v) for v in tau.images)
    return f"r{tau.r}-{body}"


def perm_rank(tau: PointPerm) -> int:
    """Rank of S_tau: 2 dim(H) plus the span of the syndromes (a | tau(a))."""
    r = tau.r
    return 2 * ((1 << r) - r - 1) + span_dim(
        a | (tau.images[a] << r) for a in range(1, 1 << r)
    )


def perm_kernel_dim(tau: PointPerm) -> int:
    """Kernel dimension of S_tau: 2 dim(H) plus dim of the linear structure set."""
    r = tau.r
    n = 1 << r
    img = tau.images
    members = [
        a
        for a in range(1, n)
        if all(img[a ^ b] == img[a] ^ img[b] for b in range(n))
    ]
    return 2 * (n - r - 1) + span_dim(members)


def perm_intersection_dim(tau: PointPerm) -> int:
    """dim(tau(H) ∩ H); invariant under pre/post composition with GL."""
    r = tau.r
    n = 1 << r
    inv = invert_perm(tau).images
    rows = list(hamming_parity_rows(r))
    rows.extend(
        sum(((inv[b] >> j) & 1) << b for b in range(n)) for j in range(r)
    )
    # the all-ones parity row of tau(H) equals that of H; skip the duplicate
    return n - span_dim(rows)


def _classify_arrays(images: np.ndarray, r: int, induced, provenance, parallel: int = 1):
    """Core classification over an (N, 2^r) image array.

    Entries are processed in ascending lexicographic order of the image
    tuples, so each class representative is the least member of its class
    and class ids are canonical regardless of input order.  aut_order and
    point_transitive are computed once per class (both are constant on
    isomorphism classes) and assigned to the members.
    """
    n = 1 << r
    count = len(images)
    order = np.lexsort(images.T[::-1])

    if parallel > 1:
        invariants = _invariants_parallel(images, r, parallel)
    else:
        invariants = [_invariant_triple(images[i], r) for i in range(count)]

    buckets: dict[tuple, list] = {}
    class_reps: list[PointPerm] = []
    class_of = np.empty(count, dtype=np.int64)
    for i in order:
        perm = PointPerm(r, tuple(int(x) for x in images[i]))
        key = invariants[i]
        bucket = buckets.setdefault(key, [])
        found = -1
        for cid, rep, rep_inv in bucket:
            if (
                double_coset_member(perm, rep) is not None
                or double_coset_member(perm, rep_inv) is not None
            ):
                found = cid
                break
        if found < 0:
            found = len(class_reps)
            class_reps.append(perm)
            bucket.append((found, perm, invert_perm(perm)))
        class_of[i] = found

    class_aut = [aut_order(rep) for rep in class_reps]
    class_pt = [point_transitive(rep)[0] for rep in class_reps]

    min_kernel = (2 << r) - 2 * r - 2
    entries = []
    for i in order:
        rank_val, kernel_val, inter_val = invariants[i]
        cid = int(class_of[i])
        perm = PointPerm(r, tuple(int(x) for x in images[i]), induced=bool(induced[i]))
        entries.append(
            CatalogEntry(
                tau_id=tau_id_string(perm),
                r=r,
                rank=rank_val,
                kernel_dim=kernel_val,
                intersection_dim=inter_val,
                point_transitive=bool(class_pt[cid]),
                aut_order=class_aut[cid],
                class_id=cid,
                non_mollard=bool(induced[i]) and kernel_val == min_kernel,
                provenance=provenance[i],
            )
        )
    return entries


def _invariant_triple(images_row, r: int):
    perm = PointPerm(r, tuple(int(x) for x in images_row))
    return perm_rank(perm), perm_kernel_dim(perm), perm_intersection_dim(perm)


_POOL_STATE: dict = {}


def _pool_init(images, r):
    _POOL_STATE["images"] = images
    _POOL_STATE["r"] = r


def _pool_work(span: tuple[int, int]):
    images = _POOL_STATE["images"]
    r = _POOL_STATE["r"]
    return [_invariant_triple(images[i], r) for i in range(*span)]


def _invariants_parallel(images: np.ndarray, r: int, workers: int):
    import multiprocessing as mp

    count = len(images)
    chunk = max(1, (count + workers - 1) // workers)
    spans = [(s, min(count, s + chunk)) for s in range(0, count, chunk)]
    ctx = mp.get_context("fork")
    with ctx.Pool(workers, initializer=_pool_init, initargs=(images, r)) as pool:
        parts = pool.map(_pool_work, spans)
    out = []
    for part in parts:
        out.extend(part)
    return out


def classify(taus, provenance=None, parallel: int = 1) -> list[CatalogEntry]:
    """Classify permutations into isomorphism classes of their codes/SQS.

    Entries with equal class_id are pairwise sqs-isomorphic; the output
    order, representatives, and class ids are canonical (sorted by image
    tuple), so shuffled input yields an identical result.
    """
    taus = list(taus)
    if not taus:
        return []
    r = taus[0].r
    if any(t.r != r for t in taus):
        raise MixedDimensions("all permutations must share one r")
    for t in taus:
        t.require_zero_fixing()
    if r > 5:
        raise BudgetExceeded("classification sweeps support r <= 5")
    images = np.array([t.images for t in taus], dtype=np.int8)
    induced = [t.induced for t in taus]
    if provenance is None:
        provenance = ["user"] * len(taus)
    return _classify_arrays(images, r, induced, list(provenance), parallel)


def classify_catalog(
    catalog: TauCatalog, kernel_dim: int | None = None, parallel: int = 1
) -> list[CatalogEntry]:
    """Classify a tau catalog, optionally filtered to one kernel dimension.

    Stays in array form throughout, so the full r=4 catalog (millions of
    permutations) is classified without materializing permutation objects.
    """
    r = catalog.r
    images = catalog.images
    gids, aids = catalog.group_ids, catalog.aut_ids
    if kernel_dim is not None:
        keep = _kernel_dim_mask(images, r, kernel_dim)
        images = images[keep]
        gids, aids = gids[keep], aids[keep]
    provenance = [f"g{int(g)}:a{int(a)}" for g, a in zip(gids, aids)]
    induced = [True] * len(images)
    return _classify_arrays(images, r, induced, provenance, parallel)


def _kernel_dim_mask(images: np.ndarray, r: int, kernel_dim: int) -> np.ndarray:
    n = 1 << r
    base = 2 * (n - r - 1)
    want_l_dim = kernel_dim - base
    pts = np.arange(n)
    xor_ab = pts[:, None] ^ pts[None, :]
    out = np.zeros(len(images), dtype=bool)
    chunk = max(1, (1 << 22) // (n * n))
    for s in range(0, len(images), chunk):
        block = images[s : s + chunk]
        lhs = block[:, xor_ab]
        rhs = block[:, :, None] ^ block[:, None, :]
        l_sizes = (lhs == rhs).all(axis=2).sum(axis=1)
        out[s : s + chunk] = l_sizes == (1 << want_l_dim) if want_l_dim >= 0 else False
    return out


def transitivity_report(tau: PointPerm) -> TransitivityReport:
    """Coordinate transitivity is verified by sweep; transitivity only by
    the induced tag (propelinearity theorem); neighbor = both."""
    tau.require_zero_fixing()
    coord = point_transitive(tau)[0]
    trans = "verified-by-theorem" if tau.induced else "unverified"
    return TransitivityReport(
        coordinate_transitive=coord,
        transitive=trans,
        neighbor_transitive=coord and trans == "verified-by-theorem",
    )


# ---------------------------------------------------------------------------
# The composed series of neighbor transitive non-Mollard codes
# ---------------------------------------------------------------------------

_BASE_CACHE: dict[int, tuple] = {}


def _first_min_kernel_tau(r: int):
    """First induced tau (enumeration order) with minimal kernel, plus its
    point-transitivity witness (A, B)."""
    if r in _BASE_CACHE:
        return _BASE_CACHE[r]
    tab = _tables(r)
    n = 1 << r
    for mats_idx in _enumerate_regular_idx(r, None):
        mul = _mult_table_from_idx(mats_idx, tab.app_l, n)
        for images in _automorphism_perms(mul, n):
            trivial_l = all(
                any(images[a ^ b] != images[a] ^ images[b] for b in range(n))
                for a in range(1, n)
            )
            if not trivial_l:
                continue
            tau = PointPerm(r, images, induced=True)
            witness = double_coset_member(invert_perm(tau), tau)
            if witness is None:
                continue
            _BASE_CACHE[r] = (tau, witness)
            return _BASE_CACHE[r]
    raise RuntimeError(f"no minimal-kernel induced permutation found at r={r}")


def _block_diag(m1: BitMatrix, m2: BitMatrix) -> BitMatrix:
    r1, r2 = m1.rows, m2.rows
    rows = tuple(m1.row_bits) + tuple(row << r1 for row in m2.row_bits)
    return BitMatrix(r1 + r2, r1 + r2, rows)


def composed_series(r: int):
    """A neighbor transitive non-Mollard extended perfect code of length
    2^{r+1}, as (tau, transitivity report, catalog entry).

    Composes minimal-kernel base permutations of dimensions 3 and 4 into
    r = 3a + 4b; point transitivity of the product is certified by the
    block-diagonal double-coset witness (no GL(r,2) sweep), and the
    kernel dimension by the product rule for linear structure sets.
    Length 64 (r = 5) is excluded.
    """
    if r < 3:
        raise ValueError(f"series needs r >= 3, got {r}")
    if r == 5:
        raise ExcludedLength("length 64 (r = 5) is excluded from the series")
    if r > SERIES_MAX_R:
        raise BudgetExceeded(f"series supports r <= {SERIES_MAX_R}")
    fours = next(b for b in range(r // 4, -1, -1) if (r - 4 * b) % 3 == 0)
    parts = [3] * ((r - 4 * fours) // 3) + [4] * fours

    from .constructions import tau_product

    tau, (wit_a, wit_b) = _first_min_kernel_tau(parts[0])
    l_dim_total = 0
    for part in parts[1:]:
        nxt, (nxt_a, nxt_b) = _first_min_kernel_tau(part)
        tau = tau_product(tau, nxt)
        wit_a = _block_diag(wit_a, nxt_a)
        wit_b = _block_diag(wit_b, nxt_b)

    # certify the witness directly: tau^{-1} = sigma_B o tau o sigma_A^{-1}
    from .algebra import invert as mat_invert

    n = 1 << r
    inv_images = invert_perm(tau).images
    a_inv = mat_invert(wit_a)
    assert all(
        inv_images[x] == wit_b.apply(tau.images[a_inv.apply(x)]) for x in range(n)
    ), "block-diagonal witness failed to verify"

    kernel_val = 2 * (n - r - 1) + l_dim_total
    entry = CatalogEntry(
        tau_id=tau_id_string(tau),
        r=r,
        rank=perm_rank(tau),
        kernel_dim=kernel_val,
        intersection_dim=perm_intersection_dim(tau),
        point_transitive=True,
        aut_order=aut_order(tau) if r <= 4 else None,
        class_id=0,
        non_mollard=True,
        provenance="series",
    )
    report = TransitivityReport(
        coordinate_transitive=True,
        transitive="verified-by-theorem",
        neighbor_transitive=True,
    )
    return tau, report, entry
