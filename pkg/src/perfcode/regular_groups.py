"""Regular subgroups of the general affine group GA(r,2), their
automorphism groups, and the point permutations they induce.

A regular subgroup is stored by the map a -> M_a where g_a = (a, M_a) is
the unique element sending 0 to a; the closure law M_{a + M_a b} = M_a M_b
encodes g_a g_b = g_{a + M_a b}.  Every matrix part of a 2-group element
is unipotent, which the enumeration uses as a pre-filter.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .algebra import BitMatrix, PointPerm, gl_rows_cached, identity_matrix
from .errors import BudgetExceeded, NotAnAutomorphism

ENUM_MIN_R = 3
ENUM_MAX_R = 4
AUT_MAX_ORDER = 16


@dataclass(frozen=True)
class RegularSubgroup:
    """The map a -> M_a of a regular subgroup of GA(r,2)."""

    r: int
    mats: tuple[BitMatrix, ...]

    def element(self, a: int):
        return a, self.mats[a]

    def mult(self, a: int, b: int) -> int:
        """Label of g_a * g_b, i.e. a + M_a b."""
        return a ^ self.mats[a].apply(b)

    def mult_table(self) -> list[list[int]]:
        n = 1 << self.r
        return [[self.mult(a, b) for b in range(n)] for a in range(n)]


@dataclass(frozen=True)
class ClosureViolation:
    a: int
    b: int


@dataclass(frozen=True)
class GroupAutomorphism:
    """A product-preserving relabeling T(g_a) = g_{perm(a)} fixing the identity."""

    perm: PointPerm


def verify_regular(group: RegularSubgroup):
    """None if M_0 = I and the closure law holds for all pairs, else a violation."""
    n = 1 << group.r
    if group.mats[0] != identity_matrix(group.r):
        return ClosureViolation(0, 0)
    for a in range(n):
        ma = group.mats[a]
        for b in range(n):
            c = a ^ ma.apply(b)
            if group.mats[c] != ma @ group.mats[b]:
                return ClosureViolation(a, b)
    return None


# ---------------------------------------------------------------------------
# Table-driven enumeration
# ---------------------------------------------------------------------------


class _Tables:
    """Unipotent-matrix action and multiplication tables for one r."""

    def __init__(self, r: int):
        self.r = r
        n = 1 << r
        rows_list = gl_rows_cached(r)
        ident = tuple(1 << i for i in range(r))

        def _mul(a, b):
            out = []
            for ra in a:
                acc, x, j = 0, ra, 0
                while x:
                    if x & 1:
                        acc ^= b[j]
                    x >>= 1
                    j += 1
                out.append(acc)
            return tuple(out)

        def unipotent(rows) -> bool:
            # 2-power order in GL(r,2) is equivalent to (M + I)^r = 0
            nil = tuple(rows[i] ^ ident[i] for i in range(r))
            power = nil
            for _ in range(r - 1):
                power = _mul(power, nil)
            return not any(power)

        self.uni = [rows for rows in rows_list if unipotent(rows)]
        nu = len(self.uni)
        self.id_idx = self.uni.index(ident)
        arr = np.array(self.uni, dtype=np.int64)
        brange = np.arange(n, dtype=np.int64)
        app = np.zeros((nu, n), dtype=np.int16)
        for i in range(r):
            app |= ((np.bitwise_count(arr[:, i : i + 1] & brange[None, :]) & 1) << i).astype(
                np.int16
            )
        self.app = app
        code = (arr * (np.int64(1) << (r * np.arange(r)))).sum(axis=1)
        code2idx = np.full(1 << (r * r), -1, dtype=np.int32)
        code2idx[code] = np.arange(nu, dtype=np.int32)
        mul = np.empty((nu, nu), dtype=np.int16)
        chunk = max(1, (1 << 22) // (nu * r))
        for s in range(0, nu, chunk):
            e = min(nu, s + chunk)
            prod_rows = np.zeros((e - s, nu, r), dtype=np.int64)
            for i in range(r):
                for j in range(r):
                    bit = (arr[s:e, i] >> j) & 1
                    prod_rows[:, :, i] ^= bit[:, None] * arr[None, :, j]
            ccode = (prod_rows * (np.int64(1) << (r * np.arange(r)))).sum(axis=2)
            mul[s:e] = code2idx[ccode]
        self.mul = mul          # -1 marks a non-unipotent product (prunes the branch)
        self.app_l = app.tolist()
        self.mul_l = mul.tolist()


_TABLES: dict[int, _Tables] = {}


def _tables(r: int) -> _Tables:
    if r not in _TABLES:
        _TABLES[r] = _Tables(r)
    return _TABLES[r]


def _enumerate_regular_idx(r: int, deadline: float | None):
    """Yield assignments point -> unipotent index, in deterministic DFS order.

    Depth-first over the smallest unassigned point; matrix candidates in
    enumeration order; closure propagation assigns forced values and
    backtracks on the first violation.
    """
    tab = _tables(r)
    n = 1 << r
    app_l, mul_l = tab.app_l, tab.mul_l
    app_np = tab.app

    def propagate(mats: list[int], a: int, k: int):
        mats = mats.copy()
        mats[a] = k
        assigned = [p for p in range(n) if mats[p] >= 0]
        count = len(assigned)
        queue = [a]
        while queue:
            c = queue.pop()
            kc = mats[c]
            row_c = app_l[kc]
            for b in assigned[:]:
                kb = mats[b]
                for t, prod in (
                    (c ^ row_c[b], mul_l[kc][kb]),
                    (b ^ app_l[kb][c], mul_l[kb][kc]),
                ):
                    if prod < 0:
                        return None
                    cur = mats[t]
                    if cur < 0:
                        if count >= n:
                            return None
                        mats[t] = prod
                        assigned.append(t)
                        count += 1
                        queue.append(t)
                    elif cur != prod:
                        return None
        return mats

    def dfs(mats: list[int]):
        if deadline is not None and time.monotonic() > deadline:
            raise BudgetExceeded("regular-subgroup enumeration budget exhausted")
        a = next((p for p in range(n) if mats[p] < 0), None)
        if a is None:
            yield mats
            return
        pts = np.array([p for p in range(n) if mats[p] >= 0], dtype=np.int64)
        assigned_mask = np.zeros(n, dtype=bool)
        assigned_mask[pts] = True
        # right products g_a g_b land in the coset g_a H, disjoint from H:
        # any candidate whose product translation hits an assigned point dies
        trans = a ^ app_np[:, pts]
        alive = np.flatnonzero(~assigned_mask[trans].any(axis=1))
        for k in alive:
            closed = propagate(mats, a, int(k))
            if closed is not None:
                yield from dfs(closed)

    start = [-1] * n
    start[0] = tab.id_idx
    yield from dfs(start)


def enumerate_regular_subgroups(r: int, budget_seconds: float | None = None):
    """Yield every regular subgroup of GA(r,2) exactly once.

    Deterministic order; raises BudgetExceeded mid-stream when the time
    budget runs out (everything yielded before that is valid, the stream
    is just incomplete).
    """
    if r < ENUM_MIN_R:
        raise ValueError(f"enumeration needs r >= {ENUM_MIN_R}, got {r}")
    if r > ENUM_MAX_R:
        raise BudgetExceeded(f"enumeration supports r <= {ENUM_MAX_R}, got {r}")
    deadline = None if budget_seconds is None else time.monotonic() + budget_seconds
    tab = _tables(r)
    for mats_idx in _enumerate_regular_idx(r, deadline):
        mats = tuple(BitMatrix(r, r, tab.uni[k]) for k in mats_idx)
        yield RegularSubgroup(r=r, mats=mats)


# ---------------------------------------------------------------------------
# Automorphisms and induced permutations
# ---------------------------------------------------------------------------


def _mult_table_from_idx(mats_idx: list[int], app_l, n: int) -> list[list[int]]:
    return [[a ^ app_l[mats_idx[a]][b] for b in range(n)] for a in range(n)]


def _label_orders(mul: list[list[int]], n: int) -> list[int]:
    orders = [1] * n
    for a in range(1, n):
        x, k = a, 1
        while x != 0:
            x = mul[x][a]
            k += 1
        orders[a] = k
    return orders


def _min_generators(mul: list[list[int]], n: int) -> list[int]:
    def closure(gens):
        seen = {0}
        frontier = [0]
        for g in gens:
            if g not in seen:
                seen.add(g)
                frontier.append(g)
        while frontier:
            x = frontier.pop()
            for y in list(seen):
                for z in (mul[x][y], mul[y][x]):
                    if z not in seen:
                        seen.add(z)
                        frontier.append(z)
        return seen

    gens: list[int] = []
    cl = {0}
    while len(cl) < n:
        nxt = next(a for a in range(n) if a not in cl)
        gens.append(nxt)
        cl = closure(gens)
    return gens


def _automorphism_perms(mul: list[list[int]], n: int) -> list[tuple[int, ...]]:
    """All product-preserving label bijections fixing 0, in DFS order.

    Backtracks over generator images filtered by element order; closure
    propagation extends each partial map over all products and rejects on
    the first inconsistency, so a completed map is a homomorphism on the
    whole multiplication table.
    """
    orders = _label_orders(mul, n)
    by_order: dict[int, list[int]] = {}
    for a in range(n):
        by_order.setdefault(orders[a], []).append(a)
    gens = _min_generators(mul, n)
    out: list[tuple[int, ...]] = []

    def close(img: list[int], seeds: list[int]) -> bool:
        queue = list(seeds)
        while queue:
            c = queue.pop()
            ic = img[c]
            for b in range(n):
                ib = img[b]
                if ib < 0:
                    continue
                for p, ip in ((mul[c][b], mul[ic][ib]), (mul[b][c], mul[ib][ic])):
                    if img[p] < 0:
                        img[p] = ip
                        queue.append(p)
                    elif img[p] != ip:
                        return False
        return True

    def dfs(img: list[int], gi: int):
        if gi == len(gens):
            if all(x >= 0 for x in img) and len(set(img)) == n:
                out.append(tuple(img))
            return
        g = gens[gi]
        if img[g] >= 0:
            dfs(img, gi + 1)
            return
        used = set(x for x in img if x >= 0)
        for cand in by_order[orders[g]]:
            if cand in used:
                continue
            trial = img.copy()
            trial[g] = cand
            if close(trial, [g]):
                vals = [x for x in trial if x >= 0]
                if len(set(vals)) == len(vals):
                    dfs(trial, gi + 1)

    start = [-1] * n
    start[0] = 0
    dfs(start, 0)
    return out


def automorphisms(group: RegularSubgroup) -> list[GroupAutomorphism]:
    """All automorphisms of the group, as permutations of the element labels."""
    n = 1 << group.r
    if n > AUT_MAX_ORDER:
        raise BudgetExceeded(f"automorphism search supports order <= {AUT_MAX_ORDER}")
    mul = group.mult_table()
    return [
        GroupAutomorphism(perm=PointPerm(group.r, images))
        for images in _automorphism_perms(mul, n)
    ]


def induced_tau(group: RegularSubgroup, aut: GroupAutomorphism) -> PointPerm:
    """The point permutation tau with T(g_a) = g_{tau(a)}; tagged induced."""
    n = 1 << group.r
    mul = group.mult_table()
    img = aut.perm.images
    for a in range(n):
        for b in range(n):
            if img[mul[a][b]] != mul[img[a]][img[b]]:
                raise NotAnAutomorphism(f"map breaks the product at ({a}, {b})")
    return PointPerm(group.r, img, induced=True)


# ---------------------------------------------------------------------------
# The tau catalog
# ---------------------------------------------------------------------------


class TauCatalog:
    """Deduplicated induced permutations with (group, automorphism) provenance.

    Entries are stored column-wise (images as an (N, 2^r) array) so the
    r=4 catalog of a few million permutations stays compact; indexing
    materializes PointPerm objects on demand.
    """

    def __init__(self, r: int, images: np.ndarray, group_ids, aut_ids, complete: bool):
        self.r = r
        self.images = images
        self.group_ids = np.asarray(group_ids, dtype=np.int64)
        self.aut_ids = np.asarray(aut_ids, dtype=np.int64)
        self.complete = complete

    def __len__(self) -> int:
        return len(self.images)

    def perm(self, i: int) -> PointPerm:
        return PointPerm(self.r, tuple(int(x) for x in self.images[i]), induced=True)

    def provenance(self, i: int) -> tuple[int, int]:
        return int(self.group_ids[i]), int(self.aut_ids[i])

    def __getitem__(self, i: int):
        return self.perm(i), self.provenance(i)

    def __iter__(self):
        return (self[i] for i in range(len(self)))


def catalog_taus(r: int, budget_seconds: float | None = None) -> TauCatalog:
    """Aggregate induced permutations over all (group, automorphism) pairs.

    Deduplicates by exact permutation equality, keeping the first
    (group, automorphism) pair in enumeration order as provenance.  On
    budget exhaustion the partial catalog is returned with complete=False.
    """
    if r not in (ENUM_MIN_R, ENUM_MAX_R):
        raise ValueError(f"catalog_taus supports r in {{3, 4}}, got {r}")
    deadline = None if budget_seconds is None else time.monotonic() + budget_seconds
    tab = _tables(r)
    n = 1 << r
    shifts = 4 * np.arange(n, dtype=np.int64)

    codes_chunks, gid_chunks, aid_chunks = [], [], []
    buf: list[tuple[int, ...]] = []
    buf_gid: list[int] = []
    buf_aid: list[int] = []

    def flush():
        if not buf:
            return
        arr = np.array(buf, dtype=np.int64)
        codes_chunks.append((arr << shifts).sum(axis=1))
        gid_chunks.append(np.array(buf_gid, dtype=np.int64))
        aid_chunks.append(np.array(buf_aid, dtype=np.int64))
        buf.clear()
        buf_gid.clear()
        buf_aid.clear()

    complete = True
    try:
        for gid, mats_idx in enumerate(_enumerate_regular_idx(r, deadline)):
            mul = _mult_table_from_idx(mats_idx, tab.app_l, n)
            for aid, images in enumerate(_automorphism_perms(mul, n)):
                buf.append(images)
                buf_gid.append(gid)
                buf_aid.append(aid)
            if len(buf) >= 262144:
                flush()
            if deadline is not None and time.monotonic() > deadline:
                raise BudgetExceeded("catalog budget exhausted")
    except BudgetExceeded:
        complete = False
    flush()

    if not codes_chunks:
        return TauCatalog(r, np.zeros((0, n), dtype=np.int8), [], [], complete)
    codes = np.concatenate(codes_chunks)
    gids = np.concatenate(gid_chunks)
    aids = np.concatenate(aid_chunks)
    _, first = np.unique(codes, return_index=True)
    first.sort()  # first-seen order over the deduplicated set
    codes, gids, aids = codes[first], gids[first], aids[first]
    images = ((codes[:, None] >> shifts[None, :]) & 15).astype(np.int8)
    return TauCatalog(r, images, gids, aids, complete)
