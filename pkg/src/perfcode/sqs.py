"""Steiner quadruple systems of the codes S_tau: generation, validation,
the structured automorphism group, isomorphism, and point transitivity.

Point labels: the left copy of F^r occupies [0, 2^r), the right copy
[2^r, 2^{r+1}); label p is on the left iff p < 2^r.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .algebra import (
    BitMatrix,
    PointPerm,
    count_linear_products,
    double_coset_member,
    gl_order,
    identity_matrix,
    invert,
    invert_perm,
    is_linear,
)
from .errors import AffineInput, BudgetExceeded, DimensionMismatch

SQS_MAX_R = 5


@dataclass(frozen=True)
class SQS:
    """A set of 4-subsets of [0, order); quadruples stored as sorted tuples."""

    order: int
    quadruples: frozenset[tuple[int, int, int, int]]


@dataclass(frozen=True)
class SqsTauLabels:
    """Flat integer labels for the two point copies of SQS_tau."""

    r: int

    def left(self, a: int) -> int:
        return a

    def right(self, a: int) -> int:
        return (1 << self.r) + a


@dataclass(frozen=True)
class Violation:
    triple: tuple[int, int, int]
    count: int


def sqs_from_tau(tau: PointPerm) -> SQS:
    """SQS_tau = Q_0 u Q_1 u Q_tau on 2^{r+1} points.

    Q_0 / Q_1: zero-sum 4-subsets inside one copy; Q_tau: pairs
    ({a,c},{b,d}) with tau(a+c) = b+d != 0.
    """
    tau.require_zero_fixing()
    r = tau.r
    if r > SQS_MAX_R:
        raise BudgetExceeded(f"sqs_from_tau supports r <= {SQS_MAX_R}, got {r}")
    n = 1 << r
    quads = set()
    for a, b, c in combinations(range(n), 3):
        d = a ^ b ^ c
        if d > c:
            quads.add((a, b, c, d))
            quads.add((n + a, n + b, n + c, n + d))
    for a, c in combinations(range(n), 2):
        t = tau.images[a ^ c]
        for b in range(n):
            d = b ^ t
            if b < d:
                quads.add((a, c, n + b, n + d))
    return SQS(order=2 * n, quadruples=frozenset(quads))


def validate_sqs(q: SQS):
    """None if every 3-subset is covered exactly once, else the first Violation."""
    v = q.order
    counts: dict[tuple[int, int, int], int] = {}
    for quad in q.quadruples:
        if len(quad) != 4 or len(set(quad)) != 4 or any(not 0 <= p < v for p in quad):
            bad = tuple(sorted(quad))[:3]
            return Violation(triple=bad, count=-1)
        for tri in combinations(sorted(quad), 3):
            counts[tri] = counts.get(tri, 0) + 1
    total = v * (v - 1) * (v - 2) // 6
    if len(counts) == total and all(c == 1 for c in counts.values()):
        return None
    for tri in combinations(range(v), 3):
        c = counts.get(tri, 0)
        if c != 1:
            return Violation(triple=tri, count=c)
    return None


# ---------------------------------------------------------------------------
# Symmetric-difference structure of the quadruples through a point pair
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DichotomyReport:
    """Outcome of the symmetric-difference dichotomy check.

    part1_counterexamples: pairs of quadruples through two same-side
    points whose symmetric difference leaves the system (must be empty).
    part2_missing: (a, b) for which no quadruple pair through left-a,
    right-b has a symmetric difference outside the system (must be empty
    for non-linear tau).
    """

    part1_counterexamples: tuple
    part2_missing: tuple
    part2_witnesses: dict

    @property
    def ok(self) -> bool:
        return not self.part1_counterexamples and not self.part2_missing


def _q0_pairs(tau: PointPerm, a: int, b: int) -> list[frozenset[int]]:
    """Quadruples through left points a and b (a != b)."""
    n = 1 << tau.r
    s = a ^ b
    out = []
    for c in range(n):
        d = c ^ s
        if c < d and c != a and c != b:
            out.append(frozenset((a, b, c, d)))
    t = tau.images[s]
    for c in range(n):
        d = c ^ t
        if c < d:
            out.append(frozenset((a, b, n + c, n + d)))
    return out


def _q1_pairs(tau: PointPerm, a: int, b: int) -> list[frozenset[int]]:
    """Quadruples through right points a and b (a != b)."""
    n = 1 << tau.r
    s = a ^ b
    out = []
    for c in range(n):
        d = c ^ s
        if c < d and c != a and c != b:
            out.append(frozenset((n + a, n + b, n + c, n + d)))
    spre = invert_perm(tau).images[s]
    for c in range(n):
        d = c ^ spre
        if c < d:
            out.append(frozenset((c, d, n + a, n + b)))
    return out


def _qtau_pairs(tau: PointPerm, a: int, b: int) -> list[frozenset[int]]:
    """Quadruples through left point a and right point b."""
    n = 1 << tau.r
    out = []
    for c in range(n):
        if c == a:
            continue
        d = b ^ tau.images[a ^ c]
        out.append(frozenset((a, c, n + b, n + d)))
    return out


def symmetric_difference_dichotomy(tau: PointPerm) -> DichotomyReport:
    """Symmetric-difference dichotomy for a non-linear tau.

    (i) through two same-side points, symmetric differences of distinct
    quadruples stay in SQS_tau; (ii) through a left/right point pair
    there is always a quadruple pair whose symmetric difference leaves it.
    """
    tau.require_zero_fixing()
    if is_linear(tau) is not None:
        raise AffineInput("tau is linear; the system is affine")
    n = 1 << tau.r
    system = {frozenset(q) for q in sqs_from_tau(tau).quadruples}
    part1 = []
    for a, b in combinations(range(n), 2):
        for group in (_q0_pairs(tau, a, b), _q1_pairs(tau, a, b)):
            for q1, q2 in combinations(group, 2):
                if q1 ^ q2 not in system:
                    part1.append((tuple(sorted(q1)), tuple(sorted(q2))))
    missing = []
    witnesses = {}
    for a in range(n):
        for b in range(n):
            found = None
            group = _qtau_pairs(tau, a, b)
            for q1, q2 in combinations(group, 2):
                if q1 ^ q2 not in system:
                    found = (tuple(sorted(q1)), tuple(sorted(q2)))
                    break
            if found is None:
                missing.append((a, b))
            else:
                witnesses[(a, b)] = found
    return DichotomyReport(
        part1_counterexamples=tuple(part1),
        part2_missing=tuple(missing),
        part2_witnesses=witnesses,
    )


# ---------------------------------------------------------------------------
# Structured maps of tau-labeled systems
# ---------------------------------------------------------------------------


def apply_structured(transform: tuple, q: SQS) -> SQS:
    """Apply (sigma_{a,A} | sigma_{b,B}) o xi^t to a tau-labeled system.

    With t=1 the side swap acts first, then the left/right affine
    relabelings; this matches the action identities
    (sigma_A|sigma_B)(SQS_tau) = SQS_{B tau A^{-1}} and
    (sigma_A|sigma_B) xi (SQS_tau) = SQS_{B tau^{-1} A^{-1}}.
    """
    a, mat_a, b, mat_b, t = transform
    n = q.order // 2

    def image(p: int) -> int:
        side, x = (p >= n), p % n
        if t:
            side = not side
        if side:
            return n + (b ^ mat_b.apply(x))
        return a ^ mat_a.apply(x)

    quads = frozenset(tuple(sorted(image(p) for p in quad)) for quad in q.quadruples)
    return SQS(order=q.order, quadruples=quads)


def xi_swap(q: SQS) -> SQS:
    """Swap the two point copies; maps SQS_tau to SQS_{tau^{-1}}."""
    n = q.order // 2
    quads = frozenset(tuple(sorted(p ^ n for p in quad)) for quad in q.quadruples)
    return SQS(order=q.order, quadruples=quads)


@dataclass(frozen=True)
class SqsIsomorphism:
    """Witness (A, B, t): apply_structured((0, A, 0, B, t), SQS_tau) = SQS_tau'."""

    a_mat: BitMatrix
    b_mat: BitMatrix
    t: int


def sqs_isomorphic(tau: PointPerm, tau_p: PointPerm):
    """Witness that SQS_tau and SQS_tau' are isomorphic, or None.

    Both linear: always isomorphic (both systems affine).  Mixed
    linearity: never (only the affine system satisfies the part-(i)
    dichotomy everywhere).  Both non-linear: isomorphic iff tau' lies in
    GL tau GL (t=0) or GL tau^{-1} GL (t=1).
    """
    if tau.r != tau_p.r:
        raise DimensionMismatch("permutations live over different dimensions")
    tau.require_zero_fixing()
    tau_p.require_zero_fixing()
    if tau.r > SQS_MAX_R:
        raise BudgetExceeded(f"sqs_isomorphic supports r <= {SQS_MAX_R}")
    lin, lin_p = is_linear(tau), is_linear(tau_p)
    if (lin is None) != (lin_p is None):
        return None
    if lin is not None and lin_p is not None:
        return SqsIsomorphism(identity_matrix(tau.r), lin_p @ invert(lin), 0)
    witness = double_coset_member(tau_p, tau, group="GL")
    if witness is not None:
        return SqsIsomorphism(witness[0], witness[1], 0)
    witness = double_coset_member(tau_p, invert_perm(tau), group="GL")
    if witness is not None:
        return SqsIsomorphism(witness[0], witness[1], 1)
    return None


def point_transitive(tau: PointPerm):
    """(flag, witness): SQS_tau is point transitive iff tau^{-1} in GL tau GL.

    Linear tau gives the affine system, always point transitive (witness
    None).  Otherwise the witness is the double-coset pair (A, B).
    """
    tau.require_zero_fixing()
    if is_linear(tau) is not None:
        return True, None
    witness = double_coset_member(invert_perm(tau), tau, group="GL")
    return witness is not None, witness


def aut_order(tau: PointPerm) -> int:
    """|Aut(SQS_tau)| (= |PAut(S_tau)|).

    Non-linear tau: every automorphism is (sigma_{a,A}|sigma_{b,B}) xi^t,
    so the order is 2^{2r} (N0 + N1) with
    N0 = #{A : tau o sigma_A o tau^{-1} linear} (t=0) and
    N1 = #{A : tau o sigma_A o tau   linear} (t=1).
    Linear tau: the affine system of order 2^{r+1}, |Aut| = 2^{r+1} |GL(r+1,2)|.
    """
    tau.require_zero_fixing()
    r = tau.r
    if is_linear(tau) is not None:
        return (1 << (r + 1)) * gl_order(r + 1)
    n0 = count_linear_products(tau, invert_perm(tau))
    n1 = count_linear_products(tau, tau)
    return (1 << (2 * r)) * (n0 + n1)


# ---------------------------------------------------------------------------
# Independent automorphism counting by backtracking (oracle for aut_order)
# ---------------------------------------------------------------------------


class _SqsIndex:
    def __init__(self, q: SQS):
        self.v = q.order
        self.quads = [tuple(sorted(quad)) for quad in q.quadruples]
        self.quad_set = set(self.quads)
        self.at = [[] for _ in range(self.v)]
        self.completion: dict[tuple[int, int, int], int] = {}
        self.pair_quads: dict[tuple[int, int], list] = {}
        for qi, quad in enumerate(self.quads):
            for p in quad:
                self.at[p].append(qi)
            for tri in combinations(quad, 3):
                other = next(p for p in quad if p not in tri)
                self.completion[tri] = other
            for x, y in combinations(quad, 2):
                self.pair_quads.setdefault((x, y), []).append(quad)
        # pair invariant: how many pairs of distinct quadruples through
        # (x, y) have their symmetric difference inside the system; an
        # isomorphism must match it, which prunes image candidates early
        self.pair_inv = [[0] * self.v for _ in range(self.v)]
        for (x, y), quads in self.pair_quads.items():
            sets = [frozenset(qd) for qd in quads]
            inv = sum(
                1
                for i in range(len(sets))
                for j in range(i + 1, len(sets))
                if tuple(sorted(sets[i] ^ sets[j])) in self.quad_set
            )
            self.pair_inv[x][y] = self.pair_inv[y][x] = inv
        self.point_inv = [tuple(sorted(row)) for row in self.pair_inv]

    def compatible(self, img: list[int], p: int, c: int) -> bool:
        """Invariant screen for mapping p to c under the partial map."""
        if self.point_inv[p] != self.point_inv[c]:
            return False
        row_p, row_c = self.pair_inv[p], self.pair_inv[c]
        for x, x_img in enumerate(img):
            if x_img >= 0 and row_p[x] != row_c[x_img]:
                return False
        return True

    def propagate(self, img: list[int], used: list[bool], seeds: list[int]) -> bool:
        """Force images through quadruples with three known points."""
        queue = list(seeds)
        while queue:
            x = queue.pop()
            for qi in self.at[x]:
                quad = self.quads[qi]
                known = []
                unknown = []
                for p in quad:
                    if img[p] >= 0:
                        known.append(img[p])
                    else:
                        unknown.append(p)
                if len(unknown) > 1:
                    continue
                if not unknown:
                    if tuple(sorted(known)) not in self.quad_set:
                        return False
                    continue
                comp = self.completion.get(tuple(sorted(known)))
                if comp is None or used[comp]:
                    return False
                y = unknown[0]
                img[y] = comp
                used[comp] = True
                queue.append(y)
        return True

    def _branch_choices(self, img: list[int], used: list[bool]):
        """Next decision point and its candidate images.

        Prefers a quadruple with exactly two assigned points: the images
        of its two free points must fill an image quadruple through the
        two known images, which caps the branching at a handful of pairs
        instead of every unused point.
        """
        for quad in self.quads:
            known_img = []
            free = []
            for p in quad:
                if img[p] >= 0:
                    known_img.append(img[p])
                else:
                    free.append(p)
            if len(free) != 2:
                continue
            a, b = sorted(known_img)
            p, p2 = free
            cands = []
            for target in self.pair_quads[(a, b)]:
                rest = [z for z in target if z != a and z != b]
                for z, w in (rest, rest[::-1]):
                    if not used[z] and not used[w]:
                        cands.append((p, z, p2, w))
            return cands
        p = next((x for x in range(self.v) if img[x] < 0), None)
        if p is None:
            return None
        return [(p, c, None, None) for c in range(self.v) if not used[c]]

    def extendable(self, img: list[int], used: list[bool]) -> bool:
        """Does some full automorphism extend the partial map?"""
        choices = self._branch_choices(img, used)
        if choices is None:
            return True
        for p, c, p2, c2 in choices:
            if not self.compatible(img, p, c):
                continue
            img2, used2 = img[:], used[:]
            img2[p] = c
            used2[c] = True
            seeds = [p]
            if p2 is not None:
                if used2[c2] or not self.compatible(img2, p2, c2):
                    continue
                img2[p2] = c2
                used2[c2] = True
                seeds.append(p2)
            if self.propagate(img2, used2, seeds) and self.extendable(img2, used2):
                return True
        return False


def count_automorphisms(q: SQS) -> int:
    """|Aut(Q)| by an orbit-stabilizer chain over backtracking searches.

    Independent of the structured formula in aut_order: works on the bare
    quadruple set of any SQS.  At each level the orbit of the next point
    under the stabilizer of the previous ones is found by existence
    searches, and the recursion multiplies the orbit sizes.
    """
    index = _SqsIndex(q)

    def stab_order(img: list[int], used: list[bool]) -> int:
        p = next((x for x in range(index.v) if img[x] < 0), None)
        if p is None:
            return 1
        orbit = 0
        for c in range(index.v):
            if used[c] or not index.compatible(img, p, c):
                continue
            img2, used2 = img[:], used[:]
            img2[p] = c
            used2[c] = True
            if index.propagate(img2, used2, [p]) and index.extendable(img2, used2):
                orbit += 1
        img2, used2 = img[:], used[:]
        img2[p] = p
        used2[p] = True
        ok = index.propagate(img2, used2, [p])
        assert ok, "identity must stabilize every prefix"
        return orbit * stab_order(img2, used2)

    return stab_order([-1] * index.v, [False] * index.v)
