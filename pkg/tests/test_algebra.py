import random
from itertools import combinations

import pytest

from perfcode import (
    AffineTransform,
    BitMatrix,
    DimensionMismatch,
    NotInvertible,
    PointPerm,
    ZeroNotFixed,
    BudgetExceeded,
    compose,
    double_coset_member,
    gl_enumerate,
    gl_order,
    identity_matrix,
    identity_perm,
    invert,
    invert_perm,
    is_linear,
    rank,
    sigma_am,
    sigma_m,
)
from conftest import random_zero_fixing


def xor_span_size(rows) -> int:
    """Oracle: size of the XOR span by explicit enumeration."""
    span = {0}
    for row in rows:
        span |= {x ^ row for x in span}
    return len(span)


class TestBitWord:
    def test_addition_is_involution(self):
        from perfcode import BitWord

        x = BitWord(8, 0b10110010)
        assert (x ^ x).value == 0
        y = BitWord(8, 0b00001111)
        assert ((x ^ y) ^ y) == x

    def test_weight_identity(self):
        from perfcode import BitWord

        rng = random.Random(9)
        for _ in range(50):
            x = BitWord(10, rng.randrange(1 << 10))
            y = BitWord(10, rng.randrange(1 << 10))
            assert (x ^ y).weight == x.weight + y.weight - 2 * (x & y).weight


class TestRank:
    def test_identity(self):
        assert rank(identity_matrix(3)) == 3

    def test_zero(self):
        assert rank(BitMatrix(4, 4, (0, 0, 0, 0))) == 0

    def test_rectangular_against_enumeration(self):
        # rows 110, 011 over 3 columns; leftmost char is column 1
        m = BitMatrix(2, 3, (0b011, 0b110))
        expected = xor_span_size(m.row_bits).bit_length() - 1
        assert expected == 2
        assert rank(m) == 2

    def test_random_against_enumeration(self):
        rng = random.Random(1)
        for _ in range(30):
            rows = tuple(rng.randrange(16) for _ in range(rng.randrange(1, 5)))
            m = BitMatrix(len(rows), 4, rows)
            assert rank(m) == xor_span_size(rows).bit_length() - 1


class TestInvert:
    def test_identity(self):
        assert invert(identity_matrix(4)) == identity_matrix(4)

    def test_permutation_matrix_transpose(self):
        m = BitMatrix(3, 3, (0b010, 0b100, 0b001))
        assert invert(m) == m.transpose()

    def test_singular(self):
        with pytest.raises(NotInvertible):
            invert(BitMatrix(3, 3, (0b011, 0b011, 0b100)))

    def test_involution_and_product(self):
        rng = random.Random(2)
        mats = list(gl_enumerate(3))
        for _ in range(20):
            m = rng.choice(mats)
            mi = invert(m)
            assert invert(mi) == m
            assert m @ mi == identity_matrix(3)
            assert mi @ m == identity_matrix(3)


class TestGlEnumerate:
    @pytest.mark.parametrize("r,count", [(2, 6), (3, 168), (4, 20160)])
    def test_counts(self, r, count):
        mats = list(gl_enumerate(r))
        assert len(mats) == count == gl_order(r)
        assert len(set(m.row_bits for m in mats)) == count

    def test_all_invertible(self):
        assert all(rank(m) == 3 for m in gl_enumerate(3))

    def test_enumeration_order_is_sorted(self):
        rows = [m.row_bits for m in gl_enumerate(3)]
        assert rows == sorted(rows)
        assert rows[0] == (1, 2, 4)  # identity comes first

    def test_budget_guard(self):
        with pytest.raises(BudgetExceeded):
            list(gl_enumerate(7))

    def test_r5_stream_prefix(self):
        stream = gl_enumerate(5)
        first = next(stream)
        assert first == identity_matrix(5)
        assert gl_order(5) == 9999360


class TestIsLinear:
    def test_identity(self):
        assert is_linear(identity_perm(3)) == identity_matrix(3)

    def test_sigma_m_roundtrip(self):
        rng = random.Random(3)
        mats = list(gl_enumerate(3))
        for _ in range(20):
            m = rng.choice(mats)
            assert is_linear(sigma_m(m)) == m

    def test_additivity_violation(self):
        # swap two non-basis points of the identity map: basis images stay
        # intact but additivity breaks at a witness point
        images = list(range(8))
        images[3], images[5] = images[5], images[3]
        assert is_linear(PointPerm(3, tuple(images))) is None

    def test_zero_not_fixed(self):
        images = (1, 0, 2, 3, 4, 5, 6, 7)
        with pytest.raises(ZeroNotFixed):
            is_linear(PointPerm(3, images))

    def test_exhaustive_additivity_equivalence_r2(self):
        # over all 6 zero-fixing permutations of F^2: linear iff additive
        from itertools import permutations

        for rest in permutations((1, 2, 3)):
            tau = PointPerm(2, (0,) + rest)
            additive = all(
                tau(a ^ b) == tau(a) ^ tau(b) for a in range(4) for b in range(4)
            )
            assert (is_linear(tau) is not None) == additive


class TestCompose:
    def test_identity_neutral(self, rng):
        tau = random_zero_fixing(3, rng)
        assert compose(tau, identity_perm(3)).images == tau.images
        assert compose(identity_perm(3), tau).images == tau.images

    def test_inverse(self, rng):
        tau = random_zero_fixing(3, rng)
        assert compose(tau, invert_perm(tau)).images == identity_perm(3).images

    def test_sigma_product_pointwise(self):
        rng = random.Random(4)
        mats = list(gl_enumerate(3))
        for _ in range(10):
            a, b = rng.choice(mats), rng.choice(mats)
            lhs = compose(sigma_m(a), sigma_m(b))
            ab = a @ b
            for point in range(8):
                assert lhs(point) == ab.apply(point)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            compose(identity_perm(3), identity_perm(4))


class TestDoubleCoset:
    def test_self_witness_is_identity(self, rng):
        tau = random_zero_fixing(3, rng)
        witness = double_coset_member(tau, tau)
        assert witness == (identity_matrix(3), identity_matrix(3))

    def test_member_by_construction(self):
        rng = random.Random(5)
        mats = list(gl_enumerate(3))
        for _ in range(5):
            tau = random_zero_fixing(3, rng)
            m, n = rng.choice(mats), rng.choice(mats)
            tau_p = compose(compose(sigma_m(m), tau), sigma_m(n))
            witness = double_coset_member(tau_p, tau)
            assert witness is not None
            a_mat, b_mat = witness
            # verify: tau' = sigma_B o tau o sigma_A^{-1}
            rebuilt = compose(compose(sigma_m(b_mat), tau), invert_perm(sigma_m(a_mat)))
            assert rebuilt.images == tau_p.images

    def test_inverse_always_member_at_r3(self, rng):
        # every zero-fixing tau at r=3 lies in one double coset with its inverse
        for _ in range(10):
            tau = random_zero_fixing(3, rng)
            assert double_coset_member(invert_perm(tau), tau) is not None

    def test_symmetric_relation(self, rng):
        for _ in range(10):
            tau = random_zero_fixing(3, rng)
            tau_p = random_zero_fixing(3, rng)
            fwd = double_coset_member(tau_p, tau) is not None
            bwd = double_coset_member(tau, tau_p) is not None
            assert fwd == bwd

    def test_invariance_under_translation_of_the_coset(self, rng):
        mats = list(gl_enumerate(3))
        local = random.Random(6)
        tau = random_zero_fixing(3, rng)
        tau_p = random_zero_fixing(3, rng)
        base = double_coset_member(tau_p, tau) is not None
        for _ in range(5):
            m, n = local.choice(mats), local.choice(mats)
            moved = compose(compose(sigma_m(m), tau), sigma_m(n))
            assert (double_coset_member(tau_p, moved) is not None) == base

    def test_ga_variant_accepts_affine_pairs(self):
        rng = random.Random(7)
        mats = list(gl_enumerate(3))
        tau = random_zero_fixing(3, rng)
        a_t = AffineTransform(5, rng.choice(mats))
        b_t = AffineTransform(3, rng.choice(mats))
        tau_p = compose(compose(b_t.as_perm(), tau), a_t.as_perm())
        witness = double_coset_member(tau_p, tau, group="GA")
        assert witness is not None
        wa, wb = witness
        rebuilt = compose(compose(wb.as_perm(), tau), invert_perm(wa.as_perm()))
        assert rebuilt.images == tau_p.images

    def test_budget_guard(self):
        with pytest.raises(BudgetExceeded):
            double_coset_member(identity_perm(6), identity_perm(6))


class TestAffineTransform:
    def test_action(self):
        t = AffineTransform(0b101, identity_matrix(3))
        assert t.apply(0) == 0b101
        assert t.apply(0b101) == 0

    def test_compose_matches_pointwise(self):
        rng = random.Random(8)
        mats = list(gl_enumerate(3))
        for _ in range(10):
            t1 = AffineTransform(rng.randrange(8), rng.choice(mats))
            t2 = AffineTransform(rng.randrange(8), rng.choice(mats))
            composed = t1.compose(t2)
            for b in range(8):
                assert composed.apply(b) == t1.apply(t2.apply(b))
