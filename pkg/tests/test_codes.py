import random
from itertools import combinations

import pytest

from perfcode import (
    InconsistentInput,
    LengthMismatch,
    PointPerm,
    ZeroNotFixed,
    apply_point_perm_to_code,
    brute_kernel_dim,
    brute_min_distance,
    brute_rank,
    build_s_tau,
    explicit_materialize,
    extended_hamming,
    gl_enumerate,
    identity_perm,
    intersect,
    invert_perm,
    linear_structure_set,
    sigma_m,
    stats_coset_union,
)
from perfcode._bits import weight
from conftest import random_zero_fixing


class TestExtendedHamming:
    def test_r3_parameters(self):
        h = extended_hamming(3)
        words = h.words()
        assert h.length == 8
        assert len(words) == 16  # dimension 2^3 - 3 - 1 = 4
        assert brute_min_distance(_explicit(h)) == 4

    def test_r3_defining_conditions(self):
        for w in extended_hamming(3).words():
            index_sum = 0
            for a in range(8):
                if (w >> a) & 1:
                    index_sum ^= a
            assert index_sum == 0
            assert weight(w) % 2 == 0

    def test_r4_weight4_count(self):
        # v(v-1)(v-2)/24 quadruples for v = 16; frozen from the closed form
        expected = 16 * 15 * 14 // 24
        assert expected == 140
        words = extended_hamming(4).words()
        assert len(words) == 2048
        assert sum(1 for w in words if weight(w) == 4) == expected

    def test_bad_r(self):
        with pytest.raises(ValueError):
            extended_hamming(1)


def _explicit(linear):
    from perfcode import ExplicitCode

    return ExplicitCode(linear.length, tuple(linear.words()))


class TestIntersect:
    def test_self_intersection(self):
        h = extended_hamming(3)
        assert set(intersect(h, h).words()) == set(h.words())

    def test_gl_invariance(self):
        rng = random.Random(11)
        h = extended_hamming(3)
        mats = list(gl_enumerate(3))
        for _ in range(5):
            moved = apply_point_perm_to_code(sigma_m(rng.choice(mats)), h)
            assert set(moved.words()) == set(h.words())
            assert set(intersect(h, moved).words()) == set(h.words())

    def test_all_four_dimensions_reachable_at_r3(self):
        # the intersection dim tau(H) cap H takes each value in {1,2,3,4}
        h = extended_hamming(3)
        seen = set()
        rng = random.Random(12)
        for _ in range(4000):
            tau = random_zero_fixing(3, rng)
            moved = apply_point_perm_to_code(tau, h)
            seen.add(intersect(moved, h).dim)
            if seen == {1, 2, 3, 4}:
                break
        assert seen == {1, 2, 3, 4}

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            intersect(extended_hamming(3), extended_hamming(4))

    @pytest.mark.parametrize("r", [3, 4])
    def test_intersection_dim_is_coset_invariant(self, r):
        # dim(tau(H) cap H) is unchanged by tau -> sigma_A o tau o sigma_B
        rng = random.Random(13)
        mats = list(gl_enumerate(r))
        h = extended_hamming(r)
        from perfcode import compose

        for _ in range(5):
            tau = random_zero_fixing(r, rng)
            base = intersect(apply_point_perm_to_code(tau, h), h).dim
            a, b = rng.choice(mats), rng.choice(mats)
            moved = compose(compose(sigma_m(a), tau), sigma_m(b))
            assert intersect(apply_point_perm_to_code(moved, h), h).dim == base


class TestApplyPointPerm:
    def test_identity(self):
        h = extended_hamming(3)
        assert apply_point_perm_to_code(identity_perm(3), h).generators == h.generators

    def test_roundtrip(self, rng):
        h = extended_hamming(3)
        tau = random_zero_fixing(3, rng)
        back = apply_point_perm_to_code(invert_perm(tau), apply_point_perm_to_code(tau, h))
        assert set(back.words()) == set(h.words())


class TestLinearStructureSet:
    def test_linear_tau_gives_everything(self):
        rng = random.Random(14)
        m = rng.choice(list(gl_enumerate(3)))
        assert linear_structure_set(sigma_m(m)) == list(range(8))

    def test_against_exhaustive_oracle(self, rng):
        for _ in range(20):
            tau = random_zero_fixing(3, rng)
            oracle = [
                a
                for a in range(8)
                if all(tau(a ^ b) == tau(a) ^ tau(b) for b in range(8))
            ]
            assert linear_structure_set(tau) == oracle

    def test_is_a_subspace(self, rng):
        for _ in range(20):
            tau = random_zero_fixing(4, rng)
            members = set(linear_structure_set(tau))
            assert 0 in members
            for a in members:
                for b in members:
                    assert a ^ b in members

    def test_trivial_structure_gives_kernel_22_at_r4(self, rng):
        # a zero-fixing tau with L = {0} yields the minimal kernel 2^5 - 10
        while True:
            tau = random_zero_fixing(4, rng)
            if linear_structure_set(tau) == [0]:
                break
        stats = stats_coset_union(build_s_tau(tau), tau)
        assert stats.kernel_dim == 22

    def test_zero_not_fixed(self):
        with pytest.raises(ZeroNotFixed):
            linear_structure_set(PointPerm(3, (1, 0, 2, 3, 4, 5, 6, 7)))


class TestStatsAgainstBruteForce:
    def test_random_taus_r3(self, rng):
        for _ in range(12):
            tau = random_zero_fixing(3, rng)
            code = build_s_tau(tau)
            stats = stats_coset_union(code, tau)
            explicit = explicit_materialize(code)
            assert len(explicit.words) == 2048
            assert stats.size == 2048
            assert stats.rank == brute_rank(explicit)
            assert stats.kernel_dim == brute_kernel_dim(explicit)
            assert stats.min_distance == brute_min_distance(explicit) == 4

    def test_linear_tau_r3(self):
        tau = identity_perm(3)
        code = build_s_tau(tau)
        explicit = explicit_materialize(code)
        assert brute_rank(explicit) == 11
        assert brute_kernel_dim(explicit) == 11

    def test_inconsistent_reps(self, rng):
        tau = random_zero_fixing(3, rng)
        other = random_zero_fixing(3, rng)
        while other.images == tau.images:
            other = random_zero_fixing(3, rng)
        code = build_s_tau(tau)
        with pytest.raises(InconsistentInput):
            stats_coset_union(code, other)

    def test_kernel_word_stability(self, rng):
        # kernel words translate the code onto itself
        tau = random_zero_fixing(3, rng)
        code = build_s_tau(tau)
        explicit = explicit_materialize(code)
        words = set(explicit.words)
        kernel_words = [x for x in explicit.words if all((x ^ w) in words for w in words)]
        from perfcode._bits import span_dim

        assert span_dim(kernel_words) == stats_coset_union(code, tau).kernel_dim
