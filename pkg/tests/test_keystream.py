import numpy as np
import pytest

from qclattice.errors import InvalidParams, ZeroSeedSlice
from qclattice.keystream import (
    BlockPermutation,
    Lfsr,
    PermutationStream,
    ReseedingLfsr,
    build_block_permutation,
    next_error_vector,
    next_permutation,
    seed_slices,
)
from qclattice.primitives import poly, reciprocal


def test_lfsr_full_period_primitive():
    for deg in (3, 4, 5, 6):
        lf = Lfsr(deg, poly(deg), 1)
        seen = set()
        for _ in range(1 << deg):
            if lf.state in seen:
                break
            seen.add(lf.state)
            lf.step()
        assert len(seen) == (1 << deg) - 1


def test_lfsr_rejects_zero_seed():
    with pytest.raises(InvalidParams):
        Lfsr(4, poly(4), 0)


def test_reseeding_stream_deterministic():
    a = ReseedingLfsr(5, poly(5), reciprocal(5), 9)
    b = ReseedingLfsr(5, poly(5), reciprocal(5), 9)
    assert np.array_equal(a.next_bits(500), b.next_bits(500))


@pytest.mark.parametrize("l1", [3, 4, 5, 6])
def test_reseeding_joint_period(l1):
    lf = ReseedingLfsr(l1, poly(l1), reciprocal(l1), 1)
    start = lf.joint_state()
    steps = 0
    target = ((1 << l1) - 1) ** 2
    while True:
        lf.next_bit()
        steps += 1
        if lf.joint_state() == start:
            break
        assert steps <= target
    assert steps == target


def test_error_vector_mean_weight():
    lf = ReseedingLfsr(9, poly(9), reciprocal(9), 333)
    weights = [int(next_error_vector(lf, 258).sum()) for _ in range(1000)]
    assert abs(np.mean(weights) - 129) <= 10


def test_error_vector_deterministic():
    a = ReseedingLfsr(9, poly(9), reciprocal(9), 7)
    b = ReseedingLfsr(9, poly(9), reciprocal(9), 7)
    assert np.array_equal(next_error_vector(a, 258), next_error_vector(b, 258))


def test_permutation_degenerate_q1():
    st = PermutationStream(1, 0)
    assert np.array_equal(st.next_perm(), [0])


def test_permutation_q7_is_state_sequence():
    # q = 2^gamma - 1: no rejection, values are the visited states minus one
    seed = 5
    st = PermutationStream(7, seed)
    ref = Lfsr(3, poly(3), seed)
    states = []
    for _ in range(7):
        states.append(ref.state - 1)
        ref.step()
    perm = st.next_perm()
    assert np.array_equal(perm, states)
    assert sorted(perm.tolist()) == list(range(7))


def test_permutation_q43_bijections():
    st = PermutationStream(43, 21)
    for _ in range(100):
        p = next_permutation(st)
        assert sorted(p.tolist()) == list(range(43))


def test_permutation_never_non_bijective_bulk():
    st = PermutationStream(43, 33)
    for _ in range(10_000):
        p = st.next_perm()
        assert (np.bincount(p, minlength=43) == 1).all()


def test_permutation_rejects_power_of_two():
    with pytest.raises(InvalidParams):
        PermutationStream(8, 3)


def test_permutation_stream_rotates():
    st = PermutationStream(43, 11)
    a = st.next_perm()
    b = st.next_perm()
    assert not np.array_equal(a, b)


def test_block_permutation_orthogonal():
    rng = np.random.default_rng(0)
    t = rng.integers(0, 2, size=6 * 6)
    while any(not t[i * 6 : (i + 1) * 6].any() for i in range(6)):
        t = rng.integers(0, 2, size=6 * 6)
    bp = build_block_permutation(t, 43, 6)
    m = bp.to_matrix().astype(np.int64)
    assert np.array_equal(m @ m.T, np.eye(43 * 6, dtype=np.int64))


def test_block_permutation_matrix_matches_apply():
    bp = BlockPermutation(4, [np.array([1, 0, 3, 2]), np.array([2, 3, 0, 1])])
    x = np.arange(8) + 10
    assert np.array_equal(bp.apply(x), x @ bp.to_matrix())


def test_block_permutation_identical_slices():
    t = np.tile(np.array([1, 0, 1, 0, 0, 0], dtype=np.uint8), 6)
    bp = build_block_permutation(t, 43, 6)
    for p in bp.perms[1:]:
        assert np.array_equal(p, bp.perms[0])


def test_block_permutation_zero_slice():
    t = np.ones(36, dtype=np.uint8)
    t[6:12] = 0
    with pytest.raises(ZeroSeedSlice):
        build_block_permutation(t, 43, 6)


def test_apply_inverse_roundtrip():
    rng = np.random.default_rng(1)
    t = np.ones(8, dtype=np.uint8)
    bp = build_block_permutation(t, 3, 4)
    x = rng.integers(-100, 100, size=12)
    assert np.array_equal(bp.apply_inverse(bp.apply(x)), x)
    ident = BlockPermutation(3, [np.arange(3)] * 4)
    assert np.array_equal(ident.apply(x), x)


def test_single_block_swap_hand_checked():
    bp = BlockPermutation(4, [np.array([1, 0, 3, 2])])
    assert np.array_equal(bp.apply(np.array([1, 2, 3, 4])), [2, 1, 4, 3])


def test_seed_slices_layout():
    bits = np.array([1, 0, 0, 1, 1, 0], dtype=np.uint8)  # LSB-first slices
    seeds, gamma = seed_slices(bits, 3, 3)
    assert gamma == 2
    assert seeds == [1, 2, 1]
