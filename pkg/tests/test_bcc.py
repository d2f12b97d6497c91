import numpy as np
import pytest

from onmf.bcc import (
    BipartiteLabeling,
    Clustering,
    bcc_cluster,
    brute_force_bcc,
    disagreements,
    round_block,
)
from onmf.core import frobenius_norm_sq


def labeling(rows):
    return BipartiteLabeling(labels=np.array(rows, dtype=bool))


def test_round_block_exact_all_ones():
    a_hat, w_hat = round_block(np.ones((2, 2)), [1.0, 1.0], [1.0, 1.0])
    assert np.array_equal(a_hat, [1.0, 1.0])
    assert np.array_equal(w_hat, [1.0, 1.0])


def test_round_block_hand_trace():
    Mblk = np.array([[1.0, 1.0], [1.0, 0.0]])
    a_hat, w_hat = round_block(Mblk, [1.0, 0.5], [1.0, 1.0])
    assert np.array_equal(a_hat, [1.0, 1.0])
    assert np.array_equal(w_hat, [1.0, 1.0])
    binary_err = frobenius_norm_sq(Mblk - np.outer(a_hat, w_hat))
    frac_err = frobenius_norm_sq(Mblk - np.outer([1.0, 0.5], [1.0, 1.0]))
    assert binary_err == 1.0
    assert frac_err == 0.5
    assert binary_err <= 8 * frac_err


def test_round_block_zero_w():
    Mblk = np.array([[1.0], [0.0]])
    a_hat, w_hat = round_block(Mblk, [0.3, 0.1], [0.0])
    assert (a_hat == 0).all()
    assert (w_hat == 0).all()


def test_round_block_empty_support_column():
    # chosen column is all-zero: the 8x bound is vacuous, w_hat marks the
    # positive-weight columns
    Mblk = np.array([[0.0, 1.0]])
    a_hat, w_hat = round_block(Mblk, [0.0], [5.0, 0.0])
    assert (a_hat == 0).all()
    assert np.array_equal(w_hat, [1.0, 0.0])


def test_round_block_rejects_bad_inputs():
    with pytest.raises(ValueError):
        round_block(np.array([[0.5]]), [1.0], [1.0])
    with pytest.raises(ValueError):
        round_block(np.array([[1.0]]), [-1.0], [1.0])


def test_round_block_bound_on_random_triples():
    rng = np.random.default_rng(22)
    for _ in range(300):
        m, n = int(rng.integers(1, 7)), int(rng.integers(1, 7))
        Mblk = (rng.random((m, n)) < 0.5).astype(float)
        a = rng.random(m) * np.where(rng.random(m) < 0.2, 0.0, 1.0)
        w = rng.random(n) * np.where(rng.random(n) < 0.2, 0.0, 1.0)
        a_hat, w_hat = round_block(Mblk, a, w)
        assert set(np.unique(a_hat)) <= {0.0, 1.0}
        assert set(np.unique(w_hat)) <= {0.0, 1.0}
        binary_err = frobenius_norm_sq(Mblk - np.outer(a_hat, w_hat))
        frac_err = frobenius_norm_sq(Mblk - np.outer(a, w))
        assert binary_err <= 8 * frac_err + 1e-12


def test_disagreements_perfect_blocks():
    g = labeling([[1, 1, 0], [0, 0, 1]])
    clustering = Clustering(left=np.array([1, 2]), right=np.array([1, 1, 2]))
    assert disagreements(g, clustering) == 0


def test_disagreements_all_minus_singletons():
    g = labeling(np.zeros((2, 3)))
    clustering = Clustering(left=np.zeros(2, dtype=int),
                            right=np.zeros(3, dtype=int))
    assert disagreements(g, clustering) == 0


def test_disagreements_all_plus_singletons():
    g = labeling(np.ones((2, 2)))
    clustering = Clustering(left=np.zeros(2, dtype=int),
                            right=np.zeros(2, dtype=int))
    assert disagreements(g, clustering) == 4


def test_bcc_identity():
    clustering, count = bcc_cluster(labeling(np.eye(2)))
    assert count == 0
    assert clustering.left[0] == clustering.right[0] != 0
    assert clustering.left[1] == clustering.right[1] != 0
    assert clustering.left[0] != clustering.left[1]


def test_bcc_all_plus_single_cluster():
    clustering, count = bcc_cluster(labeling(np.ones((3, 4))))
    assert count == 0
    assert len(set(clustering.left.tolist())) == 1
    assert set(clustering.left.tolist()) == set(clustering.right.tolist())


def test_bcc_count_matches_disagreements_function():
    rng = np.random.default_rng(23)
    for _ in range(20):
        m, n = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        g = labeling(rng.random((m, n)) < 0.5)
        clustering, count = bcc_cluster(g)
        assert count == disagreements(g, clustering)


def test_brute_force_examples():
    assert brute_force_bcc(labeling(np.eye(2))) == 0
    assert brute_force_bcc(labeling(np.ones((3, 3)))) == 0
    # 3x2 mixed labeling: {u0,u2,v0},{u1,v1} leaves only u2-v1 in
    # disagreement, and no perfect clustering exists
    g = labeling([[1, 0], [0, 1], [1, 1]])
    assert brute_force_bcc(g) == 1


def test_brute_force_too_large():
    with pytest.raises(ValueError):
        brute_force_bcc(labeling(np.ones((5, 4))))


def test_bcc_within_120_of_optimum():
    rng = np.random.default_rng(24)
    for _ in range(15):
        m, n = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        g = labeling(rng.random((m, n)) < 0.5)
        _, count = bcc_cluster(g)
        assert count <= 120 * brute_force_bcc(g)
