import numpy as np
import pytest
import scipy.sparse as sp

from tkgalign.seeds import generate_seeds
from tkgalign.timesim import SimilarityMatrix


def time_matrix(scores):
    scores = np.asarray(scores, dtype=np.float64)
    return SimilarityMatrix(
        source_ids=np.arange(scores.shape[0]),
        target_ids=np.arange(scores.shape[1]),
        scores=scores,
        kind="time",
    )


def brute_force(scores, tol=1e-12):
    # direct implementation of both selection criteria
    out = set()
    ns, nt = scores.shape
    for i in range(ns):
        exact = [j for j in range(nt) if abs(scores[i, j] - 1.0) <= tol]
        if len(exact) != 1:
            continue
        j = exact[0]
        back = [a for a in range(ns) if abs(scores[a, j] - 1.0) <= tol]
        if back == [i]:
            out.add((i, j))
    return out


def test_unique_exact_matches_both_ways():
    assert generate_seeds(time_matrix([[1, 0], [0, 1]])).as_set() == {(0, 0), (1, 1)}


def test_row_with_two_exact_matches_excluded():
    assert generate_seeds(time_matrix([[1, 1], [0, 1]])).as_set() == set()
    # and target 1 is also blocked column-wise in the first case; an
    # unambiguous second row alone survives
    assert generate_seeds(time_matrix([[1, 1, 0], [0, 0, 1]])).as_set() == {(1, 2)}


def test_submaximal_rows_excluded():
    assert generate_seeds(time_matrix([[0.8, 0], [0, 1]])).as_set() == {(1, 1)}


def test_requires_time_kind():
    m = time_matrix([[1.0]])
    m.kind = "embedding"
    with pytest.raises(ValueError):
        generate_seeds(m)


def test_tolerance_absorbs_rounding():
    score = 2 * 3 / (3 + 3)  # exactly 1 in this case, perturb slightly
    m = time_matrix([[score - 1e-13]])
    assert generate_seeds(m).as_set() == {(0, 0)}


def test_matches_brute_force_with_planted_matches():
    rng = np.random.default_rng(0)
    for trial in range(100):
        s = np.round(rng.random((40, 40)) * 0.9, 3)
        # plant exact matches, some ambiguous on purpose
        for i in rng.choice(40, size=10, replace=False):
            s[i, rng.integers(40)] = 1.0
        if trial % 3 == 0:
            s[:2, :2] = 1.0  # ambiguous block
        got = generate_seeds(time_matrix(s)).as_set()
        assert got == brute_force(s)
        # partial matching both ways
        assert len({i for i, _ in got}) == len(got)
        assert len({j for _, j in got}) == len(got)
        assert all(s[i, j] == 1.0 for i, j in got)


def test_sparse_and_dense_agree():
    rng = np.random.default_rng(1)
    s = np.where(rng.random((30, 30)) < 0.1, 1.0, 0.0)
    dense = generate_seeds(time_matrix(s)).as_set()
    sparse = generate_seeds(
        SimilarityMatrix(np.arange(30), np.arange(30), sp.csr_matrix(s), kind="time")
    ).as_set()
    assert dense == sparse == brute_force(s)


def test_id_mapping_respected():
    m = SimilarityMatrix(
        source_ids=np.array([5, 9]),
        target_ids=np.array([7, 3]),
        scores=np.array([[1.0, 0.0], [0.0, 1.0]]),
        kind="time",
    )
    assert generate_seeds(m).as_set() == {(5, 7), (9, 3)}
