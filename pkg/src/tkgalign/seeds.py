"""Unsupervised seed generation from the temporal similarity matrix.

A pair (i, j) becomes a seed iff j is the only entity whose time signature
exactly matches i's (score 1 in row i, uniquely) and, symmetrically, i is
the only exact match in column j. Emitted seeds form a partial matching.
"""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .kg import AlignmentPairSet
from .timesim import SimilarityMatrix

# exact-match scores 2c/(m+n) are not always representable; absorb rounding
EXACT_MATCH_TOL = 1e-12


def generate_seeds(time_sim: SimilarityMatrix, tol: float = EXACT_MATCH_TOL) -> AlignmentPairSet:
    if time_sim.kind != "time":
        raise ValueError("seed generation expects a time similarity matrix")
    s = time_sim.scores
    if sp.issparse(s):
        s = s.tocsr()
        exact = sp.csr_matrix(
            (np.abs(s.data - 1.0) <= tol, s.indices, s.indptr), shape=s.shape
        )
        row_counts = np.asarray(exact.sum(axis=1)).ravel()
        col_counts = np.asarray(exact.sum(axis=0)).ravel()
        exact_coo = exact.tocoo()
        hits = [(i, j) for i, j, v in zip(exact_coo.row, exact_coo.col, exact_coo.data) if v]
    else:
        mask = np.abs(s - 1.0) <= tol
        row_counts = mask.sum(axis=1)
        col_counts = mask.sum(axis=0)
        hits = list(zip(*np.nonzero(mask)))

    pairs = [
        (int(time_sim.source_ids[i]), int(time_sim.target_ids[j]))
        for i, j in hits
        if row_counts[i] == 1 and col_counts[j] == 1
    ]
    pairs.sort()
    return AlignmentPairSet.from_pairs(pairs, provenance="generated")
