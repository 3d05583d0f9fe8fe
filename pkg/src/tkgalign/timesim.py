"""Per-entity time dictionaries and the temporal matching similarity.

Two entities match temporally with score 2c / (m + n), where m and n are the
sizes of their timestamp multisets and c the multiset-intersection size
(min of multiplicities per id). The score lives in [0, 1] and equals 1 only
for identical multisets.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .kg import TemporalKG


@dataclass
class TimeDictionary:
    """Multiset of timestamp ids per entity, harvested from quadruples."""

    entries: list[Counter]

    def __len__(self) -> int:
        return len(self.entries)

    def sizes(self) -> np.ndarray:
        return np.array([sum(c.values()) for c in self.entries], dtype=np.int64)


def build_time_dictionary(kg: TemporalKG) -> TimeDictionary:
    """Harvest timestamps: each quadruple appends its time ids to the
    dictionaries of both its head and its tail. Interval facts contribute
    both endpoints; reserved id 0 contributes nothing."""
    entries = [Counter() for _ in range(kg.entity_count)]
    for q in kg.quadruples:
        stamps = q.time.stamps()
        entries[q.head].update(stamps)
        entries[q.tail].update(stamps)
    return TimeDictionary(entries)


def time_similarity(dic_i: Counter | Iterable[int], dic_j: Counter | Iterable[int]) -> float:
    """Matching degree 2c / (m + n) between two timestamp multisets; 0 when
    both are empty."""
    a = dic_i if isinstance(dic_i, Counter) else Counter(dic_i)
    b = dic_j if isinstance(dic_j, Counter) else Counter(dic_j)
    m = sum(a.values())
    n = sum(b.values())
    if m + n == 0:
        return 0.0
    c = sum((a & b).values())
    return 2.0 * c / (m + n)


@dataclass
class SimilarityMatrix:
    """Scores between ordered source and target entity id lists.

    `scores` is either a dense ndarray or a scipy csr matrix (absent sparse
    entries are exactly 0). kind is one of {time, embedding, combined}.
    """

    source_ids: np.ndarray
    target_ids: np.ndarray
    scores: np.ndarray | sp.csr_matrix
    kind: str

    @property
    def dense(self) -> np.ndarray:
        if sp.issparse(self.scores):
            return np.asarray(self.scores.todense())
        return self.scores

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.source_ids), len(self.target_ids))

    def submatrix(self, row_positions: np.ndarray, col_positions: np.ndarray) -> "SimilarityMatrix":
        sub = self.scores[np.asarray(row_positions)][:, np.asarray(col_positions)]
        return SimilarityMatrix(
            source_ids=np.asarray(self.source_ids)[row_positions],
            target_ids=np.asarray(self.target_ids)[col_positions],
            scores=sub,
            kind=self.kind,
        )


def _topk_truncate_row(row: np.ndarray, k: int) -> np.ndarray:
    """Zero all but the k largest entries; ties kept at smaller indices."""
    if k >= len(row):
        return row
    order = np.lexsort((np.arange(len(row)), -row))
    out = np.zeros_like(row)
    keep = order[:k]
    out[keep] = row[keep]
    return out


def build_time_similarity_matrix(
    dic1: TimeDictionary,
    dic2: TimeDictionary,
    source_ids: Sequence[int] | None = None,
    target_ids: Sequence[int] | None = None,
    top_k: int | None = None,
    sparse: bool = False,
    block_size: int = 4096,
) -> SimilarityMatrix:
    """Pairwise temporal matching scores via an inverted timestamp index.

    Only entity pairs sharing at least one timestamp produce work; every
    absent entry is exactly 0. Rows are processed in blocks; with top_k set,
    each row keeps only its k largest entries (ties broken toward smaller
    target index).
    """
    src = np.arange(len(dic1)) if source_ids is None else np.asarray(source_ids, dtype=np.int64)
    tgt = np.arange(len(dic2)) if target_ids is None else np.asarray(target_ids, dtype=np.int64)

    # inverted index over the target side: timestamp -> (positions, multiplicities)
    index: dict[int, tuple[list[int], list[int]]] = {}
    n_sizes = np.zeros(len(tgt), dtype=np.int64)
    for pos, e in enumerate(tgt):
        cnt = dic2.entries[e]
        n_sizes[pos] = sum(cnt.values())
        for t, mult in cnt.items():
            index.setdefault(t, ([], []))[0].append(pos)
            index[t][1].append(mult)
    np_index = {t: (np.array(p, dtype=np.int64), np.array(m, dtype=np.int64)) for t, (p, m) in index.items()}

    nt = len(tgt)
    blocks: list[np.ndarray] = []
    sparse_blocks: list[sp.csr_matrix] = []
    for start in range(0, len(src), block_size):
        chunk = src[start : start + block_size]
        block = np.zeros((len(chunk), nt), dtype=np.float64)
        for i, e in enumerate(chunk):
            cnt = dic1.entries[e]
            m = sum(cnt.values())
            if m == 0:
                continue
            c = np.zeros(nt, dtype=np.float64)
            for t, mult in cnt.items():
                hit = np_index.get(t)
                if hit is None:
                    continue
                pos, mm = hit
                c[pos] += np.minimum(mult, mm)
            denom = m + n_sizes
            row = np.divide(2.0 * c, denom, out=np.zeros(nt), where=denom > 0)
            if top_k is not None:
                row = _topk_truncate_row(row, top_k)
            block[i] = row
        if sparse:
            sparse_blocks.append(sp.csr_matrix(block))
        else:
            blocks.append(block)

    if sparse:
        scores: np.ndarray | sp.csr_matrix
        scores = sp.vstack(sparse_blocks).tocsr() if sparse_blocks else sp.csr_matrix((0, nt))
    else:
        scores = np.vstack(blocks) if blocks else np.zeros((0, nt))
    return SimilarityMatrix(source_ids=src, target_ids=tgt, scores=scores, kind="time")
