"""Ranking metrics over reference alignment pairs."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .kg import AlignmentPairSet
from .timesim import SimilarityMatrix


def rank_of_truth(sim_row: np.ndarray, truth_index: int) -> int:
    """1-based rank of the true candidate; any tie counts against it."""
    row = np.asarray(sim_row, dtype=np.float64)
    if not 0 <= truth_index < len(row):
        raise ValueError("truth index outside the candidate pool")
    t = row[truth_index]
    greater = int((row > t).sum())
    ties = int((row == t).sum()) - 1
    return 1 + greater + ties


@dataclass
class EvalReport:
    hits_at: dict[int, float]
    mrr: float
    pool_size: int
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            **{f"hits@{k}": v for k, v in sorted(self.hits_at.items())},
            "mrr": self.mrr,
            "pool_size": self.pool_size,
            **self.metadata,
        }

    def to_text(self) -> str:
        lines = [f"hits@{k} = {v:.4f}" for k, v in sorted(self.hits_at.items())]
        lines.append(f"mrr    = {self.mrr:.4f}")
        lines.append(f"pool   = {self.pool_size}")
        for key, val in self.metadata.items():
            lines.append(f"{key} = {val}")
        return "\n".join(lines)


def _ranks(sim: SimilarityMatrix, references: AlignmentPairSet) -> list[int]:
    s = sim.dense
    src_pos = {int(e): i for i, e in enumerate(sim.source_ids)}
    tgt_pos = {int(e): j for j, e in enumerate(sim.target_ids)}
    ranks = []
    for a, b in references.pairs:
        if a not in src_pos:
            raise ValueError(f"reference source {a} missing from similarity rows")
        if b not in tgt_pos:
            raise ValueError(f"reference target {b} missing from candidate pool")
        ranks.append(rank_of_truth(s[src_pos[a]], tgt_pos[b]))
    return ranks


def evaluate(
    sim: SimilarityMatrix,
    references: AlignmentPairSet,
    ks: Sequence[int] = (1, 10),
    bidirectional: bool = False,
) -> EvalReport:
    """Hits@k and MRR of the references under the given similarity.

    Default protocol ranks source entities against the target candidate pool;
    with `bidirectional` the metrics are averaged with the transposed
    direction."""
    ranks = _ranks(sim, references)
    if bidirectional:
        flipped = SimilarityMatrix(sim.target_ids, sim.source_ids, sim.dense.T, sim.kind)
        rev_refs = AlignmentPairSet.from_pairs([(b, a) for a, b in references.pairs])
        ranks = ranks + _ranks(flipped, rev_refs)
    arr = np.array(ranks, dtype=np.float64)
    hits = {int(k): float((arr <= k).mean()) for k in ks}
    return EvalReport(
        hits_at=hits,
        mrr=float((1.0 / arr).mean()),
        pool_size=len(sim.target_ids),
    )
