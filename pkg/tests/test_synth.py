from collections import Counter

import numpy as np

from tkgalign.io import load_dataset
from tkgalign.synth import SynthParams, make_benchmark, write_benchmark


def params(**kw):
    base = dict(entities=40, relations=4, timestamps=12, quads_per_entity=4,
                seed_pairs=8, rng_seed=3)
    base.update(kw)
    return SynthParams(**base)


def test_noise_free_counterpart_is_relabeled_copy():
    ds = make_benchmark(params(edge_noise=0.0, time_noise=0.0))
    perm, rperm = ds.entity_perm, ds.relation_perm
    mapped = sorted((int(perm[h]), int(rperm[r]), int(perm[t]), tb, te) for h, r, t, tb, te in ds.quads1)
    assert mapped == sorted(ds.quads2)
    # gold map recovers the permutation
    gold = dict(ds.sup_pairs + ds.ref_pairs)
    assert all(gold[i] == int(perm[i]) for i in range(40))


def test_deterministic_output(tmp_path):
    a = write_benchmark(make_benchmark(params(edge_noise=0.1, time_noise=0.1)), tmp_path / "a")
    b = write_benchmark(make_benchmark(params(edge_noise=0.1, time_noise=0.1)), tmp_path / "b")
    for name in ("triples_1", "triples_2", "sup_pairs", "ref_pairs"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_statistics_match_request(tmp_path):
    p = params(entities=50, seed_pairs=7, edge_noise=0.05, time_noise=0.05, unique_times=False)
    layout = write_benchmark(make_benchmark(p), tmp_path)
    kg1, kg2, vocab, seeds, refs = load_dataset(layout)
    assert kg1.entity_count == kg2.entity_count == 50
    assert len(kg1.quadruples) == len(kg2.quadruples) == 50 * 4
    assert len(seeds) == 7 and len(refs) == 43
    assert vocab.size <= p.timestamps
    heads = {q.head for q in kg1.quadruples}
    assert heads == set(range(50))


def test_unique_times_deduplicates_signatures():
    ds = make_benchmark(params(entities=60, timestamps=6, quads_per_entity=2, unique_times=True))
    sigs = [Counter() for _ in range(60)]
    for h, _, t, tb, te in ds.quads1:
        stamps = (tb,) if tb == te else (tb, te)
        for e in (h, t):
            sigs[e].update(stamps)
    keys = [tuple(sorted(c.items())) for c in sigs]
    assert len(set(keys)) == 60


def test_seed_and_reference_split_is_a_partition():
    ds = make_benchmark(params())
    sup = set(ds.sup_pairs)
    ref = set(ds.ref_pairs)
    assert not sup & ref
    assert len(sup | ref) == 40
