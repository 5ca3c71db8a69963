"""Sweep the sampler's two knobs and chart their downstream effect.

The largest-cluster factor caps how many coreferent pairs a big cluster may
contribute; the negatives ratio caps sampled non-coreferent pairs per link
type. Each grid cell retrains from scratch and reports training-set size plus
test-side pair precision/recall at the 0.5 decision threshold, as TSV on
stdout.
"""
from __future__ import annotations

import argparse

from cdcrkit import SplitSpec, SyntheticConfig, sample_pairs, split_corpus, synthetic_corpus
from cdcrkit.harness import ExperimentConfig, evaluate_stage, train_stage
from cdcrkit.sampling import SamplerConfig


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=7, help="corpus generator seed")
    parser.add_argument("--factors", type=float, nargs="*", default=[1.0, 2.0, 8.0, 32.0])
    parser.add_argument("--ratios", type=int, nargs="*", default=[1, 4, 8, 32])
    args = parser.parse_args(argv)

    corpus, store = synthetic_corpus(SyntheticConfig(seed=args.seed))
    split = SplitSpec(mode="by_topic", train=["topic0", "topic1"], dev=[], test=["topic2"])
    train, _, test = split_corpus(corpus, split)

    print("factor\tratio\tpairs\tpositives\tpair_p\tpair_r\tlea_f1")
    for factor in args.factors:
        for ratio in args.ratios:
            sampler = SamplerConfig(
                largest_cluster_factor=factor,
                negatives_per_positive=ratio,
                seed=args.seed,
            )
            pair_set = sample_pairs(train, sampler)
            positives = sum(1 for p in pair_set.pairs if p.label)
            config = ExperimentConfig(
                name=f"grid-c{factor:g}-k{ratio}",
                sampler=sampler,
                threshold=0.5,
                hyperparams={"trees": 40, "max_depth": 3},
            )
            stage = train_stage(config, train, None, store)
            result, _ = evaluate_stage(config, stage, test, store)
            overall = result.link_types["overall"]
            print(f"{factor:g}\t{ratio}\t{len(pair_set.pairs)}\t{positives}"
                  f"\t{overall['precision']:.4f}\t{overall['recall']:.4f}\t{result.mean.lea.f1:.4f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
