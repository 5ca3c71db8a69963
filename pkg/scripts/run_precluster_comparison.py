"""Compare document preclustering modes on one trained model.

Preclustering fences the agglomerative merge step inside document groups:
"none" lets any two mentions merge, "kmeans" groups documents by tf-idf,
"gold" uses the annotated subtopics. Fences can only remove links, so recall
falls whenever true clusters straddle a fence; the table makes that visible.
"""
from __future__ import annotations

import argparse
from dataclasses import replace

from cdcrkit import SplitSpec, SyntheticConfig, split_corpus, synthetic_corpus
from cdcrkit.harness import PRECLUSTER_MODES, ExperimentConfig, evaluate_stage, train_stage
from cdcrkit.sampling import SamplerConfig


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=7, help="corpus generator seed")
    parser.add_argument("--confine", action="store_true",
                        help="generate a corpus whose clusters never cross subtopics")
    args = parser.parse_args(argv)

    gen = SyntheticConfig(seed=args.seed, confine_to_subtopic=args.confine)
    corpus, store = synthetic_corpus(gen)
    split = SplitSpec(mode="by_topic", train=["topic0", "topic1"], dev=[], test=["topic2"])
    train, _, test = split_corpus(corpus, split)

    config = ExperimentConfig(
        name="precluster",
        sampler=SamplerConfig(seed=args.seed),
        threshold=0.5,
        hyperparams={"trees": 40, "max_depth": 3},
    )
    stage = train_stage(config, train, None, store)

    print(f"confine_to_subtopic={args.confine}")
    print(f"{'precluster':<12}{'LEA P':>8}{'LEA R':>8}{'LEA F1':>8}{'CoNLL':>8}")
    for mode in PRECLUSTER_MODES:
        result, _ = evaluate_stage(replace(config, precluster=mode), stage, test, store)
        lea = result.mean.lea
        print(f"{mode:<12}{lea.precision:>8.3f}{lea.recall:>8.3f}{lea.f1:>8.3f}{result.mean.conll_f1:>8.3f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
