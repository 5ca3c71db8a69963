"""Masking ablation: retrain once, evaluate with each mention component masked
out of the test side, and report the LEA/CoNLL cost of losing it.

Each row masks one component (actions, participants, times, locations, or the
publish date) with seeded gibberish replacements that keep the corpus shape
intact, so the score drop isolates how much the classifier leaned on it.
"""
from __future__ import annotations

import argparse
from dataclasses import replace

from cdcrkit import SplitSpec, SyntheticConfig, split_corpus, synthetic_corpus
from cdcrkit.harness import (
    MASKABLE_COMPONENTS,
    ExperimentConfig,
    MaskSpec,
    evaluate_stage,
    mask_corpus,
    mask_store,
    train_stage,
)
from cdcrkit.sampling import SamplerConfig


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=7, help="corpus generator seed")
    parser.add_argument("--mask-seed", type=int, default=0, help="replacement vocabulary seed")
    parser.add_argument("--components", nargs="*", default=list(MASKABLE_COMPONENTS),
                        help=f"subset of {', '.join(MASKABLE_COMPONENTS)}")
    args = parser.parse_args(argv)

    corpus, store = synthetic_corpus(SyntheticConfig(seed=args.seed))
    split = SplitSpec(mode="by_topic", train=["topic0", "topic1"], dev=[], test=["topic2"])
    train, _, test = split_corpus(corpus, split)

    config = ExperimentConfig(
        name="masking",
        sampler=SamplerConfig(seed=args.seed),
        hyperparams={"trees": 40, "max_depth": 3},
    )
    stage = train_stage(config, train, None, store)
    base, _ = evaluate_stage(config, stage, test, store)
    print(f"{'masked component':<20}{'LEA F1':>10}{'CoNLL':>10}{'dLEA':>10}")
    print(f"{'(none)':<20}{base.mean.lea.f1:>10.3f}{base.mean.conll_f1:>10.3f}{0.0:>10.3f}")

    for component in args.components:
        spec = MaskSpec(components=(component,), seed=args.mask_seed)
        masked = mask_corpus(test, spec)
        masked_store = mask_store(test, spec, store)
        result, _ = evaluate_stage(replace(config, mask=spec), stage, masked, masked_store)
        drop = result.mean.lea.f1 - base.mean.lea.f1
        print(f"{component:<20}{result.mean.lea.f1:>10.3f}{result.mean.conll_f1:>10.3f}{drop:>+10.3f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
