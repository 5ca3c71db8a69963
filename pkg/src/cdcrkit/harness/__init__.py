from .baselines import (
    DELTA_GRID,
    TIME_GRID_HOURS,
    document_tfidf_distances,
    document_time_distances,
    lemma_baseline,
    lemma_delta_baseline,
    lemma_time_baseline,
    tune_lemma_delta,
    tune_lemma_time,
)
from .experiment import (
    EvalResult,
    ExperimentConfig,
    PRECLUSTER_MODES,
    RunReport,
    THRESHOLD_GRID,
    TrainedStage,
    cluster_with_probabilities,
    config_digest,
    cross_dataset_summary,
    document_vectors,
    evaluate_stage,
    gold_pair_labels,
    load_experiment_config,
    mean_link_report,
    merge_stores,
    pair_set_arrays,
    precluster_documents,
    run_cross_dataset,
    run_in_dataset,
    save_run_report,
    train_stage,
    tune_classifier,
    tune_merge_threshold,
)
from .masking import MASKABLE_COMPONENTS, MaskSpec, mask_corpus, mask_store
from .tuning import TuneResult, enumerate_grid, fold_grouping, grid_size, make_folds, tune

__all__ = [
    "DELTA_GRID",
    "TIME_GRID_HOURS",
    "document_tfidf_distances",
    "document_time_distances",
    "lemma_baseline",
    "lemma_delta_baseline",
    "lemma_time_baseline",
    "tune_lemma_delta",
    "tune_lemma_time",
    "EvalResult",
    "ExperimentConfig",
    "PRECLUSTER_MODES",
    "RunReport",
    "THRESHOLD_GRID",
    "TrainedStage",
    "cluster_with_probabilities",
    "config_digest",
    "cross_dataset_summary",
    "document_vectors",
    "evaluate_stage",
    "gold_pair_labels",
    "load_experiment_config",
    "mean_link_report",
    "merge_stores",
    "pair_set_arrays",
    "precluster_documents",
    "run_cross_dataset",
    "run_in_dataset",
    "save_run_report",
    "train_stage",
    "tune_classifier",
    "tune_merge_threshold",
    "MASKABLE_COMPONENTS",
    "MaskSpec",
    "mask_corpus",
    "mask_store",
    "TuneResult",
    "enumerate_grid",
    "fold_grouping",
    "grid_size",
    "make_folds",
    "tune",
]
