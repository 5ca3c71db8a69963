"""Cross-document event coreference experimentation toolkit.

Corpora live in a corpus-neutral JSON interchange format; everything
downstream (pair sampling, feature extraction, classifiers, agglomerative
clustering, coreference metrics, experiment harness) operates on that schema
plus an optional embedding sidecar.
"""

__version__ = "0.1.0"

from .cluster import (
    Clustering,
    ClusterConfig,
    DistanceMatrix,
    agglomerative,
    gold_document_preclusters,
    kmeans_document_preclusters,
    load_clustering,
    save_clustering,
    transitive_closure,
)
from .corpus import (
    Corpus,
    CorpusError,
    Document,
    LinkType,
    Mention,
    SplitSpec,
    corpus_from_json,
    corpus_stats,
    corpus_to_json,
    drop_superimposed_actions,
    link_type,
    load_corpus,
    load_split_spec,
    merge_corpora,
    save_corpus,
    split_corpus,
)
from .sampling import MentionPair, PairSet, SamplerConfig, load_pair_set, sample_pairs, save_pair_set
from .scoring import (
    MetricReport,
    MetricScore,
    b_cubed,
    ceaf_e,
    conll_f1,
    cross_document_score,
    harmonic_aggregate,
    harmonic_report,
    lea,
    mean_report,
    muc,
    read_conll,
    score_partitions,
    within_document_score,
    write_conll,
)
from .synthetic import SyntheticConfig, synthetic_corpus

__all__ = [
    "__version__",
    "Clustering",
    "ClusterConfig",
    "DistanceMatrix",
    "agglomerative",
    "gold_document_preclusters",
    "kmeans_document_preclusters",
    "load_clustering",
    "save_clustering",
    "transitive_closure",
    "Corpus",
    "CorpusError",
    "Document",
    "LinkType",
    "Mention",
    "SplitSpec",
    "corpus_from_json",
    "corpus_stats",
    "corpus_to_json",
    "drop_superimposed_actions",
    "link_type",
    "load_corpus",
    "load_split_spec",
    "merge_corpora",
    "save_corpus",
    "split_corpus",
    "MentionPair",
    "PairSet",
    "SamplerConfig",
    "load_pair_set",
    "sample_pairs",
    "save_pair_set",
    "MetricReport",
    "MetricScore",
    "b_cubed",
    "ceaf_e",
    "conll_f1",
    "cross_document_score",
    "harmonic_aggregate",
    "harmonic_report",
    "lea",
    "mean_report",
    "muc",
    "read_conll",
    "score_partitions",
    "within_document_score",
    "write_conll",
    "SyntheticConfig",
    "synthetic_corpus",
]
