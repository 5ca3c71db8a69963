from .context import ContextResolver, MentionContext, resolve_locations, resolve_times
from .embedding import (
    VectorStore,
    VectorStoreError,
    cosine_similarity,
    embedding_features,
    load_vector_store,
    save_vector_store,
    set_similarities,
)
from .extractor import (
    FAMILIES,
    FeatureMatrix,
    PairFeatureExtractor,
    all_feature_names,
    family_feature_names,
    load_feature_matrix_binary,
    load_feature_matrix_jsonl,
    save_feature_matrix_binary,
    save_feature_matrix_jsonl,
)
from .spatial import haversine_km, hierarchy_steps, spatial_features
from .strings import levenshtein, mlipns_distance, mlipns_match, string_features
from .temporal import temporal_features, unit_distance
from .tfidf import TfIdfModel, sparse_cosine
