from .base import PairModel, load_model, model_hash, save_model
from .evaluation import (
    LinkTypeReport,
    RfeResult,
    binary_prf,
    evaluate_by_link_type,
    gain_importance,
    load_selected_features,
    pair_f1,
    permutation_importance,
    recursive_feature_elimination,
    save_rfe_result,
    train_model,
)
from .logistic import LogisticModel, loss_and_gradient, sigmoid, train_logistic
from .trees import GradientBoostedTreesModel, train_gbt
