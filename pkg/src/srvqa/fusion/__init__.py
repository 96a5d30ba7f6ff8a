from .features import (
    DEFAULT_ACTIVE_FEATURES,
    FEATURE_NAMES,
    FeatureError,
    FeatureVector,
    TrainingSample,
    assemble_features,
)
from .model import FusionModel, load_model, samples_matrix, save_model, train_fusion_model
from .normalization import NormalizationStats, fit_normalization
from .svr import SvrSolution, svr_fit, svr_objective
from .validate import (
    AblationReport,
    FoldResult,
    ablate_feature_pairs,
    assign_folds,
    cross_validate,
)

__all__ = [
    "DEFAULT_ACTIVE_FEATURES",
    "FEATURE_NAMES",
    "AblationReport",
    "FeatureError",
    "FeatureVector",
    "FoldResult",
    "FusionModel",
    "NormalizationStats",
    "SvrSolution",
    "TrainingSample",
    "ablate_feature_pairs",
    "assemble_features",
    "assign_folds",
    "cross_validate",
    "fit_normalization",
    "load_model",
    "samples_matrix",
    "save_model",
    "svr_fit",
    "svr_objective",
    "train_fusion_model",
]
