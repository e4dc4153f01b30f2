"""Low-rank variation dictionaries and inverse-projection group-sparse classifiers."""

__version__ = "0.1.0"

from .classify import (ClassifierConfig, Prediction, compute_ccr, compute_csi,
                       reconstruction_error, run_classifier)
from .dataset import (DataError, ExpressionDataset, FoldPlan, impute_missing,
                      load_expression_csv, snr_rank, stratified_kfold)
from .dictionary import VariationDictionary, build_dictionary
from .evaluate import (EvaluationReport, confusion_metrics, cross_validate,
                       cross_validate_many, err, roc_auc)
from .rpca import RpcaOptions, RpcaResult, default_lambda, rpca_decompose, soft_threshold, svt
from .solver import GroupSparseProblem, IpgsrSolution, SolverOptions, group_shrink, ipgsr_solve

__all__ = [
    "ClassifierConfig", "DataError", "EvaluationReport", "ExpressionDataset", "FoldPlan",
    "GroupSparseProblem", "IpgsrSolution", "Prediction", "RpcaOptions", "RpcaResult",
    "SolverOptions", "VariationDictionary", "__version__", "build_dictionary", "compute_ccr",
    "compute_csi", "confusion_metrics", "cross_validate", "cross_validate_many",
    "default_lambda", "err", "group_shrink", "impute_missing", "ipgsr_solve",
    "load_expression_csv", "reconstruction_error", "roc_auc", "rpca_decompose",
    "run_classifier", "snr_rank", "soft_threshold", "stratified_kfold", "svt",
]
