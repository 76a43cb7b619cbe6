"""Whole-graph features from the (truncated) graph Laplacian spectrum.

The library computes GLS / t-GLS embeddings, verifies perturbation-based
distance bounds between graphs, and classifies graph datasets with a kernel
SVM under nested cross-validation. See the README for a tour.
"""

from .bounds import (
    BoundReport,
    CospectralReport,
    cospectral_probe,
    dgi_bruteforce,
    random_bound_instance,
    sparsest_alignment_l1,
    verify_orthogonal_sandwich,
    verify_prop2_bound,
    verify_weyl_bound,
)
from .classify import (
    MOLECULAR_C_GRID,
    MOLECULAR_GAMMA_GRID,
    SOCIAL_C_GRID,
    SOCIAL_GAMMA_GRID,
    CvResult,
    accuracy,
    nested_cv,
)
from .datasets import (
    DatasetStats,
    GraphDataset,
    erdos_renyi,
    load_tu_dataset,
    stratified_folds,
)
from .eigen import EigenDecomposition, eigh_full, eigvals_topk, eigvalsh_full
from .embedding import (
    EmbeddingConfig,
    SpectrumEmbedding,
    choose_dimension,
    cross_squared_distances,
    embed_dataset,
    embedding_matrix,
    gls,
    gls_distance,
    gram_matrix,
    rbf_kernel,
    squared_distances,
    tgls,
    write_embedding_csv,
)
from .errors import (
    CapacityError,
    FormatError,
    IoError,
    LapspecError,
    NumericalError,
    ValidationError,
)
from .estimators import (
    GraphSpectrumEmbedder,
    SpectrumKernelSVC,
    check_feature_matrix,
    check_graph_sequence,
)
from .graph import (
    Graph,
    Permutation,
    build_graph,
    laplacian,
    laplacian_sparse,
    pad_isolated,
    permute_graph,
)
from .perturb import (
    Perturbation,
    add_random_nodes,
    apply_perturbation,
    perturbation_laplacian,
    random_edge_perturbation,
)
from .svm import (
    MulticlassModel,
    SvmModel,
    multiclass_predict,
    multiclass_train,
    multiclass_train_predict,
    svm_decision,
    svm_predict,
    svm_train_binary,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "CapacityError",
    "CospectralReport",
    "CvResult",
    "DatasetStats",
    "EigenDecomposition",
    "EmbeddingConfig",
    "FormatError",
    "Graph",
    "GraphDataset",
    "GraphSpectrumEmbedder",
    "IoError",
    "LapspecError",
    "MOLECULAR_C_GRID",
    "MOLECULAR_GAMMA_GRID",
    "MulticlassModel",
    "NumericalError",
    "Permutation",
    "Perturbation",
    "SOCIAL_C_GRID",
    "SOCIAL_GAMMA_GRID",
    "SpectrumEmbedding",
    "SpectrumKernelSVC",
    "SvmModel",
    "ValidationError",
    "accuracy",
    "add_random_nodes",
    "apply_perturbation",
    "build_graph",
    "check_feature_matrix",
    "check_graph_sequence",
    "choose_dimension",
    "cospectral_probe",
    "cross_squared_distances",
    "dgi_bruteforce",
    "eigh_full",
    "eigvals_topk",
    "eigvalsh_full",
    "embed_dataset",
    "embedding_matrix",
    "erdos_renyi",
    "gls",
    "gls_distance",
    "gram_matrix",
    "laplacian",
    "laplacian_sparse",
    "load_tu_dataset",
    "multiclass_predict",
    "multiclass_train",
    "multiclass_train_predict",
    "nested_cv",
    "pad_isolated",
    "permute_graph",
    "perturbation_laplacian",
    "random_bound_instance",
    "random_edge_perturbation",
    "rbf_kernel",
    "sparsest_alignment_l1",
    "squared_distances",
    "stratified_folds",
    "svm_decision",
    "svm_predict",
    "svm_train_binary",
    "tgls",
    "verify_orthogonal_sandwich",
    "verify_prop2_bound",
    "verify_weyl_bound",
    "write_embedding_csv",
]
