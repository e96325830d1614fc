"""Per-author word-frequency structure: clustering, layers, and tail fits.

The package turns timestamped text timelines into per-author frequency
tables, finds log-frequency modes with a 1-D flat-kernel Mean Shift,
stacks the resulting clusters into cumulative layers, and checks the
frequency tail against a continuous power law with a bootstrap test.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND as _BACKEND
from .errors import (
    ClassificationError,
    ConfigurationError,
    DegenerateInputError,
    EgowordsError,
    EmptyCorpusError,
    InputError,
    InsufficientDataError,
    StageDependencyError,
    StageError,
)
from .ingest import (
    Document,
    Timeline,
    WindowConfig,
    classify_activity,
    dataset_summary,
    filter_documents,
    read_timelines,
    trim_to_window,
    write_timelines,
)
from .extraction import (
    ExtractionConfig,
    LemmaCounts,
    count_lemmas,
    document_lemmas,
    extract_document,
    lemmatize,
    load_stopwords,
    tokenize,
)
from .frequency import (
    FrequencyTable,
    ccdf,
    lexical_richness,
    user_ci_aggregate,
    verbosity,
    word_frequencies,
)
from .clustering import (
    ClusterCountHistogram,
    ClusterModel,
    MeanShiftConfig,
    cluster_count_histogram,
    cluster_user,
    estimate_bandwidth,
    mean_shift_1d,
)
from .layers import (
    EgoNetworkOfWords,
    LayerAggregate,
    RegressionResult,
    build_layers,
    cohort_layer_summary,
    layer_size_regression,
    layers_from_sizes,
    modal_cohort,
    scaling_ratios,
)
from .tailfit import (
    TailFit,
    bootstrap_pvalue,
    fit_powerlaw,
    rejection_table,
)
from .synth import (
    PlantedSpec,
    generate_planted_user,
    generate_power_law_samples,
    generate_zipf_user,
    planted_spec_for_k,
)
from .pipeline import PipelineConfig, run_pipeline


def kernel_backend() -> str:
    """Report which hot-loop implementation was selected at import time."""
    return _BACKEND


__all__ = [
    "__version__",
    "kernel_backend",
    "EgowordsError",
    "InputError",
    "EmptyCorpusError",
    "ClassificationError",
    "ConfigurationError",
    "DegenerateInputError",
    "InsufficientDataError",
    "StageDependencyError",
    "StageError",
    "Document",
    "Timeline",
    "WindowConfig",
    "read_timelines",
    "write_timelines",
    "filter_documents",
    "classify_activity",
    "trim_to_window",
    "dataset_summary",
    "ExtractionConfig",
    "LemmaCounts",
    "tokenize",
    "load_stopwords",
    "lemmatize",
    "extract_document",
    "document_lemmas",
    "count_lemmas",
    "FrequencyTable",
    "word_frequencies",
    "ccdf",
    "verbosity",
    "lexical_richness",
    "user_ci_aggregate",
    "MeanShiftConfig",
    "ClusterModel",
    "ClusterCountHistogram",
    "estimate_bandwidth",
    "mean_shift_1d",
    "cluster_user",
    "cluster_count_histogram",
    "EgoNetworkOfWords",
    "RegressionResult",
    "LayerAggregate",
    "build_layers",
    "layers_from_sizes",
    "scaling_ratios",
    "modal_cohort",
    "layer_size_regression",
    "cohort_layer_summary",
    "TailFit",
    "fit_powerlaw",
    "bootstrap_pvalue",
    "rejection_table",
    "PlantedSpec",
    "planted_spec_for_k",
    "generate_planted_user",
    "generate_zipf_user",
    "generate_power_law_samples",
    "PipelineConfig",
    "run_pipeline",
]
