"""Numerical topological entropy for maps of totally bounded metric spaces.

The package estimates entropy three ways and cross-checks them: directly from
separated/spanning counts under orbit metrics, as a supremum over compact
subsets, and through the shift on the space of orbit sequences.
"""

from .coding import (
    GOLDEN_ALPHA,
    WordComplexity,
    code_word,
    coded_entropy,
    iet_step,
    iet_system,
    symbol_frequency,
    symbol_orbit,
    word_complexity,
)
from .dynamics import (
    DynSystem,
    OrbitTable,
    TransportVerdict,
    bd_count_table,
    bd_dist,
    build_orbit_table,
    inverse_transport_check,
    iterate_orbit,
)
from .errors import (
    ConfigError,
    EmptyCloudError,
    EntroError,
    EscapeError,
    MeshError,
    NotSemiconjugateError,
    ShapeError,
    TooLargeError,
    UndefinedPointError,
    WindowError,
)
from .estimators import (
    CompactFamily,
    EntropyEstimate,
    ExtrapolationRule,
    InequalityVerdict,
    PerEpsRate,
    compacta_estimate,
    entropy_estimate,
    growth_rate,
    inequality_report,
    write_estimate_csv,
)
from .gallery import (
    AkmCoverRecord,
    GalleryBundle,
    akm_cover_demo,
    build_annulus,
    build_bundle,
    build_crumple,
    build_doubling,
    build_escape,
    build_interval_homeo,
    default_suite,
)
from .metric_core import (
    EXACT_CAP,
    CountRow,
    CountTable,
    MetricSpec,
    PointCloud,
    SeparationResult,
    SubsampleCountReport,
    cloud_diameter,
    dense_subsample,
    distance_matrix,
    max_separated,
    min_spanning,
    pairwise_dist,
    subsample_count_check,
)
from .orbit_space import (
    MetricComparisonReport,
    OrbitSeqPoint,
    SemiconjReport,
    choose_truncation,
    dhat_dist,
    friedland_count_table,
    friedland_estimate,
    lift_orbit,
    lift_point,
    metric_comparison_check,
    semiconj_check,
    shift_system,
)

__all__ = [
    "GOLDEN_ALPHA",
    "WordComplexity",
    "code_word",
    "coded_entropy",
    "iet_step",
    "iet_system",
    "symbol_frequency",
    "symbol_orbit",
    "word_complexity",
    "DynSystem",
    "OrbitTable",
    "TransportVerdict",
    "bd_count_table",
    "bd_dist",
    "build_orbit_table",
    "inverse_transport_check",
    "iterate_orbit",
    "ConfigError",
    "EmptyCloudError",
    "EntroError",
    "EscapeError",
    "MeshError",
    "NotSemiconjugateError",
    "ShapeError",
    "TooLargeError",
    "UndefinedPointError",
    "WindowError",
    "CompactFamily",
    "EntropyEstimate",
    "ExtrapolationRule",
    "InequalityVerdict",
    "PerEpsRate",
    "compacta_estimate",
    "entropy_estimate",
    "growth_rate",
    "inequality_report",
    "write_estimate_csv",
    "AkmCoverRecord",
    "GalleryBundle",
    "akm_cover_demo",
    "build_annulus",
    "build_bundle",
    "build_crumple",
    "build_doubling",
    "build_escape",
    "build_interval_homeo",
    "default_suite",
    "EXACT_CAP",
    "CountRow",
    "CountTable",
    "MetricSpec",
    "PointCloud",
    "SeparationResult",
    "SubsampleCountReport",
    "cloud_diameter",
    "dense_subsample",
    "distance_matrix",
    "max_separated",
    "min_spanning",
    "pairwise_dist",
    "subsample_count_check",
    "MetricComparisonReport",
    "OrbitSeqPoint",
    "SemiconjReport",
    "choose_truncation",
    "dhat_dist",
    "friedland_count_table",
    "friedland_estimate",
    "lift_orbit",
    "lift_point",
    "metric_comparison_check",
    "semiconj_check",
    "shift_system",
]
