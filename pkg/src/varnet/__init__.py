"""Networks of datasets linked by shared variable labels."""

from .distfit import (
    CcdfPoints,
    FitError,
    FrequencyDistribution,
    PowerLawFit,
    TwoRegimeFit,
    ccdf,
    cumulative_share,
    degree_distribution,
    fit_power_law,
    fit_two_regime,
    variable_occurrence_distribution,
    variables_per_dataset_distribution,
)
from .ingest import Catalog, CatalogError, CatalogStats, DatasetRecord, catalog_stats, normalize_label, parse_csv, parse_jsonl, sample
from .metrics import MetricsReport, full_report
from .netbuild import ComponentDecomposition, DataNetwork, build_network, components, largest_component
from .percolate import RobustnessCurve, random_removal_curve, targeted_removal_curve

__version__ = "0.1.0"

__all__ = [
    "Catalog",
    "CatalogError",
    "CatalogStats",
    "CcdfPoints",
    "ComponentDecomposition",
    "DataNetwork",
    "DatasetRecord",
    "FitError",
    "FrequencyDistribution",
    "MetricsReport",
    "PowerLawFit",
    "RobustnessCurve",
    "TwoRegimeFit",
    "build_network",
    "catalog_stats",
    "ccdf",
    "components",
    "cumulative_share",
    "degree_distribution",
    "fit_power_law",
    "fit_two_regime",
    "full_report",
    "largest_component",
    "normalize_label",
    "parse_csv",
    "parse_jsonl",
    "random_removal_curve",
    "sample",
    "targeted_removal_curve",
    "variable_occurrence_distribution",
    "variables_per_dataset_distribution",
]
