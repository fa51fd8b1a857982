"""Bucket increasing trees: exact enumeration, sampling, checks and urn limit laws."""

from ._core import (
    AffineRatioReport,
    BalanceReport,
    Classification,
    DecodeError,
    DistributionCheck,
    FamilySpec,
    InvalidArgument,
    LawComparison,
    OdeReport,
    ResourceLimit,
    WeightModel,
    beta_moment,
    check_affine_ratio,
    check_balance,
    check_distribution_equivalence,
    check_ode_recurrence,
    check_preservation,
    check_scaling,
    classify_family,
    closed_form_Tn,
    descendants_law_from_trees,
    descendants_law_from_urn,
    enumerate_shapes,
    exact_distribution,
    parse_weights,
    run_cli,
    sample_trees,
    sampler_gof,
    total_weights,
    tree_json,
    urn_distribution_exact,
    urn_from,
    urn_moment_exact,
    weights_of,
)

__version__ = "0.1.0"


def run(*args):
    """Runs a CLI command in-process; returns (exit_code, stdout, stderr)."""
    return run_cli([str(a) for a in args])
