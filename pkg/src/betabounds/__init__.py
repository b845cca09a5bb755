"""Blomqvist's beta against rho, tau, footrule and gamma via shuffles of M."""

from .bounds import (
    BoundParams,
    beta_bound_copulas,
    beta_interval,
    envelope,
    lower_bound_copula,
    max_asymmetry,
    q_item,
    upper_bound_copula,
)
from .concordance import MeasureKind, concordance_q, mc_concordance_q, measure
from .copula import PI, M, Mixture, ShuffleOfM, W, copula_from_spec, load_copula, mixture
from .region import RegionCurve, contains, export_curve, render_svg, sample_region

__all__ = [
    "BoundParams",
    "M",
    "MeasureKind",
    "Mixture",
    "PI",
    "RegionCurve",
    "ShuffleOfM",
    "W",
    "beta_bound_copulas",
    "beta_interval",
    "concordance_q",
    "contains",
    "copula_from_spec",
    "envelope",
    "export_curve",
    "load_copula",
    "lower_bound_copula",
    "max_asymmetry",
    "mc_concordance_q",
    "measure",
    "mixture",
    "q_item",
    "render_svg",
    "sample_region",
    "upper_bound_copula",
]
