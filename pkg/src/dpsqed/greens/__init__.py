"""Green's-function integrals and cutoff-scan probes."""

from .kernels import (
    LatticeSite,
    angular_average,
    dminus_coincidence,
    dplus_coincidence,
    dplus_direct,
    dplus_series_term,
    kg_coincidence_spatial,
    kummer_m,
    parabolic_cylinder_d,
    potential_greens,
    radial_moment,
    sphere_moment,
)
from .scans import (
    DEFAULT_LAMBDAS,
    CutoffScan,
    GrowthFit,
    cutoff_scan_A,
    cutoff_scan_channels,
    cutoff_scan_continuous_photon,
    fit_growth,
    refine_grid,
    validate_lambdas,
)

__all__ = [
    "LatticeSite",
    "angular_average",
    "dminus_coincidence",
    "dplus_coincidence",
    "dplus_direct",
    "dplus_series_term",
    "kg_coincidence_spatial",
    "kummer_m",
    "parabolic_cylinder_d",
    "potential_greens",
    "radial_moment",
    "sphere_moment",
    "DEFAULT_LAMBDAS",
    "CutoffScan",
    "GrowthFit",
    "cutoff_scan_A",
    "cutoff_scan_channels",
    "cutoff_scan_continuous_photon",
    "fit_growth",
    "refine_grid",
    "validate_lambdas",
]
