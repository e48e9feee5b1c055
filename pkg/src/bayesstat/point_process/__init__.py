"""Point patterns: simulation and characterization."""

from .detectors import cluster_pattern, default_cluster_count, detect_csr, detect_pp_stationarity
from .generators import (
    close_pair_count,
    dispersion_index,
    gen_cluster,
    gen_hpp,
    gen_ihpp,
    gen_lgcp,
    gen_strauss,
    quadrat_counts,
)
from .pattern import PointPattern, Window, read_pattern, write_pattern

__all__ = [
    "cluster_pattern", "default_cluster_count", "detect_csr", "detect_pp_stationarity",
    "close_pair_count", "dispersion_index", "gen_cluster", "gen_hpp", "gen_ihpp", "gen_lgcp",
    "gen_strauss", "quadrat_counts", "PointPattern", "Window", "read_pattern", "write_pattern",
]
