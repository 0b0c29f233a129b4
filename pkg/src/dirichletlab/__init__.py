"""Numerical laboratory for shifted subharmonicity on finite Dirichlet spaces."""

from .reports import CheckReport, SuiteReport, default_t_grid, default_tolerance
from .space import (
    Region,
    WeightedSpace,
    apply_generator,
    energy,
    energy_density,
    hop_distances,
    irreducibility_check,
    metric_check,
    spectral_gap_check,
)

__version__ = "0.1.0"
