"""cutofflab: separation-cutoff profiles of Brownian motion on flat tori,
spheres and projective spaces, by three independent routes -- iterated radial
Green-operator quadrature, Jacobi-polynomial spectral series, and seeded
Monte Carlo of the dual radius process."""

from .errors import (AccuracyError, ConfigError, ConvergenceError, CutofflabError,
                     DimensionError, DomainError, GridMismatchError, ThresholdError,
                     UnsupportedFamilyError)
from .manifolds import (Family, ManifoldSpec, cumulative_volume, drift, eigenvalue,
                        log_density, make_spec, spectral_coeff, total_volume_closed)
from .mc import (McConfig, McSampleSet, empirical_tail, ks_distance,
                 sim_bessel3_hitting, sim_radius_hitting, sim_torus_sst)
from .profiles import (ProfileRow, WindowPoint, cutoff_time, exact_separation,
                       gumbel_profile, profile_table, window_optimality_check)
from .quadrature import (GridFunction, RadialGrid, TorusCoeffs, default_grid,
                         green_apply, green_value_at_zero, grid_function,
                         kernel_value, mean_closed, moment_quadrature, radial_grid,
                         torus_b_coeffs, torus_mgf, torus_mgf_series, unit_function,
                         variance_closed)
from .spectral import (SpectralTerm, TailResult, link_eigenfunction, link_integral,
                       moment_spectral, moment_threshold, separation_manifold,
                       separation_torus, spectral_term, tail_manifold,
                       tail_torus_single)
from .special import (JacobiParams, harmonic, jacobi_deriv, jacobi_eval,
                      jacobi_norm_sq, log_gamma, zeta_even)

__version__ = "0.1.0"
