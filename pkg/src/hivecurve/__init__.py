"""Hives, determinantal plane curves, patchworking and tropical duality.

The package makes the correspondence between eigenvalue/singular-value
problems, hive combinatorics and hyperbolic plane curves executable: exact
hive classification and LP feasibility, determinantal forms of
positive-definite pencils, line-probe hyperbolicity checks, Viro
patchworking, regular subdivisions with their honeycomb duals, amoeba
sampling, Ronkin functions, and finite-parameter asymptotic sweeps.

Set HIVECURVE_NO_NUMBA=1 to run the pure-numpy kernel fallbacks; see
``hivecurve._backend``.
"""

from ._backend import backend_name
from .hive import (BoundarySpec, Hive, HornResult, boundary, classify_hive,
                   convolve, horn_feasible, index_set, quadratic_hive,
                   rhombus_inequalities)
from .pencil import (GLTriple, PencilTriple, TernaryForm, beta_map,
                     curve_boundary, form_product, gaussian_matrix,
                     hermitian_eigenvalues, is_positive_definite, pencil_det,
                     real_root_count, restrict_edge, singular_values)
from .hyperbolicity import (backward_inequalities, directional_derivative,
                            shifted_hive_check, v1_vector, vinnikov_check)
from .tropical import (AmoebaCloud, Lifting, amoeba_sample,
                       classify_subdivision, distance_to_tropical,
                       honeycomb_boundary, regular_subdivision, tropical_curve)
from .patchwork import (SignedLifting, build_chart, find_violation_path,
                        glue_and_classify, is_vinnikov_topology,
                        patchwork_topology, sign_changes_along_path)
from .asymptotics import (LiftedFamily, RMatrixFamily, RonkinSpec,
                          boundary_asymptotics, direct_sum_check,
                          empirical_exponents, hive4_check, instantiate,
                          main_theorem_sweep, realize_hive,
                          ronkin_boundary_check, ronkin_coefficient,
                          ronkin_value)

__version__ = "0.1.0"
