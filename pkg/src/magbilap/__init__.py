"""Magnetic bi-Laplacians on weighted graphs: operators, cut-offs, hypothesis
checks, numerical verification of the localisation estimates and deficiency
probes."""

from .errors import (GraphValidationError, HorizonError, InputError, MagbilapError,
                     MarginError)
from .graph import (Ball, MagneticGraph, ball, distance, dumps_graph, load_graph,
                    loads_graph, save_graph)
from .operators import (Amplitudes, Potential, SparseOperator, apply_bilaplacian, apply_H,
                        apply_laplacian, apply_P, assemble_truncation, inner, norm,
                        write_matrix_market)
from .families import (GraphFamily, GrowthModel, GrowthStats, build_example,
                       family_from_description, growth_stats, growth_table)
from .cutoff import CutoffFamily, PropertyReport, check_cutoff_properties, chi_values
from .theorem import (EXAMPLE_INSTANCES, HypothesisReport, QCertificate, check_theorem,
                      load_instance)
from .svd import min_singular_value, singular_values
from .deficiency import (ProbeReport, ShootingSolution, consistency_probe,
                         rectangular_residual, shoot, shooting_probe)
from .lab import LabReport, TrialConfig, run_suite

__version__ = "0.1.0"
