"""Geometry of compact Heisenberg manifolds with left-invariant metrics."""

from .collapse import (ProjectionReport, SequenceEntry, SequenceReport, classify_sequence,
                       fiber_diameter, lattice_divergence_bound, projection_comparison,
                       torus_distance)
from .errors import (DimensionMismatch, DivisibilityError, HeisgeoError, HypothesisViolated,
                     MalformedInput, MixedDimension, NonPositiveEntry, RankDeficient, RankError,
                     ShootingFailure, SingularMatrix, TooFewEntries)
from .geodesics import Covector, GeodesicSample, geodesic_length, geodesic_point, hamiltonian_residual
from .metric import (DistanceResult, ShootingOptions, base_torus_gram, distance_group,
                     distance_quotient, lattice_element, norm_A, vertical_distance)
from .moduli import (CanonicalForm, GroupPoint, InvariantFingerprint, LatticeParam, MetricParam,
                     canonicalize, fingerprint, frame_to_fixed, fixed_to_frame, group_inverse,
                     group_mul, validate_lattice)
from .systole import (ClassificationReport, SystoleReport, classify_3d, shortest_lattice_vector,
                      systolic_bound, vertical_systole)
from .volumes import minimal_popp_coeff, popp_coeff, riemannian_coeff, total_measure

__version__ = "0.1.0"
