"""conelab: invariant-cone certificates for bilinear control systems.

Decides and certifies (non-)controllability of dx/dt = Ax + uBx with
traceless A, B by searching for semigroup-invariant cones in every
exterior power of the state space: exhaustive invariant-orthant search
through additive compounds, Monte-Carlo non-pointedness certificates for
the minimal candidate cones, and the Lie algebra rank condition.
"""

__version__ = "0.1.0"

from .errors import (CapacityError, ConelabError, DegenerateInputError,
                     InputError, InternalConsistencyError,
                     NumericalUnderflowError)
from .exterior import (CompoundMatrix, ExteriorVector, MultiIndexTable,
                       additive_compound, apply_flow, compound_matrix,
                       multi_index_table, plucker)
from .linalg import HullResult, bracket, mat_exp, origin_in_hull, rank_tol
from .larc import BracketBasis, bracket_closure_dim, larc_algorithm1
from .orthants import (CrossPositiveResult, OrthantCertificate, SignPattern,
                       cross_positive, family_invariant_orthants,
                       invariant_orthants, simulate_orthant_invariance)
from .system import (SemigroupWord, SystemSpec, UModel, inverse_system, word)
from .dynamics import (Budget, ConeHull, DEFAULT_BUDGET, NonPointedCertificate,
                       OrbitCloud, Pointed, attractor_direction,
                       cone_from_convex, nonpointedness_search,
                       orbit_directions, pointedness, sample_element)
from .verdict import (AnalysisReport, KReport, analyze, analyze_k,
                      CONE_CERTIFIED, CONTROLLABLE_EVIDENCE, INCONCLUSIVE,
                      NO_CONE_EVIDENCE, NOT_CONTROLLABLE)
from .report import (report_from_json, report_to_json, spec_from_dict,
                     spec_to_dict, verify_report)

__all__ = [
    "AnalysisReport", "BracketBasis", "Budget", "CapacityError",
    "CompoundMatrix", "ConeHull", "ConelabError", "CrossPositiveResult",
    "DEFAULT_BUDGET", "DegenerateInputError", "ExteriorVector", "HullResult",
    "InputError", "InternalConsistencyError", "KReport", "MultiIndexTable",
    "NonPointedCertificate", "NumericalUnderflowError", "OrbitCloud",
    "OrthantCertificate", "Pointed", "SemigroupWord", "SignPattern",
    "SystemSpec", "UModel", "additive_compound", "analyze", "analyze_k",
    "apply_flow", "attractor_direction", "bracket", "bracket_closure_dim",
    "compound_matrix", "cone_from_convex", "cross_positive",
    "family_invariant_orthants", "inverse_system", "invariant_orthants",
    "larc_algorithm1", "mat_exp", "multi_index_table", "nonpointedness_search",
    "orbit_directions", "origin_in_hull", "plucker", "pointedness",
    "rank_tol", "report_from_json", "report_to_json", "sample_element",
    "simulate_orthant_invariance", "spec_from_dict", "spec_to_dict",
    "verify_report", "word",
    "CONE_CERTIFIED", "CONTROLLABLE_EVIDENCE", "INCONCLUSIVE",
    "NO_CONE_EVIDENCE", "NOT_CONTROLLABLE",
]
