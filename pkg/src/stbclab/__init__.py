"""Low-decoding-complexity space-time block codes: multigroup, fast-group
and fast-decodable constructions, their verification, complexity analysis,
full-diversity search and Monte-Carlo simulation."""

from .catalog import (MatrixFamily, cod_weights, diag_sign_set, fgd_seed_set, hermitian_basis,
                      preset, unitary_basis)
from .design import (Conditional, Design, GroupStructure, VerificationReport, detect_groups, load,
                     save, verify_design)
from .diversity import BudgetExceededError, DiffSummary, PamSpec, find_scalings, is_fully_diverse, pam
from .fd import (BaseCandidate, ComplexityProfile, build_fd, complete_basis, dast_base, design_profile,
                 exponent_for, puncture_design, select_base)
from .fgd import build_fgd, puncture_fgd
from .linalg import DEFAULT_TOL, Tolerance
from .multigroup import (ConstructionError, GroupInputSet, build_ag, build_from_inputs, f_l, g_minus,
                         g_plus, rate_ag, rate_stacked, stack_phi)
from .sim import SimConfig, ber_curve, decode_exhaustive, decode_structured, encode
from .tables import reproduce_tables

__version__ = "0.1.0"

__all__ = [
    "MatrixFamily",
    "cod_weights",
    "diag_sign_set",
    "fgd_seed_set",
    "hermitian_basis",
    "preset",
    "unitary_basis",
    "Conditional",
    "Design",
    "GroupStructure",
    "VerificationReport",
    "detect_groups",
    "load",
    "save",
    "verify_design",
    "BudgetExceededError",
    "DiffSummary",
    "PamSpec",
    "find_scalings",
    "is_fully_diverse",
    "pam",
    "BaseCandidate",
    "ComplexityProfile",
    "build_fd",
    "complete_basis",
    "dast_base",
    "design_profile",
    "exponent_for",
    "puncture_design",
    "select_base",
    "build_fgd",
    "puncture_fgd",
    "DEFAULT_TOL",
    "Tolerance",
    "ConstructionError",
    "GroupInputSet",
    "build_ag",
    "build_from_inputs",
    "f_l",
    "g_minus",
    "g_plus",
    "rate_ag",
    "rate_stacked",
    "stack_phi",
    "SimConfig",
    "ber_curve",
    "decode_exhaustive",
    "decode_structured",
    "encode",
    "reproduce_tables",
]
