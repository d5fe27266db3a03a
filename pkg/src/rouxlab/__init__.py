"""Roux over finite abelian groups: schemes, lines, graphs and Higman pairs."""

from .abelian import AbelianGroup, Character, Cyclotomic, cyclic, hat_c, make_group, parse_character
from .constructions import (conference4_roux, conference4_signature, conference_iterate, conference_roux,
                            hoggar_family, lift_c4_signature, maximal_family_parameters, psl_roux,
                            su3_parameters, thas_somma)
from .graphs import (adjacency, components, distance_regular_check, drackn_check, drackn_to_roux,
                     odd_prime_quotient, spectrum)
from .higman import psl_pair, roux_from_higman, verify_higman_pair
from .lines import (SignatureMatrix, detect_drackn_lines, detect_real_lines, detect_roux_lines, etf_check,
                    evaluate, hadamard_power, integrality_q)
from .roux import Roux, RouxError, RouxParameters, complete_roux, normalize, verify_roux
from .scheme import all_idempotents, check_scheme, idempotent_matrix, rank_multiset, roux_scheme
from .search import cross_check_table, drackn_feasible
from .surd import Surd

__version__ = "0.1.0"

__all__ = [
    "AbelianGroup",
    "Character",
    "Cyclotomic",
    "cyclic",
    "hat_c",
    "make_group",
    "parse_character",
    "conference4_roux",
    "conference4_signature",
    "conference_iterate",
    "conference_roux",
    "hoggar_family",
    "lift_c4_signature",
    "maximal_family_parameters",
    "psl_roux",
    "su3_parameters",
    "thas_somma",
    "adjacency",
    "components",
    "distance_regular_check",
    "drackn_check",
    "drackn_to_roux",
    "odd_prime_quotient",
    "spectrum",
    "psl_pair",
    "roux_from_higman",
    "verify_higman_pair",
    "SignatureMatrix",
    "detect_drackn_lines",
    "detect_real_lines",
    "detect_roux_lines",
    "etf_check",
    "evaluate",
    "hadamard_power",
    "integrality_q",
    "Roux",
    "RouxError",
    "RouxParameters",
    "complete_roux",
    "normalize",
    "verify_roux",
    "all_idempotents",
    "check_scheme",
    "idempotent_matrix",
    "rank_multiset",
    "roux_scheme",
    "cross_check_table",
    "drackn_feasible",
    "Surd",
]
