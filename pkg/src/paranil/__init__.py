"""Exact computations with polycyclic presentations of nilpotent and
nilpotent-by-abelian groups: collection, subgroups, central series and
checkers comparing lower central quotients along a homomorphism.
"""
from .arith import AbelianInvariants, hermite_normal_form, lattice_membership, smith_normal_form
from .pcgroup import CheckReport, GroupHom, PcPresentation, verify_hom
from .subgroup import AbelianSection, QuotientMap, Subgroup, kernel, quotient_presentation
from .nilpotent import (PrimeSet, SeriesTable, abelianization, center, hirsch_length, isolator,
                        lower_central_series, membership, power_exponent_search, tau,
                        tensor_epi_check, upper_central_series)
from .constructions import (AutomorphismAction, companion_cyclotomic, companion_semidirect,
                            direct_with_cyclic, free_abelian, free_nilpotent_class2, heisenberg,
                            lift_automorphism_class2, semidirect_by_automorphisms,
                            sub_semidirect_inclusion)
from .genus import (annihilator_polynomials, check_cor23_fastpath, check_para,
                    check_tau_monomorphism, induced_quotient_map, prop26_pair,
                    thm34_hirsch_check)

__all__ = [
    "AbelianInvariants", "hermite_normal_form", "lattice_membership", "smith_normal_form",
    "CheckReport", "GroupHom", "PcPresentation", "verify_hom", "AbelianSection", "QuotientMap",
    "Subgroup", "kernel", "quotient_presentation", "PrimeSet", "SeriesTable", "abelianization",
    "center", "hirsch_length", "isolator", "lower_central_series", "membership",
    "power_exponent_search", "tau", "tensor_epi_check", "upper_central_series",
    "AutomorphismAction", "companion_cyclotomic", "companion_semidirect", "direct_with_cyclic",
    "free_abelian", "free_nilpotent_class2", "heisenberg", "lift_automorphism_class2",
    "semidirect_by_automorphisms", "sub_semidirect_inclusion", "annihilator_polynomials",
    "check_cor23_fastpath", "check_para", "check_tau_monomorphism", "induced_quotient_map",
    "prop26_pair", "thm34_hirsch_check",
]

__version__ = "0.1.0"
