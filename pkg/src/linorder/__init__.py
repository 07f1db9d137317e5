"""Symbolic toolkit for countable linear orders.

Term algebra with a text DSL, block condensation, finite-level
back-and-forth proving and refuting, elementary-substructure finders
with computable selections, enumeration-dense and coarsely agreeing
copies, interval densities of rational enumerations, and canonical-type
extraction for finite relational structures.
"""

from .condense import BkSet, Census, bk_set, block_predicates, condense_one
from .copies import coarse_copy, generic_copy
from .density import (DensityReport, Enumeration, interval_density,
                      is_positive_notion, register_enumeration,
                      subset_density_profile)
from .elementarity import (EmbeddingDescriptor, NotApplicableError, Selector,
                           check_sigma1, descriptor_dense_set,
                           every_other_eta, find_sigma1_sub, find_sigma2_sub,
                           ray_selection, region_selection,
                           sample_check_elementarity)
from .formulas import (Formula, eval3, formula_text, parse_formula, qrank,
                       rank_text, translate_eta2eta, translate_zeta_power,
                       unfold_sim)
from .games import (ContradictionError, Derivation, LeClaim, brute_ef_le,
                    check_witness, decide_le, derive_le, refute_le)
from .intervals import interval_card, less_at, pred_of, succ_of
from .ordinals import (Ordinal, OrdinalSyntaxError, cnf_add, cnf_compare,
                       cnf_double, parse_ordinal, render_ordinal)
from .parser import ParseError, parse, validate_fragment
from .presentations import (DenseSetSpec, Presentation, all_naturals,
                            cofinite_complement, density_of, non_squares)
from .ramsey import (ExtractionResult, FiniteRelStructure,
                     RelationalPresentation, RelationalSignature,
                     emit_generic_copy, extract_monochromatic,
                     homogeneity_violations, qf_type, required_size)
from .render import render
from .terms import (ArithmeticSet, ETA, ExplicitSet, EtaRep, Finite, INFINITE,
                    OMEGA, OMEGA_STAR, Omega, OmegaStar, PreconditionError,
                    Product, Rev, Shuffle, Sum, Term, UnsupportedTermError,
                    ZETA, Zeta, ZetaPower, ZetaRep, cardinality, normalize)

__version__ = "1.0.0"

__all__ = [
    "ArithmeticSet", "BkSet", "Census", "ContradictionError",
    "DenseSetSpec", "DensityReport", "Derivation", "ETA",
    "EmbeddingDescriptor", "Enumeration", "ExplicitSet",
    "ExtractionResult", "EtaRep", "Finite", "FiniteRelStructure",
    "Formula", "INFINITE", "LeClaim", "NotApplicableError", "OMEGA",
    "OMEGA_STAR", "Omega", "OmegaStar", "Ordinal", "OrdinalSyntaxError",
    "ParseError", "PreconditionError", "Presentation", "Product",
    "RelationalPresentation", "RelationalSignature", "Rev", "Selector",
    "Shuffle", "Sum", "Term", "UnsupportedTermError", "ZETA", "Zeta",
    "ZetaPower", "ZetaRep", "all_naturals", "bk_set", "block_predicates",
    "brute_ef_le", "cardinality", "check_sigma1", "check_witness",
    "cnf_add", "cnf_compare", "cnf_double", "coarse_copy",
    "cofinite_complement", "condense_one", "decide_le", "density_of",
    "derive_le", "descriptor_dense_set", "emit_generic_copy", "eval3",
    "every_other_eta", "extract_monochromatic", "find_sigma1_sub",
    "find_sigma2_sub", "formula_text", "generic_copy",
    "homogeneity_violations", "interval_card", "interval_density",
    "is_positive_notion", "less_at", "non_squares", "normalize", "parse",
    "parse_formula", "parse_ordinal", "pred_of", "qf_type", "qrank",
    "rank_text", "ray_selection", "refute_le", "region_selection",
    "register_enumeration", "render", "render_ordinal", "required_size",
    "sample_check_elementarity", "subset_density_profile", "succ_of",
    "translate_eta2eta", "translate_zeta_power", "unfold_sim",
    "validate_fragment",
]
