"""Exact arithmetic in monogenic rings of integers."""
from .ring import NumberRing, RingElement, FieldElement, make_field
from .maps import (Automorphism, Inclusion, Extension, ZZ, identity_automorphism, identity_inclusion,
                   integers_into, fixed_subring, relative_norm_quadratic)
from .ideal import (IntegralIdeal, from_generators, principal, unit_ideal, zero_ideal, product, contains,
                    subset, ideal_norm, quotient_reduce, quotient_size, congruent, extend, contract)
from .arith import (PrimeIdeal, primes_above, factor_ideal, factor_ideal_quadratic, valuation,
                    fundamental_unit_real_quadratic, trial_factor, unit_group_order)
from .embed import EmbeddingSet, embeddings, real_signs, abs_compare, approximate, norm_and_conjugates

__all__ = [
    "NumberRing", "RingElement", "FieldElement", "make_field", "Automorphism", "Inclusion", "Extension", "ZZ",
    "identity_automorphism", "identity_inclusion", "integers_into", "fixed_subring",
    "relative_norm_quadratic", "IntegralIdeal", "from_generators", "principal", "unit_ideal", "zero_ideal",
    "product", "contains", "subset", "ideal_norm", "quotient_reduce", "quotient_size", "congruent", "extend",
    "contract", "PrimeIdeal", "primes_above", "factor_ideal", "factor_ideal_quadratic", "valuation",
    "fundamental_unit_real_quadratic", "trial_factor", "unit_group_order", "EmbeddingSet", "embeddings",
    "real_signs", "abs_compare", "approximate", "norm_and_conjugates",
]
