"""Toolkit for factoring semiprimes with a prime factor near c*(a/b)**n.

The descent core shrinks the working value by b/a per step and probes a
short gcd window; the search layer enumerates primitive rational bases;
the crypto layer generates certified structured instances and breaks
backdoored RSA keys built from them.
"""

from .crypto import (
    DegenerateKeyError,
    GenerationError,
    NotFactoredError,
    RsaKeyMaterial,
    StructuredInstance,
    crack_key,
    gen_backdoored_rsa,
    gen_structured_semiprime,
    rsa_crack,
    rsa_decrypt,
    rsa_encrypt,
)
from .descent import (
    DescentStats,
    DescentWitness,
    Exhausted,
    FactorOutcome,
    Found,
    GcdBudget,
    RationalBase,
    approximation_delta,
    descend_once,
    descent_witness,
    hypothesis_holds,
    iter_descent,
    predicted_max_iterations,
    rbd_factor,
    search_radius,
)
from .expr import ExpressionError, parse_expression
from .fixtures import FIXTURE_NAMES, Fixture, all_fixtures, get_fixture
from .numutil import (
    FactorEntry,
    GcdCounter,
    PartialFactorization,
    counted_gcd,
    integer_nth_root,
    is_probable_prime,
    modinv,
    next_prime,
    small_factor_refine,
)
from .search import (
    SearchConfig,
    SearchReport,
    coprime_density,
    enumerate_primitive_bases,
    is_perfect_power_pair,
    multiplier_sweep,
    search_factor,
    vulnerability_condition,
)

__version__ = "0.1.0"

__all__ = [
    "DegenerateKeyError",
    "DescentStats",
    "DescentWitness",
    "Exhausted",
    "ExpressionError",
    "FactorEntry",
    "FactorOutcome",
    "Found",
    "Fixture",
    "FIXTURE_NAMES",
    "GcdBudget",
    "GcdCounter",
    "GenerationError",
    "NotFactoredError",
    "PartialFactorization",
    "RationalBase",
    "RsaKeyMaterial",
    "SearchConfig",
    "SearchReport",
    "StructuredInstance",
    "all_fixtures",
    "approximation_delta",
    "counted_gcd",
    "coprime_density",
    "crack_key",
    "descend_once",
    "descent_witness",
    "enumerate_primitive_bases",
    "gen_backdoored_rsa",
    "gen_structured_semiprime",
    "get_fixture",
    "hypothesis_holds",
    "integer_nth_root",
    "is_perfect_power_pair",
    "is_probable_prime",
    "iter_descent",
    "modinv",
    "multiplier_sweep",
    "next_prime",
    "parse_expression",
    "predicted_max_iterations",
    "rbd_factor",
    "rsa_crack",
    "rsa_decrypt",
    "rsa_encrypt",
    "search_factor",
    "search_radius",
    "small_factor_refine",
    "vulnerability_condition",
]
