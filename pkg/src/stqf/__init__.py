"""Exact arithmetic for quadratic forms over supertropical semirings.

Scalars are zero or tangible/ghost copies of ordered group values;
quadratic pairs on small free modules are classified as quasilinear or
excessive, their q-value tables and CS-ratios computed in closed form,
their q-minimal vectors enumerated, and binary rational forms are
supertropicalized through negated p-adic valuations.  Every closed-form
path has a brute-force oracle and the `selftest` harness cross-checks
them.
"""

from .semiring import (
    Cmp,
    Elem,
    E,
    G,
    INTEGERS,
    RATIONALS,
    T,
    ValueGroup,
    ZERO,
    add,
    group_from_name,
    min_le,
    min_lt,
    min_order_compare,
    mul,
    nu_cmp,
    nu_eq,
    nu_ge,
    nu_gt,
    nu_le,
    nu_lt,
    sup,
)
from .tmodule import (
    Vector,
    combine,
    restrict,
    scalar_mul,
    unit,
    vec_add,
    vec_leq,
    vec_sup,
    zero_vector,
)
from .quadratic import (
    Companion,
    Isotropy,
    QuadraticForm,
    QuadraticPair,
    binary_form,
    binary_pair,
    default_companion,
    eval_b,
    eval_q,
    isotropy,
    pair_with_default,
    presentation,
    pullback,
    ql_decompose,
)
from .trig import (
    CaseParameters,
    DerivedClass,
    PairClass,
    Refinement,
    Rigidity,
    case_parameters,
    classify_pair,
    classify_presentation,
    cs_ratio,
    cs_ratio_presentation,
    derived_cs,
    derived_pair_classify,
    nu_ratio,
    q_value_table,
)
from .oracle import (
    MinimalityVerdict,
    oracle_companion_valid,
    oracle_minimal,
    oracle_quasilinear,
    witness_values,
)
from .minimal import (
    BigSupportStructure,
    JoinPrediction,
    PairRelationCase,
    big_support_structure,
    enumerate_minimal,
    is_q_minimal,
    is_q_minimal_binary,
    is_q_minimal_rank1,
    join_minimality_predict,
    minimal_pair_relation,
    support_bound_check,
)
from .stropicalize import (
    ExamplePrediction,
    RationalForm,
    Supervaluation,
    classify_stropicalization,
    example_case_label,
    padic_valuation,
    square_equivalent,
    stropicalize_form,
    supervaluation_eval,
    verify_prediction,
)
from .errors import (
    IsotropicVectorError,
    ParseError,
    PreconditionError,
    PropertyViolation,
    RankMismatchError,
    StqfError,
)

__version__ = "0.1.0"
