"""q-minimal vector theory.

A vector is q-minimal when no strictly smaller vector (in the minimal
ordering) has the same q-value.  Small supports (one or two coordinates)
are decided by closed-form clauses; bigger supports go to the exact
lowering oracle.  The big-support structure extractor, the join
predictors and the minimal-pair relation implement the structural
statements that the acceptance suite checks against the oracle.
"""

from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import PreconditionError, PropertyViolation
from .oracle import MinimalityVerdict, _lowering_candidates, oracle_minimal
from .quadratic import Isotropy, QuadraticForm, QuadraticPair, isotropy
from .semiring import G, T, ZERO, Cmp, Elem, ValueGroup, nu_cmp, nu_eq, nu_lt
from .tmodule import Vector, zero_vector

__all__ = [
    "MinimalityVerdict",
    "support_bound_check",
    "is_q_minimal_rank1",
    "is_q_minimal_binary",
    "is_q_minimal",
    "BigSupportStructure",
    "big_support_structure",
    "JoinPrediction",
    "join_minimality_predict",
    "PairRelationCase",
    "minimal_pair_relation",
    "enumerate_minimal",
]

# Wire labels for the rule field of enumeration reports.
RULE_VACUOUS = "vacuous"
RULE_ISOTROPIC = "isotropic"
RULE_RANK1 = "Prop9.6a"
RULE_BINARY = "Thm9.7/{}"
RULE_ORACLE = "oracle"


def support_bound_check(q: QuadraticForm, x: Vector) -> bool:
    """Support bound of a q-minimal vector: <= 2 for tangible q(x), <= 4 for
    ghost q(x); halved (1 resp. 2) when the form is quasilinear."""
    verdict = is_q_minimal_for(q, x)
    if not verdict.minimal:
        raise PreconditionError("support_bound_check requires a q-minimal vector")
    if x.is_zero:
        return True
    qx = q.eval(x)
    if q.is_diagonal:
        bound = 1 if qx.is_tangible else 2
    else:
        bound = 2 if qx.is_tangible else 4
    return len(x.support()) <= bound


def is_q_minimal_rank1(alpha1: Elem, lam: Elem) -> MinimalityVerdict:
    """Rank one: tangible alpha makes every vector minimal; ghost alpha
    keeps exactly the tangible multiples; an isotropic line keeps none."""
    if lam.is_zero:
        raise PreconditionError("is_q_minimal_rank1 requires a nonzero coordinate")
    if alpha1.is_zero:
        return MinimalityVerdict(False, zero_vector(1), RULE_ISOTROPIC)
    if alpha1.is_tangible:
        return MinimalityVerdict(True, None, RULE_RANK1)
    if lam.is_tangible:
        return MinimalityVerdict(True, None, RULE_RANK1)
    return MinimalityVerdict(False, Vector((T(lam.value),)), RULE_RANK1)


def _binary_clause(q: QuadraticForm, x: Vector) -> tuple[bool, str]:
    """The four dominance cases for a full-support binary vector.

    The side conditions ask exactly which lowerings can re-create the
    q-value: a ghost coordinate inside a dominant term can always be
    dropped to its tangible partner, and in the mixed cases (2 and 3) the
    partner of the off-term coordinate re-ties the dominant square term
    tangibly, so both coordinates must be tangible there while the cross
    coefficient itself is unconstrained.
    """
    a1, a2, beta = q.alpha(0), q.alpha(1), q.beta(0, 1)
    x1, x2 = x[0], x[1]
    m1 = a1 * x1.square()
    m2 = a2 * x2.square()
    mc = beta * x1 * x2
    c12 = nu_cmp(m1, m2)
    c1c = nu_cmp(m1, mc)
    c2c = nu_cmp(m2, mc)
    if c12 == Cmp.EQUAL and c1c != Cmp.LESS:
        ok = a1.is_tangible and a2.is_tangible and x1.is_tangible and x2.is_tangible
        return ok, RULE_BINARY.format(1)
    if c1c == Cmp.EQUAL and nu_cmp(mc, m2) == Cmp.GREATER:
        ok = a1.is_tangible and x1.is_tangible and x2.is_tangible
        return ok, RULE_BINARY.format(2)
    if c2c == Cmp.EQUAL and nu_cmp(mc, m1) == Cmp.GREATER:
        ok = a2.is_tangible and x2.is_tangible and x1.is_tangible
        return ok, RULE_BINARY.format(3)
    if c1c == Cmp.LESS and c2c == Cmp.LESS:
        ghosts = sum(1 for e in (beta, x1, x2) if e.is_ghost)
        return ghosts <= 1, RULE_BINARY.format(4)
    # a single dominant square term: q(x) is achieved on one coordinate
    return False, RULE_BINARY.format(0)


def _search_witness(q: QuadraticForm, x: Vector, group: ValueGroup) -> Vector:
    qx = q.eval(x)
    for i in sorted(x.support()):
        for cand in _lowering_candidates(q, x, i, group, refine=False):
            xp = x.with_coord(i, cand)
            if q.eval(xp) == qx:
                return xp
    raise PropertyViolation("clause said non-minimal but no lowering witness exists")


def is_q_minimal_binary(q: QuadraticForm, x: Vector,
                        group: ValueGroup | None = None) -> MinimalityVerdict:
    if q.rank != 2 or x.rank != 2:
        raise PreconditionError("is_q_minimal_binary requires rank 2")
    if x[0].is_zero or x[1].is_zero:
        raise PreconditionError("is_q_minimal_binary requires full support")
    if q.eval(x).is_zero:
        return MinimalityVerdict(False, zero_vector(2), RULE_ISOTROPIC)
    ok, rule = _binary_clause(q, x)
    if ok:
        return MinimalityVerdict(True, None, rule)
    from .semiring import INTEGERS
    witness = _search_witness(q, x, group or INTEGERS)
    return MinimalityVerdict(False, witness, rule)


def is_q_minimal(q: QuadraticForm, x: Vector, group: ValueGroup) -> MinimalityVerdict:
    """Exact verdict: clause fast paths for support <= 2, oracle above."""
    if x.rank != q.rank:
        raise PreconditionError("vector rank does not match form rank")
    if x.is_zero:
        return MinimalityVerdict(True, None, RULE_VACUOUS)
    if q.eval(x).is_zero:
        return MinimalityVerdict(False, zero_vector(x.rank), RULE_ISOTROPIC)
    supp = sorted(x.support())
    if len(supp) == 1:
        i = supp[0]
        sub = is_q_minimal_rank1(q.alpha(i), x[i])
        witness = None
        if not sub.minimal:
            witness = x.with_coord(i, sub.witness[0])
        return MinimalityVerdict(sub.minimal, witness, sub.rule)
    if len(supp) == 2:
        i, j = supp
        sub_q = QuadraticForm.make((q.alpha(i), q.alpha(j)), {(0, 1): q.beta(i, j)})
        sub_x = Vector((x[i], x[j]))
        sub = is_q_minimal_binary(sub_q, sub_x, group)
        witness = None
        if not sub.minimal:
            witness = x.with_coord(i, sub.witness[0]).with_coord(j, sub.witness[1])
        return MinimalityVerdict(sub.minimal, witness, sub.rule)
    return oracle_minimal(q, x, group)


def is_q_minimal_for(q: QuadraticForm, x: Vector) -> MinimalityVerdict:
    """is_q_minimal with the group inferred from the values present (any
    half-integral value forces the dense group; used by convenience paths)."""
    from fractions import Fraction

    from .semiring import INTEGERS, RATIONALS

    vals = [c.value for c in x.coords if not c.is_zero]
    vals += [e.value for e in q.diag if not e.is_zero]
    vals += [e.value for e in q.upper if not e.is_zero]
    dense = any(Fraction(v).denominator != 1 for v in vals)
    return is_q_minimal(q, x, RATIONALS if dense else INTEGERS)


# ---------------------------------------------------------------------------
# Big support structure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BigSupportStructure:
    case: str  # A | B | C | D
    J: frozenset[int]
    K: frozenset[int]
    checks: dict[str, bool]

    @property
    def all_checks_pass(self) -> bool:
        return all(self.checks.values())


def _two_subsets(indices: Sequence[int]):
    for a in range(len(indices)):
        for b in range(a + 1, len(indices)):
            yield frozenset((indices[a], indices[b]))


def big_support_structure(pair: QuadraticPair, x: Vector, group: ValueGroup,
                          assume_minimal: bool = False) -> BigSupportStructure:
    """Identify the unique decomposition x = x(J) v x(K) of a q-minimal
    vector of support 3 or 4, and record the cross-value checks.

    ``assume_minimal`` skips the oracle pre-check when the caller has
    already certified minimality (the acceptance scans do)."""
    q = pair.form
    if not assume_minimal:
        verdict = is_q_minimal(q, x, group)
        if not verdict.minimal:
            raise PreconditionError(f"vector is not q-minimal (witness {verdict.witness})")
    supp = sorted(x.support())
    n = len(supp)
    if n not in (3, 4):
        raise PreconditionError("big_support_structure requires support of size 3 or 4")

    qx = q.eval(x)
    monos = [(idx, m) for idx, m in q.monomials(x) if not m.is_zero]
    dominant = [(idx, m) for idx, m in monos if nu_eq(m, qx)]
    diag_dom = [idx for idx, m in dominant if len(idx) == 1]
    cross_dom = [idx for idx, m in dominant if len(idx) == 2]
    if len(dominant) < 2 or any(m.is_ghost for _, m in dominant):
        raise PropertyViolation("q-minimal big-support vector without two tangible "
                                "dominant terms")

    checks: dict[str, bool] = {"q(x) ghost": qx.is_ghost}

    if n == 3 and diag_dom:
        case = "A"
        J = frozenset(diag_dom[0])
        K = frozenset(cross_dom[0])
        well_formed = len(diag_dom) == 1 and len(cross_dom) == 1 and not (J & K)
    elif n == 3 and len(cross_dom) == 2:
        case = "B"
        J, K = sorted((frozenset(c) for c in cross_dom), key=sorted)
        well_formed = len(J & K) == 1
    elif n == 3 and len(cross_dom) == 3:
        case = "C"
        pairs = sorted((frozenset(c) for c in cross_dom), key=sorted)
        J, K = pairs[0], pairs[1]
        well_formed = True
    elif n == 4 and len(cross_dom) == 2 and not diag_dom:
        case = "D"
        J, K = sorted((frozenset(c) for c in cross_dom), key=sorted)
        well_formed = not (J & K)
    else:
        raise PropertyViolation(f"dominant-term shape matches no case: {dominant}")
    if not well_formed:
        raise PropertyViolation(f"malformed case {case} dominant structure")

    checks["x = x(J) v x(K)"] = x.restrict(J).sup(x.restrict(K)) == x
    for name, S in (("J", J), ("K", K)):
        xs = x.restrict(S)
        checks[f"x({name}) g-anisotropic"] = isotropy(q, xs) == Isotropy.G_ANISOTROPIC
        checks[f"x({name}) q-minimal"] = is_q_minimal(q, xs, group).minimal
        checks[f"q(x({name})) ~ q(x)"] = nu_eq(q.eval(xs), qx)

    b = pair.b
    if case in ("A", "D"):
        checks["b(x(J),x(K)) <_nu q(x)"] = nu_lt(b(x.restrict(J), x.restrict(K)), qx)
    elif case == "B":
        checks["b(x(J),x(K)) = q(x)"] = b(x.restrict(J), x.restrict(K)) == qx
        t = b(x.restrict(J - K), x.restrict(K - J))
        checks["b(x(J\\K),x(K\\J)) <_nu q(x)"] = nu_lt(t, qx)
    else:  # case C: every pair of distinct 2-subsets behaves like case B's J, K
        subs = list(_two_subsets(supp))
        for a in range(len(subs)):
            for c in range(a + 1, len(subs)):
                S, Tset = subs[a], subs[c]
                name = f"{sorted(S)},{sorted(Tset)}"
                checks[f"b pair {name} = q(x)"] = (
                    b(x.restrict(S), x.restrict(Tset)) == qx
                )
                t = b(x.restrict(S - Tset), x.restrict(Tset - S))
                checks[f"b diff {name} ~ q(x), tangible"] = (
                    nu_eq(t, qx) and t.is_tangible
                )
    return BigSupportStructure(case, J, K, checks)


# ---------------------------------------------------------------------------
# Join constructions
# ---------------------------------------------------------------------------

class JoinPrediction(enum.Enum):
    MINIMAL_BY_THM73 = "MinimalByThm73"
    MINIMAL_BY_THM75 = "MinimalByThm75"
    NO_PREDICTION = "NoPrediction"


def join_minimality_predict(pair: QuadraticPair, y: Vector, z: Vector,
                            group: ValueGroup) -> JoinPrediction:
    """Predict minimality of y v z from small-support data alone.

    Disjoint supports of shape 1+2 or 2+2 with the cross value strictly
    below the (nu-equal, tangible) q-values give the first prediction;
    overlapping 2+2 supports agreeing on the overlap give the second when
    the off-overlap cross value is strictly below or tangibly at the
    common level.  Everything else is left undecided: in particular a
    non-strict cross value on disjoint-overlap shapes proves nothing.
    """
    q = pair.form
    if y.rank != z.rank or y.rank != q.rank:
        raise PreconditionError("rank mismatch in join_minimality_predict")
    J, K = y.support(), z.support()
    if not J or not K or len(J) > 2 or len(K) > 2:
        raise PreconditionError("join predictions need nonzero vectors of support <= 2")
    for v in (y, z):
        if isotropy(q, v) != Isotropy.G_ANISOTROPIC:
            return JoinPrediction.NO_PREDICTION
        if not is_q_minimal(q, v, group).minimal:
            return JoinPrediction.NO_PREDICTION
    qy, qz = q.eval(y), q.eval(z)
    if not nu_eq(qy, qz):
        return JoinPrediction.NO_PREDICTION

    if not (J & K) and sorted((len(J), len(K))) in ([1, 2], [2, 2]):
        if nu_lt(pair.b(y, z), qy):
            return JoinPrediction.MINIMAL_BY_THM73
        return JoinPrediction.NO_PREDICTION

    if len(J) == 2 and len(K) == 2 and len(J & K) == 1 and len(J | K) == 3:
        if y.restrict(J & K) != z.restrict(J & K):
            return JoinPrediction.NO_PREDICTION
        t = pair.b(y.restrict(J - K), z.restrict(K - J))
        if nu_lt(t, qy) or (t.is_tangible and nu_eq(t, qy)):
            return JoinPrediction.MINIMAL_BY_THM75
    return JoinPrediction.NO_PREDICTION


# ---------------------------------------------------------------------------
# Pairs of comparable minimal vectors
# ---------------------------------------------------------------------------

class PairRelationCase(enum.Enum):
    CASE1 = "Case1"
    CASE2 = "Case2"
    CASE3 = "Case3"
    CASE4 = "Case4"


def minimal_pair_relation(q: QuadraticForm, x: Vector, y: Vector,
                          group: ValueGroup) -> PairRelationCase:
    """Which support shape a comparable minimal pair y < x with nu-equal
    q-values falls into; the stated conclusions are re-verified."""
    if not (y.leq(x) and y != x):
        raise PreconditionError("minimal_pair_relation requires y < x")
    if not nu_eq(q.eval(y), q.eval(x)):
        raise PreconditionError("q(y) and q(x) must be nu-equivalent")
    for v in (x, y):
        if not is_q_minimal(q, v, group).minimal:
            raise PreconditionError("both vectors must be q-minimal")
    if not (q.eval(y).is_tangible and q.eval(x).is_ghost):
        raise PropertyViolation("expected q(y) tangible and q(x) ghost")
    sy, sx = len(y.support()), len(x.support())
    if sy == 1 and sx == 1:
        if x != y.nu():
            raise PropertyViolation("case 1 expects x = e*y")
        return PairRelationCase.CASE1
    if sy == 2 and sx == 2:
        ey = y.nu()
        if not (x.leq(ey) and x != ey):
            raise PropertyViolation("case 2 expects y < x < e*y")
        return PairRelationCase.CASE2
    if sy == 1 and sx >= 2:
        if y != x.restrict(y.support()):
            raise PropertyViolation("case 3 expects y = x(J)")
        return PairRelationCase.CASE3
    if sy == 2 and sx >= 3:
        if y != x.restrict(y.support()):
            raise PropertyViolation("case 4 expects y = x(J)")
        return PairRelationCase.CASE4
    raise PropertyViolation(f"support shape ({sy}, {sx}) matches no case")


# ---------------------------------------------------------------------------
# Desk-scale enumeration
# ---------------------------------------------------------------------------

def _window_pool(window: Sequence) -> list[Elem]:
    pool = [ZERO]
    for v in sorted(set(window)):
        pool.append(T(v))
        pool.append(G(v))
    return pool


def _sort_key(x: Vector):
    return tuple((c.sort, c.value if not c.is_zero else 0) for c in x.coords)


def _chunk_minimal(args) -> list[Vector]:
    q, group, chunk = args
    return [x for x in chunk if is_q_minimal(q, x, group).minimal]


def enumerate_minimal(q: QuadraticForm, window: Sequence, group: ValueGroup,
                      jobs: int = 1) -> list[Vector]:
    """All nonzero q-minimal vectors with coordinates drawn from the window
    (zero plus both sorts of each value).  The zero vector, although
    vacuously minimal, is not reported."""
    if not window:
        raise PreconditionError("enumeration window must be nonempty")
    if q.rank > 4:
        raise PreconditionError("enumeration is bounded to rank 4")
    pool = _window_pool(window)
    candidates = [x for x in _grid(q.rank, pool) if not x.is_zero]
    if jobs > 1:
        chunks = [candidates[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_chunk_minimal, [(q, group, c) for c in chunks]))
        found = [x for part in parts for x in part]
    else:
        found = [x for x in candidates if is_q_minimal(q, x, group).minimal]
    return sorted(found, key=_sort_key)


def _grid(rank: int, pool: Sequence[Elem]) -> Iterable[Vector]:
    if rank == 1:
        for a in pool:
            yield Vector((a,))
        return
    for rest in _grid(rank - 1, pool):
        for a in pool:
            yield Vector((a,) + rest.coords)
