"""Tropical trigonometry: nu-ratios, CS-ratios, the pair classifier,
case parameters, the q-value tables, and derived-pair classification.

Everything here works from the presentation triple (a1, a2, alpha) of a
pair on the span of two vectors: a1 = q(x), a2 = q(y), alpha = b(x, y).
The quasilinear/excessive dichotomy does not depend on the choice of
companion, but alpha is what a computation gets to see.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .errors import IsotropicVectorError, PreconditionError
from .quadratic import QuadraticPair, presentation
from .semiring import (
    G,
    GHOST,
    T,
    ZERO,
    Cmp,
    Elem,
    ValueGroup,
    nu_cmp,
)
from .tmodule import Vector


class Refinement(enum.Enum):
    CS = "CS"
    WEAKLY_CS = "WeaklyCS"
    ALMOST_CS_ONLY = "AlmostCSOnly"
    EXCESSIVE = "Excessive"


class Rigidity(enum.Enum):
    RIGID = "Rigid"
    NU_RIGID = "NuRigid"
    UNKNOWN = "Unknown"


@dataclass(frozen=True, slots=True)
class PairClass:
    quasilinear: bool
    refinement: Refinement
    rigidity: Rigidity
    cs: Elem | None  # CS-ratio, present when both vectors are anisotropic


def nu_ratio(lam: Elem, mu: Elem) -> Elem:
    """The fraction of ghost values: Ghost(v(lam) - v(mu)), or zero for lam = 0."""
    if mu.is_zero:
        raise PreconditionError("nu-ratio denominator must be nonzero")
    if lam.is_zero:
        return ZERO
    return G(lam.value - mu.value)


def cs_ratio_presentation(a1: Elem, a2: Elem, alpha: Elem) -> Elem:
    if a1.is_zero or a2.is_zero:
        raise IsotropicVectorError("CS-ratio requires anisotropic vectors")
    return nu_ratio(alpha.square(), a1 * a2)


def cs_ratio(pair: QuadraticPair, x: Vector, y: Vector) -> Elem:
    a1, a2, alpha = presentation(pair, x, y)
    return cs_ratio_presentation(a1, a2, alpha)


def classify_presentation(a1: Elem, a2: Elem, alpha: Elem, group: ValueGroup) -> PairClass:
    """Quasilinear-or-excessive, with CS refinement and rigidity annotation.

    Dense group: quasilinear iff alpha^2 <=_nu a1*a2, otherwise excessive
    and rigid.  Discrete group: quasilinear iff alpha^2 <=_nu a1*a2, or the
    nu-value of alpha^2 exceeds that of a1*a2 by exactly one step with both
    a1 and a2 ghost; an excessive pair is nu-rigid, and rigid when alpha^2
    clears the boundary strictly.  A zero alpha is always quasilinear, even
    when a1*a2 = 0 (the boundary comparison degenerates there; additivity
    on the span is immediate).
    """
    bb = alpha.square()
    qq = a1 * a2

    if alpha.is_zero:
        quasilinear = True
    elif qq.is_zero:
        quasilinear = False
    else:
        c = nu_cmp(bb, qq)
        if c != Cmp.GREATER:
            quasilinear = True
        elif group.is_discrete and bb.value == qq.value + 1:
            quasilinear = a1.is_ghost and a2.is_ghost
        else:
            quasilinear = False

    if quasilinear:
        rigidity = Rigidity.UNKNOWN
    elif not group.is_discrete:
        rigidity = Rigidity.RIGID
    else:
        at_boundary = (not qq.is_zero) and bb.value == qq.value + 1
        rigidity = Rigidity.NU_RIGID if at_boundary else Rigidity.RIGID

    if not quasilinear:
        refinement = Refinement.EXCESSIVE
    else:
        c = nu_cmp(bb, qq)
        if c == Cmp.LESS:
            refinement = Refinement.CS
        elif c == Cmp.EQUAL:
            refinement = Refinement.WEAKLY_CS
        else:
            refinement = Refinement.ALMOST_CS_ONLY

    cs = None
    if not a1.is_zero and not a2.is_zero:
        cs = nu_ratio(bb, qq)
    return PairClass(quasilinear, refinement, rigidity, cs)


def classify_pair(pair: QuadraticPair, x: Vector, y: Vector, group: ValueGroup) -> PairClass:
    a1, a2, alpha = presentation(pair, x, y)
    return classify_presentation(a1, a2, alpha, group)


# ---------------------------------------------------------------------------
# Case parameters and the q-value tables
# ---------------------------------------------------------------------------

CASE_LABELS = ("IA", "IB", "IIA", "IIB", "IIIA", "IIIB", "IIIC", "IV", "V", "VI", "VII")


@dataclass(frozen=True, slots=True)
class CaseParameters:
    """Derived quantities of a presentation triple.

    zeta and eta are tangible representatives of alpha/a1 and a2/alpha; xi
    is the half-value (v(a2) - v(a1))/2 in the divisible hull, and sigma,
    tau its group neighbours in the discrete non-square case.  ``swapped``
    marks a mirrored case IV (a1 = 0, a2 != 0), handled by exchanging the
    roles of the two base vectors.
    """

    label: str
    group: ValueGroup
    zeta: Elem | None = None
    eta: Elem | None = None
    xi: Fraction | None = None
    sigma: Elem | None = None
    tau: Elem | None = None
    nu_square: bool | None = None
    swapped: bool = False


def case_parameters(a1: Elem, a2: Elem, alpha: Elem, group: ValueGroup) -> CaseParameters:
    if alpha.is_zero:
        if a1.is_zero and a2.is_zero:
            return CaseParameters("VII", group)
        if a1.is_zero or a2.is_zero:
            # not covered by the case conventions; treated as a degenerate
            # quasilinear-diagonal instance under the VI label
            return CaseParameters("VI", group)
        xi = Fraction(a2.value - a1.value, 2)
        sq = group.contains(xi)
        sigma = tau = None
        if group.is_discrete and not sq:
            tau, sigma = T(group.floor(xi)), T(group.ceil(xi))
        return CaseParameters("VI", group, xi=xi, sigma=sigma, tau=tau, nu_square=sq)

    if a1.is_zero and a2.is_zero:
        return CaseParameters("V", group)
    if a2.is_zero:
        return CaseParameters("IV", group, zeta=T(alpha.value - a1.value))
    if a1.is_zero:
        return CaseParameters("IV", group, zeta=T(alpha.value - a2.value), swapped=True)

    zeta = T(alpha.value - a1.value)
    eta = T(a2.value - alpha.value)
    xi = Fraction(a2.value - a1.value, 2)
    sq = group.contains(xi)
    d = 2 * alpha.value - (a1.value + a2.value)  # nu-gap of alpha^2 over a1*a2
    sigma = tau = None
    if sq:
        label = "IA" if d > 0 else "IB"
    elif not group.is_discrete:
        label = "IIA" if d > 0 else "IIB"
    else:
        tau, sigma = T(group.floor(xi)), T(group.ceil(xi))
        if d > 1:
            label = "IIIA"
        elif d == 1:
            label = "IIIB"
        else:
            label = "IIIC"
    return CaseParameters(label, group, zeta=zeta, eta=eta, xi=xi,
                          sigma=sigma, tau=tau, nu_square=sq)


def _cmp_shift(lam: Elem, shift: Fraction | int, mu: Elem) -> Cmp:
    """nu-compare lam against Tangible(shift) * mu, allowing zero operands."""
    if lam.is_zero:
        return Cmp.EQUAL if mu.is_zero else Cmp.LESS
    if mu.is_zero:
        return Cmp.GREATER
    lhs, rhs = lam.value, shift + mu.value
    if lhs < rhs:
        return Cmp.LESS
    if lhs > rhs:
        return Cmp.GREATER
    return Cmp.EQUAL


def _strip_table(zeta: Elem, eta: Elem, a1: Elem, a2: Elem, alpha: Elem,
                 lam: Elem, mu: Elem) -> Elem:
    # five-row table of the excessive nondegenerate cases
    c_hi = _cmp_shift(lam, zeta.value, mu)
    if c_hi == Cmp.GREATER:
        return lam.square() * a1
    if c_hi == Cmp.EQUAL:
        return (lam.square() * a1).nu()
    c_lo = _cmp_shift(lam, eta.value, mu)
    if c_lo == Cmp.GREATER:
        return lam * mu * alpha
    if c_lo == Cmp.EQUAL:
        return (mu.square() * a2).nu()
    return mu.square() * a2


def _diagonal_table(xi: Fraction, a1: Elem, a2: Elem, lam: Elem, mu: Elem,
                    boundary_possible: bool) -> Elem:
    # quasilinear cases: compare lam against xi * mu
    c = _cmp_shift(lam, xi, mu)
    if c == Cmp.GREATER:
        return lam.square() * a1
    if c == Cmp.EQUAL:
        if not boundary_possible:
            raise PreconditionError("boundary hit although xi lies outside the group")
        return (lam.square() * a1).nu()
    return mu.square() * a2


def _case_iv_table(zeta: Elem, a1: Elem, alpha: Elem, lam: Elem, mu: Elem) -> Elem:
    c = _cmp_shift(lam, zeta.value, mu)
    if c == Cmp.GREATER:
        return lam.square() * a1
    if c == Cmp.EQUAL:
        return (lam.square() * a1).nu()
    return lam * mu * alpha


def q_value_table(params: CaseParameters, a1: Elem, a2: Elem, alpha: Elem,
                  lam: Elem, mu: Elem) -> Elem:
    """q(lam*x + mu*y) straight from the case's piecewise row, no evaluation.

    This is the theorem-side fast path checked against eval_q on the binary
    form; (lam, mu) = (0, 0) is outside the domain.
    """
    if lam.is_zero and mu.is_zero:
        raise PreconditionError("lambda and mu must not both be zero")
    label = params.label
    if label == "VII":
        return ZERO
    if label == "V":
        return lam * mu * alpha
    if label == "IV":
        if params.swapped:
            return _case_iv_table(params.zeta, a2, alpha, mu, lam)
        return _case_iv_table(params.zeta, a1, alpha, lam, mu)
    if label == "VI":
        if a1.is_zero:
            return mu.square() * a2
        if a2.is_zero:
            return lam.square() * a1
        return _diagonal_table(params.xi, a1, a2, lam, mu, params.nu_square)
    if label in ("IB", "IIB", "IIIC"):
        return _diagonal_table(params.xi, a1, a2, lam, mu, label == "IB")
    if label == "IIIB":
        c_hi = _cmp_shift(lam, params.sigma.value, mu)
        if c_hi == Cmp.GREATER:
            return lam.square() * a1
        if c_hi == Cmp.EQUAL:
            return (lam.square() * a1).nu()
        c_lo = _cmp_shift(lam, params.tau.value, mu)
        if c_lo == Cmp.EQUAL:
            return (mu.square() * a2).nu()
        if c_lo == Cmp.LESS:
            return mu.square() * a2
        raise PreconditionError("no group value lies strictly between tau and sigma")
    if label in ("IA", "IIA", "IIIA"):
        return _strip_table(params.zeta, params.eta, a1, a2, alpha, lam, mu)
    raise PreconditionError(f"unknown case label {label!r}")


# ---------------------------------------------------------------------------
# Derived pairs x' = l1 x + m1 y, y' = l2 x + m2 y over an excessive base
# ---------------------------------------------------------------------------

class DerivedClass(enum.Enum):
    QUASILINEAR = "Quasilinear"
    EXCESSIVE = "Excessive"


def _check_derived_preconditions(a1, a2, alpha, l1, m1, l2, m2, group):
    if classify_presentation(a1, a2, alpha, group).quasilinear:
        raise PreconditionError("the base pair must be excessive")
    if l1.is_zero and m1.is_zero:
        raise PreconditionError("x' must be nonzero")
    if l2.is_zero and m2.is_zero:
        raise PreconditionError("y' must be nonzero")
    if nu_cmp(l1 * m2, l2 * m1) != Cmp.GREATER:
        raise PreconditionError(
            "orientation l1*m2 >_nu l2*m1 required (swap x' and y' first)"
        )


def _normalize_mirror(a1, a2, alpha, l1, m1, l2, m2):
    # arrange a1 != 0 unless a1 = a2 = 0, by exchanging the base vectors
    # (which also exchanges x' and y' to keep the orientation strict)
    if a1.is_zero and not a2.is_zero:
        return a2, a1, alpha, m2, l2, m1, l1
    return a1, a2, alpha, l1, m1, l2, m2


def derived_pair_classify(a1: Elem, a2: Elem, alpha: Elem,
                          l1: Elem, m1: Elem, l2: Elem, m2: Elem,
                          group: ValueGroup) -> DerivedClass:
    """Quasilinearity of (x', y') by the closed-form table criterion.

    Over an excessive base the derived pair is quasilinear exactly when
    its CS-ratio is at most the unit ghost, which happens when y' leans
    far enough towards x (l2 >=_nu zeta*m2) or x' far enough towards y
    (l1 <=_nu eta*m1, needs a2 != 0); in the discrete group it is also
    quasilinear when the ratio sits exactly one step above the unit and
    both derived q-values are ghost.  With tangible data that boundary
    clause fires only on the two rays l1 ~ zeta*m1, l2 ~ eta*m2 of the
    nu-adjacent case, but ghost coefficients reach it elsewhere, so the
    q-value sorts are read off the table rows rather than assumed.
    """
    _check_derived_preconditions(a1, a2, alpha, l1, m1, l2, m2, group)
    a1, a2, alpha, l1, m1, l2, m2 = _normalize_mirror(a1, a2, alpha, l1, m1, l2, m2)
    if not a1.is_zero:
        zv = alpha.value - a1.value
        if _cmp_shift(l2, zv, m2) != Cmp.LESS:
            return DerivedClass.QUASILINEAR
        if not a2.is_zero:
            ev = a2.value - alpha.value
            if _cmp_shift(l1, ev, m1) != Cmp.GREATER:
                return DerivedClass.QUASILINEAR
    if group.is_discrete:
        try:
            cs = derived_cs(a1, a2, alpha, l1, m1, l2, m2, group)
        except IsotropicVectorError:
            return DerivedClass.EXCESSIVE
        if cs.value == 1:
            params = case_parameters(a1, a2, alpha, group)
            qx = q_value_table(params, a1, a2, alpha, l1, m1)
            qy = q_value_table(params, a1, a2, alpha, l2, m2)
            if qx.is_ghost and qy.is_ghost:
                return DerivedClass.QUASILINEAR
    return DerivedClass.EXCESSIVE


def derived_cs(a1: Elem, a2: Elem, alpha: Elem,
               l1: Elem, m1: Elem, l2: Elem, m2: Elem,
               group: ValueGroup) -> Elem:
    """Closed-form CS-ratio of (x', y'), region by region.

    The regions are cut by the positions of l_i relative to zeta*m_i and
    eta*m_i; on overlaps the formulas agree.  In the region where x' leans
    fully towards x and y' fully towards y the ratio is [zeta/eta], the
    ratio of the base pair itself, which is also the sharp upper bound for
    all derived pairs.
    """
    _check_derived_preconditions(a1, a2, alpha, l1, m1, l2, m2, group)
    a1, a2, alpha, l1, m1, l2, m2 = _normalize_mirror(a1, a2, alpha, l1, m1, l2, m2)

    if a1.is_zero:  # a1 = a2 = 0
        if m1.is_zero:
            raise IsotropicVectorError("x' is isotropic (q(x') = l1*m1*alpha = 0)")
        if l2.is_zero:
            raise IsotropicVectorError("y' is isotropic (q(y') = l2*m2*alpha = 0)")
        return G(l1.value + m2.value - m1.value - l2.value)

    zv = alpha.value - a1.value
    if a2.is_zero:
        if l2.is_zero:
            raise IsotropicVectorError("y' is isotropic in the a2 = 0 case")
        if _cmp_shift(l2, zv, m2) != Cmp.LESS:
            return G(2 * (zv + m2.value - l2.value))
        if _cmp_shift(l1, zv, m1) != Cmp.LESS:
            return G(zv + m2.value - l2.value)
        return G(l1.value + m2.value - m1.value - l2.value)

    ev = a2.value - alpha.value
    c2z = _cmp_shift(l2, zv, m2)
    if c2z != Cmp.LESS:
        return G(2 * (zv + m2.value - l2.value))
    c1e = _cmp_shift(l1, ev, m1)
    if c1e != Cmp.GREATER:
        return G(2 * (l1.value - ev - m1.value))
    c1z = _cmp_shift(l1, zv, m1)
    c2e = _cmp_shift(l2, ev, m2)
    if c1z != Cmp.GREATER and c2e != Cmp.LESS:
        return G(l1.value + m2.value - m1.value - l2.value)
    if c1z != Cmp.LESS and c2e != Cmp.LESS:
        return G(zv + m2.value - l2.value)
    if c1z != Cmp.GREATER and c2e != Cmp.GREATER:
        return G(l1.value - m1.value - ev)
    return G(zv - ev)
