"""Supertropicalization of binary rational quadratic forms.

A negated p-adic valuation, composed with the tangible embedding, sends
exact rationals to supertropical scalars over the integer value group
(max convention: v(ab) = v(a) + v(b), v(a+b) <= max).  Applying it to the
coefficients of a rational form, rewritten in a new base, yields a binary
supertropical pair whose classification depends on the base change.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError
from .quadratic import Companion, QuadraticPair, binary_form
from .semiring import INTEGERS, T, ZERO, Elem, ValueGroup
from .trig import PairClass, classify_presentation

Rat = Fraction


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def padic_valuation(a: Fraction, p: int) -> int:
    """v_p of a nonzero rational (negative for denominators divisible by p)."""
    if a == 0:
        raise PreconditionError("the p-adic valuation of 0 is not a group value")
    v = 0
    n = abs(a.numerator)
    while n % p == 0:
        v += 1
        n //= p
    d = a.denominator
    while d % p == 0:
        v -= 1
        d //= p
    return v


@dataclass(frozen=True, slots=True)
class Supervaluation:
    """Tangible very strong supervaluation on the rationals: a |-> T(-v_p(a))."""

    prime: int

    def __post_init__(self) -> None:
        if not _is_prime(self.prime):
            raise PreconditionError(f"{self.prime} is not prime")

    @property
    def group(self) -> ValueGroup:
        return INTEGERS

    def value(self, a) -> Elem:
        a = _as_fraction(a)
        if a == 0:
            return ZERO
        return T(-padic_valuation(a, self.prime))

    def nu_value(self, a) -> Fraction | None:
        """The covered valuation v = e*phi, as a raw value (None for 0)."""
        a = _as_fraction(a)
        if a == 0:
            return None
        return -padic_valuation(a, self.prime)


def supervaluation_eval(sv: Supervaluation, a) -> Elem:
    return sv.value(a)


def square_equivalent(u, w, group: ValueGroup) -> bool:
    """Whether two group values differ by twice a group value."""
    return group.is_nu_square(Fraction(u) - Fraction(w))


@dataclass(frozen=True, slots=True)
class RationalForm:
    """Binary rational form a1*x1^2 + alpha*x1*x2 + a2*x2^2 plus a base change.

    The rows of the base change matrix are the new base vectors written in
    the old base; the determinant must not vanish.
    """

    a1: Fraction
    alpha: Fraction
    a2: Fraction
    base_change: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]

    @staticmethod
    def make(a1, alpha, a2, base_change) -> "RationalForm":
        rows = tuple(tuple(_as_fraction(v) for v in row) for row in base_change)
        if len(rows) != 2 or any(len(r) != 2 for r in rows):
            raise PreconditionError("base change must be a 2x2 matrix")
        rf = RationalForm(_as_fraction(a1), _as_fraction(alpha), _as_fraction(a2), rows)
        if rf.determinant == 0:
            raise PreconditionError("base change matrix is singular")
        return rf

    @property
    def determinant(self) -> Fraction:
        (a, b), (c, d) = self.base_change
        return a * d - b * c

    def transformed_coefficients(self) -> tuple[Fraction, Fraction, Fraction]:
        """Exact rational coefficients of the form in the new base.

        The diagonal entries are the values q(v1'), q(v2').  The cross
        entry drops the factor 2 on the diagonal contributions (the unit
        image of 2 never affects a valuation comparison, and the cross
        coefficient is only consumed through the supervaluation).
        """
        (a11, a12), (a21, a22) = self.base_change
        q1 = a11 * a11 * self.a1 + a11 * a12 * self.alpha + a12 * a12 * self.a2
        q2 = a21 * a21 * self.a1 + a21 * a22 * self.alpha + a22 * a22 * self.a2
        cross = (a11 * a21 * self.a1 + (a11 * a22 + a12 * a21) * self.alpha
                 + a12 * a22 * self.a2)
        return q1, cross, q2


def stropicalize_form(rf: RationalForm, sv: Supervaluation) -> QuadraticPair:
    """Apply the supervaluation to the transformed coefficients.

    The form keeps the three images directly; the companion carries
    phi(2) * phi(diagonal) on its diagonal and phi(cross) off it.
    """
    q1, cross, q2 = rf.transformed_coefficients()
    f1, fc, f2 = sv.value(q1), sv.value(cross), sv.value(q2)
    two = sv.value(2)
    q = binary_form(f1, fc, f2)
    b = Companion.from_rows(((two * f1, fc), (fc, two * f2)))
    return QuadraticPair(q, b)


def classify_stropicalization(rf: RationalForm, sv: Supervaluation) -> PairClass:
    q1, cross, q2 = rf.transformed_coefficients()
    return classify_presentation(sv.value(q1), sv.value(q2), sv.value(cross), INTEGERS)


# ---------------------------------------------------------------------------
# The two worked shapes and their closed-form case analysis
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExamplePrediction:
    """What the case analysis promises about the stropicalized pair.

    ``exact`` pins presentation entries ('alpha1', 'alpha', 'alpha2') on
    the nose; ``upper_bounds`` only bounds them from above in the nu-order;
    ``quasilinear`` is the classification claim when the case determines
    one.  ``cancellation`` reports, for the balanced hyperbolic case, how
    far the cross coefficient dropped below its generic level (None when
    it vanished entirely).
    """

    which: str
    case: str
    row_swapped: bool
    col_swapped: bool
    exact: dict[str, Elem]
    upper_bounds: dict[str, Elem]
    quasilinear: bool | None
    cancellation: int | None = None


def _nu_or_none(sv: Supervaluation, a: Fraction):
    return None if a == 0 else sv.nu_value(a)


def _cmp_opt(u, w) -> int:
    """Compare optional values with None as minus infinity."""
    if u is None and w is None:
        return 0
    if u is None:
        return -1
    if w is None:
        return 1
    return (u > w) - (u < w)


def example_case_label(rf: RationalForm, sv: Supervaluation, which: str) -> ExamplePrediction:
    if which == "A":
        return _label_hyperbolic(rf, sv)
    if which == "B":
        return _label_diagonal(rf, sv)
    raise PreconditionError(f"unknown example shape {which!r}")


def _label_hyperbolic(rf: RationalForm, sv: Supervaluation) -> ExamplePrediction:
    if rf.a1 != 0 or rf.a2 != 0 or rf.alpha == 0:
        raise PreconditionError("shape A needs a1 = a2 = 0 and a nonzero cross term")
    (a11, a12), (a21, a22) = rf.base_change
    al = rf.alpha
    main = a11 * a22 * al
    anti = a12 * a21 * al
    c = _cmp_opt(_nu_or_none(sv, main), _nu_or_none(sv, anti))
    d1 = sv.value(a11 * a12 * al)
    d2 = sv.value(a21 * a22 * al)
    if c > 0:
        return ExamplePrediction("A", "I", False, False,
                                 {"alpha1": d1, "alpha": sv.value(main), "alpha2": d2},
                                 {}, quasilinear=False)
    if c < 0:
        return ExamplePrediction("A", "II", False, False,
                                 {"alpha1": d1, "alpha": sv.value(anti), "alpha2": d2},
                                 {}, quasilinear=False)
    # balanced: the cross coefficient may cancel below the common level
    _, cross, _ = rf.transformed_coefficients()
    level = sv.nu_value(main)
    cancellation = None if cross == 0 else int(level - sv.nu_value(cross))
    return ExamplePrediction("A", "III", False, False,
                             {"alpha1": d1, "alpha2": d2},
                             {"alpha": sv.value(main).nu()},
                             quasilinear=True, cancellation=cancellation)


def _label_diagonal(rf: RationalForm, sv: Supervaluation) -> ExamplePrediction:
    if rf.alpha != 0 or rf.a1 == 0 or rf.a2 == 0:
        raise PreconditionError("shape B needs a diagonal form with nonzero entries")
    rows = rf.base_change
    ca, cb = rf.a1, rf.a2

    def row_cmp(row) -> int:
        return _cmp_opt(_nu_or_none(sv, row[0] * row[0] * ca),
                        _nu_or_none(sv, row[1] * row[1] * cb))

    c1, c2 = row_cmp(rows[0]), row_cmp(rows[1])
    col_swapped = False
    if (c1, c2) in ((-1, -1), (0, -1), (-1, 0), (-1, 1)):
        # exchange the roles of the two diagonal coefficients
        rows = tuple((r[1], r[0]) for r in rows)
        ca, cb = cb, ca
        c1, c2 = -c1, -c2
        col_swapped = True
    row_swapped = False
    if (c1, c2) in ((1, 0), (-1, 0)):
        rows = (rows[1], rows[0])
        c1, c2 = c2, c1
        row_swapped = True

    r1, r2 = rows
    if (c1, c2) == (1, 1):
        case = "I"
        exact = {"alpha1": sv.value(r1[0] * r1[0] * ca),
                 "alpha": sv.value(r1[0] * r2[0] * ca),
                 "alpha2": sv.value(r2[0] * r2[0] * ca)}
        bounds: dict[str, Elem] = {}
        ql: bool | None = True
    elif (c1, c2) == (0, 1):
        case = "II"
        exact = {"alpha": sv.value(r1[0] * r2[0] * ca),
                 "alpha2": sv.value(r2[0] * r2[0] * ca)}
        bounds = {"alpha1": sv.value(r1[0] * r1[0] * ca).nu()}
        ql = None
    elif (c1, c2) == (0, 0):
        case = "III"
        exact = {}
        bounds = {"alpha1": sv.value(r1[0] * r1[0] * ca).nu(),
                  "alpha2": sv.value(r2[0] * r2[0] * ca).nu(),
                  "alpha": sv.value(r1[0] * r2[0] * ca).nu()}
        ql = None
    elif (c1, c2) == (1, -1):
        case = "IV"
        exact = {"alpha1": sv.value(r1[0] * r1[0] * ca),
                 "alpha2": sv.value(r2[1] * r2[1] * cb)}
        bounds = {"alpha": (sv.value(r1[0] * r2[0] * ca)
                            + sv.value(r1[1] * r2[1] * cb)).nu()}
        ql = True
    else:  # pragma: no cover - the swaps above exhaust the nine sign patterns
        raise PreconditionError(f"unreachable row comparison pattern {(c1, c2)}")

    if row_swapped:
        swap = {"alpha1": "alpha2", "alpha2": "alpha1", "alpha": "alpha"}
        exact = {swap[k]: v for k, v in exact.items()}
        bounds = {swap[k]: v for k, v in bounds.items()}
    return ExamplePrediction("B", case, row_swapped, col_swapped, exact, bounds, ql)


def verify_prediction(pred: ExamplePrediction, rf: RationalForm,
                      sv: Supervaluation) -> bool:
    """Check a case prediction against the computed stropicalization."""
    from .semiring import nu_le

    q1, cross, q2 = rf.transformed_coefficients()
    got = {"alpha1": sv.value(q1), "alpha": sv.value(cross), "alpha2": sv.value(q2)}
    for key, want in pred.exact.items():
        if got[key] != want:
            return False
    for key, bound in pred.upper_bounds.items():
        if not nu_le(got[key], bound):
            return False
    if pred.quasilinear is not None:
        cls = classify_presentation(got["alpha1"], got["alpha2"], got["alpha"], INTEGERS)
        if cls.quasilinear != pred.quasilinear:
            return False
    return True
