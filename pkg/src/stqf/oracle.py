"""Independent brute-force verifiers.

These decide quasilinearity, q-minimality and companion validity directly
from the definitions over breakpoint-complete witness grids.  They are the
ground truth every closed-form classifier in this package is tested
against, so they deliberately share no logic with those classifiers: the
only ingredients are semiring arithmetic and eval_q/eval_b.

Grid completeness: the functions being probed are piecewise monomial in
one scalar, so their region structure is constant between consecutive
breakpoints.  The grids carry every breakpoint (both sorts), one tangible
sample inside every open interval, and one sample beyond each end; for the
discrete group, half-valued breakpoints are replaced by their two integer
neighbours.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import PreconditionError
from .quadratic import QuadraticForm, QuadraticPair, presentation
from .semiring import G, T, ZERO, Elem, ValueGroup, esum
from .tmodule import Vector, zero_vector

_ORACLE_RANK_BOUND = 8


def witness_values(breaks: Iterable[Fraction | int], group: ValueGroup,
                   refine: bool = False) -> list:
    """Group values covering the given breakpoints, gaps, and both ends."""
    pts: set = set()
    for b in breaks:
        f = Fraction(b)
        if group.contains(f):
            pts.add(group.floor(f))
        else:
            pts.add(group.floor(f))
            pts.add(group.ceil(f))
    if not pts:
        pts = {0}
    ordered = sorted(pts)
    out = set(ordered)
    out.add(ordered[0] - 1)
    out.add(ordered[-1] + 1)
    if refine:
        out.add(ordered[0] - 2)
        out.add(ordered[-1] + 2)
    for a, b in zip(ordered, ordered[1:]):
        if group.is_discrete:
            if a + 1 < b:
                out.add(a + 1)
                if refine:
                    out.add(b - 1)
        else:
            mid = Fraction(a + b, 2)
            out.add(mid)
            if refine:
                out.add(Fraction(a + mid, 2))
                out.add(Fraction(mid + b, 2))
    return sorted(out)


def oracle_quasilinear(pair: QuadraticPair, x: Vector, y: Vector,
                       group: ValueGroup, refine: bool = False) -> bool:
    """Decide whether q is quasilinear on the span of x and y.

    Tests q(lam*x + mu*y) = q(lam*x) + q(mu*y) with mu pinned to the two
    unit-sorted elements (every other mu reduces to these by tangible
    scaling, which preserves the identity exactly) and lam running over the
    witness grid in both sorts.
    """
    q = pair.form
    a1, a2, alpha = presentation(pair, x, y)
    breaks: set = {0}
    if not a1.is_zero and not alpha.is_zero:
        breaks.add(Fraction(alpha.value - a1.value))
    if not a2.is_zero and not alpha.is_zero:
        breaks.add(Fraction(a2.value - alpha.value))
    if not a1.is_zero and not a2.is_zero:
        breaks.add(Fraction(a2.value - a1.value, 2))
    for xi, yi in zip(x.coords, y.coords):
        if not xi.is_zero and not yi.is_zero:
            breaks.add(Fraction(yi.value - xi.value))
    lam_values = witness_values(breaks, group, refine=refine)
    for mu in (T(0), G(0)):
        muy = y.scale(mu)
        q_muy = q.eval(muy)
        for w in lam_values:
            for lam in (T(w), G(w)):
                lamx = x.scale(lam)
                if q.eval(lamx + muy) != q.eval(lamx) + q_muy:
                    return False
    return True


@dataclass(frozen=True, slots=True)
class MinimalityVerdict:
    minimal: bool
    witness: Vector | None
    rule: str


def _coordinate_profile(q: QuadraticForm, x: Vector, i: int) -> tuple[Elem, Elem, Elem]:
    """Coefficients (A, B, C) with q(x[i -> c]) = A c^2 + B c + C exactly."""
    a = q.alpha(i)
    b = esum(q.beta(i, j) * x[j] for j in range(q.rank) if j != i)
    c = q.eval(x.with_coord(i, ZERO))
    return a, b, c


def _lowering_candidates(q: QuadraticForm, x: Vector, i: int,
                         group: ValueGroup, refine: bool) -> list[Elem]:
    """Every one-coordinate lowering that could preserve q(x), plus grid fill."""
    xi = x[i]
    a, b, c = _coordinate_profile(q, x, i)
    t = q.eval(x)
    crit: set = set()
    va = a.value if not a.is_zero else None
    vb = b.value if not b.is_zero else None
    vc = c.value if not c.is_zero else None
    vt = t.value if not t.is_zero else None
    if va is not None and vb is not None:
        crit.add(Fraction(vb - va))
    if va is not None and vc is not None:
        crit.add(Fraction(vc - va, 2))
    if vb is not None and vc is not None:
        crit.add(Fraction(vc - vb))
    if vt is not None:
        if va is not None:
            crit.add(Fraction(vt - va, 2))
        if vb is not None:
            crit.add(Fraction(vt - vb))
    crit.add(Fraction(xi.value))
    values = [w for w in witness_values(crit, group, refine=refine) if w < xi.value]
    out: list[Elem] = [ZERO]
    for w in values:
        out.append(T(w))
        out.append(G(w))
    if xi.is_ghost:
        out.append(T(xi.value))
    return out


def oracle_minimal(q: QuadraticForm, x: Vector, group: ValueGroup,
                   refine: bool = False) -> MinimalityVerdict:
    """Exact q-minimality by one-coordinate lowerings.

    If any x' < x has q(x') = q(x), then lowering a single coordinate of x
    to the corresponding coordinate of x' already works (q is monotonic, so
    the intermediate vector is squeezed), hence the search space below is
    complete.  Every returned witness is re-verified against the ordering
    and the q-values before it leaves this function.
    """
    if q.rank > _ORACLE_RANK_BOUND:
        raise PreconditionError(f"oracle_minimal is bounded to rank {_ORACLE_RANK_BOUND}")
    if x.rank != q.rank:
        raise PreconditionError("vector rank does not match form rank")
    if x.is_zero:
        return MinimalityVerdict(True, None, "vacuous")
    qx = q.eval(x)
    if qx.is_zero:
        return _verified(q, x, zero_vector(x.rank), "isotropic")
    for i in sorted(x.support()):
        for cand in _lowering_candidates(q, x, i, group, refine):
            xp = x.with_coord(i, cand)
            if q.eval(xp) == qx:
                return _verified(q, x, xp, "oracle")
    return MinimalityVerdict(True, None, "oracle")


def _verified(q: QuadraticForm, x: Vector, witness: Vector, rule: str) -> MinimalityVerdict:
    if not witness.leq(x) or witness == x or q.eval(witness) != q.eval(x):
        raise PreconditionError("internal error: invalid minimality witness")
    return MinimalityVerdict(False, witness, rule)


def _coefficient_grid(values: Sequence, group: ValueGroup, cap: int,
                      refine: bool) -> list[Elem]:
    base = witness_values({Fraction(u - w) for u in values for w in values}
                          | {Fraction(u - w, 2) for u in values for w in values}
                          | {Fraction(v) for v in values},
                          group, refine=refine)
    if len(base) > cap and not refine:
        step = len(base) / cap
        keep = sorted({base[int(k * step)] for k in range(cap)} | {base[0], base[-1]})
        base = keep
    pool: list[Elem] = [ZERO]
    for w in base:
        pool.append(T(w))
        pool.append(G(w))
    return pool


def oracle_companion_valid(pair: QuadraticPair, group: ValueGroup,
                           per_axis: int = 5, refine: bool = False) -> bool:
    """Check q(x+y) = q(x) + q(y) + b(x, y) over a coefficient-threshold grid.

    The grid is built from all pairwise differences (and half-differences)
    of the nonzero coefficient values of the pair; ``per_axis`` caps the
    number of distinct coordinate values per axis to keep the pair loop at
    desk scale.  Refining the grid must not change the verdict (this is the
    meta-test run by the acceptance suite).
    """
    q, b = pair.form, pair.companion
    coeffs = [e.value for e in q.diag if not e.is_zero]
    coeffs += [e.value for e in q.upper if not e.is_zero]
    coeffs += [b.entry(i, j).value for i in range(q.rank) for j in range(i, q.rank)
               if not b.entry(i, j).is_zero]
    if not coeffs:
        coeffs = [0]
    pool = _coefficient_grid(coeffs, group, per_axis, refine)
    vectors = list(_grid_vectors(q.rank, pool))
    for x in vectors:
        qx = q.eval(x)
        for y in vectors:
            if q.eval(x + y) != qx + q.eval(y) + b.eval(x, y):
                return False
    return True


def _grid_vectors(rank: int, pool: Sequence[Elem]):
    if rank == 1:
        for a in pool:
            yield Vector((a,))
        return
    for rest in _grid_vectors(rank - 1, pool):
        for a in pool:
            yield Vector((a,) + rest.coords)
