"""Quadratic forms and bilinear companions on free supertropical modules.

A form is kept as its upper-triangular base presentation: diagonal
coefficients alpha_i and cross coefficients beta_ij (i < j).  Evaluation,
companions, binary pullback, the quasilinear/rigid decomposition and the
isotropy predicates all work from that presentation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping

from .errors import PreconditionError, RankMismatchError
from .semiring import ZERO, Elem, esum, nu_le
from .tmodule import Vector, zero_vector


def _upper_size(rank: int) -> int:
    return rank * (rank - 1) // 2


def _upper_index(rank: int, i: int, j: int) -> int:
    # row-major position of (i, j), i < j, within the strict upper triangle
    return i * (2 * rank - i - 3) // 2 + j - 1


@dataclass(frozen=True, slots=True)
class QuadraticForm:
    rank: int
    diag: tuple[Elem, ...]
    upper: tuple[Elem, ...]  # entries (i, j) with i < j, row-major

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise PreconditionError("rank must be positive")
        if len(self.diag) != self.rank or len(self.upper) != _upper_size(self.rank):
            raise PreconditionError("presentation does not match rank")

    @staticmethod
    def make(diag: tuple[Elem, ...] | list[Elem], upper: Mapping[tuple[int, int], Elem] | None = None) -> "QuadraticForm":
        diag = tuple(diag)
        rank = len(diag)
        entries = [ZERO] * _upper_size(rank)
        for (i, j), e in (upper or {}).items():
            if not (0 <= i < j < rank):
                raise PreconditionError(f"bad upper index {(i, j)} for rank {rank}")
            entries[_upper_index(rank, i, j)] = e
        return QuadraticForm(rank, diag, tuple(entries))

    def alpha(self, i: int) -> Elem:
        return self.diag[i]

    def beta(self, i: int, j: int) -> Elem:
        if i == j:
            raise PreconditionError("beta is defined for distinct indices")
        if i > j:
            i, j = j, i
        return self.upper[_upper_index(self.rank, i, j)]

    def monomials(self, x: Vector):
        """The monomials alpha_i x_i^2 and beta_ij x_i x_j, tagged by index set."""
        if x.rank != self.rank:
            raise RankMismatchError(f"rank mismatch: form {self.rank}, vector {x.rank}")
        out = []
        for i in range(self.rank):
            out.append(((i,), self.diag[i] * x[i].square()))
        for i in range(self.rank):
            for j in range(i + 1, self.rank):
                out.append(((i, j), self.beta(i, j) * x[i] * x[j]))
        return out

    def eval(self, x: Vector) -> Elem:
        return esum(m for _, m in self.monomials(x))

    @property
    def is_diagonal(self) -> bool:
        return all(e.is_zero for e in self.upper)

    def quasilinear_part(self) -> "QuadraticForm":
        return QuadraticForm(self.rank, self.diag, (ZERO,) * len(self.upper))

    def rigid_complement(self) -> "QuadraticForm":
        return QuadraticForm(self.rank, (ZERO,) * self.rank, self.upper)

    def __str__(self) -> str:
        parts = [f"diag=[{', '.join(str(e) for e in self.diag)}]"]
        cross = {f"{i + 1},{j + 1}": str(self.beta(i, j))
                 for i in range(self.rank) for j in range(i + 1, self.rank)
                 if not self.beta(i, j).is_zero}
        if cross:
            parts.append("upper=" + str(cross))
        return "QuadraticForm(" + ", ".join(parts) + ")"


def binary_form(a1: Elem, alpha: Elem, a2: Elem) -> QuadraticForm:
    """The rank-2 presentation [a1, alpha; a2]."""
    return QuadraticForm.make((a1, a2), {(0, 1): alpha})


def eval_q(q: QuadraticForm, x: Vector) -> Elem:
    return q.eval(x)


def ql_decompose(q: QuadraticForm) -> tuple[QuadraticForm, QuadraticForm]:
    """Split into the (unique) quasilinear part and an off-diagonal complement."""
    return q.quasilinear_part(), q.rigid_complement()


@dataclass(frozen=True, slots=True)
class Companion:
    rank: int
    entries: tuple[tuple[Elem, ...], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rank or any(len(r) != self.rank for r in self.entries):
            raise PreconditionError("companion matrix does not match rank")
        for i in range(self.rank):
            for j in range(i + 1, self.rank):
                if self.entries[i][j] != self.entries[j][i]:
                    raise PreconditionError(f"companion matrix not symmetric at {(i, j)}")

    def entry(self, i: int, j: int) -> Elem:
        return self.entries[i][j]

    def eval(self, x: Vector, y: Vector) -> Elem:
        if x.rank != self.rank or y.rank != self.rank:
            raise RankMismatchError("rank mismatch in bilinear evaluation")
        return esum(
            self.entries[i][j] * x[i] * y[j]
            for i in range(self.rank)
            for j in range(self.rank)
        )

    @staticmethod
    def from_rows(rows) -> "Companion":
        entries = tuple(tuple(r) for r in rows)
        return Companion(len(entries), entries)


def eval_b(b: Companion, x: Vector, y: Vector) -> Elem:
    return b.eval(x, y)


def default_companion(q: QuadraticForm) -> Companion:
    """Zero diagonal, cross entries copied from the presentation.

    This always satisfies the companion law: expanding q(x+y) coordinatewise
    and using (a+b)^2 = a^2 + b^2 gives exactly q(x) + q(y) + sum of the
    beta_ij (x_i y_j + x_j y_i) terms.
    """
    n = q.rank
    rows = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            rows[i][j] = rows[j][i] = q.beta(i, j)
    return Companion.from_rows(rows)


@dataclass(frozen=True, slots=True)
class QuadraticPair:
    form: QuadraticForm
    companion: Companion

    def __post_init__(self) -> None:
        if self.form.rank != self.companion.rank:
            raise RankMismatchError("form and companion rank differ")
        for i in range(self.form.rank):
            if not nu_le(self.companion.entry(i, i), self.form.alpha(i)):
                raise PreconditionError(
                    f"companion diagonal exceeds form diagonal at index {i}"
                )

    @property
    def rank(self) -> int:
        return self.form.rank

    def q(self, x: Vector) -> Elem:
        return self.form.eval(x)

    def b(self, x: Vector, y: Vector) -> Elem:
        return self.companion.eval(x, y)


def pair_with_default(q: QuadraticForm) -> QuadraticPair:
    return QuadraticPair(q, default_companion(q))


def binary_pair(a1: Elem, alpha: Elem, a2: Elem) -> QuadraticPair:
    return pair_with_default(binary_form(a1, alpha, a2))


def presentation(pair: QuadraticPair, x: Vector, y: Vector) -> tuple[Elem, Elem, Elem]:
    """The triple (q(x), q(y), b(x, y)) presenting the pair on the span of x, y."""
    return pair.q(x), pair.q(y), pair.b(x, y)


def pullback(pair: QuadraticPair, x: Vector, y: Vector) -> QuadraticPair:
    """Restrict the pair to the span of x and y as a binary pair.

    The pulled-back form is presented by alpha_1 = q(x), alpha_2 = q(y) and
    cross coefficient b(x, y); the pulled-back bilinear form keeps the
    diagonal values b(x, x), b(y, y).
    """
    a1, a2, alpha = presentation(pair, x, y)
    q2 = binary_form(a1, alpha, a2)
    b2 = Companion.from_rows(
        ((pair.b(x, x), alpha), (alpha, pair.b(y, y)))
    )
    return QuadraticPair(q2, b2)


class Isotropy(enum.Enum):
    ISOTROPIC = "Isotropic"
    G_ISOTROPIC = "GIsotropic"
    G_ANISOTROPIC = "GAnisotropic"
    ZERO_VECTOR = "ZeroVector"  # the zero vector counts as both


def isotropy(q: QuadraticForm, x: Vector) -> Isotropy:
    if x.is_zero:
        return Isotropy.ZERO_VECTOR
    v = q.eval(x)
    if v.is_zero:
        return Isotropy.ISOTROPIC
    return Isotropy.G_ISOTROPIC if v.is_ghost else Isotropy.G_ANISOTROPIC


def is_anisotropic(q: QuadraticForm, x: Vector) -> bool:
    """q(x) != 0; the zero vector counts as anisotropic."""
    return x.is_zero or not q.eval(x).is_zero
