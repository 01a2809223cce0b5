"""Free modules over the supertropical semiring.

Vectors are dense fixed-length coordinate tuples; every theorem in scope
lives in rank <= 4, so no sparse representation is needed.  Indices are
0-based in this API (the JSON/CLI layer speaks 1-based).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ParseError, PreconditionError, RankMismatchError
from .semiring import ZERO, Cmp, Elem, min_order_compare, sup


@dataclass(frozen=True, slots=True)
class Vector:
    coords: tuple[Elem, ...]

    def __post_init__(self) -> None:
        if len(self.coords) == 0:
            raise PreconditionError("vectors must have positive rank")

    @property
    def rank(self) -> int:
        return len(self.coords)

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.coords)

    def support(self) -> frozenset[int]:
        return frozenset(i for i, c in enumerate(self.coords) if not c.is_zero)

    def __getitem__(self, i: int) -> Elem:
        return self.coords[i]

    def __add__(self, other: "Vector") -> "Vector":
        _check_rank(self, other)
        return Vector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def scale(self, lam: Elem) -> "Vector":
        return Vector(tuple(lam * c for c in self.coords))

    def nu(self) -> "Vector":
        return Vector(tuple(c.nu() for c in self.coords))

    def leq(self, other: "Vector") -> bool:
        _check_rank(self, other)
        return all(
            min_order_compare(a, b) in (Cmp.LESS, Cmp.EQUAL)
            for a, b in zip(self.coords, other.coords)
        )

    def sup(self, other: "Vector") -> "Vector":
        _check_rank(self, other)
        return Vector(tuple(sup(a, b) for a, b in zip(self.coords, other.coords)))

    def restrict(self, indices: Iterable[int]) -> "Vector":
        keep = set(indices)
        for i in keep:
            if not (0 <= i < self.rank):
                raise PreconditionError(f"index {i} out of range for rank {self.rank}")
        return Vector(tuple(c if i in keep else ZERO for i, c in enumerate(self.coords)))

    def with_coord(self, i: int, value: Elem) -> "Vector":
        if not (0 <= i < self.rank):
            raise PreconditionError(f"index {i} out of range for rank {self.rank}")
        return Vector(self.coords[:i] + (value,) + self.coords[i + 1 :])

    def __str__(self) -> str:
        return "[" + ", ".join(str(c) for c in self.coords) + "]"

    @staticmethod
    def parse(text: str) -> "Vector":
        s = text.strip()
        if not (s.startswith("[") and s.endswith("]")):
            raise ParseError(f"malformed vector {text!r} (expected '[...]')")
        body = s[1:-1].strip()
        if not body:
            raise ParseError("empty vector")
        return Vector(tuple(Elem.parse(part) for part in body.split(",")))

    @staticmethod
    def of(*coords: Elem) -> "Vector":
        return Vector(tuple(coords))


def _check_rank(x: Vector, y: Vector) -> None:
    if x.rank != y.rank:
        raise RankMismatchError(f"rank mismatch: {x.rank} vs {y.rank}")


def zero_vector(rank: int) -> Vector:
    return Vector((ZERO,) * rank)


def unit(rank: int, i: int, coeff: Elem | None = None) -> Vector:
    """The scaled base vector coeff * eps_i (coeff defaults to the tangible unit)."""
    if coeff is None:
        coeff = Elem.tangible(0)
    return zero_vector(rank).with_coord(i, coeff)


def vec_add(x: Vector, y: Vector) -> Vector:
    return x + y


def scalar_mul(lam: Elem, x: Vector) -> Vector:
    return x.scale(lam)


def vec_leq(x: Vector, y: Vector) -> bool:
    return x.leq(y)


def vec_sup(x: Vector, y: Vector) -> Vector:
    return x.sup(y)


def restrict(x: Vector, indices: Iterable[int]) -> Vector:
    return x.restrict(indices)


def combine(lam: Elem, x: Vector, mu: Elem, y: Vector) -> Vector:
    """lam*x + mu*y."""
    _check_rank(x, y)
    return x.scale(lam) + y.scale(mu)


def all_vectors(rank: int, pool: Sequence[Elem]):
    """Iterate the full coordinate grid pool^rank (desk-scale enumeration)."""
    if rank == 1:
        for a in pool:
            yield Vector((a,))
        return
    for rest in all_vectors(rank - 1, pool):
        for a in pool:
            yield Vector((a,) + rest.coords)
