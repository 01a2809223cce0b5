"""Text and JSON forms of the domain objects.

Element strings are "0", "t:<v>" or "g:<v>" with an exact integer,
fraction or decimal value; vectors are bracketed comma lists.  JSON
objects use 1-based index keys ("1,2") for presentation cross entries.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .errors import ParseError
from .quadratic import Companion, QuadraticForm, QuadraticPair, default_companion
from .semiring import Elem, ValueGroup, group_from_name
from .tmodule import Vector

format_element = str
parse_element = Elem.parse
format_vector = str
parse_vector = Vector.parse


def form_to_json(q: QuadraticForm) -> dict:
    upper = {}
    for i in range(q.rank):
        for j in range(i + 1, q.rank):
            e = q.beta(i, j)
            if not e.is_zero:
                upper[f"{i + 1},{j + 1}"] = str(e)
    return {"rank": q.rank, "diag": [str(e) for e in q.diag], "upper": upper}


def form_from_json(obj: Any) -> QuadraticForm:
    if not isinstance(obj, dict):
        raise ParseError("form must be a JSON object")
    try:
        rank = int(obj["rank"])
        diag = [Elem.parse(s) for s in obj["diag"]]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"form is missing fields: {exc}") from None
    if len(diag) != rank:
        raise ParseError("form diag length does not match rank")
    upper = {}
    for key, val in (obj.get("upper") or {}).items():
        try:
            i_s, j_s = key.split(",")
            i, j = int(i_s) - 1, int(j_s) - 1
        except ValueError:
            raise ParseError(f"malformed upper index key {key!r}") from None
        if not (0 <= i < j < rank):
            raise ParseError(f"upper index {key!r} out of range for rank {rank}")
        upper[(i, j)] = Elem.parse(val)
    return QuadraticForm.make(tuple(diag), upper)


def companion_to_json(b: Companion) -> dict:
    return {"rank": b.rank,
            "entries": [[str(e) for e in row] for row in b.entries]}


def companion_from_json(obj: Any) -> Companion:
    if not isinstance(obj, dict):
        raise ParseError("companion must be a JSON object")
    try:
        rows = [[Elem.parse(s) for s in row] for row in obj["entries"]]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"companion is missing fields: {exc}") from None
    return Companion.from_rows(rows)


def rational_to_str(x: Fraction) -> str:
    return str(x)


def parse_rational(s: Any) -> Fraction:
    if isinstance(s, bool):
        raise ParseError(f"not a rational: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"malformed rational {s!r}") from None
    raise ParseError(f"not a rational: {s!r}")


class Instance:
    """A parsed instance file: group plus optional form/companion/vectors
    and stropicalization blocks."""

    def __init__(self, group: ValueGroup, form=None, companion=None,
                 vectors=None, base_change=None, prime=None, rational_form=None):
        self.group = group
        self.form = form
        self.companion = companion
        self.vectors = vectors or {}
        self.base_change = base_change
        self.prime = prime
        self.rational_form = rational_form

    def pair(self) -> QuadraticPair:
        if self.form is None:
            raise ParseError("instance has no form")
        b = self.companion if self.companion is not None else default_companion(self.form)
        return QuadraticPair(self.form, b)

    def to_json(self) -> dict:
        out: dict = {"group": {"kind": self.group.kind}}
        if self.form is not None:
            out["form"] = form_to_json(self.form)
        if self.companion is not None:
            out["companion"] = companion_to_json(self.companion)
        if self.vectors:
            out["vectors"] = {k: str(v) for k, v in sorted(self.vectors.items())}
        if self.base_change is not None:
            out["base_change"] = [[str(v) for v in row] for row in self.base_change]
        if self.prime is not None:
            out["prime"] = self.prime
        if self.rational_form is not None:
            out["rational_form"] = {k: str(v) for k, v in sorted(self.rational_form.items())}
        return out

    @staticmethod
    def from_json(obj: Any) -> "Instance":
        if not isinstance(obj, dict):
            raise ParseError("instance must be a JSON object")
        group_spec = obj.get("group", {"kind": "int"})
        group = group_from_name(group_spec.get("kind", "int"))
        form = form_from_json(obj["form"]) if "form" in obj else None
        companion = companion_from_json(obj["companion"]) if "companion" in obj else None
        vectors = {k: Vector.parse(v) for k, v in (obj.get("vectors") or {}).items()}
        base_change = None
        if "base_change" in obj:
            base_change = tuple(tuple(parse_rational(v) for v in row)
                                for row in obj["base_change"])
        prime = int(obj["prime"]) if "prime" in obj else None
        rational_form = None
        if "rational_form" in obj:
            rational_form = {k: parse_rational(v)
                             for k, v in obj["rational_form"].items()}
        return Instance(group, form, companion, vectors, base_change, prime,
                        rational_form)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @staticmethod
    def loads(text: str) -> "Instance":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
        return Instance.from_json(obj)
