"""Normalized points of projective space over a field."""

from __future__ import annotations

from .errors import AlgebraError
from .fields import Field


class ProjPoint:
    """Point of P^n with the last nonzero coordinate scaled to 1.

    Coordinates are raw values of ``field``; equality is coordinate equality.
    """

    __slots__ = ("field", "coords")

    def __init__(self, field: Field, coords, normalized: bool = False):
        self.field = field
        coords = tuple(coords)
        if not normalized:
            idx = next((i for i in range(len(coords) - 1, -1, -1)
                        if not field.is_zero(coords[i])), None)
            if idx is None:
                raise AlgebraError("the zero vector is not a projective point")
            inv = field.inv(coords[idx])
            coords = tuple(field.mul(inv, c) for c in coords)
        self.coords = coords

    @classmethod
    def from_ints(cls, field: Field, *values):
        return cls(field, [field.from_int(v) if isinstance(v, int) else field.from_fraction(v)
                           for v in values])

    @classmethod
    def parse(cls, field: Field, text: str):
        """Parse ``"a:b:c"``; each coordinate in the element grammar."""
        return cls(field, [field.parse(part) for part in text.split(":")])

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __eq__(self, other):
        return (isinstance(other, ProjPoint) and self.field == other.field
                and self.coords == other.coords)

    def __hash__(self):
        return hash(self.coords)

    def sort_key(self):
        return (self.field.degree, tuple(self.field.sort_key(c) for c in self.coords))

    def __str__(self):
        return ":".join(self.field.to_str(c) for c in self.coords)

    def __repr__(self):
        return f"ProjPoint({self.field.spec}, {self})"

    def map(self, func, target: Field) -> "ProjPoint":
        return ProjPoint(target, [func(c) for c in self.coords])

    @property
    def is_at_infinity(self):
        return self.field.is_zero(self.coords[-1])
