"""Exact scalar arithmetic over the rationals and prime fields.

Every computation in this package runs over one of these two field kinds.
Rational elements are `fractions.Fraction` (always in lowest terms); prime
field elements are plain ints in ``range(p)``.  A `Field` instance bundles
the operations so matrix code can stay field-agnostic.
"""

from __future__ import annotations

from fractions import Fraction


class FieldError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class Field:
    """Base class; use `rationals()` or `prime_field(p)` to obtain instances."""

    kind: str
    characteristic: int

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def from_int(self, n: int):
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def fmt(self, a) -> str:
        raise NotImplementedError

    def elements(self):
        """All field elements; only available for prime fields."""
        raise FieldError("cannot enumerate an infinite field")

    def __eq__(self, other):
        return (
            isinstance(other, Field)
            and self.kind == other.kind
            and self.characteristic == other.characteristic
        )

    def __hash__(self):
        return hash((self.kind, self.characteristic))


class _Rationals(Field):
    kind = "rationals"
    characteristic = 0

    def zero(self):
        return _FRACTION_ZERO

    def one(self):
        return _FRACTION_ONE

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of 0")
        return 1 / a

    def from_int(self, n):
        return Fraction(n)

    def parse(self, text):
        return Fraction(text)

    def fmt(self, a):
        return f"{a.numerator}/{a.denominator}"

    def __repr__(self):
        return "QQ"


class _PrimeField(Field):
    kind = "prime-field"

    def __init__(self, p: int):
        if not _is_prime(p):
            raise FieldError(f"characteristic must be prime, got {p}")
        self.characteristic = p

    def zero(self):
        return 0

    def one(self):
        return 1 % self.characteristic

    def add(self, a, b):
        return (a + b) % self.characteristic

    def sub(self, a, b):
        return (a - b) % self.characteristic

    def mul(self, a, b):
        return (a * b) % self.characteristic

    def neg(self, a):
        return (-a) % self.characteristic

    def inv(self, a):
        if a % self.characteristic == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, -1, self.characteristic)

    def from_int(self, n):
        return n % self.characteristic

    def parse(self, text):
        return int(text) % self.characteristic

    def fmt(self, a):
        return str(a % self.characteristic)

    def elements(self):
        return range(self.characteristic)

    def __repr__(self):
        return f"GF({self.characteristic})"


_FRACTION_ZERO = Fraction(0)
_FRACTION_ONE = Fraction(1)

_QQ = _Rationals()
_GF_CACHE: dict[int, _PrimeField] = {}


def rationals() -> Field:
    return _QQ


def prime_field(p: int) -> Field:
    try:
        return _GF_CACHE[p]
    except KeyError:
        fld = _PrimeField(p)
        _GF_CACHE[p] = fld
        return fld


def field_from_spec(kind: str, characteristic: int | None = None) -> Field:
    """Build a field from the serialized description used by the CLI."""
    if kind == "rationals":
        return rationals()
    if kind == "prime-field":
        if characteristic is None:
            raise FieldError("prime-field spec needs a characteristic")
        return prime_field(characteristic)
    raise FieldError(f"unknown field kind {kind!r}")
