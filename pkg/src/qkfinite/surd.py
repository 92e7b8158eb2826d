"""Exact arithmetic in a real quadratic field Q(sqrt(N))."""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from math import isqrt


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot coerce {type(x).__name__} into Q(sqrt N)")


@total_ordering
class Surd:
    """``a + b*sqrt(n)`` with rational ``a, b`` and a positive integer ``n``.

    If ``n`` is a perfect square the element is folded into ``a`` and stored
    with ``b = 0``. Mixing elements of different fields raises ``ValueError``
    unless one side is rational.
    """

    __slots__ = ("a", "b", "n")

    def __init__(self, a=0, b=0, n: int = 1):
        if n < 1:
            raise ValueError("radicand must be a positive integer")
        a, b = _as_fraction(a), _as_fraction(b)
        r = isqrt(n)
        if r * r == n:
            a, b = a + b * r, Fraction(0)
        self.a, self.b, self.n = a, b, n

    @classmethod
    def sqrt(cls, n: int) -> Surd:
        return cls(0, 1, n)

    def _coerce(self, other) -> Surd:
        if isinstance(other, Surd):
            if other.b and self.b and other.n != self.n:
                raise ValueError(f"mixing Q(sqrt {self.n}) and Q(sqrt {other.n})")
            return other
        return Surd(_as_fraction(other), 0, self.n)

    def _field(self, other: Surd) -> int:
        return self.n if self.b else other.n

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return Surd(self.a + o.a, self.b + o.b, self._field(o))

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b, self.n)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        n = self._field(o)
        return Surd(self.a * o.a + self.b * o.b * n, self.a * o.b + self.b * o.a, n)

    __rmul__ = __mul__

    def conjugate(self) -> Surd:
        return Surd(self.a, -self.b, self.n)

    def field_norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.n

    def __truediv__(self, other):
        o = self._coerce(other)
        nm = o.field_norm()
        if nm == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt N)")
        return self * o.conjugate() * Surd(1 / nm, 0, self.n)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def sign(self) -> int:
        """Exact sign of ``a + b sqrt(n)``."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0 or sa == sb:
            return sa or sb
        if sa == 0:
            return sb
        # opposite signs: compare a^2 with b^2 n
        diff = self.a * self.a - self.b * self.b * self.n
        return sa if diff > 0 else (sb if diff < 0 else 0)

    def __eq__(self, other):
        try:
            return (self - other).sign() == 0
        except (TypeError, ValueError):
            return NotImplemented

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __hash__(self):
        return hash((self.a, self.b if self.b else 0, self.n if self.b else 1))

    def __floor__(self) -> int:
        """Exact floor, computed by bracketing with integer square roots."""
        if not self.b:
            return self.a.numerator // self.a.denominator
        # b sqrt(n) = s sqrt(b^2 n) with s = sign(b)
        t = self.b * self.b * self.n
        root = isqrt(t.numerator // t.denominator)
        approx = self.a + (root if self.b > 0 else -root)
        k = approx.numerator // approx.denominator - 2
        while self - (k + 1) >= 0:
            k += 1
        while self - k < 0:
            k -= 1
        return k

    def __ceil__(self) -> int:
        return -(-self).__floor__()

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * self.n ** 0.5

    def is_rational(self) -> bool:
        return self.b == 0

    def __repr__(self) -> str:
        if not self.b:
            return f"Surd({self.a})"
        return f"Surd({self.a} + {self.b}*sqrt({self.n}))"

    def to_json(self) -> list[str]:
        return [str(self.a), str(self.b)]
