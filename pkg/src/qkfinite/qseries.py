"""Rational functions of q, truncated nilpotent and Novikov series.

Polynomial arithmetic is delegated to FLINT (``fmpq_poly``); everything on
top of it (canonical forms, orders at infinity, series) is exact.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from flint import fmpq, fmpq_poly, fmpz_poly

INF = math.inf  # order of the zero function


def _to_fmpq(x) -> fmpq:
    if isinstance(x, fmpq):
        return x
    if isinstance(x, str):
        x = Fraction(x)
    x = Fraction(x)
    return fmpq(x.numerator, x.denominator)


def _poly(coeffs) -> fmpq_poly:
    if isinstance(coeffs, fmpq_poly):
        return coeffs
    if isinstance(coeffs, (int, Fraction, fmpq, str)):
        coeffs = [coeffs]
    return fmpq_poly([_to_fmpq(c) for c in coeffs])


def _frac(c: fmpq) -> Fraction:
    return Fraction(int(c.p), int(c.q))


class RationalQ:
    """An element of Q(q) kept as ``num/den`` with ``den`` monic and ``gcd = 1``.

    Coefficients are listed from the constant term upward.
    """

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=1):
        n, d = _poly(num), _poly(den)
        if d.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num, self.den = _canonical(n, d)

    @classmethod
    def _raw(cls, num: fmpq_poly, den: fmpq_poly) -> RationalQ:
        obj = object.__new__(cls)
        obj.num, obj.den = _canonical(num, den)
        return obj

    @classmethod
    def q(cls, power: int = 1) -> RationalQ:
        """The monomial ``q**power`` (negative powers allowed)."""
        if power >= 0:
            return cls._raw(fmpq_poly([0] * power + [1]), fmpq_poly([1]))
        return cls._raw(fmpq_poly([1]), fmpq_poly([0] * (-power) + [1]))

    def _coerce(self, other) -> RationalQ:
        if isinstance(other, RationalQ):
            return other
        if isinstance(other, (int, Fraction)):
            return RationalQ(other)
        raise TypeError

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == o.den:
            return RationalQ._raw(self.num + o.num, self.den)
        return RationalQ._raw(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        obj = object.__new__(RationalQ)
        obj.num, obj.den = -self.num, self.den
        return obj

    def __sub__(self, other):
        try:
            return self + (-self._coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if self.num.is_zero() or o.num.is_zero():
            return ZERO
        return RationalQ._raw(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalQ._raw(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return (1 / self) ** (-k)
        return RationalQ._raw(self.num ** k, self.den ** k)

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((str(self.num), str(self.den)))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    @property
    def order(self) -> int | float:
        """Order of vanishing at ``q = infinity``: ``deg(den) - deg(num)``; ``inf`` for zero."""
        if self.num.is_zero():
            return INF
        return self.den.degree() - self.num.degree()

    def is_polynomial(self) -> bool:
        return self.den.degree() == 0

    def regular_at_zero(self) -> bool:
        return self.den.coeffs()[0] != 0

    def poles_at_roots_of_unity(self) -> bool:
        """True iff every root of the denominator is a root of unity."""
        if self.den.degree() == 0:
            return True
        for factor, _ in self.den.factor()[1]:
            if fmpz_poly(factor.numer().coeffs()).is_cyclotomic() == 0:
                return False
        return True

    def numerator_coeffs(self) -> list[Fraction]:
        return [_frac(c) for c in self.num.coeffs()]

    def denominator_coeffs(self) -> list[Fraction]:
        return [_frac(c) for c in self.den.coeffs()]

    def __call__(self, value):
        v = _to_fmpq(value)
        dv = self.den(v)
        if dv == 0:
            raise ZeroDivisionError(f"pole at q = {value}")
        return _frac(self.num(v) / dv)

    def __repr__(self) -> str:
        if self.den.degree() == 0:
            return f"RationalQ({self.num.str(var='q')})"
        return f"RationalQ(({self.num.str(var='q')})/({self.den.str(var='q')}))"

    def to_json(self) -> dict:
        return {"num": [str(c) for c in self.numerator_coeffs()],
                "den": [str(c) for c in self.denominator_coeffs()]}

    @classmethod
    def from_json(cls, obj) -> RationalQ:
        if isinstance(obj, (int, str)):
            return cls(Fraction(obj))
        return cls([Fraction(c) for c in obj["num"]] or [0], [Fraction(c) for c in obj.get("den", ["1"])])


def _canonical(num: fmpq_poly, den: fmpq_poly) -> tuple[fmpq_poly, fmpq_poly]:
    if num.is_zero():
        return fmpq_poly([0]), fmpq_poly([1])
    if den.degree() > 0:
        g = num.gcd(den)
        if g.degree() > 0:
            num, den = num // g, den // g
    lc = den.leading_coefficient()
    if lc != 1:
        num, den = num / lc, den / lc
    return num, den


ZERO = RationalQ(0)
ONE = RationalQ(1)


def order_at_infinity(f: RationalQ) -> int | float:
    return f.order


def euler_factor(exponents: Sequence[int]) -> RationalQ:
    """``prod_j (1 - q**a_j)``."""
    if not exponents:
        raise ValueError("need at least one exponent")
    out = ONE
    for a in exponents:
        if not isinstance(a, int) or a <= 0:
            raise ValueError(f"exponents must be positive integers, got {a!r}")
        out = out * (ONE - RationalQ.q(a))
    return out


# ---------------------------------------------------------------- matrices
# Square matrices over Q(q) are tuples of row tuples.

Matrix = tuple[tuple[RationalQ, ...], ...]


def mat_identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def mat_zero(n: int) -> Matrix:
    return tuple((ZERO,) * n for _ in range(n))


def mat(rows) -> Matrix:
    """Coerce nested numbers / RationalQ into a matrix."""
    return tuple(tuple(x if isinstance(x, RationalQ) else RationalQ(x) for x in row) for row in rows)


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(a: Matrix, c) -> Matrix:
    return tuple(tuple(x * c for x in row) for row in a)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    out = []
    for row in a:
        r = []
        for col in cols:
            acc = ZERO
            for x, y in zip(row, col):
                if x and y:
                    acc = acc + x * y
            r.append(acc)
        out.append(tuple(r))
    return tuple(out)


def mat_is_zero(a: Matrix) -> bool:
    return all(x.is_zero() for row in a for x in row)


def mat_order(a: Matrix) -> int | float:
    """Minimum order at infinity over the entries (``inf`` for the zero matrix)."""
    return min((x.order for row in a for x in row), default=INF)


def mat_inverse(a: Matrix) -> Matrix:
    n = len(a)
    w = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(a)]
    for k in range(n):
        piv = next((r for r in range(k, n) if w[r][k]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix over Q(q)")
        w[k], w[piv] = w[piv], w[k]
        inv = 1 / w[k][k]
        w[k] = [x * inv for x in w[k]]
        for r in range(n):
            if r != k and w[r][k]:
                f = w[r][k]
                w[r] = [x - f * y for x, y in zip(w[r], w[k])]
    return tuple(tuple(row[n:]) for row in w)


def mat_to_json(a: Matrix) -> list:
    return [[x.to_json() for x in row] for row in a]


def mat_from_json(obj) -> Matrix:
    return tuple(tuple(RationalQ.from_json(x) for x in row) for row in obj)


# ---------------------------------------------------------------- K(P^n)

@dataclass(frozen=True)
class NilpotentSeries:
    """``c_0 + c_1 h + ... + c_n h^n`` in ``Q(q)[h]/(h^{n+1})``."""

    coeffs: tuple[RationalQ, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("need at least the constant coefficient")
        object.__setattr__(self, "coeffs", tuple(
            c if isinstance(c, RationalQ) else RationalQ(c) for c in self.coeffs))

    @property
    def n(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, c, n: int) -> NilpotentSeries:
        return cls((c,) + (ZERO,) * n)

    def _check(self, other: NilpotentSeries) -> None:
        if other.n != self.n:
            raise ValueError(f"truncation mismatch: h^{self.n + 1} vs h^{other.n + 1}")

    def __add__(self, other: NilpotentSeries) -> NilpotentSeries:
        self._check(other)
        return NilpotentSeries(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other) -> NilpotentSeries:
        if not isinstance(other, NilpotentSeries):
            return NilpotentSeries(tuple(c * other for c in self.coeffs))
        self._check(other)
        a, b = self.coeffs, other.coeffs
        return NilpotentSeries(tuple(
            sum((a[j] * b[k - j] for j in range(k + 1)), ZERO) for k in range(self.n + 1)))

    __rmul__ = __mul__

    def is_unit(self) -> bool:
        return bool(self.coeffs[0])

    def inverse(self) -> NilpotentSeries:
        a = self.coeffs
        if not a[0]:
            raise ZeroDivisionError("constant term is zero; not a unit")
        inv0 = 1 / a[0]
        b = [inv0]
        for k in range(1, self.n + 1):
            b.append(-inv0 * sum((a[j] * b[k - j] for j in range(1, k + 1)), ZERO))
        return NilpotentSeries(tuple(b))

    def __pow__(self, k: int) -> NilpotentSeries:
        base = self if k >= 0 else self.inverse()
        out = NilpotentSeries.constant(ONE, self.n)
        for _ in range(abs(k)):
            out = out * base
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, NilpotentSeries) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def min_order(self) -> int | float:
        return min(c.order for c in self.coeffs)

    def to_line_bundle_basis(self) -> tuple[RationalQ, ...]:
        """Coefficients in the basis ``1, P, ..., P^n`` where ``h = 1 - P``."""
        out = [ZERO] * (self.n + 1)
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            for j in range(k + 1):
                out[j] = out[j] + c * ((-1) ** j * math.comb(k, j))
        return tuple(out)

    def to_json(self) -> list:
        return [c.to_json() for c in self.coeffs]


def j_coefficient_Pn(n: int, d: int) -> NilpotentSeries:
    """``J_d`` of projective space ``P^n`` in the basis ``h^k``, ``h = 1 - P``:

        J_d = prod_{m=1}^{d} ((1 - q^m) + q^m h)^{-(n+1)}.
    """
    if n < 1 or d < 0:
        raise ValueError("need n >= 1 and d >= 0")
    out = NilpotentSeries.constant(ONE, n)
    for m in range(1, d + 1):
        qm = RationalQ.q(m)
        factor = NilpotentSeries((ONE - qm, qm) + (ZERO,) * (n - 1))
        out = out * factor.inverse() ** (n + 1)
    return out


def nu(n: int, d: int) -> int | float:
    """Order at infinity of ``J_d`` for ``P^n``: minimum over the ``h``-coefficients."""
    return j_coefficient_Pn(n, d).min_order()


def verify_lemma_bound_A1(d_max: int) -> dict:
    """Compare ``nu_d`` for ``P^1`` with ``k_d = d + d^2`` for ``1 <= d <= d_max``."""
    from .root_system import build, k_exponent

    if d_max < 1:
        raise ValueError("d_max must be at least 1")
    a1 = build("A1")
    rows = []
    for d in range(1, d_max + 1):
        rows.append({"d": d, "nu": nu(1, d), "k": k_exponent(a1, (d,))})
    return {
        "holds": all(r["nu"] >= r["k"] for r in rows),
        "equality": all(r["nu"] == r["k"] for r in rows),
        "rows": rows,
    }


# ---------------------------------------------------------------- Novikov series

Degree = tuple[int, ...]


def box_degrees(trunc: Sequence[int]) -> list[Degree]:
    """All degrees in ``prod_j [0, trunc_j]``, graded by total degree then lexicographic."""
    pts = itertools.product(*(range(t + 1) for t in trunc))
    return sorted(pts, key=lambda d: (sum(d), d))


def leq(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def sub(a: Sequence[int], b: Sequence[int]) -> Degree:
    return tuple(x - y for x, y in zip(a, b))


def add(a: Sequence[int], b: Sequence[int]) -> Degree:
    return tuple(x + y for x, y in zip(a, b))


@dataclass(frozen=True)
class NovikovSeries:
    """Truncated ``sum_d c_d Q^d`` with ``dim x dim`` matrix coefficients over Q(q).

    Truncation is a box ``0 <= d_j <= trunc_j``. Zero coefficients are
    dropped, except the one at ``d = 0`` which is always stored.
    """

    trunc: tuple[int, ...]
    dim: int
    coeffs: Mapping[Degree, Matrix]

    def __post_init__(self):
        object.__setattr__(self, "trunc", tuple(self.trunc))
        clean: dict[Degree, Matrix] = {}
        for d, m in self.coeffs.items():
            d = tuple(d)
            if len(d) != len(self.trunc) or not leq(d, self.trunc) or min(d, default=0) < 0:
                raise ValueError(f"degree {d} outside truncation box {self.trunc}")
            m = mat(m)
            if len(m) != self.dim or any(len(r) != self.dim for r in m):
                raise ValueError(f"coefficient at {d} is not {self.dim}x{self.dim}")
            if not mat_is_zero(m):
                clean[d] = m
        zero = (0,) * len(self.trunc)
        clean.setdefault(zero, mat_zero(self.dim))
        object.__setattr__(self, "coeffs", dict(sorted(clean.items(), key=lambda kv: (sum(kv[0]), kv[0]))))

    @property
    def s(self) -> int:
        return len(self.trunc)

    def coefficient(self, d: Sequence[int]) -> Matrix:
        return self.coeffs.get(tuple(d)) or mat_zero(self.dim)

    def support(self) -> list[Degree]:
        return [d for d, m in self.coeffs.items() if not mat_is_zero(m)]

    def degrees(self) -> list[Degree]:
        return box_degrees(self.trunc)

    @classmethod
    def identity(cls, trunc, dim: int) -> NovikovSeries:
        return cls(tuple(trunc), dim, {(0,) * len(trunc): mat_identity(dim)})

    @classmethod
    def scalar(cls, trunc, values: Mapping) -> NovikovSeries:
        """1x1 series from ``{degree: RationalQ-or-number}``."""
        return cls(tuple(trunc), 1, {tuple(d) if not isinstance(d, int) else (d,): ((v,),) for d, v in values.items()})

    def _check(self, other: NovikovSeries) -> None:
        if self.trunc != other.trunc or self.dim != other.dim:
            raise ValueError("series have different truncation or size")

    def __add__(self, other: NovikovSeries) -> NovikovSeries:
        self._check(other)
        keys = set(self.coeffs) | set(other.coeffs)
        return NovikovSeries(self.trunc, self.dim,
                             {d: mat_add(self.coefficient(d), other.coefficient(d)) for d in keys})

    def __sub__(self, other: NovikovSeries) -> NovikovSeries:
        self._check(other)
        keys = set(self.coeffs) | set(other.coeffs)
        return NovikovSeries(self.trunc, self.dim,
                             {d: mat_sub(self.coefficient(d), other.coefficient(d)) for d in keys})

    def left_mul(self, m: Matrix) -> NovikovSeries:
        """``M * self`` for a constant matrix ``M``."""
        m = mat(m)
        return NovikovSeries(self.trunc, self.dim, {d: mat_mul(m, c) for d, c in self.coeffs.items()})

    def __mul__(self, other: NovikovSeries) -> NovikovSeries:
        return series_multiply(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NovikovSeries):
            return NotImplemented
        return (self.trunc == other.trunc and self.dim == other.dim
                and self.coeffs.keys() == other.coeffs.keys()
                and all(self.coeffs[d] == other.coeffs[d] for d in self.coeffs))

    __hash__ = None

    def to_json(self) -> dict:
        return {"trunc": list(self.trunc), "dim": self.dim,
                "coeffs": {",".join(map(str, d)): mat_to_json(m) for d, m in self.coeffs.items()}}

    @classmethod
    def from_json(cls, obj) -> NovikovSeries:
        trunc = tuple(int(t) for t in obj["trunc"])
        coeffs = {tuple(int(x) for x in k.split(",")): mat_from_json(v) for k, v in obj["coeffs"].items()}
        dim = obj.get("dim") or len(next(iter(coeffs.values())))
        return cls(trunc, int(dim), coeffs)


def series_multiply(a: NovikovSeries, b: NovikovSeries) -> NovikovSeries:
    """Truncated Cauchy product; terms beyond the box are discarded."""
    a._check(b)
    out: dict[Degree, Matrix] = {}
    for da, ma in a.coeffs.items():
        for db, mb in b.coeffs.items():
            d = add(da, db)
            if not leq(d, a.trunc):
                continue
            p = mat_mul(ma, mb)
            out[d] = mat_add(out[d], p) if d in out else p
    return NovikovSeries(a.trunc, a.dim, out)


def series_invert(t: NovikovSeries) -> NovikovSeries:
    """Inverse by graded recursion ``S_0 = T_0^{-1}``,
    ``S_d = -T_0^{-1} sum_{0 < d' <= d} T_{d'} S_{d - d'}``.
    """
    zero = (0,) * t.s
    t0inv = mat_inverse(t.coefficient(zero))
    nonzero = [(d, m) for d, m in t.coeffs.items() if d != zero]
    out: dict[Degree, Matrix] = {zero: t0inv}
    for d in box_degrees(t.trunc)[1:]:
        acc = None
        for dp, m in nonzero:
            if leq(dp, d):
                rest = out.get(sub(d, dp))
                if rest is None:
                    continue
                p = mat_mul(m, rest)
                acc = p if acc is None else mat_add(acc, p)
        if acc is not None:
            sd = mat_scale(mat_mul(t0inv, acc), -1)
            if not mat_is_zero(sd):
                out[d] = sd
    return NovikovSeries(t.trunc, t.dim, out)
