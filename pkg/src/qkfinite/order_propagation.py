"""Quadratic growth of fundamental solutions versus polynomiality of q-shift connections.

Degrees live in the free monoid ``N^s``; nef classes are integer functionals
``p_1..p_k`` on it. A fundamental solution ``T = sum_d T_d Q^d`` (``T_0 = 1``)
has the q-shift connection ``A = T^{-1} P q^{p Q d/dQ}(T)``. Growth
certificates carry a Gram matrix over ``Q(sqrt N)`` so every comparison is an
exact sign computation.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Sequence

from .exact import inverse, leading_principal_minors
from .qseries import (
    INF,
    ONE,
    ZERO,
    Degree,
    Matrix,
    NilpotentSeries,
    NovikovSeries,
    RationalQ,
    box_degrees,
    leq,
    mat,
    mat_from_json,
    mat_identity,
    mat_inverse,
    mat_order,
    mat_to_json,
    series_invert,
    series_multiply,
    sub,
)
from .surd import Surd

Order = int | float  # float only for math.inf


class RegularityError(ValueError):
    """A shift-connection coefficient has a pole at ``q = 0``."""

    def __init__(self, degree, detail: str = ""):
        self.degree = tuple(degree)
        super().__init__(f"A_{self.degree} is not regular at q = 0{': ' + detail if detail else ''}")


class CertificateError(RuntimeError):
    """A link of the induction chain failed at some degree."""

    def __init__(self, degree, link: str):
        self.degree = tuple(degree)
        self.link = link
        super().__init__(f"induction step fails at d* = {self.degree}: {link}")


# ---------------------------------------------------------------- lattice

@dataclass(frozen=True)
class EffLattice:
    """Effective cone ``N^s`` together with nef functionals ``p_1..p_k`` (rows of ``p``)."""

    s: int
    p: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        p = tuple(tuple(int(x) for x in row) for row in self.p)
        object.__setattr__(self, "p", p)
        if self.s < 1:
            raise ValueError("lattice rank s must be positive")
        if not p:
            raise ValueError("need at least one nef functional")
        for i, row in enumerate(p):
            if len(row) != self.s:
                raise ValueError(f"p[{i}] has length {len(row)}, expected {self.s}")
            if any(x < 0 for x in row):
                raise ValueError(f"p[{i}] = {row} is negative on an effective class")
        for j in range(self.s):
            if all(row[j] == 0 for row in p):
                raise ValueError(f"every functional vanishes on e_{j + 1}")

    @property
    def k(self) -> int:
        return len(self.p)

    @classmethod
    def standard(cls, s: int) -> EffLattice:
        return cls(s, tuple(tuple(int(i == j) for j in range(s)) for i in range(s)))

    def values(self, d: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(a * b for a, b in zip(row, d)) for row in self.p)

    def to_json(self) -> dict:
        return {"s": self.s, "p": [list(r) for r in self.p]}

    @classmethod
    def from_json(cls, obj) -> EffLattice:
        return cls(int(obj["s"]), tuple(tuple(r) for r in obj["p"]))


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b)), 0)


def _check_effective(d: Sequence[int], s: int, what: str = "degree") -> Degree:
    d = tuple(int(x) for x in d)
    if len(d) != s:
        raise ValueError(f"{what} {d} has length {len(d)}, expected {s}")
    if any(x < 0 for x in d):
        raise ValueError(f"{what} {d} is not effective")
    return d


# ---------------------------------------------------------------- fundamental solutions

@dataclass(frozen=True)
class FundamentalSolution:
    """``T`` with ``T_0 = 1``; nonzero-degree entries vanish at infinity, are regular at 0,
    and have poles only at roots of unity.

    ``line_bundles`` optionally holds constant invertible matrices ``P_i``
    matching ``lattice.p``; ``generators`` records ``(f, g_f)`` pairs for
    synthetic instances.
    """

    lattice: EffLattice
    series: NovikovSeries
    line_bundles: tuple[Matrix, ...] | None = None
    generators: tuple[tuple[Degree, int], ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        t = self.series
        if t.s != self.lattice.s:
            raise ValueError(f"series has {t.s} Novikov variables, lattice has {self.lattice.s}")
        zero = (0,) * t.s
        if t.coefficient(zero) != mat_identity(t.dim):
            raise ValueError("T_0 must be the identity")
        for d, m in t.coeffs.items():
            if d == zero:
                continue
            for row in m:
                for x in row:
                    if not x:
                        continue
                    if x.order < 1:
                        raise ValueError(f"T_{d} does not vanish at q = infinity")
                    if not x.regular_at_zero():
                        raise ValueError(f"T_{d} has a pole at q = 0")
                    if not x.poles_at_roots_of_unity():
                        raise ValueError(f"T_{d} has a pole away from the roots of unity")
        if self.line_bundles is not None:
            lbs = tuple(mat(m) for m in self.line_bundles)
            if len(lbs) != self.lattice.k:
                raise ValueError(f"{len(lbs)} line bundles for {self.lattice.k} functionals")
            for i, m in enumerate(lbs):
                if len(m) != t.dim or any(len(r) != t.dim for r in m):
                    raise ValueError(f"P_{i + 1} is not {t.dim}x{t.dim}")
                if any(x.order != 0 and x for r in m for x in r) or any(not x.is_polynomial() for r in m for x in r):
                    raise ValueError(f"P_{i + 1} must be a constant matrix")
                mat_inverse(m)
            object.__setattr__(self, "line_bundles", lbs)

    @property
    def dim(self) -> int:
        return self.series.dim

    @property
    def trunc(self) -> tuple[int, ...]:
        return self.series.trunc

    def order(self, d: Sequence[int]) -> Order:
        return mat_order(self.series.coefficient(d))

    def orders(self) -> dict[Degree, Order]:
        return {d: self.order(d) for d in box_degrees(self.trunc)}

    def to_json(self) -> dict:
        out = {"lattice": self.lattice.to_json(), "T": self.series.to_json()}
        if self.line_bundles is not None:
            out["line_bundles"] = [mat_to_json(m) for m in self.line_bundles]
        return out

    @classmethod
    def from_json(cls, obj) -> FundamentalSolution:
        lbs = obj.get("line_bundles")
        return cls(EffLattice.from_json(obj["lattice"]), NovikovSeries.from_json(obj["T"]),
                   tuple(mat_from_json(m) for m in lbs) if lbs is not None else None)


def _series(t: FundamentalSolution | NovikovSeries) -> NovikovSeries:
    return t.series if isinstance(t, FundamentalSolution) else t


def q_dilate(t: FundamentalSolution | NovikovSeries, p: Sequence[int]) -> NovikovSeries:
    """``q^{p Q d/dQ}``: multiply the coefficient at ``d`` by ``q^{p.d}``."""
    t = _series(t)
    if len(p) != t.s:
        raise ValueError(f"functional has length {len(p)}, expected {t.s}")
    out = {}
    for d, m in t.coeffs.items():
        e = dot(p, d)
        out[d] = m if e == 0 else tuple(tuple(x * RationalQ.q(e) if x else x for x in row) for row in m)
    return NovikovSeries(t.trunc, t.dim, out)


@dataclass(frozen=True)
class ShiftConnection:
    P: Matrix
    p: tuple[int, ...]
    coeffs: NovikovSeries

    def support(self) -> list[Degree]:
        return self.coeffs.support()

    def order(self, d: Sequence[int]) -> Order:
        return mat_order(self.coeffs.coefficient(d))

    def to_json(self) -> dict:
        return {"P": mat_to_json(self.P), "p": list(self.p), "A": self.coeffs.to_json(),
                "support": [list(d) for d in self.support()]}


def shift_connection(t: FundamentalSolution | NovikovSeries, P, p: Sequence[int]) -> ShiftConnection:
    """``A = T^{-1} P q^{p Q d/dQ}(T)``, i.e. ``A_d = sum_{d'+d''=d} S_{d'} P q^{p.d''} T_{d''}``.

    Every computed ``A_d`` must be regular at ``q = 0``; otherwise
    :class:`RegularityError` names the first offending degree.
    """
    series = _series(t)
    P = mat(P)
    p = tuple(int(x) for x in p)
    S = series_invert(series)
    A = series_multiply(S, q_dilate(series, p).left_mul(P))
    for d, m in A.coeffs.items():
        for row in m:
            for x in row:
                if x and not x.regular_at_zero():
                    raise RegularityError(d, "p is not nef or T is inconsistent")
    return ShiftConnection(P, p, A)


def difference_identity(t: FundamentalSolution | NovikovSeries, conn: ShiftConnection) -> bool:
    """``P q^{p Q d/dQ}(T) = T A`` coefficientwise inside the truncation box."""
    series = _series(t)
    lhs = q_dilate(series, conn.p).left_mul(conn.P)
    return lhs == series_multiply(series, conn.coeffs)


# ---------------------------------------------------------------- growth certificates

@dataclass(frozen=True)
class GrowthCertificate:
    """``ord_{q=inf} T_d >= (1/2) d^T gram d + m.d + c`` with ``gram`` over ``Q(sqrt N)``."""

    gram: tuple[tuple[Surd, ...], ...]
    m: tuple[Fraction, ...]
    c: Fraction
    N: int = 1

    def __post_init__(self):
        gram = tuple(tuple(x if isinstance(x, Surd) else Surd(Fraction(x), 0, self.N) for x in row)
                     for row in self.gram)
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "m", tuple(Fraction(x) for x in self.m))
        object.__setattr__(self, "c", Fraction(self.c))
        n = len(gram)
        if any(len(r) != n for r in gram) or len(self.m) != n:
            raise ValueError("gram must be square and match the length of m")
        if any(gram[i][j] != gram[j][i] for i in range(n) for j in range(i)):
            raise ValueError("gram is not symmetric")
        for x in (x for r in gram for x in r):
            if x.b and x.n != self.N:
                raise ValueError(f"gram entry {x} is not in Q(sqrt {self.N})")
        if not _surd_positive_definite(gram):
            raise ValueError("gram is not positive definite")

    @property
    def s(self) -> int:
        return len(self.m)

    def form(self, a: Sequence[int], b: Sequence[int]) -> Surd:
        g = self.gram
        acc = Surd(0, 0, self.N)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        acc = acc + g[i][j] * (x * y)
        return acc

    def bound(self, d: Sequence[int]) -> Surd:
        return self.form(d, d) * Fraction(1, 2) + dot(self.m, d) + self.c

    def to_json(self) -> dict:
        return {
            "gram_num": [[str(x.a) for x in r] for r in self.gram],
            "gram_sqrtN_part": [[str(x.b) for x in r] for r in self.gram],
            "N": self.N,
            "m": [str(x) for x in self.m],
            "c": str(self.c),
        }

    @classmethod
    def from_json(cls, obj) -> GrowthCertificate:
        n = int(obj["N"])
        gram = tuple(tuple(Surd(Fraction(a), Fraction(b), n) for a, b in zip(ra, rb))
                     for ra, rb in zip(obj["gram_num"], obj["gram_sqrtN_part"]))
        return cls(gram, tuple(Fraction(x) for x in obj["m"]), Fraction(obj["c"]), n)


def _surd_positive_definite(gram) -> bool:
    """Sylvester's criterion by Gaussian elimination in ``Q(sqrt N)``."""
    a = [list(r) for r in gram]
    n = len(a)
    for k in range(n):
        if a[k][k].sign() <= 0:
            return False
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            for j in range(k, n):
                a[i][j] = a[i][j] - f * a[k][j]
    return True


def quadratic_growth_violations(t: FundamentalSolution | NovikovSeries, cert: GrowthCertificate,
                                box: Sequence[int] | None = None) -> list[dict]:
    series = _series(t)
    box = tuple(box) if box is not None else series.trunc
    if len(box) != series.s or not leq(box, series.trunc):
        raise ValueError(f"box {box} is not inside the truncation {series.trunc}")
    out = []
    for d in box_degrees(box):
        o = mat_order(series.coefficient(d))
        if o == INF:
            continue
        b = cert.bound(d)
        if b > o:
            out.append({"d": list(d), "order": o, "bound": float(b)})
    return out


def check_quadratic_growth(t: FundamentalSolution | NovikovSeries, cert: GrowthCertificate,
                           box: Sequence[int] | None = None) -> bool:
    """Exact check of the certificate on every degree of ``box`` (default: the truncation)."""
    return not quadratic_growth_violations(t, cert, box)


# ---------------------------------------------------------------- reverse direction

@dataclass(frozen=True)
class OrderTable:
    """Lower bounds ``L(d)`` on ``ord T_d`` for every ``d`` in a box; ``inf`` forces ``T_d = 0``."""

    box: tuple[int, ...]
    values: Mapping[Degree, Order]

    def __getitem__(self, d) -> Order:
        return self.values[tuple(d)]

    def to_json(self) -> dict:
        return {"box": list(self.box),
                "L": {",".join(map(str, d)): (str(v) if v != INF else "inf") for d, v in self.values.items()}}


def _check_F(F: Iterable[Sequence[int]], s: int) -> tuple[Degree, ...]:
    out = []
    for d in F:
        d = _check_effective(d, s, "element of F")
        if not any(d):
            raise ValueError("F must not contain 0")
        out.append(d)
    if not out:
        raise ValueError("F must be nonempty")
    return tuple(sorted(set(out)))


def propagate_lower_bounds(F, C, lattice: EffLattice, box: Sequence[int]) -> OrderTable:
    """``L(0) = 0``; ``L(d) = max_i p_i.d + min_{d' in F, d' <= d} L(d - d') + C``; empty min is ``inf``."""
    F = _check_F(F, lattice.s)
    C = Fraction(C)
    box = _check_effective(box, lattice.s, "box")
    L: dict[Degree, Order] = {}
    for d in box_degrees(box):
        if not any(d):
            L[d] = 0
            continue
        best = min((L[sub(d, f)] for f in F if leq(f, d)), default=INF)
        L[d] = INF if best == INF else _norm(max(lattice.values(d)) + best + C)
    return OrderTable(box, L)


def _norm(x) -> Order:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


def construct_certificate(F, C, lattice: EffLattice, box: Sequence[int]) -> GrowthCertificate:
    """Build ``(gram, m, 0)`` from ``(F, C)`` and verify the induction step at every ``d*`` in ``box``.

    ``gram = P^T P / sqrt(N)`` with ``N = k B^2`` and ``B = max_{d in F} ||d||``;
    ``m = 0`` if ``C >= 0``, else ``m = C (1, ..., 1)``.
    """
    F = _check_F(F, lattice.s)
    C = Fraction(C)
    s, k = lattice.s, lattice.k
    ptp = [[sum(row[a] * row[b] for row in lattice.p) for b in range(s)] for a in range(s)]
    if not all(x > 0 for x in leading_principal_minors(ptp)):
        raise ValueError("the functionals p_i do not span; the induced form is degenerate")
    B2 = max(sum(v * v for v in lattice.values(f)) for f in F)
    N = k * B2
    # 1/sqrt(N) = sqrt(N)/N
    gram = tuple(tuple(Surd(0, Fraction(x, N), N) for x in r) for r in ptp)
    m = (Fraction(0),) * s if C >= 0 else (C,) * s
    cert = GrowthCertificate(gram, m, Fraction(0), N)
    verify_induction(cert, F, C, lattice, box)
    return cert


def verify_induction(cert: GrowthCertificate, F, C, lattice: EffLattice, box: Sequence[int]) -> dict:
    """Re-run the induction chain at every nonzero ``d*`` in ``box`` by exact arithmetic.

    Links (raising :class:`CertificateError` on the first failure):

    * ``step``: recursion plus hypothesis ``>= (1/2)(d*,d*) + m.d* + max p.d* - max (d*,d') - max m.d' + C``
    * ``C``: ``C - max_{d' in F} m.d' >= 0``
    * ``norm``: ``||d*|| <= sqrt(k) max_i p_i.d*`` (squared, integers)
    * ``cauchy-schwarz``: ``(d*,d')^2 <= (d*,d*) max (d',d')`` for every ``d'`` (squared in ``Q(sqrt N)``)
    * ``scale``: ``(d*,d*) max (d',d') = ||d*||^2 / k`` so the last two terms cancel
    * ``dp``: the table value ``L(d*)`` dominates ``(1/2)(d*,d*) + m.d*``
    """
    F = _check_F(F, lattice.s)
    C = Fraction(C)
    k = lattice.k
    table = propagate_lower_bounds(F, C, lattice, box)
    ff = {f: cert.form(f, f) for f in F}
    fmax = max(ff.values())
    mmax = max(dot(cert.m, f) for f in F)
    checked = vacuous = 0
    for d in box_degrees(table.box):
        if not any(d):
            continue
        if C - mmax < 0:
            raise CertificateError(d, "C")
        fits = [f for f in F if leq(f, d)]
        if not fits:
            vacuous += 1
            continue
        pv = lattice.values(d)
        pmax = max(pv)
        dd = cert.form(d, d)
        md = dot(cert.m, d)
        step0 = min(cert.form(sub(d, f), sub(d, f)) * Fraction(1, 2) + dot(cert.m, sub(d, f)) for f in fits)
        step0 = step0 + pmax + C
        cross = [cert.form(d, f) for f in F]
        step1 = dd * Fraction(1, 2) + md + pmax - max(cross) - mmax + C
        if step0 < step1:
            raise CertificateError(d, "step")
        norm2 = sum(v * v for v in pv)
        if k * pmax * pmax < norm2:
            raise CertificateError(d, "norm")
        for x in cross:
            if x.sign() < 0 or x * x > dd * fmax:
                raise CertificateError(d, "cauchy-schwarz")
        if dd * fmax != Fraction(norm2, k):
            raise CertificateError(d, "scale")
        target = dd * Fraction(1, 2) + md
        L = table[d]
        if L != INF and target > L:
            raise CertificateError(d, "dp")
        checked += 1
    return {"checked": checked, "vacuous": vacuous, "N": cert.N}


# ---------------------------------------------------------------- forward direction

def _tau(cert: GrowthCertificate, d: Degree) -> int:
    if not any(d):
        return 0
    return max(1, math.ceil(cert.bound(d)))


def composition_bound(orders: Mapping[Degree, Order], box: Sequence[int]) -> dict[Degree, Order]:
    """``sigma(0) = 0``, ``sigma(d) = min_{0 < d' <= d} orders[d'] + sigma(d - d')``:
    a lower bound for ``ord S_d`` when ``orders`` bounds ``ord T_d``.
    """
    degs = box_degrees(box)
    sigma: dict[Degree, Order] = {}
    for d in degs:
        if not any(d):
            sigma[d] = 0
            continue
        sigma[d] = min(orders[dp] + sigma[sub(d, dp)] for dp in degs if any(dp) and leq(dp, d))
    return sigma


def predicted_support(cert: GrowthCertificate, p: Sequence[int], box: Sequence[int]) -> list[Degree]:
    """Degrees where the growth bound alone cannot force ``ord A_d >= 1``.

    With ``tau`` the certified lower bound on ``ord T_d`` (at least 1 off zero)
    and ``sigma`` its composition bound for ``S = T^{-1}``,
    ``ord A_d >= min_{d'+d''=d} sigma(d') + tau(d'') - p.d''``. Where this is
    positive, regularity at ``q = 0`` forces ``A_d = 0``.
    """
    degs = box_degrees(box)
    tau = {d: _tau(cert, d) for d in degs}
    sigma = composition_bound(tau, box)
    out = []
    for d in degs:
        alpha = min(sigma[sub(d, dpp)] + tau[dpp] - dot(p, dpp) for dpp in degs if leq(dpp, d))
        if alpha < 1:
            out.append(d)
    return out


def forward_check(t: FundamentalSolution, cert: GrowthCertificate) -> dict:
    """For every line bundle: compute ``A`` and confirm its support lies in the predicted set.

    Verified inside the truncation box only.
    """
    if t.line_bundles is None:
        raise ValueError("fundamental solution carries no line bundles")
    growth = check_quadratic_growth(t, cert)
    rows = []
    for P, p in zip(t.line_bundles, t.lattice.p):
        conn = shift_connection(t, P, p)
        pred = predicted_support(cert, p, t.trunc)
        actual = conn.support()
        rows.append({
            "p": list(p),
            "predicted": [list(d) for d in pred],
            "support": [list(d) for d in actual],
            "ok": set(actual) <= set(pred),
            "difference_identity": difference_identity(t, conn),
        })
    return {"growth": growth, "connections": rows,
            "ok": growth and all(r["ok"] for r in rows), "scope": "box-verified"}


def reverse_check(t: FundamentalSolution, box: Sequence[int] | None = None) -> dict:
    """Read ``F`` and ``C`` off the connections, then confirm ``ord T_d >= L(d)`` and the certificate."""
    if t.line_bundles is None:
        raise ValueError("fundamental solution carries no line bundles")
    box = tuple(box) if box is not None else t.trunc
    zero = (0,) * t.lattice.s
    F: set[Degree] = set()
    C: Order = INF
    for P, p in zip(t.line_bundles, t.lattice.p):
        conn = shift_connection(t, P, p)
        if conn.coeffs.coefficient(zero) != P:
            raise ValueError("A_0 differs from P; the constant-term hypothesis fails")
        for d in conn.support():
            if any(d):
                F.add(d)
                C = min(C, conn.order(d))
    if not F:
        # A = P exactly: T is constant, any certificate works
        return {"F": [], "C": None, "ok": all(t.order(d) == INF for d in box_degrees(box) if any(d))}
    table = propagate_lower_bounds(F, C, t.lattice, box)
    bad = [list(d) for d in box_degrees(box) if t.order(d) < table[d]]
    cert = construct_certificate(F, C, t.lattice, box)
    growth = check_quadratic_growth(t, cert, box)
    return {"F": [list(d) for d in sorted(F)], "C": str(C), "dp_violations": bad,
            "certificate": cert.to_json(), "growth": growth, "ok": not bad and growth}


# ---------------------------------------------------------------- synthetic data

def default_generators(lattice: EffLattice, extra: bool = False) -> tuple[tuple[Degree, int], ...]:
    """Basis vectors (and optionally the all-ones class) with ``g_f = gcd_i(p_i.f)``."""
    s = lattice.s
    gens = [tuple(int(i == j) for j in range(s)) for i in range(s)]
    if extra and s > 1:
        gens.append((1,) * s)
    return tuple((f, reduce(math.gcd, lattice.values(f))) for f in gens)


def natural_order_profile(generators, box: Sequence[int]) -> dict[Degree, Order]:
    """``omega(d) = min sum_f g_f n_f (n_f + 1) / 2`` over ``d = sum n_f f``; ``inf`` if unreachable."""
    degs = box_degrees(box)
    omega: dict[Degree, Order] = {d: INF for d in degs}
    omega[degs[0]] = 0
    # unbounded knapsack, one generator at a time (each used with a single multiplicity)
    for f, g in generators:
        new = dict(omega)
        for d in degs:
            if omega[d] == INF:
                continue
            n, e = 1, tuple(a + b for a, b in zip(d, f))
            while leq(e, box):
                new[e] = min(new[e], omega[d] + g * n * (n + 1) // 2)
                n, e = n + 1, tuple(a + b for a, b in zip(e, f))
        omega = new
    return omega


def synthetic_certificate(generators) -> GrowthCertificate:
    """Rational certificate ``(1/2) d^T G d + m.d <= omega(d)``.

    ``G = (sum_f f f^T / g_f)^{-1}`` is the real minimum of ``sum g_f n_f^2 / 2``;
    ``m`` satisfies ``m.f <= g_f / 2`` for every generator.
    """
    s = len(generators[0][0])
    M = [[sum(Fraction(f[a] * f[b], g) for f, g in generators) for b in range(s)] for a in range(s)]
    G = inverse(M)
    base = [Fraction(0)] * s
    for f, g in generators:
        if sum(f) == 1:
            base[f.index(1)] = Fraction(g, 2)
    scale = min([Fraction(1)] + [Fraction(g, 2) / dot(base, f) for f, g in generators if dot(base, f)])
    m = tuple(x * scale for x in base)
    return GrowthCertificate(tuple(tuple(r) for r in G), m, Fraction(0), 1)


def _random_fraction(rng: random.Random, nonzero: bool = False) -> Fraction:
    while True:
        x = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
        if x or not nonzero:
            return x


def _toeplitz(x: NilpotentSeries) -> Matrix:
    """Matrix of ``sum_t c_t N^t`` with ``N`` the nilpotent shift (superdiagonal)."""
    n = x.n + 1
    return tuple(tuple(x.coeffs[j - i] if j >= i else ZERO for j in range(n)) for i in range(n))


def generate_synthetic_T(lattice: EffLattice, dim: int, order_profile=None, seed: int = 0,
                         trunc: Sequence[int] | None = None, extra_generator: bool | None = None,
                         ) -> FundamentalSolution:
    """Deterministic ``T = prod_f E_f(Q^f)`` in the commutative algebra generated by a nilpotent ``N``.

    ``E_f(x) = sum_n a_f^n x^n / prod_{m<=n} (q^{m g_f} - 1)`` with ``a_f`` a
    random unit of ``Q[N]/(N^dim)``; it satisfies ``E_f(q^{g_f} x) = (1 + a_f x) E_f(x)``,
    so every shift connection is a polynomial in ``Q``. ``ord T_d`` is at
    least the natural profile ``omega``; ``order_profile`` (callable or mapping)
    is a requested lower bound and must be met by ``omega`` on the box.
    """
    if dim < 1:
        raise ValueError("dim must be positive")
    s = lattice.s
    trunc = tuple(trunc) if trunc is not None else (8,) * s if s == 1 else (4,) * s
    _check_effective(trunc, s, "truncation")
    rng = random.Random(seed)
    if extra_generator is None:
        extra_generator = s > 1 and rng.random() < 0.5
    gens = default_generators(lattice, extra_generator)
    degs = box_degrees(trunc)
    if order_profile is not None:
        omega = natural_order_profile(gens, trunc)
        get = order_profile if callable(order_profile) else (lambda d: order_profile[tuple(d)])
        for d in degs[1:]:
            want = get(d)
            if want < 1:
                raise ValueError(f"order profile must be at least 1 off zero; got {want} at {d}")
            if omega[d] < want:
                raise ValueError(f"order profile {want} at {d} exceeds what the generators give ({omega[d]})")
    n = dim - 1

    def unit() -> NilpotentSeries:
        return NilpotentSeries((RationalQ(_random_fraction(rng, True)),)
                               + tuple(RationalQ(_random_fraction(rng)) for _ in range(n)))

    zero = (0,) * s
    T: dict[Degree, NilpotentSeries] = {zero: NilpotentSeries.constant(ONE, n)}
    for f, g in gens:
        a = unit()
        E = {zero: NilpotentSeries.constant(ONE, n)}
        coef, k, d = NilpotentSeries.constant(ONE, n), 1, f
        while leq(d, trunc):
            coef = coef * a * (1 / (RationalQ.q(k * g) - ONE))
            E[d] = coef
            k, d = k + 1, tuple(x + y for x, y in zip(d, f))
        new: dict[Degree, NilpotentSeries] = {}
        for d1, x in T.items():
            for d2, y in E.items():
                e = tuple(a1 + a2 for a1, a2 in zip(d1, d2))
                if leq(e, trunc):
                    new[e] = new[e] + x * y if e in new else x * y
        T = new
    lbs = []
    for _ in lattice.p:
        lbs.append(_toeplitz(NilpotentSeries((ONE,) + tuple(RationalQ(_random_fraction(rng)) for _ in range(n)))))
    series = NovikovSeries(trunc, dim, {d: _toeplitz(x) for d, x in T.items()})
    return FundamentalSolution(lattice, series, tuple(lbs), gens)
