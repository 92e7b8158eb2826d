"""Finite Novikov-degree supports of quantum products of line bundles.

A degree ``d`` can contribute to ``P_{i_1} * ... * P_{i_l}`` only if

    GENERAL:               sum_k d_{i_k} - r(d)        - (d,d)/2 >= 0
    SIMPLY_LACED_DISTINCT: sum_k d_{i_k} - (rho, d)    - (d,d)/2 >= 0

evaluated at the lifted degree. Both are concave quadratics with a positive
definite quadratic part, so the sets are finite; we enumerate them exactly.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

import numpy as np

from .exact import (
    ceil_center_minus_root,
    floor_center_plus_root,
    inverse,
    ldl,
    principal_submatrix,
    solve_ldl,
)
from .ineq_verifier import is_positive_definite
from .root_system import CorootVector, RootSystem, norm, pairing, support_size


class Variant(enum.Enum):
    GENERAL = "GENERAL"
    SIMPLY_LACED_DISTINCT = "SIMPLY_LACED_DISTINCT"


@dataclass(frozen=True)
class ProductSpec:
    system: RootSystem
    indices: tuple[int, ...]  # 1-based, a multiset
    variant: Variant = Variant.GENERAL

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(sorted(self.indices)))
        object.__setattr__(self, "variant", Variant(self.variant))
        for i in self.indices:
            if not 1 <= i <= self.system.rank:
                raise ValueError(f"index {i} out of range 1..{self.system.rank}")
        if self.variant is Variant.SIMPLY_LACED_DISTINCT:
            if not self.system.simply_laced:
                raise ValueError(f"{self.system} is not simply laced")
            if len(set(self.indices)) != len(self.indices):
                raise ValueError(f"indices {self.indices} are not pairwise distinct")

    def counts(self) -> tuple[int, ...]:
        c = [0] * self.system.rank
        for i in self.indices:
            c[i - 1] += 1
        return tuple(c)


@dataclass(frozen=True)
class LiftMap:
    """Lift of ``G/P`` degrees to ``G/B`` degrees.

    ``parabolic`` holds the 1-based indices ``I_P``. A ``G/P`` degree is a
    full-length vector with zeros on ``I_P``. With an empty ``I_P`` and no
    table the lift is the identity.
    """

    parabolic: frozenset[int] = frozenset()
    table: Mapping[CorootVector, CorootVector] | None = None

    def __post_init__(self):
        object.__setattr__(self, "parabolic", frozenset(self.parabolic))
        if self.table is not None:
            tab = {tuple(k): tuple(v) for k, v in self.table.items()}
            object.__setattr__(self, "table", tab)
            for d, dhat in tab.items():
                self._validate_pair(d, dhat)
        elif self.parabolic:
            raise ValueError("a nontrivial parabolic needs an explicit lift table")

    def _validate_pair(self, d, dhat) -> None:
        if len(d) != len(dhat):
            raise ValueError(f"lift {d} -> {dhat}: length mismatch")
        if any(x < 0 for x in dhat) or any(x < 0 for x in d):
            raise ValueError(f"lift {d} -> {dhat}: degrees must be effective")
        for j in range(len(d)):
            if j + 1 in self.parabolic:
                if d[j] != 0:
                    raise ValueError(f"G/P degree {d} has a nonzero coordinate at parabolic index {j + 1}")
            elif dhat[j] != d[j]:
                raise ValueError(f"lift {d} -> {dhat} does not project back (coordinate {j + 1})")

    @property
    def is_identity(self) -> bool:
        return self.table is None

    def project(self, dhat: Sequence[int]) -> CorootVector:
        return tuple(0 if j + 1 in self.parabolic else x for j, x in enumerate(dhat))

    def __call__(self, d: Sequence[int]) -> CorootVector:
        d = tuple(d)
        if self.table is None:
            return d
        try:
            return self.table[d]
        except KeyError:
            raise KeyError(f"lift table has no entry for degree {list(d)}") from None

    @classmethod
    def from_pairs(cls, pairs, parabolic=()) -> LiftMap:
        return cls(frozenset(parabolic), {tuple(a): tuple(b) for a, b in pairs})


@dataclass(frozen=True)
class DegreeSet:
    degrees: tuple[CorootVector, ...]
    values: tuple[Fraction, ...] = field(repr=False)

    def __contains__(self, d) -> bool:
        return tuple(d) in set(self.degrees)

    def __len__(self) -> int:
        return len(self.degrees)

    def as_set(self) -> frozenset[CorootVector]:
        return frozenset(self.degrees)

    def max_total_degree(self) -> int:
        return max(sum(d) for d in self.degrees)

    def to_json(self) -> dict:
        return {
            "degrees": [list(d) for d in self.degrees],
            "objective_values": [str(v) for v in self.values],
            "max_total_degree": self.max_total_degree(),
        }


def graded_lex_key(d: Sequence[int]):
    return (sum(d), tuple(d))


def objective(spec: ProductSpec, d: Sequence[int]) -> Fraction:
    system = spec.system
    if len(d) != system.rank:
        raise ValueError(f"degree {tuple(d)} has wrong length for {system}")
    lin = sum(d[i - 1] for i in spec.indices)
    if spec.variant is Variant.GENERAL:
        lin -= support_size(d)
    else:
        if any(x < 0 for x in d):
            raise ValueError(f"degree {tuple(d)} is not effective")
        lin -= pairing(d, system.rho)
    return Fraction(lin) - Fraction(norm(system, d), 2)


def iter_sublevel(gram, linear, c0, lower=None) -> Iterator[tuple[int, ...]]:
    """Yield every integer ``d >= lower`` with ``linear.d + c0 - d^T gram d / 2 >= 0``.

    Completing the square around ``x = gram^{-1} linear`` turns the set into
    the ellipsoid ``(d-x)^T gram (d-x) <= 2*beta``. With ``gram = L D L^T``
    the last coordinate is fixed first; once coordinates ``j > k`` are fixed
    the real minimum over the free ones is exactly the sum of the fixed
    squares, which bounds ``d_k`` to an interval computed in exact arithmetic.
    """
    n = len(gram)
    lower = [0] * n if lower is None else list(lower)
    if n == 0:
        if c0 >= 0:
            yield ()
        return
    if not is_positive_definite(gram).verdict:
        raise ValueError("gram is not positive definite; the sublevel set may be unbounded")
    L, D = ldl(gram)
    x = solve_ldl(L, D, linear)
    beta = Fraction(c0) + sum(Fraction(a) * b for a, b in zip(linear, x)) / 2
    if beta < 0:
        return
    d = [0] * n
    y = [Fraction(0)] * n

    def rec(k: int, budget: Fraction):
        s = sum((L[j][k] * y[j] for j in range(k + 1, n)), Fraction(0))
        centre = x[k] - s
        rho = budget / D[k]
        lo = max(lower[k], ceil_center_minus_root(centre, rho))
        hi = floor_center_plus_root(centre, rho)
        for v in range(lo, hi + 1):
            d[k] = v
            y[k] = v - x[k]
            t = y[k] + s
            if k == 0:
                yield tuple(d)
            else:
                yield from rec(k - 1, budget - D[k] * t * t)

    yield from rec(n - 1, 2 * beta)


def enumerate_sublevel(gram, linear, c0, lower=None) -> list[tuple[int, ...]]:
    return sorted(iter_sublevel(gram, linear, c0, lower), key=graded_lex_key)


def _iter_candidates(spec: ProductSpec) -> Iterator[CorootVector]:
    """All effective ``d`` (unlifted, i.e. on G/B) with nonnegative objective."""
    system, n = spec.system, spec.system.rank
    counts = spec.counts()
    yield (0,) * n
    if spec.variant is Variant.SIMPLY_LACED_DISTINCT:
        linear = [c - 1 for c in counts]
        for d in iter_sublevel(system.gram, linear, 0):
            if any(d):
                yield d
        return
    # r(d) is constant on each support; enumerate with d_j >= 1 on the support
    for size in range(1, n + 1):
        for supp in itertools.combinations(range(n), size):
            g = principal_submatrix(system.gram, supp)
            lin = [counts[j] for j in supp]
            for part in iter_sublevel(g, lin, -size, lower=[1] * size):
                d = [0] * n
                for j, v in zip(supp, part):
                    d[j] = v
                yield tuple(d)


def admissible_degrees(spec: ProductSpec, lift: LiftMap | None = None) -> DegreeSet:
    """Exactly ``{d >= 0 : objective(lift(d)) >= 0}``, in graded lexicographic order.

    For a nontrivial lift, every admissible ``d`` has an admissible lift,
    so projecting the G/B set yields a complete candidate list; each
    candidate is then checked through the table.
    """
    lift = lift or LiftMap()
    for i in spec.indices:
        if i in lift.parabolic:
            raise ValueError(f"index {i} lies in the parabolic I_P; P_{i} is not a line bundle on G/P")
    if lift.is_identity:
        degs = set(_iter_candidates(spec))
    else:
        degs = set()
        for dhat in _iter_candidates(spec):
            d = lift.project(dhat)
            if d not in degs and objective(spec, lift(d)) >= 0:
                degs.add(d)
    ordered = sorted(degs, key=graded_lex_key)
    values = tuple(objective(spec, lift(d)) for d in ordered)
    assert all(v >= 0 for v in values)
    return DegreeSet(tuple(ordered), values)


def degree_bound_report(spec: ProductSpec, lift: LiftMap | None = None) -> dict:
    """Admissible set plus the largest total degree ``|d| = (d, rho)`` in it."""
    ds = admissible_degrees(spec, lift)
    return {
        "type": str(spec.system),
        "indices": list(spec.indices),
        "variant": spec.variant.value,
        "count": len(ds),
        **ds.to_json(),
    }


def first_nonzero_admissible(spec: ProductSpec) -> CorootVector | None:
    """Some nonzero admissible degree (identity lift), or ``None``; stops at the first hit."""
    for d in _iter_candidates(spec):
        if any(d):
            return d
    return None


def eigenvalue_lower_bound(gram, denominator: int = 64) -> Fraction:
    """A positive rational ``t`` with ``gram - t*I`` positive definite.

    Starts from ``1 / trace(gram^{-1})`` (always valid) and improves it by
    bisection on the grid ``1/denominator``, certifying each step exactly.
    """
    n = len(gram)
    inv = inverse(gram)
    best = 1 / sum(inv[i][i] for i in range(n))
    lo, hi = 0, int(max(gram[i][i] for i in range(n))) * denominator
    while hi - lo > 1:
        mid = (lo + hi) // 2
        t = Fraction(mid, denominator)
        shifted = [[gram[i][j] - (t if i == j else 0) for j in range(n)] for i in range(n)]
        if is_positive_definite(shifted).verdict:
            lo = mid
        else:
            hi = mid
    return max(best, Fraction(lo, denominator))


def oracle_radius(spec: ProductSpec) -> int:
    """Box side ``R = 2l/lambda + 1``: outside ``[0, R]^rank`` the objective is negative.

    ``sum_k d_{i_k} <= l |d|`` and ``(d,d) >= lambda |d|^2``, so a nonnegative
    objective forces ``|d| <= 2l / lambda``.
    """
    lam = eigenvalue_lower_bound(spec.system.gram)
    bound = 2 * len(spec.indices) / lam
    return bound.numerator // bound.denominator + 1


def oracle_box(spec: ProductSpec) -> tuple[int, ...]:
    """Per-coordinate scan limits: the cube above intersected with the bounding box
    of the ellipsoid ``linear.d - (d,d)/2 >= 0`` (a superset of the admissible set).

    The ellipsoid ``(d-x)^T G (d-x) <= rho`` spans ``|d_j - x_j| <= sqrt(rho (G^-1)_jj)``.
    """
    gram, n = spec.system.gram, spec.system.rank
    counts = spec.counts()
    linear = counts if spec.variant is Variant.GENERAL else [c - 1 for c in counts]
    ginv = inverse(gram)
    x = [sum(ginv[a][b] * linear[b] for b in range(n)) for a in range(n)]
    rho = sum(Fraction(linear[a]) * x[a] for a in range(n))
    cube = oracle_radius(spec)
    return tuple(max(0, min(cube, floor_center_plus_root(x[j], rho * ginv[j][j]))) for j in range(n))


def box_scan(spec: ProductSpec, limits: Sequence[int] | int | None = None) -> frozenset[CorootVector]:
    """Brute-force oracle: test every point of the box ``prod_j [0, limits_j]`` (numpy, exact int64)."""
    n = spec.system.rank
    if limits is None:
        limits = oracle_box(spec)
    elif isinstance(limits, int):
        limits = (limits,) * n
    gram = np.array(spec.system.gram, dtype=np.int64)
    counts = np.array(spec.counts(), dtype=np.int64)
    rest = (np.indices([r + 1 for r in limits[1:]], dtype=np.int64).reshape(n - 1, -1).T
            if n > 1 else np.zeros((1, 0), np.int64))
    found = set()
    for first in range(limits[0] + 1):
        pts = np.concatenate([np.full((len(rest), 1), first, dtype=np.int64), rest], axis=1)
        nrm = np.einsum("ij,jk,ik->i", pts, gram, pts)
        lin = pts @ counts
        if spec.variant is Variant.GENERAL:
            lin = lin - np.count_nonzero(pts, axis=1)
        else:
            lin = lin - pts.sum(axis=1)
        ok = np.flatnonzero(2 * lin - nrm >= 0)
        found.update(tuple(int(v) for v in pts[j]) for j in ok)
    return frozenset(found)
