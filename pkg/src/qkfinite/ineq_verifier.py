"""Positivity certificates for the bordered form (d,d)/2 - d_i z + r z^2.

For a root system with ``r`` simple roots and a chosen index ``i`` the form
is positive definite iff ``(d,d)/2 + r(d) > d_i`` for every nonzero
effective ``d`` of full support (evaluate at ``z = 1``). Smaller supports
reduce to root subsystems, so :func:`verify_lemma` checks every support
containing ``i``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .exact import Number, bareiss_det, is_symmetric, leading_principal_minors
from .root_system import RootSystem, RootSystemType, build, sub_gram

# Determinants of the Gram matrix (short roots of length^2 2).
TABLE1 = {
    "A": lambda n: n + 1,
    "B": lambda n: 2 ** n,
    "C": lambda n: 4,
    "D": lambda n: 4,
    "E": lambda n: {6: 3, 7: 2}.get(n),
    "F": lambda n: 4,
    "G": lambda n: 3,
}


@dataclass(frozen=True)
class PositivityCertificate:
    minors: tuple[Number, ...]
    verdict: bool

    def to_json(self) -> dict:
        return {"minors": [str(m) for m in self.minors], "verdict": self.verdict}


@dataclass(frozen=True)
class BorderedForm:
    base: RootSystem
    border_index: int  # 1-based
    matrix_2AQ: tuple[tuple[int, ...], ...]


def is_positive_definite(matrix: Sequence[Sequence[Number]]) -> PositivityCertificate:
    """Sylvester's criterion with exact leading principal minors."""
    if not is_symmetric(matrix):
        raise ValueError("matrix is not symmetric")
    minors = tuple(leading_principal_minors(matrix))
    return PositivityCertificate(minors, all(m > 0 for m in minors))


def _resolve(t: RootSystemType | RootSystem | str) -> RootSystem:
    return t if isinstance(t, RootSystem) else build(t)


def _check_index(system: RootSystem, i: int) -> None:
    if not 1 <= i <= system.rank:
        raise ValueError(f"index {i} out of range 1..{system.rank} for {system}")


def bordered_matrix(gram: Sequence[Sequence[int]], i: int, corner: int | None = None) -> list[list[int]]:
    """``2A_Q``: gram bordered in place at 0-based ``i`` with a -1 and corner ``2r``."""
    n = len(gram)
    out = [list(row) + [0] for row in gram]
    out.append([0] * (n + 1))
    out[i][n] = out[n][i] = -1
    out[n][n] = 2 * n if corner is None else corner
    return out


def bordered_form(t: RootSystemType | RootSystem | str, i: int) -> BorderedForm:
    system = _resolve(t)
    _check_index(system, i)
    m = bordered_matrix(system.gram, i - 1)
    return BorderedForm(system, i, tuple(tuple(r) for r in m))


def det_2AR(t: RootSystemType | RootSystem | str) -> int:
    return bareiss_det(_resolve(t).gram)


def det_2AQ(t: RootSystemType | RootSystem | str, i: int) -> int:
    """Determinant of the bordered matrix, cross-checked against the deletion identity
    ``det(2A_Q) = 2r det(2A_R) - det(2A_{R(i)})``.
    """
    system = _resolve(t)
    _check_index(system, i)
    direct = bareiss_det(bordered_form(system, i).matrix_2AQ)
    rest = [j for j in range(system.rank) if j != i - 1]
    via_identity = 2 * system.rank * det_2AR(system) - bareiss_det(sub_gram(system, rest))
    if direct != via_identity:
        raise AssertionError(f"determinant identity failed for {system}, i={i}: {direct} != {via_identity}")
    return direct


def _components(system: RootSystem, support: Sequence[int]) -> list[frozenset[int]]:
    """Connected components of the Dynkin diagram restricted to ``support``."""
    left = set(support)
    comps = []
    while left:
        stack = [left.pop()]
        comp = set(stack)
        while stack:
            a = stack.pop()
            for b in list(left):
                if system.gram[a][b] != 0:
                    left.discard(b)
                    comp.add(b)
                    stack.append(b)
        comps.append(frozenset(comp))
    return comps


def verify_lemma(t: RootSystemType | RootSystem | str, i: int) -> bool:
    """Positive-definiteness of the bordered form on every support containing ``i``.

    For a support ``S`` the bordered matrix is, after a symmetric permutation,
    block diagonal: the Gram blocks of the components of ``S`` not containing
    ``i``, and the component ``K`` containing ``i`` bordered with corner
    ``2|S|``. Blocks are certified once and cached.
    """
    system = _resolve(t)
    _check_index(system, i)
    return _verify_lemma(system, i - 1)


def _verify_lemma(system: RootSystem, i: int) -> bool:
    @lru_cache(maxsize=None)
    def gram_pd(comp: frozenset[int]) -> bool:
        return is_positive_definite(sub_gram(system, sorted(comp))).verdict

    @lru_cache(maxsize=None)
    def bordered_pd(comp: frozenset[int], corner: int) -> bool:
        idx = sorted(comp)
        m = bordered_matrix(sub_gram(system, idx), idx.index(i), corner)
        return is_positive_definite(m).verdict

    others = [j for j in range(system.rank) if j != i]
    for k in range(len(others) + 1):
        for rest in itertools.combinations(others, k):
            support = (i, *rest)
            for comp in _components(system, support):
                ok = bordered_pd(comp, 2 * len(support)) if i in comp else gram_pd(comp)
                if not ok:
                    return False
    return True


def certificate(t: RootSystemType | RootSystem | str, i: int, radius: int | None = None) -> dict:
    """JSON-ready summary: determinants, minors of ``2A_Q``, verdicts, optional brute force."""
    system = _resolve(t)
    form = bordered_form(system, i)
    pd = is_positive_definite(form.matrix_2AQ)
    out = {
        "type": str(system),
        "i": i,
        "det_2AR": det_2AR(system),
        "det_2AQ": det_2AQ(system, i),
        "minors": [str(m) for m in pd.minors],
        "bordered_positive_definite": pd.verdict,
        "verdict": verify_lemma(system, i),
    }
    if radius is not None:
        bf = brute_force_inequality(system, i, radius)
        out["radius"] = radius
        out["brute_force_holds"] = bf.holds
        out["violating_d"] = list(bf.violating_d) if bf.violating_d is not None else None
    return out


@dataclass(frozen=True)
class BruteForceResult:
    holds: bool
    violating_d: tuple[int, ...] | None
    points: int


def brute_force_inequality(t: RootSystemType | RootSystem | str, i: int, radius: int) -> BruteForceResult:
    """Scan every ``d`` in ``[0, radius]^rank`` for ``(d,d)/2 + r(d) <= d_i`` with ``d != 0``.

    Independent of the determinant route. Vectorized in exact int64
    arithmetic; returns the lexicographically first violator.
    """
    system = _resolve(t)
    _check_index(system, i)
    if radius < 1:
        raise ValueError("radius must be at least 1")
    n = system.rank
    gram = np.array(system.gram, dtype=np.int64)
    side = radius + 1
    head = min(n, 2)
    tail = n - head
    tail_pts = _box(tail, side)
    total = 0
    for prefix in itertools.product(range(side), repeat=head):
        pts = np.concatenate([np.broadcast_to(np.array(prefix, dtype=np.int64), (len(tail_pts), head)), tail_pts], axis=1)
        nrm = np.einsum("ij,jk,ik->i", pts, gram, pts)
        support = np.count_nonzero(pts, axis=1)
        # 2 * ((d,d)/2 + r(d) - d_i) <= 0 with d != 0
        lhs = nrm + 2 * support - 2 * pts[:, i - 1]
        bad = np.flatnonzero((lhs <= 0) & (support > 0))
        total += len(pts)
        if bad.size:
            return BruteForceResult(False, tuple(int(x) for x in pts[bad[0]]), total)
    return BruteForceResult(True, None, total)


def _box(dim: int, side: int) -> np.ndarray:
    if dim == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((side,) * dim, dtype=np.int64).reshape(dim, -1)
    return grids.T.copy()


def table1(max_rank: int = 8) -> list[dict]:
    """Gram determinants against the tabulated values for every type up to ``max_rank``."""
    rows = []
    for t in all_types(max_rank):
        expected = TABLE1[t.family](t.rank)
        got = det_2AR(t)
        rows.append({"type": str(t), "det_2AR": got, "expected": expected,
                     "match": expected is None or got == expected})
    return rows


def all_types(max_rank: int = 8, classical_max: int | None = None) -> list[RootSystemType]:
    """Every simple type with rank <= ``max_rank`` (``classical_max`` for A-D)."""
    cmax = classical_max or max_rank
    out = []
    for fam, lo in (("A", 1), ("B", 2), ("C", 2), ("D", 3)):
        out += [RootSystemType(fam, n) for n in range(lo, cmax + 1)]
    out += [RootSystemType("E", n) for n in (6, 7, 8) if n <= max_rank]
    if max_rank >= 4:
        out.append(RootSystemType("F", 4))
    if max_rank >= 2:
        out.append(RootSystemType("G", 2))
    return out


def e8_vertex_scan() -> list[dict]:
    """``det(2A_Q)`` and its sign at each of the eight E8 vertices."""
    e8 = build("E8")
    return [{"i": i, "det_2AQ": (v := det_2AQ(e8, i)), "sign": (v > 0) - (v < 0)} for i in range(1, 9)]
