"""Cartan data for finite root systems, with the exponents m_d and k_d.

Simple roots follow Bourbaki numbering. The inner product is normalized so
that short roots have squared length 2, which makes the Gram matrix integral:
``gram[i][j] = (alpha_i, alpha_j)``. Degrees ``d`` and weights ``lambda`` are
plain integer tuples in the simple-coroot and fundamental-weight bases.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .exact import leading_principal_minors

CorootVector = tuple[int, ...]
WeightVector = tuple[int, ...]

FAMILIES = ("A", "B", "C", "D", "E", "F", "G")
SIMPLY_LACED = frozenset("ADE")


@dataclass(frozen=True, order=True)
class RootSystemType:
    family: str
    rank: int

    def __post_init__(self):
        fam, n = self.family, self.rank
        if fam not in FAMILIES:
            raise ValueError(f"unknown family {fam!r}; expected one of {', '.join(FAMILIES)}")
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise ValueError(f"rank must be a positive integer, got {n!r}")
        ok = {
            "A": n >= 1,
            "B": n >= 2,
            "C": n >= 2,
            "D": n >= 3,
            "E": n in (6, 7, 8),
            "F": n == 4,
            "G": n == 2,
        }[fam]
        if not ok:
            raise ValueError(f"no root system of type {fam}{n}")

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"

    @property
    def simply_laced(self) -> bool:
        return self.family in SIMPLY_LACED

    @classmethod
    def parse(cls, text: str, rank: int | None = None) -> RootSystemType:
        """Parse ``"E8"``, or a bare family letter together with ``rank``."""
        m = re.fullmatch(r"\s*([A-Ga-g])\s*(\d*)\s*", text)
        if not m:
            raise ValueError(f"cannot parse root system type {text!r}")
        fam = m.group(1).upper()
        if m.group(2):
            n = int(m.group(2))
            if rank is not None and rank != n:
                raise ValueError(f"rank {rank} contradicts type {text!r}")
        elif rank is None:
            raise ValueError(f"type {text!r} needs a rank")
        else:
            n = rank
        return cls(fam, n)

    def to_json(self) -> dict:
        return {"family": self.family, "rank": self.rank}

    @classmethod
    def from_json(cls, obj: dict) -> RootSystemType:
        return cls(str(obj["family"]).upper(), int(obj["rank"]))


def _simple_root_data(t: RootSystemType) -> tuple[list[int], dict[tuple[int, int], int]]:
    """Squared lengths and nonzero off-diagonal inner products (0-based)."""
    n = t.rank
    chain = {(i, i + 1): -1 for i in range(n - 1)}
    if t.family == "A":
        return [2] * n, chain
    if t.family == "B":
        # long roots first, one short root last
        return [4] * (n - 1) + [2], {(i, i + 1): -2 for i in range(n - 1)}
    if t.family == "C":
        return [2] * (n - 1) + [4], {**chain, (n - 2, n - 1): -2}
    if t.family == "D":
        edges = {(i, i + 1): -1 for i in range(n - 2)}
        edges[(n - 3, n - 1)] = -1
        return [2] * n, edges
    if t.family == "E":
        edges = {(0, 2): -1, (1, 3): -1}
        edges.update({(i, i + 1): -1 for i in range(2, n - 1)})
        return [2] * n, edges
    if t.family == "F":
        return [4, 4, 2, 2], {(0, 1): -2, (1, 2): -2, (2, 3): -1}
    # G2 ordered (long, short)
    return [6, 2], {(0, 1): -3}


@dataclass(frozen=True)
class RootSystem:
    """A (possibly reducible) root system given by its simple factors.

    For a product the Gram and Cartan matrices are block diagonal, factors in
    the order given.
    """

    components: tuple[RootSystemType, ...]
    cartan: tuple[tuple[int, ...], ...] = field(repr=False)
    symmetrizer: tuple[Fraction, ...] = field(repr=False)
    gram: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def type(self) -> RootSystemType:
        if len(self.components) != 1:
            raise ValueError(f"{self} is not simple")
        return self.components[0]

    @property
    def simply_laced(self) -> bool:
        return all(c.simply_laced for c in self.components)

    @property
    def rho(self) -> WeightVector:
        return (1,) * self.rank

    def __str__(self) -> str:
        return "x".join(str(c) for c in self.components)

    def component_offsets(self) -> list[tuple[RootSystemType, int]]:
        out, off = [], 0
        for c in self.components:
            out.append((c, off))
            off += c.rank
        return out

    def to_json(self) -> dict:
        if len(self.components) == 1:
            head = self.components[0].to_json()
        else:
            head = {"components": [c.to_json() for c in self.components]}
        return {**head, "cartan": [list(r) for r in self.cartan], "gram": [list(r) for r in self.gram]}


def _block_diag(blocks: Iterable[Sequence[Sequence[int]]]) -> tuple[tuple[int, ...], ...]:
    blocks = list(blocks)
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(b)
    return tuple(tuple(r) for r in out)


def _simple_matrices(t: RootSystemType):
    lengths, edges = _simple_root_data(t)
    n = t.rank
    gram = [[0] * n for _ in range(n)]
    for i in range(n):
        gram[i][i] = lengths[i]
    for (i, j), v in edges.items():
        gram[i][j] = gram[j][i] = v
    # cartan[i][j] = 2 (a_i, a_j) / (a_i, a_i), so gram = diag(len/2) . cartan
    cartan = [[2 * gram[i][j] // lengths[i] for j in range(n)] for i in range(n)]
    sym = [Fraction(lengths[i], 2) for i in range(n)]
    return cartan, sym, gram


def build(t: RootSystemType | str) -> RootSystem:
    if isinstance(t, str):
        t = RootSystemType.parse(t)
    return build_product([t])


def build_product(types: Sequence[RootSystemType | str]) -> RootSystem:
    types = tuple(RootSystemType.parse(t) if isinstance(t, str) else t for t in types)
    if not types:
        raise ValueError("need at least one simple factor")
    mats = [_simple_matrices(t) for t in types]
    cartan = _block_diag(m[0] for m in mats)
    gram = _block_diag(m[2] for m in mats)
    sym = tuple(s for m in mats for s in m[1])
    rs = RootSystem(types, cartan, sym, gram)
    assert all(x > 0 for x in leading_principal_minors(gram)), "gram must be positive definite"
    return rs


def sub_gram(system: RootSystem, indices: Sequence[int]) -> list[list[int]]:
    """Gram matrix of the root subsystem on the given 0-based simple roots."""
    return [[system.gram[i][j] for j in indices] for i in indices]


def _check_rank(system: RootSystem, v: Sequence[int], what: str = "d") -> None:
    if len(v) != system.rank:
        raise ValueError(f"{what} has length {len(v)}, expected rank {system.rank}")


def pairing(d: Sequence[int], lam: Sequence[int]) -> int:
    """``(d, lambda) = sum d_i lambda_i``."""
    if len(d) != len(lam):
        raise ValueError(f"rank mismatch: {len(d)} vs {len(lam)}")
    return sum(a * b for a, b in zip(d, lam))


def norm(system: RootSystem, d: Sequence[int]) -> int:
    """``(d, d) = d^T gram d``; always an even integer."""
    _check_rank(system, d)
    g = system.gram
    n = len(d)
    return sum(g[i][j] * d[i] * d[j] for i in range(n) for j in range(n) if d[i] and d[j])


def _check_effective(d: Sequence[int]) -> None:
    if any(x < 0 for x in d):
        raise ValueError(f"degree {tuple(d)} is not effective (negative coordinate)")


def support_size(d: Sequence[int]) -> int:
    """``r(d)``: the number of strictly positive coordinates of an effective ``d``."""
    _check_effective(d)
    return sum(1 for x in d if x > 0)


def m_exponent(system: RootSystem, d: Sequence[int]) -> int:
    """``m_d = r(d) + (d, d)/2``."""
    return support_size(d) + norm(system, d) // 2


def k_exponent(system: RootSystem, d: Sequence[int]) -> int:
    """``k_d = (rho, d) + (d, d)/2``; only defined for simply-laced systems."""
    if not system.simply_laced:
        raise ValueError(f"k_d is only defined for simply-laced types, not {system}")
    _check_effective(d)
    return pairing(d, system.rho) + norm(system, d) // 2


def type_a_norm(d: Sequence[int]) -> int:
    """Telescoping formula ``sum_{i=1}^{r+1} (d_i - d_{i-1})^2`` with zero ends."""
    ext = [0, *d, 0]
    return sum((ext[i] - ext[i - 1]) ** 2 for i in range(1, len(ext)))


def dynkin_neighbours(system: RootSystem, i: int) -> list[int]:
    return [j for j in range(system.rank) if j != i and system.gram[i][j] != 0]


def e8_fork() -> int:
    """1-based Bourbaki label of the degree-3 node of E8."""
    e8 = build("E8")
    (node,) = [i for i in range(8) if len(dynkin_neighbours(e8, i)) == 3]
    return node + 1
