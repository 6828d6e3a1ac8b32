"""Partitions, multiplicity vectors and the closed-form scalars that depend
only on the multiplicities.

The face poset of a GT polytope only sees the run lengths of the partition,
so every other module works with :class:`MultiplicityVector`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import accumulate, groupby
from math import comb, factorial


class PartitionError(ValueError):
    """Raised for malformed partition specifications."""


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        if not self.parts:
            raise PartitionError("partition must be non-empty")
        for p in self.parts:
            if p < 1:
                raise PartitionError(f"part {p} is not positive")
        for a, b in zip(self.parts, self.parts[1:]):
            if b < a:
                raise PartitionError(f"decreasing sequence: {a} followed by {b}")

    def __len__(self):
        return len(self.parts)

    def __str__(self):
        return ",".join(map(str, self.parts))


@dataclass(frozen=True)
class MultiplicityVector:
    """Run lengths ``(a_1, ..., a_m)`` of a partition ``(1^a_1, ..., m^a_m)``."""

    mults: tuple[int, ...]

    def __post_init__(self):
        if not self.mults:
            raise PartitionError("multiplicity vector must be non-empty")
        if any(a < 1 for a in self.mults):
            raise PartitionError(f"multiplicities must be >= 1: {self.mults}")

    @classmethod
    def of(cls, *mults) -> "MultiplicityVector":
        if len(mults) == 1 and not isinstance(mults[0], int):
            mults = tuple(mults[0])
        return cls(tuple(int(a) for a in mults))

    @property
    def n(self) -> int:
        return sum(self.mults)

    @property
    def m(self) -> int:
        return len(self.mults)

    @property
    def prefix_sums(self) -> tuple[int, ...]:
        """``(s_0, ..., s_m)`` with ``s_0 = 0`` and ``s_m = n``."""
        return (0,) + tuple(accumulate(self.mults))

    def a(self, i: int) -> int:
        """1-based multiplicity accessor; ``a(0) == 0`` by convention."""
        if i == 0:
            return 0
        return self.mults[i - 1]

    def as_partition(self) -> Partition:
        return Partition(tuple(v for v, a in enumerate(self.mults, 1) for _ in range(a)))

    def label(self) -> str:
        """Multiplicative notation, e.g. ``1^2,2,3^2``."""
        return ",".join(f"{v}^{a}" if a > 1 else str(v) for v, a in enumerate(self.mults, 1))

    def __iter__(self):
        return iter(self.mults)

    def __len__(self):
        return len(self.mults)

    def __str__(self):
        return "(" + ",".join(map(str, self.mults)) + ")"


_TOKEN = re.compile(r"^\s*(\d+)\s*(?:\^\s*(\d+)\s*)?$")


def parse_partition(text: str) -> Partition:
    """Parse ``"1,1,2,3"`` or the multiplicative form ``"1^2,2,3"``."""
    if text is None or not text.strip():
        raise PartitionError("empty partition specification")
    parts: list[int] = []
    for token in text.split(","):
        match = _TOKEN.match(token)
        if match is None:
            raise PartitionError(f"malformed token {token.strip()!r}")
        value = int(match.group(1))
        count = int(match.group(2)) if match.group(2) is not None else 1
        if value < 1:
            raise PartitionError(f"non-positive part in token {token.strip()!r}")
        if count < 1:
            raise PartitionError(f"non-positive multiplicity in token {token.strip()!r}")
        if parts and value < parts[-1]:
            raise PartitionError(f"decreasing sequence at token {token.strip()!r}")
        parts.extend([value] * count)
    return Partition(tuple(parts))


def normalize(p: Partition) -> MultiplicityVector:
    return MultiplicityVector(tuple(len(list(run)) for _, run in groupby(p.parts)))


def parse_mv(text: str) -> MultiplicityVector:
    return normalize(parse_partition(text))


def reverse(mv: MultiplicityVector) -> MultiplicityVector:
    return MultiplicityVector(mv.mults[::-1])


def is_reverse_symmetric(mv: MultiplicityVector) -> bool:
    return mv.mults == mv.mults[::-1]


def dimension(mv: MultiplicityVector) -> int:
    """Dimension ``C(n,2) - sum C(a_i,2)`` of the polytope."""
    return comb(mv.n, 2) - sum(comb(a, 2) for a in mv.mults)


def _delta(x, y) -> int:
    return 1 if x == y else 0


def diameter_formula(mv: MultiplicityVector) -> int:
    """``2m - 2 - [a_1 == 1] - [a_m == 1]``; 0 for a single run (a point).

    For ``mv == (1,1)`` this gives 0 although the polytope is a segment;
    see :data:`KNOWN_EXCEPTIONS`.
    """
    m = mv.m
    if m == 1:
        return 0
    return 2 * m - 2 - _delta(1, mv.mults[0]) - _delta(1, mv.mults[-1])


def corner_count(mv: MultiplicityVector) -> int:
    """Number of ``k`` with ``a_k >= 2`` and ``a_{k+1} >= 2``."""
    return sum(1 for a, b in zip(mv.mults, mv.mults[1:]) if a >= 2 and b >= 2)


def is_simplex(mv: MultiplicityVector) -> bool:
    return mv.m == 2 and 1 in mv.mults


def aut_order_formula(mv: MultiplicityVector) -> int:
    """Order of the combinatorial automorphism group by case analysis."""
    m = mv.m
    if m == 1:
        return 1
    if m == 2:
        a1, a2 = mv.mults
        if a1 == 1 or a2 == 1:
            # a d-simplex: every permutation of its d+1 facets
            return factorial(dimension(mv) + 1)
        if a1 == a2 == 2:
            return 16
        return 16 * 2 ** _delta(a1, a2)
    a = mv.mults
    order = 1
    if a[0] == 1:
        order *= factorial(a[1])
    if a[-1] == 1:
        order *= factorial(a[-2])
    order *= 2 ** (corner_count(mv) + 1)
    order *= 2 ** (1 if is_reverse_symmetric(mv) else 0)
    return order


# Cases where the diameter formula disagrees with the actual skeleton.
# Consulted by the verification sweep, which reports them instead of failing.
KNOWN_EXCEPTIONS = {
    (1, 1): "diameter formula gives 0 but GT_(1,2) is a segment (BFS diameter 1)",
}


def compositions(n: int):
    """All multiplicity vectors with ``sum == n``, in lexicographic order."""
    if n < 1:
        return []
    out = []

    def rec(rest, prefix):
        if rest == 0:
            out.append(MultiplicityVector(tuple(prefix)))
            return
        for a in range(1, rest + 1):
            prefix.append(a)
            rec(rest - a, prefix)
            prefix.pop()

    rec(n, [])
    return out


def all_mvs(max_n: int, min_n: int = 1):
    return [mv for n in range(min_n, max_n + 1) for mv in compositions(n)]
