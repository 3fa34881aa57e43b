"""
Permutations on {1..n} in one-line image form, and their cycle types.

Points are stored 0-based internally; everything user facing (cycle notation,
JSON dumps) is 1-based.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple

from sympy.utilities.iterables import partitions


@dataclass(frozen=True)
class CycleType:
    """A partition of n stored as multiplicities r_l of cycle lengths l."""

    n: int
    mult: Tuple[Tuple[int, int], ...]  # sorted (l, r_l) pairs, r_l >= 1

    def __post_init__(self):
        total = 0
        for length, count in self.mult:
            if length < 1 or count < 1:
                raise ValueError(f"Invalid cycle type entry {length}^{count}")
            total += length * count
        if total != self.n:
            raise ValueError(f"Cycle type {self.symbol()} does not partition {self.n}")

    @classmethod
    def from_mapping(cls, mult: Mapping[int, int]) -> CycleType:
        pairs = tuple(sorted((int(l), int(r)) for l, r in mult.items() if r > 0))
        return cls(n=sum(l * r for l, r in pairs), mult=pairs)

    @classmethod
    def from_parts(cls, parts: Iterable[int]) -> CycleType:
        mult: Dict[int, int] = {}
        for part in parts:
            mult[part] = mult.get(part, 0) + 1
        return cls.from_mapping(mult)

    def as_dict(self) -> Dict[int, int]:
        return dict(self.mult)

    def parts(self) -> List[int]:
        """Cycle lengths in non-increasing order."""
        out: List[int] = []
        for length, count in reversed(self.mult):
            out.extend([length] * count)
        return out

    def symbol(self) -> str:
        """The 1^{r_1} 2^{r_2} ... notation."""
        return " ".join(f"{l}^{r}" for l, r in self.mult) or "∅"

    def __str__(self) -> str:
        return self.symbol()


def all_cycle_types(n: int) -> Iterator[CycleType]:
    """Every cycle type of S_n (n >= 1)."""
    # sympy reuses the yielded dict, so copy before freezing
    for part in partitions(n):
        yield CycleType.from_mapping(dict(part))


def class_size(t: CycleType) -> int:
    """Size of the conjugacy class n! / prod_l (l^{r_l} r_l!)."""
    denominator = 1
    for length, count in t.mult:
        denominator *= length ** count * math.factorial(count)
    return math.factorial(t.n) // denominator


@dataclass(frozen=True)
class Permutation:
    """A bijection of {0..n-1}; images[v] is the image of v."""

    images: Tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        seen = [False] * n
        for v in self.images:
            if not 0 <= v < n or seen[v]:
                raise ValueError("Images do not form a bijection")
            seen[v] = True

    @classmethod
    def _unchecked(cls, images: Sequence[int]) -> Permutation:
        perm = object.__new__(cls)
        object.__setattr__(perm, "images", tuple(images))
        return perm

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls._unchecked(range(n))

    @classmethod
    def from_one_line(cls, images: Sequence[int], one_based: bool = True) -> Permutation:
        offset = 1 if one_based else 0
        return cls(tuple(v - offset for v in images))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]], one_based: bool = True) -> Permutation:
        """Build a permutation of degree n from disjoint cycles."""
        offset = 1 if one_based else 0
        images = list(range(n))
        touched = set()
        for cycle in cycles:
            points = [v - offset for v in cycle]
            for i, v in enumerate(points):
                if v in touched:
                    raise ValueError("Cycles must be disjoint")
                touched.add(v)
                images[v] = points[(i + 1) % len(points)]
        return cls(tuple(images))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, v: int) -> int:
        return self.images[v]

    def compose(self, other: Permutation) -> Permutation:
        """self ∘ other, i.e. v -> self(other(v))."""
        if other.n != self.n:
            raise ValueError(f"Degree mismatch: {self.n} vs {other.n}")
        mine = self.images
        return Permutation._unchecked([mine[v] for v in other.images])

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for v, image in enumerate(self.images):
            inv[image] = v
        return Permutation._unchecked(inv)

    def power(self, k: int) -> Permutation:
        """self^k for any integer k, computed cycle by cycle."""
        images = [0] * self.n
        for cycle in self.cycles():
            length = len(cycle)
            shift = k % length
            for i, v in enumerate(cycle):
                images[v] = cycle[(i + shift) % length]
        return Permutation._unchecked(images)

    def cycles(self) -> List[Tuple[int, ...]]:
        """Disjoint cycles (fixed points included), each starting at its smallest point."""
        seen = [False] * self.n
        out: List[Tuple[int, ...]] = []
        for start in range(self.n):
            if seen[start]:
                continue
            cycle = []
            v = start
            while not seen[v]:
                seen[v] = True
                cycle.append(v)
                v = self.images[v]
            out.append(tuple(cycle))
        return out

    def cycle_type(self) -> CycleType:
        return cycle_type(self)

    def fixed_points(self) -> int:
        return sum(1 for v, image in enumerate(self.images) if v == image)

    def is_identity(self) -> bool:
        return all(v == image for v, image in enumerate(self.images))

    def conjugate_by(self, g: Permutation) -> Permutation:
        """g ∘ self ∘ g^-1, the same permutation with points relabelled by g."""
        return g.compose(self).compose(g.inverse())

    def one_based(self) -> List[int]:
        return [v + 1 for v in self.images]

    def cycle_notation(self) -> str:
        parts = [
            "(" + " ".join(str(v + 1) for v in cycle) + ")"
            for cycle in self.cycles()
            if len(cycle) > 1
        ]
        return "".join(parts) or "()"

    def __str__(self) -> str:
        return self.cycle_notation()


def compose(a: Permutation, b: Permutation) -> Permutation:
    """a ∘ b: maps v to a(b(v))."""
    return a.compose(b)


def cycle_type(sigma: Permutation) -> CycleType:
    counts: Dict[int, int] = {}
    for cycle in sigma.cycles():
        counts[len(cycle)] = counts.get(len(cycle), 0) + 1
    return CycleType(n=sigma.n, mult=tuple(sorted(counts.items())))


def permutation_of_type(t: CycleType, order: Sequence[int]) -> Permutation:
    """Cut a sequence of the n points into consecutive cycles of type t."""
    images = list(range(t.n))
    pos = 0
    for length in t.parts():
        block = order[pos:pos + length]
        for i, v in enumerate(block):
            images[v] = block[(i + 1) % length]
        pos += length
    return Permutation._unchecked(images)
