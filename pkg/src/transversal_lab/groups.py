"""Finite abelian groups over canonical index tuples.

Groups are direct products of cyclic factors.  Elements are reduced integer
tuples, one component per factor.  Every group carries a fixed enumeration of
its elements (mixed-radix, last factor fastest) so that symbols 0..n-1 of a
hypercube can be identified with group elements.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import prod
from typing import Iterator

Element = tuple[int, ...]

_LITERAL_RE = re.compile(r"^z(\d+)$", re.IGNORECASE)


@dataclass(frozen=True)
class AbelianGroup:
    """Direct product of cyclic groups Z_m1 x ... x Z_mk."""

    moduli: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.moduli:
            raise ValueError("group needs at least one cyclic factor")
        if any(not isinstance(m, int) or m < 1 for m in self.moduli):
            raise ValueError(f"moduli must be positive integers, got {self.moduli}")

    @property
    def order(self) -> int:
        return prod(self.moduli)

    @property
    def rank(self) -> int:
        return len(self.moduli)

    def identity(self) -> Element:
        return (0,) * len(self.moduli)

    def reduce(self, components) -> Element:
        """Canonical representative: componentwise reduction mod each modulus."""
        if len(components) != len(self.moduli):
            raise ValueError(
                f"element has {len(components)} components, group has {len(self.moduli)} factors"
            )
        return tuple(int(c) % m for c, m in zip(components, self.moduli))

    def contains(self, a: Element) -> bool:
        return (
            isinstance(a, tuple)
            and len(a) == len(self.moduli)
            and all(0 <= c < m for c, m in zip(a, self.moduli))
        )

    def _check(self, a: Element) -> None:
        if not self.contains(a):
            raise ValueError(f"{a!r} is not a canonical element of {self}")

    def add(self, a: Element, b: Element) -> Element:
        self._check(a)
        self._check(b)
        return tuple((x + y) % m for x, y, m in zip(a, b, self.moduli))

    def neg(self, a: Element) -> Element:
        self._check(a)
        return tuple((-x) % m for x, m in zip(a, self.moduli))

    def sub(self, a: Element, b: Element) -> Element:
        return self.add(a, self.neg(b))

    def scalar_mul(self, k: int, a: Element) -> Element:
        self._check(a)
        return tuple((k * x) % m for x, m in zip(a, self.moduli))

    def sum(self, elements) -> Element:
        total = self.identity()
        for a in elements:
            total = self.add(total, a)
        return total

    def element(self, index: int) -> Element:
        """Element with the given enumeration index (mixed radix, last factor fastest)."""
        if not 0 <= index < self.order:
            raise ValueError(f"index {index} out of range for group of order {self.order}")
        comps = []
        for m in reversed(self.moduli):
            comps.append(index % m)
            index //= m
        return tuple(reversed(comps))

    def index(self, a: Element) -> int:
        self._check(a)
        idx = 0
        for c, m in zip(a, self.moduli):
            idx = idx * m + c
        return idx

    def elements(self) -> Iterator[Element]:
        for i in range(self.order):
            yield self.element(i)

    def g_plus(self) -> Element:
        """Sum of all group elements: the unique involution if one exists, else identity."""
        return self.sum(self.elements())

    def has_noncyclic_sylow2(self) -> bool:
        """True iff the Sylow 2-subgroup is a product of two or more cyclic factors."""
        return sum(1 for m in self.moduli if m % 2 == 0) >= 2

    def __str__(self) -> str:
        return "x".join(f"Z{m}" for m in self.moduli)


def parse_group(literal: str) -> AbelianGroup:
    """Parse a group literal such as "Z6" or "Z2xZ2" (case-insensitive)."""
    parts = literal.strip().split("x")
    moduli = []
    for part in parts:
        m = _LITERAL_RE.match(part.strip())
        if m is None:
            raise ValueError(f"malformed group literal {literal!r}")
        moduli.append(int(m.group(1)))
    return AbelianGroup(tuple(moduli))


def cyclic_group(n: int) -> AbelianGroup:
    return AbelianGroup((n,))
