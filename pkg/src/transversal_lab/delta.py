"""Deviation-from-cyclic analysis.

For a cube indexed by a group G, each entry (x_1,...,x_d; s) gets the value
delta = s - x_1 - ... - x_d computed in G (coordinates and symbols identified
with group elements through G's fixed enumeration).  The set of cells with
nonzero delta, and its per-axis projections, drive most restriction arguments.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

import numpy as np

from .groups import AbelianGroup, Element
from .hypercube import Coords, Diagonal, Entry, Hypercube


class DeltaProfile:
    """Delta values of one cube under one group labeling."""

    __slots__ = ("host", "group", "indices", "support", "projections")

    def __init__(self, host: Hypercube, group: AbelianGroup, indices: np.ndarray):
        self.host = host
        self.group = group
        indices.setflags(write=False)
        self.indices = indices
        nz = np.argwhere(indices != 0)
        # np.argwhere returns row-major order, keeping support iteration deterministic
        self.support: dict[Coords, Element] = {
            tuple(int(c) for c in cell): group.element(int(indices[tuple(cell)])) for cell in nz
        }
        self.projections: tuple[frozenset[int], ...] = tuple(
            frozenset(cell[axis] for cell in self.support) for axis in range(host.d)
        )

    def value_at(self, coords) -> Element:
        return self.group.element(int(self.indices[tuple(coords)]))

    def support_cells(self) -> tuple[Coords, ...]:
        return tuple(self.support)

    def projection_sizes(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.projections)

    def __repr__(self) -> str:
        return (
            f"DeltaProfile(host={self.host!r}, group={self.group}, "
            f"support={len(self.support)} cells)"
        )


def _check_group(H: Hypercube, group: AbelianGroup | None) -> AbelianGroup:
    group = H.group if group is None else group
    if group.order != H.n:
        raise ValueError(f"group order {group.order} does not match cube order {H.n}")
    return group


@lru_cache(maxsize=256)
def _profile_cached(H: Hypercube, group: AbelianGroup) -> DeltaProfile:
    n, d = H.n, H.d
    shape = (n,) * d
    idx = np.zeros(shape, dtype=np.int64)
    # componentwise: delta_k = (sym_k - sum_j coord_k(x_j)) mod m_k, then recombined
    # into the group's mixed-radix element index
    comp_tables = []
    for k in range(group.rank):
        comp_tables.append(np.array([group.element(i)[k] for i in range(n)], dtype=np.int64))
    for k, (tab, m) in enumerate(zip(comp_tables, group.moduli)):
        total = np.zeros(shape, dtype=np.int64)
        for axis in range(d):
            grid_shape = [1] * d
            grid_shape[axis] = n
            total = total + tab.reshape(grid_shape)
        comp = (tab[H.symbols] - total) % m
        idx = idx * m + comp
    return DeltaProfile(H, group, idx)


def profile(H: Hypercube, group: AbelianGroup | None = None) -> DeltaProfile:
    """Full delta profile (memoized per cube and group)."""
    return _profile_cached(H, _check_group(H, group))


def delta(H: Hypercube, group: AbelianGroup | None, e: Entry) -> Element:
    """Delta value of a single entry; the entry must belong to the host."""
    group = _check_group(H, group)
    coords = tuple(int(c) for c in e.coords)
    if len(coords) != H.d or H[coords] != e.symbol:
        raise ValueError(f"entry {e} does not belong to the host cube")
    coord_sum = group.sum(group.element(c) for c in coords)
    return group.sub(group.element(e.symbol), coord_sum)


def delta_sum(H: Hypercube, group: AbelianGroup | None, D: Diagonal | Sequence[Entry]) -> Element:
    """Group sum of delta over the entries of a (possibly partial) diagonal."""
    group = _check_group(H, group)
    entries = D.entries if isinstance(D, Diagonal) else D
    return group.sum(delta(H, group, e) for e in entries)


def suitable_target(group: AbelianGroup, d_prime: int) -> Element:
    """The delta sum required of a diagonal that can become a transversal in
    an extension to dimension d_prime: (1 - d_prime) times the all-element sum."""
    if d_prime < 2:
        raise ValueError("d_prime must be at least 2")
    return group.scalar_mul(1 - d_prime, group.g_plus())


def is_suitable(
    H: Hypercube, group: AbelianGroup | None, D: Diagonal, d_prime: int
) -> bool:
    """True iff the complete diagonal D has the target delta sum for d_prime."""
    group = _check_group(H, group)
    if len(D.entries) != H.n:
        raise ValueError(f"diagonal has {len(D.entries)} entries, need {H.n} (complete)")
    return delta_sum(H, group, D) == suitable_target(group, d_prime)


def support_as_json(prof: DeltaProfile) -> list[dict]:
    """Support cells with their delta values, as JSON-ready records."""
    return [
        {"coords": list(cell), "delta": list(val)} for cell, val in prof.support.items()
    ]
