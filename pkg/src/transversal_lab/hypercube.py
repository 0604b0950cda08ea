"""Dense d-dimensional Latin hypercubes with validation, slicing and a text format.

Storage is a flat row-major array (last coordinate fastest).  The index set is
always {0, ..., n-1}; a group labeling is carried alongside the array so the
same cube can be analyzed under different labelings.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from .groups import AbelianGroup, cyclic_group

Coords = tuple[int, ...]


class FormatError(ValueError):
    """Raised for malformed hypercube text input."""


class LatinValidationError(ValueError):
    """Raised when a construction that must be Latin fails validation."""


class Entry(NamedTuple):
    coords: Coords
    symbol: int


@dataclass
class PlaneSpec:
    """A k-plane given by its fixed axes; all other axes run over the full range."""

    fixed: dict[int, int]

    def free_axes(self, d: int) -> list[int]:
        for axis, value in self.fixed.items():
            if not 0 <= axis < d:
                raise ValueError(f"fixed axis {axis} out of range for dimension {d}")
        if len(self.fixed) != len(set(self.fixed)):
            raise ValueError("fixed axes must be distinct")
        return [a for a in range(d) if a not in self.fixed]


class Hypercube:
    """Immutable order-n dimension-d symbol array."""

    __slots__ = ("d", "n", "group", "_arr", "_latin", "_hash")

    def __init__(self, symbols, group: AbelianGroup | None = None):
        arr = np.array(symbols, dtype=np.int64)
        if arr.ndim < 2:
            raise ValueError("hypercube dimension must be at least 2")
        n = arr.shape[0]
        if any(s != n for s in arr.shape):
            raise ValueError(f"all axes must have equal length, got shape {arr.shape}")
        if n > 0 and (arr.min() < 0 or arr.max() >= n):
            raise ValueError(f"symbols must lie in [0, {n})")
        if group is None:
            group = cyclic_group(n)
        elif group.order != n:
            raise ValueError(f"group order {group.order} does not match order {n}")
        arr.setflags(write=False)
        self.d = arr.ndim
        self.n = n
        self.group = group
        self._arr = arr
        self._latin: bool | None = None
        self._hash: int | None = None

    @property
    def symbols(self) -> np.ndarray:
        """Read-only symbol array of shape (n,) * d."""
        return self._arr

    def with_group(self, group: AbelianGroup) -> "Hypercube":
        return Hypercube(self._arr, group)

    def __getitem__(self, coords) -> int:
        return int(self._arr[tuple(coords)])

    def entry(self, coords) -> Entry:
        coords = tuple(int(c) for c in coords)
        return Entry(coords, self[coords])

    def cells(self) -> Iterator[Coords]:
        """All coordinate tuples in row-major order."""
        return itertools.product(range(self.n), repeat=self.d)

    def entries(self) -> Iterator[Entry]:
        flat = self._arr.reshape(-1)
        for i, coords in enumerate(self.cells()):
            yield Entry(coords, int(flat[i]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Hypercube):
            return NotImplemented
        return self.d == other.d and self.n == other.n and np.array_equal(self._arr, other._arr)

    def __hash__(self) -> int:
        if self._hash is None:
            digest = hashlib.sha256(self._arr.tobytes()).digest()
            self._hash = hash((self.d, self.n, digest))
        return self._hash

    def content_id(self) -> str:
        return "sha256:" + hashlib.sha256(serialize(self).encode()).hexdigest()[:16]

    def __repr__(self) -> str:
        return f"Hypercube(d={self.d}, n={self.n}, group={self.group})"


def cyclic(group: AbelianGroup, d: int) -> Hypercube:
    """The hypercube whose symbol at x is the group sum of the coordinates."""
    if d < 2:
        raise ValueError("dimension must be at least 2")
    n = group.order
    add_tab = index_add_table(group)
    axis = np.arange(n, dtype=np.int64)
    acc = axis.copy()
    for _ in range(d - 1):
        acc = add_tab[acc[..., None], axis]
    H = Hypercube(acc, group)
    H._latin = True
    return H


def index_add_table(group: AbelianGroup) -> np.ndarray:
    """n x n table of element-index addition for the group's fixed enumeration."""
    n = group.order
    tab = np.empty((n, n), dtype=np.int64)
    elems = [group.element(i) for i in range(n)]
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            tab[i, j] = group.index(group.add(a, b))
    return tab


def is_latin(H: Hypercube) -> bool:
    """True iff every line contains each symbol exactly once.  Cached."""
    if H._latin is None:
        want = np.arange(H.n, dtype=np.int64)
        ok = True
        for axis in range(H.d):
            lines = np.moveaxis(H.symbols, axis, -1).reshape(-1, H.n)
            if not np.all(np.sort(lines, axis=1) == want):
                ok = False
                break
        H._latin = ok
    return H._latin


def line(H: Hypercube, spec: PlaneSpec) -> list[Entry]:
    """Entries of a 1-plane, in coordinate order along the free axis."""
    free = spec.free_axes(H.d)
    if len(free) != 1:
        raise ValueError(f"line spec must leave exactly one free axis, got {len(free)}")
    axis = free[0]
    out = []
    for v in range(H.n):
        coords = tuple(spec.fixed[a] if a != axis else v for a in range(H.d))
        out.append(H.entry(coords))
    return out


def subcube(H: Hypercube, index_sets: Sequence[Sequence[int]]) -> np.ndarray:
    """Restriction of the symbol array to the given per-axis index sets."""
    if len(index_sets) != H.d:
        raise ValueError(f"need {H.d} index sets, got {len(index_sets)}")
    for s in index_sets:
        if len(s) == 0:
            raise ValueError("index sets must be nonempty")
        for v in s:
            if not 0 <= v < H.n:
                raise ValueError(f"index {v} out of range [0, {H.n})")
    return H.symbols[np.ix_(*index_sets)].copy()


def apply_isotopy(H: Hypercube, perms: Sequence[Sequence[int]]) -> Hypercube:
    """Permute coordinates axiswise and relabel symbols.

    perms holds d coordinate permutations followed by one symbol permutation;
    entry (x_1,...,x_d; s) maps to (p_1(x_1),...,p_d(x_d); p_{d+1}(s)).
    """
    if len(perms) != H.d + 1:
        raise ValueError(f"need {H.d + 1} permutations, got {len(perms)}")
    arrs = []
    for p in perms:
        a = np.asarray(p, dtype=np.int64)
        if sorted(a.tolist()) != list(range(H.n)):
            raise ValueError("each permutation must be a bijection of the index set")
        arrs.append(a)
    sym_perm = arrs[-1]
    out = np.empty_like(H.symbols)
    out[np.ix_(*arrs[:-1])] = sym_perm[H.symbols]
    result = Hypercube(out, H.group)
    if H._latin:
        result._latin = True
    return result


# -- diagonals ---------------------------------------------------------------


@dataclass(frozen=True)
class Diagonal:
    """A set of entries, no two of which share a hyperplane.

    ``complete`` is true iff the diagonal has exactly n entries for the host
    order n it was validated against.
    """

    entries: tuple[Entry, ...]
    complete: bool = field(default=False)

    @classmethod
    def from_entries(
        cls,
        H: Hypercube,
        entries: Iterable[Entry | tuple],
        *,
        transversal: bool = False,
    ) -> "Diagonal":
        """Validate entries against a host cube and wrap them.

        Checks membership (symbol matches the stored value), the pairwise
        hyperplane-disjointness property, and distinct symbols when a
        transversal is requested.
        """
        norm = []
        for e in entries:
            if isinstance(e, Entry):
                coords, symbol = e.coords, e.symbol
            else:
                coords, symbol = tuple(e[0]), int(e[1])
            coords = tuple(int(c) for c in coords)
            if len(coords) != H.d:
                raise ValueError(f"entry {coords} has wrong dimension for host (d={H.d})")
            if H[coords] != symbol:
                raise ValueError(f"entry {(coords, symbol)} does not match host value {H[coords]}")
            norm.append(Entry(coords, symbol))
        check_pairwise_disjoint(norm)
        if transversal:
            syms = [e.symbol for e in norm]
            if len(set(syms)) != len(syms):
                raise ValueError("entries repeat a symbol; not a transversal")
        return cls(tuple(norm), complete=len(norm) == H.n)

    @classmethod
    def from_cells(cls, H: Hypercube, cells: Iterable[Coords], **kw) -> "Diagonal":
        return cls.from_entries(H, (H.entry(c) for c in cells), **kw)

    def cells(self) -> tuple[Coords, ...]:
        return tuple(e.coords for e in self.entries)

    def cell_set(self) -> frozenset[Coords]:
        return frozenset(e.coords for e in self.entries)

    def symbols(self) -> tuple[int, ...]:
        return tuple(e.symbol for e in self.entries)

    def is_constant(self) -> bool:
        return len(set(self.symbols())) <= 1

    def has_distinct_symbols(self) -> bool:
        return len(set(self.symbols())) == len(self.entries)

    def is_transversal_of(self, H: Hypercube) -> bool:
        try:
            Diagonal.from_entries(H, self.entries, transversal=True)
        except ValueError:
            return False
        return len(self.entries) == H.n

    def sorted_by_coords(self) -> "Diagonal":
        return Diagonal(tuple(sorted(self.entries)), self.complete)

    def __len__(self) -> int:
        return len(self.entries)


def check_pairwise_disjoint(entries: Sequence[Entry]) -> None:
    """Raise unless no two entries agree in any coordinate."""
    if not entries:
        return
    d = len(entries[0].coords)
    for axis in range(d):
        vals = [e.coords[axis] for e in entries]
        if len(set(vals)) != len(vals):
            raise ValueError(f"two entries share a hyperplane on axis {axis}")


def pairwise_disjoint_family(diagonals: Sequence[Diagonal]) -> bool:
    """True iff the diagonals are pairwise disjoint as cell sets."""
    seen: set[Coords] = set()
    for D in diagonals:
        cells = D.cell_set()
        if seen & cells:
            return False
        seen |= cells
    return True


# -- text format -------------------------------------------------------------


def serialize(H: Hypercube) -> str:
    """Text form: header line "lhc <d> <n>", then n^d symbols row-major."""
    lines = [f"lhc {H.d} {H.n}"]
    flat = H.symbols.reshape(-1, H.n) if H.n > 0 else H.symbols.reshape(0, 0)
    for row in flat:
        lines.append(" ".join(str(int(v)) for v in row))
    return "\n".join(lines) + "\n"


def parse(text: str, group: AbelianGroup | None = None) -> Hypercube:
    """Parse the text format; '#' starts a comment line."""
    tokens: list[str] = []
    header: tuple[int, int] | None = None
    for raw in text.splitlines():
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if header is None:
            parts = stripped.split()
            if len(parts) != 3 or parts[0] != "lhc":
                raise FormatError(f"bad header line {stripped!r}; expected 'lhc <d> <n>'")
            try:
                header = (int(parts[1]), int(parts[2]))
            except ValueError:
                raise FormatError(f"bad header line {stripped!r}; d and n must be integers")
            continue
        tokens.extend(stripped.split())
    if header is None:
        raise FormatError("missing header line")
    d, n = header
    if d < 2 or n < 1:
        raise FormatError(f"invalid dimensions d={d}, n={n}")
    if len(tokens) != n**d:
        raise FormatError(f"expected {n**d} cells, found {len(tokens)}")
    try:
        values = [int(t) for t in tokens]
    except ValueError as exc:
        raise FormatError(f"non-integer cell value: {exc}")
    if any(not 0 <= v < n for v in values):
        raise FormatError(f"symbols must lie in [0, {n})")
    arr = np.array(values, dtype=np.int64).reshape((n,) * d)
    return Hypercube(arr, group)


def load(path, group: AbelianGroup | None = None) -> Hypercube:
    with open(path, "r", encoding="utf-8") as fh:
        return parse(fh.read(), group)


def save(H: Hypercube, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(H))
