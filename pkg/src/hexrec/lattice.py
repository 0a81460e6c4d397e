"""Half-integer lattice points and stepped solids.

Points of (1/2)Z^3 with integer coordinate sum are stored with doubled
integer coordinates, so all geometry stays in exact integers.  A point is a
lattice vertex (all coordinates integer) or the center of an axis-normal
unit square (exactly two half-integer coordinates); the integer-coordinate
axis of a face center is its normal.

A stepped solid is downward closed; here it is an ambient solid (the corner
orthant, or a slab x+y+z <= c) minus a finite upward-closed set of removed
cubes, each cube keyed by its minimum corner.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

AXES = (0, 1, 2)
_E = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


class Point:
    """Point of Z^3_{1/2}: doubled coordinates, coordinate sum even."""

    __slots__ = ("d",)

    def __init__(self, d: tuple[int, int, int]):
        if sum(d) % 2:
            raise ValueError(f"coordinate sum of {d} is not an integer")
        self.d = d

    @staticmethod
    def of(x, y, z) -> "Point":
        coords = []
        for v in (x, y, z):
            f = Fraction(v)
            if f.denominator not in (1, 2):
                raise ValueError(f"{v} is not a half-integer")
            coords.append(f.numerator * (2 // f.denominator))
        return Point(tuple(coords))

    @staticmethod
    def parse(s: str) -> "Point":
        parts = s.split(",")
        if len(parts) != 3:
            raise ValueError(f"cannot parse point {s!r}")
        return Point.of(*(Fraction(p.strip()) for p in parts))

    @property
    def level(self) -> int:
        return sum(self.d) // 2

    def coord(self, axis: int) -> Fraction:
        return Fraction(self.d[axis], 2)

    def coords(self) -> tuple[Fraction, Fraction, Fraction]:
        return tuple(Fraction(c, 2) for c in self.d)

    def is_vertex(self) -> bool:
        return all(c % 2 == 0 for c in self.d)

    def face_normal(self) -> int | None:
        """Axis of the unique integer coordinate if this is a face center."""
        even = [a for a in AXES if self.d[a] % 2 == 0]
        if len(even) == 1:
            return even[0]
        return None

    def kind(self) -> str:
        """'vertex' or one of 'x','y','z' naming the face type."""
        if self.is_vertex():
            return "vertex"
        n = self.face_normal()
        if n is None:
            raise ValueError(f"{self} is neither a vertex nor a face center")
        return "xyz"[n]

    def shift(self, dx, dy, dz) -> "Point":
        off = Point.of(dx, dy, dz)
        return Point((self.d[0] + off.d[0], self.d[1] + off.d[1], self.d[2] + off.d[2]))

    def shift_double(self, dd: tuple[int, int, int]) -> "Point":
        return Point((self.d[0] + dd[0], self.d[1] + dd[1], self.d[2] + dd[2]))

    def __eq__(self, other):
        return isinstance(other, Point) and self.d == other.d

    def __hash__(self):
        return hash(self.d)

    def __lt__(self, other):
        return self.d < other.d

    def __str__(self):
        return ",".join(str(Fraction(c, 2)) for c in self.d)

    def __repr__(self):
        return f"Point({self})"


def vertex(i: int, j: int, k: int) -> Point:
    return Point((2 * i, 2 * j, 2 * k))


def face_center(base: tuple[int, int, int], normal: int) -> Point:
    """Center of the square spanned from integer corner `base` orthogonal to `normal`."""
    d = [2 * c for c in base]
    for a in AXES:
        if a != normal:
            d[a] += 1
    return Point(tuple(d))


Cube = tuple  # (i, j, k) minimum corner of [i,i+1]x[j,j+1]x[k,k+1]


@dataclass(frozen=True)
class SteppedSolid:
    """Ambient downward-closed solid minus finitely many removed cubes.

    ambient: ("corner",) for the negative orthant, or ("slab", c) for the
    solid of cubes entirely within {x+y+z <= c}.
    """

    ambient: tuple
    removed: frozenset

    @staticmethod
    def corner() -> "SteppedSolid":
        return SteppedSolid(("corner",), frozenset())

    @staticmethod
    def slab(top: int = 2) -> "SteppedSolid":
        return SteppedSolid(("slab", top), frozenset())

    @staticmethod
    def corner_minus(cubes: Iterable[Cube]) -> "SteppedSolid":
        s = SteppedSolid(("corner",), frozenset(tuple(c) for c in cubes))
        s.validate()
        return s

    @staticmethod
    def corner_slab_cut(n: int) -> "SteppedSolid":
        """U_{-n}: cubes of the corner orthant entirely within {x+y+z <= -n}."""
        removed = set()
        for lvl in range(-n - 2, -2):
            # cube min corners m <= (-1,-1,-1) with m1+m2+m3 = lvl
            for i in range(lvl + 2, 0):
                for j in range(lvl - i + 1, 0):
                    k = lvl - i - j
                    if k <= -1:
                        removed.add((i, j, k))
        s = SteppedSolid(("corner",), frozenset(removed))
        s.validate()
        return s

    def ambient_contains(self, cube: Cube) -> bool:
        if self.ambient[0] == "corner":
            return all(c <= -1 for c in cube)
        top = self.ambient[1]
        return sum(cube) <= top - 3

    def contains_cube(self, cube: Cube) -> bool:
        return self.ambient_contains(cube) and cube not in self.removed

    def validate(self) -> None:
        """Removed set must be upward closed within the ambient solid."""
        for c in self.removed:
            if not self.ambient_contains(c):
                raise ValueError(f"removed cube {c} outside ambient solid")
            for a in AXES:
                above = tuple(c[i] + (1 if i == a else 0) for i in AXES)
                if self.ambient_contains(above) and above not in self.removed:
                    raise ValueError(
                        f"removed set not upward closed: {above} dominates {c}")

    def remove_cube(self, cube: Cube) -> "SteppedSolid":
        s = SteppedSolid(self.ambient, self.removed | {tuple(cube)})
        s.validate()
        return s

    def add_cube(self, cube: Cube) -> "SteppedSolid":
        cube = tuple(cube)
        if cube in self.removed:
            return SteppedSolid(self.ambient, self.removed - {cube})
        raise ValueError(f"cube {cube} is not removed (only removed cubes can be re-added)")

    def addable_cubes(self) -> list[Cube]:
        """Cubes m not in U whose three lower neighbors are in U (local-min vertices)."""
        out = []
        for m in sorted(self.removed):
            if all(self.contains_cube(tuple(m[i] - (1 if i == a else 0) for i in AXES))
                   for a in AXES):
                out.append(m)
        return out

    # -- surface geometry ---------------------------------------------------

    def square_on_surface(self, base: tuple[int, int, int], normal: int) -> bool:
        """Square from integer corner `base` orthogonal to `normal`: on the boundary?"""
        below = tuple(base[i] - (1 if i == normal else 0) for i in AXES)
        return self.contains_cube(below) != self.contains_cube(base)

    def surface_squares(self, lo: tuple[int, int, int],
                        hi: tuple[int, int, int]) -> list[tuple[tuple, int]]:
        """All surface squares with min corner in [lo, hi], as (base, normal)."""
        out = []
        for base in itertools.product(*(range(lo[a], hi[a] + 1) for a in AXES)):
            for n in AXES:
                if self.square_on_surface(base, n):
                    out.append((base, n))
        return out

    def vertex_on_surface(self, v: tuple[int, int, int]) -> bool:
        """Integer point adjacent to at least one solid cube and one empty cube."""
        seen_in = seen_out = False
        for off in itertools.product((0, -1), repeat=3):
            cube = tuple(v[i] + off[i] for i in AXES)
            if self.contains_cube(cube):
                seen_in = True
            else:
                seen_out = True
        return seen_in and seen_out

    def removed_region_labels(self) -> list[Point]:
        """Surface labels (vertices and face centers) inside closed removed cubes."""
        pts: set[Point] = set()
        for c in self.removed:
            for off in itertools.product((0, 1), repeat=3):
                v = tuple(c[i] + off[i] for i in AXES)
                if self.vertex_on_surface(v):
                    pts.add(vertex(*v))
            for n in AXES:
                for side in (0, 1):
                    base = tuple(c[i] + (side if i == n else 0) for i in AXES)
                    if self.square_on_surface(base, n):
                        pts.add(face_center(base, n))
        return sorted(pts)

    def removed_bbox(self) -> tuple[tuple[int, int, int], tuple[int, int, int]] | None:
        if not self.removed:
            return None
        lo = tuple(min(c[a] for c in self.removed) for a in AXES)
        hi = tuple(max(c[a] for c in self.removed) + 1 for a in AXES)
        return lo, hi
