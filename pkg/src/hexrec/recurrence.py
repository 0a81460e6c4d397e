"""The octahedron, cube, Kashaev, and hexahedron recurrences.

Step functions are generic over the value type: exact rationals, exact
quadratic-extension values, mpmath floats, or LaurentPoly all work, provided
the type supports +, -, *, / and ** with int exponents.  For LaurentPoly the
divisions go through exact division, so a nonzero remainder (a violation of
the Laurent property) raises rather than silently truncating.

Propagation fills a field over Z^3_{1/2} upward in the level i+j+k from
initial data on a stepped surface, memoized so each point is computed once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Mapping

from .lattice import AXES, Point, SteppedSolid, face_center, vertex
from .laurent import LaurentPoly, VarTable


class RecurrenceError(Exception):
    pass


class MissingInitialValue(RecurrenceError):
    def __init__(self, point: Point):
        super().__init__(f"initial data does not determine point {point}")
        self.point = point


def octahedron_step(a1, a2, a3, a12, a13):
    """Corner completing a1*a23 = a2*a13 + a3*a12; returns a23."""
    if a1 == 0:
        raise ZeroDivisionError("octahedron step divides by a zero value")
    return (a2 * a13 + a3 * a12) / a1


def cube_step(g, g1, g2, g3, g12, g13, g23):
    """Corner completing g*g123 = g1*g23 + g2*g13 + g3*g12; returns g123."""
    if g == 0:
        raise ZeroDivisionError("cube step divides by a zero value")
    return (g1 * g23 + g2 * g13 + g3 * g12) / g


def hexahedron_step(h, h1, h2, h3, h12, h13, h23, hx, hy, hz):
    """One hexahedron move: returns (h123, hx1, hy2, hz3).

    hx/hy/hz are the face values on the yz/xz/xy faces based at the cube's
    minimum corner; hx1 etc. are the opposite faces one step up.
    """
    for v in (h, h1, h2, h3, h12, h13, h23, hx, hy, hz):
        if v == 0:
            raise ZeroDivisionError("hexahedron step requires nonzero inputs")
    xyz = hx * hy * hz
    t = h1 * h2 * h3
    s1 = h * h1 * h23
    s2 = h * h2 * h13
    s3 = h * h3 * h12
    common = xyz + t
    hx1 = (common + s1) / (hx * h)
    hy2 = (common + s2) / (hy * h)
    hz3 = (common + s3) / (hz * h)
    big = (xyz * xyz + xyz * (t + t + s1 + s2 + s3)
           + (h1 * h2 + h * h12) * (h1 * h3 + h * h13) * (h2 * h3 + h * h23))
    h123 = big / (h * h * xyz)
    return h123, hx1, hy2, hz3


def hexahedron_residuals(h, h1, h2, h3, h12, h13, h23, hx, hy, hz,
                         h123, hx1, hy2, hz3) -> tuple:
    """The four defining relations, moved to one side (all zero iff satisfied)."""
    xyz = hx * hy * hz
    t = h1 * h2 * h3
    r1 = hx1 * hx * h - (xyz + t + h * h1 * h23)
    r2 = hy2 * hy * h - (xyz + t + h * h2 * h13)
    r3 = hz3 * hz * h - (xyz + t + h * h3 * h12)
    r4 = (h123 * h * h * xyz
          - (xyz * xyz
             + xyz * (t + t + h * h1 * h23 + h * h2 * h13 + h * h3 * h12)
             + (h1 * h2 + h * h12) * (h1 * h3 + h * h13) * (h2 * h3 + h * h23)))
    return r1, r2, r3, r4


def kashaev_residual(f0, f1, f2, f3, f4, f5, f6, f7):
    """Degree-2 relation tying the eight corner values of a cube.

    Convention: f0 at the base corner, f1/f2/f3 adjacent, f4/f5/f6 opposite
    to f1/f2/f3 (i.e. f4 at +e2+e3 and so on), f7 at the top corner.
    """
    return (f0 * f0 * f7 * f7 + f1 * f1 * f4 * f4 + f2 * f2 * f5 * f5
            + f3 * f3 * f6 * f6
            - 2 * (f1 * f2 * f4 * f5 + f1 * f4 * f3 * f6 + f2 * f3 * f5 * f6)
            - 2 * f0 * f7 * (f1 * f4 + f2 * f5 + f3 * f6)
            - 4 * (f0 * f4 * f5 * f6 + f7 * f1 * f2 * f3))


def kashaev_step(f, f1, f2, f3, f12, f13, f23, x, y, z, rel_tol=None):
    """Canonical-branch Kashaev move: returns (f123, x1, y2, z3).

    Inputs must be positive and the square variables must satisfy
    x^2 = f*f23 + f2*f3 (and cyclically); exact types are checked exactly,
    floats within rel_tol (default 1e-30).
    """
    vals = (f, f1, f2, f3, f12, f13, f23, x, y, z)
    for v in vals:
        if not _positive(v):
            raise ValueError("kashaev step requires positive inputs")
    _check_square(x, f * f23 + f2 * f3, rel_tol, "X")
    _check_square(y, f * f13 + f1 * f3, rel_tol, "Y")
    _check_square(z, f * f12 + f1 * f2, rel_tol, "Z")
    x1 = (f1 * x + y * z) / f
    y2 = (f2 * y + x * z) / f
    z3 = (f3 * z + x * y) / f
    f123 = (2 * f1 * f2 * f3 + f * (f1 * f23 + f2 * f13 + f3 * f12)
            + 2 * x * y * z) / (f * f)
    return f123, x1, y2, z3


def _positive(v) -> bool:
    try:
        return float(v) > 0
    except (TypeError, ValueError):
        return True  # symbolic values are vetted elsewhere


def _check_square(r, target, rel_tol, name: str) -> None:
    lhs = r * r
    if isinstance(lhs, (int, Fraction)) and isinstance(target, (int, Fraction)):
        if lhs != target:
            raise ValueError(f"{name}^2 does not match its defining product")
        return
    try:
        diff = abs(float(lhs - target))
        scale = abs(float(target))
    except (TypeError, ValueError):
        if lhs != target:
            raise ValueError(f"{name}^2 does not match its defining product")
        return
    tol = rel_tol if rel_tol is not None else 1e-30
    if diff > tol * max(scale, 1.0):
        raise ValueError(f"{name}^2 does not match its defining product")


# -- lattice propagation --------------------------------------------------------


@dataclass
class LatticeField:
    """Values on points of Z^3_{1/2}; all stored values are nonzero."""

    values: dict = field(default_factory=dict)

    def __getitem__(self, p: Point):
        return self.values[p]

    def __contains__(self, p: Point) -> bool:
        return p in self.values

    def set(self, p: Point, v) -> None:
        if v == 0:
            raise ValueError(f"zero value at {p} (recurrences divide by stored values)")
        self.values[p] = v


def generating_cube(p: Point) -> tuple[int, int, int]:
    """Minimum corner of the cube whose step outputs the value at p."""
    if p.is_vertex():
        i, j, k = (c // 2 for c in p.d)
        return (i - 1, j - 1, k - 1)
    n = p.face_normal()
    base = [(c - (0 if a == n else 1)) // 2 for a, c in zip(AXES, p.d)]
    base[n] -= 1
    return tuple(base)


def step_points(v: tuple[int, int, int]) -> tuple[list[Point], list[Point]]:
    """(inputs, outputs) of the hexahedron step at cube min-corner v."""
    i, j, k = v
    ins = [vertex(i, j, k),
           vertex(i + 1, j, k), vertex(i, j + 1, k), vertex(i, j, k + 1),
           vertex(i + 1, j + 1, k), vertex(i + 1, j, k + 1), vertex(i, j + 1, k + 1),
           face_center(v, 0), face_center(v, 1), face_center(v, 2)]
    outs = [vertex(i + 1, j + 1, k + 1),
            face_center((i + 1, j, k), 0),
            face_center((i, j + 1, k), 1),
            face_center((i, j, k + 1), 2)]
    return ins, outs


def propagate(initial: Mapping[Point, Any], targets: Iterable[Point],
              default: Callable[[Point], Any] | None = None) -> LatticeField:
    """Extend initial data to the target points via hexahedron steps.

    Memoized: each cube step runs once.  Points found neither in `initial`
    nor via `default` recurse through their generating cube; if the
    recursion bottoms out, MissingInitialValue names the offending point.
    """
    fld = LatticeField()
    for p, v in initial.items():
        fld.set(p, v)
    stack_guard: set = set()

    def value(p: Point):
        if p in fld.values:
            return fld.values[p]
        if default is not None:
            v = default(p)
            if v is not None:
                fld.set(p, v)
                return v
        if p in stack_guard:
            raise MissingInitialValue(p)
        stack_guard.add(p)
        cube = generating_cube(p)
        ins, outs = step_points(cube)
        if p not in outs:
            raise MissingInitialValue(p)
        if min(q.level for q in ins) >= p.level:
            raise MissingInitialValue(p)
        args = [value(q) for q in ins]
        h123, hx1, hy2, hz3 = hexahedron_step(*args)
        for q, val in zip(outs, (h123, hx1, hy2, hz3)):
            if q not in fld.values:
                fld.set(q, val)
        stack_guard.discard(p)
        return fld.values[p]

    import sys
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 100000))
    try:
        for t in targets:
            value(t)
    finally:
        sys.setrecursionlimit(old)
    return fld


def slab_default(values_by_level: Mapping[tuple[str, int], Any]) -> Callable[[Point], Any]:
    """Initial-data rule for the canonical slab 0 <= level <= 2.

    values_by_level maps ('vertex', L) for L in 0..2 and ('face', 1) to the
    value used at integer points of level L and face centers of level 1.
    """

    def rule(p: Point):
        if p.is_vertex() and 0 <= p.level <= 2:
            return values_by_level.get(("vertex", p.level))
        if not p.is_vertex() and p.level == 1:
            return values_by_level.get(("face", 1))
        return None

    return rule


def symbolic_initial(solid: SteppedSolid, table: VarTable | None = None
                     ) -> tuple[dict, VarTable]:
    """One fresh variable per surface label in the removed region of `solid`."""
    if table is None:
        table = VarTable()
    data = {}
    for p in solid.removed_region_labels():
        data[p] = table.variable(p)
    return data, table


def apex_polynomial(solid: SteppedSolid, table: VarTable | None = None
                    ) -> tuple[LaurentPoly, VarTable]:
    """A(0,0,0) as a Laurent polynomial in the removed-region surface labels."""
    if solid.ambient[0] != "corner":
        raise ValueError("apex propagation requires a corner-orthant solid")
    data, table = symbolic_initial(solid, table)
    fld = propagate(data, [vertex(0, 0, 0)])
    return fld[vertex(0, 0, 0)], table


# -- isotropic solutions -----------------------------------------------------------


@dataclass
class IsotropicHex:
    """Isotropic hexahedron data: A_n at integer points with i+j+k = n,
    B_n at face centers with coordinate sum n+1."""

    a0: Any
    a1: Any
    a2: Any
    b0: Any

    def iterate(self, n: int) -> tuple[list, list]:
        """(A[0..n], B[0..max(n-2,0)]) by repeated hexahedron steps."""
        A = [self.a0, self.a1, self.a2]
        B = [self.b0]
        for m in range(0, max(n - 2, 0)):
            a_next, b_next, _, _ = hexahedron_step(
                A[m], A[m + 1], A[m + 1], A[m + 1],
                A[m + 2], A[m + 2], A[m + 2],
                B[m], B[m], B[m])
            A.append(a_next)
            B.append(b_next)
        return A[:n + 1], B

    def derived(self) -> tuple:
        """(A3, B1, B2) from one step at level 0 and one at level 1."""
        a3, b1, _, _ = hexahedron_step(self.a0, self.a1, self.a1, self.a1,
                                       self.a2, self.a2, self.a2,
                                       self.b0, self.b0, self.b0)
        _, b2, _, _ = hexahedron_step(self.a1, self.a2, self.a2, self.a2,
                                      a3, a3, a3, b1, b1, b1)
        return a3, b1, b2

    def closed_form(self, n: int) -> tuple:
        """(A_n, B_n) from the quadratic-exponent closed forms."""
        if n < 0:
            raise ValueError("n must be nonnegative")
        a0, a1, a2, b0 = self.a0, self.a1, self.a2, self.b0
        a3, b1, b2 = self.derived()
        if n % 2 == 0:
            m = n // 2
            an = (_pow(a0, (m - 1) ** 2) * _pow(a3, m * m - m)
                  / (_pow(a1, m * m - m) * _pow(a2, m * m - 2 * m)))
            bn = (_pow(a0, m * m - m) * _pow(b2, m * m)
                  / (_pow(a2, m * m - m) * _pow(b0, m * m - 1)))
        else:
            m = (n - 1) // 2
            an = (_pow(a0, m * m - m) * _pow(a3, m * m)
                  / (_pow(a1, m * m - 1) * _pow(a2, m * m - m)))
            bn = (_pow(a0, m * m) * b1 * _pow(b2, m * m + m)
                  / (_pow(a2, m * m) * _pow(b0, m * m + m)))
        return an, bn


def _pow(v, e: int):
    if e >= 0:
        return v ** e
    return 1 / (v ** (-e))


def isotropic_closed_form(ih: IsotropicHex, n: int) -> tuple:
    return ih.closed_form(n)
