"""Z^d-invariant algebraic recurrences: homogeneity degree, isotropic base,
derivative recurrence, characteristic polynomial.

An algebraic recurrence is sum_alpha c_alpha * prod_{w in E_alpha} x_{v+w} = 0
with integer shift multisets E_alpha and rational coefficients.  The degree of
homogeneity against a linear functional ell is the largest j such that the
power sums sum_{w in E_alpha} ell(w)^i agree across alpha for all i <= j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from .laurent import LaurentPoly, VarTable


class HomogeneityError(Exception):
    pass


@dataclass(frozen=True)
class AlgRecurrence:
    """terms: ((c_alpha, E_alpha), ...) with E_alpha a sorted tuple of int vectors."""

    terms: tuple
    ell: tuple
    dim: int

    @staticmethod
    def build(terms: Iterable[tuple], ell: Sequence[int]) -> "AlgRecurrence":
        norm = []
        dim = len(ell)
        for c, vecs in terms:
            vv = tuple(sorted(tuple(int(x) for x in w) for w in vecs))
            if not vv:
                raise ValueError("every shift multiset must be nonempty")
            for w in vv:
                if len(w) != dim:
                    raise ValueError("shift dimension does not match ell")
            norm.append((Fraction(c), vv))
        return AlgRecurrence(tuple(norm), tuple(int(x) for x in ell), dim)

    def height(self, w: tuple) -> int:
        return sum(l * x for l, x in zip(self.ell, w))

    def with_ell(self, ell: Sequence[int]) -> "AlgRecurrence":
        return AlgRecurrence.build([(c, E) for c, E in self.terms], ell)


def octahedron_recurrence(ell: Sequence[int] = (0, 1, 1)) -> AlgRecurrence:
    return AlgRecurrence.build(
        [(1, ((1, 0, 0), (0, 1, 1))),
         (-1, ((0, 1, 0), (1, 0, 1))),
         (-1, ((0, 0, 1), (1, 1, 0)))],
        ell)


def cube_recurrence(ell: Sequence[int] = (1, 1, 1)) -> AlgRecurrence:
    return AlgRecurrence.build(
        [(1, ((0, 0, 0), (1, 1, 1))),
         (-1, ((1, 0, 0), (0, 1, 1))),
         (-1, ((0, 1, 0), (1, 0, 1))),
         (-1, ((0, 0, 1), (1, 1, 0)))],
        ell)


@dataclass(frozen=True)
class HomogeneityDegree:
    delta: object  # int, or math.inf when every power sum is constant
    betas: tuple   # (beta_0, ..., beta_delta); the full list when finite

    @property
    def infinite(self) -> bool:
        return self.delta == math.inf


def homogeneity_degree(r: AlgRecurrence) -> HomogeneityDegree:
    """Largest delta with constant power sums for all j <= delta."""
    height_multisets = [tuple(sorted(r.height(w) for w in E)) for _, E in r.terms]
    if all(h == height_multisets[0] for h in height_multisets):
        return HomogeneityDegree(math.inf, ())
    betas = []
    j = 0
    while True:
        sums = [sum(Fraction(h) ** j for h in hm) for hm in height_multisets]
        if any(s != sums[0] for s in sums):
            return HomogeneityDegree(j - 1, tuple(betas))
        betas.append(sums[0])
        j += 1


@dataclass(frozen=True)
class Gamma:
    """Positive isotropic base, with its exact defining polynomial.

    defining: dict exponent -> Fraction, the polynomial sum c_alpha t^{l(alpha)}
    shifted so min exponent is 0.  When binomial, gamma = radical_base**(1/radical_index)
    exactly; value(prec) evaluates at the given binary precision.
    """

    defining: tuple
    radical_base: Fraction | None
    radical_index: int | None
    approx: Fraction  # rational isolation of the root, accurate to ~1e-50

    @property
    def is_radical(self) -> bool:
        return self.radical_base is not None

    def value(self, prec: int = 256):
        with mpmath.workprec(prec):
            if self.is_radical:
                return mpmath.root(mpmath.mpf(self.radical_base.numerator)
                                   / self.radical_base.denominator, self.radical_index)
            return mpmath.mpf(self.approx.numerator) / self.approx.denominator

    def power_exact(self, e: int) -> Fraction | None:
        """gamma**e as an exact rational, when that is exact (binomial case)."""
        if self.is_radical and e % self.radical_index == 0:
            return self.radical_base ** (e // self.radical_index)
        if e == 0:
            return Fraction(1)
        return None


def isotropic_gamma(r: AlgRecurrence) -> Gamma:
    """Positive gamma with sum_alpha c_alpha gamma^{l(alpha)} = 0,
    l(alpha) = sum_{w in E_alpha} ell(w)^delta, delta = homogeneity degree + 1."""
    hd = homogeneity_degree(r)
    if hd.infinite:
        raise HomogeneityError("recurrence is homogeneous to all orders; no gamma equation")
    delta = hd.delta + 1
    classes: dict[int, Fraction] = {}
    for c, E in r.terms:
        m = sum(r.height(w) ** delta for w in E)
        classes[m] = classes.get(m, Fraction(0)) + c
    classes = {m: s for m, s in classes.items() if s != 0}
    if len(classes) < 2:
        raise HomogeneityError(
            "hypothesis failure: fewer than two exponent classes with nonzero coefficient sum")
    m_min = min(classes)
    shifted = {m - m_min: s for m, s in classes.items()}
    defining = tuple(sorted(shifted.items()))
    if len(shifted) == 2:
        k = max(shifted)
        ratio = -shifted[0] / shifted[k]
        if ratio <= 0:
            raise HomogeneityError("no positive root for gamma")
        approx = _nth_root_rational(ratio, k)
        return Gamma(defining, ratio, k, approx)
    root = _positive_root(shifted)
    if root is None:
        raise HomogeneityError("no positive root for gamma")
    return Gamma(defining, None, None, root)


def _nth_root_rational(r: Fraction, k: int, bits: int = 200) -> Fraction:
    with mpmath.workprec(bits + 64):
        v = mpmath.root(mpmath.mpf(r.numerator) / r.denominator, k)
        return Fraction(mpmath.nstr(v, 60, strip_zeros=False))


def _positive_root(poly: dict[int, Fraction]) -> Fraction | None:
    """First positive real root of sum c_e t^e by scan + bisection (exact signs)."""

    def val(t: Fraction) -> Fraction:
        return sum(c * t ** e for e, c in poly.items())

    bound = 1 + max(abs(c) for c in poly.values()) / abs(poly[max(poly)])
    lo, prev = None, None
    t = Fraction(1, 10 ** 6)
    while t <= 2 * bound:
        v = val(t)
        if v == 0:
            return t
        if prev is not None and (v > 0) != (prev > 0):
            lo = (tprev, t)
            break
        prev, tprev = v, t
        t = t * 2
    if lo is None:
        return None
    a, b = lo
    fa = val(a)
    for _ in range(400):
        mid = (a + b) / 2
        fm = val(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (fa > 0):
            a, fa = mid, fm
        else:
            b = mid
    return (a + b) / 2


@dataclass(frozen=True)
class DerivedLinearRec:
    """Constant-coefficient linear recurrence sum_w b_w g(v+w) = 0.

    Normalized so c'_alpha = c_alpha * gamma^{l(alpha) - min l}; exact
    rationals in the binomial-gamma case (all the worked instances).
    """

    coeffs: tuple          # ((w, b_w), ...) over the multiset union, summed per shift
    cprime: tuple          # ((c'_alpha, E_alpha), ...)
    gamma: Gamma
    dim: int

    def shift_map(self) -> dict:
        return dict(self.coeffs)


def derivative_recurrence(r: AlgRecurrence) -> DerivedLinearRec:
    hd = homogeneity_degree(r)
    if hd.infinite:
        raise HomogeneityError("recurrence is homogeneous to all orders")
    delta = hd.delta + 1
    gamma = isotropic_gamma(r)
    ls = [sum(r.height(w) ** delta for w in E) for _, E in r.terms]
    m_min = min(l for l, (c, E) in zip(ls, r.terms))
    cprime = []
    for l, (c, E) in zip(ls, r.terms):
        p = gamma.power_exact(l - m_min)
        if p is None:
            raise HomogeneityError(
                "gamma powers are irrational here; normalized coefficients are not rational")
        cprime.append((c * p, E))
    b: dict[tuple, Fraction] = {}
    for cp, E in cprime:
        for w in E:
            b[w] = b.get(w, Fraction(0)) + cp
    coeffs = tuple(sorted(b.items()))
    return DerivedLinearRec(coeffs, tuple(cprime), gamma, r.dim)


_VAR_NAMES = ("x", "y", "z")


def characteristic_polynomial(dlr: DerivedLinearRec, table: VarTable | None = None
                              ) -> LaurentPoly:
    """H = sum_w b_w x^w over variables x, y, z (x1.. beyond dimension 3)."""
    if table is None:
        table = VarTable()
    names = [_VAR_NAMES[i] if dlr.dim <= 3 else f"x{i+1}" for i in range(dlr.dim)]
    out = table.zero()
    for w, bw in dlr.coeffs:
        out = out + table.monomial(bw, {names[i]: w[i] for i in range(dlr.dim)})
    return out


# -- CLI text format ------------------------------------------------------------


def parse_algrec(text: str, ell: Sequence[int]) -> AlgRecurrence:
    """One term per line: "c_alpha : (w1)(w2)..." with integer vectors."""
    terms = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        head, _, rest = line.partition(":")
        vecs = []
        for chunk in rest.split(")"):
            chunk = chunk.strip().lstrip("(")
            if not chunk:
                continue
            vecs.append(tuple(int(x) for x in chunk.split(",")))
        if not vecs:
            raise ValueError(f"term with no shift vectors: {line!r}")
        terms.append((Fraction(head.strip()), tuple(vecs)))
    return AlgRecurrence.build(terms, ell)
