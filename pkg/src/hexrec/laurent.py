"""Exact sparse multivariate Laurent polynomials over arbitrary-precision rationals.

Representation conventions:

  Monomial = tuple of (variable_index, exponent) pairs, sorted by index,
             with every exponent nonzero.  () is the constant monomial.
  terms    = dict mapping Monomial -> Fraction, no zero coefficients stored.

Two polynomials are equal iff they share the same VarTable object and have
identical term dicts; all operations return canonical form, so structural
equality is semantic equality.  Values are immutable after construction and
safe to share across threads.

Exponents may be negative (Laurent ring).  Exact division is the workhorse:
division by a monomial always succeeds, division by a general polynomial
either returns the exact quotient or raises NonExactDivision carrying the
nonzero remainder.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping

Monomial = tuple  # tuple[(int index, int exponent), ...], sorted, exponents nonzero

_TERM_CAP = 10 ** 7


def set_term_cap(cap: int) -> None:
    """Set the global cap on stored terms; exceeded caps raise TermCapExceeded."""
    global _TERM_CAP
    if cap <= 0:
        raise ValueError("term cap must be positive")
    _TERM_CAP = cap


def get_term_cap() -> int:
    return _TERM_CAP


class LaurentError(Exception):
    pass


class VariableTableMismatch(LaurentError):
    """Operands built over different VarTable objects."""


class NonExactDivision(LaurentError):
    """Division left a nonzero remainder (a bug or a non-Laurent step)."""

    def __init__(self, message: str, remainder: "LaurentPoly"):
        super().__init__(message)
        self.remainder = remainder


class TermCapExceeded(LaurentError):
    """A result would exceed the configured term cap."""


class VarTable:
    """Ordered variable registry mapping hashable labels to indices.

    Labels are typically half-lattice points (str() renders "i,j,k" with
    halves as "p/2") but any hashable with a stable str() works.  Indices are
    append-only within one computation and never reused.
    """

    def __init__(self, labels: Iterable[Hashable] = ()):
        self._labels: list[Hashable] = []
        self._index: dict[Hashable, int] = {}
        for lab in labels:
            self.add(lab)

    def add(self, label: Hashable) -> int:
        """Register label (idempotent) and return its index."""
        if label in self._index:
            return self._index[label]
        idx = len(self._labels)
        self._labels.append(label)
        self._index[label] = idx
        return idx

    def index_of(self, label: Hashable) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown variable label {label!r}") from None

    def __contains__(self, label: Hashable) -> bool:
        return label in self._index

    def label(self, index: int) -> Hashable:
        return self._labels[index]

    def labels(self) -> list[Hashable]:
        return list(self._labels)

    def __len__(self) -> int:
        return len(self._labels)

    # -- polynomial constructors ------------------------------------------

    def zero(self) -> "LaurentPoly":
        return LaurentPoly(self, {})

    def const(self, value) -> "LaurentPoly":
        c = Fraction(value)
        return LaurentPoly(self, {} if c == 0 else {(): c})

    def one(self) -> "LaurentPoly":
        return self.const(1)

    def variable(self, label: Hashable, exponent: int = 1) -> "LaurentPoly":
        """The monomial label**exponent, registering the label if needed."""
        idx = self.add(label)
        if exponent == 0:
            return self.one()
        return LaurentPoly(self, {((idx, exponent),): Fraction(1)})

    def monomial(self, coeff, exps: Mapping[Hashable, int]) -> "LaurentPoly":
        c = Fraction(coeff)
        if c == 0:
            return self.zero()
        mono = tuple(sorted((self.add(lab), e) for lab, e in exps.items() if e != 0))
        return LaurentPoly(self, {mono: c})


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for idx, e in b:
        ne = out.get(idx, 0) + e
        if ne == 0:
            del out[idx]
        else:
            out[idx] = ne
    return tuple(sorted(out.items()))


def _mono_div(a: Monomial, b: Monomial) -> Monomial:
    return _mono_mul(a, tuple((i, -e) for i, e in b))


class LaurentPoly:
    """Immutable sparse Laurent polynomial bound to a VarTable."""

    __slots__ = ("table", "terms", "_hash")

    def __init__(self, table: VarTable, terms: dict):
        self.table = table
        self.terms = terms
        self._hash = None
        if len(terms) > _TERM_CAP:
            raise TermCapExceeded(f"{len(terms)} terms exceeds cap {_TERM_CAP}")

    # -- basics ------------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def nterms(self) -> int:
        return len(self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def constant_value(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        if not self.is_constant():
            raise LaurentError("not a constant polynomial")
        return self.terms[()]

    def coefficient(self, mono: Monomial) -> Fraction:
        return self.terms.get(mono, Fraction(0))

    def degree_in(self, label: Hashable) -> tuple[int, int]:
        """(min, max) exponent of label across terms (0,0 if absent everywhere)."""
        idx = self.table.index_of(label)
        lo = hi = 0
        for mono in self.terms:
            e = dict(mono).get(idx, 0)
            lo = min(lo, e)
            hi = max(hi, e)
        return lo, hi

    def variables_used(self) -> set:
        out: set = set()
        for mono in self.terms:
            for idx, _ in mono:
                out.add(idx)
        return out

    def _check(self, other: "LaurentPoly") -> None:
        if self.table is not other.table:
            raise VariableTableMismatch("variable-table mismatch")

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        return self.table.const(other)

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self.table is other.table and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == ({} if other == 0 else {(): Fraction(other)})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((id(self.table), tuple(sorted(self.terms.items()))))
        return self._hash

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            nc = out.get(mono)
            if nc is None:
                out[mono] = c
            else:
                nc = nc + c
                if nc == 0:
                    del out[mono]
                else:
                    out[mono] = nc
        return LaurentPoly(self.table, out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.table, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if len(self.terms) * len(other.terms) > 4 * _TERM_CAP:
            raise TermCapExceeded("product term bound exceeds cap")
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                c = out.get(m)
                if c is None:
                    out[m] = c1 * c2
                else:
                    c = c + c1 * c2
                    if c == 0:
                        del out[m]
                    else:
                        out[m] = c
        return LaurentPoly(self.table, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if not isinstance(n, int):
            raise TypeError("exponent must be int")
        if n < 0:
            if not self.is_monomial():
                raise LaurentError("negative power of a non-monomial")
            mono, c = next(iter(self.terms.items()))
            if abs(c.numerator) != 1 and c.denominator != 1:
                pass  # rational coefficient inverts fine below
            inv = LaurentPoly(self.table, {tuple((i, -e) for i, e in mono): 1 / c})
            return inv ** (-n)
        result = self.table.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __truediv__(self, other) -> "LaurentPoly":
        return div_exact(self, self._coerce(other))

    # -- ordering helpers ----------------------------------------------------

    def _leading(self) -> tuple[Monomial, Fraction]:
        """Lexicographically largest monomial (total order on canonical keys)."""
        mono = max(self.terms, key=_lex_key_factory(self))
        return mono, self.terms[mono]

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: _term_sort_key(kv[0]))

    # -- display ---------------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            factors = []
            if c != 1 or not mono:
                factors.append(str(c))
            for idx, e in mono:
                lab = self.table.label(idx)
                factors.append(f"({lab})" if e == 1 else f"({lab})^{e}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    __repr__ = __str__


def _term_sort_key(mono: Monomial):
    return (len(mono), mono)


def _lex_key_factory(p: LaurentPoly) -> Callable[[Monomial], tuple]:
    """Key mapping a monomial to its dense exponent vector (lex on sorted indices)."""
    nvars = len(p.table)

    def key(mono: Monomial) -> tuple:
        dense = [0] * nvars
        for idx, e in mono:
            dense[idx] = e
        return tuple(dense)

    return key


# -- operations ---------------------------------------------------------------


def add(lhs: LaurentPoly, rhs: LaurentPoly) -> LaurentPoly:
    return lhs + rhs


def sub(lhs: LaurentPoly, rhs: LaurentPoly) -> LaurentPoly:
    return lhs - rhs


def mul(lhs: LaurentPoly, rhs: LaurentPoly) -> LaurentPoly:
    return lhs * rhs


def arith(lhs: LaurentPoly, rhs: LaurentPoly, kind: str) -> LaurentPoly:
    """Dispatch form of +|-|* used by the CLI / JSON surfaces."""
    try:
        op = {"add": add, "sub": sub, "mul": mul}[kind]
    except KeyError:
        raise ValueError(f"unknown arithmetic kind {kind!r}") from None
    return op(lhs, rhs)


def _mono_content(p: LaurentPoly) -> Monomial:
    """Componentwise-min exponent monomial of p (its monomial content)."""
    mins: dict[int, int] = {}
    first = True
    for mono in p.terms:
        d = dict(mono)
        if first:
            mins = dict(d)
            first = False
        else:
            for idx in list(mins):
                mins[idx] = min(mins[idx], d.get(idx, 0))
            for idx in d:
                if idx not in mins:
                    mins[idx] = min(0, d[idx])
        for idx in list(mins):
            if idx not in d:
                mins[idx] = min(mins[idx], 0)
    return tuple(sorted((i, e) for i, e in mins.items() if e != 0))


def _shift(p: LaurentPoly, mono: Monomial) -> LaurentPoly:
    if not mono:
        return p
    return LaurentPoly(p.table, {_mono_mul(m, mono): c for m, c in p.terms.items()})


def div_exact(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly:
    """Exact quotient num/den; raises NonExactDivision with the remainder.

    Monomial divisors always succeed (Laurent ring).  General divisors are
    reduced by leading-term elimination in lex order after clearing the
    monomial content of both operands.
    """
    if num.table is not den.table:
        raise VariableTableMismatch("variable-table mismatch")
    if den.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if num.is_zero():
        return num.table.zero()
    if den.is_monomial():
        mono, c = next(iter(den.terms.items()))
        inv = tuple((i, -e) for i, e in mono)
        return LaurentPoly(num.table, {_mono_mul(m, inv): cc / c for m, cc in num.terms.items()})

    cn = _mono_content(num)
    cd = _mono_content(den)
    n = _shift(num, tuple((i, -e) for i, e in cn))
    d = _shift(den, tuple((i, -e) for i, e in cd))
    key = _lex_key_factory(n)
    dlead = max(d.terms, key=key)
    dlead_c = d.terms[dlead]
    dlead_d = dict(dlead)

    quot: dict = {}
    steps = 0
    while n.terms:
        steps += 1
        if steps > _TERM_CAP:
            raise TermCapExceeded("division step cap exceeded")
        nlead = max(n.terms, key=key)
        qd = dict(nlead)
        ok = True
        for idx, e in dlead_d.items():
            ne = qd.get(idx, 0) - e
            if ne < 0:
                ok = False
                break
            if ne == 0:
                qd.pop(idx, None)
            else:
                qd[idx] = ne
        if not ok:
            rem = _shift(n, cn)
            raise NonExactDivision("non-exact division", rem)
        qmono = tuple(sorted(qd.items()))
        qc = n.terms[nlead] / dlead_c
        quot[qmono] = qc
        q1 = LaurentPoly(n.table, {qmono: qc})
        n = n - q1 * d
    shift = _mono_mul(cn, tuple((i, -e) for i, e in cd))
    return _shift(LaurentPoly(num.table, quot), shift)


def evaluate(p: LaurentPoly, point: Mapping[int, Any]):
    """Evaluate p at point (index -> value), exactly over any field-like values.

    Every occurring variable must be assigned; variables carrying negative
    exponents require a nonzero value.
    """
    total = None
    for mono, c in p.terms.items():
        v = c
        for idx, e in mono:
            if idx not in point:
                raise LaurentError(
                    f"unassigned variable {p.table.label(idx)!r} in evaluation")
            x = point[idx]
            if e < 0:
                if x == 0:
                    raise ZeroDivisionError(
                        f"zero assigned to variable {p.table.label(idx)!r} "
                        f"with negative exponent")
                if isinstance(x, int):
                    x = Fraction(x)
                v = v * (1 / x) ** (-e)
            else:
                v = v * x ** e
        total = v if total is None else total + v
    if total is None:
        return Fraction(0)
    return total


def evaluate_labels(p: LaurentPoly, point_by_label: Mapping[Hashable, Any]):
    """evaluate() with the point keyed by variable labels instead of indices."""
    point = {}
    for lab, v in point_by_label.items():
        if lab in p.table:
            point[p.table.index_of(lab)] = v
    return evaluate(p, point)


def substitute(p: LaurentPoly, var: int, image: LaurentPoly) -> LaurentPoly:
    """Substitute image for variable index var in p.

    If var occurs with a negative exponent the image must be a single
    monomial (invertible); otherwise raises.
    """
    p._check(image)
    lo, _ = _min_max_exponent(p, var)
    if lo < 0 and not image.is_monomial():
        raise LaurentError("non-invertible image")
    out = p.table.zero()
    for k, pk in _slices_by_exponent(p, var).items():
        out = out + pk * image ** k
    return out


def substitute_clearing(p: LaurentPoly, var: int, image: LaurentPoly) -> LaurentPoly:
    """Substitute a polynomial image even where var has negative exponents.

    Multiplies through by image**s (s = -min exponent), substitutes, and
    divides back exactly; raises NonExactDivision if the result is not
    Laurent in the remaining variables.
    """
    p._check(image)
    slices = _slices_by_exponent(p, var)
    lo = min(slices) if slices else 0
    s = max(0, -lo)
    acc = p.table.zero()
    for k, pk in slices.items():
        acc = acc + pk * image ** (k + s)
    if s == 0:
        return acc
    return div_exact(acc, image ** s)


def _min_max_exponent(p: LaurentPoly, var: int) -> tuple[int, int]:
    lo = hi = 0
    for mono in p.terms:
        e = dict(mono).get(var, 0)
        lo = min(lo, e)
        hi = max(hi, e)
    return lo, hi


def _slices_by_exponent(p: LaurentPoly, var: int) -> dict[int, LaurentPoly]:
    """Split p as sum_k var^k * p_k with p_k free of var."""
    buckets: dict[int, dict] = {}
    for mono, c in p.terms.items():
        d = dict(mono)
        k = d.pop(var, 0)
        rest = tuple(sorted(d.items()))
        buckets.setdefault(k, {})[rest] = c
    return {k: LaurentPoly(p.table, terms) for k, terms in buckets.items()}


# -- JSON ---------------------------------------------------------------------


def to_json(p: LaurentPoly) -> list[dict]:
    """Schema: [{"coeff": "p/q", "exps": {"i,j,k": e, ...}}, ...], sorted."""
    out = []
    for mono, c in p.sorted_terms():
        exps = {str(p.table.label(idx)): e for idx, e in mono}
        out.append({"coeff": str(c), "exps": exps})
    return out


def from_json(data: list[dict], table: VarTable,
              parse_label: Callable[[str], Hashable] = lambda s: s) -> LaurentPoly:
    out = table.zero()
    for term in data:
        coeff = Fraction(term["coeff"])
        exps = {parse_label(k): int(v) for k, v in term["exps"].items()}
        out = out + table.monomial(coeff, exps)
    return out
