"""Exact sparse multivariate polynomials over the rationals.

A ``Poly`` maps monomials to ``Fraction`` coefficients.  A monomial is a
tuple of ``(name, exponent)`` pairs sorted by name; the empty tuple is the
constant monomial.  Zero coefficients are never stored.

Indeterminates come in two kinds:

* ``VARS`` -- the formal variables ``d`` (the derivation), ``l``, ``m``,
  ``n`` (the spectral parameters) and the auxiliary ``x``, ``y``.
* every other name is a *parameter*: an exact transcendental such as
  ``a``, ``b``, ``alpha1``.  Parameters are field elements for the linear
  algebra layer and may only be replaced through :meth:`Poly.subs_params`.

Text rendering uses ``*`` and ``^`` and is accepted back by the DSL parser.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

VARS: tuple[str, ...] = ("d", "l", "m", "n", "x", "y")
_VAR_SET = frozenset(VARS)

Monomial = tuple  # tuple[tuple[str, int], ...]
Scalar = Union[int, Fraction]

NEG_INF = float("-inf")


class PolyError(ValueError):
    pass


class ParamBindingError(PolyError):
    """A substitution tried to bind a parameter instead of a variable."""


def is_var(name: str) -> bool:
    return name in _VAR_SET


def _rank(name: str) -> tuple:
    if name in _VAR_SET:
        return (0, VARS.index(name), "")
    return (1, 0, name)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for k, e in b:
        out[k] = out.get(k, 0) + e
    return tuple(sorted(out.items()))


def _mono_key(mono: Monomial) -> tuple:
    # graded reverse sort key: higher total degree first, then lex by rank
    deg = sum(e for _, e in mono)
    return (-deg, tuple(sorted((_rank(k), -e) for k, e in mono)))


class Poly:
    """Immutable sparse polynomial with rational coefficients."""

    __slots__ = ("_t", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        if terms is None:
            self._t: dict = {}
        else:
            self._t = {m: Fraction(c) for m, c in terms.items() if c != 0}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Poly":
        p = cls.__new__(cls)
        p._t = terms
        p._hash = None
        return p

    # -- constructors -------------------------------------------------
    @classmethod
    def const(cls, c: Scalar) -> "Poly":
        c = Fraction(c)
        return cls._raw({(): c} if c else {})

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls._raw({((name, 1),): Fraction(1)})

    @classmethod
    def coerce(cls, x) -> "Poly":
        if isinstance(x, Poly):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.const(x)
        raise TypeError(f"cannot convert {type(x).__name__} to Poly")

    # -- inspection ---------------------------------------------------
    def terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in canonical (graded-lexicographic, descending) order."""
        return sorted(self._t.items(), key=lambda mc: _mono_key(mc[0]))

    def items(self):
        return self._t.items()

    def __len__(self) -> int:
        return len(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and () in self._t)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise PolyError(f"{self} is not constant")
        return self._t.get((), Fraction(0))

    def constant_term(self) -> Fraction:
        return self._t.get((), Fraction(0))

    def indeterminates(self) -> set[str]:
        return {k for m in self._t for k, _ in m}

    def params(self) -> set[str]:
        return {k for k in self.indeterminates() if k not in _VAR_SET}

    def variables(self) -> set[str]:
        return {k for k in self.indeterminates() if k in _VAR_SET}

    def has_vars(self) -> bool:
        return any(k in _VAR_SET for m in self._t for k, _ in m)

    def degree(self, v: str | None = None):
        """Degree in ``v`` (total degree if ``v`` is None); -inf for zero."""
        if not self._t:
            return NEG_INF
        if v is None:
            return max(sum(e for _, e in m) for m in self._t)
        return max(dict(m).get(v, 0) for m in self._t)

    def coeff(self, v: str, k: int) -> "Poly":
        """Coefficient of ``v**k`` as a polynomial in the other indeterminates."""
        out = {}
        for m, c in self._t.items():
            dm = dict(m)
            if dm.get(v, 0) == k:
                dm.pop(v, None)
                out[tuple(sorted(dm.items()))] = c
        return Poly._raw(out)

    def split(self, names: Iterable[str]) -> dict[Monomial, "Poly"]:
        """Group terms by their monomial in ``names``.

        Returns a map from the ``names``-monomial to its coefficient, a
        polynomial in the remaining indeterminates.
        """
        names = set(names)
        groups: dict = {}
        for m, c in self._t.items():
            inner = tuple(p for p in m if p[0] in names)
            outer = tuple(p for p in m if p[0] not in names)
            g = groups.setdefault(inner, {})
            g[outer] = g.get(outer, 0) + c
        return {k: Poly._raw({m: c for m, c in g.items() if c}) for k, g in groups.items()}

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction)):
                other = Poly.const(other)
            else:
                return NotImplemented
        if not other._t:
            return self
        if not self._t:
            return other
        out = dict(self._t)
        for m, c in other._t.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v += c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw({m: -c for m, c in self._t.items()})

    def __sub__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction)):
                other = Poly.const(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction)):
                if not other:
                    return Poly()
                if other == 1:
                    return self
                return Poly._raw({m: c * other for m, c in self._t.items()})
            return NotImplemented
        if not self._t or not other._t:
            return Poly()
        if len(other._t) == 1 and () in other._t:
            return self * other._t[()]
        if len(self._t) == 1 and () in self._t:
            return other * self._t[()]
        out: dict = {}
        for m1, c1 in self._t.items():
            for m2, c2 in other._t.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Poly":
        if isinstance(other, Poly):
            if not other.is_constant():
                raise PolyError("division by a non-constant polynomial; use divide_exact")
            other = other.constant_value()
        other = Fraction(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        return Poly._raw({m: c / other for m, c in self._t.items()})

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise PolyError("exponent must be a non-negative integer")
        result = Poly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- equality -----------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self._t == other._t
        if isinstance(other, (int, Fraction)):
            return self._t == ({(): Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    # -- substitution -------------------------------------------------
    def substitute(self, bindings: Mapping[str, "Poly"]) -> "Poly":
        """Simultaneously replace variables by polynomials."""
        for name in bindings:
            if name not in _VAR_SET:
                raise ParamBindingError(
                    f"substitute() binds variables only; {name!r} is a parameter"
                )
        return self._subs(bindings)

    def subs_params(self, assignment: Mapping[str, "Poly | Scalar"]) -> "Poly":
        """Replace parameters by rationals or by polynomials in parameters."""
        for name in assignment:
            if name in _VAR_SET:
                raise PolyError(f"{name!r} is a variable, not a parameter")
        return self._subs(assignment)

    def _subs(self, bindings: Mapping) -> "Poly":
        if not bindings or not self._t:
            return self
        imgs = {k: Poly.coerce(v) for k, v in bindings.items()}
        powers: dict = {}

        def power(name, e):
            key = (name, e)
            p = powers.get(key)
            if p is None:
                p = imgs[name] ** e
                powers[key] = p
            return p

        acc: dict = {}
        for m, c in self._t.items():
            keep = []
            factor = None
            for k, e in m:
                if k in imgs:
                    f = power(k, e)
                    factor = f if factor is None else factor * f
                else:
                    keep.append((k, e))
            keep = tuple(keep)
            if factor is None:
                acc[keep] = acc.get(keep, 0) + c
                continue
            for fm, fc in factor._t.items():
                mono = _mono_mul(keep, fm)
                acc[mono] = acc.get(mono, 0) + c * fc
        return Poly._raw({m: c for m, c in acc.items() if c})

    def eval_params(self, assignment: Mapping[str, Scalar]) -> "Poly":
        return self.subs_params({k: Fraction(v) for k, v in assignment.items()})

    # -- division -----------------------------------------------------
    def divmod(self, divisor: "Poly") -> tuple["Poly", "Poly"]:
        """Multivariate division by a single polynomial (graded order).

        Returns ``(q, r)`` with ``self = q*divisor + r`` and no term of ``r``
        divisible by the leading monomial of ``divisor``.
        """
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        lm, lc = divisor.terms()[0]
        lmd = dict(lm)
        q: dict = {}
        r: dict = {}
        p = self
        while p._t:
            m, c = p.terms()[0]
            dm = dict(m)
            if all(dm.get(k, 0) >= e for k, e in lmd.items()):
                for k, e in lmd.items():
                    dm[k] -= e
                qm = tuple(sorted((k, e) for k, e in dm.items() if e))
                t = Poly._raw({qm: c / lc})
                q[qm] = q.get(qm, 0) + c / lc
                p = p - t * divisor
            else:
                r[m] = c
                p = Poly._raw({k: v for k, v in p._t.items() if k != m})
        return Poly._raw({k: v for k, v in q.items() if v}), Poly._raw(r)

    def divide_exact(self, divisor: "Poly") -> "Poly | None":
        """Quotient if ``divisor`` divides ``self`` exactly, else None."""
        if divisor.is_constant():
            return self / divisor
        q, r = self.divmod(divisor)
        return q if r.is_zero() else None

    def content(self) -> Fraction:
        """Positive rational content: gcd of numerators over lcm of denominators."""
        from math import gcd

        num = 0
        den = 1
        for c in self._t.values():
            num = gcd(num, c.numerator)
            den = den * c.denominator // gcd(den, c.denominator)
        return Fraction(num, den) if num else Fraction(0)

    def primitive(self) -> "Poly":
        """Scale to integer coefficients with gcd 1 and positive leading term."""
        if not self._t:
            return self
        c = self.content()
        lead = self.terms()[0][1]
        if lead < 0:
            c = -c
        return self / c

    # -- rendering ----------------------------------------------------
    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"Poly({render(self)!r})"


def _render_coeff(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _render_mono(m: Monomial) -> str:
    parts = []
    for k, e in sorted(m, key=lambda ke: _rank(ke[0])):
        parts.append(k if e == 1 else f"{k}^{e}")
    return "*".join(parts)


def render(p: Poly) -> str:
    """Canonical text form, e.g. ``d + 2*l`` or ``-1/12*l^3``."""
    if p.is_zero():
        return "0"
    out = []
    for i, (m, c) in enumerate(p.terms()):
        neg = c < 0
        a = -c if neg else c
        if not m:
            body = _render_coeff(a)
        elif a == 1:
            body = _render_mono(m)
        else:
            body = f"{_render_coeff(a)}*{_render_mono(m)}"
        if i == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


# ---------------------------------------------------------------------------
# functional surface


def var(name: str) -> Poly:
    return Poly.var(name)


def const(c: Scalar) -> Poly:
    return Poly.const(c)


def add(p: Poly, q: Poly) -> Poly:
    return p + q


def mul(p: Poly, q: Poly) -> Poly:
    return p * q


def neg(p: Poly) -> Poly:
    return -p


def substitute(p: Poly, bindings: Mapping[str, Poly]) -> Poly:
    return p.substitute(bindings)


def coeff_extract(p: Poly, v: str, k: int) -> Poly:
    if v not in _VAR_SET:
        raise PolyError(f"{v!r} is not a variable")
    return p.coeff(v, k)


def degree(p: Poly, v: str):
    return p.degree(v)


D = Poly.var("d")
LAM = Poly.var("l")
MU = Poly.var("m")
NU = Poly.var("n")
ONE = Poly.const(1)
ZERO = Poly()


# ---------------------------------------------------------------------------
# rational functions with parameter-only denominators


class RatFn:
    """Quotient ``num/den`` with ``den`` a nonzero polynomial in parameters only.

    Denominators are kept primitive with positive leading coefficient and
    cancelled by exact trial division; no full gcd is attempted.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = Poly.coerce(num)
        den = Poly.const(1) if den is None else Poly.coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("RatFn with zero denominator")
        if den.has_vars():
            raise PolyError(f"denominator {den} involves variables")
        if den.is_constant():
            num, den = num / den.constant_value(), Poly.const(1)
        else:
            c = den.primitive()
            scale = den.terms()[0][1] / c.terms()[0][1]
            num, den = num / scale, c
            q = num.divide_exact(den)
            if q is not None:
                num, den = q, Poly.const(1)
        self.num = num
        self.den = den

    def is_poly(self) -> bool:
        return self.den == 1

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other):
        other = other if isinstance(other, RatFn) else RatFn(other)
        if self.den == other.den:
            return RatFn(self.num + other.num, self.den)
        return RatFn(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFn(-self.num, self.den)

    def __sub__(self, other):
        return self + (-(other if isinstance(other, RatFn) else RatFn(other)))

    def __mul__(self, other):
        other = other if isinstance(other, RatFn) else RatFn(other)
        return RatFn(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = other if isinstance(other, RatFn) else RatFn(other)
        if other.num.has_vars():
            raise PolyError("cannot divide by a polynomial in variables")
        return RatFn(self.num * other.den, self.den * other.num)

    def __eq__(self, other):
        if not isinstance(other, RatFn):
            try:
                other = RatFn(other)
            except TypeError:
                return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        return hash((self.num, self.den)) if not self.is_poly() else hash(self.num)

    def eval_params(self, assignment: Mapping[str, Scalar]) -> "RatFn":
        den = self.den.eval_params(assignment)
        if den.is_zero():
            raise SpecializationError(self.den, assignment)
        return RatFn(self.num.eval_params(assignment), den)

    def __str__(self):
        if self.is_poly():
            return render(self.num)
        return f"({render(self.num)})/({render(self.den)})"

    __repr__ = __str__


class SpecializationError(PolyError):
    """A parameter assignment makes a denominator vanish."""

    def __init__(self, poly: Poly, assignment: Mapping):
        self.poly = poly
        self.assignment = dict(assignment)
        pts = ", ".join(f"{k}={v}" for k, v in sorted(assignment.items()))
        super().__init__(f"denominator {render(poly)} vanishes at {pts}")
