"""
Exact scalars: the generic field Q(t) and its specializations at tau = exp(i*pi/ell).

Generic scalars are reduced fractions ``t^s * N(t) / D(t)`` where ``N, D`` are polynomials with rational
coefficients, ``D`` is monic with ``D(0) != 0`` and ``N(0) != 0`` (unless the scalar is zero). This form is
unique, so structural equality is semantic equality. Polynomial arithmetic and gcds are delegated to FLINT's
``fmpq_poly``.

Specialized scalars live in ``Q[t] / Phi_{2 ell}(t)`` and are stored as the reduced remainder polynomial.
"""
from __future__ import annotations

import functools
from fractions import Fraction
from typing import Iterable, Mapping, Union

import flint

from .errors import BadParameter, DivisionByZero, NotEvaluable, RingMismatch

_P = flint.fmpq_poly
_Q = flint.fmpq

Rational = Union[int, Fraction]


def _to_fmpq(x) -> flint.fmpq:
    if isinstance(x, flint.fmpq):
        return x
    if isinstance(x, int):
        return _Q(x)
    if isinstance(x, Fraction):
        return _Q(x.numerator, x.denominator)
    if isinstance(x, str):
        return _to_fmpq(Fraction(x))
    raise TypeError(f"cannot interpret {x!r} as a rational number")


def _to_fraction(x: flint.fmpq) -> Fraction:
    return Fraction(int(x.p), int(x.q))


def format_rational(x) -> str:
    """Render a rational as ``"p/q"`` (always with an explicit denominator)."""
    f = x if isinstance(x, Fraction) else _to_fraction(_to_fmpq(x))
    return f"{f.numerator}/{f.denominator}"


def _valuation(p: flint.fmpq_poly) -> int:
    for i, c in enumerate(p.coeffs()):
        if c != 0:
            return i
    return 0


def _monomial(k: int) -> flint.fmpq_poly:
    return _P([0] * k + [1])


# ---------------------------------------------------------------------------------------------------------------------
# Laurent polynomials


class LaurentPoly:
    """
    A Laurent polynomial in t with rational coefficients, stored as a sorted tuple of (exponent, coefficient).

    >>> LaurentPoly({1: 1, -1: 1})
    LaurentPoly('t + t^-1')
    """

    __slots__ = ("_items",)

    def __init__(self, terms: Mapping[int, Rational] | Iterable[tuple[int, Rational]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, Fraction] = {}
        for e, c in items:
            acc[int(e)] = acc.get(int(e), Fraction(0)) + Fraction(c)
        self._items = tuple(sorted((e, c) for e, c in acc.items() if c != 0))

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._items)

    def is_zero(self) -> bool:
        return not self._items

    def min_exp(self) -> int:
        return self._items[0][0] if self._items else 0

    def max_exp(self) -> int:
        return self._items[-1][0] if self._items else 0

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self._items == other._items
        if isinstance(other, (int, Fraction)):
            return self._items == LaurentPoly({0: other})._items
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._items)

    def __add__(self, other: LaurentPoly) -> LaurentPoly:
        return LaurentPoly(self._items + other._items)

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly((e, -c) for e, c in self._items)

    def __sub__(self, other: LaurentPoly) -> LaurentPoly:
        return self + (-other)

    def __mul__(self, other: LaurentPoly) -> LaurentPoly:
        return LaurentPoly((e1 + e2, c1 * c2) for e1, c1 in self._items for e2, c2 in other._items)

    def to_flint(self) -> tuple[flint.fmpq_poly, int]:
        """Return ``(p, s)`` with ``self = t^s * p`` and p an ordinary polynomial."""
        if not self._items:
            return _P([]), 0
        s = self.min_exp()
        coeffs = [_Q(0)] * (self.max_exp() - s + 1)
        for e, c in self._items:
            coeffs[e - s] = _to_fmpq(c)
        return _P(coeffs), s

    @classmethod
    def from_flint(cls, p: flint.fmpq_poly, shift: int = 0) -> LaurentPoly:
        return cls((i + shift, _to_fraction(c)) for i, c in enumerate(p.coeffs()) if c != 0)

    def to_json(self) -> list:
        return [[e, format_rational(c)] for e, c in self._items]

    @classmethod
    def from_json(cls, data) -> LaurentPoly:
        return cls((int(e), Fraction(c)) for e, c in data)

    def __str__(self) -> str:
        if not self._items:
            return "0"
        parts = []
        for e, c in reversed(self._items):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            mono = "" if e == 0 else "t" if e == 1 else f"t^{e}"
            coeff = str(a) if (a != 1 or not mono) else ""
            parts.append((sign, coeff + mono))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"LaurentPoly('{self}')"


# ---------------------------------------------------------------------------------------------------------------------
# Generic scalars


class Scalar:
    """
    An element of Q(t) in canonical reduced form.

    >>> d = Scalar.d()
    >>> d * d
    Scalar('(t^2 + 2 + t^-2)')
    >>> (d * d.inverse()) == 1
    True
    """

    __slots__ = ("_num", "_den", "_shift", "_hash")

    def __init__(self, value: Rational | LaurentPoly | Scalar = 0, den: LaurentPoly | Rational | None = None):
        if isinstance(value, Scalar) and den is None:
            self._num, self._den, self._shift, self._hash = value._num, value._den, value._shift, value._hash
            return
        num_p, num_s = _as_laurent(value).to_flint()
        den_p, den_s = _as_laurent(1 if den is None else den).to_flint()
        if den_p.is_zero():
            raise DivisionByZero("zero denominator")
        other = Scalar._make(num_p, den_p, num_s - den_s)
        self._num, self._den, self._shift, self._hash = other._num, other._den, other._shift, None

    @staticmethod
    def _make(num: flint.fmpq_poly, den: flint.fmpq_poly, shift: int) -> Scalar:
        if num.is_zero():
            return _ZERO
        v = _valuation(num)
        if v:
            num = num.right_shift(v)
            shift += v
        w = _valuation(den)
        if w:
            den = den.right_shift(w)
            shift -= w
        if den.degree() > 0:
            g = num.gcd(den)
            if not g.is_one():
                num = num // g
                den = den // g
        lc = den.leading_coefficient()
        if lc != 1:
            inv = 1 / lc
            num = num * inv
            den = den * inv
        return Scalar._raw(num, den, shift)

    @staticmethod
    def _raw(num, den, shift) -> Scalar:
        s = object.__new__(Scalar)
        s._num, s._den, s._shift, s._hash = num, den, shift, None
        return s

    @classmethod
    def t(cls) -> Scalar:
        return cls._raw(_P([1]), _P([1]), 1)

    @classmethod
    def d(cls) -> Scalar:
        """The loop value t + t^-1."""
        return cls(LaurentPoly({1: 1, -1: 1}))

    @property
    def num(self) -> LaurentPoly:
        return LaurentPoly.from_flint(self._num, self._shift)

    @property
    def den(self) -> LaurentPoly:
        return LaurentPoly.from_flint(self._den)

    def is_zero(self) -> bool:
        return self._num.is_zero()

    def __bool__(self) -> bool:
        return not self._num.is_zero()

    def is_laurent(self) -> bool:
        return self._den.degree() == 0

    def _coerce(self, other) -> Scalar:
        if isinstance(other, Scalar):
            return other
        if isinstance(other, (int, Fraction, LaurentPoly)):
            return Scalar(other)
        if isinstance(other, CycloScalar):
            raise RingMismatch("cannot mix generic and specialized scalars")
        return NotImplemented

    def __add__(self, other) -> Scalar:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        s = min(self._shift, other._shift)
        a = self._num if self._shift == s else self._num.left_shift(self._shift - s)
        b = other._num if other._shift == s else other._num.left_shift(other._shift - s)
        if self._den == other._den:
            return Scalar._make(a + b, self._den, s)
        return Scalar._make(a * other._den + b * self._den, self._den * other._den, s)

    __radd__ = __add__

    def __neg__(self) -> Scalar:
        if self.is_zero():
            return self
        return Scalar._raw(-self._num, self._den, self._shift)

    def __sub__(self, other) -> Scalar:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> Scalar:
        return (-self) + other

    def __mul__(self, other) -> Scalar:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return _ZERO
        d1, d2 = self._den, other._den
        if d1.degree() == 0 and d2.degree() == 0:
            return Scalar._raw(self._num * other._num, d1, self._shift + other._shift)
        return Scalar._make(self._num * other._num, d1 * d2, self._shift + other._shift)

    __rmul__ = __mul__

    def inverse(self) -> Scalar:
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        return Scalar._make(self._den, self._num, -self._shift)

    def __truediv__(self, other) -> Scalar:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other) -> Scalar:
        return self.inverse() * other

    def __pow__(self, k: int) -> Scalar:
        if k < 0:
            return self.inverse() ** (-k)
        result, base = _ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def _key(self):
        return self._shift, tuple(self._num.coeffs()), tuple(self._den.coeffs())

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, LaurentPoly)):
            other = Scalar(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self._shift == other._shift and self._num == other._num and self._den == other._den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def normalize(self) -> Scalar:
        """Re-run canonicalization (idempotent on already-canonical values)."""
        return Scalar._make(self._num, self._den, self._shift)

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> Scalar:
        return cls(LaurentPoly.from_json(data["num"]), LaurentPoly.from_json(data["den"]))

    def __str__(self) -> str:
        if self.is_laurent():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"Scalar('({self})')" if self.is_laurent() else f"Scalar('{self}')"


def _as_laurent(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return LaurentPoly({0: x})
    raise TypeError(f"cannot interpret {x!r} as a Laurent polynomial")


_ZERO = Scalar._raw(_P([]), _P([1]), 0)
_ONE = Scalar._raw(_P([1]), _P([1]), 0)


def quantum_integer(m: int) -> Scalar:
    """
    Return [m] = (t^m - t^-m) / (t - t^-1) as the Laurent polynomial t^(m-1) + t^(m-3) + ... + t^(1-m).

    >>> quantum_integer(3)
    Scalar('(t^2 + 1 + t^-2)')
    """
    if m == 0:
        return _ZERO
    sign = 1 if m > 0 else -1
    m = abs(m)
    return Scalar(LaurentPoly({m - 1 - 2 * i: sign for i in range(m)}))


# ---------------------------------------------------------------------------------------------------------------------
# Cyclotomic specialization


@functools.lru_cache(maxsize=None)
def _cyclotomic(n: int) -> flint.fmpq_poly:
    """Phi_n(t) = (t^n - 1) / prod_{k | n, k < n} Phi_k(t)."""
    p = _monomial(n) - 1
    for k in range(1, n):
        if n % k == 0:
            q, r = divmod(p, _cyclotomic(k))
            assert r.is_zero()
            p = q
    return p


def cyclotomic_modulus(ell: int) -> LaurentPoly:
    """
    Return Phi_{2 ell}(t), the minimal polynomial of tau = exp(i pi / ell).

    >>> cyclotomic_modulus(4)
    LaurentPoly('t^4 + 1')
    """
    _check_ell(ell)
    return LaurentPoly.from_flint(_cyclotomic(2 * ell))


def _check_ell(ell: int) -> None:
    if not isinstance(ell, int) or ell < 3:
        raise BadParameter(f"ell must be an integer >= 3, got {ell!r}")


class CycloScalar:
    """An element of Q(tau) = Q[t] / Phi_{2 ell}(t), stored as a remainder polynomial in tau."""

    __slots__ = ("ell", "_poly")

    def __init__(self, ell: int, coeffs: Iterable[Rational] = ()):
        _check_ell(ell)
        self.ell = ell
        self._poly = _P([_to_fmpq(c) for c in coeffs]) % _cyclotomic(2 * ell)

    @staticmethod
    def _raw(ell: int, poly: flint.fmpq_poly) -> CycloScalar:
        s = object.__new__(CycloScalar)
        s.ell, s._poly = ell, poly
        return s

    @classmethod
    def tau(cls, ell: int) -> CycloScalar:
        return cls(ell, [0, 1])

    @property
    def degree(self) -> int:
        return _cyclotomic(2 * self.ell).degree()

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        cs = [_to_fraction(c) for c in self._poly.coeffs()]
        return tuple(cs + [Fraction(0)] * (self.degree - len(cs)))

    def is_zero(self) -> bool:
        return self._poly.is_zero()

    def __bool__(self) -> bool:
        return not self._poly.is_zero()

    def is_rational(self) -> bool:
        return self._poly.degree() <= 0

    def _coerce(self, other) -> CycloScalar:
        if isinstance(other, CycloScalar):
            if other.ell != self.ell:
                raise RingMismatch(f"cannot mix ell={self.ell} and ell={other.ell}")
            return other
        if isinstance(other, (int, Fraction)):
            return CycloScalar._raw(self.ell, _P([_to_fmpq(other)]))
        if isinstance(other, Scalar):
            raise RingMismatch("cannot mix generic and specialized scalars")
        return NotImplemented

    def __add__(self, other) -> CycloScalar:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloScalar._raw(self.ell, self._poly + other._poly)

    __radd__ = __add__

    def __neg__(self) -> CycloScalar:
        return CycloScalar._raw(self.ell, -self._poly)

    def __sub__(self, other) -> CycloScalar:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloScalar._raw(self.ell, self._poly - other._poly)

    def __rsub__(self, other) -> CycloScalar:
        return (-self) + other

    def __mul__(self, other) -> CycloScalar:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._poly, other._poly
        if a.degree() <= 0 or b.degree() <= 0:
            return CycloScalar._raw(self.ell, a * b)
        return CycloScalar._raw(self.ell, (a * b) % _cyclotomic(2 * self.ell))

    __rmul__ = __mul__

    def inverse(self) -> CycloScalar:
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        if self._poly.degree() == 0:
            return CycloScalar._raw(self.ell, _P([1 / self._poly[0]]))
        g, s, _ = self._poly.xgcd(_cyclotomic(2 * self.ell))
        assert g.is_one()
        return CycloScalar._raw(self.ell, s % _cyclotomic(2 * self.ell))

    def __truediv__(self, other) -> CycloScalar:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other) -> CycloScalar:
        return self.inverse() * other

    def __pow__(self, k: int) -> CycloScalar:
        if k < 0:
            return self.inverse() ** (-k)
        result, base = CycloScalar._raw(self.ell, _P([1])), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self._coerce(other)
        if not isinstance(other, CycloScalar):
            return NotImplemented
        return self.ell == other.ell and self._poly == other._poly

    def __hash__(self) -> int:
        return hash((self.ell, tuple(self._poly.coeffs())))

    def to_json(self) -> dict:
        return {"ell": self.ell, "coeffs": [format_rational(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> CycloScalar:
        return cls(int(data["ell"]), [Fraction(c) for c in data["coeffs"]])

    def __str__(self) -> str:
        return str(LaurentPoly.from_flint(self._poly)).replace("t", "τ")

    def __repr__(self) -> str:
        return f"CycloScalar({self.ell}, '{self}')"


def specialize(f: Scalar, ell: int) -> CycloScalar:
    """
    Evaluate a generic scalar at tau = exp(i pi / ell).

    Raises NotEvaluable if Phi_{2 ell} divides the denominator, i.e. f has a pole at tau.
    """
    _check_ell(ell)
    phi = _cyclotomic(2 * ell)
    if f.is_zero():
        return CycloScalar._raw(ell, _P([]))
    den = f._den % phi
    if den.is_zero():
        raise NotEvaluable(f"{f} has a pole at tau (ell={ell})")
    num = f._num.left_shift(f._shift % (2 * ell)) % phi
    value = CycloScalar._raw(ell, num)
    if f._den.degree() == 0:
        return value
    return value * CycloScalar._raw(ell, den).inverse()


def is_evaluable(f: Scalar, ell: int) -> bool:
    return f.is_zero() or not (f._den % _cyclotomic(2 * ell)).is_zero()


# ---------------------------------------------------------------------------------------------------------------------
# Rings


class Ring:
    """Tag for the scalar ring of a morphism: either the generic field or a cyclotomic specialization."""

    ell: int | None = None

    def __init__(self):
        self._dpow = [self.one()]

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def loop(self):
        raise NotImplementedError

    def coerce(self, x):
        raise NotImplementedError

    def d_pow(self, r: int):
        while len(self._dpow) <= r:
            self._dpow.append(self._dpow[-1] * self.loop())
        return self._dpow[r]

    @property
    def is_generic(self) -> bool:
        return self.ell is None


class GenericRing(Ring):
    def zero(self) -> Scalar:
        return _ZERO

    def one(self) -> Scalar:
        return _ONE

    def loop(self) -> Scalar:
        return Scalar.d()

    def coerce(self, x) -> Scalar:
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction, LaurentPoly)):
            return Scalar(x)
        raise RingMismatch(f"{x!r} is not a generic scalar")

    def to_json(self):
        return "generic"

    def scalar_from_json(self, data) -> Scalar:
        return Scalar.from_json(data)

    def __repr__(self) -> str:
        return "GENERIC"

    def __reduce__(self):
        return (_generic, ())


class CycloRing(Ring):
    def __init__(self, ell: int):
        _check_ell(ell)
        self.ell = ell
        super().__init__()

    def zero(self) -> CycloScalar:
        return CycloScalar._raw(self.ell, _P([]))

    def one(self) -> CycloScalar:
        return CycloScalar._raw(self.ell, _P([1]))

    def loop(self) -> CycloScalar:
        return specialize(Scalar.d(), self.ell)

    @property
    def degree(self) -> int:
        return _cyclotomic(2 * self.ell).degree()

    def coerce(self, x) -> CycloScalar:
        if isinstance(x, CycloScalar):
            if x.ell != self.ell:
                raise RingMismatch(f"cannot mix ell={self.ell} and ell={x.ell}")
            return x
        if isinstance(x, (int, Fraction)):
            return CycloScalar._raw(self.ell, _P([_to_fmpq(x)]))
        raise RingMismatch(f"{x!r} is not a scalar of Q(tau), ell={self.ell}")

    def to_json(self):
        return {"cyclo": self.ell}

    def scalar_from_json(self, data) -> CycloScalar:
        return CycloScalar.from_json(data)

    def __repr__(self) -> str:
        return f"Cyclo({self.ell})"

    def __reduce__(self):
        return (Cyclo, (self.ell,))


GENERIC = GenericRing()


def _generic() -> GenericRing:
    return GENERIC


@functools.lru_cache(maxsize=None)
def Cyclo(ell: int) -> CycloRing:
    """The (shared) ring tag for the specialization at tau = exp(i pi / ell)."""
    return CycloRing(ell)


def ring_from_json(data) -> Ring:
    if data == "generic":
        return GENERIC
    if isinstance(data, dict) and "cyclo" in data:
        return Cyclo(int(data["cyclo"]))
    raise BadParameter(f"unknown ring {data!r}")
