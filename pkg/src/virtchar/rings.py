"""Exact coefficient rings.

Every ring is a small hashable "parent" object; its elements carry a
reference to it.  Rationals are plain :class:`fractions.Fraction` values
with :data:`QQ` as parent.  The remaining variants are

* :class:`PolyRing` -- univariate polynomials over QQ (``u`` or ``y``),
* :class:`LaurentRing` -- Laurent polynomials over QQ (``s = y^(1/2)``),
* :class:`RatFunRing` -- univariate rational functions over QQ,
* :class:`QSeriesRing` -- power series in ``q`` truncated at a fixed order,
  over any base ring,
* :class:`EpsRing` -- Laurent series in ``eps`` with tracked absolute
  precision, over any base ring.

Elements mix freely with ``int`` and ``Fraction`` scalars and with elements
of a ring's base ring; anything else raises :class:`CoeffVariantMismatch`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import CoeffVariantMismatch, NonUnit, WindowTooNarrow

_ZERO = Fraction(0)
_ONE = Fraction(1)


def ring_of(x):
    if isinstance(x, (int, Fraction)):
        return QQ
    return x.ring


def inverse(x):
    """Inverse of a ring element or rational; raises NonUnit."""
    if isinstance(x, (int, Fraction)):
        if x == 0:
            raise NonUnit("0 is not invertible")
        return 1 / Fraction(x)
    return x.inverse()


def is_unit(x) -> bool:
    try:
        inverse(x)
    except NonUnit:
        return False
    return True


@dataclass(frozen=True)
class RationalField:
    def zero(self):
        return _ZERO

    def one(self):
        return _ONE

    def coerce(self, x):
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        raise CoeffVariantMismatch(f"cannot coerce {x!r} into QQ")

    def __repr__(self):
        return "QQ"


QQ = RationalField()


class _Element:
    """Arithmetic glue shared by all non-rational element classes."""

    __slots__ = ()

    def __radd__(self, other):
        return self.ring.coerce(other) + self

    def __sub__(self, other):
        other = self._try_coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return self.ring.coerce(other) + (-self)

    def __rmul__(self, other):
        return self.ring.coerce(other) * self

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * inverse(other)
        return self * self.ring.coerce(other).inverse()

    def __rtruediv__(self, other):
        return self.ring.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def _try_coerce(self, other):
        try:
            return self.ring.coerce(other)
        except CoeffVariantMismatch:
            return None


# ---------------------------------------------------------------------------
# dense univariate polynomial helpers (tuples of Fractions, low degree first)


def _strip(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return _strip(out)


def _pneg(a):
    return tuple(-x for x in a)


def _pmul(a, b):
    if not a or not b:
        return ()
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _strip(out)


def _pscale(a, c):
    if c == 0:
        return ()
    return tuple(x * c for x in a)


def _pdivmod(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    q = [_ZERO] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    db = len(b) - 1
    for k in range(len(a) - len(b), -1, -1):
        c = r[k + db] / lead
        q[k] = c
        if c:
            for j, y in enumerate(b):
                r[k + j] -= c * y
    return _strip(q), _strip(r[:db])


def _pmonic(a):
    if not a:
        return a
    lead = a[-1]
    if lead == 1:
        return a
    return tuple(x / lead for x in a)


def _low_order(a) -> int:
    k = 0
    while k < len(a) and a[k] == 0:
        k += 1
    return k


def _pgcd(a, b):
    """Monic gcd; powers of the variable are split off first."""
    if not a:
        return _pmonic(b)
    if not b:
        return _pmonic(a)
    va, vb = _low_order(a), _low_order(b)
    shift = min(va, vb)
    a, b = _pmonic(a[va:]), _pmonic(b[vb:])
    if len(a) < len(b):
        a, b = b, a
    while len(b) > 1:
        a, b = b, _pmonic(_pdivmod(a, b)[1])
    if not b:
        g = a
    else:
        g = (_ONE,)
    return (_ZERO,) * shift + g


def _fmt_poly_terms(pairs, var):
    """Render [(exponent, coeff)] as a readable string."""
    parts = []
    for e, c in pairs:
        if c == 0:
            continue
        if e == 0:
            mon = ""
        elif e == 1:
            mon = var
        else:
            mon = f"{var}^{e}"
        if not mon:
            parts.append(str(c))
        elif c == 1:
            parts.append(mon)
        elif c == -1:
            parts.append("-" + mon)
        else:
            parts.append(f"{c}*{mon}")
    if not parts:
        return "0"
    return " + ".join(parts).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# polynomials


@dataclass(frozen=True)
class PolyRing:
    var: str = "u"

    def zero(self):
        return UPoly(self, ())

    def one(self):
        return UPoly(self, (_ONE,))

    def gen(self):
        return UPoly(self, (_ZERO, _ONE))

    def __call__(self, coeffs):
        return UPoly(self, tuple(Fraction(c) for c in coeffs))

    def coerce(self, x):
        if isinstance(x, (int, Fraction)):
            return UPoly(self, (Fraction(x),))
        if isinstance(x, UPoly) and x.ring == self:
            return x
        raise CoeffVariantMismatch(f"cannot coerce {x!r} into {self!r}")

    def __repr__(self):
        return f"QQ[{self.var}]"


class UPoly(_Element):
    """Dense univariate polynomial with rational coefficients."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: PolyRing, coeffs):
        self.ring = ring
        self.coeffs = _strip(coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else _ZERO

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        other = self._try_coerce(other)
        return other is not None and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("UPoly", self.ring, self.coeffs))

    def __add__(self, other):
        other = self._try_coerce(other)
        if other is None:
            return NotImplemented
        return UPoly(self.ring, _padd(self.coeffs, other.coeffs))

    def __neg__(self):
        return UPoly(self.ring, _pneg(self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return UPoly(self.ring, _pscale(self.coeffs, other))
        other = self._try_coerce(other)
        if other is None:
            return NotImplemented
        return UPoly(self.ring, _pmul(self.coeffs, other.coeffs))

    def inverse(self):
        if len(self.coeffs) != 1:
            raise NonUnit(f"{self} is not a unit in {self.ring!r}")
        return UPoly(self.ring, (1 / self.coeffs[0],))

    def __call__(self, x):
        """Evaluate at ``x`` (any ring element or rational), Horner style."""
        if not self.coeffs:
            return ring_of(x).zero()
        result = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            result = result * x + c
        return result

    def __repr__(self):
        return _fmt_poly_terms(enumerate(self.coeffs), self.ring.var)


# ---------------------------------------------------------------------------
# Laurent polynomials


@dataclass(frozen=True)
class LaurentRing:
    var: str = "s"

    def zero(self):
        return LaurentPoly(self, 0, ())

    def one(self):
        return LaurentPoly(self, 0, (_ONE,))

    def gen(self):
        return LaurentPoly(self, 1, (_ONE,))

    def monomial(self, exponent: int, coeff=1):
        return LaurentPoly(self, exponent, (Fraction(coeff),))

    def from_dict(self, terms):
        if not terms:
            return self.zero()
        lo = min(terms)
        hi = max(terms)
        return LaurentPoly(self, lo, [Fraction(terms.get(e, 0)) for e in range(lo, hi + 1)])

    def coerce(self, x):
        if isinstance(x, (int, Fraction)):
            return LaurentPoly(self, 0, (Fraction(x),))
        if isinstance(x, LaurentPoly) and x.ring == self:
            return x
        if isinstance(x, UPoly) and x.ring.var == self.var:
            return LaurentPoly(self, 0, x.coeffs)
        raise CoeffVariantMismatch(f"cannot coerce {x!r} into {self!r}")

    def __repr__(self):
        return f"QQ[{self.var},{self.var}^-1]"


class LaurentPoly(_Element):
    """``var^val * (c_0 + c_1 var + ...)`` with rational coefficients."""

    __slots__ = ("ring", "val", "coeffs")

    def __init__(self, ring: LaurentRing, val: int, coeffs):
        coeffs = list(coeffs)
        k = 0
        while k < len(coeffs) and coeffs[k] == 0:
            k += 1
        coeffs = _strip(coeffs[k:])
        self.ring = ring
        self.val = val + k if coeffs else 0
        self.coeffs = coeffs

    def terms(self) -> dict[int, Fraction]:
        return {self.val + i: c for i, c in enumerate(self.coeffs) if c}

    def coefficient(self, e: int) -> Fraction:
        i = e - self.val
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else _ZERO

    @property
    def min_exponent(self):
        return self.val

    @property
    def max_exponent(self):
        return self.val + len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        other = self._try_coerce(other)
        return other is not None and self.val == other.val and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("Laurent", self.ring, self.val, self.coeffs))

    def __add__(self, other):
        other = self._try_coerce(other)
        if other is None:
            return NotImplemented
        if not other.coeffs:
            return self
        if not self.coeffs:
            return other
        lo = min(self.val, other.val)
        a = (_ZERO,) * (self.val - lo) + self.coeffs
        b = (_ZERO,) * (other.val - lo) + other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] += x
        return LaurentPoly(self.ring, lo, out)

    def __neg__(self):
        return LaurentPoly(self.ring, self.val, _pneg(self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return LaurentPoly(self.ring, self.val, _pscale(self.coeffs, other))
        other = self._try_coerce(other)
        if other is None:
            return NotImplemented
        return LaurentPoly(self.ring, self.val + other.val, _pmul(self.coeffs, other.coeffs))

    def inverse(self):
        if len(self.coeffs) != 1:
            raise NonUnit(f"{self} is not a monomial, hence not a unit")
        return LaurentPoly(self.ring, -self.val, (1 / self.coeffs[0],))

    def substitute_sign(self):
        """The image under ``var -> -var``."""
        return LaurentPoly(
            self.ring, self.val,
            [c if (self.val + i) % 2 == 0 else -c for i, c in enumerate(self.coeffs)])

    def __call__(self, x):
        total = _ZERO
        x = Fraction(x)
        for e, c in self.terms().items():
            total += c * x ** e
        return total

    def __repr__(self):
        return _fmt_poly_terms(sorted(self.terms().items()), self.ring.var)


# ---------------------------------------------------------------------------
# rational functions


@dataclass(frozen=True)
class RatFunRing:
    var: str = "s"

    def zero(self):
        return RatFun(self, (), (_ONE,), reduced=True)

    def one(self):
        return RatFun(self, (_ONE,), (_ONE,), reduced=True)

    def gen(self):
        return RatFun(self, (_ZERO, _ONE), (_ONE,), reduced=True)

    def fraction(self, num, den):
        return RatFun(self, tuple(Fraction(c) for c in num), tuple(Fraction(c) for c in den))

    def coerce(self, x):
        if isinstance(x, (int, Fraction)):
            return RatFun(self, _strip((Fraction(x),)), (_ONE,), reduced=True)
        if isinstance(x, RatFun) and x.ring == self:
            return x
        if isinstance(x, LaurentPoly) and x.ring.var == self.var:
            if not x.coeffs:
                return self.zero()
            if x.val >= 0:
                return RatFun(self, (_ZERO,) * x.val + x.coeffs, (_ONE,), reduced=True)
            return RatFun(self, x.coeffs, (_ZERO,) * (-x.val) + (_ONE,), reduced=True)
        if isinstance(x, UPoly) and x.ring.var == self.var:
            return RatFun(self, x.coeffs, (_ONE,), reduced=True)
        raise CoeffVariantMismatch(f"cannot coerce {x!r} into {self!r}")

    def __repr__(self):
        return f"QQ({self.var})"


class RatFun(_Element):
    """Reduced fraction ``num/den`` of polynomials, ``den`` monic."""

    __slots__ = ("ring", "num", "den")

    def __init__(self, ring: RatFunRing, num, den, reduced=False):
        num = _strip(num)
        den = _strip(den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            den = (_ONE,)
        elif not reduced:
            g = _pgcd(num, den)
            if len(g) > 1:
                num = _pdivmod(num, g)[0]
                den = _pdivmod(den, g)[0]
        lead = den[-1]
        if lead != 1:
            num = tuple(c / lead for c in num)
            den = tuple(c / lead for c in den)
        self.ring = ring
        self.num = num
        self.den = den

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        other = self._try_coerce(other)
        return other is not None and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash(("RatFun", self.ring, self.num, self.den))

    def __add__(self, other):
        other = self._try_coerce(other)
        if other is None:
            return NotImplemented
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            if len(self.den) == 1:
                return RatFun(self.ring, _padd(self.num, other.num), self.den, reduced=True)
            return RatFun(self.ring, _padd(self.num, other.num), self.den)
        # Henrici: only the gcd of the denominators is needed
        g = _pgcd(self.den, other.den)
        if len(g) == 1:
            num = _padd(_pmul(self.num, other.den), _pmul(other.num, self.den))
            return RatFun(self.ring, num, _pmul(self.den, other.den), reduced=True)
        b1 = _pdivmod(self.den, g)[0]
        d1 = _pdivmod(other.den, g)[0]
        num = _padd(_pmul(self.num, d1), _pmul(other.num, b1))
        if not num:
            return self.ring.zero()
        h = _pgcd(num, g)
        if len(h) > 1:
            num = _pdivmod(num, h)[0]
            g = _pdivmod(g, h)[0]
        return RatFun(self.ring, num, _pmul(_pmul(b1, d1), g), reduced=True)

    def __neg__(self):
        return RatFun(self.ring, _pneg(self.num), self.den, reduced=True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatFun(self.ring, _pscale(self.num, other), self.den, reduced=True)
        other = self._try_coerce(other)
        if other is None:
            return NotImplemented
        if not self.num or not other.num:
            return self.ring.zero()
        a, b, c, d = self.num, self.den, other.num, other.den
        if len(b) == 1 and len(d) == 1:
            return RatFun(self.ring, _pmul(a, c), (_ONE,), reduced=True)
        if len(d) > 1:
            g = _pgcd(a, d)
            if len(g) > 1:
                a, d = _pdivmod(a, g)[0], _pdivmod(d, g)[0]
        if len(b) > 1:
            g = _pgcd(c, b)
            if len(g) > 1:
                c, b = _pdivmod(c, g)[0], _pdivmod(b, g)[0]
        return RatFun(self.ring, _pmul(a, c), _pmul(b, d), reduced=True)

    def inverse(self):
        if not self.num:
            raise NonUnit("0 is not invertible")
        return RatFun(self.ring, self.den, self.num, reduced=True)

    def is_laurent(self) -> bool:
        return all(c == 0 for c in self.den[:-1])

    def to_laurent(self, ring: LaurentRing | None = None) -> LaurentPoly:
        """Clear the denominator; it must be a power of the variable."""
        from .errors import DenominatorNotClearing

        ring = ring or LaurentRing(self.ring.var)
        if not self.is_laurent():
            raise DenominatorNotClearing(f"denominator of {self} is not a monomial")
        return LaurentPoly(ring, -(len(self.den) - 1), self.num)

    def __call__(self, x):
        x = Fraction(x)
        n = UPoly(PolyRing(self.ring.var), self.num)(x)
        d = UPoly(PolyRing(self.ring.var), self.den)(x)
        return Fraction(n) / d

    def __repr__(self):
        n = _fmt_poly_terms(enumerate(self.num), self.ring.var)
        if self.den == (_ONE,):
            return n
        return f"({n})/({_fmt_poly_terms(enumerate(self.den), self.ring.var)})"


# ---------------------------------------------------------------------------
# truncated q-series


@dataclass(frozen=True)
class QSeriesRing:
    base: object
    order: int
    var: str = "q"

    def zero(self):
        return QSeries(self, (self.base.zero(),) * (self.order + 1))

    def one(self):
        return self.from_base(self.base.one())

    def gen(self):
        return self.monomial(1, self.base.one())

    def monomial(self, n: int, c):
        coeffs = [self.base.zero()] * (self.order + 1)
        if n <= self.order:
            coeffs[n] = self.base.coerce(c)
        return QSeries(self, coeffs)

    def from_base(self, c):
        return QSeries(self, (self.base.coerce(c),) + (self.base.zero(),) * self.order)

    def from_list(self, coeffs):
        coeffs = [self.base.coerce(c) for c in coeffs][: self.order + 1]
        coeffs += [self.base.zero()] * (self.order + 1 - len(coeffs))
        return QSeries(self, coeffs)

    def coerce(self, x):
        if isinstance(x, QSeries) and x.ring == self:
            return x
        return self.from_base(self.base.coerce(x))

    def __repr__(self):
        return f"{self.base!r}[[{self.var}]]/({self.var}^{self.order + 1})"


class QSeries(_Element):
    """``sum_{n=0..N} c_n q^n`` with coefficients in ``ring.base``."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: QSeriesRing, coeffs):
        self.ring = ring
        self.coeffs = tuple(coeffs)

    def coefficient(self, n: int):
        return self.coeffs[n]

    def __bool__(self):
        return any(bool(c) for c in self.coeffs)

    def __eq__(self, other):
        other = self._try_coerce(other)
        return other is not None and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("QSeries", self.ring, self.coeffs))

    def __add__(self, other):
        other = self._try_coerce(other)
        if other is None:
            return NotImplemented
        return QSeries(self.ring, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return QSeries(self.ring, [-a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QSeries(self.ring, [a * other for a in self.coeffs])
        other = self._try_coerce(other)
        if other is None:
            return NotImplemented
        n = self.ring.order + 1
        a = self.coeffs
        b = other.coeffs
        out = [self.ring.base.zero()] * n
        nza = [i for i in range(n) if a[i]]
        nzb = [j for j in range(n) if b[j]]
        for i in nza:
            ai = a[i]
            for j in nzb:
                if i + j >= n:
                    break
                out[i + j] = out[i + j] + ai * b[j]
        return QSeries(self.ring, out)

    def inverse(self):
        a = self.coeffs
        inv0 = inverse(a[0])
        out = [inv0]
        for k in range(1, self.ring.order + 1):
            acc = self.ring.base.zero()
            for j in range(1, k + 1):
                if a[j]:
                    acc = acc + a[j] * out[k - j]
            out.append(-(inv0 * acc))
        return QSeries(self.ring, out)

    def map_coeffs(self, fn, ring: QSeriesRing):
        return QSeries(ring, [fn(c) for c in self.coeffs])

    def __repr__(self):
        parts = []
        for n, c in enumerate(self.coeffs):
            if c:
                parts.append(f"({c})" + ("" if n == 0 else f"*{self.ring.var}^{n}"))
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O({self.ring.var}^{self.ring.order + 1})"


# ---------------------------------------------------------------------------
# Laurent series in eps with precision tracking


@dataclass(frozen=True)
class EpsRing:
    """Laurent series in ``eps`` over ``base``.

    ``lo`` is the most negative exponent any element may carry (larger pole
    orders raise :class:`WindowTooNarrow`); ``hi`` is the highest exponent
    whose coefficient a final result must still know.  Intermediate values
    are kept to ``work`` exponents so that dividing by the allowed poles
    still leaves results accurate through ``hi``.
    """

    base: object
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > 0 or self.hi < 0:
            raise ValueError("eps window needs lo <= 0 <= hi")

    @property
    def work(self) -> int:
        return self.hi + 3 - 3 * self.lo

    def zero(self):
        return EpsLaurent(self, 0, (), self.work)

    def one(self):
        return self.from_base(self.base.one())

    def gen(self):
        return EpsLaurent(self, 1, (self.base.one(),), self.work)

    def from_base(self, c):
        return EpsLaurent(self, 0, (self.base.coerce(c),), self.work)

    def from_dict(self, terms, prec=None):
        if not terms:
            return self.zero()
        lo = min(terms)
        hi = max(terms)
        return EpsLaurent(
            self, lo, [self.base.coerce(terms.get(e, 0)) for e in range(lo, hi + 1)],
            self.work if prec is None else prec)

    def exp(self, c, factor=None):
        """``factor * e^{c eps}`` expanded through the working precision."""
        c = Fraction(c)
        factor = self.base.one() if factor is None else self.base.coerce(factor)
        coeffs = [factor * (c ** j / factorial(j)) for j in range(self.work)]
        return EpsLaurent(self, 0, coeffs, self.work)

    def coerce(self, x):
        if isinstance(x, EpsLaurent) and x.ring == self:
            return x
        return self.from_base(self.base.coerce(x))

    def __repr__(self):
        return f"{self.base!r}((eps))[{self.lo},{self.hi}]"


class EpsLaurent(_Element):
    """``sum_{k>=start} c_k eps^k + O(eps^prec)``."""

    __slots__ = ("ring", "start", "coeffs", "prec")

    def __init__(self, ring: EpsRing, start: int, coeffs, prec: int):
        prec = min(prec, ring.work)
        coeffs = list(coeffs)[: max(prec - start, 0)]
        k = 0
        while k < len(coeffs) and not coeffs[k]:
            k += 1
        coeffs = coeffs[k:]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        self.ring = ring
        self.prec = prec
        self.coeffs = tuple(coeffs)
        self.start = start + k if coeffs else 0
        if coeffs and self.start < ring.lo:
            raise WindowTooNarrow(
                f"pole of order {-self.start} exceeds window lower bound {ring.lo}")

    @property
    def valuation(self) -> int:
        return self.start if self.coeffs else self.prec

    def coefficient(self, k: int):
        if k >= self.prec:
            raise WindowTooNarrow(f"eps^{k} lies beyond the known precision O(eps^{self.prec})")
        i = k - self.start
        if self.coeffs and 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.ring.base.zero()

    def terms(self) -> dict:
        return {self.start + i: c for i, c in enumerate(self.coeffs) if c}

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        other = self._try_coerce(other)
        if other is None:
            return False
        prec = min(self.prec, other.prec)
        lo = min(self.valuation, other.valuation, 0)
        return all(self.coefficient(k) == other.coefficient(k) for k in range(lo, prec))

    __hash__ = None

    def __add__(self, other):
        other = self._try_coerce(other)
        if other is None:
            return NotImplemented
        prec = min(self.prec, other.prec)
        if not other.coeffs:
            return EpsLaurent(self.ring, self.start, self.coeffs, prec)
        if not self.coeffs:
            return EpsLaurent(self.ring, other.start, other.coeffs, prec)
        lo = min(self.start, other.start)
        zero = self.ring.base.zero()
        out = [zero] * max(prec - lo, 0)
        for src in (self, other):
            for i, c in enumerate(src.coeffs):
                k = src.start + i - lo
                if k < len(out):
                    out[k] = out[k] + c
        return EpsLaurent(self.ring, lo, out, prec)

    def __neg__(self):
        return EpsLaurent(self.ring, self.start, [-c for c in self.coeffs], self.prec)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return EpsLaurent(self.ring, self.start, [c * other for c in self.coeffs], self.prec)
        other = self._try_coerce(other)
        if other is None:
            return NotImplemented
        va, vb = self.valuation, other.valuation
        prec = min(self.prec + vb, other.prec + va, self.ring.work)
        if not self.coeffs or not other.coeffs:
            return EpsLaurent(self.ring, 0, (), prec)
        start = va + vb
        n = prec - start
        if n <= 0:
            return EpsLaurent(self.ring, 0, (), prec)
        zero = self.ring.base.zero()
        out = [zero] * n
        a, b = self.coeffs, other.coeffs
        for i, x in enumerate(a):
            if i >= n:
                break
            if not x:
                continue
            for j, y in enumerate(b):
                if i + j >= n:
                    break
                if y:
                    out[i + j] = out[i + j] + x * y
        return EpsLaurent(self.ring, start, out, prec)

    def inverse(self):
        if not self.coeffs:
            raise NonUnit("eps-series with no known nonzero coefficient is not invertible")
        v = self.start
        if -v < self.ring.lo:
            raise WindowTooNarrow(f"inverse has a pole of order {v} beyond the window")
        inv0 = inverse(self.coeffs[0])
        rel = self.prec - v  # relative precision of the unit part
        n = min(rel, self.ring.work + v)
        a = self.coeffs
        out = [inv0]
        zero = self.ring.base.zero()
        for k in range(1, max(n, 1)):
            acc = zero
            for j in range(1, min(k, len(a) - 1) + 1):
                if a[j]:
                    acc = acc + a[j] * out[k - j]
            out.append(-(inv0 * acc))
        return EpsLaurent(self.ring, -v, out, self.prec - 2 * v)

    def map_coeffs(self, fn, ring: EpsRing):
        return EpsLaurent(ring, self.start, [fn(c) for c in self.coeffs], self.prec)

    def __repr__(self):
        parts = [f"({c})*eps^{k}" for k, c in sorted(self.terms().items())]
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O(eps^{self.prec})"
