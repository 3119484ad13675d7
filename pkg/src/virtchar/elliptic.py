"""Virtual elliptic genus as an exact q-expansion.

Conventions: ``s`` is the square root of ``y`` and all series are truncated
at ``q^N``.  The reduced theta function

    theta~(w) = (w^(1/2) - w^(-1/2)) prod_{l>=1} (1 - q^l)(1 - q^l w)(1 - q^l / w)

drops the ``q^(1/8) / i`` prefactor, which cancels in every ratio used here.

Two independent routes build the elliptic class ``EL(T^vir)``:

* product route: ``s^-d * X_{-y}(X) * ch E(T^vir)`` with the chi_y class from
  the ``u``-form and ``E`` expanded as a product of Lambda/Sym factors;
* theta route: the per-root series ``t theta~(e^t s^-2) / theta~(e^t)``,
  evaluated over rational functions in ``s`` and cleared at the end.

:func:`ell_vir` computes both and insists that they agree.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .chow import ChowClass
from .errors import DenominatorNotClearing, IdentityViolation, KernelAssertionError, ValidationError
from .genera import VirtualSpace, _as_v, chi_y_class
from .ktheory import GenusSeries, genus_class
from .rings import EpsRing, LaurentPoly, LaurentRing, QSeries, QSeriesRing, RatFunRing

S = LaurentRing("s")
SR = RatFunRing("s")
DEFAULT_Q_ORDER = 6


def q_ring(N: int, base=S) -> QSeriesRing:
    return QSeriesRing(base, N)


def theta_series(N: int) -> QSeries:
    """``theta~(s^2)`` as a q-series with Laurent-polynomial coefficients."""
    if N < 0:
        raise ValueError("q-order must be non-negative")
    R = q_ring(N)
    s = S.gen()
    result = R.from_base(s - s ** -1)
    for l in range(1, N + 1):
        ql = R.monomial(l, 1)
        result = result * (1 - ql) * (1 - ql * s ** 2) * (1 - ql * s ** -2)
    return result


def _theta_in_t(half: LaurentPoly, N: int, order: int) -> GenusSeries:
    """``theta~(c e^t)`` as a series in ``t``, where ``half`` squares to ``c``."""
    R = q_ring(N)
    c = half * half
    result = (GenusSeries.exp(Fraction(1, 2), order, R, factor=half)
              - GenusSeries.exp(Fraction(-1, 2), order, R, factor=half ** -1))
    for l in range(1, N + 1):
        ql = R.monomial(l, 1)
        result = result * (1 - ql)
        result = result * (1 - GenusSeries.exp(1, order, R, factor=ql * c))
        result = result * (1 - GenusSeries.exp(-1, order, R, factor=ql * c ** -1))
    return result


def elliptic_root_series(N: int, d: int) -> GenusSeries:
    """``Phi(t) = t theta~(e^t s^-2) / theta~(e^t)`` through ``t^d``.

    The denominator vanishes at ``t = 0``; its series is divided by ``t``
    term-wise before inverting, which leaves a unit (q^0 coefficient 1).
    """
    num = _theta_in_t(S.monomial(-1), N, d)
    den = _theta_in_t(S.one(), N, d + 1)
    if den[0]:
        raise KernelAssertionError("theta~(e^t) must vanish at t = 0")
    return num * den[1:].inverse()


def ecal_series(N: int, d: int, ring=None, weight: int = 0) -> GenusSeries:
    """Per-root series of ``ch E``:

    ``prod_{n=1..N} (1 - s^2 q^n e^-t)(1 - s^-2 q^n e^t) / ((1 - q^n e^t)(1 - q^n e^-t))``.

    ``ring`` defaults to ``QSeries[s, s^-1]``; it may also be an eps-ring over
    a q-series ring, in which case the root is shifted to ``t + weight*eps``.
    """
    ring = q_ring(N) if ring is None else ring
    shifted = isinstance(ring, EpsRing)
    qr = ring.base if shifted else ring

    def e(sign, c):
        c = ring.coerce(c)
        if shifted and weight:
            c = c * ring.exp(sign * weight)
        return GenusSeries.exp(sign, d, ring, factor=c)

    s2 = qr.from_base(qr.base.coerce(S.monomial(2)))
    s_2 = qr.from_base(qr.base.coerce(S.monomial(-2)))
    num = GenusSeries.constant(ring.one(), d, ring)
    den = GenusSeries.constant(ring.one(), d, ring)
    for n in range(1, N + 1):
        qn = qr.monomial(n, 1)
        num = num * (1 - e(-1, qn * s2))
        num = num * (1 - e(1, qn * s_2))
        den = den * (1 - e(1, qn))
        den = den * (1 - e(-1, qn))
    return num * den.inverse()


def ecal_ch(X: VirtualSpace, N: int = DEFAULT_Q_ORDER) -> ChowClass:
    """``ch E(T^vir)`` with ``QSeries[s, s^-1]`` coefficients; its q^0 part is 1."""
    return genus_class(X.tangent, ecal_series(N, X.d))


def chi_y_class_s(X: VirtualSpace, N: int) -> ChowClass:
    """``s^-d X_{-y}(X)`` with ``y = s^2``, as a class over ``QSeries[s, s^-1]``."""
    R = q_ring(N)
    one_minus_s2 = S.one() - S.monomial(2)
    total = X.model.zero(R)
    for l, sl in enumerate(chi_y_class(X).slices):
        if sl:
            total = total + sl.scale(R.from_base(one_minus_s2 ** (X.d - l) * S.monomial(-X.d)))
    return total


# spaces hash by identity, so repeated checks on one space reuse the class
@lru_cache(maxsize=16)
def el_class_product(X: VirtualSpace, N: int = DEFAULT_Q_ORDER) -> ChowClass:
    return chi_y_class_s(X, N) * ecal_ch(X, N)


@lru_cache(maxsize=16)
def el_class_theta(X: VirtualSpace, N: int = DEFAULT_Q_ORDER) -> ChowClass:
    """Theta-quotient route, assembled over rational functions in ``s``."""
    R = q_ring(N)
    RR = q_ring(N, SR)
    phi = elliptic_root_series(N, X.d).map(lambda c: c.map_coeffs(SR.coerce, RR), RR)
    raw = genus_class(X.tangent, phi)
    return raw.map_coeffs(lambda c: c.map_coeffs(_clear, R), R)


def _clear(c) -> LaurentPoly:
    try:
        return c.to_laurent(S)
    except DenominatorNotClearing as exc:
        raise DenominatorNotClearing(f"elliptic class coefficient {c} is not a Laurent polynomial") from exc


@dataclass(frozen=True, eq=False)
class EllResult:
    """``sum_n c_n(s) q^n`` with Laurent-polynomial ``c_n``."""

    series: QSeries
    d: int

    @property
    def order(self) -> int:
        return self.series.ring.order

    def coefficient(self, n: int) -> LaurentPoly:
        return self.series.coefficient(n)

    def entries(self) -> list:
        """``[(n, [(j, c_{n,j}), ...]), ...]`` sorted by exponent."""
        return [(n, sorted(c.terms().items())) for n, c in enumerate(self.series.coeffs)]

    def coeff(self, n: int, j: int) -> Fraction:
        if not 0 <= n <= self.order:
            raise IndexError(n)
        return self.series.coefficient(n).coefficient(j)

    def at_s(self, x) -> list[Fraction]:
        return [c(Fraction(x)) for c in self.series.coeffs]

    def __eq__(self, other):
        return isinstance(other, EllResult) and self.d == other.d and self.series == other.series

    __hash__ = None

    def __repr__(self):
        return f"EllResult(d={self.d}, {self.series!r})"

    @classmethod
    def from_entries(cls, entries, d: int, N: int) -> "EllResult":
        R = q_ring(N)
        coeffs = [S.zero()] * (N + 1)
        for n, terms in entries:
            if n <= N:
                coeffs[n] = S.from_dict({int(j): Fraction(c) for j, c in terms})
        return cls(QSeries(R, coeffs), d)


def ell_vir(X: VirtualSpace, V=None, a: ChowClass | None = None, N: int = DEFAULT_Q_ORDER,
            check_routes: bool = True) -> EllResult:
    """``int EL(T^vir) ch(V) a``; ``V`` and ``a`` are optional and may be combined."""
    if N < 0:
        raise ValueError("q-order must be non-negative")
    el = el_class_product(X, N)
    if check_routes:
        other = el_class_theta(X, N)
        if other != el:
            raise KernelAssertionError("theta-quotient and product routes disagree")
    integrand = el
    if V is not None:
        integrand = integrand * _as_v(X, V).ch
    if a is not None:
        if a.model != X.model:
            from .errors import ModelMismatch

            raise ModelMismatch("class a lives on another model")
        degs = a.degrees()
        if len(degs) > 1:
            raise ValidationError("a must be homogeneous")
        integrand = integrand * a
    value = X.integrate(integrand)
    if not isinstance(value, QSeries):
        value = q_ring(N).coerce(value)
    return EllResult(value, X.d)


# ---------------------------------------------------------------------------
# Jacobi-form shift identities


def jacobi_shift_check(result: EllResult, d: int | None = None) -> dict:
    """Check the elliptic-variable transformation laws on ``c_{n,j}``.

    (two)   ``s -> -s``: ``c_{n,j} = (-1)^d (-1)^j c_{n,j}``, i.e. every
            ``j`` has the parity of ``d``.
    (three) ``s -> s p`` with ``p^2 = q``:
            ``c_{n,j} = (-1)^d c_{n + (j+d)/2, j + 2d}``, checked wherever both
            q-exponents lie in ``[0, N]``; a partner with negative q-exponent
            forces the coefficient to vanish.
    (one)   only integer q-powers occur, which holds by construction.
    """
    d = result.d if d is None else d
    N = result.order
    sign = -1 if d % 2 else 1
    compared = 0
    for n in range(N + 1):
        for j, c in result.coefficient(n).terms().items():
            if (-1) ** (j % 2) * sign != 1:
                raise IdentityViolation("two", (n, j), c, -c)
    for n in range(N + 1):
        for j, c in result.coefficient(n).terms().items():
            # forward partner
            m = n + (j + d) // 2
            if m < 0:
                raise IdentityViolation("three", (n, j), c, 0)
            if m <= N:
                rhs = sign * result.coeff(m, j + 2 * d)
                compared += 1
                if c != rhs:
                    raise IdentityViolation("three", (n, j), c, rhs)
            # backward partner
            m = n - (j - d) // 2
            if m < 0:
                raise IdentityViolation("three", (n, j), c, 0)
            if m <= N:
                rhs = sign * result.coeff(m, j - 2 * d)
                compared += 1
                if c != rhs:
                    raise IdentityViolation("three", (n, j), c, rhs)
    return {"one": True, "two": True, "three": True, "compared": compared}
