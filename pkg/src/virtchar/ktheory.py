"""Bundles, virtual K-classes and the splitting-principle genus engine.

Chern roots are never materialised.  A bundle is given by its Chern
classes, Newton's identities turn those into power sums, and every
multiplicative characteristic class ``prod phi(x_i) / prod phi(u_j)`` is
evaluated as ``phi_0^rank * exp(sum_k psi_k p_k)`` with
``psi = log(phi / phi_0)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

from .chow import ChowClass, ChowModel, exp_positive
from .errors import ModelMismatch, NonUnit, NonUnitLeadingCoefficient, ValidationError
from .rings import QQ, inverse


# ---------------------------------------------------------------------------
# truncated power series in one formal root t


class GenusSeries:
    """Coefficients ``phi_0 .. phi_n`` of a per-root series ``phi(t)``."""

    __slots__ = ("coeffs", "ring")

    def __init__(self, coeffs: Sequence, ring=QQ):
        self.ring = ring
        self.coeffs = tuple(ring.coerce(c) for c in coeffs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k):
        if isinstance(k, slice):
            return GenusSeries(self.coeffs[k], self.ring)
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, GenusSeries) and self.coeffs == other.coeffs

    __hash__ = None

    def __repr__(self):
        return f"GenusSeries({list(self.coeffs)!r})"

    @classmethod
    def exp(cls, a, order: int, ring=QQ, factor=None) -> "GenusSeries":
        """``factor * e^(a t)`` with rational ``a``."""
        factor = ring.one() if factor is None else ring.coerce(factor)
        a = Fraction(a)
        return cls([factor * (a ** j / factorial(j)) for j in range(order + 1)], ring)

    @classmethod
    def constant(cls, c, order: int, ring=QQ) -> "GenusSeries":
        return cls([c] + [ring.zero()] * order, ring)

    def _binary(self, other):
        if not isinstance(other, GenusSeries):
            other = GenusSeries.constant(other, self.order, self.ring)
        if other.ring != self.ring or other.order != self.order:
            raise ValueError("series must share ring and order")
        return other

    def __add__(self, other):
        other = self._binary(other)
        return GenusSeries([a + b for a, b in zip(self.coeffs, other.coeffs)], self.ring)

    __radd__ = __add__

    def __neg__(self):
        return GenusSeries([-a for a in self.coeffs], self.ring)

    def __sub__(self, other):
        return self + (-self._binary(other))

    def __rsub__(self, other):
        return self._binary(other) - self

    def __mul__(self, other):
        if not isinstance(other, GenusSeries):
            c = self.ring.coerce(other)
            return GenusSeries([a * c for a in self.coeffs], self.ring)
        other = self._binary(other)
        n = len(self.coeffs)
        zero = self.ring.zero()
        out = [zero] * n
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j in range(n - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] = out[i + j] + a * b
        return GenusSeries(out, self.ring)

    __rmul__ = __mul__

    def inverse(self) -> "GenusSeries":
        a = self.coeffs
        inv0 = inverse(a[0])
        out = [inv0]
        for k in range(1, len(a)):
            acc = self.ring.zero()
            for j in range(1, k + 1):
                if a[j]:
                    acc = acc + a[j] * out[k - j]
            out.append(-(inv0 * acc))
        return GenusSeries(out, self.ring)

    def __truediv__(self, other):
        if isinstance(other, GenusSeries):
            return self * other.inverse()
        return self * inverse(other)

    def derivative(self) -> list:
        return [self.coeffs[k] * k for k in range(1, len(self.coeffs))]

    def log(self) -> "GenusSeries":
        """Logarithm of a series with constant term 1."""
        if self.coeffs[0] != self.ring.one():
            raise NonUnitLeadingCoefficient("log needs constant term 1")
        n = self.order
        if n == 0:
            return GenusSeries([self.ring.zero()], self.ring)
        quotient = GenusSeries(self.derivative() + [self.ring.zero()], self.ring) * self.inverse()
        return GenusSeries(
            [self.ring.zero()] + [quotient[k - 1] * Fraction(1, k) for k in range(1, n + 1)],
            self.ring)

    def exponential(self) -> "GenusSeries":
        """Exponential of a series with constant term 0."""
        if self.coeffs[0]:
            raise ValueError("exponential needs constant term 0")
        a = self.coeffs
        out = [self.ring.one()]
        for k in range(1, len(a)):
            acc = self.ring.zero()
            for j in range(1, k + 1):
                if a[j]:
                    acc = acc + a[j] * out[k - j] * j
            out.append(acc * Fraction(1, k))
        return GenusSeries(out, self.ring)

    def map(self, fn, ring) -> "GenusSeries":
        return GenusSeries([fn(c) for c in self.coeffs], ring)


def todd_series(order: int) -> GenusSeries:
    """``t / (1 - e^{-t})``."""
    return GenusSeries([Fraction((-1) ** j, factorial(j + 1)) for j in range(order + 1)]).inverse()


def chern_series(order: int) -> GenusSeries:
    """``1 + t``: the total Chern class."""
    return GenusSeries(([1, 1] + [0] * order)[: order + 1])


def _truncate(series: GenusSeries, order: int) -> GenusSeries:
    return series[: order + 1]


# ---------------------------------------------------------------------------
# bundles and K-classes


def _newton_power_sums(model: ChowModel, chern: Sequence[ChowClass], upto: int) -> list[ChowClass]:
    """``p_1 .. p_upto`` from elementary symmetric classes ``c_1, c_2, ...``."""
    p: list[ChowClass] = []
    zero = model.zero()
    for k in range(1, upto + 1):
        acc = zero
        for i in range(1, k):
            if i <= len(chern):
                term = chern[i - 1] * p[k - i - 1]
                acc = acc + term if i % 2 == 1 else acc - term
        if k <= len(chern):
            ck = chern[k - 1] * k
            acc = acc + ck if k % 2 == 1 else acc - ck
        p.append(acc)
    return p


def _newton_elementary(model: ChowModel, p: Sequence[ChowClass], upto: int) -> list[ChowClass]:
    """``c_1 .. c_upto`` from power sums (inverse Newton, exact division by k)."""
    c = [model.one()]
    for k in range(1, upto + 1):
        acc = model.zero()
        for i in range(1, k + 1):
            term = c[k - i] * p[i - 1]
            acc = acc + term if i % 2 == 1 else acc - term
        c.append(acc / k)
    return c[1:]


@dataclass(frozen=True, eq=False)
class Bundle:
    """A vector bundle given by its rank and Chern classes ``c_1 .. c_min(rank, d)``."""

    model: ChowModel
    rank: int
    chern: tuple = ()

    def __post_init__(self):
        if self.rank < 0:
            raise ValidationError("bundle rank must be non-negative")
        chern = tuple(self.chern)
        limit = min(self.rank, self.model.d)
        # trailing zero classes are harmless; drop them before the length check
        while len(chern) > limit and not chern[-1]:
            chern = chern[:-1]
        if len(chern) > limit:
            raise ValidationError(
                f"rank {self.rank} bundle on a d={self.model.d} model carries at most "
                f"{limit} Chern classes, got {len(chern)}")
        for k, c in enumerate(chern, start=1):
            if c.model != self.model:
                raise ModelMismatch("Chern class lives on another model")
            if c.ring != QQ:
                raise ValidationError("Chern classes must have rational coefficients")
            if not c.is_homogeneous(k):
                raise ValidationError(f"c_{k} must be homogeneous of degree {k}, got {c}")
        object.__setattr__(self, "chern", chern)

    @classmethod
    def trivial(cls, model: ChowModel, rank: int) -> "Bundle":
        return cls(model, rank, ())

    @classmethod
    def line(cls, c1: ChowClass) -> "Bundle":
        return cls(c1.model, 1, (c1,))

    def c(self, k: int) -> ChowClass:
        if k == 0:
            return self.model.one()
        if 1 <= k <= len(self.chern):
            return self.chern[k - 1]
        return self.model.zero()

    def total_chern(self) -> ChowClass:
        total = self.model.one()
        for c in self.chern:
            total = total + c
        return total

    def __eq__(self, other):
        return (isinstance(other, Bundle) and self.model == other.model and self.rank == other.rank
                and len(self.chern) == len(other.chern)
                and all(a == b for a, b in zip(self.chern, other.chern)))

    __hash__ = None

    def __repr__(self):
        cs = ", ".join(f"c{k}={c}" for k, c in enumerate(self.chern, 1))
        return f"Bundle(rank={self.rank}{', ' if cs else ''}{cs})"


def power_sums(b: Bundle) -> list[ChowClass]:
    """Power sums ``p_1 .. p_d`` of the Chern roots of ``b``."""
    return _newton_power_sums(b.model, b.chern, b.model.d)


class KClass:
    """Virtual bundle ``rank + ch``; ``ch`` has rational coefficients."""

    __slots__ = ("rank", "ch")

    def __init__(self, rank: int, ch: ChowClass):
        if ch.ring != QQ:
            raise ValidationError("Chern characters must have rational coefficients")
        if ch.constant_term() != rank:
            raise ValidationError(f"ch_0 = {ch.constant_term()} does not equal rank {rank}")
        self.rank = int(rank)
        self.ch = ch

    @property
    def model(self) -> ChowModel:
        return self.ch.model

    @classmethod
    def zero(cls, model: ChowModel) -> "KClass":
        return cls(0, model.zero())

    @classmethod
    def trivial(cls, model: ChowModel, rank: int = 1) -> "KClass":
        return cls(rank, model.constant(Fraction(rank)))

    @classmethod
    def line(cls, c1: ChowClass) -> "KClass":
        return cls(1, exp_positive(c1))

    def ch_part(self, k: int) -> ChowClass:
        return self.ch.degree_part(k)

    def power_sum(self, k: int) -> ChowClass:
        """``k! ch_k``: the k-th power sum of the (virtual) Chern roots."""
        return self.ch.degree_part(k) * factorial(k)

    def power_sums(self) -> list[ChowClass]:
        return [self.power_sum(k) for k in range(1, self.model.d + 1)]

    def chern_classes(self) -> list[ChowClass]:
        """``c_1 .. c_d`` via inverse Newton identities."""
        return _newton_elementary(self.model, self.power_sums(), self.model.d)

    def c(self, k: int) -> ChowClass:
        if k == 0:
            return self.model.one()
        return self.chern_classes()[k - 1] if k <= self.model.d else self.model.zero()

    def total_chern(self) -> ChowClass:
        total = self.model.one()
        for c in self.chern_classes():
            total = total + c
        return total

    def _check(self, other):
        if other.model != self.model:
            raise ModelMismatch("K-classes live on different models")

    def __add__(self, other: "KClass") -> "KClass":
        self._check(other)
        return KClass(self.rank + other.rank, self.ch + other.ch)

    def __sub__(self, other: "KClass") -> "KClass":
        self._check(other)
        return KClass(self.rank - other.rank, self.ch - other.ch)

    def __neg__(self) -> "KClass":
        return KClass(-self.rank, -self.ch)

    def __mul__(self, other):
        if isinstance(other, KClass):
            self._check(other)
            return KClass(self.rank * other.rank, self.ch * other.ch)
        return KClass(self.rank * other, self.ch * other)

    __rmul__ = __mul__

    def dual(self) -> "KClass":
        deg = self.model.degree
        return KClass(self.rank, ChowClass(
            self.model, {m: (c if deg(m) % 2 == 0 else -c) for m, c in self.ch.terms.items()}))

    def __eq__(self, other):
        return isinstance(other, KClass) and self.rank == other.rank and self.ch == other.ch

    __hash__ = None

    def __repr__(self):
        return f"KClass(rank={self.rank}, ch={self.ch})"


def ch_of_bundle(b: Bundle) -> KClass:
    """``ch(b) = rank + sum_k p_k / k!``."""
    ch = b.model.constant(Fraction(b.rank))
    for k, p in enumerate(power_sums(b), start=1):
        ch = ch + p / factorial(k)
    return KClass(b.rank, ch)


def as_kclass(x) -> KClass:
    if isinstance(x, KClass):
        return x
    if isinstance(x, Bundle):
        return ch_of_bundle(x)
    raise TypeError(f"expected Bundle or KClass, got {type(x).__name__}")


def kclass_sum(a, b) -> KClass:
    return as_kclass(a) + as_kclass(b)


def kclass_difference(a, b) -> KClass:
    return as_kclass(a) - as_kclass(b)


def dual(a) -> KClass:
    return as_kclass(a).dual()


def tensor(a, b) -> KClass:
    return as_kclass(a) * as_kclass(b)


def c1_det(a) -> ChowClass:
    """First Chern class of the determinant: the degree-1 part of ``ch``."""
    return as_kclass(a).ch.degree_part(1)


def whitney_sum(e: Bundle, f: Bundle) -> Bundle:
    """Direct sum, Chern classes from the Whitney product formula."""
    if e.model != f.model:
        raise ModelMismatch("bundles live on different models")
    total = e.total_chern() * f.total_chern()
    rank = e.rank + f.rank
    chern = tuple(total.degree_part(k) for k in range(1, min(rank, e.model.d) + 1))
    return Bundle(e.model, rank, chern)


# ---------------------------------------------------------------------------
# multiplicative classes


def genus_class(x, phi: GenusSeries) -> ChowClass:
    """``prod phi(x_i) / prod phi(u_j)`` over the roots of a (virtual) class.

    ``x`` is a Bundle or KClass.  The result has coefficients in
    ``phi.ring``; ``phi_0`` must be a unit there.
    """
    k = as_kclass(x)
    model = k.model
    d = model.d
    if phi.order < d:
        raise ValueError(f"series of order {phi.order} cannot resolve degree {d}")
    ring = phi.ring
    phi0 = phi[0]
    try:
        inv0 = inverse(phi0)
    except NonUnit as exc:
        raise NonUnitLeadingCoefficient(f"phi_0 = {phi0} is not a unit in {ring!r}") from exc
    normalised = phi * inv0
    psi = _truncate(normalised, d).log()
    exponent = model.zero(ring)
    for j in range(1, d + 1):
        if psi[j]:
            p = k.power_sum(j)
            if p:
                exponent = exponent + p.scale(psi[j])
    result = exp_positive(exponent)
    if k.rank == 0:
        return result
    return result.scale(phi0 ** k.rank)


def multiplicative_class(E0, E1, phi: GenusSeries) -> ChowClass:
    """``prod_{roots of E0} phi / prod_{roots of E1} phi``; ``E1`` may be None."""
    k = as_kclass(E0)
    if E1 is not None:
        k = k - as_kclass(E1)
    return genus_class(k, phi)


def todd(x) -> ChowClass:
    """Todd class of a bundle or K-class."""
    k = as_kclass(x)
    return genus_class(k, todd_series(k.model.d))


def total_chern_class(x) -> ChowClass:
    k = as_kclass(x)
    return genus_class(k, chern_series(k.model.d))


def lambda_st_class(x, t, mode: str = "lambda") -> ChowClass:
    """``ch(Lambda_t x)`` (``mode="lambda"``) or ``ch(S_t x)`` (``mode="sym"``).

    ``t`` is an element of a ring in which ``1 + t`` (resp. ``1 - t``) is a
    unit; virtual classes follow ``Lambda_t(E - F) = Lambda_t(E) S_{-t}(F)``.
    """
    k = as_kclass(x)
    ring = t.ring if not isinstance(t, (int, Fraction)) else QQ
    d = k.model.d
    e_t = GenusSeries.exp(1, d, ring, factor=t)
    if mode == "lambda":
        phi = 1 + e_t
    elif mode == "sym":
        phi = (1 - e_t).inverse()
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return genus_class(k, phi)


def kclass_from_class(ch: ChowClass) -> KClass:
    c0 = ch.constant_term()
    if Fraction(c0).denominator != 1:
        raise ValidationError("rank must be an integer")
    return KClass(int(c0), ch)
