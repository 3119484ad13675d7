"""Virtual Riemann-Roch numbers of a virtually smooth space.

A :class:`VirtualSpace` bundles a Chow model, the two bundles of the
obstruction theory (virtual tangent bundle ``E0 - E1``) and the integration
functional standing for the virtual fundamental class.

The chi_y genus is computed with the ``u``-form of the genus: after the
substitution ``y = 1 - 1/u`` the per-root series becomes the polynomial
``g(t, u) = u t + t e^{-t} / (1 - e^{-t})``, whose constant term is 1.  The
resulting class is a polynomial of degree at most ``d`` in ``u``; its
``u^l`` coefficients are the slices ``X^l`` and the chi_y class is
``sum_l (1-y)^(d-l) X^l``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import factorial
from typing import Sequence

from .chow import ChowClass, ChowModel, IntegralFunctional, Y, eval_upoly_at, integrate
from .errors import (
    KernelAssertionError,
    ModelMismatch,
    NonIntegralWarning,
    PartitionDegreeMismatch,
    ValidationError,
)
from .ktheory import Bundle, GenusSeries, KClass, as_kclass, genus_class, todd
from .rings import PolyRing, UPoly

U = PolyRing("u")


@dataclass(frozen=True, eq=False)
class VirtualSpace:
    """Model, obstruction bundles ``E0``/``E1`` and the virtual-class functional."""

    model: ChowModel
    E0: object
    E1: object
    integral: IntegralFunctional

    def __post_init__(self):
        if self.E1 is None:
            object.__setattr__(self, "E1", Bundle.trivial(self.model, 0))
        for name in ("E0", "E1"):
            b = getattr(self, name)
            if as_kclass(b).model != self.model:
                raise ModelMismatch(f"{name} lives on another model")
        if self.integral.model != self.model:
            raise ModelMismatch("functional lives on another model")
        n, m = as_kclass(self.E0).rank, as_kclass(self.E1).rank
        if n - m != self.model.d:
            raise ValidationError(
                f"rank(E0) - rank(E1) = {n} - {m} = {n - m} differs from the "
                f"virtual dimension d = {self.model.d}")

    @property
    def d(self) -> int:
        return self.model.d

    @cached_property
    def tangent(self) -> KClass:
        return as_kclass(self.E0) - as_kclass(self.E1)

    @cached_property
    def todd_class(self) -> ChowClass:
        return todd(self.tangent)

    @cached_property
    def chern_classes(self) -> list[ChowClass]:
        return self.tangent.chern_classes()

    def integrate(self, a: ChowClass):
        return integrate(self.integral, a)

    def __repr__(self):
        return f"VirtualSpace(d={self.d}, E0={self.E0!r}, E1={self.E1!r})"


def _as_v(X: VirtualSpace, V) -> KClass:
    if V is None:
        return KClass.trivial(X.model, 1)
    k = as_kclass(V)
    if k.model != X.model:
        raise ModelMismatch("V lives on another model than the space")
    return k


def virtual_tangent(X: VirtualSpace) -> KClass:
    return X.tangent


def virtual_canonical_c1(X: VirtualSpace) -> ChowClass:
    """``c_1(K^vir) = c_1(E1) - c_1(E0)``."""
    return -X.tangent.ch.degree_part(1)


def canonical_bundle(X: VirtualSpace) -> KClass:
    return KClass.line(virtual_canonical_c1(X))


def chi_vir(X: VirtualSpace, V=None) -> Fraction:
    """Virtual holomorphic Euler characteristic ``int ch(V) td(T^vir)``."""
    v = _as_v(X, V)
    return X.integrate(v.ch * X.todd_class)


# ---------------------------------------------------------------------------
# chi_y


def _bernoulli_todd(order: int) -> list[Fraction]:
    """Coefficients of ``t e^{-t} / (1 - e^{-t}) = t / (e^t - 1)``."""
    return list(GenusSeries([Fraction(1, factorial(j + 1)) for j in range(order + 1)]).inverse().coeffs)


def g_series(order: int) -> GenusSeries:
    """``g(t, u) = u t + t e^{-t} / (1 - e^{-t})`` with ``QQ[u]`` coefficients."""
    b = _bernoulli_todd(order)
    coeffs = [U([c]) for c in b]
    if order >= 1:
        coeffs[1] = coeffs[1] + U.gen()
    return GenusSeries(coeffs, U)


@dataclass(frozen=True, eq=False)
class ChiYClass:
    """Slices ``X^0 .. X^d`` and the assembled class ``sum (1-y)^(d-l) X^l``."""

    slices: tuple
    assembled: ChowClass
    d: int

    def integrate_against(self, X: VirtualSpace, chV: ChowClass) -> UPoly:
        one_minus_y = Y([1, -1])
        total = Y.zero()
        for l, s in enumerate(self.slices):
            a = X.integrate(s * chV)
            if a:
                total = total + one_minus_y ** (self.d - l) * a
        return total


def u_class(X: VirtualSpace) -> ChowClass:
    """``prod g(x_i, u) / prod g(u_j, u)`` with ``QQ[u]`` coefficients."""
    return genus_class(X.tangent, g_series(X.d))


def chi_y_class(X: VirtualSpace) -> ChiYClass:
    """The chi_y class of ``X`` split into its ``(1-y)``-slices."""
    slices, assembled = eval_upoly_at(u_class(X))
    return ChiYClass(tuple(slices), assembled, X.d)


def _check_integral(poly: UPoly, what: str):
    bad = [c for c in poly.coeffs if c.denominator != 1]
    if bad:
        warnings.warn(f"{what} has non-integral coefficients {poly}", NonIntegralWarning, stacklevel=3)


def chi_minus_y(X: VirtualSpace, V=None, check_integrality: bool = True) -> UPoly:
    """``chi^vir_{-y}(X, V)`` as a polynomial in ``y`` of degree at most ``d``."""
    v = _as_v(X, V)
    poly = chi_y_class(X).integrate_against(X, v.ch)
    if check_integrality:
        _check_integral(poly, "chi_{-y}")
    return poly


def euler_signature(X: VirtualSpace) -> tuple[Fraction, Fraction]:
    """``(e^vir, sigma^vir)``; e^vir is cross-checked against ``int c_d``."""
    poly = chi_minus_y(X, check_integrality=False)
    e = poly(Fraction(1))
    sigma = poly(Fraction(-1))
    top = X.integrate(X.tangent.c(X.d)) if X.d else X.integrate(X.model.one())
    if e != top:
        raise KernelAssertionError(f"chi_y at y=1 gives {e} but int c_d(T^vir) = {top}")
    return e, sigma


def euler_number(X: VirtualSpace) -> Fraction:
    return euler_signature(X)[0]


def signature(X: VirtualSpace) -> Fraction:
    return euler_signature(X)[1]


def chern_number(X: VirtualSpace, partition: Sequence[int]) -> Fraction:
    """``int prod_k c_k(T^vir)^{i_k}`` for ``partition = (i_1, i_2, ...)``."""
    partition = [int(i) for i in partition]
    if any(i < 0 for i in partition):
        raise PartitionDegreeMismatch("exponents must be non-negative")
    total = sum(k * i for k, i in enumerate(partition, start=1))
    if total != X.d:
        raise PartitionDegreeMismatch(f"partition {partition} has degree {total}, expected {X.d}")
    cls = X.model.one()
    for k, i in enumerate(partition, start=1):
        if i:
            cls = cls * X.tangent.c(k) ** i
    return X.integrate(cls)
