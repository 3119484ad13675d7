"""Curated spaces with classically known invariants.

Torus conventions: ``P^n`` carries the action with weights ``w_0 .. w_n``
on homogeneous coordinates; at the fixed point ``p_i`` the tangent space has
weights ``w_j - w_i`` (``j != i``) and ``O(k)`` has weight ``-k w_i``.  For
``P^1`` with ``w = (0, 1)`` this gives tangent weights ``+1`` at ``0`` and
``-1`` at ``infinity``, and ``O(k)`` weights ``0`` and ``-k``.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb

from .chow import ChowModel, IntegralFunctional
from .genera import VirtualSpace
from .ktheory import Bundle
from .localization import EquivariantBundle, FixedComponent


def point_model() -> ChowModel:
    return ChowModel((), 0)


def point(degree=1, rank: int = 0) -> VirtualSpace:
    """A ``d = 0`` space with ``deg [X]^vir = degree``; ``E0 = E1`` of the given rank."""
    M = point_model()
    return VirtualSpace(M, Bundle.trivial(M, rank), Bundle.trivial(M, rank),
                        IntegralFunctional(M, {(): Fraction(degree)}))


def projective_model(n: int) -> ChowModel:
    return ChowModel.of(n, h=1)


def tangent_projective(n: int) -> Bundle:
    """``T_{P^n}`` as the rank-``n`` bundle with ``c(T) = (1+h)^(n+1)``."""
    M = projective_model(n)
    h = M.gen("h")
    return Bundle(M, n, tuple(comb(n + 1, k) * h ** k for k in range(1, n + 1)))


def projective_space(n: int) -> VirtualSpace:
    M = projective_model(n)
    return VirtualSpace(M, tangent_projective(n), None, IntegralFunctional(M, {(n,): 1}))


def line_bundle(X: VirtualSpace, k) -> Bundle:
    """``O(k h)`` on a model with generator ``h``."""
    return Bundle.line(Fraction(k) * X.model.gen("h"))


def p1_obstruction_twist(a) -> VirtualSpace:
    """``P^1`` with ``E0 = T`` and obstruction ``E1 = O(a)``; ``d = 0``.

    The virtual class is ``a`` times a point, matching the localized count
    ``w_0 - w_inf`` for a lift of ``O(a)`` with weights ``(w_0, w_inf)``.
    """
    M = point_model()
    return VirtualSpace(M, Bundle.trivial(M, 1), Bundle.trivial(M, 1),
                        IntegralFunctional(M, {(): Fraction(a)}))


def projective_fixed_points(n: int, weights=None, k: int = 0) -> list[FixedComponent]:
    """The ``n + 1`` isolated fixed points of ``P^n`` with ``V = O(k)`` lifted."""
    w = list(range(n + 1)) if weights is None else [int(x) for x in weights]
    if len(w) != n + 1 or len(set(w)) != n + 1:
        raise ValueError("need n + 1 distinct weights")
    M = point_model()
    comps = []
    for i in range(n + 1):
        tangent = _merge([(w[j] - w[i], 1) for j in range(n + 1) if j != i], M)
        lift = EquivariantBundle(((-k * w[i], Bundle.trivial(M, 1)),))
        comps.append(FixedComponent(point(1), tangent, EquivariantBundle(), lift))
    return comps


def p1_twist_fixed_points(w0: int, w_inf: int) -> list[FixedComponent]:
    """Fixed points of ``P^1`` with ``E1 = O(a)`` lifted with weights ``(w0, w_inf)``, ``a = w0 - w_inf``."""
    if not w0 or not w_inf:
        raise ValueError("obstruction weights must be nonzero at both fixed points")
    M = point_model()
    comps = []
    for t_weight, ob_weight in ((1, w0), (-1, w_inf)):
        pos = EquivariantBundle(((t_weight, Bundle.trivial(M, 1)),))
        neg = EquivariantBundle(((ob_weight, Bundle.trivial(M, 1)),))
        comps.append(FixedComponent(point(1), pos, neg))
    return comps


def _merge(pairs, model) -> EquivariantBundle:
    ranks: dict[int, int] = {}
    for w, r in pairs:
        ranks[w] = ranks.get(w, 0) + r
    return EquivariantBundle(tuple((w, Bundle.trivial(model, r)) for w, r in sorted(ranks.items())))


def binomial_chi(n: int, k: int) -> int:
    """``chi(P^n, O(k))``."""
    if k >= 0:
        return comb(n + k, n)
    if k > -n - 1:
        return 0
    return (-1) ** n * comb(-k - 1, n)


def p2_line_and_point(k: int = 0) -> list[FixedComponent]:
    """``P^2`` with weights ``(0, 0, 1)``: fixed line ``{z_2 = 0}`` plus the point ``[0:0:1]``.

    The line has normal bundle ``O(1)`` of weight ``1``; at the point both
    tangent directions have weight ``-1``.  ``V = O(k)`` restricts to ``O(k)``
    of weight 0 on the line and to weight ``-k`` at the point.
    """
    line = projective_space(1)
    L = line.model
    h = L.gen("h")
    normal = EquivariantBundle(((1, Bundle.line(h)),))
    v_line = EquivariantBundle(((0, Bundle.line(k * h)),))
    M = point_model()
    tangent = EquivariantBundle(((-1, Bundle.trivial(M, 2)),))
    v_pt = EquivariantBundle(((-k, Bundle.trivial(M, 1)),))
    return [FixedComponent(line, normal, EquivariantBundle(), v_line),
            FixedComponent(point(1), tangent, EquivariantBundle(), v_pt)]
