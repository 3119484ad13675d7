"""Fixed-point localization for a rank-one torus.

Equivariant K-classes are written as ``sum_k B^k e^{k eps}``; a block of
weight ``k`` has Chern roots ``x + k eps``.  Every localized quantity is a
sum over fixed components of integrals with :class:`~virtchar.rings.EpsLaurent`
coefficients, which must be regular at ``eps = 0`` after summation.

Per component the virtual normal bundle is a formal difference
``N = n_pos - n_neg`` of equivariant bundles with nonzero weights, and

    ch(1 / Lambda_{-1} N^dual) = prod_{neg} (1 - e^{-x-k eps}) / prod_{pos} (1 - e^{-x-k eps}).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .chow import ChowClass, eps_value_at_zero
from .elliptic import SR, EllResult, S, ecal_ch, ecal_series, q_ring
from .errors import (
    DenominatorNotClearing,
    ModelMismatch,
    MovingPartHasFixedWeight,
    PoleAtZero,
    ValidationError,
)
from .genera import VirtualSpace, chi_y_class, euler_signature
from .ktheory import Bundle, GenusSeries, as_kclass, genus_class
from .rings import QQ, EpsLaurent, EpsRing, PolyRing, RatFunRing, UPoly

YR = RatFunRing("y")
YP = PolyRing("y")


@dataclass(frozen=True)
class EquivariantBundle:
    """Weight decomposition ``B = sum_k B^k``."""

    blocks: tuple = ()

    def __post_init__(self):
        blocks = tuple((int(w), b) for w, b in self.blocks)
        weights = [w for w, _ in blocks]
        if len(set(weights)) != len(weights):
            raise ValidationError(f"repeated weight in equivariant bundle {weights}")
        models = {as_kclass(b).model for _, b in blocks}
        if len(models) > 1:
            raise ModelMismatch("blocks of one equivariant bundle live on different models")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def of(cls, *pairs) -> "EquivariantBundle":
        return cls(tuple(pairs))

    @property
    def rank(self) -> int:
        return sum(as_kclass(b).rank for _, b in self.blocks)

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(w for w, _ in self.blocks)

    def check_moving(self):
        if 0 in self.weights:
            raise MovingPartHasFixedWeight("moving part contains a weight-0 block")

    def __len__(self):
        return len(self.blocks)


@dataclass(frozen=True)
class EpsWindow:
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > 0 or self.hi < 0:
            raise ValidationError("eps window needs lo <= 0 <= hi")

    def ring(self, base=QQ) -> EpsRing:
        return EpsRing(base, self.lo, self.hi)


@dataclass(frozen=True, eq=False)
class FixedComponent:
    """A fixed locus with its own obstruction theory, virtual normal bundle and lift of V."""

    space: VirtualSpace
    n_pos: EquivariantBundle = field(default_factory=EquivariantBundle)
    n_neg: EquivariantBundle = field(default_factory=EquivariantBundle)
    v_lift: EquivariantBundle | None = None

    def __post_init__(self):
        model = self.space.model
        for name in ("n_pos", "n_neg", "v_lift"):
            eb = getattr(self, name)
            if eb is None:
                continue
            eb_model = {as_kclass(b).model for _, b in eb.blocks}
            if eb_model and eb_model != {model}:
                raise ModelMismatch(f"{name} lives on another model than the component")
        self.n_pos.check_moving()
        self.n_neg.check_moving()

    @property
    def moving_rank(self) -> int:
        return self.n_pos.rank - self.n_neg.rank

    @property
    def d_global(self) -> int:
        return self.space.d + self.moving_rank

    def lift(self) -> EquivariantBundle:
        if self.v_lift is None:
            return EquivariantBundle(((0, Bundle.trivial(self.space.model, 1)),))
        return self.v_lift


def _global_dimension(components) -> int:
    if not components:
        raise ValidationError("no fixed components given")
    dims = {c.d_global for c in components}
    if len(dims) != 1:
        raise ValidationError(f"fixed components disagree on the global dimension: {sorted(dims)}")
    return dims.pop()


def default_window(components) -> EpsWindow:
    """``[-(max moving rank + d), d]``; moving rank counts both parts of the difference."""
    d = _global_dimension(components)
    mov = max(c.n_pos.rank + c.n_neg.rank for c in components)
    return EpsWindow(-(mov + d), d)


def _ring_for(window: EpsWindow | EpsRing | None, components, base=QQ) -> EpsRing:
    if isinstance(window, EpsRing):
        return window
    if window is None:
        window = default_window(components)
    return window.ring(base)


# ---------------------------------------------------------------------------
# equivariant classes


def equivariant_ch(b: EquivariantBundle, ring: EpsRing, model=None) -> ChowClass:
    """``sum_k ch(B^k) e^{k eps}``."""
    if model is None:
        if not b.blocks:
            raise ValidationError("empty equivariant bundle needs an explicit model")
        model = as_kclass(b.blocks[0][1]).model
    total = model.zero(ring)
    for w, bundle in b.blocks:
        total = total + as_kclass(bundle).ch.scale(ring.exp(w))
    return total


def _block_class(model, ring: EpsRing, blocks, sign: int, series_for) -> ChowClass:
    """``prod over blocks of genus_class(sign * B^k, series_for(k))``."""
    result = model.one(ring)
    for w, bundle in blocks:
        k = as_kclass(bundle)
        if sign < 0:
            k = -k
        result = result * genus_class(k, series_for(w))
    return result


def _twisted_class(comp: FixedComponent, ring: EpsRing, series_for) -> ChowClass:
    """``prod_pos phi_k / prod_neg phi_k`` over the roots of the normal bundle."""
    model = comp.space.model
    return (_block_class(model, ring, comp.n_pos.blocks, 1, series_for)
            * _block_class(model, ring, comp.n_neg.blocks, -1, series_for))


def _lambda_series(ring: EpsRing, d: int, t_factor):
    """``w -> 1 - t_factor * e^{-w eps} e^{-t}``."""

    def make(w):
        return 1 - GenusSeries.exp(-1, d, ring, factor=ring.exp(-w, factor=t_factor))

    return make


def inv_lambda_dual(comp: FixedComponent, ring: EpsRing) -> ChowClass:
    """``ch(1 / Lambda_{-1} N^dual)`` for the component's virtual normal bundle."""
    comp.n_pos.check_moving()
    comp.n_neg.check_moving()
    phi = _lambda_series(ring, comp.space.d, ring.base.one())
    pos = _block_class(comp.space.model, ring, comp.n_pos.blocks, -1, phi)
    neg = _block_class(comp.space.model, ring, comp.n_neg.blocks, 1, phi)
    return pos * neg


def lambda_y_dual(comp: FixedComponent, ring: EpsRing, y) -> ChowClass:
    """``ch(Lambda_{-y} N^dual)``."""
    return _twisted_class(comp, ring, _lambda_series(ring, comp.space.d, y))


# ---------------------------------------------------------------------------
# localized invariants


@dataclass(frozen=True, eq=False)
class LocalizedResult:
    series: EpsLaurent
    contributions: tuple
    value: object


def _regular_value(total: EpsLaurent):
    negative = sorted(k for k in total.terms() if k < 0)
    if negative:
        raise PoleAtZero(negative[0], f"localized sum keeps a pole eps^{negative[0]}")
    return eps_value_at_zero(total)


def localized_chi(components, window=None) -> LocalizedResult:
    """``sum_i int_{X_i} ch(V_i) ch(1/Lambda_{-1} N_i^dual) td(T_{X_i})`` at ``eps = 0``."""
    ring = _ring_for(window, components)
    total = ring.zero()
    parts = []
    for comp in components:
        X = comp.space
        integrand = (equivariant_ch(comp.lift(), ring, X.model)
                     * inv_lambda_dual(comp, ring) * X.todd_class)
        c = ring.coerce(X.integrate(integrand))
        parts.append(c)
        total = total + c
    return LocalizedResult(total, tuple(parts), _regular_value(total))


def localized_chi_y(components, window=None) -> LocalizedResult:
    """Localized ``chi_{-y}``: extra factor ``Lambda_{-y} N^dual``; value is a polynomial in y."""
    ring = _ring_for(window, components, YR)
    y = YR.gen()
    total = ring.zero()
    parts = []
    for comp in components:
        X = comp.space
        xy = chi_y_class(X).assembled.map_coeffs(lambda c: ring.coerce(YR.coerce(c)), ring)
        integrand = (xy * equivariant_ch(comp.lift(), ring, X.model)
                     * lambda_y_dual(comp, ring, y) * inv_lambda_dual(comp, ring))
        c = ring.coerce(X.integrate(integrand))
        parts.append(c)
        total = total + c
    value = _regular_value(total)
    if len(value.den) != 1:
        raise DenominatorNotClearing(f"localized chi_y {value} is not a polynomial in y")
    return LocalizedResult(total, tuple(parts), UPoly(YP, value.num))


def localized_elliptic(components, N: int = 6, window=None) -> EllResult:
    """Localized elliptic genus; the normal directions carry shifted E, Lambda_{-y} and 1/Lambda_{-1}."""
    d = _global_dimension(components)
    qr = q_ring(N, SR)
    ring = _ring_for(window, components, qr)
    s2 = qr.from_base(SR.coerce(S.monomial(2)))
    total = ring.zero()
    for comp in components:
        X = comp.space
        n = comp.moving_rank
        prefactor = qr.from_base(SR.coerce(S.monomial(-(X.d + n))))
        xy = chi_y_class(X).assembled.map_coeffs(
            lambda c: ring.coerce(_y_to_s(c, qr)), ring)
        ecal_x = ecal_ch(X, N).map_coeffs(lambda c: ring.coerce(c.map_coeffs(SR.coerce, qr)), ring)

        def ecal_shift(w, X=X):
            return ecal_series(N, X.d, ring, w)

        integrand = (xy * ecal_x * equivariant_ch(comp.lift(), ring, X.model)
                     * _twisted_class(comp, ring, ecal_shift)
                     * lambda_y_dual(comp, ring, s2) * inv_lambda_dual(comp, ring))
        c = ring.coerce(X.integrate(integrand)) * prefactor
        total = total + c
    value = _regular_value(total)
    R = q_ring(N)
    cleared = value.map_coeffs(lambda c: c.to_laurent(S), R)
    return EllResult(cleared, d)


def _y_to_s(c, qr):
    """A polynomial in y as a q-constant over rational functions in s (y = s^2)."""
    num = [0] * (2 * len(c.coeffs))
    for i, v in enumerate(c.coeffs):
        num[2 * i] = v
    return qr.from_base(SR.fraction(num or [0], [1]))


def euler_additivity(components) -> Fraction:
    """``sum_i e^vir(X_i)``."""
    return sum((euler_signature(c.space)[0] for c in components), Fraction(0))
