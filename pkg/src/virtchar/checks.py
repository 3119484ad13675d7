"""Exact property checks shared by the test-suite, ``verify`` and check tasks.

Every space-level check has the signature ``check(X, V, a, N)`` and raises
:class:`~virtchar.errors.IdentityViolation` (or another
:class:`~virtchar.errors.VirtcharError`) on failure.
"""
from __future__ import annotations

import random
from fractions import Fraction

from .chow import ChowClass, ChowModel, exp_positive, invert_unit, log_unit
from .elliptic import (
    S,
    el_class_product,
    el_class_theta,
    ell_vir,
    jacobi_shift_check,
)
from .errors import IdentityViolation
from .genera import (
    VirtualSpace,
    _as_v,
    canonical_bundle,
    chi_minus_y,
    chi_vir,
    chi_y_class,
    euler_signature,
)
from .ktheory import Bundle, GenusSeries, _newton_elementary, genus_class, power_sums, todd_series
from .rings import (
    QQ,
    inverse,
    EpsRing,
    LaurentRing,
    PolyRing,
    QSeriesRing,
    RatFunRing,
)



def _expect(name, where, lhs, rhs):
    if lhs != rhs:
        raise IdentityViolation(name, where, lhs, rhs)


# ---------------------------------------------------------------------------
# chi_y


def chi_y_series_oracle(X: VirtualSpace, V=None, order: int | None = None):
    """``int prod f(x_i, y) / prod f(u_j, y) ch(V)`` as a y-series.

    ``f(t, y) = t / (1 - e^-t) * (1 - y e^-t)``; the constant term ``1 - y``
    is a unit among power series in ``y``.  Returns coefficients ``0..order``.
    """
    order = X.d + 5 if order is None else order
    R = QSeriesRing(QQ, order, "y")
    td = todd_series(X.d)
    one_minus = GenusSeries.constant(R.one(), X.d, R) - GenusSeries.exp(-1, X.d, R, factor=R.gen())
    f = td.map(R.coerce, R) * one_minus
    cls = genus_class(X.tangent, f) * _as_v(X, V).ch
    return list(X.integrate(cls).coeffs)


def check_polynomiality(X, V=None, a=None, N=None):
    chi_y_class(X)  # raises DegreeOverflow on failure


def check_leading_parts(X, V=None, a=None, N=None):
    slices = chi_y_class(X).slices
    for l, sl in enumerate(slices):
        _expect("leading part", f"X^{l} degree {l}", sl.degree_part(l), X.tangent.c(l))
        for k in range(l):
            _expect("leading part", f"X^{l} degree {k}", sl.degree_part(k), X.model.zero())


def check_oracle(X, V=None, a=None, N=None):
    poly = chi_minus_y(X, V, check_integrality=False)
    series = chi_y_series_oracle(X, V)
    for i, c in enumerate(series):
        _expect("oracle", f"y^{i}", poly.coefficient(i), c)


def check_symmetry(X, V=None, a=None, N=None):
    v = _as_v(X, V)
    p = chi_minus_y(X, v, check_integrality=False)
    q = chi_minus_y(X, v.dual(), check_integrality=False)
    if p.degree > X.d or q.degree > X.d:
        raise IdentityViolation("symmetry", "degree", max(p.degree, q.degree), X.d)
    for i in range(X.d + 1):
        _expect("symmetry", f"y^{i}", p.coefficient(i), q.coefficient(X.d - i))


def check_serre(X, V=None, a=None, N=None):
    v = _as_v(X, V)
    lhs = chi_vir(X, v)
    rhs = (-1) ** X.d * chi_vir(X, v.dual() * canonical_bundle(X))
    _expect("serre duality", "chi", lhs, rhs)


def check_specialization(X, V=None, a=None, N=None):
    p = chi_minus_y(X, V, check_integrality=False)
    _expect("y=0 specialization", "y=0", p(Fraction(0)), chi_vir(X, V))


def check_hopf(X, V=None, a=None, N=None):
    v = _as_v(X, V)
    e, _ = euler_signature(X)  # cross-checks the two e^vir routes
    top = X.integrate(X.tangent.c(X.d))
    _expect("hopf index", "e^vir", e, top)
    p = chi_minus_y(X, v, check_integrality=False)
    _expect("hopf index", "y=1 with V", p(Fraction(1)), v.rank * top)


def check_odd_signature(X, V=None, a=None, N=None):
    if X.d % 2:
        _expect("odd signature", "sigma", euler_signature(X)[1], 0)


# ---------------------------------------------------------------------------
# elliptic


def check_q0_slice(X, V=None, a=None, N=6):
    res = ell_vir(X, V, N=N, check_routes=False)
    p = chi_minus_y(X, V, check_integrality=False)
    expected = S.from_dict({2 * i - X.d: c for i, c in enumerate(p.coeffs) if c})
    _expect("q=0 slice", "q^0", res.coefficient(0), expected)


def check_routes(X, V=None, a=None, N=6):
    # clearing inside el_class_theta raises DenominatorNotClearing
    _expect("route equivalence", "EL class", el_class_theta(X, N), el_class_product(X, N))


def check_s_one(X, V=None, a=None, N=6):
    res = ell_vir(X, V, a, N=N, check_routes=False)
    values = res.at_s(1)
    v = _as_v(X, V)
    if a is None:
        base = v.rank * euler_signature(X)[0]
    elif a.degrees() and max(a.degrees()) > 0:
        base = Fraction(0)
    else:
        base = v.rank * X.integrate(X.tangent.c(X.d) * a)
    _expect("s=1 specialization", "q^0", values[0], base)
    for n, c in enumerate(values[1:], start=1):
        _expect("s=1 specialization", f"q^{n}", c, 0)


def check_shift(X, V=None, a=None, N=6):
    """Shift identities; meaningful only when ``c_1(K^vir) a`` integrates to zero."""
    jacobi_shift_check(ell_vir(X, V, a, N=N, check_routes=False), X.d)


SPACE_CHECKS = {
    "polynomiality": check_polynomiality,
    "leading_parts": check_leading_parts,
    "oracle": check_oracle,
    "symmetry": check_symmetry,
    "serre": check_serre,
    "specialization": check_specialization,
    "hopf": check_hopf,
    "odd_signature": check_odd_signature,
    "q0_slice": check_q0_slice,
    "routes": check_routes,
    "s_one": check_s_one,
    "shift": check_shift,
}

GENERA_CHECKS = ("polynomiality", "leading_parts", "oracle", "symmetry", "serre",
                 "specialization", "hopf", "odd_signature")
ELLIPTIC_CHECKS = ("q0_slice", "routes", "s_one")


# ---------------------------------------------------------------------------
# kernel soundness on random elements


VARIANTS = ("rational", "upoly", "qseries", "ratfun", "eps")


def _rand_q(rng: random.Random, span=4, den=3) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def random_element(rng: random.Random, variant: str, ring=None):
    """A random coefficient of the given variant (possibly zero)."""
    ring = ring or variant_ring(variant)
    if variant == "rational":
        return _rand_q(rng)
    if variant == "upoly":
        return ring([_rand_q(rng) for _ in range(rng.randint(0, 3))])
    if variant == "qseries":
        lr = ring.base
        return ring.from_list([
            lr.from_dict({e: _rand_q(rng) for e in rng.sample(range(-2, 3), rng.randint(0, 2))})
            for _ in range(ring.order + 1)])
    if variant == "ratfun":
        num = [_rand_q(rng) for _ in range(rng.randint(0, 3))]
        den = [_rand_q(rng) for _ in range(rng.randint(1, 3))]
        if not any(den):
            den = [Fraction(1)]
        return ring.fraction(num or [0], den)
    if variant == "eps":
        start = rng.randint(-1, 1)
        return ring.from_dict({start + i: _rand_q(rng) for i in range(rng.randint(0, 4))})
    raise ValueError(variant)


def random_unit(rng: random.Random, variant: str, ring=None):
    ring = ring or variant_ring(variant)
    while True:
        x = random_element(rng, variant, ring)
        if variant == "upoly":
            c = _rand_q(rng)
            if c:
                return ring([c])
            continue
        if variant == "qseries":
            c = _rand_q(rng)
            if not c:
                continue
            lead = ring.base.monomial(rng.randint(-2, 2), c)
            return ring.from_list((lead,) + x.coeffs[1:])
        if x:
            return x


def variant_ring(variant: str):
    return {
        "rational": QQ,
        "upoly": PolyRing("u"),
        "qseries": QSeriesRing(LaurentRing("s"), 3),
        "ratfun": RatFunRing("s"),
        "eps": EpsRing(QQ, -10, 4),
    }[variant]


def random_class(rng: random.Random, model: ChowModel, variant: str, ring=None, lo: int = 0):
    ring = ring or variant_ring(variant)
    terms = {}
    for k in range(lo, model.d + 1):
        for mono in model.monomials(k):
            if rng.random() < 0.6:
                c = random_element(rng, variant, ring)
                if c:
                    terms[mono] = c
    return ChowClass(model, terms, ring)


_BIG = ChowModel.of(3, h=1, k=1)
_SMALL = ChowModel.of(2, h=1, k=1)


def _restrict(x: ChowClass, ring) -> ChowClass:
    return ChowClass(_SMALL, {m: v for m, v in x.terms.items() if _SMALL.degree(m) <= 2}, ring)


def kernel_suite(rng: random.Random, variant: str, count: int) -> dict:
    """Ring axioms, inversion and exp/log round trips on ``count`` random elements.

    Returns ``{property: number of passing cases}``; raises on the first failure.
    """
    ring = variant_ring(variant)
    model = ChowModel.of(2, h=1, k=1) if variant != "qseries" else ChowModel.of(2, h=1)
    done = {"axioms": 0, "inverse": 0, "class_inverse": 0, "exp_log": 0, "truncation_ideal": 0}
    for i in range(count):
        a, b, c = (random_element(rng, variant, ring) for _ in range(3))
        _expect("associativity", (variant, i), (a * b) * c, a * (b * c))
        _expect("distributivity", (variant, i), a * (b + c), a * b + a * c)
        _expect("commutativity", (variant, i), a * b, b * a)
        _expect("additive inverse", (variant, i), (a - b) + b, a)
        done["axioms"] += 1
        u = random_unit(rng, variant, ring)
        _expect("inverse", (variant, i), u * inverse(u), 1)
        done["inverse"] += 1
        A, B, C = (random_class(rng, model, variant, ring) for _ in range(3))
        _expect("class associativity", (variant, i), (A * B) * C, A * (B * C))
        _expect("class distributivity", (variant, i), A * (B + C), A * B + A * C)
        unit = A - A.degree_part(0) + model.constant(random_unit(rng, variant, ring), ring)
        _expect("class inverse", (variant, i), unit * invert_unit(unit), model.one(ring))
        done["class_inverse"] += 1
        nil = random_class(rng, model, variant, ring, lo=1)
        _expect("exp/log", (variant, i), log_unit(exp_positive(nil)), nil)
        one_plus = model.one(ring) + nil
        _expect("log/exp", (variant, i), exp_positive(log_unit(one_plus)), one_plus)
        done["exp_log"] += 1
        if i % 4 == 0:
            # the degree-3 products are heavier; a quarter of the cases suffice
            A3, B3 = (random_class(rng, _BIG, variant, ring) for _ in range(2))
            _expect("truncation ideal", (variant, i), _restrict(A3 * B3, ring), _restrict(A3, ring) * _restrict(B3, ring))
            done["truncation_ideal"] += 1
    return done


def random_bundle(rng: random.Random, model: ChowModel, rank: int, span=3, den=2) -> Bundle:
    chern = []
    for k in range(1, min(rank, model.d) + 1):
        cls = model.zero()
        for mono in model.monomials(k):
            cls = cls + model.monomial_class(mono, Fraction(rng.randint(-span, span), rng.randint(1, den)))
        chern.append(cls)
    return Bundle(model, rank, tuple(chern))


def newton_suite(rng: random.Random, count: int) -> int:
    """Chern classes -> power sums -> Chern classes is the identity."""
    for i in range(count):
        d = rng.randint(1, 4)
        gens = {f"g{j}": rng.randint(1, min(d, 2)) for j in range(rng.randint(1, 3))}
        model = ChowModel.of(d, **gens)
        b = random_bundle(rng, model, rng.randint(0, 5))
        back = _newton_elementary(model, power_sums(b), d)
        for k in range(1, d + 1):
            _expect("newton round trip", (i, k), back[k - 1], b.c(k))
    return count
