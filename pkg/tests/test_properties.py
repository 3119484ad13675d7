from fractions import Fraction as F

from hypothesis import given, settings
from hypothesis import strategies as st

from virtchar.chow import ChowModel, exp_positive, invert_unit, log_unit
from virtchar.genera import VirtualSpace, chi_minus_y, chi_vir
from virtchar.chow import IntegralFunctional
from virtchar.ktheory import Bundle, KClass
from virtchar.rings import LaurentRing

M = ChowModel.of(3, a=1, b=2)
MONOS = [m for k in range(4) for m in M.monomials(k)]
S = LaurentRing("s")

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def classes(draw, positive=False):
    cls = M.zero()
    for mono in MONOS:
        if positive and M.degree(mono) == 0:
            continue
        cls = cls + M.monomial_class(mono, draw(rationals))
    return cls


@st.composite
def laurents(draw):
    terms = draw(st.dictionaries(st.integers(-4, 4), rationals, max_size=4))
    return S.from_dict(terms)


@given(classes(), classes(), classes())
def test_chow_ring_axioms(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x


@given(classes(positive=True))
def test_exp_log_round_trip(x):
    assert log_unit(exp_positive(x)) == x


@given(classes(positive=True), rationals.filter(bool))
def test_unit_inverse(x, c):
    u = M.constant(c) + x
    assert u * invert_unit(u) == M.one()


@given(laurents(), laurents())
def test_laurent_evaluation_is_a_homomorphism(p, q):
    for x in (F(1), F(-2), F(1, 3)):
        assert (p * q)(x) == p(x) * q(x)
        assert (p + q)(x) == p(x) + q(x)


@settings(max_examples=30, deadline=None)
@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(1, 3))
def test_chi_is_additive_and_y_zero_is_chi(k, l, f):
    # a rank-3 "space" on the weighted model; chi must be additive in V
    X = VirtualSpace(M, Bundle(M, 3, (M.parse("2*a"), M.parse("b"))), None,
                     IntegralFunctional.parse(M, {"a^3": f, "a*b": 1}))
    V = KClass.line(M.parse(f"{k}*a"))
    W = KClass.line(M.parse(f"{l}*a"))
    assert chi_vir(X, V + W) == chi_vir(X, V) + chi_vir(X, W)
    assert chi_minus_y(X, V, check_integrality=False).coeffs[:1] in ((chi_vir(X, V),), ())
