from fractions import Fraction as F

import pytest

from virtchar.elliptic import ell_vir
from virtchar.errors import MovingPartHasFixedWeight, PoleAtZero, ValidationError, WindowTooNarrow
from virtchar.genera import chi_minus_y, chi_vir, euler_signature
from virtchar.ktheory import Bundle
from virtchar.library import (
    binomial_chi,
    line_bundle,
    p1_obstruction_twist,
    p1_twist_fixed_points,
    p2_line_and_point,
    point,
    point_model,
    projective_fixed_points,
    projective_space,
)
from virtchar.localization import (
    EpsWindow,
    EquivariantBundle,
    FixedComponent,
    default_window,
    equivariant_ch,
    euler_additivity,
    inv_lambda_dual,
    localized_chi,
    localized_chi_y,
    localized_elliptic,
)
from virtchar.rings import PolyRing

Y = PolyRing("y")
PT = point_model()


def line(w):
    return EquivariantBundle(((w, Bundle.trivial(PT, 1)),))


def test_equivariant_ch_examples():
    R = EpsWindow(0, 2).ring()
    c = equivariant_ch(line(1), R, PT).terms[()]
    assert [c.coefficient(k) for k in range(3)] == [1, 1, F(1, 2)]
    c = equivariant_ch(EquivariantBundle(((0, Bundle.trivial(PT, 3)),)), R, PT).terms[()]
    assert c == R.from_base(3)
    X = projective_space(1)
    R = EpsWindow(0, 1).ring()
    c = equivariant_ch(EquivariantBundle(((4, Bundle.line(X.model.parse("h"))),)), R, X.model)
    assert c.terms[(1,)].coefficient(0) == 1
    assert c.terms[(0,)].coefficient(1) == 4


@pytest.mark.parametrize("w,expected", [(1, [1, F(1, 2), F(1, 12)]), (-1, [-1, F(1, 2), F(-1, 12)])])
def test_inv_lambda_dual_lines(w, expected):
    comp = FixedComponent(point(1), line(w))
    R = EpsWindow(-2, 3).ring()
    c = inv_lambda_dual(comp, R).terms[()]
    assert [c.coefficient(k) for k in (-1, 0, 1)] == expected


def test_fixed_weight_rejected():
    with pytest.raises(MovingPartHasFixedWeight):
        FixedComponent(point(1), line(0))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_projective_points_reproduce_binomials(n):
    for k in range(-5, 6):
        res = localized_chi(projective_fixed_points(n, k=k))
        assert res.value == binomial_chi(n, k)
        assert all(e >= 0 for e in res.series.terms())


def test_contributions_have_poles():
    res = localized_chi(projective_fixed_points(1, k=2))
    for c in res.contributions:
        assert min(c.terms()) <= -1


def test_whole_space_component():
    X = projective_space(2)
    V = line_bundle(X, 3)
    comp = FixedComponent(X, v_lift=EquivariantBundle(((0, V),)))
    res = localized_chi([comp])
    assert res.value == chi_vir(X, V)
    assert set(res.series.terms()) <= {0}
    assert localized_chi_y([FixedComponent(X)]).value == chi_minus_y(X)


@pytest.mark.parametrize("w0,winf", [(3, -2), (1, 4), (-5, 2)])
def test_obstruction_twist(w0, winf):
    res = localized_chi(p1_twist_fixed_points(w0, winf))
    assert res.value == w0 - winf == chi_vir(p1_obstruction_twist(w0 - winf))


def test_line_and_point():
    for k in range(-3, 4):
        assert localized_chi(p2_line_and_point(k)).value == binomial_chi(2, k)
    assert localized_chi_y(p2_line_and_point()).value == Y([1, 1, 1])
    assert euler_additivity(p2_line_and_point()) == 3


def test_chi_y_and_additivity():
    comps = projective_fixed_points(1)
    val = localized_chi_y(comps).value
    assert val == Y([1, 1])
    assert val(1) == euler_additivity(comps) == 2
    twist = p1_twist_fixed_points(2, -1)
    assert euler_additivity(twist) == sum(euler_signature(c.space)[0] for c in twist)


def test_inconsistent_data_keeps_pole():
    comps = [FixedComponent(point(1), line(1)), FixedComponent(point(1), line(1))]
    with pytest.raises(PoleAtZero):
        localized_chi(comps)


def test_window_too_narrow():
    with pytest.raises(WindowTooNarrow):
        localized_chi(projective_fixed_points(3), EpsWindow(-1, 3))


def test_dimension_disagreement():
    comps = [FixedComponent(point(1), line(1)), FixedComponent(point(1))]
    with pytest.raises(ValidationError):
        localized_chi(comps)


def test_default_window():
    assert default_window(projective_fixed_points(2)) == EpsWindow(-4, 2)


def test_localized_elliptic_p1():
    N = 4
    assert localized_elliptic(projective_fixed_points(1), N) == ell_vir(projective_space(1), N=N)
