import random
import warnings
from fractions import Fraction as F

import pytest

from virtchar.chow import ChowModel, IntegralFunctional
from virtchar.errors import NonIntegralWarning, PartitionDegreeMismatch, ValidationError
from virtchar.genera import (
    VirtualSpace,
    chern_number,
    chi_minus_y,
    chi_vir,
    chi_y_class,
    euler_signature,
    virtual_canonical_c1,
    virtual_tangent,
)
from virtchar.ktheory import Bundle, KClass
from virtchar.library import binomial_chi, line_bundle, p1_obstruction_twist, point, projective_space
from virtchar.randgen import random_case
from virtchar.rings import PolyRing

Y = PolyRing("y")


def test_point_space():
    X = point(5)
    assert virtual_tangent(X).rank == 0 and virtual_tangent(X).ch == X.model.zero()
    assert chi_vir(X, KClass.trivial(X.model, 3)) == 15
    assert list(chi_y_class(X).slices) == [X.model.one()]
    assert chi_minus_y(point(1), KClass.trivial(point(1).model, 4)) == Y([4])


def test_p1_tangent_and_canonical(p1):
    assert virtual_tangent(p1).ch == p1.model.parse("1 + 2*h")
    assert virtual_canonical_c1(p1) == p1.model.parse("-2*h")


def test_twisted_tangent_class():
    # T - Ob on the P^1 model; as a space this has d = 0, so only the K-class is checked
    M = ChowModel.of(1, h=1)
    a = 5
    diff = KClass.line(M.parse("2*h")) - KClass.line(M.parse(f"{a}*h"))
    assert diff.rank == 0 and diff.ch == M.parse(f"{2 - a}*h")


@pytest.mark.parametrize("n", [1, 2, 3])
def test_hrr_projective(n):
    X = projective_space(n)
    for k in range(-5, 6):
        assert chi_vir(X, line_bundle(X, k)) == binomial_chi(n, k)


def test_chi_y_projective(p1, p2):
    assert chi_minus_y(p1) == Y([1, 1])
    assert chi_minus_y(p2) == Y([1, 1, 1])
    assert chi_minus_y(projective_space(3)) == Y([1, 1, 1, 1])


def test_p1_slices(p1):
    cls = chi_y_class(p1)
    assert list(cls.slices) == [p1.model.parse("1 - h"), p1.model.parse("2*h")]


def test_euler_signature(p1, p2):
    assert euler_signature(p1) == (2, 0)
    assert euler_signature(p2) == (3, 1)
    assert euler_signature(p1_obstruction_twist(7))[0] == 7


def test_chern_numbers(p1, p2):
    assert chern_number(p1, [1]) == 2
    assert chern_number(p2, [0, 1]) == 3
    assert chern_number(p2, [2]) == 9
    with pytest.raises(PartitionDegreeMismatch):
        chern_number(p2, [1])


def test_rank_mismatch_rejected():
    M = ChowModel.of(1, h=1)
    with pytest.raises(ValidationError):
        VirtualSpace(M, Bundle.trivial(M, 3), None, IntegralFunctional.parse(M, {"h": 1}))


def test_non_integral_warning():
    M = ChowModel.of(1, h=1)
    X = VirtualSpace(M, Bundle.line(M.parse("h")), None, IntegralFunctional.parse(M, {"h": 1}))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        p = chi_minus_y(X)
    assert p == Y([F(1, 2), F(1, 2)])
    assert any(issubclass(w.category, NonIntegralWarning) for w in caught)


def test_slice_leading_parts_random():
    rng = random.Random(11)
    for _ in range(15):
        case = random_case(rng)
        X = case.X
        cls = chi_y_class(X)
        assert len(cls.slices) == X.d + 1
        for l, sl in enumerate(cls.slices):
            assert sl.degree_part(l) == (X.chern_classes[l - 1] if l else X.model.one())
            for k in sl.degrees():
                assert k >= l
