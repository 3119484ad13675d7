"""Exit criteria.  Each test prints one ``ACCEPTANCE <n> PASS|FAIL`` line.

Run on its own with ``pytest tests/test_acceptance.py -v -s`` or
``python3 tests/test_acceptance.py``.
"""
import random
import sys

import pytest

from virtchar.checks import GENERA_CHECKS, SPACE_CHECKS, VARIANTS, kernel_suite, newton_suite
from virtchar.elliptic import ell_vir
from virtchar.genera import chi_minus_y, chi_vir, euler_signature
from virtchar.library import (
    binomial_chi,
    line_bundle,
    p1_obstruction_twist,
    p1_twist_fixed_points,
    p2_line_and_point,
    projective_fixed_points,
    projective_space,
)
from virtchar.localization import euler_additivity, localized_chi, localized_chi_y, localized_elliptic
from virtchar.randgen import random_case
from virtchar.rings import PolyRing

Y = PolyRing("y")
CORPUS_SEED = 2024
CORPUS_SIZE = 200
ELLIPTIC_CASES = 25
KERNEL_COUNT = 500


def report(n, title, body):
    """Run ``body``; print the verdict line whatever happens."""
    try:
        detail = body()
    except BaseException as exc:
        print(f"\nACCEPTANCE {n} FAIL: {title}: {type(exc).__name__}: {exc}", file=sys.__stdout__)
        raise
    print(f"\nACCEPTANCE {n} PASS: {title}" + (f" ({detail})" if detail else ""), file=sys.__stdout__)


def corpus():
    rng = random.Random(CORPUS_SEED)
    return [random_case(rng, max_rank=4, max_dim=4) for _ in range(CORPUS_SIZE)]


@pytest.fixture(scope="module")
def cases():
    return corpus()


def test_criterion_1_hrr():
    def body():
        count = 0
        for n in (1, 2, 3):
            X = projective_space(n)
            for k in range(-5, 6):
                assert chi_vir(X, line_bundle(X, k)) == binomial_chi(n, k), (n, k)
                count += 1
        return f"{count} values"
    report(1, "HRR on P^n, n=1..3, k in [-5,5]", body)


def test_criterion_2_spot_values():
    def body():
        p1, p2 = projective_space(1), projective_space(2)
        assert chi_minus_y(p1) == Y([1, 1])
        assert chi_minus_y(p2) == Y([1, 1, 1])
        assert euler_signature(p1) == (2, 0)
        assert euler_signature(p2) == (3, 1)
    report(2, "chi_-y, e and sigma of P^1 and P^2", body)


def test_criterion_3_chi_y_class(cases):
    def body():
        for i, c in enumerate(cases):
            for name in ("polynomiality", "leading_parts", "oracle"):
                SPACE_CHECKS[name](c.X, c.V)
        dims = sorted({c.X.d for c in cases})
        return f"{len(cases)} random spaces, d in {dims}"
    report(3, "u-class algorithm: degree, leading parts, y-series oracle", body)


def test_criterion_4_global_identities(cases):
    def body():
        names = [n for n in GENERA_CHECKS if n not in ("polynomiality", "leading_parts", "oracle")]
        for c in cases:
            for name in names:
                SPACE_CHECKS[name](c.X, c.V)
        return f"{len(cases)} spaces x {', '.join(names)}"
    report(4, "symmetry, Serre duality, y=0, Hopf index, odd signature", body)


def test_criterion_5_elliptic():
    def body():
        rng = random.Random(CORPUS_SEED + 5)
        N = 6
        for _ in range(ELLIPTIC_CASES):
            c = random_case(rng, 4, 4)
            SPACE_CHECKS["q0_slice"](c.X, c.V, None, N)
            SPACE_CHECKS["routes"](c.X, None, None, N)
            SPACE_CHECKS["s_one"](c.X, c.V, c.a, N)
            SPACE_CHECKS["s_one"](c.X, None, None, N)
            cy = random_case(rng, 4, 4, calabi_yau=True)
            SPACE_CHECKS["shift"](cy.X, None, cy.a, N)
            SPACE_CHECKS["shift"](cy.X, cy.V, None, N)
        return f"{ELLIPTIC_CASES} random + {ELLIPTIC_CASES} trivial-canonical spaces, q-order {N}"
    report(5, "elliptic genus: q^0 slice, routes, clearing, s=1, shift identities", body)


def test_criterion_6_localization():
    def body():
        for k in range(-5, 6):
            res = localized_chi(projective_fixed_points(1, k=k))
            assert res.value == k + 1
            assert min(res.series.terms(), default=0) >= 0
        for w0, winf in ((3, -2), (1, 4), (2, 1)):
            value = localized_chi(p1_twist_fixed_points(w0, winf)).value
            assert value == w0 - winf == chi_vir(p1_obstruction_twist(w0 - winf))
        assert localized_chi_y(projective_fixed_points(1)).value == Y([1, 1])
        assert euler_additivity(projective_fixed_points(1)) == 2
        assert localized_elliptic(projective_fixed_points(1), 5) == ell_vir(projective_space(1), N=5)
        assert localized_elliptic(p2_line_and_point(), 3) == ell_vir(projective_space(2), N=3)
    report(6, "localization on the curated library", body)


def test_criterion_7_kernel():
    def body():
        rng = random.Random(CORPUS_SEED + 7)
        for variant in VARIANTS:
            kernel_suite(rng, variant, KERNEL_COUNT)
        newton_suite(rng, KERNEL_COUNT)
        return f"{KERNEL_COUNT} per variant: {', '.join(VARIANTS)}; Newton {KERNEL_COUNT}"
    report(7, "kernel ring axioms, inversion, exp/log, Newton", body)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-s"]))
