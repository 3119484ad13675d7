"""Cross-checks against an independent symbolic expansion."""
from fractions import Fraction as F

import pytest

from virtchar.elliptic import S, ecal_series, elliptic_root_series
from virtchar.ktheory import todd_series

sp = pytest.importorskip("sympy")
t, q, s = sp.symbols("t q s")

D, N = 3, 2


def _laurent(c):
    terms = {}
    for term in sp.Add.make_args(sp.expand(c)):
        if term == 0:
            continue
        cf, rest = term.as_coeff_Mul()
        e = sp.degree(rest, s) if rest.is_polynomial(s) else -sp.degree(1 / rest, s)
        terms[int(e)] = terms.get(int(e), 0) + F(int(cf.p), int(cf.q))
    return S.from_dict(terms)


def table(expr):
    """``{(k, n): coefficient of t^k q^n}`` as Laurent polynomials in s."""
    qser = sp.series(expr, q, 0, N + 1).removeO()
    out = {}
    for n in range(N + 1):
        tser = sp.expand(sp.series(sp.simplify(qser.coeff(q, n)), t, 0, D + 1).removeO())
        for k in range(D + 1):
            out[k, n] = _laurent(sp.simplify(tser.coeff(t, k)))
    return out


def theta(w):
    out = sp.sqrt(w) - 1 / sp.sqrt(w)
    for l in range(1, N + 1):
        out *= (1 - q ** l) * (1 - q ** l * w) * (1 - q ** l / w)
    return out


def test_todd():
    expected = sp.series(t / (1 - sp.exp(-t)), t, 0, 6).removeO()
    assert [F(str(expected.coeff(t, k))) for k in range(6)] == list(todd_series(5).coeffs)


def test_ecal_series_against_sympy():
    expr = 1
    for n in range(1, N + 1):
        expr *= ((1 - s ** 2 * q ** n * sp.exp(-t)) * (1 - s ** -2 * q ** n * sp.exp(t))
                 / ((1 - q ** n * sp.exp(t)) * (1 - q ** n * sp.exp(-t))))
    ours = ecal_series(N, D)
    for (k, n), c in table(expr).items():
        assert ours[k].coefficient(n) == c, (k, n)


def test_root_series_against_sympy():
    w = sp.exp(t)
    expr = t * theta(w * s ** -2).subs(sp.sqrt(w * s ** -2), sp.exp(t / 2) / s) / theta(w).subs(
        sp.sqrt(w), sp.exp(t / 2))
    ours = elliptic_root_series(N, D)
    for (k, n), c in table(expr).items():
        assert ours[k].coefficient(n) == c, (k, n)
