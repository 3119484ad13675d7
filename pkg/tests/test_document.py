import json

import pytest

from virtchar import document as D
from virtchar.errors import ParseError, ValidationError
from virtchar.genera import chi_vir
from virtchar.library import line_bundle, projective_space

BASE = {
    "model": {"generators": [{"name": "h", "degree": 1}], "virtual_dimension": 1},
    "integral": [{"monomial": "h", "value": "1"}],
    "obstruction_theory": {"E0": "T"},
    "bundles": {"T": {"rank": 1, "c1": "2*h"}},
}


def load(**changes):
    doc = json.loads(json.dumps(BASE))
    doc.update(changes)
    scope = D.parse_scope(doc)
    return D.parse_space(doc, scope), scope


def test_rationals():
    assert D.parse_rational("3/4", "x") == D.Fraction(3, 4)
    assert D.q(D.Fraction(-6, 4)) == "-3/2"
    with pytest.raises(ParseError):
        D.parse_rational("0.1.2", "x")
    with pytest.raises(ParseError):
        D.parse_rational(True, "x")


def test_json_error_position():
    with pytest.raises(ParseError) as info:
        D.loads('{"model": }')
    assert "line 1" in str(info.value.position)


def test_bad_expression_path():
    with pytest.raises(ParseError) as info:
        load(bundles={"T": {"rank": 1, "c1": "2*q"}})
    assert "bundles.T.c1" in str(info.value)


def test_unknown_bundle_name():
    X, scope = load()
    with pytest.raises(ValidationError):
        scope.kclass("nope", "tasks[0].V")


def test_rank_mismatch():
    with pytest.raises(ValidationError):
        load(bundles={"T": {"rank": 2, "c1": "2*h"}})


def test_kclass_operations():
    X, scope = load()
    V = scope.kclass({"tensor": ["T", {"dual": "T"}]}, "V")
    assert V.ch == X.model.parse("1")
    W = scope.kclass({"difference": ["T", 1]}, "W")
    assert W.rank == 0
    assert chi_vir(X, scope.kclass({"rank": 1, "c1": "3*h"}, "V")) == 4


def test_space_doc_round_trip():
    X = projective_space(2)
    V = line_bundle(X, 2)
    doc = json.loads(json.dumps(D.space_doc(X, V, X.model.parse("h"), [])))
    scope = D.parse_scope(doc)
    Y = D.parse_space(doc, scope)
    assert chi_vir(Y, scope.kclass("V", "V")) == chi_vir(X, V) == 6
    assert scope.cls("a", "a") == X.model.parse("h")


def test_point_defaults():
    doc = {"obstruction_theory": {"E0": {"rank": 2}, "E1": {"rank": 2}}}
    X = D.parse_space(doc, D.parse_scope(doc))
    assert X.d == 0 and X.integrate(X.model.one()) == 1
