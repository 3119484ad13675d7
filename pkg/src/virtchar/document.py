"""JSON input documents and exact serialization of results.

Rationals are written as strings ``"p/q"``; classes as polynomial strings in
the generator names.  Every error raised while loading carries the JSON path
of the offending entry.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .chow import ChowClass, ChowModel, Generator, IntegralFunctional, format_class, format_monomial
from .elliptic import EllResult
from .errors import ParseError, ValidationError, VirtcharError
from .genera import VirtualSpace
from .ktheory import Bundle, KClass, as_kclass
from .localization import EpsWindow, EquivariantBundle, FixedComponent
from .rings import EpsLaurent, UPoly

POINT_MODEL = {"generators": [], "virtual_dimension": 0}


# ---------------------------------------------------------------------------
# output helpers


def q(x) -> str:
    """``Fraction`` -> ``"p/q"`` (``"p"`` for integers)."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def poly_out(p: UPoly) -> list[str]:
    return [q(c) for c in p.coeffs] or ["0"]


def ell_out(r: EllResult) -> dict:
    return {
        "d": r.d,
        "q_order": r.order,
        "series": [[n, [[j, q(c)] for j, c in terms]] for n, terms in r.entries()],
    }


def eps_out(x: EpsLaurent, upto: int) -> list:
    """Known coefficients ``[[k, value], ...]`` up to ``eps^upto``."""
    hi = min(upto, x.prec - 1)
    out = []
    for k in range(min(x.valuation, 0), hi + 1):
        c = x.coefficient(k)
        if c:
            out.append([k, q(c) if isinstance(c, (int, Fraction)) else str(c)])
    return out


def parse_rational(value, path: str) -> Fraction:
    if isinstance(value, bool):
        raise ParseError(f"{path}: expected a rational, got {value!r}")
    try:
        return Fraction(str(value).strip()) if isinstance(value, str) else Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError):
        raise ParseError(f"{path}: {value!r} is not an exact rational") from None


# ---------------------------------------------------------------------------
# loading


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", f"line {exc.lineno} column {exc.colno}") from None
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    return doc


def _require(obj, key, path):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f"{path}: missing key {key!r}")
    return obj[key]


def _expr(model: ChowModel, text, path: str) -> ChowClass:
    try:
        return model.parse(text)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None
    except VirtcharError as exc:
        raise ParseError(f"{path}: {exc}") from None


def parse_model(spec, path="model") -> ChowModel:
    gens = _require(spec, "generators", path)
    d = _require(spec, "virtual_dimension", path)
    if isinstance(gens, dict):
        gens = [{"name": k, "degree": v} for k, v in gens.items()]
    if not isinstance(gens, list):
        raise ParseError(f"{path}.generators: expected a list")
    out = []
    for i, g in enumerate(gens):
        if isinstance(g, str):
            out.append(Generator(g, 1))
        else:
            out.append(Generator(str(_require(g, "name", f"{path}.generators[{i}]")), int(g.get("degree", 1))))
    if not isinstance(d, int) or isinstance(d, bool):
        raise ParseError(f"{path}.virtual_dimension: expected an integer")
    return ChowModel(tuple(out), d)


def parse_integral(model: ChowModel, spec, path="integral") -> IntegralFunctional:
    if isinstance(spec, dict):
        spec = [{"monomial": k, "value": v} for k, v in spec.items()]
    if not isinstance(spec, list):
        raise ParseError(f"{path}: expected a list of {{monomial, value}}")
    values = {}
    for i, entry in enumerate(spec):
        p = f"{path}[{i}]"
        text = _require(entry, "monomial", p)
        try:
            mono = model.parse_monomial(text)
        except VirtcharError as exc:
            raise ParseError(f"{p}.monomial: {exc}") from None
        if mono in values:
            raise ValidationError(f"{p}: monomial {text!r} given twice")
        values[mono] = parse_rational(_require(entry, "value", p), f"{p}.value")
    return IntegralFunctional(model, values)


def parse_bundle_dict(model: ChowModel, spec: dict, path: str) -> Bundle:
    rank = _require(spec, "rank", path)
    if not isinstance(rank, int) or isinstance(rank, bool):
        raise ParseError(f"{path}.rank: expected an integer")
    chern = []
    if "chern" in spec:
        chern = [_expr(model, c, f"{path}.chern[{i}]") for i, c in enumerate(spec["chern"])]
    else:
        keys = sorted((int(k[1:]), k) for k in spec if k.startswith("c") and k[1:].isdigit())
        top = keys[-1][0] if keys else 0
        chern = [model.zero()] * top
        for k, key in keys:
            chern[k - 1] = _expr(model, spec[key], f"{path}.{key}")
    unknown = set(spec) - {"rank", "chern"} - {k for k in spec if k.startswith("c") and k[1:].isdigit()}
    if unknown:
        raise ParseError(f"{path}: unknown keys {sorted(unknown)}")
    try:
        return Bundle(model, rank, tuple(chern))
    except VirtcharError as exc:
        raise ValidationError(f"{path}: {exc}") from None


@dataclass
class Scope:
    """Named bundles and classes over one model."""

    model: ChowModel
    bundles: dict = field(default_factory=dict)
    classes: dict = field(default_factory=dict)

    def kclass(self, spec, path: str) -> KClass:
        """A bundle name, an inline bundle, or ``{dual|sum|difference|tensor: ...}``."""
        if spec is None:
            return KClass.trivial(self.model, 1)
        if isinstance(spec, str):
            if spec not in self.bundles:
                raise ValidationError(f"{path}: unknown bundle {spec!r}")
            return as_kclass(self.bundles[spec])
        if isinstance(spec, int) and not isinstance(spec, bool):
            return KClass.trivial(self.model, spec)
        if isinstance(spec, dict):
            if "rank" in spec:
                return as_kclass(parse_bundle_dict(self.model, spec, path))
            if len(spec) == 1:
                (op, arg), = spec.items()
                if op == "dual":
                    return self.kclass(arg, f"{path}.dual").dual()
                if op in ("sum", "tensor") and isinstance(arg, list) and arg:
                    parts = [self.kclass(x, f"{path}.{op}[{i}]") for i, x in enumerate(arg)]
                    out = parts[0]
                    for p in parts[1:]:
                        out = out + p if op == "sum" else out * p
                    return out
                if op == "difference" and isinstance(arg, list) and len(arg) == 2:
                    return self.kclass(arg[0], f"{path}.difference[0]") - self.kclass(arg[1], f"{path}.difference[1]")
        raise ParseError(f"{path}: cannot interpret {spec!r} as a bundle")

    def bundle(self, spec, path: str):
        """Like :meth:`kclass` but keeps genuine bundles as :class:`Bundle`."""
        if spec is None:
            return Bundle.trivial(self.model, 0)
        if isinstance(spec, str) and spec in self.bundles:
            return self.bundles[spec]
        if isinstance(spec, dict) and "rank" in spec:
            return parse_bundle_dict(self.model, spec, path)
        return self.kclass(spec, path)

    def cls(self, spec, path: str) -> ChowClass:
        if isinstance(spec, str) and spec in self.classes:
            return self.classes[spec]
        return _expr(self.model, spec, path)


def parse_scope(doc: dict, path: str = "") -> Scope:
    pre = f"{path}." if path else ""
    model = parse_model(doc.get("model", POINT_MODEL), f"{pre}model")
    scope = Scope(model)
    for name, spec in (doc.get("bundles") or {}).items():
        scope.bundles[name] = parse_bundle_dict(model, spec, f"{pre}bundles.{name}")
    for name, spec in (doc.get("classes") or {}).items():
        scope.classes[name] = _expr(model, spec, f"{pre}classes.{name}")
    return scope


def parse_space(doc: dict, scope: Scope, path: str = "") -> VirtualSpace:
    pre = f"{path}." if path else ""
    ot = doc.get("obstruction_theory", {})
    if not isinstance(ot, dict):
        raise ParseError(f"{pre}obstruction_theory: expected an object")
    E0 = scope.bundle(ot.get("E0"), f"{pre}obstruction_theory.E0")
    E1 = scope.bundle(ot.get("E1"), f"{pre}obstruction_theory.E1")
    integral_spec = doc.get("integral")
    if integral_spec is None:
        if scope.model.d == 0:
            integral_spec = [{"monomial": "1", "value": 1}]
        else:
            raise ParseError(f"{pre}integral: missing")
    integral = parse_integral(scope.model, integral_spec, f"{pre}integral")
    try:
        return VirtualSpace(scope.model, E0, E1, integral)
    except ValidationError as exc:
        raise ValidationError(f"{pre or 'document'}: {exc}") from None


def parse_equivariant(scope: Scope, spec, path: str) -> EquivariantBundle:
    if spec is None:
        return EquivariantBundle()
    if not isinstance(spec, list):
        raise ParseError(f"{path}: expected a list of {{weight, bundle}}")
    blocks = []
    for i, entry in enumerate(spec):
        p = f"{path}[{i}]"
        w = _require(entry, "weight", p)
        if not isinstance(w, int) or isinstance(w, bool):
            raise ParseError(f"{p}.weight: expected an integer")
        blocks.append((w, scope.bundle(_require(entry, "bundle", p), f"{p}.bundle")))
    return EquivariantBundle(tuple(blocks))


def parse_component(spec: dict, path: str, v_lift=None) -> FixedComponent:
    scope = parse_scope(spec, path)
    X = parse_space(spec, scope, path)
    n_mov = spec.get("n_mov", {})
    pos = parse_equivariant(scope, n_mov.get("positive"), f"{path}.n_mov.positive")
    neg = parse_equivariant(scope, n_mov.get("negative"), f"{path}.n_mov.negative")
    lift_spec = spec.get("v_lift") if v_lift is None else v_lift
    lift = parse_equivariant(scope, lift_spec, f"{path}.v_lift") if lift_spec is not None else None
    return FixedComponent(X, pos, neg, lift)


def parse_window(spec, path="options.eps_window") -> EpsWindow | None:
    if spec is None:
        return None
    lo, hi = _require(spec, "lo", path), _require(spec, "hi", path)
    return EpsWindow(int(lo), int(hi))


# ---------------------------------------------------------------------------
# writing


def bundle_to_dict(b: Bundle) -> dict:
    out = {"rank": b.rank}
    for k, c in enumerate(b.chern, start=1):
        out[f"c{k}"] = format_class(c)
    return out


def model_to_dict(model: ChowModel) -> dict:
    return {"generators": [{"name": g.name, "degree": g.degree} for g in model.generators],
            "virtual_dimension": model.d}


def integral_to_list(f: IntegralFunctional) -> list:
    return [{"monomial": format_monomial(f.model, m) or "1", "value": q(v)}
            for m, v in sorted(f.values.items(), reverse=True)]


def space_doc(X: VirtualSpace, V: Bundle | None = None, a: ChowClass | None = None,
              tasks=(), options=None) -> dict:
    """A complete input document for ``X`` with ``V``/``a`` named ``"V"``/``"a"``."""
    bundles = {"E0": bundle_to_dict(X.E0), "E1": bundle_to_dict(X.E1)}
    if V is not None:
        bundles["V"] = bundle_to_dict(V)
    doc = {
        "model": model_to_dict(X.model),
        "integral": integral_to_list(X.integral),
        "obstruction_theory": {"E0": "E0", "E1": "E1"},
        "bundles": bundles,
        "classes": {"a": format_class(a)} if a is not None else {},
        "tasks": list(tasks),
    }
    if options:
        doc["options"] = dict(options)
    return doc
