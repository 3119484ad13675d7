"""Free graded polynomial rings truncated above the virtual dimension.

A :class:`ChowModel` declares generators (name and degree) and a cutoff
``d``; a :class:`ChowClass` is an element of the free commutative ring on
the generators modulo everything of total degree ``> d``, with coefficients
in one of the rings from :mod:`virtchar.rings`.  No relations are ever
imposed; the geometry lives in the :class:`IntegralFunctional`.
"""
from __future__ import annotations

import ast
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import (
    CoeffVariantMismatch,
    DegreeOverflow,
    ModelMismatch,
    NonNilpotentConstant,
    NonUnitConstant,
    ParseError,
    PoleAtZero,
    ValidationError,
)
from .rings import QQ, EpsLaurent, PolyRing, inverse, ring_of

Y = PolyRing("y")


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int = 1


@dataclass(frozen=True)
class ChowModel:
    generators: tuple[Generator, ...]
    d: int
    _degree_cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        if self.d < 0:
            raise ValidationError("truncation degree d must be non-negative")
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise ValidationError(f"duplicate generator names in {names}")
        for g in self.generators:
            if not g.name.isidentifier():
                raise ValidationError(f"generator name {g.name!r} is not an identifier")
            if g.degree < 1 or g.degree > max(self.d, 0):
                raise ValidationError(
                    f"generator {g.name} has degree {g.degree}, must lie in 1..{self.d}")

    @classmethod
    def of(cls, d: int, **gens: int) -> "ChowModel":
        """``ChowModel.of(2, h=1)`` -- convenience constructor."""
        return cls(tuple(Generator(n, k) for n, k in gens.items()), d)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    def degree(self, mono: tuple[int, ...]) -> int:
        cache = self._degree_cache
        deg = cache.get(mono)
        if deg is None:
            deg = sum(e * g.degree for e, g in zip(mono, self.generators))
            cache[mono] = deg
        return deg

    @property
    def unit_monomial(self) -> tuple[int, ...]:
        return (0,) * len(self.generators)

    def monomials(self, degree: int) -> list[tuple[int, ...]]:
        """All monomials of exactly the given weighted degree."""
        out = []

        def rec(i, left, acc):
            if i == len(self.generators):
                if left == 0:
                    out.append(tuple(acc))
                return
            w = self.generators[i].degree
            for e in range(left // w + 1):
                rec(i + 1, left - e * w, acc + [e])

        rec(0, degree, [])
        return out

    def zero(self, ring=QQ) -> "ChowClass":
        return ChowClass(self, {}, ring)

    def one(self, ring=QQ) -> "ChowClass":
        return ChowClass(self, {self.unit_monomial: ring.one()}, ring)

    def constant(self, c, ring=None) -> "ChowClass":
        ring = ring or ring_of(c)
        return ChowClass(self, {self.unit_monomial: ring.coerce(c)}, ring)

    def gen(self, name: str) -> "ChowClass":
        try:
            i = self.names.index(name)
        except ValueError:
            raise ValidationError(f"unknown generator {name!r}") from None
        mono = tuple(1 if j == i else 0 for j in range(len(self.generators)))
        return ChowClass(self, {mono: Fraction(1)})

    def monomial_class(self, mono, coeff=1) -> "ChowClass":
        return ChowClass(self, {tuple(mono): Fraction(coeff)})

    def parse(self, text) -> "ChowClass":
        """Parse a polynomial expression such as ``"3*h^2 - 1/2*h*k + 2"``."""
        if isinstance(text, (int, Fraction)):
            return self.constant(Fraction(text))
        return _ExprParser(self, str(text)).parse()

    def parse_monomial(self, text) -> tuple[int, ...]:
        cls = self.parse(text)
        if len(cls.terms) != 1:
            raise ParseError(f"{text!r} is not a single monomial")
        (mono, c), = cls.terms.items()
        if c != 1:
            raise ParseError(f"{text!r} carries a coefficient; monomials must be bare")
        return mono


def _combined_ring(r1, r2):
    if r1 == r2:
        return r1
    if r1 == QQ:
        return r2
    if r2 == QQ:
        return r1
    raise CoeffVariantMismatch(f"coefficient rings {r1!r} and {r2!r} differ")


class ChowClass:
    """Element of a truncated free graded ring; treat as immutable."""

    __slots__ = ("model", "terms", "ring")

    def __init__(self, model: ChowModel, terms: Mapping, ring=QQ):
        self.model = model
        self.ring = ring
        d = model.d
        clean = {}
        for mono, c in terms.items():
            if c and model.degree(mono) <= d:
                clean[mono] = c
        self.terms = clean

    # -- structure ----------------------------------------------------------

    def _check_model(self, other):
        if other.model != self.model:
            raise ModelMismatch("classes live on different Chow models")

    def coerce_ring(self, ring) -> "ChowClass":
        if ring == self.ring:
            return self
        if self.ring != QQ:
            raise CoeffVariantMismatch(f"cannot move {self.ring!r} coefficients into {ring!r}")
        return ChowClass(self.model, {m: ring.coerce(c) for m, c in self.terms.items()}, ring)

    def map_coeffs(self, fn, ring) -> "ChowClass":
        return ChowClass(self.model, {m: fn(c) for m, c in self.terms.items()}, ring)

    def constant_term(self):
        return self.terms.get(self.model.unit_monomial, self.ring.zero())

    def coefficient(self, mono):
        return self.terms.get(tuple(mono), self.ring.zero())

    def degree_part(self, k: int) -> "ChowClass":
        deg = self.model.degree
        return ChowClass(self.model, {m: c for m, c in self.terms.items() if deg(m) == k}, self.ring)

    def degrees(self) -> set[int]:
        return {self.model.degree(m) for m in self.terms}

    def is_homogeneous(self, k: int) -> bool:
        return self.degrees() <= {k}

    # -- arithmetic -----------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.model.constant(other)
        if not isinstance(other, ChowClass):
            try:
                other = self.model.constant(other)
            except Exception:
                return NotImplemented
        if other.model != self.model:
            return False
        keys = set(self.terms) | set(other.terms)
        zero_a, zero_b = self.ring.zero(), other.ring.zero()
        return all(self.terms.get(m, zero_a) == other.terms.get(m, zero_b) for m in keys)

    __hash__ = None

    def _lift(self, other):
        if isinstance(other, ChowClass):
            self._check_model(other)
            return other
        return self.model.constant(other)

    def __add__(self, other):
        other = self._lift(other)
        ring = _combined_ring(self.ring, other.ring)
        a = self.coerce_ring(ring)
        b = other.coerce_ring(ring)
        out = dict(a.terms)
        for m, c in b.terms.items():
            if m in out:
                out[m] = out[m] + c
            else:
                out[m] = c
        return ChowClass(self.model, out, ring)

    __radd__ = __add__

    def __neg__(self):
        return ChowClass(self.model, {m: -c for m, c in self.terms.items()}, self.ring)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def scale(self, c) -> "ChowClass":
        """Multiply every coefficient by the scalar ``c``."""
        if isinstance(c, (int, Fraction)):
            return ChowClass(self.model, {m: v * c for m, v in self.terms.items()}, self.ring)
        ring = _combined_ring(self.ring, c.ring)
        c = ring.coerce(c)
        return ChowClass(self.model, {m: c * v for m, v in self.terms.items()}, ring)

    def __mul__(self, other):
        if not isinstance(other, ChowClass):
            return self.scale(other)
        return mul_truncated(self, other)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, c):
        return self.scale(inverse(c))

    def __pow__(self, n: int):
        if n < 0:
            return invert_unit(self) ** (-n)
        result = self.model.one(self.ring)
        for _ in range(n):
            result = result * self
        return result

    # -- printing -------------------------------------------------------------

    def sorted_terms(self):
        """Terms in graded lexicographic order on generator names."""
        order = sorted(range(len(self.model.generators)), key=lambda i: self.model.generators[i].name)

        def key(item):
            mono = item[0]
            return (self.model.degree(mono), tuple(-mono[i] for i in order))

        return sorted(self.terms.items(), key=key)

    def __repr__(self):
        return format_class(self)


def format_monomial(model: ChowModel, mono) -> str:
    parts = []
    for (g, e) in sorted(zip(model.generators, mono), key=lambda ge: ge[0].name):
        if e == 1:
            parts.append(g.name)
        elif e > 1:
            parts.append(f"{g.name}^{e}")
    return "*".join(parts)


def format_class(a: ChowClass) -> str:
    """Canonical text: ``coeff*gen1^e1*gen2^e2`` terms, rationals as p/q."""
    if not a.terms:
        return "0"
    out = []
    for mono, c in a.sorted_terms():
        mon = format_monomial(a.model, mono)
        if isinstance(c, Fraction):
            neg = c < 0
            mag = -c if neg else c
            if not mon:
                body = str(mag)
            elif mag == 1:
                body = mon
            else:
                body = f"{mag}*{mon}"
        else:
            neg = False
            body = f"({c})" + (f"*{mon}" if mon else "")
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


# ---------------------------------------------------------------------------
# ring operations


def mul_truncated(a: ChowClass, b: ChowClass) -> ChowClass:
    """Product in the truncated ring; degree ``> d`` terms are dropped."""
    a._check_model(b)
    ring = _combined_ring(a.ring, b.ring)
    if a.ring != b.ring:
        a, b = a.coerce_ring(ring), b.coerce_ring(ring)
    model = a.model
    d = model.d
    deg = model.degree
    out: dict = {}
    bt = [(m, deg(m), c) for m, c in b.terms.items()]
    for m1, c1 in a.terms.items():
        d1 = deg(m1)
        for m2, d2, c2 in bt:
            if d1 + d2 > d:
                continue
            m = tuple(x + y for x, y in zip(m1, m2))
            p = c1 * c2
            if m in out:
                out[m] = out[m] + p
            else:
                out[m] = p
    return ChowClass(model, out, ring)


def exp_positive(a: ChowClass) -> ChowClass:
    """Truncated exponential of a class with vanishing constant term."""
    if a.constant_term():
        raise NonNilpotentConstant("exp_positive needs a class with zero constant term")
    d = a.model.d
    one = a.model.one(a.ring)
    result = one
    # Horner: 1 + a(1 + a/2(1 + a/3(...)))
    for j in range(d, 0, -1):
        result = one + (a * result) / j
    return result


def log_unit(a: ChowClass) -> ChowClass:
    """Truncated logarithm of a class with constant term 1."""
    if a.constant_term() != a.ring.one():
        raise NonUnitConstant("log_unit needs a class with constant term 1")
    n = a - a.model.one(a.ring)
    result = a.model.zero(a.ring)
    power = a.model.one(a.ring)
    for j in range(1, a.model.d + 1):
        power = power * n
        result = result + power * Fraction((-1) ** (j + 1), j)
    return result


def invert_unit(a):
    """Inverse of a ChowClass with invertible constant term, or of a coefficient."""
    if not isinstance(a, ChowClass):
        return inverse(a)
    c0 = a.constant_term()
    try:
        inv0 = inverse(c0)
    except Exception as exc:
        raise NonUnitConstant(f"constant term {c0} is not invertible") from exc
    one = a.model.one(a.ring)
    n = (a - a.model.constant(c0)) * inv0  # nilpotent part, normalised
    result = one
    for _ in range(a.model.d):
        result = one - n * result
    return result * inv0


@dataclass(frozen=True)
class IntegralFunctional:
    """Rational values on degree-``d`` monomials; anything else integrates to 0."""

    model: ChowModel
    values: Mapping

    def __post_init__(self):
        clean = {}
        for mono, v in dict(self.values).items():
            mono = tuple(mono)
            if len(mono) != len(self.model.generators):
                raise ValidationError(f"monomial {mono} has wrong arity")
            if self.model.degree(mono) != self.model.d:
                raise ValidationError(
                    f"functional value given on {format_monomial(self.model, mono) or '1'}, "
                    f"which does not have degree {self.model.d}")
            v = Fraction(v)
            if v:
                clean[mono] = v
        object.__setattr__(self, "values", clean)

    @classmethod
    def parse(cls, model: ChowModel, entries) -> "IntegralFunctional":
        return cls(model, {model.parse_monomial(k): Fraction(v) for k, v in entries.items()})

    def __hash__(self):
        return hash((self.model, tuple(sorted(self.values.items()))))

    def __call__(self, a: ChowClass):
        return integrate(self, a)


def integrate(f: IntegralFunctional, a: ChowClass):
    """Apply the functional to the degree-``d`` part of ``a``."""
    if a.model != f.model:
        raise ModelMismatch("class and functional live on different models")
    total = a.ring.zero()
    for mono, v in f.values.items():
        c = a.terms.get(mono)
        if c is not None:
            total = total + c * v
    return total


def eval_upoly_at(a: ChowClass):
    """Split a class with polynomial-in-``u`` coefficients into slices.

    Returns ``(slices, assembled)``: ``slices[l]`` is the rational class
    multiplying ``u^l`` and ``assembled = sum_l (1-y)^(d-l) slices[l]``,
    i.e. ``(1-y)^d`` times the class evaluated at ``u = 1/(1-y)``.
    """
    d = a.model.d
    if not isinstance(a.ring, PolyRing):
        raise CoeffVariantMismatch("eval_upoly_at needs polynomial coefficients")
    slices = [dict() for _ in range(d + 1)]
    for mono, c in a.terms.items():
        if c.degree > d:
            raise DegreeOverflow(
                f"u-degree {c.degree} exceeds d={d} at {format_monomial(a.model, mono) or '1'}")
        for l, v in enumerate(c.coeffs):
            if v:
                slices[l][mono] = v
    slice_classes = [ChowClass(a.model, s) for s in slices]
    one_minus_y = Y([1, -1])
    assembled = a.model.zero(Y)
    for l, s in enumerate(slice_classes):
        assembled = assembled + s.scale(one_minus_y ** (d - l))
    return slice_classes, assembled


def eps_value_at_zero(x) -> Fraction:
    """Constant coefficient of an eps-Laurent series without poles."""
    if not isinstance(x, EpsLaurent):
        return x
    negative = sorted(k for k in x.terms() if k < 0)
    if negative:
        raise PoleAtZero(negative[0])
    if x.prec <= 0:
        from .errors import WindowTooNarrow

        raise WindowTooNarrow(f"eps^0 coefficient unknown (precision O(eps^{x.prec}))")
    return x.coefficient(0)


# ---------------------------------------------------------------------------
# expression parsing


class _ExprParser:
    def __init__(self, model: ChowModel, text: str):
        self.model = model
        self.text = text

    def parse(self) -> ChowClass:
        src = self.text.replace("^", "**")
        try:
            tree = ast.parse(src.strip() or "0", mode="eval")
        except SyntaxError as exc:
            raise ParseError(f"cannot parse expression {self.text!r}: {exc.msg}", exc.offset) from None
        return self._eval(tree.body)

    def _err(self, node, msg):
        raise ParseError(f"{msg} in {self.text!r}", getattr(node, "col_offset", None))

    def _eval(self, node):
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, int):
                self._err(node, f"unsupported literal {node.value!r}")
            return self.model.constant(Fraction(node.value))
        if isinstance(node, ast.Name):
            if node.id not in self.model.names:
                self._err(node, f"unknown generator {node.id!r}")
            return self.model.gen(node.id)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = self._eval(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            left = self._eval(node.left)
            if isinstance(node.op, ast.Pow):
                exp = self._eval(node.right)
                if exp.degrees() - {0} or len(exp.terms) > 1:
                    self._err(node, "exponent must be a non-negative integer")
                e = exp.constant_term()
                if e.denominator != 1 or e < 0:
                    self._err(node, "exponent must be a non-negative integer")
                return left ** int(e)
            right = self._eval(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if right.degrees() - {0} or not right.constant_term():
                    self._err(node, "can only divide by a nonzero rational constant")
                return left / right.constant_term()
        self._err(node, "unsupported syntax")


def parse_class(model: ChowModel, text) -> ChowClass:
    return model.parse(text)


def homogeneous_components(a: ChowClass) -> list[ChowClass]:
    return [a.degree_part(k) for k in range(a.model.d + 1)]


def from_terms(model: ChowModel, terms: Iterable[tuple[tuple[int, ...], object]], ring=QQ) -> ChowClass:
    return ChowClass(model, dict(terms), ring)
