"""Random virtual spaces for property testing."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .checks import random_bundle
from .chow import ChowClass, ChowModel, IntegralFunctional
from .genera import VirtualSpace
from .ktheory import Bundle


@dataclass(frozen=True, eq=False)
class RandomCase:
    X: VirtualSpace
    V: Bundle
    a: ChowClass


def random_model(rng: random.Random, d: int, max_gens: int = 3) -> ChowModel:
    if d == 0:
        return ChowModel((), 0)
    count = rng.randint(1, max_gens)
    # a degree-1 generator guarantees degree-d monomials exist
    return ChowModel.of(d, **{f"g{i}": 1 if i == 0 else rng.randint(1, min(d, 2)) for i in range(count)})


def random_functional(rng: random.Random, model: ChowModel) -> IntegralFunctional:
    monos = model.monomials(model.d)
    values = {m: rng.randint(-5, 5) for m in monos}
    if not any(values.values()):
        values[rng.choice(monos)] = rng.choice((-1, 1)) * rng.randint(1, 5)
    return IntegralFunctional(model, values)


def _with_c1(b: Bundle, c1: ChowClass) -> Bundle:
    chern = (c1,) + b.chern[1:] if b.chern else ((c1,) if b.rank and b.model.d else ())
    return Bundle(b.model, b.rank, chern)


def random_space(rng: random.Random, max_rank: int = 4, max_dim: int = 4, max_gens: int = 3,
                 calabi_yau: bool = False) -> VirtualSpace:
    """Ranks of ``E0``/``E1`` at most ``max_rank``; ``calabi_yau`` forces ``c_1(E0) = c_1(E1)``."""
    d = rng.randint(0, min(max_dim, max_rank))
    model = random_model(rng, d, max_gens)
    r0 = rng.randint(d, max_rank)
    E0 = random_bundle(rng, model, r0)
    E1 = random_bundle(rng, model, r0 - d)
    if calabi_yau and d:
        if E1.rank:
            E1 = _with_c1(E1, E0.c(1))
        else:
            E0 = _with_c1(E0, model.zero())
    return VirtualSpace(model, E0, E1, random_functional(rng, model))


def random_homogeneous(rng: random.Random, model: ChowModel, k: int) -> ChowClass:
    cls = model.zero()
    for mono in model.monomials(k):
        cls = cls + model.monomial_class(mono, Fraction(rng.randint(-3, 3)))
    return cls


def random_case(rng: random.Random, max_rank: int = 4, max_dim: int = 4, max_gens: int = 3,
                calabi_yau: bool = False) -> RandomCase:
    X = random_space(rng, max_rank, max_dim, max_gens, calabi_yau)
    V = random_bundle(rng, X.model, rng.randint(1, 3))
    a = random_homogeneous(rng, X.model, rng.randint(0, X.d))
    return RandomCase(X, V, a)
