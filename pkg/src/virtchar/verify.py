"""Randomized verification of the exact identities."""
from __future__ import annotations

import random

from .checks import (
    GENERA_CHECKS,
    SPACE_CHECKS,
    VARIANTS,
    kernel_suite,
    newton_suite,
)
from .document import space_doc
from .errors import VirtcharError
from .randgen import random_case

DEFAULT_CASES = 100
DEFAULT_SEED = 0


def _failure(exc: Exception) -> dict:
    return {"error": type(exc).__name__, "message": str(exc)}


def run_verify(seed: int = DEFAULT_SEED, cases: int = DEFAULT_CASES, max_rank: int = 4,
               max_dim: int = 4, q_order: int = 6, elliptic: bool = True,
               kernel: bool = True) -> dict:
    """Run every property suite on ``cases`` random instances.

    Each suite records pass/fail counts; the first failing space-level check
    is reported together with an input document whose single ``check`` task
    reproduces it under ``compute``.
    """
    if cases < 1:
        raise ValueError("cases must be at least 1")
    if max_rank < 0 or max_dim < 0:
        raise ValueError("bounds must be non-negative")
    rng = random.Random(seed)
    suites: dict[str, dict] = {}
    first = None

    def record(name, ok, exc=None, case=None, kwargs=None):
        nonlocal first
        entry = suites.setdefault(name, {"passed": 0, "failed": 0})
        entry["passed" if ok else "failed"] += 1
        if not ok and first is None:
            first = {"suite": name, **_failure(exc)}
            if case is not None:
                task = {"id": "counterexample", "type": "check", "property": name, **kwargs}
                first["input"] = space_doc(case.X, case.V, case.a, [task], {"q_order": q_order, "seed": seed})

    def run(name, case, **kwargs):
        fn = SPACE_CHECKS[name]
        V = case.V if "V" in kwargs else None
        a = case.a if "a" in kwargs else None
        try:
            fn(case.X, V, a, q_order)
        except (VirtcharError, AssertionError) as exc:
            record(name, False, exc, case, kwargs)
        else:
            record(name, True)

    for _ in range(cases):
        case = random_case(rng, max_rank, max_dim)
        for name in GENERA_CHECKS:
            run(name, case, V="V")
        if elliptic:
            run("q0_slice", case, V="V")
            run("routes", case)
            run("s_one", case, V="V", a="a")
            cy = random_case(rng, max_rank, max_dim, calabi_yau=True)
            run("shift", cy)
            run("shift", cy, V="V")

    if kernel:
        for variant in VARIANTS:
            name = f"kernel_{variant}"
            try:
                kernel_suite(rng, variant, cases)
            except (VirtcharError, AssertionError) as exc:
                record(name, False, exc)
            else:
                suites.setdefault(name, {"passed": 0, "failed": 0})["passed"] += cases
        try:
            newton_suite(rng, cases)
        except (VirtcharError, AssertionError) as exc:
            record("newton", False, exc)
        else:
            suites.setdefault("newton", {"passed": 0, "failed": 0})["passed"] += cases

    total_failed = sum(s["failed"] for s in suites.values())
    return {
        "seed": seed,
        "cases": cases,
        "bounds": {"max_rank": max_rank, "max_dim": max_dim, "q_order": q_order},
        "suites": suites,
        "passed": total_failed == 0,
        "first_counterexample": first,
    }
