"""Command line front end: ``virtchar compute <file>`` and ``virtchar verify``."""
from __future__ import annotations

import argparse
import json
import sys
import time
import warnings
from fractions import Fraction

from . import document as D
from .checks import SPACE_CHECKS
from .elliptic import DEFAULT_Q_ORDER, ell_vir, jacobi_shift_check
from .errors import NonIntegralWarning, ParseError, ValidationError, VirtcharError
from .genera import chern_number, chi_minus_y, chi_vir, euler_signature
from .localization import euler_additivity, localized_chi, localized_chi_y, localized_elliptic
from .verify import DEFAULT_CASES, DEFAULT_SEED, run_verify

EXIT_OK, EXIT_TASK_ERROR, EXIT_INPUT_ERROR = 0, 1, 2

TASK_TYPES = ("chi", "chi_y", "euler", "signature", "chern_number", "elliptic", "jacobi_check",
              "localized_chi", "localized_chi_y", "localized_elliptic", "euler_additivity", "check")


class Session:
    """Everything resolved from one input document."""

    def __init__(self, doc: dict, q_order=None, eps_lo=None, eps_hi=None):
        self.doc = doc
        options = doc.get("options") or {}
        self.q_order = int(q_order if q_order is not None else options.get("q_order", DEFAULT_Q_ORDER))
        if self.q_order < 0:
            raise ValidationError("q_order must be non-negative")
        self.window = D.parse_window(options.get("eps_window"))
        if eps_lo is not None or eps_hi is not None:
            if eps_lo is None or eps_hi is None:
                raise ValidationError("--eps-lo and --eps-hi must be given together")
            self.window = D.EpsWindow(eps_lo, eps_hi)
        self.scope = D.parse_scope(doc)
        self.space = D.parse_space(doc, self.scope) if "obstruction_theory" in doc or "integral" in doc else None
        self.component_specs = doc.get("fixed_components") or []
        if not isinstance(self.component_specs, list):
            raise ParseError("fixed_components: expected a list")
        self.components = [D.parse_component(c, f"fixed_components[{i}]")
                           for i, c in enumerate(self.component_specs)]
        tasks = doc.get("tasks")
        if not isinstance(tasks, list):
            raise ParseError("tasks: expected a list")
        for i, t in enumerate(tasks):
            kind = D._require(t, "type", f"tasks[{i}]")
            if kind not in TASK_TYPES:
                raise ValidationError(f"tasks[{i}].type: unknown task {kind!r}")
        self.tasks = tasks

    # -- helpers ---------------------------------------------------------

    def need_space(self):
        if self.space is None:
            raise ValidationError("task needs a global space (model, integral, obstruction_theory)")
        return self.space

    def components_for(self, task, path):
        comps = self.components
        lifts = task.get("v_lift")
        if lifts is not None:
            if not isinstance(lifts, list) or len(lifts) != len(self.component_specs):
                raise ValidationError(f"{path}.v_lift: need one lift per fixed component")
            comps = [D.parse_component(spec, f"fixed_components[{i}]", v_lift=lifts[i])
                     for i, spec in enumerate(self.component_specs)]
        if not comps:
            raise ValidationError("task needs fixed_components")
        return comps

    def V(self, task, path):
        return self.scope.kclass(task.get("V"), f"{path}.V") if "V" in task else None

    def a(self, task, path):
        return self.scope.cls(task["a"], f"{path}.a") if "a" in task else None

    def N(self, task):
        return int(task.get("q_order", self.q_order))

    # -- tasks -------------------------------------------------------------

    def run_task(self, task, path, warn):
        kind = task["type"]
        if kind == "chi":
            return D.q(chi_vir(self.need_space(), self.V(task, path)))
        if kind == "chi_y":
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always", NonIntegralWarning)
                p = chi_minus_y(self.need_space(), self.V(task, path))
            for w in caught:
                warn(str(w.message))
            return {"coefficients": D.poly_out(p), "polynomial": str(p)}
        if kind == "euler":
            return D.q(euler_signature(self.need_space())[0])
        if kind == "signature":
            return D.q(euler_signature(self.need_space())[1])
        if kind == "chern_number":
            part = D._require(task, "partition", path)
            return D.q(chern_number(self.need_space(), part))
        if kind == "elliptic":
            return D.ell_out(ell_vir(self.need_space(), self.V(task, path), self.a(task, path), self.N(task)))
        if kind == "jacobi_check":
            X = self.need_space()
            res = ell_vir(X, self.V(task, path), self.a(task, path), self.N(task))
            return jacobi_shift_check(res, X.d)
        if kind == "localized_chi":
            comps = self.components_for(task, path)
            r = localized_chi(comps, self.window)
            return {"value": D.q(r.value), "series": D.eps_out(r.series, 0)}
        if kind == "localized_chi_y":
            r = localized_chi_y(self.components_for(task, path), self.window)
            return {"coefficients": D.poly_out(r.value), "polynomial": str(r.value)}
        if kind == "localized_elliptic":
            comps = self.components_for(task, path)
            return D.ell_out(localized_elliptic(comps, self.N(task), self.window))
        if kind == "euler_additivity":
            return D.q(euler_additivity(self.components_for(task, path)))
        if kind == "check":
            prop = D._require(task, "property", path)
            if prop not in SPACE_CHECKS:
                raise ValidationError(f"{path}.property: unknown property {prop!r}")
            SPACE_CHECKS[prop](self.need_space(), self.V(task, path), self.a(task, path), self.N(task))
            return {"property": prop, "holds": True}
        raise ValidationError(f"{path}: unknown task {kind!r}")


def run_compute(doc: dict, q_order=None, eps_lo=None, eps_hi=None, timing: bool = False) -> tuple[dict, int]:
    """Execute all tasks; returns ``(output document, exit code)``.

    Parse and validation problems in the document itself raise; failures of
    individual tasks are reported in the output and give exit code 1.
    """
    session = Session(doc, q_order, eps_lo, eps_hi)
    results = []
    warnings_out = []
    code = EXIT_OK
    for i, task in enumerate(session.tasks):
        path = f"tasks[{i}]"
        tid = task.get("id", str(i))
        entry = {"id": tid, "type": task["type"]}

        def warn(msg, tid=tid):
            warnings_out.append({"task": tid, "message": msg})

        start = time.perf_counter()
        try:
            entry["value"] = session.run_task(task, path, warn)
            entry["status"] = "ok"
        except (VirtcharError, AssertionError, ValueError, TypeError) as exc:
            entry["status"] = "error"
            entry["error"] = {"kind": type(exc).__name__, "message": str(exc)}
            code = EXIT_TASK_ERROR
        if timing:
            entry["seconds"] = round(time.perf_counter() - start, 6)
        results.append(entry)
    return {"results": results, "warnings": warnings_out}, code


def _text(out: dict) -> str:
    lines = []
    for r in out["results"]:
        if r["status"] == "ok":
            lines.append(f"{r['id']} [{r['type']}]: {_text_value(r['value'])}")
        else:
            lines.append(f"{r['id']} [{r['type']}]: ERROR {r['error']['kind']}: {r['error']['message']}")
        if "seconds" in r:
            lines[-1] += f"  ({r['seconds']:.3f}s)"
    for w in out["warnings"]:
        lines.append(f"warning ({w['task']}): {w['message']}")
    return "\n".join(lines) + "\n"


def _text_value(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, dict) and "polynomial" in v:
        return v["polynomial"]
    if isinstance(v, dict) and "series" in v and "q_order" in v:
        parts = []
        for n, terms in v["series"]:
            if terms:
                body = " + ".join(f"{c}*s^{j}" for j, c in terms).replace("+ -", "- ")
                parts.append(f"({body})*q^{n}")
        return (" + ".join(parts) or "0") + f" + O(q^{v['q_order'] + 1})"
    if isinstance(v, dict) and "value" in v:
        return v["value"]
    return json.dumps(v, sort_keys=True)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, default=lambda x: D.q(x) if isinstance(x, Fraction) else str(x)) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="virtchar", description="Exact virtual characteristic numbers.")
    sub = parser.add_subparsers(dest="command", required=True)
    c = sub.add_parser("compute", help="run the tasks of an input document")
    c.add_argument("file", help="input document (JSON); '-' reads standard input")
    c.add_argument("--q-order", type=int, default=None)
    c.add_argument("--eps-lo", type=int, default=None)
    c.add_argument("--eps-hi", type=int, default=None)
    c.add_argument("--format", choices=("json", "text"), default="json")
    c.add_argument("--timing", action="store_true", help="add per-task wall time (output no longer byte-stable)")
    v = sub.add_parser("verify", help="run the randomized property suites")
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)
    v.add_argument("--cases", type=int, default=DEFAULT_CASES)
    v.add_argument("--max-rank", type=int, default=4)
    v.add_argument("--max-dim", type=int, default=4)
    v.add_argument("--q-order", type=int, default=DEFAULT_Q_ORDER)
    v.add_argument("--no-elliptic", action="store_true", help="skip the elliptic suites")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "compute":
        try:
            text = sys.stdin.read() if args.file == "-" else open(args.file, encoding="utf-8").read()
        except OSError as exc:
            print(f"error: cannot read {args.file}: {exc.strerror}", file=sys.stderr)
            return EXIT_INPUT_ERROR
        try:
            out, code = run_compute(D.loads(text), args.q_order, args.eps_lo, args.eps_hi, args.timing)
        except (ParseError, ValidationError) as exc:
            print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
            return EXIT_INPUT_ERROR
        except VirtcharError as exc:
            print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
            return EXIT_INPUT_ERROR
        sys.stdout.write(_dump(out) if args.format == "json" else _text(out))
        for r in out["results"]:
            if r["status"] == "error":
                print(f"task {r['id']} failed: {r['error']['kind']}: {r['error']['message']}", file=sys.stderr)
        return code
    if args.cases < 1:
        parser.error("--cases must be at least 1")
    report = run_verify(args.seed, args.cases, args.max_rank, args.max_dim, args.q_order,
                        elliptic=not args.no_elliptic)
    sys.stdout.write(_dump(report))
    return EXIT_OK if report["passed"] else EXIT_TASK_ERROR


if __name__ == "__main__":
    sys.exit(main())
