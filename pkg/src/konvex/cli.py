"""Command-line harness: calculus operations, certifiers and theorem suites.

Every run resolves its arguments into a :class:`JobSpec`, executes it and
writes a JSON report ``{format, job, result, meta}``.  ``job`` and
``result`` form the report body; ``meta`` holds the creation time and the
SHA-256 of the canonical body, so equal jobs give byte-identical bodies.

Exit codes: 0 on CERTIFIED or agreement, 1 on REFUTED or disagreement with
the fixture's declared truth, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import Optional

import numpy as np

from . import gallery
from .calculus import (ProxAverageParams, conjugate_pl, envelope_table, prox_pl_array, proximal_average,
                       tilt_map)
from .certify import (certify_almost_strict_convexity, certify_strict_convexity_pl,
                      certify_strict_convexity_sampled, envelope_blackbox, flat_direction_probes,
                      second_order_test_1d, second_order_test_nd, subgradient_strict_inequality_check,
                      theorem_almost_suite, envelope_suite, unique_minimizer_check)
from .core import (DEFAULT_TOL, PLConvex1D, Status, Tolerance, dumps, make_rng, midpoint_convexity_check,
                   parse_region, pl_from_dict, pl_to_dict, to_jsonable)
from .errors import KonvexError, MalformedReport, UsageError
from .monotone import check_paramonotone, check_strictly_monotone, para_equivalence_suite

REPORT_FORMAT = "konvex-report/1"
SUMMARY_VERSION = "konvex-summary/1"
SUMMARY_COLUMNS = ["fixture", "suite", "agreement", "coherent", "min_margin", "samples", "flag"]

COMMANDS = ("conjugate", "prox", "envelope", "prox-average", "tilt", "check", "suite", "gallery", "report")
CHECKS = {
    # property -> truth label compared against (None: verdict alone decides the exit code)
    "strict-convex": "strictly_convex",
    "almost-strict-convex": "almost_strictly_convex",
    "midpoint-convex": "convex",
    "subgradient-strict": None,
    "second-order": None,
    "unique-minimizer": None,
    "strictly-monotone": "strictly_monotone",
    "paramonotone": "paramonotone",
}
SUITES = ("t-almost", "t-envel", "t-para")
CSV_COMMANDS = ("prox", "envelope", "report")


@dataclass
class JobSpec:
    """Resolved description of one CLI run (embedded in its report)."""

    command: str
    action: Optional[str] = None
    fixtures: list = field(default_factory=list)
    inline: list = field(default_factory=list)
    params: dict = field(default_factory=dict)
    seed: int = 0
    tol: dict = field(default_factory=dict)
    output: dict = field(default_factory=lambda: {"path": None, "format": "json"})
    inputs: list = field(default_factory=list)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"command: unknown command {self.command!r}; expected one of {', '.join(COMMANDS)}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or self.seed < 0:
            raise UsageError(f"seed: must be a nonnegative integer, got {self.seed!r}")
        fmt = self.output.get("format", "json")
        if fmt not in ("json", "csv"):
            raise UsageError(f"format: must be json or csv, got {fmt!r}")
        if fmt == "csv" and self.command not in CSV_COMMANDS:
            raise UsageError(f"format: csv output is only available for {', '.join(CSV_COMMANDS)}")
        if self.command == "check" and self.action not in CHECKS:
            raise UsageError(f"property: unknown property {self.action!r}; expected one of {', '.join(CHECKS)}")
        if self.command == "suite" and self.action not in SUITES:
            raise UsageError(f"suite: unknown suite {self.action!r}; expected one of {', '.join(SUITES)}")
        for key in self.tol:
            if key not in ("eq_abs", "eq_rel", "strict_margin", "fd_step"):
                raise UsageError(f"tol: unknown tolerance field {key!r}")

    def to_dict(self) -> dict:
        return to_jsonable(asdict(self))

    @classmethod
    def from_dict(cls, d: dict) -> "JobSpec":
        if not isinstance(d, dict) or "command" not in d:
            raise UsageError("job: a job description needs a 'command' field")
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise UsageError(f"job: unknown field(s) {', '.join(sorted(unknown))}")
        return cls(**d)

    def tolerance(self) -> Tolerance:
        try:
            return Tolerance(**{**asdict(DEFAULT_TOL), **self.tol})
        except (TypeError, ValueError) as exc:
            raise UsageError(f"tol: {exc}") from exc


# -- argument parsing -------------------------------------------------------------


def parse_grid(text: str) -> np.ndarray:
    """``"a..b:n"`` (``n`` equally spaced points) or a comma-separated list."""
    try:
        if ".." in text:
            span, _, n = text.partition(":")
            a, b = (float(t) for t in span.split(".."))
            n = int(n) if n else 101
            if n < 2 or not a < b:
                raise ValueError
            return np.linspace(a, b, n)
        return np.array([float(t) for t in text.split(",")])
    except ValueError:
        raise UsageError(f"grid: cannot parse {text!r}; use 'a..b:n' or 'x1,x2,...'") from None


def _common_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--fixture", action="append", default=[], metavar="NAME",
                   help="gallery fixture name (repeat for prox-average; 'all' for suites)")
    p.add_argument("--inline", action="append", default=[], metavar="JSON",
                   help="inline piecewise-linear function as JSON {breakpoints, values, left_tail, right_tail}")
    p.add_argument("--lambda", dest="lam", type=float, help="envelope / prox parameter (> 0)")
    p.add_argument("--alpha", type=float, help="proximal-average weight in (0, 1)")
    p.add_argument("--region", help="sampling box 'a..b,c..d' (overrides the fixture region)")
    p.add_argument("--grid", help="evaluation grid 'a..b:n' or 'x1,x2,...' (write --grid=-2..2:41 "
                                  "when it starts with a minus sign)")
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    p.add_argument("--tol-abs", type=float, help="absolute equality tolerance eq_abs")
    p.add_argument("--tol-strict", type=float, help="strict_margin for strict inequalities")
    p.add_argument("--out", help="write the report here (atomically) instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), help="output format (default json; csv for report)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog="konvex",
        description="Exact 1-D convex calculus, sampled convexity certifiers and theorem suites.",
        epilog="Environment: KONVEX_THREADS caps worker threads (recorded in reports; runs are "
               "single-threaded). Exit codes: 0 certified/agreement, 1 refuted/disagreement, 2 usage error.")
    parser.add_argument("--job", metavar="FILE", help="run a JSON job description instead of a subcommand")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.add_parser("conjugate", parents=[common], help="exact conjugate of a PL function")
    sub.add_parser("prox", parents=[common], help="proximal mapping on a grid")
    sub.add_parser("envelope", parents=[common], help="table x, f, envelope, prox on a grid")
    sub.add_parser("prox-average", parents=[common], help="proximal average of two PL functions")
    sub.add_parser("tilt", parents=[common], help="argmin of f - <x*, .> for tilts x* on a grid")
    c = sub.add_parser("check", parents=[common], help="run one certifier")
    c.add_argument("property", choices=list(CHECKS))
    s = sub.add_parser("suite", parents=[common], help="run a theorem suite")
    s.add_argument("suite", choices=list(SUITES))
    sub.add_parser("gallery", parents=[common], help="print the fixture index")
    r = sub.add_parser("report", parents=[common], help="aggregate suite reports into a CSV summary")
    r.add_argument("reports", nargs="*", help="report files")
    return parser


def job_from_args(ns: argparse.Namespace) -> JobSpec:
    inline = []
    for text in ns.inline:
        try:
            inline.append(json.loads(text))
        except json.JSONDecodeError as exc:
            raise UsageError(f"inline: not valid JSON ({exc.msg})") from None
    params = {k: v for k, v in (("lambda", ns.lam), ("alpha", ns.alpha), ("region", ns.region),
                                ("grid", ns.grid)) if v is not None}
    tol = {k: v for k, v in (("eq_abs", ns.tol_abs), ("strict_margin", ns.tol_strict)) if v is not None}
    action = getattr(ns, "property", None) or getattr(ns, "suite", None)
    return JobSpec(ns.command, action, list(ns.fixture), inline, params, ns.seed, tol,
                   {"path": ns.out, "format": ns.format or ("csv" if ns.command == "report" else "json")},
                   list(getattr(ns, "reports", []) or []))


# -- targets ---------------------------------------------------------------------------


def _targets(job: JobSpec, count: Optional[int] = None) -> list:
    """Fixtures named by the job plus inline PL functions (wrapped as fixtures)."""
    out = []
    for name in job.fixtures:
        try:
            out.append(gallery.get_fixture(name))
        except (KeyError, KonvexError, ValueError) as exc:
            raise UsageError(f"fixture: {exc.args[0] if exc.args else exc}") from None
    for k, d in enumerate(job.inline):
        try:
            f = pl_from_dict(d)
        except (ValueError, TypeError) as exc:
            raise UsageError(f"inline: {exc}") from None
        out.append(gallery.Fixture(f"inline{k}" if len(job.inline) > 1 else "inline", "pl", f, {}, "inline"))
    if not out:
        raise UsageError("fixture: give --fixture NAME or --inline JSON")
    if count is not None and len(out) != count:
        raise UsageError(f"fixture: {job.command} needs exactly {count} function(s), got {len(out)}")
    return out


def _pl(fx) -> PLConvex1D:
    if fx.kind != "pl":
        raise UsageError(f"fixture: {fx.name!r} is not piecewise-linear")
    return fx.function


def _lam(job, default=None) -> float:
    lam = job.params.get("lambda", default)
    if lam is None:
        raise UsageError("lambda: --lambda is required")
    if not (isinstance(lam, (int, float)) and math.isfinite(lam) and lam > 0):
        raise UsageError(f"lambda: must be finite and > 0, got {lam!r}")
    return float(lam)


def _grid(job, fx=None) -> np.ndarray:
    if "grid" in job.params:
        return parse_grid(job.params["grid"])
    if fx is not None and fx.kind == "pl":
        f = fx.function.to_float()
        reach = 5.0 + max(abs(float(f.breakpoints[0])), abs(float(f.breakpoints[-1])))
        return np.linspace(-reach, reach, 101)
    return np.linspace(-5.0, 5.0, 101)


def _region(job, default):
    if "region" in job.params:
        try:
            return parse_region(job.params["region"])
        except ValueError as exc:
            raise UsageError(f"region: {exc}") from None
    return default


# -- commands -----------------------------------------------------------------------------


def _status_exit(status: Status, truth_label=None) -> int:
    if truth_label is True:
        return 0 if status is Status.CERTIFIED else 1
    if truth_label is False:
        return 0 if status is Status.REFUTED else 1
    return 1 if status is Status.REFUTED else 0


def _cmd_conjugate(job):
    fx = _targets(job, 1)[0]
    return {"function": pl_to_dict(_pl(fx)), "conjugate": pl_to_dict(conjugate_pl(_pl(fx)))}, 0


def _prox_rows(job, with_values: bool):
    fx = _targets(job, 1)[0]
    lam = _lam(job)
    xs = _grid(job, fx)
    if fx.kind == "pl":
        f = _pl(fx).to_float()
        if with_values:
            return envelope_table(f, lam, xs)
        return np.column_stack([xs, prox_pl_array(f, lam, xs)])
    bb = fx.blackbox()
    if bb.dim != 1:
        raise UsageError(f"fixture: {fx.name!r} is not one-dimensional")
    e, P = envelope_blackbox(bb, xs[:, None], lam)
    if with_values:
        return np.column_stack([xs, bb.values(xs[:, None]), e, P[:, 0]])
    return np.column_stack([xs, P[:, 0]])


def _cmd_prox(job):
    rows = _prox_rows(job, False)
    return {"columns": ["x", "prox"], "rows": rows}, 0


def _cmd_envelope(job):
    rows = _prox_rows(job, True)
    return {"columns": ["x", "f", "envelope", "prox"], "rows": rows}, 0


def _cmd_prox_average(job):
    f1, f2 = (_pl(fx) for fx in _targets(job, 2))
    alpha = job.params.get("alpha", 0.5)
    try:
        p = ProxAverageParams(_lam(job, 1.0), alpha)
    except ValueError as exc:
        raise UsageError(f"alpha: {exc}") from None
    xs = _grid(job)
    avg, bound = proximal_average(f1.to_float(), f2.to_float(), p, slope_grid=xs / p.lam, return_bound=True)
    return {"average": pl_to_dict(avg), "chord_bound": bound, "lambda": p.lam, "alpha": p.alpha}, 0


def _cmd_tilt(job):
    fx = _targets(job, 1)[0]
    f = _pl(fx)
    xs = _grid(job)
    return {"tilts": xs, "argmin": [tilt_map(f, float(t)) for t in xs]}, 0


def _check_verdict(job, fx, tol):
    prop = job.action
    if prop in ("strictly-monotone", "paramonotone"):
        if fx.kind != "operator":
            raise UsageError(f"fixture: {prop} needs an operator fixture, {fx.name!r} is {fx.kind}")
        op = fx.function
        if prop == "strictly-monotone":
            return check_strictly_monotone(op.graph, tol)
        return check_paramonotone(op.graph, op.oracle, tol)
    if not fx.is_function:
        raise UsageError(f"fixture: {prop} needs a function fixture, {fx.name!r} is {fx.kind}")
    bb = fx.blackbox()
    if prop == "strict-convex":
        if fx.kind == "pl" and "region" not in job.params:
            return certify_strict_convexity_pl(fx.function)
        return certify_strict_convexity_sampled(bb, _region(job, fx.domain_region), 2000, job.seed, tol)
    if prop == "almost-strict-convex":
        return certify_almost_strict_convexity(bb, _region(job, fx.subdiff_region), 500, job.seed, tol)
    if prop == "midpoint-convex":
        return midpoint_convexity_check(bb, 1000, job.seed, tol)
    if prop == "subgradient-strict":
        return subgradient_strict_inequality_check(bb, _region(job, fx.subdiff_region), 500, job.seed, tol)
    if prop == "unique-minimizer":
        return unique_minimizer_check(fx, gallery.sample_tilts(fx, 20, job.seed), tol, seed=job.seed)
    # second-order
    if bb.hess is None:
        raise UsageError(f"fixture: {fx.name!r} has no Hessian oracle")
    region = _region(job, fx.subdiff_region)
    if bb.dim == 1:
        a, b = float(region.lo[0]), float(region.hi[0])
        return second_order_test_1d(lambda x: bb.hess(np.asarray(x)[:, None])[:, 0, 0], a, b, 1025, tol)
    x0, x1 = region.sample_segments(make_rng(job.seed, 6), 8)
    p0, p1 = flat_direction_probes(bb, region, seed=job.seed, tol=tol)
    verdict = None
    for a, b in zip(np.vstack([x0, p0]), np.vstack([x1, p1])):
        verdict = second_order_test_nd(bb.hess, a, b, 257, tol)
        if not verdict.certified:
            return verdict
    return verdict


def _cmd_check(job):
    fx = _targets(job, 1)[0]
    verdict = _check_verdict(job, fx, job.tolerance())
    key = CHECKS[job.action]
    # a region override changes the question, so the global label no longer applies
    label = fx.truth.get(key) if key and "region" not in job.params else None
    code = _status_exit(verdict.status, label)
    return {"property": job.action, "fixture": fx.name, "verdict": verdict.to_dict(),
            "expected": label if isinstance(label, bool) else None, "matches_truth": code == 0}, code


def _suite_targets(job, kind):
    if job.fixtures == ["all"] and not job.inline:
        if kind == "operator":
            return gallery.operator_fixtures()
        return gallery.function_fixtures()
    return _targets(job, 1)


def _cmd_suite(job):
    tol = job.tolerance()
    reports = []
    for fx in _suite_targets(job, "operator" if job.action == "t-para" else "function"):
        if job.action == "t-para":
            if fx.kind != "operator":
                raise UsageError(f"fixture: t-para needs an operator fixture, {fx.name!r} is {fx.kind}")
            reports.append(para_equivalence_suite(fx.function, tol, seed=job.seed))
            continue
        if not fx.is_function:
            raise UsageError(f"fixture: {job.action} needs a function fixture, {fx.name!r} is {fx.kind}")
        if job.action == "t-almost":
            reports.append(theorem_almost_suite(fx, tol, job.seed))
        else:
            reports.append(envelope_suite(fx, _lam(job, 1.0), tol=tol, seed=job.seed))
    code = 0 if all(r["coherent"] for r in reports) else 1
    return (reports[0] if len(reports) == 1 else {"reports": reports}), code


def _cmd_gallery(job):
    index = gallery.gallery_index()
    if job.fixtures:
        wanted = set(job.fixtures)
        missing = wanted - {e["name"] for e in index}
        if missing:
            raise UsageError(f"fixture: unknown fixture(s) {', '.join(sorted(missing))}")
        index = [e for e in index if e["name"] in wanted]
    return {"fixtures": index}, 0


def _cmd_report(job):
    reports = []
    for path in job.inputs:
        try:
            with open(path, encoding="utf-8") as fh:
                reports.append(json.load(fh))
        except OSError as exc:
            raise MalformedReport(f"{path}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise MalformedReport(f"{path}: not JSON ({exc.msg})") from None
    return {"csv": report_aggregate(reports)}, 0


# -- reports ---------------------------------------------------------------------------------


def _suite_reports(obj, where="report"):
    if isinstance(obj, dict) and "result" in obj and "job" in obj:
        obj = obj["result"]
    if isinstance(obj, dict) and "reports" in obj:
        out = []
        for k, r in enumerate(obj["reports"]):
            out.extend(_suite_reports(r, f"{where}.reports[{k}]"))
        return out
    if not isinstance(obj, dict):
        raise MalformedReport(f"{where}: expected a JSON object")
    for key in ("suite", "fixture", "conditions", "agreement", "coherent"):
        if key not in obj:
            raise MalformedReport(f"{where}: missing field {key!r}")
    if not isinstance(obj["conditions"], list):
        raise MalformedReport(f"{where}: 'conditions' must be a list")
    return [obj]


def _margin(v):
    if isinstance(v, str):
        return math.inf if v == "inf" else (-math.inf if v == "-inf" else math.nan)
    return float(v) if v is not None else math.nan


def report_aggregate(reports: list) -> str:
    """CSV summary with one row per (fixture, suite), sorted by fixture then suite.

    ``reports`` holds parsed JSON objects: CLI reports, bare suite reports or
    ``{"reports": [...]}`` bundles.  The first line is a versioned schema
    comment.  Rows whose suite was not coherent carry the flag
    ``INCOHERENT``.

    Raises
    ------
    MalformedReport
        If an entry lacks the suite fields.
    """
    rows = {}
    for k, obj in enumerate(reports):
        for r in _suite_reports(obj, f"reports[{k}]"):
            conds = list(r["conditions"]) + list(r.get("auxiliary", []))
            margins = [m for m in (_margin(c.get("margin")) for c in conds) if not math.isnan(m)]
            samples = sum(int(c.get("samples_used", 0)) for c in conds)
            rows[(str(r["fixture"]), str(r["suite"]))] = [
                r["fixture"], r["suite"], bool(r["agreement"]), bool(r["coherent"]),
                repr(min(margins)) if margins else "", samples, "" if r["coherent"] else "INCOHERENT"]
    buf = io.StringIO()
    buf.write(f"# {SUMMARY_VERSION} columns={','.join(SUMMARY_COLUMNS)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_COLUMNS)
    for key in sorted(rows):
        w.writerow(rows[key])
    return buf.getvalue()


def report_body(report: dict) -> str:
    """Canonical text of the hash-relevant part (``format``, ``job``, ``result``)."""
    return dumps({k: report[k] for k in ("format", "job", "result")})


def threads() -> int:
    raw = os.environ.get("KONVEX_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise UsageError(f"KONVEX_THREADS: must be a positive integer, got {raw!r}")
    return n


HANDLERS = {
    "conjugate": _cmd_conjugate, "prox": _cmd_prox, "envelope": _cmd_envelope,
    "prox-average": _cmd_prox_average, "tilt": _cmd_tilt, "check": _cmd_check, "suite": _cmd_suite,
    "gallery": _cmd_gallery, "report": _cmd_report,
}


def execute(job: JobSpec):
    """Run ``job``; returns ``(report, exit_code)``."""
    n_threads = threads()
    result, code = HANDLERS[job.command](job)
    report = {"format": REPORT_FORMAT, "job": job.to_dict(), "result": to_jsonable(result)}
    body = report_body(report)
    report["meta"] = {"created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
                      "threads": n_threads, "body_sha256": hashlib.sha256(body.encode()).hexdigest()}
    return report, code


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"
    result = report["result"]
    if "csv" in result:
        return result["csv"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(result["columns"])
    for row in result["rows"]:
        w.writerow(row)
    return buf.getvalue()


def write_atomic(path: str, text: str) -> None:
    """Write via a temporary file in the target directory and rename it into place."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".konvex-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(job: JobSpec, stdout=None) -> int:
    """Execute ``job`` and emit its report; returns the exit code."""
    stdout = stdout or sys.stdout
    report, code = execute(job)
    text = render(report, job.output.get("format", "json"))
    if job.output.get("path"):
        write_atomic(job.output["path"], text)
    else:
        stdout.write(text)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        if ns.job:
            try:
                with open(ns.job, encoding="utf-8") as fh:
                    job = JobSpec.from_dict(json.load(fh))
            except OSError as exc:
                raise UsageError(f"job: cannot read {ns.job}: {exc.strerror}") from None
            except json.JSONDecodeError as exc:
                raise UsageError(f"job: {ns.job} is not JSON ({exc.msg})") from None
        elif ns.command is None:
            parser.print_usage(sys.stderr)
            print("konvex: error: a command or --job is required", file=sys.stderr)
            return 2
        else:
            job = job_from_args(ns)
        return run(job)
    except (UsageError, MalformedReport) as exc:
        print(f"konvex: error: {exc}", file=sys.stderr)
        return 2
    except (KonvexError, ValueError) as exc:
        print(f"konvex: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
