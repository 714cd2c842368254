"""Batch entry point for the exact check suites.

Two commands share one pipeline:

    workbench check <name> [--n N] [--g FILE] [--x FILE] [--K ORD]
                           [--kmax K] [--level D] [--out FILE]
    workbench suite --config FILE

Every named check resolves its inputs up front (matrix files, sizes,
truncation orders), runs the exact verification, and contributes one
CheckReport.  The emitted document has two sections: a canonical "body"
(sorted keys, checks sorted by name then parameters, no timing data)
that is byte-reproducible for a fixed configuration, and a "timing"
section that is allowed to vary between runs.

Exit codes: 0 when every check passed, 1 when any check failed, 2 for
usage or input errors (unknown check name, malformed matrix or config
file, parameter out of bounds).

Paths inside a config file are resolved relative to the config file's
directory; paths given on the command line are resolved relative to the
working directory.  The environment variable WORKBENCH_THREADS, when
set, overrides the configured parallelism degree.  Checks may run
concurrently; the report is assembled by sorting, so serial and
parallel runs emit identical canonical bodies.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import __version__
from .evaluation import (
    build_twisted_s,
    check_double_relations,
    eval_double,
    eval_t,
    pairing_series,
)
from .fusion import GradedFamily, character_chi, symmetry_sign
from .kernel import (
    LaurentPoly,
    Transposition,
    extract_entry,
    format_rational,
    identity_matrix,
    identity_op,
    mat_transpose,
    op_scale,
    op_substitute,
    orthogonal_transposition,
    parse_matrix_json,
    site_permute,
    tau_on_leg,
)
from .modes import verify_twisted_embedding
from .rmatrix import RFamily, flip_p, r_primes, yang_r, yang_r_bar
from .verify import (
    CheckReport,
    check_characteristic,
    check_fused_re,
    check_intertwiner,
    check_membership,
    check_quasi_inverse,
    check_re,
    check_rtt,
    check_ybe,
)

DEFAULT_N = 2
PARAM_DEFAULTS = {"K": 8, "kmax": 3, "level": 2}
_INT_MINIMA = {"n": 2, "K": 0, "kmax": 0, "level": 1}


class UsageError(ValueError):
    """Bad invocation or bad input file; the process should exit with 2."""


# -- input files ---------------------------------------------------------


def load_matrix(path):
    """Read a rational matrix file {"n": N, "entries": [["p/q", ...], ...]}.

    Entries must be exact integer or fraction literals; decimal forms are
    rejected.  Constraints beyond squareness (symmetry, invertibility)
    are left to whichever consumer needs them.
    """
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise UsageError(f"cannot read matrix file {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"matrix file {path} is not valid JSON: {exc}") from None
    try:
        return parse_matrix_json(data)
    except ValueError as exc:
        raise UsageError(f"matrix file {path}: {exc}") from None


def form_transposition(g):
    """Wrap a loaded form matrix, inferring the symmetry sign."""
    g = tuple(tuple(row) for row in g)
    transposed = mat_transpose(g)
    if transposed == g:
        sign = 1
    elif transposed == tuple(tuple(-value for value in row) for row in g):
        sign = -1
    else:
        raise UsageError("form matrix is neither symmetric nor skew-symmetric")
    try:
        return Transposition(g, sign)
    except ValueError as exc:
        raise UsageError(f"form matrix rejected: {exc}") from None


def _matrix_strings(matrix):
    return [[format_rational(value) for value in row] for row in matrix]


# -- suite configuration ---------------------------------------------------


@dataclass(frozen=True)
class SuiteConfig:
    """A batch of named checks plus shared inputs and execution knobs.

    The JSON file form mirrors the fields one-to-one:

        {"checks": [{"name": "ybe", "n": 3}, ...],
         "inputs": {"x": "x.json", "g": "g.json"},
         "defaults": {"K": 8, "kmax": 3, "level": 2},
         "out": "report.json",
         "parallelism": 2}

    Only "checks" is required.  base_dir records where a loaded file
    lived so its relative paths stay meaningful; it is derived context,
    not part of the configuration value.
    """

    checks: tuple
    inputs: dict
    defaults: dict
    out: str | None
    parallelism: int
    base_dir: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "checks", tuple(dict(c) for c in self.checks))
        object.__setattr__(self, "inputs", dict(self.inputs))
        object.__setattr__(self, "defaults", dict(self.defaults))
        for record in self.checks:
            _validate_record(record)
        extra_inputs = set(self.inputs) - {"x", "g"}
        if extra_inputs:
            raise UsageError(f"unknown input file keys: {sorted(extra_inputs)}")
        for key, value in self.inputs.items():
            if not isinstance(value, str):
                raise UsageError(f'input path "{key}" must be a string, got {value!r}')
        if set(self.defaults) != set(PARAM_DEFAULTS):
            raise UsageError(
                f"defaults must have exactly the keys {sorted(PARAM_DEFAULTS)}"
            )
        for key, value in self.defaults.items():
            _validate_int(key, value)
        if not isinstance(self.parallelism, int) or isinstance(self.parallelism, bool):
            raise UsageError(f"parallelism must be an integer, got {self.parallelism!r}")
        if self.parallelism < 1:
            raise UsageError(f"parallelism must be >= 1, got {self.parallelism}")
        if self.out is not None and not isinstance(self.out, str):
            raise UsageError(f"out must be a path string, got {self.out!r}")

    @staticmethod
    def from_json_dict(data, base_dir=None):
        if not isinstance(data, dict):
            raise UsageError("config must be a JSON object")
        unknown = set(data) - {"checks", "inputs", "defaults", "out", "parallelism"}
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        if "checks" not in data or not isinstance(data["checks"], list):
            raise UsageError('config needs a "checks" list')
        defaults = dict(PARAM_DEFAULTS)
        supplied = data.get("defaults", {})
        if not isinstance(supplied, dict):
            raise UsageError('"defaults" must be an object')
        unknown = set(supplied) - set(PARAM_DEFAULTS)
        if unknown:
            raise UsageError(f"unknown default keys: {sorted(unknown)}")
        defaults.update(supplied)
        inputs = data.get("inputs", {})
        if not isinstance(inputs, dict):
            raise UsageError('"inputs" must be an object')
        return SuiteConfig(
            checks=tuple(data["checks"]),
            inputs=inputs,
            defaults=defaults,
            out=data.get("out"),
            parallelism=data.get("parallelism", 1),
            base_dir=base_dir,
        )

    @staticmethod
    def from_file(path):
        try:
            with open(path, "r", encoding="utf-8") as handle:
                data = json.load(handle)
        except OSError as exc:
            raise UsageError(f"cannot read config file {path}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise UsageError(f"config file {path} is not valid JSON: {exc}") from None
        base_dir = os.path.dirname(os.path.abspath(path))
        return SuiteConfig.from_json_dict(data, base_dir=base_dir)

    def to_json_dict(self):
        return {
            "checks": [dict(record) for record in self.checks],
            "inputs": dict(self.inputs),
            "defaults": dict(self.defaults),
            "out": self.out,
            "parallelism": self.parallelism,
        }

    def to_file(self, path):
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(self.to_json_dict(), handle, indent=2, sort_keys=True)
            handle.write("\n")


def _validate_int(key, value):
    if not isinstance(value, int) or isinstance(value, bool):
        raise UsageError(f'"{key}" must be an integer, got {value!r}')
    minimum = _INT_MINIMA[key]
    if value < minimum:
        raise UsageError(f'"{key}" must be >= {minimum}, got {value}')


def _validate_record(record):
    if not isinstance(record, dict):
        raise UsageError(f"check record must be an object, got {record!r}")
    name = record.get("name")
    if not isinstance(name, str) or name not in REGISTRY:
        raise UsageError(f"unknown check name: {name!r}")
    allowed = {"name"} | REGISTRY[name].needs
    extras = set(record) - allowed
    if extras:
        raise UsageError(
            f'check "{name}" does not accept {sorted(extras)}; '
            f"allowed parameters: {sorted(allowed - {'name'})}"
        )
    for key in ("n", "K", "kmax", "level"):
        if key in record:
            _validate_int(key, record[key])
    for key in ("g", "x"):
        if key in record and not isinstance(record[key], str):
            raise UsageError(f'"{key}" must be a file path string, got {record[key]!r}')


# -- job resolution ---------------------------------------------------------


@dataclass(frozen=True)
class _CheckSpec:
    name: str
    needs: frozenset
    runner: object
    summary: str


@dataclass(frozen=True)
class _Job:
    spec: _CheckSpec
    resolved: dict


def _resolve_path(base_dir, path):
    if base_dir is None or os.path.isabs(path):
        return path
    return os.path.join(base_dir, path)


def _resolve_record(record, cfg):
    """Turn one check record into a runnable job, loading any input files."""
    spec = REGISTRY[record["name"]]
    g_matrix = None
    if "g" in spec.needs:
        path = record.get("g", cfg.inputs.get("g"))
        if path is not None:
            g_matrix = load_matrix(_resolve_path(cfg.base_dir, path))
    x_matrix = None
    if "x" in spec.needs:
        path = record.get("x", cfg.inputs.get("x"))
        if path is not None:
            x_matrix = load_matrix(_resolve_path(cfg.base_dir, path))

    n = record.get("n")
    sizes = {}
    if g_matrix is not None:
        sizes["g"] = len(g_matrix)
    if x_matrix is not None:
        sizes["x"] = len(x_matrix)
    if n is not None:
        for source, size in sizes.items():
            if size != n:
                raise UsageError(
                    f'check "{spec.name}": n={n} conflicts with the '
                    f"{source} matrix of size {size}"
                )
    elif sizes:
        if len(set(sizes.values())) > 1:
            raise UsageError(
                f'check "{spec.name}": matrix sizes disagree: '
                + ", ".join(f"{k}={v}" for k, v in sorted(sizes.items()))
            )
        n = next(iter(sizes.values()))
        if n < _INT_MINIMA["n"]:
            raise UsageError(f'check "{spec.name}": matrices must be at least 2x2')
    else:
        n = DEFAULT_N

    resolved = {"n": n}
    public = {"n": n}
    if "g" in spec.needs:
        t = form_transposition(g_matrix) if g_matrix is not None else orthogonal_transposition(n)
        resolved["t"] = t
        public["kind"] = "orthogonal" if t.sign == 1 else "symplectic"
        public["g"] = _matrix_strings(t.g)
    if "x" in spec.needs:
        x = x_matrix if x_matrix is not None else identity_matrix(n)
        try:
            symmetry_sign(x)
        except ValueError as exc:
            raise UsageError(f'check "{spec.name}": {exc}') from None
        resolved["x"] = x
        public["x"] = _matrix_strings(x)
    for key in ("K", "kmax", "level"):
        if key in spec.needs:
            value = record.get(key, cfg.defaults[key])
            resolved[key] = value
            public[key] = value
    resolved["public"] = public
    return _Job(spec, resolved)


# -- runners ---------------------------------------------------------


def _first_diff(lhs, rhs):
    """Witness dict for the lexicographically first disagreeing entry."""
    if lhs.legs != rhs.legs:
        raise ValueError("leg layout mismatch")
    disagreements = [
        key
        for key in set(lhs.entries) | set(rhs.entries)
        if lhs.entries.get(key) != rhs.entries.get(key)
    ]
    if not disagreements:
        return None
    row, col = min(disagreements)
    return {
        "row": list(row),
        "col": list(col),
        "lhs": str(extract_entry(lhs, row, col)),
        "rhs": str(extract_entry(rhs, row, col)),
    }


def _finish(name, public, inner, extra=None):
    """Re-badge an inner CheckReport under the registry name."""
    params = dict(public)
    if extra:
        params.update(extra)
    for key, value in inner.params.items():
        params.setdefault(key, value)
    return CheckReport(name, params, inner.passed, inner.witness, inner.elapsed_ms)


def _aggregate(name, public, instances):
    """Combine tagged sub-reports; the witness cites the first failure."""
    passed = True
    witness = None
    for tag, report in instances:
        if not report.passed and passed:
            passed = False
            witness = dict(report.witness or {})
            witness["instance"] = tag
    params = dict(public)
    params["instances"] = [tag for tag, _ in instances]
    elapsed = sum(report.elapsed_ms for _, report in instances)
    return CheckReport(name, params, passed, witness, elapsed)


def _run_ybe(p):
    return _finish("ybe", p["public"], check_ybe(yang_r(p["n"])))


def _run_quasi_inverse(p):
    r = yang_r(p["n"])
    r_bar, zeta = yang_r_bar(p["n"])
    inner = check_quasi_inverse(r, r_bar, zeta)
    return _finish("quasi_inverse", p["public"], inner, {"zeta": str(zeta)})


def _run_tau_symmetry(p):
    n, t = p["n"], p["t"]
    r = yang_r(n)
    both_legs = tau_on_leg(tau_on_leg(r, 1, t), 2, t)
    witness = _first_diff(both_legs, site_permute(r, (2, 1)))
    r_prime, r_double_prime = r_primes(n, t)
    params = dict(p["public"])
    params["primes_coincide"] = r_prime == r_double_prime
    return CheckReport("tau_symmetry", params, witness is None, witness, 0.0)


def _run_rtt_evaluation(p):
    rep = eval_t(p["n"])
    inner = check_rtt(yang_r(p["n"]), rep.t_poly)
    return _finish("rtt_evaluation", p["public"], inner, {"denominator": str(rep.denom)})


def _run_twisted_evaluation(p):
    n, t = p["n"], p["t"]
    s1 = build_twisted_s(eval_t(n), t)
    s2 = op_substitute(s1, {"u": "v"})
    inner = check_re(RFamily.build(n, t), s1, s2)
    return _finish("twisted_evaluation", p["public"], inner)


def _run_double_yangian(p):
    return _finish("double_yangian", p["public"], check_double_relations(eval_double(p["n"])))


def _run_pairing(p):
    n, order = p["n"], p["K"]
    series = pairing_series(n, order)
    zvar = series.legs[0].spectral_var
    wvar = series.legs[1].spectral_var
    p_op = flip_p(n, zvar, wvar)
    expected = identity_op(series.legs)
    for k in range(order + 1):
        expected = expected - op_scale(p_op, LaurentPoly((zvar, wvar), {(-k - 1, k): 1}))
    witness = _first_diff(series, expected)
    if witness is not None:
        witness["side"] = "order_coefficients"
    else:
        scalar = LaurentPoly.var(zvar) - LaurentPoly.var(wvar)
        cleared_target = op_scale(identity_op(series.legs), scalar) - p_op
        boundary = op_scale(p_op, LaurentPoly((zvar, wvar), {(-order - 1, order + 1): 1}))
        witness = _first_diff(op_scale(series, scalar) - cleared_target, boundary)
        if witness is not None:
            witness["side"] = "cross_multiplied"
    params = dict(p["public"])
    params["orders_checked"] = order + 1
    return CheckReport("pairing", params, witness is None, witness, 0.0)


def _run_fused_re(p):
    fam = RFamily.build(p["n"], p["t"])
    family = GradedFamily.from_character(p["x"], p["t"], k_max=p["kmax"])
    instances = []
    for k in range(1, p["kmax"] + 1):
        for m in range(1, p["kmax"] + 1):
            instances.append((f"k={k},m={m}", check_fused_re(family, fam, k, m)))
    return _aggregate("fused_re", p["public"], instances)


def _run_membership(p):
    # the exchange condition compares adjacent sites, so the smallest
    # component with any content is k = 2
    fam = RFamily.build(p["n"], p["t"])
    instances = []
    for k in range(2, p["kmax"] + 1):
        chi = character_chi(p["x"], p["t"], k)
        instances.append((f"k={k}", check_membership(chi, fam)))
    return _aggregate("membership", p["public"], instances)


def _run_characteristic(p):
    fam = RFamily.build(p["n"], p["t"])
    family = GradedFamily.from_character(p["x"], p["t"], k_max=p["kmax"])
    instances = []
    for k in range(0, p["kmax"] + 1):
        for i in range(0, k + 1):
            instances.append((f"k={k},i={i}", check_characteristic(family, fam, k, i)))
    return _aggregate("characteristic", p["public"], instances)


def _run_characteristic_unprimed(p):
    # negative control: the middle factor must be the primed block, and
    # this check deliberately runs the unprimed variant at (k, i) = (2, 1)
    fam = RFamily.build(p["n"], p["t"])
    family = GradedFamily.from_character(p["x"], p["t"], k_max=2)
    inner = check_characteristic(family, fam, 2, 1, primed_middle=False)
    return _finish("characteristic_unprimed", p["public"], inner, {"primed_middle": False})


def _run_intertwiner(p):
    fam = RFamily.build(p["n"], p["t"])
    family = GradedFamily.from_character(p["x"], p["t"], k_max=p["kmax"])
    instances = []
    for k in range(1, p["kmax"] + 1):
        for m in range(1, p["kmax"] + 1):
            instances.append((f"k={k},m={m}", check_intertwiner(family, fam, p["K"], k, m)))
    return _aggregate("intertwiner", p["public"], instances)


def _run_embedding(p):
    inner = verify_twisted_embedding(p["n"], p["level"], p["t"])
    return _finish("embedding", p["public"], inner)


REGISTRY = {
    spec.name: spec
    for spec in (
        _CheckSpec("ybe", frozenset({"n"}), _run_ybe,
                   "Yang-Baxter equation for the rational R-matrix"),
        _CheckSpec("quasi_inverse", frozenset({"n"}), _run_quasi_inverse,
                   "R times its partner equals the central factor"),
        _CheckSpec("tau_symmetry", frozenset({"n", "g"}), _run_tau_symmetry,
                   "transposition on both legs flips the sites"),
        _CheckSpec("rtt_evaluation", frozenset({"n"}), _run_rtt_evaluation,
                   "evaluation operator satisfies the RTT exchange"),
        _CheckSpec("twisted_evaluation", frozenset({"n", "g"}), _run_twisted_evaluation,
                   "twisted evaluation solution satisfies the reflection equation"),
        _CheckSpec("double_yangian", frozenset({"n"}), _run_double_yangian,
                   "all three defining relation families on cleared forms"),
        _CheckSpec("pairing", frozenset({"n", "K"}), _run_pairing,
                   "series coefficients and cross-multiplied form to order K"),
        _CheckSpec("fused_re", frozenset({"n", "g", "x", "kmax"}), _run_fused_re,
                   "fused reflection equation for character components"),
        _CheckSpec("membership", frozenset({"n", "g", "x", "kmax"}), _run_membership,
                   "exchange condition for fused character components"),
        _CheckSpec("characteristic", frozenset({"n", "g", "x", "kmax"}), _run_characteristic,
                   "characteristic identities over all partitions"),
        _CheckSpec("characteristic_unprimed", frozenset({"n", "g", "x"}), _run_characteristic_unprimed,
                   "negative control with the unprimed middle factor"),
        _CheckSpec("intertwiner", frozenset({"n", "g", "x", "K", "kmax"}), _run_intertwiner,
                   "truncated intertwining identity for characters"),
        _CheckSpec("embedding", frozenset({"n", "g", "level"}), _run_embedding,
                   "mode-level embedding into the untwisted algebra"),
    )
}


# -- execution ---------------------------------------------------------


def _execute(job):
    started = time.perf_counter()
    report = job.spec.runner(job.resolved)
    elapsed = (time.perf_counter() - started) * 1000.0
    return CheckReport(job.spec.name, report.params, report.passed, report.witness, elapsed)


def _parallelism_degree(configured):
    raw = os.environ.get("WORKBENCH_THREADS")
    if raw is None:
        return configured
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"WORKBENCH_THREADS must be an integer, got {raw!r}") from None
    if value < 1:
        raise UsageError(f"WORKBENCH_THREADS must be >= 1, got {value}")
    return value


def _report_sort_key(report):
    return (report.name, json.dumps(report.params, sort_keys=True))


def run_suite(cfg):
    """Resolve, run, and sort every check in the configuration.

    All input files are loaded before any check runs, so input errors
    surface as UsageError without partial execution.  The sorted result
    does not depend on the dispatch order.
    """
    jobs = [_resolve_record(record, cfg) for record in cfg.checks]
    degree = _parallelism_degree(cfg.parallelism)
    if degree > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=degree) as pool:
            reports = list(pool.map(_execute, jobs))
    else:
        reports = [_execute(job) for job in jobs]
    return sorted(reports, key=_report_sort_key)


def report_document(reports):
    """Split reports into the canonical body and the timing section."""
    checks = []
    per_check = []
    for report in reports:
        data = report.to_json()
        elapsed = data.pop("elapsed_ms")
        checks.append(data)
        per_check.append({"name": data["name"], "elapsed_ms": elapsed})
    body = {
        "checks": checks,
        "passed": all(report.passed for report in reports),
        "version": __version__,
    }
    timing = {
        "per_check": per_check,
        "total_ms": sum(entry["elapsed_ms"] for entry in per_check),
    }
    return {"body": body, "timing": timing}


def canonical_body_text(document):
    return json.dumps(document["body"], sort_keys=True, indent=2) + "\n"


def emit_report(reports, path=None):
    """Serialize the report document to a file, or stdout when no path."""
    document = report_document(reports)
    text = json.dumps(document, sort_keys=True, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        try:
            with open(path, "w", encoding="utf-8") as handle:
                handle.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write report to {path}: {exc}") from None
    return document


# -- command line ---------------------------------------------------------


def _usage_text():
    lines = [
        "usage: workbench check <name> [--n N] [--g FILE] [--x FILE] [--K ORD]",
        "                       [--kmax K] [--level D] [--out FILE]",
        "       workbench suite --config FILE",
        "",
        "known checks:",
    ]
    for name in sorted(REGISTRY):
        spec = REGISTRY[name]
        flags = ", ".join(sorted(spec.needs))
        lines.append(f"  {name:24s} {spec.summary} (accepts: {flags})")
    return "\n".join(lines)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="workbench",
        description="run exact identity checks and emit a deterministic report",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    check = sub.add_parser("check", help="run a single named check")
    check.add_argument("name")
    check.add_argument("--n", type=int, default=None)
    check.add_argument("--g", default=None, help="form matrix file for the transposition")
    check.add_argument("--x", default=None, help="constant solution matrix file")
    check.add_argument("--K", type=int, default=None, help="truncation order")
    check.add_argument("--kmax", type=int, default=None, help="largest component index")
    check.add_argument("--level", type=int, default=None, help="mode level cap")
    check.add_argument("--out", default=None, help="report file (default: stdout)")
    suite = sub.add_parser("suite", help="run every check in a config file")
    suite.add_argument("--config", required=True)
    return parser


def _config_from_check_args(args):
    record = {"name": args.name}
    for key in ("n", "g", "x", "K", "kmax", "level"):
        value = getattr(args, key)
        if value is not None:
            record[key] = value
    return SuiteConfig(
        checks=(record,),
        inputs={},
        defaults=dict(PARAM_DEFAULTS),
        out=args.out,
        parallelism=1,
    )


def _summary_lines(reports):
    lines = []
    for report in reports:
        scalars = {
            key: value
            for key, value in sorted(report.params.items())
            if isinstance(value, (int, str, bool))
        }
        shown = " ".join(f"{key}={value}" for key, value in scalars.items())
        status = "PASS" if report.passed else "FAIL"
        lines.append(f"{status} {report.name} {shown}".rstrip())
        if report.witness is not None:
            lines.append(f"  witness: {json.dumps(report.witness, sort_keys=True)}")
    passed = sum(1 for report in reports if report.passed)
    lines.append(f"{passed}/{len(reports)} checks passed")
    return lines


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "check":
            cfg = _config_from_check_args(args)
        else:
            cfg = SuiteConfig.from_file(args.config)
        reports = run_suite(cfg)
        emit_report(reports, cfg.out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(_usage_text(), file=sys.stderr)
        return 2
    for line in _summary_lines(reports):
        print(line, file=sys.stderr)
    return 0 if all(report.passed for report in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
