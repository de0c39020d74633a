"""Command-line interface.

Exit status: 0 when every certification passes, 1 when a certification
fails (the report is still written), 2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import asymptotics, enumerator, kernel, qanalysis, strip
from .enumerator import Region, StepSetError, parse_step_set

OUT_DIR_ENV = "QWALKS_OUT_DIR"
COMMANDS = ("count", "series", "kernel", "poles", "alpha", "strip", "verify-all")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    steps: str = "S"
    order: int = 50
    n: int = 10
    precision: int = 60
    output: str = "json"
    out: str | None = None
    poles_max_n: int = 10
    digits: int = 10
    region: str = "QuarterPlane"
    family: str = "S"
    k_max: int = 20
    survey: bool = False
    growth_n: int = 0
    full: bool = False

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        for name in ("order", "precision", "poles_max_n", "digits"):
            if getattr(self, name) < 1:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")
        if self.n < 0:
            raise UsageError("--n must be nonnegative")
        if self.k_max < 0 or self.k_max % 2:
            raise UsageError("--k-max must be even and nonnegative")
        if self.growth_n < 0:
            raise UsageError("--growth-n must be nonnegative")
        if self.command == "poles" and self.family == "S" and self.poles_max_n < 2:
            raise UsageError("--poles-max-n must be at least 2")
        if self.output not in ("json", "csv", "text"):
            raise UsageError(f"unknown output format {self.output!r}")
        try:
            Region(self.region)
        except ValueError:
            raise UsageError(f"unknown region {self.region!r}") from None


# ---------------------------------------------------------------------------
# report helpers
# ---------------------------------------------------------------------------
def _plain(obj):
    """Turn report values into JSON-ready data."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if hasattr(obj, "to_json"):
        return _plain(obj.to_json())
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (mpmath.mpf, mpmath.mpc)):
        return mpmath.nstr(obj, 20)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, float)):
        return obj
    if isinstance(obj, int):
        return obj if abs(obj) < 2 ** 53 else str(obj)
    return str(obj)


@dataclass
class Report:
    data: dict
    rows: list
    text: str
    passed: bool = True

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(_plain(self.data), indent=2, sort_keys=True) + "\n"
        if fmt == "csv":
            buf = io.StringIO()
            if self.rows:
                fields = list(self.rows[0].keys())
                for r in self.rows[1:]:
                    fields += [k for k in r if k not in fields]
                w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
                w.writeheader()
                for r in self.rows:
                    w.writerow({k: _plain(v) for k, v in r.items()})
            return buf.getvalue()
        return self.text.rstrip("\n") + "\n"


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def _steps(cfg: RunConfig):
    try:
        return parse_step_set(cfg.steps)
    except StepSetError as exc:
        raise UsageError(f"bad --steps: {exc}") from None


def _family(cfg: RunConfig) -> kernel.Family:
    steps = _steps(cfg)
    for fam, preset in (("S", enumerator.SET_S), ("T", enumerator.SET_T)):
        if steps == preset:
            return kernel.Family(fam)
    raise UsageError("the kernel method is implemented for step sets S and T only")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------
def cmd_count(cfg: RunConfig) -> Report:
    steps = _steps(cfg)
    table = enumerator.count_walks(steps, Region(cfg.region), cfg.n)
    counts = list(enumerator.series_W(table).coefficient_list(0, cfg.n + 1))
    rows = [{"n": n, "count": str(c)} for n, c in enumerate(counts)]
    data = {"steps": steps.label(), "region": cfg.region, "n_max": cfg.n,
            "counts": [str(c) for c in counts]}
    if cfg.full:
        data["table"] = table.to_json()
    text = "\n".join(f"{n}\t{c}" for n, c in enumerate(counts))
    return Report(data, rows, text)


def cmd_series(cfg: RunConfig) -> Report:
    fam = _family(cfg)
    model = kernel.KernelModel(fam, cfg.order)
    q11 = model.q_11(cfg.order)
    q10 = model.q_x0(kernel.Mode.AT_X1, cfg.order)
    q01 = model.q_0y(kernel.Mode.AT_X1, cfg.order)
    series = {"Q(1,1)": q11, "Q(1,0)": q10, "Q(0,1)": q01}
    data = {"family": fam.value, "order": cfg.order,
            "series": {k: [str(v[n]) for n in range(cfg.order)] for k, v in series.items()}}
    rows = [{"n": n, **{k: str(v[n]) for k, v in series.items()}} for n in range(cfg.order)]
    text = "\n".join(f"{k} = {v.format()}" for k, v in series.items())
    return Report(data, rows, text)


def _kernel_group(fam: kernel.Family, order: int) -> dict:
    model = kernel.KernelModel(fam, order)
    table = enumerator.count_walks(enumerator.PRESETS[fam.value], Region.QUARTER_PLANE, order - 1)
    ids = model.verify_root_identities(order)
    oracle = kernel.check_against_oracle(model, table, order)
    fe = enumerator.functional_equation_check(table)
    ok = all(r.passed for r in ids + oracle) and fe.passed
    return {"family": fam.value, "order": order, "root_identities": ids,
            "oracle_agreement": oracle, "functional_equation": fe, "passed": ok}


def cmd_kernel(cfg: RunConfig) -> Report:
    group = _kernel_group(_family(cfg), cfg.order)
    rows = [{"check": r.identity, "order": r.order, "status": _status(r.passed),
             "first_mismatch_exponent": r.first_mismatch_exponent}
            for r in group["root_identities"] + group["oracle_agreement"]]
    rows.append({"check": "functional equation", "order": cfg.order,
                 "status": _status(group["functional_equation"].passed)})
    text = "\n".join(f"{r['status']}\t{r['check']}" for r in rows)
    return Report(group, rows, text, group["passed"])


def _poles_group(max_n: int, precision: int) -> dict:
    reports = [qanalysis.certify_thm_work(n, precision=precision) for n in range(2, max_n + 1)]
    return {"family": "S", "reports": reports, "passed": all(r.passed for r in reports)}


def cmd_poles(cfg: RunConfig) -> Report:
    if cfg.family == "T":
        res = qanalysis.cross_family_distinctness(range(1, cfg.poles_max_n + 1),
                                                  range(1, cfg.poles_max_n + 1), cfg.precision)
        rows = [{"m_max": cfg.poles_max_n, "min_distance": res["min_distance"],
                 "status": _status(res["passed"])}]
        return Report(res, rows, f"{_status(res['passed'])}\tmin distance {res['min_distance']}",
                      res["passed"])
    group = _poles_group(cfg.poles_max_n, cfg.precision)
    rows = [r.csv_row() for r in group["reports"]]
    text = "\n".join(f"{_status(r.passed)}\tn={r.n}\tdegree {r.locus_polynomial.degree}"
                     for r in group["reports"])
    return Report(group, rows, text, group["passed"])


def cmd_alpha(cfg: RunConfig) -> Report:
    res = asymptotics.alpha(cfg.digits)
    cert = asymptotics.sum_certificate()
    data = {**res.to_json(), "sum_in_(2/5,1/2)": cert["passed"]}
    rows = [{"alpha": res.value, "digits": res.digits, "partial_terms": res.partial_terms}]
    ok = cert["passed"]
    if cfg.growth_n:
        table_counts = enumerator.iter_total_counts(enumerator.SET_S, Region.QUARTER_PLANE,
                                                    cfg.growth_n)
        lo = min(50, cfg.growth_n)
        growth = asymptotics.growth_report(list(table_counts), window=(lo, cfg.growth_n))
        rows = [r.to_csv() for r in growth["rows"]]
        data["growth"] = {k: v for k, v in growth.items() if k != "rows"}
        ok = ok and growth["passed"]
    text = res.value
    return Report(data, rows, text, ok)


def _strip_group(k_max: int, order: int) -> dict:
    table = enumerator.count_walks(enumerator.SET_S, Region.QUARTER_PLANE, order)
    return strip.verify_strip(k_max, order, table)


def cmd_strip(cfg: RunConfig) -> Report:
    res = _strip_group(cfg.k_max, cfg.order)
    rows = [c.to_json() for c in res["lines"]]
    if cfg.survey:
        res["survey"] = strip.pole_survey(cfg.k_max, cfg.precision)
    text = "\n".join(f"{r['status']}\tk={r['k']}" for r in rows)
    text += f"\n{_status(res['sum_matches_W'])}\tsum over k reproduces W"
    return Report(res, rows, text, res["passed"])


def _imaginary_axis_group(max_n: int, precision: int) -> dict:
    f_rows = []
    for m in range(1, max_n + 1):
        br = qanalysis.bracket_roots_f(m)
        f_rows.append({
            "m": m,
            "f(1)": str(qanalysis.f_rational(m, Fraction(1))),
            "f(-1)": str(qanalysis.f_rational(m, Fraction(-1))),
            "f(2)_negative": qanalysis.f_at_two_negative(m),
            "bracket": [str(float(br[1][0])), str(float(br[1][1]))],
        })
    f_ok = all(r["f(1)"] == "4" == r["f(-1)"] and r["f(2)_negative"] for r in f_rows)
    nu = [qanalysis.nu_case_checks(n, precision=precision) for n in range(1, max_n + 1)]
    cross = qanalysis.cross_family_distinctness(range(1, max_n // 2 + 1),
                                                range(1, max_n + 1), precision)
    ok = f_ok and all(r["passed"] for r in nu) and cross["passed"]
    return {"f": f_rows, "nu": nu, "cross_family": cross, "passed": ok}


def _asymptotics_group(order: int) -> dict:
    fib_ok = all(asymptotics.y_at_one_third(n) * asymptotics.fibonacci(2 * n) == 1
                 for n in range(41))
    hp_order = max(order, 40)
    table = enumerator.count_walks(enumerator.SET_S, Region.HALF_PLANE_Y, hp_order)
    oracle = enumerator.series_boundary(table, enumerator.Axis.X_AXIS)
    closed = asymptotics.half_plane_closed_form(hp_order + 1)
    catalan = all(closed[2 * m] == asymptotics.half_plane_coefficient(m)
                  for m in range(hp_order // 2 + 1))
    counts = list(enumerator.iter_total_counts(enumerator.SET_S, Region.QUARTER_PLANE, 200))
    growth = asymptotics.growth_report(counts)
    growth.pop("rows")
    hp_ok = closed.first_mismatch(oracle, hp_order + 1) is None and catalan
    return {"fibonacci_identity_n<=40": fib_ok,
            "half_plane_order": hp_order,
            "half_plane_matches_oracle": hp_ok,
            "growth": growth,
            "passed": fib_ok and hp_ok and growth["passed"]}


def cmd_verify_all(cfg: RunConfig) -> Report:
    groups = {}
    a = asymptotics.alpha(cfg.digits)
    cert = asymptotics.sum_certificate()
    groups["alpha"] = {**a.to_json(), "sum_certificate": cert,
                       "passed": cert["passed"] and (cfg.digits != 10 or a.value == "0.1731788836")}
    groups["asymptotics"] = _asymptotics_group(cfg.order)
    groups["imaginary_axis"] = _imaginary_axis_group(cfg.poles_max_n, cfg.precision)
    for fam in kernel.Family:
        groups[f"kernel_{fam.value}"] = _kernel_group(fam, cfg.order)
    groups["poles"] = _poles_group(cfg.poles_max_n, cfg.precision)
    groups["q_closed_forms"] = _closed_forms_group(min(cfg.order, 30))
    groups["strip"] = _strip_group(20, 30)
    groups = dict(sorted(groups.items()))
    ok = all(g["passed"] for g in groups.values())
    data = {"config": {"order": cfg.order, "precision": cfg.precision,
                       "poles_max_n": cfg.poles_max_n, "digits": cfg.digits},
            "groups": groups, "passed": ok}
    rows = [{"group": k, "status": _status(g["passed"])} for k, g in groups.items()]
    text = "\n".join(f"{r['status']}\t{r['group']}" for r in rows)
    return Report(data, rows, text, ok)


def _closed_forms_group(n_max: int) -> dict:
    y_ok = all(qanalysis.ybar(n, "recurrence") == qanalysis.ybar(n, "closed")
               == qanalysis.ybar(n, "closed_qpowers") for n in range(n_max + 1))
    x_ok = all(qanalysis.xbar(n, "recurrence") == qanalysis.xbar(n, "explicit")
               for n in range(n_max + 1))
    return {"n_max": n_max, "ybar_closed_equals_recurrence": y_ok,
            "xbar_explicit_equals_recurrence": x_ok, "passed": y_ok and x_ok}


HANDLERS = {
    "count": cmd_count,
    "series": cmd_series,
    "kernel": cmd_kernel,
    "poles": cmd_poles,
    "alpha": cmd_alpha,
    "strip": cmd_strip,
    "verify-all": cmd_verify_all,
}


def run(cfg: RunConfig) -> tuple[int, str]:
    """Validate, execute and render; returns ``(exit status, output)``."""
    cfg.validate()
    report = HANDLERS[cfg.command](cfg)
    return (0 if report.passed else 1), report.render(cfg.output)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qwalks",
                                     description="Quarter-plane walk enumeration and kernel-method checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, order=True):
        p.add_argument("--output", choices=("json", "csv", "text"), default="json")
        p.add_argument("--out", help=f"output file (relative paths resolve against ${OUT_DIR_ENV})")
        p.add_argument("--precision", type=int, default=60, help="decimal digits")
        if order:
            p.add_argument("--order", type=int, default=50, help="series truncation order")

    p = sub.add_parser("count", help="count walks by length")
    common(p, order=False)
    p.add_argument("--steps", default="S")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--region", default="QuarterPlane",
                   choices=[r.value for r in Region])
    p.add_argument("--full", action="store_true", help="include the full count table")

    p = sub.add_parser("series", help="generating functions from the kernel method")
    common(p)
    p.add_argument("--steps", default="S")

    p = sub.add_parser("kernel", help="kernel-root identities and oracle agreement")
    common(p)
    p.add_argument("--steps", default="S")

    p = sub.add_parser("poles", help="certify the zero structure of the q-iterates")
    common(p, order=False)
    p.add_argument("--poles-max-n", type=int, default=10)
    p.add_argument("--family", choices=("S", "T"), default="S")

    p = sub.add_parser("alpha", help="the asymptotic constant")
    common(p, order=False)
    p.add_argument("--digits", type=int, default=10)
    p.add_argument("--growth-n", type=int, default=0,
                   help="also emit growth diagnostics up to this length")

    p = sub.add_parser("strip", help="strip recurrence checks")
    common(p, order=False)
    p.add_argument("--order", type=int, default=30, help="series truncation order")
    p.add_argument("--k-max", type=int, default=20)
    p.add_argument("--survey", action="store_true", help="add the observational pole survey")

    p = sub.add_parser("verify-all", help="run every certification")
    common(p)
    p.add_argument("--poles-max-n", type=int, default=10)
    p.add_argument("--digits", type=int, default=10)
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    fields = {k: v for k, v in vars(args).items() if v is not None}
    return RunConfig(**fields)


def _destination(out: str | None, command: str, fmt: str) -> str | None:
    base = os.environ.get(OUT_DIR_ENV)
    if out is None:
        if not base:
            return None
        ext = {"json": "json", "csv": "csv", "text": "txt"}[fmt]
        out = f"{command}.{ext}"
    if base and not os.path.isabs(out):
        out = os.path.join(base, out)
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = _config(args)
    try:
        status, text = run(cfg)
    except UsageError as exc:
        print(f"qwalks {cfg.command}: error: {exc}", file=sys.stderr)
        return 2
    dest = _destination(cfg.out, cfg.command, cfg.output)
    if dest is None:
        sys.stdout.write(text)
    else:
        os.makedirs(os.path.dirname(os.path.abspath(dest)), exist_ok=True)
        with open(dest, "w", encoding="utf-8") as fh:
            fh.write(text)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
