"""Command-line entry point: ``summexp {exponent,verify,witness,scan}``.

Exit codes: 0 success, 1 a theorem's conditions failed or a certified check
was violated, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import exponents as ex
from . import sidon_lab as sl
from . import tensor_lab as tl
from .errors import BudgetError, DomainError, InapplicableError
from .extrational import ExtRational, fmt

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

EXPONENT_MODES = (
    "auto", "main1", "main2", "main3", "cor-main", "intro", "inclusion", "hl", "hl-gamma",
    "praciano", "popa", "sidon", "rider", "opti1", "opti2", "displike", "compare-pg",
)
PARAM_KEYS = (
    "m", "blocks", "q", "r", "p", "t", "s", "qv", "cbar",
    "m1", "m2", "p1", "p2", "alpha", "beta", "cotype",
)


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# parameter parsing
# --------------------------------------------------------------------------


def _rat(text: str) -> ExtRational:
    return ExtRational.parse(text)


def _int(params: dict, key: str, default: int | None = None) -> int:
    if key not in params:
        if default is None:
            raise UsageError(f"missing parameter --{key}")
        return default
    try:
        return int(params[key])
    except ValueError:
        raise UsageError(f"--{key} needs an integer, got {params[key]!r}") from None


def _need(params: dict, key: str) -> str:
    if key not in params:
        raise UsageError(f"missing parameter --{key}")
    return params[key]


def _one(params: dict, key: str) -> ExtRational:
    return _rat(_need(params, key))


def _vec(params: dict, key: str, n: int | None = None) -> list[ExtRational]:
    """Comma list of rationals; a single value is broadcast to length ``n``."""
    vals = [_rat(x) for x in _need(params, key).split(",")]
    if n is not None and len(vals) == 1:
        vals = vals * n
    if n is not None and len(vals) != n:
        raise UsageError(f"--{key} needs 1 or {n} values, got {len(vals)}")
    return vals


def _blocks(params: dict, m: int) -> list[list[int]]:
    if "blocks" not in params:
        return [[i] for i in range(1, m + 1)]
    try:
        return [[int(i) for i in b.split(",")] for b in params["blocks"].split(";")]
    except ValueError:
        raise UsageError(f"--blocks expects e.g. '1,2;3', got {params['blocks']!r}") from None


def _scenario(params: dict) -> ex.PartitionScenario:
    if "scenario" in params:
        try:
            with open(params["scenario"]) as fh:
                return ex.PartitionScenario.from_dict(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read scenario: {exc}") from None
    m = _int(params, "m")
    blocks = _blocks(params, m)
    n = len(blocks)
    return ex.PartitionScenario(m, blocks, _one(params, "q"), _vec(params, "r", n), _vec(params, "p", n))


def _m_hint(params: dict) -> int | None:
    return _int(params, "m") if "m" in params else None


# --------------------------------------------------------------------------
# exponent modes
# --------------------------------------------------------------------------


@dataclass
class Outcome:
    """Uniform view of an exponent-mode answer."""

    mode: str
    value: ExtRational | bool | None
    theorem: str | None = None
    data: dict = field(default_factory=dict)
    failed: str | None = None
    result: ex.ExponentResult | None = None

    @property
    def ok(self) -> bool:
        return self.value is not None and self.value is not False

    def to_dict(self) -> dict:
        if self.result is not None:
            return {"mode": self.mode, **self.result.to_dict()}
        out: dict = {"mode": self.mode}
        if isinstance(self.value, bool):
            out["value"] = self.value
        else:
            out["s"] = fmt(self.value)
            out["s_decimal"] = None if self.value is None else float(self.value)
        out["theorem"] = self.theorem
        out.update({k: _plain(v) for k, v in self.data.items()})
        return out

    def s_text(self) -> str:
        if isinstance(self.value, bool):
            return str(self.value).lower()
        return fmt(self.value)


def _plain(v):
    if isinstance(v, ExtRational):
        return str(v)
    if v is None or isinstance(v, (bool, int, float, str)):
        return v
    return fmt(v)


def _from_result(mode: str, res: ex.ExponentResult) -> Outcome:
    failed = None
    if res.s is None:
        bad = res.failed()
        failed = bad[0].name if bad else "no applicable case"
    tag = res.theorem.value if res.theorem is not None else None
    return Outcome(mode, res.s, tag, failed=failed, result=res)


def _mode_scenario(fn: Callable) -> Callable[[str, dict], Outcome]:
    return lambda mode, params: _from_result(mode, fn(_scenario(params)))


def _cor_main(mode, params):
    m = _int(params, "m")
    return _from_result(mode, ex.cor_main_exponent(m, _one(params, "q"), _vec(params, "r", m), _vec(params, "p", m)))


def _intro(mode, params):
    return _from_result(mode, ex.intro_exponent(
        _int(params, "m"), _one(params, "q"), _one(params, "r"), _one(params, "p"), _one(params, "t")))


def _inclusion(mode, params):
    p = _vec(params, "p", _m_hint(params))
    return _from_result(mode, ex.inclusion_exponent(_one(params, "r"), p, _vec(params, "q", len(p))))


def _hl(mode, params):
    return _from_result(mode, ex.hardy_littlewood_exponent(_vec(params, "p", _m_hint(params))))


def _hl_gamma(mode, params):
    return _from_result(mode, ex.hl_gamma_result(
        _int(params, "m1"), _int(params, "m2"), _one(params, "p1"), _one(params, "p2"),
        _one(params, "q"), _one(params, "alpha"), _one(params, "beta")))


def _praciano(mode, params):
    rho = ex.praciano_rho(_vec(params, "p", _m_hint(params)))
    return Outcome(mode, rho, "PRACIANO", failed=None if rho else "1 - sum 1/p_j > 0")


def _popa(mode, params):
    res = ex.popa_exponents(_one(params, "q"), _vec(params, "r", _m_hint(params)))
    return Outcome(mode, res.Q, "POPA", {"R": res.R, "Q": res.Q})


def _sidon(mode, params):
    p = _vec(params, "p", _m_hint(params))
    fn = ex.sidon_product_exponent if mode == "sidon" else ex.rider_product_exponent
    return Outcome(mode, fn(p), mode.upper())


def _opti1(mode, params):
    res = ex.opti1_optimal_s(_int(params, "m"), _one(params, "r"), _one(params, "p"))
    return Outcome(mode, res.s, "OPTI1", {"case": res.case}, failed=None if res.s else "1/r - (m-1)/p* > 0")


def _opti2(mode, params):
    ok = ex.opti2_predicate(_one(params, "r"), _one(params, "p"), _one(params, "s"), _one(params, "q"))
    return Outcome(mode, ok, "OPTI2", failed=None if ok else "1/s - 2/q <= 1/r - 2/p")


def _displike(mode, params):
    cbar = [int(x) for x in _need(params, "cbar").split(",") if x]
    cot = _one(params, "cotype") if "cotype" in params else None
    return _from_result(mode, ex.displike_result(_one(params, "r"), _vec(params, "qv"), cbar, cot))


def _compare_pg(mode, params):
    res = ex.compare_perez_garcia(_int(params, "m"), _one(params, "s"))
    return Outcome(mode, res.t_inclusion, "COMPARE_PG",
                   {"t_inclusion": res.t_inclusion, "t_pg": res.t_pg, "inclusion_better": res.inclusion_better})


_MODES: dict[str, Callable[[str, dict], Outcome]] = {
    "auto": _mode_scenario(ex.best_exponent),
    "main1": _mode_scenario(ex.main1_exponent),
    "main2": _mode_scenario(ex.main2_exponent),
    "main3": _mode_scenario(ex.main3_exponent),
    "cor-main": _cor_main,
    "intro": _intro,
    "inclusion": _inclusion,
    "hl": _hl,
    "hl-gamma": _hl_gamma,
    "praciano": _praciano,
    "popa": _popa,
    "sidon": _sidon,
    "rider": _sidon,
    "opti1": _opti1,
    "opti2": _opti2,
    "displike": _displike,
    "compare-pg": _compare_pg,
}


def run_exponent(mode: str, params: dict) -> Outcome:
    if mode not in _MODES:
        raise UsageError(f"unknown mode {mode!r}")
    try:
        return _MODES[mode](mode, params)
    except InapplicableError as exc:
        return Outcome(mode, None, None, {"error": str(exc)}, failed=str(exc))


def _render_exponent(out: Outcome, fmt_: str) -> str:
    d = out.to_dict()
    if fmt_ == "json":
        return json.dumps(d, indent=2)
    if fmt_ == "csv":
        keys = [k for k, v in d.items() if not isinstance(v, (list, dict))]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(keys)
        w.writerow([d[k] for k in keys])
        return buf.getvalue().rstrip("\n")
    lines = [f"mode: {out.mode}"]
    if isinstance(out.value, bool):
        lines.append(f"value: {out.s_text()}")
    else:
        dec = "" if out.value is None else f" ({float(out.value):.10g})"
        lines.append(f"s: {out.s_text()}{dec}")
    lines.append(f"theorem: {out.theorem or '-'}")
    if out.result is not None:
        for c in out.result.conditions:
            lines.append(f"  {c}")
        for note in out.result.notes:
            lines.append(f"  note: {note}")
        if out.result.witness:
            lines.append(f"witness: {json.dumps(d.get('witness'))}")
    for k, v in out.data.items():
        lines.append(f"{k}: {_plain(v)}")
    return "\n".join(lines)


# --------------------------------------------------------------------------
# scan
# --------------------------------------------------------------------------


def parse_grid(items: Sequence[str]) -> list[tuple[str, list[str]]]:
    """``KEY=a..b`` (integer range) or ``KEY=v1:v2:...``, one item per ``--set``."""
    grid = []
    for item in items:
        key, sep, spec = item.partition("=")
        key = key.strip()
        if not sep or not key:
            raise UsageError(f"grid item {item!r} is not KEY=VALUES")
        if key not in PARAM_KEYS:
            raise UsageError(f"unknown grid parameter {key!r}")
        if ".." in spec:
            lo, _, hi = spec.partition("..")
            try:
                values = [str(v) for v in range(int(lo), int(hi) + 1)]
            except ValueError:
                raise UsageError(f"bad integer range {spec!r}") from None
        else:
            values = [v for v in spec.split(":") if v != ""]
        grid.append((key, values))
    return grid


def run_scan(mode: str, params: dict, grid: list[tuple[str, list[str]]]) -> str:
    keys = [k for k, _ in grid]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(keys + ["s", "s_decimal", "theorem", "failed"])
    for combo in itertools.product(*(vals for _, vals in grid)):
        point = dict(params)
        point.update(zip(keys, combo))
        out = run_exponent(mode, point)
        if isinstance(out.value, bool):
            s, dec = out.s_text(), ""
        else:
            s = out.s_text()
            dec = "" if out.value is None else repr(float(out.value))
        w.writerow(list(combo) + [s, dec, out.theorem or "", out.failed or ""])
    return buf.getvalue()


# --------------------------------------------------------------------------
# verify
# --------------------------------------------------------------------------


def _floats(text: str | None, name: str) -> list[float]:
    if text is None:
        raise UsageError(f"missing --{name}")
    try:
        return [tl.fraction_or_float(x) for x in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--{name} needs numbers, got {text!r}") from None


def _ints(text: str | None) -> list[int] | None:
    if text is None:
        return None
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _dims_args(args) -> dict:
    dims, max_dims = _ints(args.dims), _ints(args.max_dims)
    if (dims is None) == (max_dims is None):
        raise UsageError("give exactly one of --dims, --max-dims")
    return {"dims": dims, "max_dims": max_dims}


def _campaign_output(camp: tl.Campaign, args) -> tuple[str, int]:
    summary = camp.summary()
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(camp.to_csv())
    code = EXIT_FAIL if summary["violations"] else EXIT_OK
    if args.format == "csv":
        return camp.to_csv().rstrip("\n"), code
    if args.format == "table":
        return "\n".join(f"{k}: {v}" for k, v in summary.items()), code
    return json.dumps(summary, indent=2), code


def _report_output(rep: tl.CheckReport, args) -> tuple[str, int]:
    d = rep.to_dict()
    code = EXIT_FAIL if rep.status == "VIOLATED" else EXIT_OK
    if args.format == "table":
        return "\n".join(f"{k}: {v}" for k, v in d.items()), code
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(list(d))
        w.writerow(list(d.values()))
        return buf.getvalue().rstrip("\n"), code
    return json.dumps(d, indent=2), code


def run_verify(mode: str, args) -> tuple[str, int]:
    tol = args.tol
    if mode == "popa":
        q = _floats(args.q, "q")[0]
        camp = tl.popa_campaign(args.trials, args.seed, q, _floats(args.r, "r"), workers=args.workers,
                                tol=tl.CLOSED_FORM_TOL if tol is None else tol, **_dims_args(args))
        return _campaign_output(camp, args)
    if mode == "praciano":
        p = _floats(args.p, "p")
        otol = tl.OPTIMIZER_TOL if tol is None else tol
        if args.diag:
            if args.n is None:
                raise UsageError("--diag needs --n")
            return _report_output(tl.praciano_sharpness(args.n, len(p), p, otol), args)
        camp = tl.praciano_campaign(args.trials, args.seed, p, restarts=args.restarts,
                                    workers=args.workers, tol=otol, **_dims_args(args))
        return _campaign_output(camp, args)
    if mode == "hl":
        one = lambda name: _floats(getattr(args, name), name)[0]  # noqa: E731
        camp = tl.hl_campaign(args.trials, args.seed, args.m1 or 1, one("q"), one("alpha"), one("beta"),
                              one("p1"), one("p2"), restarts=args.restarts, workers=args.workers,
                              tol=tl.OPTIMIZER_TOL if tol is None else tol, **_dims_args(args))
        return _campaign_output(camp, args)
    if mode == "summing":
        if args.witness != "diagonal":
            raise UsageError("verify summing supports --witness diagonal")
        if args.n is None or args.n < 16:
            raise UsageError("--n must be at least 16 (grid of powers of two from 16)")
        s, q = _floats(args.s, "s")[0], _floats(args.q, "q")[0]
        grid = [2**k for k in range(4, int(math.log2(args.n)) + 1)]
        rows = [tl.diagonal_witness(n, s, q) for n in grid]
        fit = tl.growth_fit(lambda n: (rows[grid.index(n)].lhs, rows[grid.index(n)].rhs), grid)
        d = {
            "witness": "diagonal", "s": s, "q": q, "n_grid": grid,
            "lhs_slope": fit.lhs_slope, "rhs_slope": fit.rhs_slope,
            "expected_lhs_slope": 1 / s, "expected_rhs_slope": 2 * max(1 / q - 0.5, 0.0),
            "rows": [{"n": n, "lhs": r.lhs, "rhs": r.rhs, "ratio": r.ratio} for n, r in zip(grid, rows)],
        }
        if args.format == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["n", "lhs", "rhs", "ratio"])
            for row in d["rows"]:
                w.writerow([row["n"], repr(row["lhs"]), repr(row["rhs"]), repr(row["ratio"])])
            return buf.getvalue().rstrip("\n"), EXIT_OK
        if args.format == "table":
            return f"lhs_slope: {fit.lhs_slope:.6f}\nrhs_slope: {fit.rhs_slope:.6f}", EXIT_OK
        return json.dumps(d, indent=2), EXIT_OK
    raise UsageError(f"unknown verify mode {mode!r}")


# --------------------------------------------------------------------------
# witness
# --------------------------------------------------------------------------


def run_witness(args) -> tuple[str, int]:
    rep = sl.witness_report(
        args.N, sl.LambdaSpec(args.m1, args.k1), sl.LambdaSpec(args.m2, args.k2), _rat(args.p),
        exact_cap=args.exact_cap, mc_samples=args.mc_samples, seed=args.seed,
        alphabet_budget=args.alphabet_budget,
    )
    d = rep.to_dict()
    if args.format == "table":
        return "\n".join(f"{k}: {v}" for k, v in d.items()), EXIT_OK
    if args.format == "csv":
        flat = {k: v for k, v in d.items() if not isinstance(v, dict)}
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(list(flat))
        w.writerow(list(flat.values()))
        return buf.getvalue().rstrip("\n"), EXIT_OK
    return json.dumps(d, indent=2), EXIT_OK


# --------------------------------------------------------------------------
# argument parser
# --------------------------------------------------------------------------


def _add_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scenario", help="scenario JSON file (main1/main2/main3/auto)")
    for key in PARAM_KEYS:
        p.add_argument(f"--{key}", dest=f"param_{key}", metavar="X")


def _params(args) -> dict:
    out = {k[len("param_"):]: v for k, v in vars(args).items() if k.startswith("param_") and v is not None}
    if getattr(args, "scenario", None):
        out["scenario"] = args.scenario
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="summexp", description="Exponents and finite checks for multilinear summability.")
    fmt_kw = dict(choices=("json", "csv", "table"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("exponent", help="compute an exponent exactly")
    pe.add_argument("mode", choices=EXPONENT_MODES)
    pe.add_argument("--format", **fmt_kw)
    _add_params(pe)

    ps = sub.add_parser("scan", help="tabulate an exponent mode over a parameter grid")
    ps.add_argument("mode", choices=EXPONENT_MODES)
    ps.add_argument("--set", dest="grid", action="append", default=[], metavar="KEY=SPEC",
                    help="grid axis: KEY=a..b or KEY=v1:v2:...")
    _add_params(ps)

    pv = sub.add_parser("verify", help="run a numerical verification campaign")
    pv.add_argument("mode", choices=("popa", "praciano", "hl", "summing"))
    pv.add_argument("--format", **fmt_kw)
    pv.add_argument("--trials", type=int, default=100)
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--tol", type=float)
    pv.add_argument("--dims")
    pv.add_argument("--max-dims")
    pv.add_argument("--restarts", type=int, default=tl.DEFAULT_RESTARTS)
    pv.add_argument("--workers", type=int, default=1)
    pv.add_argument("--csv", help="also write per-trial rows to this file")
    pv.add_argument("--diag", action="store_true", help="praciano: diagonal ones tensor against its analytic norm")
    pv.add_argument("--n", type=int)
    pv.add_argument("--witness")
    for name in ("q", "r", "p", "s", "alpha", "beta", "p1", "p2"):
        pv.add_argument(f"--{name}")
    pv.add_argument("--m1", type=int)

    pw = sub.add_parser("witness", help="build the product-set witness and report its margin")
    pw.add_argument("kind", choices=("sidon",))
    pw.add_argument("--format", **fmt_kw)
    for name in ("m1", "k1", "m2", "k2"):
        pw.add_argument(f"--{name}", type=int, default=1)
    pw.add_argument("--N", type=int, required=True)
    pw.add_argument("--p", required=True)
    pw.add_argument("--seed", type=int, default=0)
    pw.add_argument("--exact-cap", type=int, default=sl.DEFAULT_EXACT_CAP)
    pw.add_argument("--mc-samples", type=int)
    pw.add_argument("--alphabet-budget", type=int, default=sl.DEFAULT_ALPHABET_BUDGET)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "exponent":
            out = run_exponent(args.mode, _params(args))
            print(_render_exponent(out, args.format))
            return EXIT_OK if out.ok else EXIT_FAIL
        if args.command == "scan":
            sys.stdout.write(run_scan(args.mode, _params(args), parse_grid(args.grid)))
            return EXIT_OK
        if args.command == "verify":
            text, code = run_verify(args.mode, args)
        else:
            text, code = run_witness(args)
        print(text)
        return code
    except (UsageError, DomainError, BudgetError, ZeroDivisionError) as exc:
        print(f"summexp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
