"""Command-line front end.

Subcommands: ``bell``, ``scan b-vs-l | violation-map | en-map | contours``,
``selftest``.  Exit codes: 0 success, 1 invalid input, 2 accuracy failure,
3 selftest failure.

Output is CSV with '#' comment lines, a fixed column order, a
format_version column, and all numbers printed with 17 significant digits;
identical configuration (including seed) yields byte-identical output.
Options may also be supplied in a plain ``key=value`` config file
(``--config``); explicit flags take precedence, and every run echoes its
fully resolved configuration in the comment header.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from typing import Optional

from .bell import LGrid, bell_binned, bell_optimize_l, bell_unbinned
from .errors import AccuracyError, InvalidInputError
from .gaussian import TmstParams, log_negativity, tmst_state
from .oracles import FockTruncation, McControl, auto_bins, fock_bell_chen, \
    fock_bell_grouped, mc_correlators, quadrature_correlators
from .pseudospin import Binned, SeriesControl, Unbinned, binned_correlators, \
    unbinned_correlators, x1_term, x2_term, z1_term, z2_term
from .scan import ContourSpec, GridSpec, en_map_and_contours, sweep_b_vs_l, \
    violation_map
from .bell import chen_bound, grouped_bell_closed_form

FORMAT_VERSION = 1


class _CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # invalid flags must exit 1, not argparse's default 2
    def error(self, message):
        raise _CliError(message)


def _fmt(x) -> str:
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        return format(x, ".17g")
    return str(x)


def _read_config(path: str) -> dict:
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise _CliError(f"bad config line: {line!r}")
                key, _, val = line.partition("=")
                values[key.strip().replace("-", "_")] = val.strip()
    except OSError as exc:
        raise _CliError(f"cannot read config file {path}: {exc}") from exc
    return values


def _resolve(args, name, cast, default):
    """Flag value if given, else config-file value, else default."""
    val = getattr(args, name, None)
    if val is not None:
        return val
    cfg = getattr(args, "_config_values", {})
    if name in cfg:
        try:
            return cast(cfg[name])
        except ValueError as exc:
            raise _CliError(f"bad config value for {name}: {cfg[name]!r}") from exc
    return default


def _float_list(text: str):
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise _CliError(f"bad numeric list: {text!r}") from exc


def _parse_lgrid(text: str) -> LGrid:
    try:
        lo, hi, pts = text.split(":")
        return LGrid(float(lo), float(hi), int(pts))
    except (ValueError, InvalidInputError) as exc:
        raise _CliError(f"bad l-grid spec {text!r}, want LOG10MIN:LOG10MAX:N") from exc


def _emit(lines, out: Optional[str]):
    text = "\n".join(lines) + "\n"
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise _CliError(f"cannot write output file {out}: {exc}") from exc


def _csv_lines(config: dict, columns, rows):
    lines = [f"# gaussbell {FORMAT_VERSION}"]
    for key in sorted(config):
        lines.append(f"# config {key}={_fmt(config[key])}")
    lines.append(",".join(("format_version",) + tuple(columns)))
    for row in rows:
        lines.append(",".join([str(FORMAT_VERSION)] + [_fmt(v) for v in row]))
    return lines


def _threads(args) -> int:
    val = _resolve(args, "threads", int, None)
    if val is None:
        env = os.environ.get("GAUSSBELL_THREADS", "")
        val = int(env) if env.strip() else 1
    if val < 1:
        raise _CliError("--threads must be >= 1")
    return val


def _series_control(args) -> SeriesControl:
    return SeriesControl(
        z_quad_order=_resolve(args, "quad_order", int, 32),
        tail_tol=_resolve(args, "tail_tol", float, 1e-9),
        sum_radius=_resolve(args, "sum_radius", int, 500_000),
    )


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_bell(args) -> int:
    op = _resolve(args, "op", str, None)
    if op not in ("binned", "unbinned"):
        raise _CliError("--op must be 'binned' or 'unbinned'")
    r = _resolve(args, "r", float, None)
    t = _resolve(args, "t", float, 0.0)
    if r is None:
        raise _CliError("--r is required")
    l = _resolve(args, "l", float, None)
    if op == "binned" and l is None:
        raise _CliError("--op binned requires --l")
    ctrl = _series_control(args)
    p = TmstParams(r=r, T=t)
    config = {"subcommand": "bell", "op": op, "r": r, "t": t,
              "tail_tol": ctrl.tail_tol, "quad_order": ctrl.z_quad_order}
    if op == "binned":
        config["l"] = l
        res = bell_binned(p, l, ctrl)
    else:
        res = bell_unbinned(p)
    cs = res.correlators
    rows = [(res.b_value, res.theta2_opt, cs.szz, cs.sxx, cs.est_error)]
    lines = _csv_lines(config, ("b", "theta2", "szz", "sxx", "est_error"), rows)
    _emit(lines, _resolve(args, "out", str, None))
    return 0


def _scan_grid(args, need_l_grid: bool):
    r_vals = _float_list(_resolve(args, "r", str, None) or "")
    t_vals = _float_list(_resolve(args, "t", str, None) or "")
    if not r_vals:
        raise _CliError("--r needs a comma-separated list of squeezing values")
    if not t_vals:
        raise _CliError("--t needs a comma-separated list of temperatures")
    l_grid = _parse_lgrid(_resolve(args, "l_grid", str, "-2:2:81")) \
        if need_l_grid else LGrid()
    return r_vals, t_vals, l_grid


def _cmd_scan(args) -> int:
    kind = args.scan_kind
    out = _resolve(args, "out", str, None)
    threads = _threads(args)
    ctrl = _series_control(args)
    # thread count is an execution detail, deliberately not echoed: output
    # bytes must be identical for any worker count
    config = {"subcommand": f"scan {kind}",
              "tail_tol": ctrl.tail_tol, "quad_order": ctrl.z_quad_order}

    if kind == "b-vs-l":
        r_vals, t_vals, l_grid = _scan_grid(args, need_l_grid=True)
        grid = GridSpec(r_vals, t_vals, l_grid, operator=Binned(1.0), ctrl=ctrl)
        config.update(r=",".join(map(_fmt, r_vals)), t=",".join(map(_fmt, t_vals)),
                      l_grid=f"{l_grid.log10_l_min}:{l_grid.log10_l_max}:{l_grid.points}")
        columns, rows = sweep_b_vs_l(TmstParams(r=0.0), grid, threads)
    elif kind == "violation-map":
        op = _resolve(args, "op", str, "binned")
        if op not in ("binned", "unbinned"):
            raise _CliError("--op must be 'binned' or 'unbinned'")
        r_vals, t_vals, l_grid = _scan_grid(args, need_l_grid=True)
        operator = Binned(1.0) if op == "binned" else Unbinned()
        grid = GridSpec(r_vals, t_vals, l_grid, operator=operator, ctrl=ctrl)
        config.update(op=op, r=",".join(map(_fmt, r_vals)),
                      t=",".join(map(_fmt, t_vals)))
        columns, rows = violation_map(grid, threads)
    elif kind == "en-map":
        r_vals, t_vals, _ = _scan_grid(args, need_l_grid=False)
        config.update(r=",".join(map(_fmt, r_vals)), t=",".join(map(_fmt, t_vals)))
        rows = [(r, t, log_negativity(tmst_state(TmstParams(r=r, T=t))))
                for r in r_vals for t in t_vals]
        rows.sort(key=lambda row: (row[0], row[1]))
        columns = ("r", "t", "en")
    elif kind == "contours":
        r_vals, t_vals, l_grid = _scan_grid(args, need_l_grid=True)
        levels = _float_list(_resolve(args, "levels", str, "0.5,1,1.5,2"))
        spec = ContourSpec(en_levels=tuple(sorted(levels)),
                           t_samples=max(2, len(t_vals)))
        grid = GridSpec(r_vals, t_vals, l_grid, operator=Binned(1.0), ctrl=ctrl)
        config.update(levels=",".join(map(_fmt, levels)),
                      r=",".join(map(_fmt, r_vals)), t=",".join(map(_fmt, t_vals)))
        _, (columns, rows) = en_map_and_contours(grid, spec, threads)
    else:  # pragma: no cover - argparse restricts choices
        raise _CliError(f"unknown scan kind {kind}")

    _emit(_csv_lines(config, columns, rows), out)
    return 0


def _selftest_checks(quick: bool, seed: int, samples: int):
    """Yield (name, passed, detail) tuples; deterministic for a fixed seed."""
    ctrl = SeriesControl(tail_tol=1e-9)

    def series_vs_quadrature():
        worst = 0.0
        for (r, t, l) in ((1.0, 0.0, 1.0), (1.0, 0.3, 1.5), (2.0, 0.5, 0.8)):
            p = TmstParams(r=r, T=t)
            cs = binned_correlators(p, l, ctrl)
            qz, qx = quadrature_correlators(p, l, auto_bins(p, l))
            worst = max(worst, abs(cs.szz - qz), abs(cs.sxx - qx))
        return worst < 1e-5, f"max|series-quadrature|={worst:.3e}"

    def reflection():
        p = TmstParams(r=0.8, T=0.4)
        worst = max(
            abs(z2_term(2, -1, p, 0.9) - z1_term(-3, 0, p, 0.9)),
            abs(x2_term(1, 1, p, 0.7) - x1_term(-2, -2, p, 0.7)),
        )
        return worst < 1e-12, f"max reflection residual={worst:.3e}"

    def large_l():
        worst = 0.0
        for (r, t) in ((2.0, 0.0), (1.5, 0.5)):
            res = bell_binned(TmstParams(r=r, T=t), 100.0, ctrl)
            asym = (4.0 / math.pi) * math.atan(math.sinh(2.0 * r))
            worst = max(worst, abs(res.b_value - asym))
        return worst < 2e-3, f"max|b - asymptote|={worst:.3e}"

    def small_l():
        res = bell_binned(TmstParams(r=1.0), 1e-2, ctrl)
        return abs(res.b_value - 2.0) < 1e-2, f"b(l=0.01)={res.b_value:.6f}"

    def unbinned_forms():
        p = TmstParams(r=1.0, T=0.5)
        szz, sxx = unbinned_correlators(p)
        ref_z = math.tanh(1.0 / (2.0 * 0.5)) ** 2
        ref_x = (2.0 / math.pi) * math.atan(math.sinh(2.0))
        worst = max(abs(szz - ref_z), abs(sxx - ref_x))
        return worst < 1e-12, f"max closed-form residual={worst:.3e}"

    def entanglement():
        worst = max(
            abs(log_negativity(tmst_state(TmstParams(r=r))) - 2.0 * r / math.log(2.0))
            for r in (0.5, 1.0, 2.0)
        )
        mono = all(
            log_negativity(tmst_state(TmstParams(r=1.0, T=t1)))
            > log_negativity(tmst_state(TmstParams(r=1.0, T=t2)))
            for t1, t2 in ((0.0, 0.4), (0.4, 0.9))
        )
        return worst < 1e-9 and mono, f"max|E_N - 2r/ln2|={worst:.3e}"

    def fock():
        trunc = FockTruncation(100)
        worst = max(
            abs(fock_bell_chen(1.0, trunc) - chen_bound(1.0)),
            abs(fock_bell_grouped(1.0, 2, trunc) - grouped_bell_closed_form(1.0, 2)),
        )
        return worst < 1e-6, f"max Fock residual={worst:.3e}"

    def monte_carlo():
        p = TmstParams(r=1.0, T=0.3)
        mc = McControl(samples=samples, seed=seed, batch=max(1000, samples // 20))
        szz, sxx, se_z, se_x = mc_correlators(p, 1.5, mc)
        cs = binned_correlators(p, 1.5, ctrl)
        dz = abs(szz - cs.szz) / se_z
        dx = abs(sxx - cs.sxx) / se_x
        return max(dz, dx) < 3.0, f"max sigma distance={max(dz, dx):.2f}"

    checks = [
        ("series-vs-quadrature", series_vs_quadrature),
        ("reflection-identities", reflection),
        ("large-l-asymptote", large_l),
        ("small-l-limit", small_l),
        ("unbinned-closed-forms", unbinned_forms),
        ("entanglement", entanglement),
        ("fock-oracle", fock),
    ]
    if not quick:
        checks.append(("monte-carlo-agreement", monte_carlo))
    for name, fn in checks:
        try:
            passed, detail = fn()
        except Exception as exc:  # a crash is a failure, not an abort
            passed, detail = False, f"exception: {exc}"
        yield name, passed, detail


def _cmd_selftest(args) -> int:
    quick = bool(getattr(args, "quick", False))
    seed = _resolve(args, "seed", int, 42)
    samples = _resolve(args, "samples", int, 200_000)
    lines = [f"# gaussbell selftest seed={seed} quick={int(quick)}"]
    failures = 0
    for name, passed, detail in _selftest_checks(quick, seed, samples):
        status = "PASS" if passed else "FAIL"
        failures += 0 if passed else 1
        lines.append(f"{status} {name}: {detail}")
    lines.append(f"# {failures} failure(s)")
    _emit(lines, _resolve(args, "out", str, None))
    return 3 if failures else 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_common(sp):
    sp.add_argument("--config", help="key=value config file (flags win)")
    sp.add_argument("--tail-tol", dest="tail_tol", type=float)
    sp.add_argument("--quad-order", dest="quad_order", type=int)
    sp.add_argument("--sum-radius", dest="sum_radius", type=int)
    sp.add_argument("--threads", type=int)
    sp.add_argument("--out")


def build_parser() -> _Parser:
    parser = _Parser(prog="gaussbell", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_bell = sub.add_parser("bell", help="CHSH value at one parameter point")
    p_bell.add_argument("--op", choices=("binned", "unbinned"))
    p_bell.add_argument("--r", type=float)
    p_bell.add_argument("--t", type=float)
    p_bell.add_argument("--l", type=float)
    _add_common(p_bell)
    p_bell.set_defaults(func=_cmd_bell)

    p_scan = sub.add_parser("scan", help="parameter sweeps to CSV")
    p_scan.add_argument("scan_kind",
                        choices=("b-vs-l", "violation-map", "en-map", "contours"))
    p_scan.add_argument("--op", choices=("binned", "unbinned"))
    p_scan.add_argument("--r", help="comma-separated squeezing values")
    p_scan.add_argument("--t", help="comma-separated temperatures")
    p_scan.add_argument("--l-grid", dest="l_grid",
                        help="bin-size grid LOG10MIN:LOG10MAX:N (use --l-grid=-2:2:81 for negative bounds)")
    p_scan.add_argument("--levels", help="comma-separated entanglement levels")
    _add_common(p_scan)
    p_scan.set_defaults(func=_cmd_scan)

    p_self = sub.add_parser("selftest", help="reduced-scale verification suite")
    p_self.add_argument("--quick", action="store_true",
                        help="skip the Monte-Carlo suite")
    p_self.add_argument("--seed", type=int)
    p_self.add_argument("--samples", type=int)
    _add_common(p_self)
    p_self.set_defaults(func=_cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args._config_values = (
            _read_config(args.config) if getattr(args, "config", None) else {}
        )
        return args.func(args)
    except _CliError as exc:
        sys.stderr.write(f"gaussbell: error: {exc}\n")
        return 1
    except InvalidInputError as exc:
        sys.stderr.write(f"gaussbell: invalid input: {exc}\n")
        return 1
    except AccuracyError as exc:
        sys.stderr.write(f"gaussbell: accuracy failure: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
