"""Command-line front end: simulate, sweep, zeros, margins, realize, serve.

CSV output is deterministic (17 significant digits, fixed column order
``t,y,u``, ``#``-prefixed comment footer) so identical invocations are
byte-identical.  Exit codes: 0 success, 2 computed-but-unstable (results are
still written), 1 hard error.
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import __version__
from .analysis import margins as sweep_margins
from .bench import (
    Scenario,
    ScenarioError,
    get_plant,
    get_scenario,
    load_scenario,
    plants,
)
from .fotf import (
    FOTF,
    composite_canceller,
    controller_tf,
    loop_maps,
    real_unstable_zeros,
    stability,
)
from .realize import FitError, FitRequest, export_filter, fit_rational
from .run import RunResult, default_ilt_params, run_scenario

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNSTABLE = 2


def _g(v: float) -> str:
    return "%.17g" % v


def _fail(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return EXIT_ERROR


def _resolve_scenario(args) -> Scenario:
    if getattr(args, "scenario", None) and getattr(args, "scenario_file", None):
        raise ValueError("give either --scenario or --scenario-file, not both")
    if getattr(args, "scenario", None):
        sc = get_scenario(args.scenario)
    elif getattr(args, "scenario_file", None):
        sc = load_scenario(args.scenario_file)
    else:
        raise ValueError("one of --scenario or --scenario-file is required")
    if getattr(args, "nu", None):
        sc = sc.with_nu(_parse_nu(args.nu))
    return sc


def _parse_nu(text: str):
    parts = [p for p in text.replace(":", ",").split(",") if p]
    values = [int(p) for p in parts]
    return values[0] if len(values) == 1 else values


def _parse_nus(text: str) -> list:
    configs = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if ":" in chunk:
            configs.append([int(p) for p in chunk.split(":")])
        else:
            configs.append(int(chunk))
    if not configs:
        raise ValueError("--nus is empty")
    return configs


def _write_out(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _margin_footer(res: RunResult) -> list:
    m = res.margins
    lines = []
    lines.append("# gain_margin_db = " + ("inf" if m.gain_margin_db == float("inf")
                                          else _g(m.gain_margin_db)))
    lines.append("# phase_margin_deg = " + ("undefined" if m.phase_margin_deg is None
                                            else _g(m.phase_margin_deg)))
    lines.append("# omega_gain_crossover = " + ("undefined" if m.omega_gain_crossover is None
                                                else _g(m.omega_gain_crossover)))
    lines.append("# omega_phase_crossover = " + ("undefined" if m.omega_phase_crossover is None
                                                 else _g(m.omega_phase_crossover)))
    return lines


def _run_csv(res: RunResult) -> str:
    lines = ["t,y,u"]
    lines += [f"{_g(t)},{_g(y)},{_g(u)}"
              for t, y, u in zip(res.times, res.y, res.u)]
    lines.append(f"# verdict = {res.verdict}")
    lines.append(f"# stable = {str(res.stable).lower()}")
    if res.metrics is None:
        lines.append("# metrics = unavailable")
    else:
        m = res.metrics
        lines.append(f"# undershoot_frac = {_g(m.undershoot_frac)}")
        lines.append(f"# overshoot_frac = {_g(m.overshoot_frac)}")
        lines.append(f"# rise_time_s = {_g(m.rise_time_s)}")
        lines.append(f"# settling_time_s = {_g(m.settling_time_s)}")
        lines.append(f"# ss_error = {_g(m.ss_error)}")
        lines.append(f"# effort_peak = {_g(m.effort_peak)}")
    lines += _margin_footer(res)
    lines.append(f"# version = {res.version}")
    return "\n".join(lines) + "\n"


def cmd_simulate(args) -> int:
    try:
        sc = _resolve_scenario(args)
    except (ValueError, KeyError, ScenarioError, OSError) as exc:
        return _fail(str(exc))
    res = run_scenario(sc)
    try:
        _write_out(_run_csv(res), args.out)
    except OSError as exc:
        return _fail(str(exc))
    return EXIT_OK if res.stable else EXIT_UNSTABLE


_SWEEP_COLUMNS = ("nu", "stable", "undershoot_frac", "overshoot_frac",
                  "rise_time_s", "settling_time_s", "ss_error", "effort_peak",
                  "gain_margin_db", "phase_margin_deg",
                  "omega_gain_crossover", "omega_phase_crossover")


def _sweep_row(nu, res: RunResult) -> str:
    nu_text = ":".join(str(n) for n in nu) if isinstance(nu, list) else str(nu)
    cells = [nu_text, str(res.stable).lower()]
    m = res.metrics
    if m is None:
        cells += [""] * 6
    else:
        cells += [_g(m.undershoot_frac), _g(m.overshoot_frac),
                  _g(m.rise_time_s), _g(m.settling_time_s),
                  _g(m.ss_error), _g(m.effort_peak)]
    mg = res.margins
    cells.append("inf" if mg.gain_margin_db == float("inf") else _g(mg.gain_margin_db))
    cells += ["" if v is None else _g(v)
              for v in (mg.phase_margin_deg, mg.omega_gain_crossover,
                        mg.omega_phase_crossover)]
    return ",".join(cells)


def cmd_sweep(args) -> int:
    try:
        sc = _resolve_scenario(args)
        configs = _parse_nus(args.nus)
    except (ValueError, KeyError, ScenarioError, OSError) as exc:
        return _fail(str(exc))
    lines = [",".join(_SWEEP_COLUMNS)]
    all_stable = True
    for nu in configs:
        try:
            res = run_scenario(sc.with_nu(nu))
        except ValueError as exc:
            return _fail(f"nu configuration {nu!r}: {exc}")
        all_stable &= res.stable
        lines.append(_sweep_row(nu, res))
    lines.append(f"# version = {__version__}")
    try:
        _write_out("\n".join(lines) + "\n", args.out)
    except OSError as exc:
        return _fail(str(exc))
    return EXIT_OK if all_stable else EXIT_UNSTABLE


def cmd_zeros(args) -> int:
    try:
        plant = get_plant(args.plant)
    except KeyError as exc:
        return _fail(str(exc))
    zeros = real_unstable_zeros(plant.tf().num)
    lines = [f"{plant.name}: real unstable zeros ({len(zeros)})"]
    lines += [_g(z) for z in zeros]
    print("\n".join(lines))
    return EXIT_OK


def _margin_line(label: str, loop: FOTF, band) -> str:
    m = sweep_margins(loop, band)
    verdict = stability(loop.feedback()).verdict
    pm = ("PM undefined (no gain crossover)" if m.phase_margin_deg is None
          else f"PM = {m.phase_margin_deg:.4f} deg at w = {m.omega_gain_crossover:.6g} rad/s")
    gm = ("GM = inf dB (no phase crossover)" if m.gain_margin_db == float("inf")
          else f"GM = {m.gain_margin_db:.4f} dB at w = {m.omega_phase_crossover:.6g} rad/s")
    return f"{label}: {pm}; {gm}; closed loop {verdict}"


def cmd_margins(args) -> int:
    try:
        sc = _resolve_scenario(args)
    except (ValueError, KeyError, ScenarioError, OSError) as exc:
        return _fail(str(exc))
    maps = loop_maps(sc.loop_model())
    print(_margin_line("compensated", maps.L, sc.band))
    if args.compare_baseline:
        baseline = controller_tf(sc.controller) * sc.plant.tf()
        print(_margin_line("baseline   ", baseline, sc.band))
    return EXIT_OK


def cmd_realize(args) -> int:
    try:
        sc = _resolve_scenario(args)
    except (ValueError, KeyError, ScenarioError, OSError) as exc:
        return _fail(str(exc))
    zs = [z for z, _ in sc.canceller.entries]
    if not zs:
        return _fail("scenario has no canceller to realize")
    if args.band:
        try:
            lo, hi = (float(p) for p in args.band.split(","))
        except ValueError:
            return _fail("--band expects LO,HI")
    else:
        lo, hi = min(zs) / 100.0, max(zs) * 100.0
    target = composite_canceller(sc.canceller)
    try:
        fit = fit_rational(FitRequest(target=target, band=(lo, hi), order=args.order))
    except (FitError, ValueError) as exc:
        return _fail(str(exc))
    header = (f"# fit of {sc.name} canceller: order {args.order}, "
              f"band [{_g(lo)}, {_g(hi)}] rad/s\n"
              f"# max_mag_error_db = {_g(fit.max_mag_error_db)}\n"
              f"# max_phase_error_deg = {_g(fit.max_phase_error_deg)}\n"
              f"# fit_stable = {str(fit.fit_stable).lower()}\n")
    try:
        _write_out(header + export_filter(fit, args.form), args.out)
    except OSError as exc:
        return _fail(str(exc))
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fraccancel",
        description="Fractional-order partial cancellation of non-minimum "
                    "phase zeros: simulation, analysis, and realization.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_scenario_args(p, with_nu=True):
        p.add_argument("--scenario", help="built-in scenario name")
        p.add_argument("--scenario-file", help="path to a scenario JSON file")
        if with_nu:
            p.add_argument("--nu", help="override cancellation degree "
                                        "(scalar or comma list per zero)")

    p = sub.add_parser("simulate", help="closed-loop step response to CSV")
    add_scenario_args(p)
    p.add_argument("--out", help="output CSV path (default stdout)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="metrics/margins table over nu values")
    add_scenario_args(p, with_nu=False)
    p.add_argument("--nus", required=True,
                   help="comma list of nu configs; use a:b:c for per-zero")
    p.add_argument("--out", help="output CSV path (default stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("zeros", help="list real unstable plant zeros")
    p.add_argument("--plant", required=True,
                   help=f"plant name, one of {sorted(plants())}")
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("margins", help="open-loop margin report")
    add_scenario_args(p)
    p.add_argument("--compare-baseline", action="store_true",
                   help="also report the loop without the canceller")
    p.set_defaults(func=cmd_margins)

    p = sub.add_parser("realize", help="rational fit of the scenario canceller")
    add_scenario_args(p)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--band", help="fit band LO,HI rad/s "
                                  "(default two decades around the zeros)")
    p.add_argument("--form", choices=("tf_coeffs", "zpk"), default="tf_coeffs")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8780)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except KeyboardInterrupt:
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
