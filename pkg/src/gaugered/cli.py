"""Command line scenario runner.

Exit status: 0 when every verdict passes, 1 on a scientific failure
(residual above tolerance, divergence, refused reconstruction), 2 on a usage
or configuration error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import suites
from .config import ConfigError, ScenarioConfig, load_config, parse_config
from .gauge import curvature
from .io import SnapshotError, read_snapshot, write_snapshot
from .lattice import FormField
from .lie import SU2
from .reconstruct import CompatibilityError, holonomy, poincare_reconstruct
from .samples import SmoothForm
from .theory import NoetherPreconditionError, ResidualReport, Theory, noether_divergence
from .variation import FlowDivergenceError, gradient_flow_solve, trace_csv

__all__ = ["main", "build_parser"]

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _say(msg):
    print(msg, flush=True)


def _write(out: Path, name: str, text: str):
    (out / name).write_text(text)


def _emit(out: Path, stem: str, report: ResidualReport) -> bool:
    _write(out, f"{stem}.txt", report.to_text())
    _write(out, f"{stem}.json", report.to_json() + "\n")
    verdict = "PASS" if report.passed else "FAIL"
    extra = "" if report.passed else "  failing: " + ", ".join(report.failures())
    _say(f"{report.title}: {verdict}{extra}")
    return report.passed


# ---------------------------------------------------------------- verify


def _suite_call(name, cfg: ScenarioConfig):
    chart_given = any(k.startswith("chart.") for k in cfg.explicit)
    seed = cfg.seed
    if name == "calculus":
        return suites.calculus_suite(seed, charts=[cfg.chart] if chart_given else None)
    if name in ("gauge", "utiyama", "bianchi"):
        return suites.SUITES[name](seed, chart=cfg.chart if chart_given else None)
    if name in ("wave", "noether"):
        if not chart_given:
            return suites.SUITES[name](seed)
        if cfg.init.kind != "plane_wave":
            raise UsageError(f"suite {name} on a configured chart needs init.kind = plane_wave")
        return suites.SUITES[name](seed, base=cfg.chart, wave=cfg.init.plane_wave())
    if name == "reconstruct":
        return suites.reconstruct_suite(seed, base=cfg.chart if chart_given else None)
    if name == "solver":
        return suites.solver_suite(seed)[0]
    if name == "broken_product":
        return suites.broken_product_suite(seed)
    return suites.SUITES[name](seed)


VERIFY_SUITES = tuple(suites.SUITES) + ("solver", "broken_product")


def cmd_verify(cfg: ScenarioConfig, out: Path) -> int:
    if not cfg.suites:
        raise UsageError("verify.suites is empty")
    bad = [s for s in cfg.suites if s not in VERIFY_SUITES]
    if bad:
        raise UsageError(f"unknown suites {bad}; expected a subset of {list(VERIFY_SUITES)}")
    ok = True
    for name in cfg.suites:
        ok &= _emit(out, f"verify_{name}", _suite_call(name, cfg))
    return OK if ok else FAILED


# ---------------------------------------------------------------- solve


def cmd_solve(cfg: ScenarioConfig, out: Path) -> int:
    T = cfg.theory
    if not cfg.chart.signature.euclidean_like:
        raise UsageError("solve runs on Euclidean-signature charts only")
    A0 = cfg.initial_field()
    try:
        result = gradient_flow_solve(T, A0, cfg.flow)
    except FlowDivergenceError as exc:
        _say(f"solve: FAIL  {exc}")
        return FAILED
    _write(out, "trace.csv", trace_csv(result.trace))
    if isinstance(result.field, tuple):
        write_snapshot(out / "final_su2.snap", result.field[0])
        write_snapshot(out / "final_u1.snap", result.field[1])
    else:
        write_snapshot(out / "final.snap", result.field)
    report = ResidualReport("solve", metadata={"seed": cfg.seed, "theory": T.label(), **cfg.chart.metadata(),
                                               "iterations": result.iterations,
                                               "gauge_penalty": cfg.flow.gauge_penalty})
    it, S, l2, linf = result.trace[-1]
    report.add("reduced_residual", l2, linf, cfg.flow.residual_tol)
    report.add_check("action", S)
    report.add_check("monotone", float(result.monotone), 1.0, 1.0)
    return OK if _emit(out, "solve_report", report) else FAILED


# ---------------------------------------------------------------- sweep


def cmd_sweep(cfg: ScenarioConfig, out: Path) -> int:
    if cfg.sweep_levels < 2:
        raise UsageError("sweep.levels must be at least 2")
    if cfg.sweep_residual not in suites.SWEEPS:
        raise UsageError(f"unknown sweep {cfg.sweep_residual!r}; expected one of {sorted(suites.SWEEPS)}")
    wave = cfg.init.plane_wave() if cfg.init.kind == "plane_wave" else None
    try:
        sw = suites.run_sweep(cfg.sweep_residual, cfg.chart, cfg.sweep_levels, cfg.seed, wave=wave)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _write(out, f"sweep_{cfg.sweep_residual}.csv", sw.to_csv())
    lo, hi = suites.RATIO_BAND
    ok = sw.exact or all(lo <= r <= hi for r in sw.ratios)
    shown = "exact" if sw.exact else ", ".join(f"{r:.3f}" for r in sw.ratios)
    _say(f"sweep {cfg.sweep_residual}: {'PASS' if ok else 'FAIL'}  ratios {shown}")
    return OK if ok else FAILED


# ---------------------------------------------------------------- reconstruct


def cmd_reconstruct(cfg: ScenarioConfig, out: Path) -> int:
    rc = cfg.reconstruct
    if not rc["input"]:
        raise UsageError("reconstruct.input (curvature snapshot) is required")
    try:
        F = read_snapshot(rc["input"])
    except (OSError, SnapshotError) as exc:
        raise UsageError(f"cannot load {rc['input']}: {exc}") from exc
    if not isinstance(F, FormField) or F.degree != 2:
        raise UsageError("reconstruct.input must hold a 2-form")
    try:
        A = poincare_reconstruct(F, origin=rc["origin"], compat_tol=rc["compat_tol"],
                                 interpolation=rc["interpolation"])
    except CompatibilityError as exc:
        _say(f"reconstruct: FAIL  {exc}")
        return FAILED
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    write_snapshot(out / "reconstructed.snap", A)
    err = curvature(A) - F
    scale = max(F.norm_inf(), 1.0)
    report = ResidualReport("reconstruct", metadata={"seed": cfg.seed, **F.chart.metadata(),
                                                     "interpolation": rc["interpolation"],
                                                     "relative_to": repr(scale)})
    report.add("round_trip", err.norm_l2() / scale, err.norm_inf() / scale, rc["tol"])
    if rc["loop"]:
        try:
            U = holonomy(A, rc["loop"], rc["loop_origin"] or tuple(s.start for s in F.chart.interior(A.margin)))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        for i, u in enumerate(np.atleast_1d(U)):
            report.add_check(f"holonomy.{i}", u)
    return OK if _emit(out, "reconstruct_report", report) else FAILED


# ---------------------------------------------------------------- noether


def cmd_noether(cfg: ScenarioConfig, out: Path) -> int:
    T = cfg.theory
    if T.kind not in ("maxwell", "yang_mills"):
        raise UsageError("noether runs for maxwell or yang_mills theories")
    nc = cfg.noether
    rng = np.random.default_rng(cfg.seed)
    A_init = cfg.initial_field(rng)
    report = ResidualReport("noether", metadata={"seed": cfg.seed, "theory": T.label(), **cfg.chart.metadata(),
                                                 "generators": nc["generators"], "levels": nc["levels"]})
    if nc["levels"] > 1 and cfg.init.kind not in ("plane_wave", "zero"):
        raise UsageError("noether refinement needs an analytic initial field (plane_wave or zero)")
    charts = suites.refinement_levels(cfg.chart, nc["levels"]) if nc["levels"] > 1 else [cfg.chart]
    for g in range(nc["generators"]):
        if T.kind == "maxwell":
            axes = None
            if cfg.init.kind == "plane_wave":
                axes = tuple(i for i, k in enumerate(cfg.init.k) if k != 0.0) or None
            gen = suites.closed_generator(rng, cfg.chart, axes=axes)
        else:
            periods = None if cfg.chart.periodic else tuple(4.0 * L for L in cfg.chart.lengths)
            sp = SmoothForm.random(rng, cfg.chart, 0, SU2, periods=periods)
            gen = sp.sample
        sw = suites.Sweep(f"xi{g}", exact_tol=nc["tol"])
        for level, c in enumerate(charts):
            A = A_init if level == 0 else _resample(cfg, c)
            try:
                div = noether_divergence(Theory(T.kind, c, T.degree, T.algebra), A, gen(c))
            except NoetherPreconditionError as exc:
                raise UsageError(str(exc)) from exc
            sw.append(c.spacings[0], div.norm_inf())
        if len(charts) == 1 or sw.exact:
            v = sw.linf[0] if len(charts) == 1 else max(sw.linf)
            report.add(f"xi{g}.divergence", v, v, nc["tol"])
        else:
            sw.record(report)
    return OK if _emit(out, "noether_report", report) else FAILED


def _resample(cfg: ScenarioConfig, chart):
    if cfg.init.kind == "zero":
        return FormField.zeros(chart, 1, cfg.theory.algebra)
    A = cfg.init.plane_wave().sample(chart)
    if cfg.theory.kind == "yang_mills":
        z = np.zeros_like(A.data)
        return FormField(chart, 1, np.concatenate([z, z, A.data], axis=1), cfg.theory.algebra)
    return A


COMMANDS = {
    "verify": cmd_verify,
    "solve": cmd_solve,
    "sweep": cmd_sweep,
    "reconstruct": cmd_reconstruct,
    "noether": cmd_noether,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gaugered", description="Discrete gauge-field scenarios.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", metavar="PATH", help="key = value scenario file")
    p.add_argument("--seed", type=int, help="overrides run.seed")
    p.add_argument("--out", metavar="DIR", help="overrides run.out")
    p.add_argument("--threads", type=int, default=1, help="accepted for compatibility; runs are single-threaded")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    overrides = {}
    if args.seed is not None:
        overrides["run.seed"] = args.seed
    if args.out is not None:
        overrides["run.out"] = args.out
    try:
        if args.threads < 1:
            raise ConfigError("--threads must be positive")
        cfg = load_config(args.config, overrides) if args.config else parse_config("", overrides)
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        return COMMANDS[args.command](cfg, out)
    except (ConfigError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
