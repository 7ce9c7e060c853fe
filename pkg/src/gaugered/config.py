"""Scenario configuration: flat ``key = value`` files with dotted section names.

Example::

    theory.kind = yang_mills
    chart.sizes = 8,8,8
    chart.length = 1.0
    chart.boundary = periodic
    chart.signature = +++
    init.kind = random
    init.amplitude = 0.1
    init.zero_mean = true
    flow.gauge_penalty = 1.0
    run.seed = 0

Lines starting with ``#`` are comments.  Unknown or repeated keys are errors.
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .lattice import FormField, LatticeChart
from .lie import SU2, U1, algebra_by_name
from .samples import PlaneWave, SmoothForm
from .theory import KINDS, Theory
from .variation import FlowParams

__all__ = ["ConfigError", "InitSpec", "ScenarioConfig", "parse_config", "load_config"]


class ConfigError(ValueError):
    """Malformed or inconsistent scenario configuration."""


DEFAULTS = {
    "theory.kind": "maxwell",
    "theory.algebra": "",
    "theory.degree": "1",
    "chart.sizes": "8,8,8",
    "chart.length": "1.0",
    "chart.spacings": "",
    "chart.boundary": "periodic",
    "chart.signature": "",
    "init.kind": "zero",
    "init.k": "",
    "init.eps": "",
    "init.amplitude": "1.0",
    "init.cutoff": "1",
    "init.zero_mean": "false",
    "init.path": "",
    "flow.step_size": "",
    "flow.max_iters": "50000",
    "flow.residual_tol": "1e-6",
    "flow.gauge_penalty": "0.0",
    "flow.divergence_window": "10",
    "run.seed": "0",
    "run.out": "out",
    "verify.suites": "calculus",
    "sweep.residual": "wave",
    "sweep.levels": "3",
    "reconstruct.input": "",
    "reconstruct.origin": "",
    "reconstruct.compat_tol": "1e-9",
    "reconstruct.interpolation": "cubic",
    "reconstruct.tol": "0.05",
    "reconstruct.loop": "",
    "reconstruct.loop_origin": "",
    "noether.generators": "20",
    "noether.levels": "1",
    "noether.tol": "1e-10",
}

INIT_KINDS = ("zero", "plane_wave", "random", "file")


@dataclass(frozen=True)
class InitSpec:
    kind: str = "zero"
    k: tuple = ()
    eps: tuple = ()
    amplitude: float = 1.0
    cutoff: int = 1
    zero_mean: bool = False
    path: str = ""

    def plane_wave(self) -> PlaneWave:
        return PlaneWave(self.k, self.eps, self.amplitude)


@dataclass(frozen=True)
class ScenarioConfig:
    theory: Theory
    chart: LatticeChart
    init: InitSpec
    flow: FlowParams
    seed: int = 0
    out: str = "out"
    suites: tuple = ("calculus",)
    sweep_residual: str = "wave"
    sweep_levels: int = 3
    reconstruct: dict = field(default_factory=dict)
    noether: dict = field(default_factory=dict)
    explicit: frozenset = frozenset()

    def initial_field(self, rng=None):
        """Initial field (a pair for ``broken_product``) drawn from ``rng`` (seeded from ``seed`` if omitted)."""
        rng = rng if rng is not None else np.random.default_rng(self.seed)
        if self.theory.kind == "broken_product":
            return (self._one(rng, SU2, 1), self._one(rng, U1, 1))
        return self._one(rng, self.theory.algebra, self.theory.degree)

    def _one(self, rng, algebra, degree):
        c, init = self.chart, self.init
        if init.kind == "zero":
            return FormField.zeros(c, degree, algebra)
        if init.kind == "plane_wave":
            A = init.plane_wave().sample(c)
            if algebra is SU2:
                zeros = np.zeros_like(A.data)
                return FormField(c, 1, np.concatenate([zeros, zeros, A.data], axis=1), SU2)
            return A
        if init.kind == "random":
            periods = None if c.periodic else tuple(4.0 * L for L in c.lengths)
            return SmoothForm.random(rng, c, degree, algebra, amplitude=init.amplitude, cutoff=init.cutoff,
                                     periods=periods, zero_mean=init.zero_mean).sample(c)
        from .io import read_snapshot

        A = read_snapshot(init.path)
        if not isinstance(A, FormField) or A.chart != c or A.algebra != algebra or A.degree != degree:
            raise ConfigError(f"snapshot {init.path} does not match the configured chart and theory")
        return A


def _floats(text, key):
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise ConfigError(f"{key}: expected comma-separated numbers, got {text!r}") from exc


def _ints(text, key):
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise ConfigError(f"{key}: expected comma-separated integers, got {text!r}") from exc


def _scalar(cast, raw, key):
    try:
        return cast(raw[key])
    except ValueError as exc:
        raise ConfigError(f"{key}: cannot parse {raw[key]!r}") from exc


def _bool(text, key):
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {text!r}")


def _read_pairs(text: str) -> dict:
    parser = configparser.ConfigParser(delimiters=("=",), comment_prefixes=("#",), inline_comment_prefixes=None,
                                       interpolation=None, strict=True)
    try:
        parser.read_string("[scenario]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    return dict(parser["scenario"])


def parse_config(text: str, overrides: dict | None = None) -> ScenarioConfig:
    pairs = _read_pairs(text)
    pairs.update({k: str(v) for k, v in (overrides or {}).items()})
    unknown = sorted(set(pairs) - set(DEFAULTS))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    raw = {**DEFAULTS, **pairs}

    sizes = _ints(raw["chart.sizes"], "chart.sizes")
    if not raw["chart.spacings"]:
        length = _scalar(float, raw, "chart.length")
        periodic = raw["chart.boundary"] == "periodic"
        spacings = tuple(length / (n if periodic else n - 1) for n in sizes)
    else:
        spacings = _floats(raw["chart.spacings"], "chart.spacings")
    signature = raw["chart.signature"] or "+" * len(sizes)
    try:
        chart = LatticeChart(sizes, spacings, raw["chart.boundary"], signature)
    except ValueError as exc:
        raise ConfigError(f"chart: {exc}") from exc

    kind = raw["theory.kind"]
    if kind not in KINDS:
        raise ConfigError(f"theory.kind must be one of {KINDS}, got {kind!r}")
    default_alg = "su2" if kind in ("yang_mills", "broken_product") else "u1"
    try:
        algebra = algebra_by_name(raw["theory.algebra"] or default_alg)
        theory = Theory(kind, chart, _scalar(int, raw, "theory.degree"), algebra)
    except ValueError as exc:
        raise ConfigError(f"theory: {exc}") from exc

    init_kind = raw["init.kind"]
    if init_kind not in INIT_KINDS:
        raise ConfigError(f"init.kind must be one of {INIT_KINDS}, got {init_kind!r}")
    init = InitSpec(init_kind, _floats(raw["init.k"], "init.k"), _floats(raw["init.eps"], "init.eps"),
                    _scalar(float, raw, "init.amplitude"), _scalar(int, raw, "init.cutoff"),
                    _bool(raw["init.zero_mean"], "init.zero_mean"), raw["init.path"])
    if init_kind == "plane_wave":
        _check_plane_wave(init, chart, theory)
    if init_kind == "file" and not init.path:
        raise ConfigError("init.kind = file needs init.path")
    if init_kind == "random" and not init.amplitude >= 0:
        raise ConfigError("init.amplitude must be nonnegative")

    try:
        step = raw["flow.step_size"]
        flow = FlowParams(step_size=float(step) if step else None,
                          max_iters=_scalar(int, raw, "flow.max_iters"),
                          residual_tol=_scalar(float, raw, "flow.residual_tol"),
                          gauge_penalty=_scalar(float, raw, "flow.gauge_penalty"),
                          seed=_scalar(int, raw, "run.seed"),
                          divergence_window=_scalar(int, raw, "flow.divergence_window"))
        flow.resolve_step(chart)
    except ValueError as exc:
        raise ConfigError(f"flow: {exc}") from exc

    suites = tuple(s.strip() for s in raw["verify.suites"].split(",") if s.strip())
    recon = {
        "input": raw["reconstruct.input"],
        "origin": _ints(raw["reconstruct.origin"], "reconstruct.origin") or None,
        "compat_tol": _scalar(float, raw, "reconstruct.compat_tol"),
        "interpolation": raw["reconstruct.interpolation"],
        "tol": _scalar(float, raw, "reconstruct.tol"),
        "loop": raw["reconstruct.loop"],
        "loop_origin": _ints(raw["reconstruct.loop_origin"], "reconstruct.loop_origin") or None,
    }
    noether = {
        "generators": _scalar(int, raw, "noether.generators"),
        "levels": _scalar(int, raw, "noether.levels"),
        "tol": _scalar(float, raw, "noether.tol"),
    }
    if noether["generators"] < 1 or noether["levels"] < 1:
        raise ConfigError("noether.generators and noether.levels must be positive")
    return ScenarioConfig(theory, chart, init, flow, seed=_scalar(int, raw, "run.seed"), out=raw["run.out"],
                          suites=suites, sweep_residual=raw["sweep.residual"],
                          sweep_levels=_scalar(int, raw, "sweep.levels"), reconstruct=recon, noether=noether,
                          explicit=frozenset(pairs))


def _check_plane_wave(init: InitSpec, chart: LatticeChart, theory: Theory):
    if len(init.k) != chart.dim or len(init.eps) != chart.dim:
        raise ConfigError("init.k and init.eps need one entry per chart axis")
    if theory.kind == "kform" and theory.degree != 1:
        raise ConfigError("plane-wave initial data is a 1-form")
    if chart.periodic:
        for k, L in zip(init.k, chart.lengths):
            if abs(k * L / (2 * np.pi) - round(k * L / (2 * np.pi))) > 1e-9:
                raise ConfigError("plane-wave wave numbers must be periodic on the chart")
    cons = init.plane_wave().constraints(chart.signature)
    scale = max(1.0, float(np.dot(init.k, init.k)))
    if abs(cons["k_dot_eps"]) > 1e-12 * scale:
        raise ConfigError(f"plane wave violates g(k, eps) = 0 (got {cons['k_dot_eps']!r})")
    if not chart.signature.euclidean_like and abs(cons["k_dot_k"]) > 1e-12 * scale:
        raise ConfigError(f"plane wave on a Lorentzian chart needs a null wave vector (g(k, k) = {cons['k_dot_k']!r})")


def load_config(path, overrides: dict | None = None) -> ScenarioConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, overrides)
