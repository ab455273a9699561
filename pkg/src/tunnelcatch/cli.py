"""Command-line frontend: ``tunnelcatch {spectrum,scan,evolve,detect}``.

Scenarios are JSON documents validated against ``scenario.schema.json``
before anything is computed.  Exit status: 0 success, 2 invalid input,
3 numerical failure, 4 nothing found.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field, replace
from functools import cached_property
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from . import dynamics, eigensolve, scanner, semiclassic, squarewell
from .errors import EXIT_OK, InputError, ScenarioError, TunnelCatchError, exit_code
from .experiment import Experiment
from .model import DoubleWellSpec, PhysicalWellSpec, SquareWellSpec


def _schema():
    text = resources.files("tunnelcatch").joinpath("scenario.schema.json").read_text()
    return json.loads(text)


def _fmt(x):
    return f"{x:.16e}"


@dataclass(frozen=True)
class Scenario:
    """A validated scenario document turned into library objects."""

    spec: DoubleWellSpec
    physical_level: int = 0
    energy: float | None = None
    probe_level: int = 0
    tune: bool = True
    points_per_hbar: float = eigensolve.DEFAULT_POINTS_PER_HBAR
    pad_factor: float = eigensolve.DEFAULT_PAD_FACTOR
    scan: dict = field(default_factory=dict)
    evolve: dict = field(default_factory=dict)

    @classmethod
    def from_document(cls, doc):
        try:
            jsonschema.validate(doc, _schema())
        except jsonschema.ValidationError as exc:
            where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
            raise ScenarioError(f"scenario error at {where}: {exc.message}") from None
        pw = doc["physical_well"]
        if pw["family"] == "harmonic_cap":
            if "omega" not in pw:
                raise ScenarioError("scenario error at physical_well: harmonic_cap needs 'omega'")
            support = tuple(pw["support"]) if "support" in pw else None
            left = PhysicalWellSpec.harmonic_cap(pw["depth"], pw["omega"], pw.get("center", 0.0), support)
        else:
            if "support" not in pw:
                raise ScenarioError("scenario error at physical_well: smooth_bump needs 'support'")
            left = PhysicalWellSpec.smooth_bump(pw["depth"], tuple(pw["support"]))
        pr = doc["probing_well"]
        spec = DoubleWellSpec(left, SquareWellSpec(pr["b"], pr["w"], pr["v"]), doc["hbar"])
        grid = doc.get("grid", {})
        return cls(spec, doc.get("physical_level", 0), doc.get("energy"), doc.get("probe_level", 0),
                   doc.get("tune", True), grid.get("points_per_hbar", eigensolve.DEFAULT_POINTS_PER_HBAR),
                   grid.get("pad_factor", eigensolve.DEFAULT_PAD_FACTOR), doc.get("scan", {}), doc.get("evolve", {}))

    @classmethod
    def load(cls, path):
        try:
            doc = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ScenarioError(f"cannot read scenario: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"scenario is not valid JSON: {exc}") from None
        return cls.from_document(doc)

    def with_hbar(self, hbar):
        return replace(self, spec=self.spec.with_hbar(hbar))

    @cached_property
    def experiment(self):
        return Experiment(self.spec, level=self.physical_level, k=self.probe_level,
                          h=self.spec.hbar / self.points_per_hbar, pad_factor=self.pad_factor)

    @property
    def E_l(self):
        """Physical energy: given in the scenario, else the grid eigenvalue."""
        return self.energy if self.energy is not None else self.experiment.E_l

    @property
    def omega_l(self):
        return eigensolve.classical_frequency(self.spec.left, self.E_l)

    def analytic_width(self):
        if not self.tune:
            return self.spec.right.w
        return squarewell.resonance_width(self.E_l, self.spec.right.v, self.spec.hbar, self.probe_level)

    def grid_width(self):
        return self.experiment.resonant_width if self.tune else self.spec.right.w


def _parse_range(text):
    try:
        lo, hi = (float(part) for part in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"range must look like lo:hi, got {text!r}") from None
    return lo, hi


def _out_dir(args):
    if args.out is None:
        return None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _two_level(sc, w):
    """Two-level prediction at width ``w`` from the analytic probing level and the WKB coupling."""
    spec = sc.spec.with_width(w)
    E_l = sc.E_l
    E_r = squarewell.solve_level(spec.right.v, w, spec.hbar, sc.probe_level)
    if E_r is None:
        raise InputError(f"probing well has no level k={sc.probe_level} at w={w}")
    delta = semiclassic.wkb_delta(spec, E_l, sc.omega_l)
    return semiclassic.two_level_spectrum(E_l, E_r, delta)


# -- spectrum ----------------------------------------------------------
def cmd_spectrum(sc, args):
    spec = sc.spec
    right = spec.right
    lines = [f"# hbar {_fmt(spec.hbar)}"]
    report = {"hbar": spec.hbar, "probing_levels": [], "physical_levels": []}

    grid = eigensolve.Grid.for_spec(spec, -0.5 * right.v, h=spec.hbar / sc.points_per_hbar,
                                    pad_factor=sc.pad_factor)
    levels = squarewell.solve_levels(right.v, right.w, spec.hbar)
    if levels:
        grid_levels = eigensolve.eigenvalues(eigensolve.discretize(right, grid, spec.hbar), 0, len(levels))
        lines.append("probing well: k  E_analytic  E_grid")
        for lv, eg in zip(levels, grid_levels):
            lines.append(f"  {lv.k}  {_fmt(lv.E)}  {_fmt(float(eg))}")
            report["probing_levels"].append({"k": lv.k, "E_analytic": lv.E, "E_grid": float(eg)})

    if sc.energy is None:
        op = eigensolve.discretize(spec.left, sc.experiment.grid, spec.hbar)
        n = eigensolve.count_below(op, 0.0)
        lines.append("physical well: n  E_grid")
        for i, E in enumerate(eigensolve.eigenvalues(op, 0, n)):
            lines.append(f"  {i}  {_fmt(float(E))}")
            report["physical_levels"].append({"n": i, "E_grid": float(E)})
    E_l = sc.E_l
    lines.append(f"E_l {_fmt(E_l)}")
    report["E_l"] = E_l

    if sc.energy is None:
        ex = sc.experiment
        w = sc.grid_width()
        E1, E2, Delta_grid = ex.pair_splitting(w)
        detuning = ex.E_r(w) - ex.E_l
        delta = ex.delta_wkb(w)
        predicted = math.hypot(delta, detuning)
        row = {"w": w, "E1": E1, "E2": E2, "Delta_grid": Delta_grid, "delta_wkb": delta,
               "delta_wronskian": ex.delta_wronskian(w), "detuning": detuning,
               "Delta_two_level": predicted, "ratio": Delta_grid / predicted}
        lines.append("double well: " + "  ".join(row))
        lines.append("  " + "  ".join(_fmt(v) for v in row.values()))
        report["double_well"] = row
    print("\n".join(lines))
    out = _out_dir(args)
    if out is not None:
        (out / "spectrum.json").write_text(json.dumps(report, indent=2) + "\n")
    return EXIT_OK


# -- scan ----------------------------------------------------------------
def _scan_settings(sc, args):
    settings = dict(sc.scan)
    if args.param is not None:
        settings["parameter"] = args.param
    if args.range is not None:
        settings["range"] = list(args.range)
    if args.samples is not None:
        settings["samples"] = args.samples
    if args.delta is not None:
        settings["delta"] = args.delta
    if "range" not in settings:
        raise InputError("no scan range given (scenario 'scan.range' or --range)")
    settings.setdefault("parameter", scanner.WIDTH)
    settings.setdefault("samples", 200)
    settings.setdefault("delta", "wkb")
    return settings


def _scan_kwargs(sc, settings):
    psi_l = None
    if settings["delta"] == "wronskian":
        if sc.energy is not None:
            raise InputError("the Wronskian coupling needs a computed physical state; drop 'energy'")
        psi_l = sc.experiment.left_state
    lo, hi = settings["range"]
    return dict(spec=sc.spec, parameter=settings["parameter"], lo=lo, hi=hi, n_samples=settings["samples"],
                E_l=sc.E_l, delta_fn=settings["delta"], psi_l=psi_l, omega_l=sc.omega_l)


def cmd_scan(sc, args):
    settings = _scan_settings(sc, args)
    curve = scanner.scan(**_scan_kwargs(sc, settings))
    out = _out_dir(args)
    if out is not None:
        curve.to_csv(out / "scan.csv")
        curve.write_peaks(out / "peaks.json")
    print(f"{len(curve.samples)} samples, {len(curve.peaks)} peaks")
    for p in curve.peaks:
        print(f"  k={p.k} param={_fmt(p.param_at_peak)} predicted={_fmt(p.predicted_param)} "
              f"P={_fmt(p.P_at_peak)} fwhm={_fmt(p.fwhm_param)}")
    return EXIT_OK


# -- evolve --------------------------------------------------------------
def cmd_evolve(sc, args):
    settings = dict(sc.evolve)
    for key in ("method", "t_final", "steps"):
        if getattr(args, key) is not None:
            settings[key] = getattr(args, key)
    method = settings.get("method", "two_level")
    steps = int(settings.get("steps", 400))
    detune = float(settings.get("detuning_in_delta", 0.0))
    if method == "two_level":
        result = _two_level(sc, sc.analytic_width())
        if detune:
            result = semiclassic.two_level_spectrum(result.E_l, result.E_l + detune * result.delta, result.delta)
        t_final = settings.get("t_final", math.pi * sc.spec.hbar / result.Delta)
        times = np.linspace(0.0, t_final, steps + 1)
        trace = dynamics.occupation_probabilities(result, result.alpha, times, sc.spec.hbar)
    else:
        ex = sc.experiment
        w = sc.grid_width()
        if detune:
            w = ex.width_for_detuning(detune * ex.delta_wronskian(w))
        Delta = ex.pair_splitting(w)[2]
        t_final = settings.get("t_final", 2.0 * math.pi * sc.spec.hbar / Delta)
        trace = dynamics.grid_propagate(ex.operator(w), ex.left_state, t_final, steps)
    out = _out_dir(args)
    if out is not None:
        trace.to_csv(out / "evolve.csv")
    print(f"method {method}  t_final {_fmt(trace.times[-1])}  max P_r {_fmt(trace.max_P_r)}  "
          f"final P_r {_fmt(float(trace.P_r[-1]))}")
    return EXIT_OK


# -- detect --------------------------------------------------------------
def cmd_detect(sc, args):
    settings = _scan_settings(sc, args)
    found = scanner.detect_energy(**_scan_kwargs(sc, settings))
    report = {
        "parameter": settings["parameter"],
        "param_at_peak": found.peak.param_at_peak,
        "v": found.v,
        "w": found.w,
        "E_exact": found.energy.exact,
        "E_series": found.energy.series,
        "delta": found.peak.delta,
    }
    E_true = sc.E_l
    report["E_l"] = E_true
    report["abs_error_exact"] = abs(found.energy.exact - E_true)
    report["within_2delta"] = bool(report["abs_error_exact"] <= 2.0 * found.peak.delta)
    out = _out_dir(args)
    if out is not None:
        found.curve.to_csv(out / "scan.csv")
        (out / "detect.json").write_text(json.dumps(report, indent=2) + "\n")
    for key, value in report.items():
        print(f"{key} {_fmt(value) if isinstance(value, float) else value}")
    return EXIT_OK


COMMANDS = {"spectrum": cmd_spectrum, "scan": cmd_scan, "evolve": cmd_evolve, "detect": cmd_detect}


def build_parser():
    parser = argparse.ArgumentParser(prog="tunnelcatch", description="Tunnel catch resonance toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", required=True, help="scenario JSON file")
    common.add_argument("--out", help="output directory")
    common.add_argument("--hbar", type=float, help="override the scenario's hbar")
    scan_flags = argparse.ArgumentParser(add_help=False)
    scan_flags.add_argument("--param", choices=scanner.PARAMETERS)
    scan_flags.add_argument("--range", type=_parse_range, help="lo:hi")
    scan_flags.add_argument("--samples", type=int)
    scan_flags.add_argument("--delta", choices=("wkb", "wronskian"), help="coupling formula")

    sub.add_parser("spectrum", parents=[common], help="isolated and double-well levels")
    sub.add_parser("scan", parents=[common, scan_flags], help="resonance scan of P_r^max")
    evolve = sub.add_parser("evolve", parents=[common], help="occupation dynamics")
    evolve.add_argument("--method", choices=("two_level", "grid"))
    evolve.add_argument("--t-final", dest="t_final", type=float)
    evolve.add_argument("--steps", type=int)
    sub.add_parser("detect", parents=[common, scan_flags], help="energy inference from the first peak")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        sc = Scenario.load(args.scenario)
        if args.hbar is not None:
            sc = sc.with_hbar(args.hbar)
        return COMMANDS[args.command](sc, args)
    except TunnelCatchError as exc:
        print(f"tunnelcatch: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
