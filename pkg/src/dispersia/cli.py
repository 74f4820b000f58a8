"""Batch front end: scene configs in, JSON/CSV reports and figures out.

Exit codes: 0 success, 2 configuration or capability error, 3 numeric
failure (including any failed sweep row).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import replace
from datetime import datetime, timezone
from pathlib import Path

from . import __version__, analytic
from .config import (
    ConfigError, SceneConfig, config_to_dict, parse_config,
)
from .forces import SweepSpec, run_sweep
from .geometry import Box, HalfSpace, PointParticle, Scene, Sphere
from .integrator import (
    IntegratorSettings, default_workers, monte_carlo_oracle, pair_energy,
)
from .materials import (
    B_METAL_METAL, dilute_gas, pair_coupling, perfect_metal,
)

_CSV_COLUMNS = ("parameter", "energy", "force", "rel_error", "backend",
                "kernel_exponent")


def _preset_casimir_plates():
    """Metal slab pair, L = D = a = 1, plus the plate-limit comparison.

    The numeric scene widens slab 2 laterally so the unit cell of slab 1
    faces an effectively unbounded partner; in that configuration the
    plate-limit closed form is exact per unit area, which is what the
    coefficient comparison is about.
    """
    metal = perfect_metal()
    slab1 = Box((-0.5, -0.5, -1.0), (0.5, 0.5, 0.0))
    slab2 = Box((-0.5, -0.5, 1.0), (0.5, 0.5, 2.0))
    scene = Scene(slab1, slab2, metal, metal)
    wide = Box((-8.5, -8.5, 1.0), (8.5, 8.5, 2.0))
    numeric_scene = Scene(slab1, wide, metal, metal)
    plate = 1035.0 / (7680.0 * math.pi**2)
    casimir = math.pi**2 / 720.0
    comparison = {
        "plate_limit_coefficient": plate,
        "casimir_coefficient": casimir,
        "coefficient_ratio": plate / casimir,
        "display": f"-{plate:.4g} vs -{casimir:.4g} (hbar c L^2 / a^3)",
    }
    cfg = SceneConfig(scene=scene, settings=IntegratorSettings(),
                      sweep=SweepSpec("gap", [1.0, 1.5, 2.0, 3.0], "analytic"))
    return cfg, comparison, numeric_scene


def _preset_sphere_plate():
    metal = perfect_metal()
    scene = Scene(Sphere((0.0, 0.0, 2.0), 1.0),
                  HalfSpace((0.0, 0.0, 1.0), 0.0), metal, metal)
    coeff = B_METAL_METAL * math.pi**2 / 30.0
    bd = 1.0 / (8.0 * math.pi)
    comparison = {
        "sphere_plate_coefficient": coeff,
        "balian_duplantier_coefficient": bd,
        "coefficient_ratio": coeff / bd,
        "display": f"{coeff:.4g} vs reference {bd:.4g}",
    }
    cfg = SceneConfig(scene=scene, settings=IntegratorSettings(),
                      sweep=SweepSpec("gap", [1.0, 1.5, 2.0, 3.0], "analytic"))
    return cfg, comparison, None


def _preset_molecule_pair():
    gas = dilute_gas(1.0, 1.0)
    scene = Scene(PointParticle((0.0, 0.0, 0.0), 1.0),
                  PointParticle((0.0, 0.0, 2.0), 1.0), gas, gas)
    comparison = {
        "molecule_pair_constant": 23.0 / (4.0 * math.pi),
        "display": f"U = -{23.0 / (4.0 * math.pi):.6f} alpha1 alpha2 / r^7 (hbar c)",
    }
    cfg = SceneConfig(scene=scene, settings=IntegratorSettings(),
                      sweep=SweepSpec("gap", [1.0, 2.0, 4.0], "analytic"))
    return cfg, comparison, None


PRESETS = {
    "casimir-plates": _preset_casimir_plates,
    "sphere-plate": _preset_sphere_plate,
    "molecule-pair": _preset_molecule_pair,
}


def _finite(scene: Scene) -> bool:
    return not any(isinstance(b, HalfSpace) for b in (scene.body1, scene.body2))


def run_report(cfg: SceneConfig, out_dir: Path, *, preset: str | None = None,
               comparison: dict | None = None, numeric_scene: Scene | None = None,
               analytic_only: bool = False, numeric_only: bool = False,
               mc_samples: int = 0, seed: int = 0,
               workers: int | None = None) -> int:
    """Evaluate a config and write report.json (+ sweep.csv/.png). Returns exit code."""
    out_dir.mkdir(parents=True, exist_ok=True)
    scene = cfg.scene
    coupling = pair_coupling(scene.material1, scene.material2)
    results: dict = {}
    code = 0

    if not numeric_only:
        try:
            results["analytic"] = {"energy": analytic.scene_energy(scene)}
        except analytic.NoAnalyticFormError as exc:
            results["analytic"] = {"error": f"no analytic form: {exc}"}
            if analytic_only:
                print(f"error: no analytic form: {exc}", file=sys.stderr)
                return 2

    if not analytic_only:
        nscene = numeric_scene if numeric_scene is not None else scene
        est = pair_energy(nscene, cfg.settings, workers=workers)
        results["numeric"] = {
            "energy": est.value,
            "rel_error_estimate": est.rel_error_estimate,
            "kernel_evaluations": est.kernel_evaluations,
            "tree_depth_used": est.tree_depth_used,
            "warning": est.warning,
        }
        if mc_samples > 0:
            if _finite(nscene):
                mc = monte_carlo_oracle(nscene, mc_samples, seed)
                results["monte_carlo"] = {
                    "energy": mc.value,
                    "rel_error_estimate": mc.rel_error_estimate,
                    "samples": mc_samples,
                    "seed": seed,
                }
            else:
                results["monte_carlo"] = {
                    "error": "half-space scene: oracle needs finite bodies"}

    rows = []
    if cfg.sweep is not None:
        sweep_backend = cfg.sweep.backend
        if analytic_only and sweep_backend != "analytic":
            sweep_backend = "analytic"
        if numeric_only and sweep_backend != "integrator":
            sweep_backend = "integrator"
        spec = SweepSpec(cfg.sweep.parameter, list(cfg.sweep.values), sweep_backend)
        rows = run_sweep(spec, scene, cfg.settings, workers=workers)
        if any(r.status != "ok" for r in rows):
            code = 3
        csv_path = out_dir / "sweep.csv"
        with open(csv_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(_CSV_COLUMNS)
            for r in rows:
                w.writerow([f"{r.parameter:.17e}", f"{r.energy:.17e}",
                            f"{r.force:.17e}", f"{r.rel_error:.17e}",
                            r.backend, r.kernel_exponent])
        ok_rows = [r for r in rows if r.status == "ok"]
        if ok_rows:
            from .plotting import render_sweep_figure
            render_sweep_figure(ok_rows, cfg.sweep.parameter,
                                str(out_dir / "sweep.png"))

    report = {
        "tool": {"name": "dispersia", "version": __version__},
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "preset": preset,
        "config": config_to_dict(cfg),
        "units": {"mode": scene.units.mode, "length_unit": scene.units.length_unit,
                  "energy_scale": scene.units.hbar_c},
        "kernel_exponent": scene.n,
        "coupling": {"b12": f"{coupling.b12:.12g}", "a12": f"{coupling.a12:.12g}"},
        "seed": seed,
        "results": results,
        "comparison": comparison,
        "sweep": [{"parameter": r.parameter, "energy": r.energy, "force": r.force,
                   "rel_error": r.rel_error, "backend": r.backend,
                   "kernel_exponent": r.kernel_exponent, "status": r.status}
                  for r in rows],
    }
    with open(out_dir / "report.json", "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True, allow_nan=True)
        fh.write("\n")
    return code


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dispersia",
        description="Retarded dispersion energies and forces between "
                    "macroscopic bodies by pairwise volume-element summation.")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", type=Path, help="scene configuration (JSON)")
    src.add_argument("--preset", choices=sorted(PRESETS),
                     help="built-in benchmark scene")
    p.add_argument("--analytic-only", action="store_true",
                   help="closed forms only, skip the numeric integrator")
    p.add_argument("--numeric-only", action="store_true",
                   help="numeric integrator only, skip closed forms")
    p.add_argument("--out", type=Path, default=Path("."),
                   help="output directory for report files")
    p.add_argument("--theta", type=float, help="admissibility parameter")
    p.add_argument("--max-depth", type=int, help="octree depth limit")
    p.add_argument("--target-rel-error", type=float,
                   help="relative error target (warning threshold)")
    p.add_argument("--mc-samples", type=int, default=0,
                   help="also run the Monte Carlo oracle with this many samples")
    p.add_argument("--seed", type=int, default=0, help="oracle RNG seed")
    return p


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.analytic_only and args.numeric_only:
        print("error: --analytic-only and --numeric-only are mutually exclusive",
              file=sys.stderr)
        return 2

    comparison = None
    numeric_scene = None
    preset = args.preset
    try:
        if preset:
            cfg, comparison, numeric_scene = PRESETS[preset]()
        else:
            cfg = parse_config(args.config.read_text())
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return 2

    st = cfg.settings
    overrides = {}
    if args.theta is not None:
        overrides["theta"] = args.theta
    if args.max_depth is not None:
        overrides["max_depth"] = args.max_depth
    if args.target_rel_error is not None:
        overrides["target_rel_error"] = args.target_rel_error
    if overrides:
        try:
            st = replace(st, **overrides)
        except ValueError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return 2
    cfg = SceneConfig(scene=cfg.scene, settings=st, sweep=cfg.sweep)

    try:
        return run_report(
            cfg, args.out, preset=preset, comparison=comparison,
            numeric_scene=numeric_scene, analytic_only=args.analytic_only,
            numeric_only=args.numeric_only, mc_samples=args.mc_samples,
            seed=args.seed, workers=default_workers())
    except (ValueError, NotImplementedError, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"cannot write report: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
