"""JSON scene configuration: strict parsing, defaulting, serialization."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .forces import SweepSpec
from .geometry import Body, Box, HalfSpace, PointParticle, Scene, Sphere
from .integrator import IntegratorSettings
from .materials import Material, UnitSystem, dilute_gas, perfect_metal, vacuum

_NAMED_MATERIALS = {
    "perfect_metal": perfect_metal,
    "vacuum": vacuum,
}


class ConfigError(ValueError):
    """Configuration problem, annotated with the offending field path."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


@dataclass(frozen=True)
class SceneConfig:
    scene: Scene
    settings: IntegratorSettings
    sweep: SweepSpec | None = None


def _check_keys(obj: dict, allowed: set[str], path: str):
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(path, f"unknown field(s): {', '.join(sorted(unknown))}")


def _require(obj: dict, key: str, path: str):
    if key not in obj:
        raise ConfigError(f"{path}.{key}", "missing required field")
    return obj[key]


def _vec(v, path) -> tuple[float, float, float]:
    if not (isinstance(v, (list, tuple)) and len(v) == 3):
        raise ConfigError(path, f"expected a 3-vector, got {v!r}")
    return tuple(float(c) for c in v)


def _parse_body(obj, path: str) -> Body:
    if not isinstance(obj, dict):
        raise ConfigError(path, "body must be an object")
    kind = _require(obj, "type", path)
    try:
        if kind == "box":
            _check_keys(obj, {"type", "min", "max"}, path)
            return Box(_vec(_require(obj, "min", path), f"{path}.min"),
                       _vec(_require(obj, "max", path), f"{path}.max"))
        if kind == "sphere":
            _check_keys(obj, {"type", "center", "radius"}, path)
            return Sphere(_vec(_require(obj, "center", path), f"{path}.center"),
                          float(_require(obj, "radius", path)))
        if kind == "half_space":
            _check_keys(obj, {"type", "normal", "offset"}, path)
            return HalfSpace(_vec(_require(obj, "normal", path), f"{path}.normal"),
                             float(_require(obj, "offset", path)))
        if kind == "point":
            _check_keys(obj, {"type", "position", "volume"}, path)
            return PointParticle(
                _vec(_require(obj, "position", path), f"{path}.position"),
                float(_require(obj, "volume", path)))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from exc
    raise ConfigError(f"{path}.type", f"unknown body type {kind!r}")


def _parse_material(obj, path: str) -> Material:
    if isinstance(obj, str):
        if obj not in _NAMED_MATERIALS:
            raise ConfigError(path, f"unknown material name {obj!r}")
        return _NAMED_MATERIALS[obj]()
    if not isinstance(obj, dict):
        raise ConfigError(path, "material must be a name or an object")
    try:
        if "number_density" in obj or "alpha0" in obj:
            _check_keys(obj, {"number_density", "alpha0"}, path)
            return dilute_gas(float(_require(obj, "number_density", path)),
                              float(_require(obj, "alpha0", path)))
        _check_keys(obj, {"epsilon0", "mu0"}, path)
        eps = obj.get("epsilon0", 1.0)
        eps = math.inf if eps in ("inf", "Infinity") else float(eps)
        return Material(epsilon0=eps, mu0=float(obj.get("mu0", 1.0)))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from exc


def _parse_units(obj, path: str) -> UnitSystem:
    if obj is None or obj == "natural":
        return UnitSystem()
    if isinstance(obj, dict):
        _check_keys(obj, {"mode", "length_unit"}, path)
        try:
            return UnitSystem(mode=obj.get("mode", "natural"),
                              length_unit=float(obj.get("length_unit", 1.0)))
        except ValueError as exc:
            raise ConfigError(path, str(exc)) from exc
    raise ConfigError(path, f"units must be 'natural' or an object, got {obj!r}")


def parse_config(text: str | bytes) -> SceneConfig:
    """Parse and fully validate a JSON scene configuration."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("<syntax>", f"invalid JSON at line {exc.lineno}: {exc.msg}")
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "configuration must be a JSON object")
    _check_keys(raw, {"body1", "body2", "material1", "material2",
                      "kernel_exponent", "units", "integrator", "sweep"}, "<root>")

    body1 = _parse_body(_require(raw, "body1", "<root>"), "body1")
    body2 = _parse_body(_require(raw, "body2", "<root>"), "body2")
    mat1 = _parse_material(_require(raw, "material1", "<root>"), "material1")
    mat2 = _parse_material(_require(raw, "material2", "<root>"), "material2")
    units = _parse_units(raw.get("units"), "units")
    n = raw.get("kernel_exponent", 7)
    if n not in (6, 7):
        raise ConfigError("kernel_exponent", f"must be 6 or 7, got {n!r}")
    try:
        scene = Scene(body1=body1, body2=body2, material1=mat1, material2=mat2,
                      n=n, units=units)
    except (ValueError, NotImplementedError) as exc:
        raise ConfigError("<scene>", str(exc)) from exc

    integ = raw.get("integrator", {})
    if not isinstance(integ, dict):
        raise ConfigError("integrator", "must be an object")
    _check_keys(integ, {"theta", "max_depth", "target_rel_error",
                        "halfspace_truncation", "summation"}, "integrator")
    try:
        settings = IntegratorSettings(
            theta=float(integ.get("theta", 0.5)),
            max_depth=int(integ.get("max_depth", 10)),
            target_rel_error=float(integ.get("target_rel_error", 1e-3)),
            halfspace_truncation=float(integ.get("halfspace_truncation", 8.0)),
            summation=integ.get("summation", "compensated"))
    except ValueError as exc:
        raise ConfigError("integrator", str(exc)) from exc

    sweep = None
    if raw.get("sweep") is not None:
        sw = raw["sweep"]
        if not isinstance(sw, dict):
            raise ConfigError("sweep", "must be an object")
        _check_keys(sw, {"parameter", "values", "backend"}, "sweep")
        try:
            sweep = SweepSpec(parameter=_require(sw, "parameter", "sweep"),
                              values=[float(v) for v in _require(sw, "values", "sweep")],
                              backend=sw.get("backend", "analytic"))
        except ValueError as exc:
            raise ConfigError("sweep", str(exc)) from exc
    return SceneConfig(scene=scene, settings=settings, sweep=sweep)


def _body_to_dict(body: Body) -> dict:
    if isinstance(body, Box):
        return {"type": "box", "min": list(body.lo), "max": list(body.hi)}
    if isinstance(body, Sphere):
        return {"type": "sphere", "center": list(body.center), "radius": body.radius}
    if isinstance(body, HalfSpace):
        return {"type": "half_space", "normal": list(body.normal), "offset": body.offset}
    if isinstance(body, PointParticle):
        return {"type": "point", "position": list(body.position), "volume": body.dv}
    raise TypeError(f"not a body: {body!r}")


def _material_to_obj(m: Material):
    if m.model == "perfect-metal":
        return "perfect_metal"
    if m.model == "dilute-gas":
        return {"number_density": m.number_density, "alpha0": m.alpha0}
    if m.epsilon0 == 1.0 and m.mu0 == 1.0:
        return "vacuum"
    return {"epsilon0": m.epsilon0, "mu0": m.mu0}


def config_to_dict(cfg: SceneConfig) -> dict:
    sc, st = cfg.scene, cfg.settings
    out = {
        "body1": _body_to_dict(sc.body1),
        "body2": _body_to_dict(sc.body2),
        "material1": _material_to_obj(sc.material1),
        "material2": _material_to_obj(sc.material2),
        "kernel_exponent": sc.n,
        "units": ("natural" if sc.units.mode == "natural"
                  else {"mode": "SI", "length_unit": sc.units.length_unit}),
        "integrator": {
            "theta": st.theta,
            "max_depth": st.max_depth,
            "target_rel_error": st.target_rel_error,
            "halfspace_truncation": st.halfspace_truncation,
            "summation": st.summation,
        },
    }
    if cfg.sweep is not None:
        out["sweep"] = {"parameter": cfg.sweep.parameter,
                        "values": list(cfg.sweep.values),
                        "backend": cfg.sweep.backend}
    return out


def serialize_config(cfg: SceneConfig) -> str:
    return json.dumps(config_to_dict(cfg), indent=2, sort_keys=True)
