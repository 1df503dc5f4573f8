"""Benchmark plants and named simulation scenarios.

The two flexible-link transfer functions are stored digit-for-digit as
published; ``known_nmp_zeros`` are the documented right-half-plane zero
locations.  Scenarios bundle a plant with a canceller configuration, a
controller, and simulation/sweep settings, and can be saved to or loaded
from JSON files with a flat, explicit field layout::

    {
      "plant": "example1",            // or {"name": ..., "num_coeffs": [...],
                                      //     "den_coeffs": [...]}
      "zeros": [8.2057],
      "nu": [20],
      "kp": 0.1, "ki": 0.0, "kd": 0.5,
      "lambda": 1.0, "mu": 1.0,
      "horizon_s": 60.0,
      "n_points": 2000,
      "band_lo": 0.001, "band_hi": 1000.0
    }
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable

from .fotf import FOTF, CancellerSpec, ControllerSpec, LoopModel

__all__ = [
    "PlantModel",
    "Scenario",
    "ScenarioError",
    "plant_example1",
    "plant_example2",
    "plants",
    "get_plant",
    "builtin_scenarios",
    "get_scenario",
    "load_scenario",
    "save_scenario",
    "scenario_from_dict",
    "scenario_to_dict",
]


class ScenarioError(ValueError):
    """Scenario validation failure, carrying the offending field path."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


@dataclass(frozen=True)
class PlantModel:
    """Integer-order plant as descending coefficient lists."""

    name: str
    num_coeffs: tuple[float, ...]
    den_coeffs: tuple[float, ...]
    known_nmp_zeros: tuple[float, ...] = ()

    def __post_init__(self):
        if not self.num_coeffs or not self.den_coeffs:
            raise ValueError("coefficient lists must be nonempty")
        if self.den_coeffs[0] == 0:
            raise ValueError("denominator leading coefficient must be nonzero")

    def tf(self) -> FOTF:
        return FOTF.from_coeffs(self.num_coeffs, self.den_coeffs)


def plant_example1() -> PlantModel:
    """One-link flexible robot arm with a single RHP zero and an integrator."""
    return PlantModel(
        name="example1",
        num_coeffs=(-4.906, -0.5884, 335.17),
        den_coeffs=(1.0, 0.55437, 139.6, 27.91, 0.0),
        known_nmp_zeros=(8.2057,),
    )


def plant_example2() -> PlantModel:
    """Identified flexible-link manipulator with three RHP zeros."""
    return PlantModel(
        name="example2",
        num_coeffs=(
            -14340.4953,
            0.4446e7,
            0.5697e9,
            -0.1908e11,
            -0.9354e12,
            0.6919e13,
            0.2839e15,
        ),
        den_coeffs=(
            1.0,
            486.7,
            69317.7,
            0.1616e8,
            0.1062e10,
            0.6167e11,
            0.2624e13,
            0.3595e14,
            0.142e15,
            0.0,
        ),
        known_nmp_zeros=(19.9982, 45.0015, 400.0282),
    )


def plants() -> dict[str, PlantModel]:
    """Registry of built-in plants keyed by name."""
    models = (plant_example1(), plant_example2())
    return {m.name: m for m in models}


def get_plant(name: str) -> PlantModel:
    registry = plants()
    try:
        return registry[name]
    except KeyError:
        raise KeyError(
            f"unknown plant {name!r}; available: {sorted(registry)}"
        ) from None


@dataclass(frozen=True)
class Scenario:
    """A plant plus loop configuration and simulation settings."""

    name: str
    plant: PlantModel
    canceller: CancellerSpec
    controller: ControllerSpec
    horizon_s: float
    n_points: int
    band: tuple[float, float] = (1e-3, 1e3)

    def __post_init__(self):
        if not self.horizon_s > 0:
            raise ValueError("horizon must be positive")
        if self.n_points < 2:
            raise ValueError("n_points must be at least 2")
        lo, hi = self.band
        if not (0 < lo < hi):
            raise ValueError("band must satisfy 0 < lo < hi")

    def loop_model(self) -> LoopModel:
        return LoopModel(
            plant=self.plant.tf(),
            canceller=self.canceller,
            controller=self.controller,
        )

    def with_nu(self, nu) -> "Scenario":
        """Copy with replaced cancellation degrees (scalar or per-zero)."""
        return Scenario(
            name=self.name,
            plant=self.plant,
            canceller=self.canceller.with_nu(nu),
            controller=self.controller,
            horizon_s=self.horizon_s,
            n_points=self.n_points,
            band=self.band,
        )


def builtin_scenarios() -> dict[str, Scenario]:
    """Named scenarios for the published step-response experiments.

    Horizons are chosen so every response settles well inside the window
    (60 s for the example1 loops, 10 s for example2).
    """
    ex1 = plant_example1()
    ex2 = plant_example2()
    out = {
        "ex1-fig3": Scenario(
            name="ex1-fig3",
            plant=ex1,
            canceller=CancellerSpec([(8.2057, 20)]),
            controller=ControllerSpec(kp=0.1, ki=0.0, kd=0.5),
            horizon_s=60.0,
            n_points=2000,
        ),
        "ex1-fig4": Scenario(
            name="ex1-fig4",
            plant=ex1,
            canceller=CancellerSpec([(8.2057, 2)]),
            controller=ControllerSpec(kp=0.05, ki=0.0, kd=0.05),
            horizon_s=60.0,
            n_points=2000,
        ),
        "ex2-fig5": Scenario(
            name="ex2-fig5",
            plant=ex2,
            canceller=CancellerSpec(
                [(19.9982, 5), (45.0015, 5), (400.0282, 5)]
            ),
            controller=ControllerSpec(kp=5.0, ki=0.0, kd=2.0),
            horizon_s=10.0,
            n_points=2000,
        ),
    }
    return out


def get_scenario(name: str) -> Scenario:
    registry = builtin_scenarios()
    try:
        return registry[name]
    except KeyError:
        raise KeyError(
            f"unknown scenario {name!r}; available: {sorted(registry)}"
        ) from None


# ---------------------------------------------------------------------------
# JSON (de)serialization


def _expect(data: dict, field: str, types, where: str = ""):
    path = f"{where}{field}"
    if field not in data:
        raise ScenarioError(path, "missing required field")
    value = data[field]
    if not isinstance(value, types):
        names = (
            types.__name__
            if isinstance(types, type)
            else "/".join(t.__name__ for t in types)
        )
        raise ScenarioError(path, f"expected {names}, got {type(value).__name__}")
    return value


def _number(data: dict, field: str, where: str = "") -> float:
    value = _expect(data, field, (int, float), where)
    if isinstance(value, bool):
        raise ScenarioError(f"{where}{field}", "expected a number, got bool")
    return float(value)


def scenario_from_dict(data: dict[str, Any], name: str = "custom") -> Scenario:
    """Validate and build a scenario; errors carry field paths."""
    if not isinstance(data, dict):
        raise ScenarioError("$", "scenario body must be an object")

    plant_field = _expect(data, "plant", (str, dict))
    if isinstance(plant_field, str):
        try:
            plant = get_plant(plant_field)
        except KeyError as exc:
            raise ScenarioError("plant", str(exc)) from None
    else:
        pname = _expect(plant_field, "name", str, "plant.")
        num = _expect(plant_field, "num_coeffs", list, "plant.")
        den = _expect(plant_field, "den_coeffs", list, "plant.")
        zeros = plant_field.get("known_nmp_zeros", [])
        try:
            plant = PlantModel(
                name=pname,
                num_coeffs=tuple(float(x) for x in num),
                den_coeffs=tuple(float(x) for x in den),
                known_nmp_zeros=tuple(float(x) for x in zeros),
            )
        except (TypeError, ValueError) as exc:
            raise ScenarioError("plant", str(exc)) from None

    zeros = _expect(data, "zeros", list)
    nus = _expect(data, "nu", list)
    if len(zeros) != len(nus):
        raise ScenarioError("nu", f"expected {len(zeros)} entries to match zeros[]")
    entries = []
    for i, (z, nu) in enumerate(zip(zeros, nus)):
        if not isinstance(z, (int, float)) or isinstance(z, bool) or not z > 0:
            raise ScenarioError(f"zeros[{i}]", "must be a positive number")
        if not isinstance(nu, int) or isinstance(nu, bool) or nu < 1:
            raise ScenarioError(f"nu[{i}]", "must be an integer >= 1")
        entries.append((float(z), nu))
    try:
        spec = CancellerSpec(entries)
    except ValueError as exc:
        raise ScenarioError("zeros", str(exc)) from None

    kp = _number(data, "kp")
    ki = _number(data, "ki") if "ki" in data else 0.0
    kd = _number(data, "kd") if "kd" in data else 0.0
    lam = _number(data, "lambda") if "lambda" in data else 1.0
    mu = _number(data, "mu") if "mu" in data else 1.0
    try:
        controller = ControllerSpec(kp=kp, ki=ki, kd=kd, lam=lam, mu=mu)
    except ValueError as exc:
        msg = str(exc)
        field = "lambda" if "lambda" in msg else ("mu" if "mu" in msg else "kp")
        raise ScenarioError(field, msg) from None

    horizon = _number(data, "horizon_s")
    if not horizon > 0:
        raise ScenarioError("horizon_s", "must be positive")
    n_points = _expect(data, "n_points", int)
    if n_points < 2:
        raise ScenarioError("n_points", "must be an integer >= 2")
    band_lo = _number(data, "band_lo") if "band_lo" in data else 1e-3
    band_hi = _number(data, "band_hi") if "band_hi" in data else 1e3
    if not (0 < band_lo < band_hi):
        raise ScenarioError("band_lo", "band must satisfy 0 < band_lo < band_hi")

    return Scenario(
        name=str(data.get("name", name)),
        plant=plant,
        canceller=spec,
        controller=controller,
        horizon_s=horizon,
        n_points=n_points,
        band=(band_lo, band_hi),
    )


def scenario_to_dict(sc: Scenario, inline_plant: bool = False) -> dict[str, Any]:
    """Flat JSON-ready representation using the documented field names."""
    plant: Any
    if inline_plant or sc.plant.name not in plants():
        plant = {
            "name": sc.plant.name,
            "num_coeffs": list(sc.plant.num_coeffs),
            "den_coeffs": list(sc.plant.den_coeffs),
            "known_nmp_zeros": list(sc.plant.known_nmp_zeros),
        }
    else:
        plant = sc.plant.name
    return {
        "name": sc.name,
        "plant": plant,
        "zeros": [z for z, _ in sc.canceller.entries],
        "nu": [nu for _, nu in sc.canceller.entries],
        "kp": sc.controller.kp,
        "ki": sc.controller.ki,
        "kd": sc.controller.kd,
        "lambda": float(sc.controller.lam),
        "mu": float(sc.controller.mu),
        "horizon_s": sc.horizon_s,
        "n_points": sc.n_points,
        "band_lo": sc.band[0],
        "band_hi": sc.band[1],
    }


def load_scenario(path) -> Scenario:
    """Load and validate a scenario JSON file."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError("$", f"not valid JSON: {exc}") from None
    return scenario_from_dict(data, name=Path(path).stem)


def save_scenario(sc: Scenario, path) -> None:
    Path(path).write_text(
        json.dumps(scenario_to_dict(sc), indent=2) + "\n", encoding="utf-8"
    )
