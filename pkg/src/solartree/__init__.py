"""Evolving tree-shaped arrangements of sub-panels cut from a flat solar panel.

A 65x39 inch panel of 60 PV cells is cut along grid lines by a 16-bit mask
into up to 16 sub-plates; each plate gets a height, tilt and azimuth on a
tree. Fitness is simulated clear-sky plane-of-array power over a fixed
daily hour window, minus a 50 W penalty per conflicting plate pair. Three
evolutionary engines (steady-state GA, self-adaptive ES, EP) search the
layout space; a statistics harness compares the methods across seeded runs.
"""

from .evolution import (
    EpConfig,
    EsConfig,
    GaConfig,
    RunTrace,
    ep_run,
    es_run,
    ga_run,
    solar_objective,
    sphere_stub_objective,
)
from .fitness import (
    EvalResult,
    Genome,
    calibrate,
    calibrated_scenario,
    evaluate,
    flat_baseline,
    random_genome,
)
from .geometry import (
    ConflictRule,
    PanelSpec,
    PlacedPlate,
    SubPlate,
    count_conflicts,
    decode,
    resolve_cuts,
)
from .scene import Scene, SceneRect, build_scene
from .solar import (
    Irradiance,
    Scenario,
    SunPosition,
    clear_sky,
    default_scenario,
    plane_of_array,
    sun_position,
)
from .stats import ExperimentSummary, TTestResult, summarize, t_test_two_tailed

__version__ = "0.1.0"

__all__ = [
    "ConflictRule",
    "EpConfig",
    "EsConfig",
    "EvalResult",
    "ExperimentSummary",
    "GaConfig",
    "Genome",
    "Irradiance",
    "PanelSpec",
    "PlacedPlate",
    "RunTrace",
    "Scenario",
    "Scene",
    "SceneRect",
    "SubPlate",
    "SunPosition",
    "TTestResult",
    "build_scene",
    "calibrate",
    "calibrated_scenario",
    "clear_sky",
    "count_conflicts",
    "decode",
    "default_scenario",
    "ep_run",
    "es_run",
    "evaluate",
    "flat_baseline",
    "ga_run",
    "plane_of_array",
    "random_genome",
    "resolve_cuts",
    "solar_objective",
    "sphere_stub_objective",
    "summarize",
    "sun_position",
    "t_test_two_tailed",
]
