"""Genome scoring: decode cuts, place plates, integrate power, apply penalties.

A genome is the 16-bit cut mask plus 16 placement slots (height, tilt,
azimuth). Decoded plates take slots in row-major decode order; slots beyond
the plate count are carried but inert. Gross watts is the calibration
constant times the mean over the hour window of the area-weighted
plane-of-array sum; every conflicting plate pair costs 50 W.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .geometry import (
    DEFAULT_RULE,
    MASK_BITS,
    PANEL,
    ConflictRule,
    as_mask,
    count_conflicts_arrays,
    decode,
    resolve_cuts,
)
from .solar import Scenario, hourly_sky, poa_matrix

N_SLOTS = 16
SLOT_LO = np.array([32.0, -90.0, 0.0])  # height, tilt, azimuth minima
SLOT_HI = np.array([72.0, 90.0, 360.0])  # azimuth upper bound is exclusive
N_CONTINUOUS_GENES = N_SLOTS * 3

FLAT_REFERENCE_WATTS = 666.40  # calibration anchor: flat panel at 0 tilt


@dataclass
class Genome:
    """Cut mask (16 bools) plus a (16, 3) array of placement slots."""

    mask: np.ndarray
    slots: np.ndarray

    def copy(self) -> "Genome":
        return Genome(self.mask.copy(), self.slots.copy())

    def mask_string(self) -> str:
        return "".join("1" if b else "0" for b in self.mask)


@dataclass(frozen=True)
class EvalResult:
    gross_watts: float
    conflict_count: int
    penalty_watts: float
    fitness: float


def make_genome(mask, slots) -> Genome:
    """Build a genome from loose sequences, validating shapes only."""
    slots = np.asarray(slots, dtype=float)
    if slots.shape != (N_SLOTS, 3):
        raise ValueError(f"slots must have shape ({N_SLOTS}, 3)")
    return Genome(as_mask(mask), slots)


def random_genome(rng: np.random.Generator) -> Genome:
    """Uniform-random genome with the cut resolution already applied."""
    mask = resolve_cuts(rng.integers(0, 2, MASK_BITS).astype(bool))
    slots = rng.uniform(SLOT_LO, SLOT_HI, (N_SLOTS, 3))
    return Genome(mask, slots)


def validate_slots(slots: np.ndarray) -> None:
    """Reject out-of-range slot values; mutation is required to clamp."""
    if np.any(slots < SLOT_LO) or np.any(slots[:, :2] > SLOT_HI[:2]) or np.any(
        slots[:, 2] >= SLOT_HI[2]
    ):
        raise ValueError("slot values outside legal ranges (32..72, -90..90, 0..360)")


def evaluate(
    genome: Genome, scenario: Scenario, rule: ConflictRule = DEFAULT_RULE
) -> EvalResult:
    """Score one genome against the scenario. Deterministic and pure."""
    validate_slots(genome.slots)
    plates = decode(resolve_cuts(genome.mask), PANEL)
    n = len(plates)
    placed = genome.slots[:n]

    sky = hourly_sky(scenario)
    fractions = np.array([p.cell_count for p in plates], dtype=float) / PANEL.cells_total
    poa = poa_matrix(sky, placed[:, 1], placed[:, 2], scenario.albedo)
    gross = scenario.calibration * float(np.mean(fractions @ poa))

    conflicts = count_conflicts_arrays(placed[:, 0], placed[:, 1], placed[:, 2], rule)
    penalty = rule.penalty * conflicts
    return EvalResult(
        gross_watts=gross,
        conflict_count=conflicts,
        penalty_watts=penalty,
        fitness=gross - penalty,
    )


def flat_genome(tilt: float, azimuth: float, height: float = 50.0) -> Genome:
    """No-cut genome: one full-panel plate in slot 0 (all slots identical)."""
    mask = np.zeros(MASK_BITS, dtype=bool)
    slots = np.tile(np.array([height, float(tilt), float(azimuth)]), (N_SLOTS, 1))
    return Genome(mask, slots)


def flat_baseline(scenario: Scenario, tilt: float, azimuth: float) -> float:
    """Gross watts of the uncut panel at one orientation."""
    return evaluate(flat_genome(tilt, azimuth), scenario).gross_watts


def calibrate(scenario: Scenario, target: float = FLAT_REFERENCE_WATTS) -> float:
    """Scale constant pinning the 0-tilt flat baseline to the reference watts.

    Computed against a unit-calibration copy of the scenario, then nudged by
    ulps so that the calibrated baseline reproduces the target bit-for-bit.
    """
    raw = flat_baseline(replace(scenario, calibration=1.0), tilt=0.0, azimuth=180.0)
    if raw <= 0.0:
        raise ValueError("flat baseline is zero: sun never above horizon in the hour window")
    c = target / raw
    for _ in range(8):
        got = c * raw
        if got == target:
            break
        c = math.nextafter(c, math.inf if got < target else -math.inf)
    return c


def calibrated_scenario(scenario: Scenario, target: float = FLAT_REFERENCE_WATTS) -> Scenario:
    """Copy of the scenario with its calibration constant fixed to the anchor."""
    return replace(scenario, calibration=calibrate(scenario, target))
