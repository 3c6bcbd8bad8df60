"""Sun geometry, clear-sky irradiance, and plane-of-array transposition.

The chain is deliberately self-contained: solar declination from the
Cooper formula, the equation of time from the Spencer Fourier series,
a Meinel/Laue-style clear-sky beam model with a fixed 10% diffuse
fraction, and an isotropic-sky transposition onto the tilted surface.
Absolute wattage accuracy is delegated to a single downstream
calibration constant, so only the relative shape of the model matters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

SOLAR_CONSTANT = 1353.0  # W/m^2 extraterrestrial
DIFFUSE_FRACTION = 0.1  # DHI as a fraction of DNI under clear sky
LOW_SUN_ELEVATION_DEG = 10.0  # below this, Kasten-Young air mass replaces 1/sin


@dataclass(frozen=True)
class Scenario:
    """Location, day, hour window and fitness scale; fixes the whole landscape."""

    latitude: float
    longitude: float
    day_of_year: int
    hours: tuple[float, ...]
    tz_offset_hours: float = 0.0
    albedo: float = 0.2
    calibration: float = 1.0

    def __post_init__(self) -> None:
        if not -90.0 <= self.latitude <= 90.0:
            raise ValueError("latitude: must be in [-90, 90]")
        if not -180.0 <= self.longitude <= 180.0:
            raise ValueError("longitude: must be in [-180, 180]")
        if not 1 <= self.day_of_year <= 365:
            raise ValueError("day_of_year: must be in 1..365")
        if len(self.hours) == 0:
            raise ValueError("hours: must be a non-empty list of clock hours")
        if any(not 0.0 <= h < 24.0 for h in self.hours):
            raise ValueError("hours: every entry must lie in [0, 24)")
        if not 0.0 <= self.albedo <= 1.0:
            raise ValueError("albedo: must be in [0, 1]")
        if not self.calibration > 0.0:
            raise ValueError("calibration: must be positive")


# Shipped default: Athens, GA in mid August, 11:00-19:00 UTC. The UTC clock
# makes the window morning-heavy in local solar time, which is what gives
# east-facing surfaces their advantage in the baseline sweep.
def default_scenario(calibration: float = 1.0) -> Scenario:
    return Scenario(
        latitude=33.957409,
        longitude=-83.376801,
        day_of_year=227,
        hours=tuple(float(h) for h in range(11, 20)),
        tz_offset_hours=0.0,
        albedo=0.2,
        calibration=calibration,
    )


@dataclass(frozen=True)
class SunPosition:
    elevation: float  # degrees above horizon
    azimuth: float  # degrees clockwise from north


@dataclass(frozen=True)
class Irradiance:
    dni: float  # direct normal, W/m^2
    dhi: float  # diffuse horizontal, W/m^2
    ghi: float  # global horizontal, W/m^2


def declination_deg(day_of_year: int) -> float:
    """Solar declination (Cooper): 23.45 sin(360 (284+n)/365)."""
    return 23.45 * math.sin(math.radians(360.0 * (284 + day_of_year) / 365.0))


def equation_of_time_min(day_of_year: int) -> float:
    """Spencer Fourier series for the equation of time, in minutes."""
    b = 2.0 * math.pi * (day_of_year - 1) / 365.0
    return 229.18 * (
        0.000075
        + 0.001868 * math.cos(b)
        - 0.032077 * math.sin(b)
        - 0.014615 * math.cos(2.0 * b)
        - 0.040890 * math.sin(2.0 * b)
    )


def sun_position(scenario: Scenario, hour: float) -> SunPosition:
    """Sun elevation/azimuth for a clock hour in the scenario's timezone."""
    solar_time = (
        hour
        + scenario.longitude / 15.0
        - scenario.tz_offset_hours
        + equation_of_time_min(scenario.day_of_year) / 60.0
    )
    hour_angle = math.radians(15.0 * (solar_time - 12.0))
    dec = math.radians(declination_deg(scenario.day_of_year))
    lat = math.radians(scenario.latitude)

    sin_elev = math.sin(lat) * math.sin(dec) + math.cos(lat) * math.cos(dec) * math.cos(hour_angle)
    elevation = math.degrees(math.asin(max(-1.0, min(1.0, sin_elev))))
    azimuth = (
        math.degrees(
            math.atan2(
                math.sin(hour_angle),
                math.cos(hour_angle) * math.sin(lat) - math.tan(dec) * math.cos(lat),
            )
        )
        + 180.0
    ) % 360.0
    return SunPosition(elevation=elevation, azimuth=azimuth)


def air_mass(elevation_deg: float) -> float:
    """Relative optical path length; Kasten-Young form near the horizon."""
    sin_elev = math.sin(math.radians(elevation_deg))
    if elevation_deg >= LOW_SUN_ELEVATION_DEG:
        return 1.0 / sin_elev
    return 1.0 / (sin_elev + 0.50572 * (elevation_deg + 6.07995) ** -1.6364)


def clear_sky(sun: SunPosition) -> Irradiance:
    """Clear-sky irradiance components; all zero when the sun is down."""
    if sun.elevation <= 0.0:
        return Irradiance(0.0, 0.0, 0.0)
    dni = SOLAR_CONSTANT * 0.7 ** (air_mass(sun.elevation) ** 0.678)
    dhi = DIFFUSE_FRACTION * dni
    ghi = dni * math.sin(math.radians(sun.elevation)) + dhi
    return Irradiance(dni=dni, dhi=dhi, ghi=ghi)


def effective_orientation(tilt: float, azimuth: float) -> tuple[float, float]:
    """Map a negative tilt to the equivalent positive tilt facing the other way."""
    if tilt < 0.0:
        return -tilt, (azimuth + 180.0) % 360.0
    return tilt, azimuth


def plane_of_array(
    irr: Irradiance, sun: SunPosition, tilt: float, azimuth: float, albedo: float
) -> float:
    """Irradiance on a tilted surface: beam + isotropic sky + ground reflection."""
    if sun.elevation <= 0.0:
        return 0.0
    beta_deg, az = effective_orientation(tilt, azimuth)
    beta = math.radians(beta_deg)
    zenith = math.radians(90.0 - sun.elevation)
    cos_aoi = math.cos(zenith) * math.cos(beta) + math.sin(zenith) * math.sin(beta) * math.cos(
        math.radians(sun.azimuth - az)
    )
    beam = irr.dni * max(cos_aoi, 0.0)
    sky = irr.dhi * (1.0 + math.cos(beta)) / 2.0
    ground = irr.ghi * albedo * (1.0 - math.cos(beta)) / 2.0
    return beam + sky + ground


@dataclass(frozen=True)
class HourlySky:
    """Per-hour sun position and irradiance, precomputed for one scenario."""

    elevation: np.ndarray
    azimuth: np.ndarray
    dni: np.ndarray
    dhi: np.ndarray
    ghi: np.ndarray


@lru_cache(maxsize=32)
def hourly_sky(scenario: Scenario) -> HourlySky:
    suns = [sun_position(scenario, h) for h in scenario.hours]
    irrs = [clear_sky(s) for s in suns]
    return HourlySky(
        elevation=np.array([s.elevation for s in suns]),
        azimuth=np.array([s.azimuth for s in suns]),
        dni=np.array([i.dni for i in irrs]),
        dhi=np.array([i.dhi for i in irrs]),
        ghi=np.array([i.ghi for i in irrs]),
    )


def poa_matrix(sky: HourlySky, tilts: np.ndarray, azimuths: np.ndarray, albedo: float) -> np.ndarray:
    """Plane-of-array irradiance for each (surface, hour) pair, vectorized.

    Matches plane_of_array() applied pointwise; shape (len(tilts), len(hours)).
    """
    tilts = np.asarray(tilts, dtype=float)
    azimuths = np.asarray(azimuths, dtype=float)
    flip = tilts < 0.0
    beta = np.radians(np.where(flip, -tilts, tilts))[:, None]
    az = np.where(flip, (azimuths + 180.0) % 360.0, azimuths)[:, None]

    up = sky.elevation > 0.0
    zenith = np.radians(90.0 - sky.elevation)[None, :]
    cos_aoi = np.cos(zenith) * np.cos(beta) + np.sin(zenith) * np.sin(beta) * np.cos(
        np.radians(sky.azimuth[None, :] - az)
    )
    beam = sky.dni[None, :] * np.maximum(cos_aoi, 0.0)
    diffuse = sky.dhi[None, :] * (1.0 + np.cos(beta)) / 2.0
    ground = sky.ghi[None, :] * albedo * (1.0 - np.cos(beta)) / 2.0
    return np.where(up[None, :], beam + diffuse + ground, 0.0)
