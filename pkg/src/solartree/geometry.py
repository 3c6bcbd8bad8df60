"""Cut-mask decoding and placement-conflict counting for a 65x39 inch panel.

The panel carries a 10x6 grid of 6-inch PV cells. A 16-bit cut mask selects
grid-aligned cut lines: bits 0-9 are lengthwise cuts (bit i cuts 6*(i+1)
inches from the edge, i.e. after cell row i+1), bits 10-15 are widthwise
cuts (bit 10+j cuts after cell column j+1). Bits 9 and 15 fall on the
boundary of the active cell region and produce no new plate, but they still
count toward the 6-cut budget.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MASK_BITS = 16
LENGTH_BITS = 10
WIDTH_BITS = 6
MAX_CUTS = 6


@dataclass(frozen=True)
class PanelSpec:
    """Dimensions of the uncut panel and its cell grid."""

    length_in: float = 65.0
    width_in: float = 39.0
    cell_in: float = 6.0
    cells_len: int = 10
    cells_wid: int = 6

    @property
    def cells_total(self) -> int:
        return self.cells_len * self.cells_wid

    def __post_init__(self) -> None:
        if self.cell_in * self.cells_len > self.length_in:
            raise ValueError("cell grid exceeds panel length")
        if self.cell_in * self.cells_wid > self.width_in:
            raise ValueError("cell grid exceeds panel width")


PANEL = PanelSpec()


@dataclass(frozen=True)
class SubPlate:
    """A rectangular block of cells, half-open row/column index ranges."""

    row_start: int
    row_end: int
    col_start: int
    col_end: int

    @property
    def cell_count(self) -> int:
        return (self.row_end - self.row_start) * (self.col_end - self.col_start)


@dataclass(frozen=True)
class PlacedPlate:
    """A sub-plate with its 3D placement on the tree."""

    plate: SubPlate
    height: float  # inches, 32..72
    tilt: float  # degrees, -90..90
    azimuth: float  # degrees clockwise from north, 0..360


@dataclass(frozen=True)
class ConflictRule:
    """Two plates conflict when all three placement gaps are below threshold."""

    height_threshold: float = 20.0
    tilt_threshold: float = 90.0
    azimuth_threshold: float = 45.0
    penalty: float = 50.0


DEFAULT_RULE = ConflictRule()


def as_mask(bits) -> np.ndarray:
    """Coerce a 16-element bit sequence (or '0'/'1' string) to a bool array."""
    if isinstance(bits, str):
        bits = [c == "1" for c in bits]
    mask = np.asarray(bits, dtype=bool)
    if mask.shape != (MASK_BITS,):
        raise ValueError(f"cut mask must have exactly {MASK_BITS} bits")
    return mask


def resolve_cuts(mask: np.ndarray) -> np.ndarray:
    """Clear excess set bits so popcount <= 6, keeping the lowest-indexed ones."""
    mask = as_mask(mask)
    if int(mask.sum()) <= MAX_CUTS:
        return mask.copy()
    out = np.zeros(MASK_BITS, dtype=bool)
    out[np.flatnonzero(mask)[:MAX_CUTS]] = True
    return out


def decode(mask: np.ndarray, spec: PanelSpec = PANEL) -> list[SubPlate]:
    """Split the cell grid along the mask's interior cut lines, row-major order.

    Expects a resolved mask (popcount <= 6). Bit i < 9 cuts after row i+1;
    bit 10+j with j < 5 cuts after column j+1; the two boundary bits are
    no-ops.
    """
    mask = as_mask(mask)
    row_edges = [0] + [i + 1 for i in range(spec.cells_len - 1) if mask[i]] + [spec.cells_len]
    col_edges = [0] + [j + 1 for j in range(spec.cells_wid - 1) if mask[LENGTH_BITS + j]] + [spec.cells_wid]
    return [
        SubPlate(r0, r1, c0, c1)
        for r0, r1 in zip(row_edges[:-1], row_edges[1:])
        for c0, c1 in zip(col_edges[:-1], col_edges[1:])
    ]


def circular_distance_deg(a: float, b: float) -> float:
    """Shortest angular distance between two compass bearings, in [0, 180]."""
    d = abs(a - b) % 360.0
    return min(d, 360.0 - d)


def is_conflict(a: PlacedPlate, b: PlacedPlate, rule: ConflictRule = DEFAULT_RULE) -> bool:
    return (
        abs(a.height - b.height) < rule.height_threshold
        and abs(a.tilt - b.tilt) < rule.tilt_threshold
        and circular_distance_deg(a.azimuth, b.azimuth) < rule.azimuth_threshold
    )


def count_conflicts(plates: list[PlacedPlate], rule: ConflictRule = DEFAULT_RULE) -> int:
    """Number of unordered plate pairs within all three proximity thresholds."""
    n = len(plates)
    return sum(
        1 for i in range(n) for j in range(i + 1, n) if is_conflict(plates[i], plates[j], rule)
    )


def count_conflicts_arrays(
    heights: np.ndarray,
    tilts: np.ndarray,
    azimuths: np.ndarray,
    rule: ConflictRule = DEFAULT_RULE,
) -> int:
    """Vectorized count_conflicts over parallel placement arrays."""
    n = len(heights)
    if n < 2:
        return 0
    i, j = np.triu_indices(n, k=1)
    dh = np.abs(heights[i] - heights[j])
    dt = np.abs(tilts[i] - tilts[j])
    da = np.abs(azimuths[i] - azimuths[j]) % 360.0
    da = np.minimum(da, 360.0 - da)
    hit = (dh < rule.height_threshold) & (dt < rule.tilt_threshold) & (da < rule.azimuth_threshold)
    return int(hit.sum())
