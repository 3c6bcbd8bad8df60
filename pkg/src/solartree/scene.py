"""3D scene description of an evolved tree: oriented rectangles plus a trunk.

Plates keep the x/y centroid of their cell rectangle in the original flat
layout (inches), sit at z = their height gene, and carry tilt/azimuth as
attributes. The trunk is decorative metadata at the centre of the active
cell region. Serialized as JSON so external viewers and scripts can consume
it directly.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

from .fitness import Genome
from .geometry import PANEL, PanelSpec, decode, resolve_cuts


@dataclass(frozen=True)
class SceneRect:
    """One placed plate: centre position in inches, extents, orientation."""

    center_x: float
    center_y: float
    center_z: float
    length_in: float
    width_in: float
    tilt_deg: float
    azimuth_deg: float
    cells: int


@dataclass(frozen=True)
class Scene:
    plates: list[SceneRect]
    trunk_x: float
    trunk_y: float
    trunk_height_in: float


def build_scene(genome: Genome, spec: PanelSpec = PANEL) -> Scene:
    """Decode the genome and place each plate at its flat-layout centroid."""
    plates = decode(resolve_cuts(genome.mask), spec)
    rects = []
    for k, plate in enumerate(plates):
        height, tilt, azimuth = genome.slots[k]
        rects.append(
            SceneRect(
                center_x=spec.cell_in * (plate.row_start + plate.row_end) / 2.0,
                center_y=spec.cell_in * (plate.col_start + plate.col_end) / 2.0,
                center_z=float(height),
                length_in=spec.cell_in * (plate.row_end - plate.row_start),
                width_in=spec.cell_in * (plate.col_end - plate.col_start),
                tilt_deg=float(tilt),
                azimuth_deg=float(azimuth),
                cells=plate.cell_count,
            )
        )
    return Scene(
        plates=rects,
        trunk_x=spec.cell_in * spec.cells_len / 2.0,
        trunk_y=spec.cell_in * spec.cells_wid / 2.0,
        trunk_height_in=max(r.center_z for r in rects),
    )


def scene_to_json(scene: Scene) -> str:
    doc = {
        "units": "inches",
        "trunk": {
            "x": scene.trunk_x,
            "y": scene.trunk_y,
            "height_in": scene.trunk_height_in,
        },
        "plates": [asdict(r) for r in scene.plates],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_scene(scene: Scene, path) -> None:
    with open(path, "w") as fh:
        fh.write(scene_to_json(scene))
