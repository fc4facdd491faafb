"""Grid region model: per-cell coverage requirement and placement permission.

A region is a width x height grid of elementary areas (EAs). Each cell
carries two independent bits: cover (coverage required there) and place
(a router may be placed there). The on-disk encoding is the EA-REGION v1
text format, one character per cell:

    '#'  cover=1 place=1      'r'  cover=1 place=0
    '.'  cover=0 place=1      'X'  cover=0 place=0

x is the column index, y the row index, origin at the top-left corner;
rows are serialized top to bottom.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


class RegionFormatError(ValueError):
    """Raised for malformed EA-REGION input or an unusable grid."""


class Cell(NamedTuple):
    x: int
    y: int


# char -> (cover, place)
_CHAR_BITS = {"#": (True, True), "r": (True, False),
              ".": (False, True), "X": (False, False)}
_BITS_CHAR = {v: k for k, v in _CHAR_BITS.items()}


@dataclass(frozen=True)
class RegionGrid:
    """Immutable region; cover/place are boolean matrices of shape (height, width)."""

    width: int
    height: int
    cover: np.ndarray
    place: np.ndarray

    def __post_init__(self):
        for name in ("cover", "place"):
            m = getattr(self, name)
            if m.shape != (self.height, self.width):
                raise ValueError(f"{name} matrix shape {m.shape} does not match "
                                 f"{self.height}x{self.width}")
            m.setflags(write=False)

    def legal_cells(self) -> np.ndarray:
        """(n, 2) array of [y, x] rows where a router may go: cover=1 and place=1."""
        return np.argwhere(self.cover & self.place)

    def is_legal(self, cell: Cell) -> bool:
        if not (0 <= cell.x < self.width and 0 <= cell.y < self.height):
            return False
        return bool(self.cover[cell.y, cell.x] and self.place[cell.y, cell.x])


def required_area(grid: RegionGrid) -> int:
    """Number of cells whose coverage is required."""
    return int(grid.cover.sum())


def parse_region(text: str) -> RegionGrid:
    """Parse EA-REGION v1 text into a RegionGrid.

    Rejects malformed headers, wrong row counts or lengths, unknown cell
    characters, and grids where no router could ever be placed (no cell
    with cover=1 and place=1).
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise RegionFormatError("empty input")
    parts = lines[0].split(" ")
    if len(parts) != 4 or parts[0] != "EA-REGION" or parts[1] != "v1":
        raise RegionFormatError(f"malformed header: {lines[0]!r}")
    try:
        width, height = int(parts[2]), int(parts[3])
    except ValueError:
        raise RegionFormatError(f"malformed header: {lines[0]!r}") from None
    if width < 1 or height < 1:
        raise RegionFormatError(f"bad dimensions {width}x{height}")
    rows = lines[1:]
    if len(rows) != height:
        raise RegionFormatError(f"expected {height} rows, got {len(rows)}")
    cover = np.zeros((height, width), dtype=bool)
    place = np.zeros((height, width), dtype=bool)
    for y, row in enumerate(rows):
        if len(row) != width:
            raise RegionFormatError(f"row {y} has length {len(row)}, expected {width}")
        for x, ch in enumerate(row):
            try:
                cover[y, x], place[y, x] = _CHAR_BITS[ch]
            except KeyError:
                raise RegionFormatError(f"unknown cell character {ch!r} "
                                        f"at ({x}, {y})") from None
    grid = RegionGrid(width, height, cover, place)
    if not (cover & place).any():
        raise RegionFormatError("grid has no placeable required cell")
    return grid


def serialize_region(grid: RegionGrid) -> str:
    """Canonical EA-REGION v1 text; parse_region inverts it exactly."""
    out = [f"EA-REGION v1 {grid.width} {grid.height}"]
    for y in range(grid.height):
        out.append("".join(_BITS_CHAR[(bool(grid.cover[y, x]), bool(grid.place[y, x]))]
                           for x in range(grid.width)))
    return "\n".join(out) + "\n"


def _stamp_rect(mask, rng, cx, cy, area):
    h, w = mask.shape
    aspect = rng.uniform(0.5, 2.0)
    rw = max(1, int(round((area * aspect) ** 0.5)))
    rh = max(1, int(round(area / rw)))
    x0 = int(np.clip(cx - rw // 2, 0, w - 1))
    y0 = int(np.clip(cy - rh // 2, 0, h - 1))
    mask[y0:min(y0 + rh, h), x0:min(x0 + rw, w)] = True


def _stamp_disk(mask, cx, cy, area):
    h, w = mask.shape
    rad = max(1.0, (area / np.pi) ** 0.5)
    ys, xs = np.ogrid[:h, :w]
    mask |= (xs - cx) ** 2 + (ys - cy) ** 2 < rad * rad


def generate_region(width, height, seed, required_fraction_target,
                    prohibited_fraction_target=0.0,
                    blob_count_range=(6, 12)) -> RegionGrid:
    """Generate a random region: a union of overlapping rectangle and disk
    blobs grown around a common anchor, plus a sprinkle of prohibited cells.

    Deterministic for a fixed parameter set including seed. The achieved
    required fraction lands within 0.10 of the target. Each blob after the
    first is anchored on an already-required cell, which keeps the required
    area one ragged connected mass rather than scattered islands.
    """
    if width < 1 or height < 1:
        raise ValueError("width and height must be >= 1")
    if not (0.0 <= required_fraction_target <= 1.0):
        raise ValueError("required_fraction_target must be in [0, 1]")
    if not (0.0 <= prohibited_fraction_target <= 1.0):
        raise ValueError("prohibited_fraction_target must be in [0, 1]")
    if required_fraction_target == 0.0:
        raise ValueError("required_fraction_target must be positive")
    if prohibited_fraction_target == 1.0:
        raise ValueError("prohibited_fraction_target 1.0 leaves no placeable cell")

    rng = np.random.default_rng(seed)
    total = width * height
    target = required_fraction_target * total
    blobs = int(rng.integers(blob_count_range[0], blob_count_range[1] + 1))
    per_blob = target / blobs

    cover = np.zeros((height, width), dtype=bool)
    # first anchor near the middle, jittered
    cx = int(rng.integers(width // 4, width - width // 4)) if width > 4 else width // 2
    cy = int(rng.integers(height // 4, height - height // 4)) if height > 4 else height // 2
    placed = 0
    # keep stamping until close to target; cap blob size by the open deficit
    while placed < blobs or cover.sum() < target - 0.02 * total:
        deficit = target - cover.sum()
        if deficit <= 0:
            break
        area = min(per_blob, 1.2 * deficit, 0.1 * total)
        area = max(1.0, area * rng.uniform(0.6, 1.4))
        if placed > 0:
            anchors = np.argwhere(cover)
            ay, ax = anchors[rng.integers(len(anchors))]
            # offset at most half a blob side: each blob overlaps the mass
            # heavily, so the union stays one compact lump without thin necks
            half = max(1, int(area ** 0.5) // 2)
            cx = int(np.clip(ax + rng.integers(-half, half + 1), 0, width - 1))
            cy = int(np.clip(ay + rng.integers(-half, half + 1), 0, height - 1))
        if rng.random() < 0.5:
            _stamp_rect(cover, rng, cx, cy, area)
        else:
            _stamp_disk(cover, cx, cy, area)
        placed += 1
        if placed > blobs * 8:
            break
    place = rng.random((height, width)) >= prohibited_fraction_target
    if not (cover & place).any():
        req = np.argwhere(cover)
        y, x = req[rng.integers(len(req))]
        place = place.copy()
        place[y, x] = True
    return RegionGrid(width, height, cover, place)
