"""Bus interior geometry: seats, groups, transmitter heights, link distances.

Dimensions (12.80 m x 2.55 m), the access-point height (2 m), the transmitter
heights (1.2 m upper / 0.7 m lower) and the excluded lower seats (5-8 and
27-30, over the wheel arches) are fixed facts of the measured vehicle. The
individual seat coordinates and the A-D group boundaries are approximate
layout data and live in a JSON config so they can be corrected without code
changes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .models import HeightClass, Region

DEFAULT_UPPER_HEIGHT_M = 1.2
DEFAULT_LOWER_HEIGHT_M = 0.7
# Offset of a head-worn device above the seat in seat-relative mode.
SEAT_RELATIVE_UPPER_OFFSET_M = 0.7

HEIGHT_MODES = ("floor", "seat_relative")


class LayoutError(ValueError):
    """Invalid bus layout configuration; message lists every violation."""


class SeatNotFoundError(KeyError):
    """No seat with the requested id."""


class ExcludedPositionError(ValueError):
    """Lower transmitter position requested on a wheel-arch seat."""


@dataclass(frozen=True)
class Point3:
    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        if not all(math.isfinite(v) for v in (self.x, self.y, self.z)):
            raise ValueError("coordinates must be finite")


@dataclass(frozen=True)
class SeatSpec:
    id: int
    x: float
    y: float
    seat_height_m: float
    group: Region
    lower_excluded: bool = False


@dataclass
class BusLayout:
    """Immutable-after-load description of the vehicle interior."""

    length_m: float
    width_m: float
    rx: Point3
    seats: list[SeatSpec] = field(default_factory=list)
    upper_height_m: float = DEFAULT_UPPER_HEIGHT_M
    lower_height_m: float = DEFAULT_LOWER_HEIGHT_M
    height_mode: str = "floor"

    def __post_init__(self) -> None:
        problems = []
        if not self.length_m > 0:
            problems.append("length_m must be > 0")
        if not self.width_m > 0:
            problems.append("width_m must be > 0")
        if self.height_mode not in HEIGHT_MODES:
            problems.append(f"height_mode must be one of {HEIGHT_MODES}")
        if self.length_m > 0 and self.width_m > 0:
            if not (0 <= self.rx.x <= self.length_m and 0 <= self.rx.y <= self.width_m):
                problems.append("rx must lie within the bus footprint")
        seen = set()
        for seat in self.seats:
            if seat.id in seen:
                problems.append(f"duplicate seat id {seat.id}")
            seen.add(seat.id)
            if not (0 <= seat.x <= self.length_m and 0 <= seat.y <= self.width_m):
                problems.append(f"seat {seat.id} at ({seat.x}, {seat.y}) is outside the footprint")
            if seat.group == Region.ALL:
                problems.append(f"seat {seat.id}: group must be one of A-D, not All")
        if problems:
            raise LayoutError("; ".join(problems))
        self._by_id = {seat.id: seat for seat in self.seats}

    def seat(self, seat_id: int) -> SeatSpec:
        try:
            return self._by_id[seat_id]
        except KeyError:
            raise SeatNotFoundError(f"no seat with id {seat_id}") from None


def tx_position(layout: BusLayout, seat_id: int, height: HeightClass) -> Point3:
    """Transmitter coordinates for a seat at the given height class."""
    seat = layout.seat(seat_id)
    if height == HeightClass.LOWER and seat.lower_excluded:
        raise ExcludedPositionError(
            f"seat {seat_id} has no lower position (wheel arch)"
        )
    if layout.height_mode == "seat_relative":
        z = seat.seat_height_m
        if height == HeightClass.UPPER:
            z += SEAT_RELATIVE_UPPER_OFFSET_M
    else:
        z = layout.upper_height_m if height == HeightClass.UPPER else layout.lower_height_m
    return Point3(seat.x, seat.y, z)


def link_distance(layout: BusLayout, seat_id: int, height: HeightClass) -> float:
    """3-D Euclidean distance from the receiver to the transmitter position."""
    tx = tx_position(layout, seat_id, height)
    rx = layout.rx
    return math.sqrt((tx.x - rx.x) ** 2 + (tx.y - rx.y) ** 2 + (tx.z - rx.z) ** 2)


def seats_in_group(
    layout: BusLayout, region: Region, height: HeightClass
) -> list[int]:
    """Seat ids eligible at the given height; Region.ALL selects every group."""
    ids = []
    for seat in layout.seats:
        if region != Region.ALL and seat.group != region:
            continue
        if height == HeightClass.LOWER and seat.lower_excluded:
            continue
        ids.append(seat.id)
    return ids


def default_layout() -> BusLayout:
    """The shipped 30-seat city-bus layout.

    Seven 4-seat rows plus a 2-seat rear row, numbered front to back;
    groups A-D split the rows front to back. Coordinates are approximate.
    """
    seats = []
    row_y = (0.45, 1.00, 1.55, 2.10)
    excluded = set(range(5, 9)) | set(range(27, 31))
    for row in range(7):
        x = 2.0 + 1.35 * row
        for pos in range(4):
            seat_id = 4 * row + pos + 1
            group = (Region.A, Region.A, Region.B, Region.B,
                     Region.C, Region.C, Region.D)[row]
            seats.append(
                SeatSpec(
                    id=seat_id, x=x, y=row_y[pos], seat_height_m=0.5,
                    group=group, lower_excluded=seat_id in excluded,
                )
            )
    for seat_id, y in ((29, 0.80), (30, 1.75)):
        seats.append(
            SeatSpec(
                id=seat_id, x=11.6, y=y, seat_height_m=0.5,
                group=Region.D, lower_excluded=True,
            )
        )
    return BusLayout(
        length_m=12.80,
        width_m=2.55,
        rx=Point3(0.5, 2.55 / 2, 2.0),
        seats=seats,
    )


def layout_to_dict(layout: BusLayout) -> dict:
    return {
        "length_m": layout.length_m,
        "width_m": layout.width_m,
        "rx": {"x": layout.rx.x, "y": layout.rx.y, "z": layout.rx.z},
        "upper_height_m": layout.upper_height_m,
        "lower_height_m": layout.lower_height_m,
        "height_mode": layout.height_mode,
        "seats": [
            {
                "id": seat.id,
                "x": seat.x,
                "y": seat.y,
                "seat_height_m": seat.seat_height_m,
                "group": seat.group.value,
                "lower_excluded": seat.lower_excluded,
            }
            for seat in layout.seats
        ],
    }


def layout_from_dict(obj: dict) -> BusLayout:
    try:
        seats = [
            SeatSpec(
                id=int(s["id"]),
                x=float(s["x"]),
                y=float(s["y"]),
                seat_height_m=float(s.get("seat_height_m", 0.5)),
                group=Region(s["group"]),
                lower_excluded=bool(s.get("lower_excluded", False)),
            )
            for s in obj.get("seats", [])
        ]
        rx = obj["rx"]
        return BusLayout(
            length_m=float(obj["length_m"]),
            width_m=float(obj["width_m"]),
            rx=Point3(float(rx["x"]), float(rx["y"]), float(rx["z"])),
            seats=seats,
            upper_height_m=float(obj.get("upper_height_m", DEFAULT_UPPER_HEIGHT_M)),
            lower_height_m=float(obj.get("lower_height_m", DEFAULT_LOWER_HEIGHT_M)),
            height_mode=str(obj.get("height_mode", "floor")),
        )
    except (KeyError, TypeError) as exc:
        raise LayoutError(f"bad layout config: {exc}") from None


def load_layout(path: str | Path) -> BusLayout:
    """Load and validate a layout JSON file."""
    path = Path(path)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise LayoutError(f"{path}: invalid JSON ({exc})") from None
    return layout_from_dict(obj)


def save_layout(layout: BusLayout, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(layout_to_dict(layout), indent=2) + "\n", encoding="utf-8"
    )
