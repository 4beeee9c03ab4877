"""Tests for the bus layout, seat groups and link distances."""

import math

import pytest

from busloss.geometry import (
    BusLayout,
    ExcludedPositionError,
    LayoutError,
    Point3,
    SeatNotFoundError,
    SeatSpec,
    default_layout,
    layout_from_dict,
    layout_to_dict,
    link_distance,
    load_layout,
    save_layout,
    seats_in_group,
    tx_position,
)
from busloss.models import HeightClass, Region


class TestDefaultLayout:
    def test_dimensions_and_receiver(self):
        layout = default_layout()
        assert layout.length_m == 12.80
        assert layout.width_m == 2.55
        assert layout.rx.z == 2.0
        assert layout.rx.x < layout.length_m / 2  # receiver sits at the front

    def test_seat_counts(self):
        layout = default_layout()
        assert len(layout.seats) == 30
        assert sum(s.lower_excluded for s in layout.seats) == 8
        assert {s.id for s in layout.seats if s.lower_excluded} == set(range(5, 9)) | set(range(27, 31))

    def test_groups_partition_seats(self):
        layout = default_layout()
        by_group = {r: seats_in_group(layout, r, HeightClass.UPPER) for r in
                    (Region.A, Region.B, Region.C, Region.D)}
        ids = sorted(sum(by_group.values(), []))
        assert ids == [s.id for s in sorted(layout.seats, key=lambda s: s.id)]

    def test_eligible_counts(self):
        layout = default_layout()
        assert len(seats_in_group(layout, Region.ALL, HeightClass.UPPER)) == 30
        assert len(seats_in_group(layout, Region.ALL, HeightClass.LOWER)) == 22


class TestValidation:
    def test_seat_outside_footprint(self):
        with pytest.raises(LayoutError, match="outside"):
            BusLayout(
                length_m=12.80, width_m=2.55, rx=Point3(0.5, 1.0, 2.0),
                seats=[SeatSpec(1, 13.0, 1.0, 0.5, Region.A)],
            )

    def test_duplicate_ids_and_all_group_both_reported(self):
        with pytest.raises(LayoutError) as exc:
            BusLayout(
                length_m=12.80, width_m=2.55, rx=Point3(0.5, 1.0, 2.0),
                seats=[
                    SeatSpec(1, 2.0, 1.0, 0.5, Region.A),
                    SeatSpec(1, 3.0, 1.0, 0.5, Region.ALL),
                ],
            )
        assert "duplicate seat id 1" in str(exc.value)
        assert "group must be one of A-D" in str(exc.value)

    def test_empty_seat_list_valid(self):
        layout = BusLayout(length_m=12.80, width_m=2.55, rx=Point3(0.5, 1.0, 2.0))
        assert seats_in_group(layout, Region.ALL, HeightClass.UPPER) == []

    def test_rx_outside_rejected(self):
        with pytest.raises(LayoutError, match="rx"):
            BusLayout(length_m=12.80, width_m=2.55, rx=Point3(-1.0, 1.0, 2.0))


class TestTxPosition:
    def test_upper_height(self):
        assert tx_position(default_layout(), 14, HeightClass.UPPER).z == 1.2

    def test_lower_height(self):
        assert tx_position(default_layout(), 24, HeightClass.LOWER).z == 0.7

    def test_excluded_lower_seat(self):
        with pytest.raises(ExcludedPositionError):
            tx_position(default_layout(), 5, HeightClass.LOWER)

    def test_unknown_seat(self):
        with pytest.raises(SeatNotFoundError):
            tx_position(default_layout(), 99, HeightClass.UPPER)

    def test_height_independent_of_seat(self):
        layout = default_layout()
        zs = {tx_position(layout, s.id, HeightClass.UPPER).z for s in layout.seats}
        assert zs == {1.2}

    def test_seat_relative_mode(self):
        layout = default_layout()
        layout.height_mode = "seat_relative"
        upper = tx_position(layout, 14, HeightClass.UPPER)
        lower = tx_position(layout, 14, HeightClass.LOWER)
        seat = layout.seat(14)
        assert lower.z == seat.seat_height_m
        assert upper.z == pytest.approx(seat.seat_height_m + 0.7)


class TestLinkDistance:
    def test_hand_computed(self):
        layout = BusLayout(
            length_m=12.80, width_m=2.55, rx=Point3(0.0, 0.0, 2.0),
            seats=[SeatSpec(1, 3.0, 0.0, 0.5, Region.A)],
        )
        assert link_distance(layout, 1, HeightClass.UPPER) == pytest.approx(
            math.sqrt(9 + 0.64)
        )

    def test_bounded_by_bus_diagonal(self):
        layout = default_layout()
        bound = math.sqrt(layout.length_m**2 + layout.width_m**2 + 2.0**2)
        for seat in layout.seats:
            assert link_distance(layout, seat.id, HeightClass.UPPER) <= bound

    def test_within_measured_range(self):
        layout = default_layout()
        for seat in layout.seats:
            d = link_distance(layout, seat.id, HeightClass.UPPER)
            assert 1.0 <= d <= 12.0


class TestLayoutIo:
    def test_json_round_trip(self, tmp_path):
        layout = default_layout()
        path = tmp_path / "layout.json"
        save_layout(layout, path)
        back = load_layout(path)
        assert layout_to_dict(back) == layout_to_dict(layout)

    def test_shipped_data_file_matches_code(self):
        from importlib import resources

        with resources.files("busloss").joinpath("data/default_layout.json").open() as f:
            import json

            shipped = layout_from_dict(json.load(f))
        assert layout_to_dict(shipped) == layout_to_dict(default_layout())

    def test_invalid_json_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(LayoutError):
            load_layout(path)

    def test_missing_field_rejected(self):
        with pytest.raises(LayoutError):
            layout_from_dict({"length_m": 12.8})
