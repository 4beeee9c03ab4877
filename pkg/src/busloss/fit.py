"""Least-squares estimation of (alpha, beta, sigma) from path loss samples.

Fitting is ordinary least squares of path loss on 10*log10(distance); the
intercept is alpha, the slope is beta, and sigma is the residual standard
deviation with n-2 degrees of freedom.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .models import HeightClass, PathLossModel, Region


class InsufficientDataError(ValueError):
    """Fewer samples than the fit requires."""


class DegenerateDataError(ValueError):
    """Samples cannot identify the model (e.g. a single distinct distance)."""


@dataclass
class SampleSet:
    """(distance, path loss) pairs with optional seat/region/height tags."""

    distance_m: np.ndarray
    path_loss_db: np.ndarray
    seat: list[int | None] | None = None
    region: list[Region | None] | None = None
    height: list[HeightClass | None] | None = None

    def __post_init__(self) -> None:
        self.distance_m = np.asarray(self.distance_m, dtype=float)
        self.path_loss_db = np.asarray(self.path_loss_db, dtype=float)
        if self.distance_m.shape != self.path_loss_db.shape:
            raise ValueError("distance and path loss arrays must match in length")
        if np.any(~np.isfinite(self.distance_m)) or np.any(self.distance_m <= 0):
            raise ValueError("all distances must be finite and > 0")
        for name in ("seat", "region", "height"):
            tags = getattr(self, name)
            if tags is not None and len(tags) != len(self.distance_m):
                raise ValueError(f"{name} tags must match sample count")

    def __len__(self) -> int:
        return len(self.distance_m)

    def subset(self, mask: np.ndarray) -> "SampleSet":
        idx = np.flatnonzero(mask)
        pick = lambda tags: [tags[i] for i in idx] if tags is not None else None
        return SampleSet(
            self.distance_m[idx],
            self.path_loss_db[idx],
            seat=pick(self.seat),
            region=pick(self.region),
            height=pick(self.height),
        )


@dataclass
class FitResult:
    """Fitted model plus residual diagnostics."""

    model: PathLossModel
    residuals_db: np.ndarray
    r_squared: float
    n: int


def _uniform_tag(tags):
    if tags is None:
        return None
    values = {t for t in tags}
    if len(values) == 1:
        return values.pop()
    return None


def fit_log_distance(
    samples: SampleSet,
    region: Region | None = None,
    height: HeightClass | None = None,
) -> FitResult:
    """OLS fit of the log-distance model; raises when the data cannot support it.

    region/height tag the resulting model; left at None they are inferred
    from the samples when the tags are uniform.
    """
    n = len(samples)
    if n < 3:
        raise InsufficientDataError(f"need at least 3 samples, got {n}")
    d = samples.distance_m
    if np.unique(d).size < 2:
        raise DegenerateDataError("need at least two distinct distances")

    x = 10.0 * np.log10(d)
    y = samples.path_loss_db
    beta, alpha = np.polyfit(x, y, 1)
    residuals = y - (alpha + beta * x)
    ssr = float(residuals @ residuals)
    sigma = math.sqrt(ssr / (n - 2))
    sst = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 if sst == 0.0 else min(1.0, max(0.0, 1.0 - ssr / sst))

    model = PathLossModel(
        alpha_db=float(alpha),
        beta=float(beta),
        sigma_db=sigma,
        region=region if region is not None else _uniform_tag(samples.region),
        height=height if height is not None else _uniform_tag(samples.height),
    )
    return FitResult(model=model, residuals_db=residuals, r_squared=r_squared, n=n)


@dataclass
class PartitionFit:
    """Per-(region, height) fits; cells with too little data are skipped."""

    fits: dict[tuple[Region, HeightClass], FitResult] = field(default_factory=dict)
    skipped: list[tuple[Region, HeightClass, int]] = field(default_factory=list)


def fit_by_partition(samples: SampleSet) -> PartitionFit:
    """Fit every tagged (region, height) cell plus a pooled All cell per height."""
    if samples.region is None or samples.height is None:
        raise ValueError("samples must carry region and height tags")

    result = PartitionFit()
    regions = np.array([r.value if r is not None else "" for r in samples.region])
    heights = np.array([h.value if h is not None else "" for h in samples.height])
    for h in HeightClass:
        height_mask = heights == h.value
        for r in (Region.A, Region.B, Region.C, Region.D):
            mask = height_mask & (regions == r.value)
            n = int(mask.sum())
            if n == 0:
                continue
            try:
                result.fits[(r, h)] = fit_log_distance(
                    samples.subset(mask), region=r, height=h
                )
            except (InsufficientDataError, DegenerateDataError):
                result.skipped.append((r, h, n))
        n_all = int(height_mask.sum())
        if n_all == 0:
            continue
        try:
            result.fits[(Region.ALL, h)] = fit_log_distance(
                samples.subset(height_mask), region=Region.ALL, height=h
            )
        except (InsufficientDataError, DegenerateDataError):
            result.skipped.append((Region.ALL, h, n_all))
    return result


def synth_samples(
    model: PathLossModel, distances: Sequence[float], seed: int
) -> SampleSet:
    """Shadow-faded samples at the given distances, reproducible per seed."""
    rng = np.random.default_rng(seed)
    d = np.asarray(distances, dtype=float)
    if np.any(~np.isfinite(d)) or np.any(d <= 0):
        raise ValueError("all distances must be finite and > 0")
    means = model.alpha_db + 10.0 * model.beta * np.log10(d)
    losses = means + model.sigma_db * rng.standard_normal(len(d))
    n = len(d)
    return SampleSet(
        d,
        losses,
        region=[model.region] * n if model.region is not None else None,
        height=[model.height] * n if model.height is not None else None,
    )


SAMPLE_CSV_FIELDS = ("distance_m", "path_loss_db", "seat", "region", "height")


def samples_to_csv(samples: SampleSet) -> str:
    """Serialize to the sample CSV schema; tag columns appear only when present."""
    fields = ["distance_m", "path_loss_db"]
    if samples.seat is not None:
        fields.append("seat")
    if samples.region is not None:
        fields.append("region")
    if samples.height is not None:
        fields.append("height")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for i in range(len(samples)):
        row = [repr(float(samples.distance_m[i])), repr(float(samples.path_loss_db[i]))]
        if samples.seat is not None:
            row.append("" if samples.seat[i] is None else str(samples.seat[i]))
        if samples.region is not None:
            r = samples.region[i]
            row.append("" if r is None else r.value)
        if samples.height is not None:
            h = samples.height[i]
            row.append("" if h is None else h.value)
        writer.writerow(row)
    return buf.getvalue()


def samples_from_csv(text: str, source: str = "<string>") -> SampleSet:
    """Parse the sample CSV schema, naming the offending line on error."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError(f"{source}: empty sample file") from None
    header = [h.strip() for h in header]
    if header[:2] != ["distance_m", "path_loss_db"]:
        raise ValueError(
            f"{source}:1: header must start with distance_m,path_loss_db"
        )
    for col in header[2:]:
        if col not in ("seat", "region", "height"):
            raise ValueError(f"{source}:1: unknown column {col!r}")
    col_index = {name: i for i, name in enumerate(header)}

    distances, losses = [], []
    seats = [] if "seat" in col_index else None
    regions = [] if "region" in col_index else None
    heights = [] if "height" in col_index else None
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise ValueError(f"{source}:{lineno}: expected {len(header)} columns")
        try:
            d = float(row[0])
            pl = float(row[1])
        except ValueError:
            raise ValueError(f"{source}:{lineno}: non-numeric value") from None
        if not math.isfinite(d) or d <= 0:
            raise ValueError(f"{source}:{lineno}: distance must be > 0")
        distances.append(d)
        losses.append(pl)
        try:
            if seats is not None:
                cell = row[col_index["seat"]].strip()
                seats.append(int(cell) if cell else None)
            if regions is not None:
                cell = row[col_index["region"]].strip()
                regions.append(Region(cell) if cell else None)
            if heights is not None:
                cell = row[col_index["height"]].strip()
                heights.append(HeightClass(cell) if cell else None)
        except ValueError:
            raise ValueError(f"{source}:{lineno}: bad tag value") from None
    return SampleSet(
        np.asarray(distances), np.asarray(losses),
        seat=seats, region=regions, height=heights,
    )


def fit_result_to_dict(result: FitResult) -> dict:
    from .models import model_to_dict

    out = model_to_dict(result.model)
    out["r_squared"] = result.r_squared
    out["n"] = result.n
    return out
