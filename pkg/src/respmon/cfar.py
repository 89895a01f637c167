"""Cell-averaging CFAR detection and peak extraction on range profiles.

The detector thresholds each cell against the mean linear power of the
training cells on both sides, excluding guard cells and the cell under test.
The threshold multiplier is the closed form exact for exponentially
distributed noise power, so the design false-alarm probability holds per
cell without calibration.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .dsp import POWER_FLOOR_DB, RangeProfile

EDGE_POLICIES = ("shrink", "wrap", "skip")


@dataclass(frozen=True)
class CfarConfig:
    """CA-CFAR window geometry and design false-alarm probability.

    train_cells and guard_cells count cells per side of the cell under test.
    edge_policy controls cells whose training window would cross the profile
    edge: 'shrink' uses the cells that exist (rescaling the threshold factor
    for the reduced count), 'wrap' indexes circularly, 'skip' emits no
    detections there.
    """

    train_cells: int = 8
    guard_cells: int = 4
    pfa: float = 1e-3
    edge_policy: str = "shrink"

    def __post_init__(self):
        if self.train_cells < 1:
            raise ValueError("train_cells must be >= 1")
        if self.guard_cells < 0:
            raise ValueError("guard_cells must be >= 0")
        if not 0.0 < self.pfa < 1.0:
            raise ValueError(f"pfa must be in (0, 1), got {self.pfa}")
        if self.edge_policy not in EDGE_POLICIES:
            raise ValueError(f"edge_policy must be one of {EDGE_POLICIES}")


@dataclass(frozen=True)
class Detection:
    """One CFAR exceedance that is also a local peak."""

    bin: int
    range_m: float
    power_db: float
    threshold_db: float
    chirp_index: int = 0
    t_slow: float = 0.0

    def to_json(self) -> str:
        return json.dumps(asdict(self))


def _alpha_for(n_train_total: int, pfa: float) -> float:
    return n_train_total * (pfa ** (-1.0 / n_train_total) - 1.0)


def cfar_alpha(cfg: CfarConfig) -> float:
    """Threshold multiplier N (Pfa^(-1/N) - 1) for N total training cells."""
    return _alpha_for(2 * cfg.train_cells, cfg.pfa)


# Per-profile-length geometry cache: training sums are O(L) via prefix sums
# over precomputed (clipped) window indices; the edge-dependent threshold
# multiplier only depends on (length, config).
_GEOM_CACHE: dict[tuple, tuple] = {}


def _geometry(length: int, cfg: CfarConfig):
    key = (length, cfg)
    geom = _GEOM_CACHE.get(key)
    if geom is None:
        i = np.arange(length)
        tr, g = cfg.train_cells, cfg.guard_cells
        if cfg.edge_policy == "wrap":
            # indices into the prefix sum of power tiled three times
            j = i + length
            idx = (j - g - tr, j - g, j + g + 1, j + g + tr + 1)
            n_total = np.full(length, 2 * tr)
        else:
            idx = (
                np.clip(i - g - tr, 0, length),
                np.clip(i - g, 0, length),
                np.clip(i + g + 1, 0, length),
                np.clip(i + g + tr + 1, 0, length),
            )
            if cfg.edge_policy == "shrink":
                n_total = np.clip(i - g, 0, tr) + np.clip(length - 1 - i - g, 0, tr)
            else:
                n_total = np.full(length, 2 * tr)
        ok = n_total > 0
        inv_n = np.zeros(length)
        inv_n[ok] = 1.0 / n_total[ok]
        alpha = np.full(length, np.inf)
        alpha[ok] = n_total[ok] * (cfg.pfa ** (-1.0 / n_total[ok]) - 1.0)
        scale = alpha * inv_n  # threshold = scale * (training sum)
        valid = ok
        if cfg.edge_policy == "skip":
            border = tr + g
            valid = ok & (i >= border) & (i < length - border)
            scale = np.where(valid, scale, np.inf)
        elif not ok.all():
            scale = np.where(ok, scale, np.inf)
        geom = (idx, alpha, inv_n, scale, valid)
        if len(_GEOM_CACHE) > 64:
            _GEOM_CACHE.clear()
        _GEOM_CACHE[key] = geom
    return geom


def _thresholds(power: np.ndarray, cfg: CfarConfig) -> np.ndarray:
    """Per-cell detection threshold in linear power (inf where undefined)."""
    length = len(power)
    idx, alpha, inv_n, scale, valid = _geometry(length, cfg)
    lo_l, hi_l, lo_r, hi_r = idx
    if cfg.edge_policy == "wrap":
        csum = np.empty(length * 3 + 1)
        csum[0] = 0.0
        np.cumsum(np.concatenate((power, power, power)), out=csum[1:])
        return scale * ((csum[hi_l] - csum[lo_l]) + (csum[hi_r] - csum[lo_r]))
    csum = np.empty(length + 1)
    csum[0] = 0.0
    np.cumsum(power, out=csum[1:])
    # interior cells have unclipped windows: express the prefix-sum
    # differences as shifted slices (contiguous, no gather)
    tr, g = cfg.train_cells, cfg.guard_cells
    a, b = tr + g, length - tr - g  # interior is [a, b)
    train_sum = np.empty(length)
    if b > a:
        interior = train_sum[a:b]
        np.subtract(csum[a - g : b - g], csum[a - g - tr : b - g - tr], out=interior)
        interior += csum[a + g + tr + 1 : b + g + tr + 1]
        interior -= csum[a + g + 1 : b + g + 1]
    for edge in (slice(0, min(a, length)), slice(max(b, 0), length)):
        train_sum[edge] = (csum[hi_l[edge]] - csum[lo_l[edge]]) + (
            csum[hi_r[edge]] - csum[lo_r[edge]]
        )
    return scale * train_sum


def ca_cfar(
    profile: RangeProfile,
    cfg: CfarConfig,
    range_axis: np.ndarray | None = None,
) -> list[Detection]:
    """Run CA-CFAR over one range profile.

    A Detection is emitted where the cell's linear power exceeds the local
    threshold and the cell is a maximum over [bin-guard, bin+guard] (peak
    consolidation, so one reflector yields one detection).  `range_axis`
    supplies the bin-to-range mapping for the Detection records; without it
    range_m is NaN.
    """
    bins = profile.complex_bins
    length = len(bins)
    if length <= 2 * (cfg.train_cells + cfg.guard_cells):
        raise ValueError(
            f"profile length {length} too short for "
            f"{cfg.train_cells} train + {cfg.guard_cells} guard cells per side"
        )
    power = bins.real**2 + bins.imag**2
    threshold = _thresholds(power, cfg)
    hit_bins = np.nonzero(power > threshold)[0]
    if hit_bins.size == 0:
        return []
    g = cfg.guard_cells
    detections = []
    floor_lin = 10.0 ** (POWER_FLOOR_DB / 10.0)
    wrap = cfg.edge_policy == "wrap"
    for b in hit_bins:
        b = int(b)
        if g > 0:  # peak consolidation over [bin - guard, bin + guard]
            if wrap:
                neigh = power.take(np.arange(b - g, b + g + 1), mode="wrap")
                if power[b] < neigh.max():
                    continue
            elif power[b] < power[max(0, b - g) : b + g + 1].max():
                continue
        detections.append(
            Detection(
                bin=b,
                range_m=float(range_axis[b]) if range_axis is not None else float("nan"),
                power_db=10.0 * math.log10(max(power[b], floor_lin)),
                threshold_db=10.0 * math.log10(max(threshold[b], floor_lin)),
                chirp_index=profile.chirp_index,
                t_slow=profile.t_slow,
            )
        )
    return detections


def strongest_target(
    detections: list[Detection],
    gate: tuple[float, float] | None = None,
) -> Detection | None:
    """Highest-power detection within the range gate; ties go to the nearer bin."""
    best = None
    for det in detections:
        if gate is not None and not (gate[0] <= det.range_m <= gate[1]):
            continue
        if best is None or det.power_db > best.power_db or (
            det.power_db == best.power_db and det.bin < best.bin
        ):
            best = det
    return best
