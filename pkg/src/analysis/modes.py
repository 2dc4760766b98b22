"""Metastable-mode detection and hop counting on (I1, I2) series."""

import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import ndimage

from ..utils.errors import ConfigurationError
from .observables import ObservableSeries


logger = logging.getLogger(__name__)

# A weaker peak must dip below this fraction of its height before the next one.
VALLEY_RATIO = 0.75


@dataclass
class Cluster:
    """One detected mode."""

    centroid: Tuple[float, float]
    occupancy: float
    matched_fixed_point: Optional[int] = None


@dataclass
class ModeReport:
    """
    Result of :func:`count_modes`.

    Attributes:
        clusters: All detected clusters, by decreasing occupancy
        n_modes: Clusters whose occupancy exceeds the threshold
        hop_count: Transitions between significant clusters
        mean_residence_time: Mean uninterrupted stay in a cluster (time units)
    """

    clusters: List[Cluster] = field(default_factory=list)
    n_modes: int = 0
    hop_count: int = 0
    mean_residence_time: float = 0.0

    def significant(self, threshold: float) -> List[Cluster]:
        return [c for c in self.clusters if c.occupancy > threshold]

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _valley_depth(smoothed: np.ndarray, a: Tuple[int, ...], b: Tuple[int, ...]) -> float:
    """Lowest smoothed value on the segment between two bins."""
    n = 2 * max(abs(i - j) for i, j in zip(a, b)) + 1
    line = np.array([np.linspace(i, j, n) for i, j in zip(a, b)])
    return float(ndimage.map_coordinates(smoothed, line, order=1).min())


def _peak_bins(
    smoothed: np.ndarray, rel_height: float, min_separation: int, valley_ratio: float = VALLEY_RATIO
) -> List[Tuple[int, ...]]:
    """
    Local maxima above ``rel_height * max``.

    Weaker peaks within ``min_separation`` bins of a stronger one, or not
    separated from it by a dip below ``valley_ratio`` of their own height,
    are dropped.
    """
    top = smoothed.max()
    if top <= 0:
        return []
    is_max = (ndimage.maximum_filter(smoothed, size=3, mode="constant") == smoothed) & (
        smoothed >= rel_height * top
    )
    candidates = sorted(zip(*np.nonzero(is_max)), key=lambda idx: -smoothed[idx])
    kept: List[Tuple[int, ...]] = []
    for idx in candidates:
        idx = tuple(int(i) for i in idx)
        height = smoothed[idx]
        if all(
            max(abs(a - b) for a, b in zip(idx, other)) > min_separation
            and _valley_depth(smoothed, idx, other) < valley_ratio * height
            for other in kept
        ):
            kept.append(idx)
    return kept


def _padded_range(values: np.ndarray) -> Tuple[float, float]:
    lo, hi = float(values.min()), float(values.max())
    if hi - lo < 1e-12:
        return lo - 0.5, hi + 0.5
    return lo, hi


def count_hops(
    points: np.ndarray, times: np.ndarray, centroids: np.ndarray, radius_fraction: float = 0.25
) -> Tuple[int, float]:
    """
    Count transitions between centroids with hysteresis.

    A hop to centroid j is registered only once the trajectory enters the ball
    of radius ``radius_fraction * |c_current - c_j|`` around ``c_j``.

    Returns:
        ``(hop_count, mean_residence_time)``
    """
    if len(centroids) < 2 or len(points) == 0:
        span = float(times[-1] - times[0]) if len(times) else 0.0
        return 0, span

    pair_dist = np.linalg.norm(centroids[:, None, :] - centroids[None, :, :], axis=-1)
    dist = np.linalg.norm(points[:, None, :] - centroids[None, :, :], axis=-1)
    current = int(np.argmin(dist[0]))
    hop_times = [float(times[0])]
    for n in range(1, len(points)):
        inside = dist[n] < radius_fraction * pair_dist[current]
        inside[current] = False
        if inside.any():
            current = int(np.argmax(inside))
            hop_times.append(float(times[n]))
    hop_times.append(float(times[-1]))
    stays = np.diff(hop_times)
    return len(hop_times) - 2, float(stays.mean())


def count_modes(
    series: ObservableSeries,
    burn_in: float = 0.1,
    fixed_points: Optional[Sequence[Tuple[float, float]]] = None,
    bins: int = 64,
    smoothing: float = 4.0,
    peak_threshold: float = 0.05,
    occupancy_threshold: float = 0.02,
    match_tolerance: float = 0.15,
    valley_ratio: float = VALLEY_RATIO,
) -> ModeReport:
    """
    Cluster the post-burn-in (I1, I2) cloud into metastable modes.

    The points are binned on a ``bins x bins`` histogram of square bins
    covering their range, smoothed with a Gaussian of ``smoothing`` bins, and
    every local maximum above ``peak_threshold`` of the global peak seeds a
    cluster, unless the smoothed density between it and a stronger peak
    stays above ``valley_ratio`` of its height. Points go to the nearest seed
    and set the occupancy. The centroid is the mean of the members within
    ``smoothing`` bins of the seed, which keeps it on the peak of a hump
    even when a populated plateau joins the wells.

    Args:
        series: Observable series of a trajectory
        burn_in: Leading fraction of the series to discard
        fixed_points: Optional ``(m1, m2)`` targets to match centroids against
        bins: Histogram bins per axis
        smoothing: Gaussian bandwidth in bins
        peak_threshold: Relative peak height for a cluster seed
        occupancy_threshold: Minimum occupancy for a cluster to count as a mode
        match_tolerance: Distance within which a centroid matches a fixed point
        valley_ratio: Dip, relative to the weaker peak, that separates two peaks

    Returns:
        ModeReport
    """
    if not 0.0 < valley_ratio <= 1.0:
        raise ConfigurationError(f"valley ratio must be in (0, 1], got {valley_ratio}", "analysis.valley_ratio")
    if not 0.0 <= burn_in < 1.0:
        raise ConfigurationError(f"burn-in fraction must be in [0, 1), got {burn_in}", "analysis.burn_in")
    start = int(burn_in * len(series))
    points = series.points()[start:]
    times = series.times[start:]
    if len(points) < 100:
        raise ConfigurationError(
            f"need at least 100 points after burn-in, got {len(points)}", "analysis.burn_in"
        )

    if np.ptp(points, axis=0).max() < 1e-12:
        seeds = points[:1].copy()
        core_radius = np.inf
    else:
        # square bins so the smoothing bandwidth is isotropic
        center = 0.5 * (points.max(axis=0) + points.min(axis=0))
        half_span = 0.5 * float(np.ptp(points, axis=0).max()) * (1.0 + 1e-9)
        ranges = [(c - half_span, c + half_span) for c in center]
        hist, xedges, yedges = np.histogram2d(points[:, 0], points[:, 1], bins=bins, range=ranges)
        smoothed = ndimage.gaussian_filter(hist, sigma=smoothing, mode="constant")
        peaks = _peak_bins(
            smoothed, peak_threshold, min_separation=int(np.ceil(2 * smoothing)), valley_ratio=valley_ratio
        )
        xc = 0.5 * (xedges[1:] + xedges[:-1])
        yc = 0.5 * (yedges[1:] + yedges[:-1])
        seeds = np.array([[xc[i], yc[j]] for i, j in peaks])
        core_radius = smoothing * (xedges[1] - xedges[0])
        logger.debug(f"Histogram peaks at {seeds.tolist()}")

    distances = np.linalg.norm(points[:, None, :] - seeds[None, :, :], axis=-1)
    labels = np.argmin(distances, axis=1)
    clusters = []
    for label in range(len(seeds)):
        in_cluster = labels == label
        if not in_cluster.any():
            continue
        core = in_cluster & (distances[:, label] <= core_radius)
        centroid = points[core if core.any() else in_cluster].mean(axis=0)
        clusters.append(Cluster((float(centroid[0]), float(centroid[1])), float(in_cluster.mean())))
    clusters.sort(key=lambda c: -c.occupancy)

    if fixed_points is not None and len(fixed_points):
        targets = np.asarray(fixed_points, dtype=float).reshape(-1, 2)
        for cluster in clusters:
            gaps = np.linalg.norm(targets - np.asarray(cluster.centroid), axis=1)
            best = int(np.argmin(gaps))
            if gaps[best] <= match_tolerance:
                cluster.matched_fixed_point = best

    modes = [c for c in clusters if c.occupancy > occupancy_threshold]
    centroids = np.array([c.centroid for c in modes]).reshape(-1, 2)
    hop_count, residence = count_hops(points, times, centroids)

    report = ModeReport(clusters, len(modes), hop_count, residence)
    logger.info(
        f"Detected {report.n_modes} mode(s), {hop_count} hop(s), "
        f"mean residence {residence:.4g}"
    )
    return report


def count_modes_1d(
    samples: np.ndarray,
    bins: int = 100,
    smoothing: float = 2.0,
    peak_threshold: float = 0.05,
) -> Tuple[int, np.ndarray]:
    """
    Count the modes of a scalar sample (histogram peaks after smoothing).

    Returns:
        ``(count, peak_positions)``
    """
    samples = np.asarray(samples, dtype=float)
    lo, hi = _padded_range(samples)
    hist, edges = np.histogram(samples, bins=bins, range=(lo, hi))
    smoothed = ndimage.gaussian_filter1d(hist.astype(float), sigma=smoothing, mode="constant")
    peaks = _peak_bins(smoothed, peak_threshold, min_separation=int(np.ceil(2 * smoothing)))
    centers = 0.5 * (edges[1:] + edges[:-1])
    positions = np.sort(np.array([centers[i] for (i,) in peaks]))
    return len(positions), positions
