"""
Commands of the ``mkv_census`` entry script.

Each command takes a validated :class:`RunConfig` and an output directory,
writes its files there and returns a JSON-ready summary. Errors propagate;
the entry script maps them to exit codes.
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from config.run_config import RunConfig
from ..analysis.modes import count_modes, count_modes_1d
from ..analysis.observables import heatmap
from ..integrators.langevin import get_langevin_potential, simulate_langevin, total_variation
from ..integrators.spde import Trajectory, simulate
from ..solvers.stability import build_linearized, classify, spectrum
from ..solvers.stationary import find_fixed_points, rho_from_moments
from ..studies.convergence import ConvergenceReport, mse_study_J, mse_study_dt
from ..utils.errors import ConfigurationError, DivergenceError
from ..writers.formats import (
    read_roots_csv,
    write_csv,
    write_heatmap,
    write_json,
    write_png,
    write_ppm,
)


logger = logging.getLogger(__name__)

SERIES_COLUMNS = ("time", "I1", "I2", "mass", "neg_fraction")
MIN_MODE_POINTS = 100


def _banner(title: str) -> None:
    logger.info("=" * 60)
    logger.info(title)
    logger.info("=" * 60)


def _series_rows(trajectory: Trajectory) -> List[tuple]:
    s = trajectory.series
    return list(zip(s.times, s.I1, s.I2, s.mass, s.neg_fraction))


# ----------------------------------------------------------------------
# simulate
# ----------------------------------------------------------------------

def cmd_simulate(config: RunConfig, out_dir: Path) -> Dict[str, Any]:
    """
    Run one SPDE trajectory and write its series, heat map, raster and summary.

    Raises:
        DivergenceError: After writing ``series_partial.csv`` for the stored part
    """
    _banner("McKean-Vlasov SPDE simulation")
    out_dir = Path(out_dir)
    spec = config.spec()
    sim = config.simulation.sim_config()
    config_hash = config.config_hash()
    formats = set(config.output.formats)
    logger.info(f"Output directory: {out_dir}")

    try:
        trajectory = simulate(spec, sim)
    except DivergenceError as e:
        if isinstance(e.partial, Trajectory) and "csv" in formats:
            write_csv(out_dir / "series_partial.csv", SERIES_COLUMNS, _series_rows(e.partial), config_hash)
        raise

    files: Dict[str, str] = {}
    if "csv" in formats:
        series_path = write_csv(out_dir / "series.csv", SERIES_COLUMNS, _series_rows(trajectory), config_hash)
        files["series"] = str(series_path)

    image = heatmap(trajectory, config.output.heatmap_M)
    if "bin" in formats:
        files["heatmap"] = str(write_heatmap(out_dir / "heatmap.bin", image))
    if "ppm" in formats:
        files["raster"] = str(write_ppm(out_dir / "heatmap.ppm", image, config.output.colormap))
    if "png" in formats:
        files["png"] = str(write_png(out_dir / "heatmap.png", image, config.output.colormap))

    series = trajectory.series
    summary: Dict[str, Any] = {
        "config_hash": config_hash,
        "config": config.model_dump(mode="json"),
        "steps": trajectory.steps_taken,
        "snapshots": len(trajectory),
        "mass_drift": series.mass_drift(),
        "max_neg_fraction": float(series.neg_fraction.max()),
        "final": {"I1": float(series.I1[-1]), "I2": float(series.I2[-1])},
        "n_modes": None,
        "modes": None,
    }

    analysis = config.analysis
    usable = len(series) - int(analysis.burn_in * len(series))
    if usable >= MIN_MODE_POINTS:
        roots = find_fixed_points(spec.sigma, tol=analysis.tol, N_q=analysis.N_q, potentials=spec.potentials)
        targets = [(r.m1, r.m2) for r in roots]
        report = count_modes(
            series,
            burn_in=analysis.burn_in,
            fixed_points=targets,
            bins=analysis.bins,
            smoothing=analysis.smoothing,
            valley_ratio=analysis.valley_ratio,
            peak_threshold=analysis.peak_threshold,
            occupancy_threshold=analysis.occupancy_threshold,
            match_tolerance=analysis.match_tolerance,
        )
        summary["n_modes"] = report.n_modes
        summary["modes"] = report.to_dict()
        summary["fixed_points"] = targets
    else:
        logger.warning(f"Only {usable} snapshot(s) after burn-in; mode detection skipped")

    if "json" in formats:
        files["summary"] = str(out_dir / "summary.json")
        summary["files"] = files
        write_json(out_dir / "summary.json", summary)
    else:
        summary["files"] = files

    logger.info("Simulation statistics:")
    logger.info(f"  Steps: {trajectory.steps_taken}, snapshots: {len(trajectory)}")
    logger.info(f"  Mass drift: {summary['mass_drift']:.3e}")
    logger.info(f"  Modes: {summary['n_modes']}")
    return summary


# ----------------------------------------------------------------------
# fixed-points
# ----------------------------------------------------------------------

def _root_header(dim: int) -> List[str]:
    header = ["sigma", "m1", "m2"]
    if dim > 2:
        header += [f"moment_{i}" for i in range(dim)]
    return header + ["Z_sigma", "residual", "stability", "leading_re", "leading_im"]


def cmd_fixed_points(
    config: RunConfig, sigma_list: Sequence[float], out_dir: Path, workers: int = 1
) -> Dict[str, Any]:
    """
    Enumerate and classify stationary densities for each diffusion value.

    Writes ``roots.csv`` with one row per root per sigma.
    """
    _banner("Stationary densities of the McKean-Vlasov PDE")
    if not sigma_list:
        raise ConfigurationError("sigma list is empty", "model.sigma")
    analysis = config.analysis
    potentials = config.model.potentials()
    dim = 2 * len(potentials.interaction_harmonics())
    rows, sweep = [], []

    for sigma in sigma_list:
        roots = find_fixed_points(
            sigma, tol=analysis.tol, N_q=analysis.N_q, potentials=potentials, workers=workers
        )
        spec = config.model.spec(analysis.stability_J).with_params(sigma=sigma)
        labelled, spectra = classify(roots, spec, analysis.stability_J, analysis.spectrum_method)
        for root, result in zip(labelled, spectra):
            row = [sigma, root.m1, root.m2]
            if dim > 2:
                row += list(root.moments)
            rows.append(row + [root.Z_sigma, root.residual, root.stability,
                               result.leading.real, result.leading.imag])
        n_stable = sum(r.stability == "stable" for r in labelled)
        sweep.append({"sigma": sigma, "n_roots": len(labelled), "n_stable": n_stable})
        logger.info(f"sigma={sigma}: {len(labelled)} root(s), {n_stable} stable")

    path = write_csv(Path(out_dir) / "roots.csv", _root_header(dim), rows, config.config_hash())

    logger.info("Root count per sigma:")
    for entry in sweep:
        logger.info(f"  sigma={entry['sigma']:<8g} roots={entry['n_roots']} stable={entry['n_stable']}")
    return {"roots_file": str(path), "sweep": sweep}


# ----------------------------------------------------------------------
# stability
# ----------------------------------------------------------------------

def cmd_stability(config: RunConfig, root_file: Path, out_dir: Path) -> Dict[str, Any]:
    """
    Spectrum of the linearized operator for every root in a roots table.

    Writes ``eigs_<index>.csv`` (re, im) per root and ``leading.csv``.
    """
    _banner("Linear stability of stationary densities")
    out_dir = Path(out_dir)
    logger.info(f"Roots file: {root_file}")
    roots = read_roots_csv(root_file)
    analysis = config.analysis
    potentials = config.model.potentials()
    config_hash = config.config_hash()

    leading_rows, files = [], []
    for index, entry in enumerate(roots):
        moments = [v for k, v in entry.items() if k.startswith("moment_")] or [entry["m1"], entry["m2"]]
        root = rho_from_moments(moments, entry["sigma"], analysis.N_q, potentials)
        spec = config.model.spec(analysis.stability_J).with_params(sigma=entry["sigma"])
        result = spectrum(build_linearized(root, spec, analysis.stability_J), method=analysis.spectrum_method)

        eig_rows = [(float(ev.real), float(ev.imag)) for ev in result.eigenvalues]
        files.append(str(write_csv(out_dir / f"eigs_{index:03d}.csv", ["re", "im"], eig_rows, config_hash)))
        leading_rows.append(
            (entry["sigma"], root.m1, root.m2, result.leading.real, result.leading.imag, result.label)
        )
        logger.info(
            f"Root {index}: sigma={entry['sigma']}, ({root.m1:+.6f}, {root.m2:+.6f}) -> {result.label} "
            f"(Re lambda_1 = {result.leading.real:+.3e})"
        )

    leading = write_csv(
        out_dir / "leading.csv", ["sigma", "m1", "m2", "re", "im", "label"], leading_rows, config_hash
    )
    return {"eigs_files": files, "leading_file": str(leading), "labels": [r[-1] for r in leading_rows]}


# ----------------------------------------------------------------------
# converge
# ----------------------------------------------------------------------

def cmd_converge(
    config: RunConfig,
    axis: str,
    sweep: Optional[Sequence[float]],
    out_dir: Path,
    workers: int = 1,
    ci_seed: int = 0,
) -> ConvergenceReport:
    """Strong-convergence study in ``dt`` or ``J``; writes ``convergence.csv``."""
    _banner(f"Strong convergence in {axis}")
    conv = config.convergence
    sim = config.simulation.sim_config()
    spec = config.spec()
    common = dict(workers=workers, level=conv.level, B=conv.bootstrap_samples, ci_seed=ci_seed)

    if axis == "dt":
        dt_list = list(sweep) if sweep else conv.dt_list
        report = mse_study_dt(spec, sim, dt_list, conv.dt_ref, conv.trials, **common)
    elif axis == "J":
        J_list = [int(J) for J in sweep] if sweep else conv.J_list
        report = mse_study_J(spec, sim, J_list, conv.J_ref, conv.trials, **common)
    else:
        raise ConfigurationError(f"unknown axis {axis!r}; expected dt or J", "axis")

    with np.errstate(divide="ignore"):
        rows = [
            (p.param, p.mse, p.lo, p.hi, float(np.log10(p.param)), float(np.log10(p.mse)))
            for p in report.points
        ]
    write_csv(
        Path(out_dir) / "convergence.csv",
        ["param", "mse", "ci_low", "ci_high", "log10_param", "log10_mse"],
        rows,
        config.config_hash(),
    )
    logger.info(
        f"Fitted slope: {report.fitted_slope:.3f} (strong order {report.strong_order:.3f}) "
        f"over {report.n_trials} trials"
    )
    if report.diverged:
        logger.warning(f"Diverged {axis} values left out of the fit: {report.diverged}")
    return report


# ----------------------------------------------------------------------
# langevin
# ----------------------------------------------------------------------

def cmd_langevin(config: RunConfig, out_dir: Path) -> Dict[str, Any]:
    """Scalar Langevin path in a multi-well potential; writes ``path.csv`` and ``histogram.csv``."""
    _banner("Scalar Langevin dynamics")
    out_dir = Path(out_dir)
    lv = config.langevin
    potential = get_langevin_potential(lv.potential)
    path = simulate_langevin(potential.U_prime, lv.alpha, lv.dt, lv.t_max, lv.seed, y0=potential.start)
    config_hash = config.config_hash()

    kept = np.arange(0, path.size, lv.stride)
    write_csv(out_dir / "path.csv", ["time", "y"], zip(kept * lv.dt, path[kept]), config_hash)

    edges = np.linspace(potential.window[0], potential.window[1], lv.bins + 1)
    counts, _ = np.histogram(path, bins=edges)
    empirical = counts / max(1, counts.sum())
    reference = potential.maxwellian(lv.alpha, edges) if lv.alpha > 0 else np.zeros(lv.bins)
    write_csv(
        out_dir / "histogram.csv",
        ["bin_left", "bin_right", "empirical", "maxwellian"],
        zip(edges[:-1], edges[1:], empirical, reference),
        config_hash,
    )

    n_modes, positions = count_modes_1d(path)
    minima = potential.minima()
    tv = total_variation(path, potential, lv.alpha, lv.bins) if lv.alpha > 0 else float("nan")
    logger.info("Langevin statistics:")
    logger.info(f"  Samples: {path.size}")
    logger.info(f"  Histogram modes: {n_modes} at {np.round(positions, 3).tolist()}")
    logger.info(f"  Minima of U: {len(minima)} at {np.round(minima, 3).tolist()}")
    logger.info(f"  Total variation to exp(-2U/alpha): {tv:.4f}")
    return {"n_samples": int(path.size), "n_modes": n_modes, "n_minima": int(len(minima)), "total_variation": tv}
