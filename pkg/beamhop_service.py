import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from beamhop_errors import BeamHopError, OutputError
from beamhop_models import GeodeticPoint, RunResult
from config import ExperimentConfig, build_config
from engine import Scene, Simulation, make_clock
from layout import assign_spotbeams, associate_ues, drop_ues, load_scene, partition_reporting_ues, scene_hash
from orbits import build_walker, select_serving_satellites
from scheduler import BeamDistanceCache, make_scheduler
from traffic import TrafficSource


logger = logging.getLogger(__name__)

SINR_COLUMNS = ["scheme", "i_max", "sinr_db", "cdf", "seed"]
THROUGHPUT_COLUMNS = ["scheme", "i_max", "satellite_id", "mbps", "seed"]
LIFETIME_COLUMNS = ["scheme", "time_s", "cdf", "i_max", "seed"]
SATISFACTION_COLUMNS = ["scheme", "ue_id", "satisfaction", "i_max", "seed"]


def _seed_streams(seed: int) -> Tuple[np.random.SeedSequence, np.random.SeedSequence]:
    """Independent scene and traffic streams; the scene stream is shared by all schemes"""
    scene_stream, traffic_stream = np.random.SeedSequence(seed).spawn(2)
    return scene_stream, traffic_stream


def _cdf(values: List[float]) -> List[float]:
    n = len(values)
    return [(i + 1) / n for i in range(n)]


def _run_job(config_data: Dict[str, Any], scheme: str, i_max: int, seed: int) -> RunResult:
    # Worker-process entry point; the config travels as its plain dict form
    return BeamHoppingService(build_config(config_data)).run_single(scheme, i_max, seed)


class BeamHoppingService:
    def __init__(self, config: ExperimentConfig):
        self.config = config

    def build_scene(self, seed: int) -> Scene:
        """Constellation, serving satellites, UE drop, beam layout and association"""
        config = self.config
        logger.info(f"Building scene for seed {seed} ({config.band} band)")

        constellation = build_walker(config.constellation, config.epoch_s)
        center = GeodeticPoint(latitude=(config.lat_min + config.lat_max) / 2.0,
                               longitude=(config.lon_min + config.lon_max) / 2.0)
        satellites = select_serving_satellites(constellation, center, config.serving_satellites,
                                               config.min_elevation_deg)

        if config.scene_file:
            ues = load_scene(config.scene_file, config.band)
        else:
            scene_stream, _ = _seed_streams(seed)
            ues = drop_ues(config.ue_count, config.lon_min, config.lon_max, config.lat_min, config.lat_max,
                           np.random.default_rng(scene_stream), config.band)

        groups = partition_reporting_ues(ues, satellites, config.min_elevation_deg)
        sat_by_id = {s.satellite_id: s for s in satellites}
        layouts = {
            sat_id: assign_spotbeams(sat_by_id[sat_id], reporting, config.max_beams, config.beam_diameter_km)
            for sat_id, reporting in groups.items()
        }
        ue_by_id = {ue.ue_id: ue for ue in ues}
        for ue_id, (sat_id, beam_id) in associate_ues(ues, satellites, layouts, config.min_elevation_deg).items():
            ue_by_id[ue_id].serving_satellite = sat_id
            ue_by_id[ue_id].serving_beam = beam_id

        scene = Scene(satellites=satellites, layouts=layouts, ues=ues,
                      band=config.band_profile, geometry=config.array_geometry)
        logger.info(f"Scene ready: {len(satellites)} satellites, {len(scene.covered_ues)}/{len(ues)} UEs covered "
                    f"by {scene.beam_count} beams")
        return scene

    def run_single(self, scheme: str, i_max: int, seed: int, scene: Optional[Scene] = None) -> RunResult:
        """One simulation run; the scene depends only on the seed"""
        config = self.config
        scene = scene or self.build_scene(seed)
        ue_ids = [ue.ue_id for ue in sorted(scene.covered_ues, key=lambda u: u.ue_id)]
        _, traffic_stream = _seed_streams(seed)

        scheduler = make_scheduler(scheme, i_max, config.p_max_w, config.distance_limit_km,
                                   BeamDistanceCache(scene.layouts))
        traffic = TrafficSource(config.traffic, config.packet_size_bits, config.arrival_rate,
                                config.slot_length_s, traffic_stream, ue_ids)
        simulation = Simulation(scene, scheduler, traffic, make_clock(config.horizon_s, config.slot_length_s),
                                efficiency=config.efficiency, se_cap=config.se_cap,
                                propagate_satellites=config.propagate_satellites)

        logger.info(f"Running {scheme} with I_max={i_max}, seed={seed}")
        try:
            report = simulation.run()
        except BeamHopError as e:
            logger.error(f"Run {scheme}/I_max={i_max}/seed={seed} failed: {e}")
            raise

        logger.info(f"Finished {scheme} I_max={i_max} seed={seed}: "
                    f"system satisfaction {report.system_satisfaction:.3f}")
        return RunResult(
            scheme=scheme,
            i_max=i_max,
            seed=seed,
            band=config.band,
            scene_hash=scene_hash(scene.ues, scene.layouts),
            covered_ues=len(scene.covered_ues),
            beam_count=scene.beam_count,
            report=report,
        )

    def run_experiment(self) -> List[RunResult]:
        """Every (scheme, I_max, seed) combination, in a fixed order"""
        config = self.config
        jobs = [(scheme, i_max, seed)
                for scheme in config.scheduler
                for i_max in config.i_max_values
                for seed in config.seed]
        logger.info(f"Scheduling {len(jobs)} runs with {config.workers} worker(s)")

        if config.workers > 1 and len(jobs) > 1:
            data = config.to_dict()
            with ProcessPoolExecutor(max_workers=config.workers) as pool:
                futures = [pool.submit(_run_job, data, *job) for job in jobs]
                return [f.result() for f in futures]

        scenes = {}
        results = []
        for scheme, i_max, seed in jobs:
            if seed not in scenes:
                scenes[seed] = self.build_scene(seed)
            results.append(self.run_single(scheme, i_max, seed, self._fresh(scenes[seed])))
        return results

    @staticmethod
    def _fresh(scene: Scene) -> Scene:
        # satellites may be propagated in place by a run; beams and UEs are read-only
        return Scene(satellites=list(scene.satellites), layouts=scene.layouts, ues=scene.ues,
                     band=scene.band, geometry=scene.geometry)

    def emit_results(self, results: List[RunResult], output_dir: Optional[str] = None) -> Dict[str, str]:
        """Write plot-ready CSV tables, a JSON summary and the run manifest"""
        output_dir = output_dir or self.config.output_dir
        sinr = {c: [] for c in SINR_COLUMNS}
        throughput = {c: [] for c in THROUGHPUT_COLUMNS}
        lifetime = {c: [] for c in LIFETIME_COLUMNS}
        satisfaction = {c: [] for c in SATISFACTION_COLUMNS}

        for result in results:
            if result.covered_ues == 0:
                continue
            report = result.report
            for value, cdf in zip(report.sinr_db, _cdf(report.sinr_db)):
                for column, item in zip(SINR_COLUMNS, (result.scheme, result.i_max, value, cdf, result.seed)):
                    sinr[column].append(item)
            for sat_id, bps in report.satellite_throughput_bps.items():
                for column, item in zip(THROUGHPUT_COLUMNS, (result.scheme, result.i_max, sat_id, bps / 1e6, result.seed)):
                    throughput[column].append(item)
            for value, cdf in zip(report.packet_lifetimes_s, _cdf(report.packet_lifetimes_s)):
                for column, item in zip(LIFETIME_COLUMNS, (result.scheme, value, cdf, result.i_max, result.seed)):
                    lifetime[column].append(item)
            for ue_id, value in report.ue_satisfaction.items():
                for column, item in zip(SATISFACTION_COLUMNS, (result.scheme, ue_id, value, result.i_max, result.seed)):
                    satisfaction[column].append(item)

        paths = {
            "sinr_cdf": os.path.join(output_dir, "sinr_cdf.csv"),
            "throughput": os.path.join(output_dir, "throughput.csv"),
            "lifetime_cdf": os.path.join(output_dir, "lifetime_cdf.csv"),
            "satisfaction": os.path.join(output_dir, "satisfaction.csv"),
            "summary": os.path.join(output_dir, "summary.json"),
            "manifest": os.path.join(output_dir, "manifest.json"),
        }
        try:
            os.makedirs(output_dir, exist_ok=True)
            pd.DataFrame(sinr, columns=SINR_COLUMNS).to_csv(paths["sinr_cdf"], index=False)
            pd.DataFrame(throughput, columns=THROUGHPUT_COLUMNS).to_csv(paths["throughput"], index=False)
            pd.DataFrame(lifetime, columns=LIFETIME_COLUMNS).to_csv(paths["lifetime_cdf"], index=False)
            pd.DataFrame(satisfaction, columns=SATISFACTION_COLUMNS).to_csv(paths["satisfaction"], index=False)
            with open(paths["summary"], "w") as f:
                json.dump(self.summarize(results), f, indent=2, sort_keys=True)
            with open(paths["manifest"], "w") as f:
                json.dump(self.config.to_dict(), f, indent=2, sort_keys=True)
        except OSError as e:
            path = getattr(e, "filename", None) or output_dir
            logger.error(f"Failed to write results to {path}: {e}")
            raise OutputError(str(path), e.strerror or str(e))

        for name, path in paths.items():
            logger.info(f"Wrote {name}: {path}")
        return paths

    def summarize(self, results: List[RunResult]) -> Dict[str, Any]:
        """System satisfaction per scheme (runs with covered UEs only) plus per-run detail"""
        by_scheme: Dict[str, List[float]] = {}
        runs = []
        for result in results:
            report = result.report
            if result.covered_ues > 0:
                by_scheme.setdefault(result.scheme, []).append(report.system_satisfaction)
            throughput = list(report.satellite_throughput_bps.values())
            illuminated = list(report.mean_illuminated_beams.values())
            runs.append({
                "scheme": result.scheme,
                "i_max": result.i_max,
                "seed": result.seed,
                "band": result.band,
                "scene_hash": result.scene_hash,
                "covered_ues": result.covered_ues,
                "beam_count": result.beam_count,
                "system_satisfaction": report.system_satisfaction,
                "mean_satellite_throughput_mbps": float(np.mean(throughput)) / 1e6 if throughput else 0.0,
                "mean_illuminated_beams": float(np.mean(illuminated)) if illuminated else 0.0,
                "median_sinr_db": float(np.median(report.sinr_db)) if report.sinr_db else None,
                "completed_packets": len(report.packet_lifetimes_s),
                "incomplete_packets": report.incomplete_packets,
            })
        return {
            "band": self.config.band,
            "system_satisfaction": {scheme: float(np.mean(values)) for scheme, values in by_scheme.items()},
            "runs": runs,
        }
