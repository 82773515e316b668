#!/usr/bin/env python3
"""
Demo script walking through the link calculators and a small scheme comparison
"""
from beamhop_service import BeamHoppingService
from beamhop_tools import link_budget
from config import build_config


def main():
    print('=== Boresight Link Budget (7.5 W per beam) ===')
    for band in ('s', 'ka'):
        for elevation in (90, 60, 30, 10):
            budget = link_budget(band, elevation)
            print(f'  {band.upper():>2} @ {elevation:>2} deg: range {budget["slant_range_km"]:7.1f} km, '
                  f'gain {budget["channel_gain_db"]:7.2f} dB, SNR {budget["snr_db"]:5.1f} dB')

    print('\n=== Scheme Comparison (200 UEs, 50 ms, Ka band) ===')
    config = build_config({
        'ue_count': 200,
        'lon_min': 107.0, 'lon_max': 109.0,
        'lat_min': 29.5, 'lat_max': 31.0,
        'horizon_s': 0.05,
        'i_max': 10,
        'scheduler': ['distance_limit', 'no_limit', 'round_robin'],
    })
    service = BeamHoppingService(config)
    results = service.run_experiment()
    first = results[0]
    print(f'Scene {first.scene_hash[:12]}: {first.covered_ues} covered UEs, {first.beam_count} beams')
    for run in service.summarize(results)['runs']:
        print(f'  - {run["scheme"]:<15} median SINR {run["median_sinr_db"] or float("nan"):6.2f} dB, '
              f'{run["mean_illuminated_beams"]:4.1f} lit beams, '
              f'{run["mean_satellite_throughput_mbps"]:8.1f} Mbps per satellite')

    print('\n=== FTP3 Traffic (S band, lambda = 8 packets/s) ===')
    config = build_config({
        'band': 's',
        'traffic': 'ftp3',
        'ue_count': 200,
        'lon_min': 107.0, 'lon_max': 109.0,
        'lat_min': 29.5, 'lat_max': 31.0,
        'horizon_s': 0.2,
        'scheduler': ['distance_limit', 'round_robin'],
    })
    service = BeamHoppingService(config)
    summary = service.summarize(service.run_experiment())
    for scheme, satisfaction in summary['system_satisfaction'].items():
        print(f'  - {scheme}: system satisfaction {satisfaction:.1%}')

if __name__ == "__main__":
    main()
