#!/usr/bin/env python3
import argparse
import logging
import sys
from typing import List, Optional

from beamhop_errors import BeamHopError, ConfigurationError, OutputError
from beamhop_service import BeamHoppingService
from config import build_config, parse_config, runtime_config


EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3
EXIT_IO = 4


def setup_logging(level: str = runtime_config.log_level):
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Beam hopping system-level simulator for LEO downlinks",
        epilog="Environment overrides: BEAMHOP_SCHEDULER, BEAMHOP_SEED, BEAMHOP_OUTPUT_DIR, "
               "BEAMHOP_WORKERS, BEAMHOP_I_MAX_SWEEP, BEAMHOP_LOG_LEVEL (CLI > env > file > defaults)",
    )
    parser.add_argument("--config", help="JSON experiment file (defaults apply when omitted)")
    parser.add_argument("--scheduler", help="distance_limit, no_limit, round_robin, or a comma list")
    parser.add_argument("--seed", help="seed or comma list of seeds")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--workers", type=int, help="concurrent runs")
    parser.add_argument("--sweep-imax", help="comma list of I_max values, e.g. 10,20,40,100")
    parser.add_argument("--log-level", default=runtime_config.log_level, help="logging level (default: INFO)")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    logger = logging.getLogger("beamhop-cli")

    overrides = {
        "scheduler": args.scheduler,
        "seed": args.seed,
        "output_dir": args.out,
        "workers": args.workers,
        "i_max_sweep": args.sweep_imax,
    }

    try:
        config = parse_config(args.config, overrides) if args.config else build_config({}, overrides)
    except ConfigurationError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG

    service = BeamHoppingService(config)
    try:
        results = service.run_experiment()
        paths = service.emit_results(results)
    except OutputError as e:
        logger.error(f"Output error: {e}")
        return EXIT_IO
    except ConfigurationError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG
    except BeamHopError as e:
        logger.error(f"Simulation failed: {e}")
        return EXIT_RUNTIME
    except OSError as e:
        logger.error(f"I/O error: {e}")
        return EXIT_IO

    summary = service.summarize(results)
    for scheme, value in summary["system_satisfaction"].items():
        logger.info(f"{scheme}: system satisfaction {value:.1%}")
    logger.info(f"Results in {config.output_dir} ({len(paths)} files)")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
