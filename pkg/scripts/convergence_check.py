#!/usr/bin/env python3
"""Print the cutoff-doubling stability table for one or more presets.

Example:
    python scripts/convergence_check.py --names fig2d fig3a --cutoff 32
"""

import argparse
import sys

from dephasim.config import config_from_dict
from dephasim.presets import PRESET_NAMES, preset_config
from dephasim.sweep import convergence_report


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--names", nargs="+", default=["fig2d"], choices=PRESET_NAMES, metavar="NAME"
    )
    parser.add_argument(
        "--cutoff", type=int, default=None,
        help="override the preset cutoff before doubling (default: keep preset value)",
    )
    args = parser.parse_args(argv)

    print(f"{'preset':8s} {'cutoffs':>10s} {'max |dE|':>12s} {'max |dcoh|':>12s}")
    for name in args.names:
        cfg_dict = preset_config(name)
        if args.cutoff is not None:
            cfg_dict["cutoff"] = args.cutoff
        report = convergence_report(config_from_dict(cfg_dict))
        print(
            f"{name:8s} {report.cutoff:>4d}/{report.doubled_cutoff:<4d} "
            f"{report.max_abs_d_entanglement:>12.3e} {report.max_abs_d_coherence:>12.3e}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
