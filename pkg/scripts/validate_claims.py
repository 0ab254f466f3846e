#!/usr/bin/env python3
"""Closed form vs Monte Carlo on the standard high-SNR validation grid:
the strong-first and weak-first sum rates at 20/30/40 dBm, and the QoS-mode
secondary rates at the near/far distance extremes.

Exit code 2 if any applicable point misses its tolerance.
"""

import argparse
import sys

from noma_as import (FadingConfig, PowerSplit, Scenario, ValidationPoint,
                     validate_asymptotics)


def build_grid(trials, seed):
    points = []
    split = PowerSplit.from_b(0.4)
    for ps in (20.0, 30.0, 40.0):
        fading = FadingConfig(n_bs=2, ps_dbm=ps)
        points.append(ValidationPoint(
            Scenario(fading, "fnoma", "a3", split=split, trials=trials, seed=seed), 0.01))
        points.append(ValidationPoint(
            Scenario(fading, "fnoma", "aia", split=split, trials=trials, seed=seed), 0.02))
    for d1, policies in ((80.0, ("su", "mcg")), (300.0, ("pu", "mcg"))):
        fading = FadingConfig(n_bs=4, d1=d1, ps_dbm=20.0)
        for policy in policies:
            points.append(ValidationPoint(
                Scenario(fading, "crnoma", policy, r_th=5.0, trials=trials,
                         seed=seed), 0.02))
    return points


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=100_000)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    failed = False
    for res in validate_asymptotics(build_grid(args.trials, args.seed)):
        scn = res.scenario
        print(f"{scn.policy:>4s} {scn.mode:<6s} ps={scn.fading.ps_dbm:g}dBm "
              f"d1={scn.fading.d1:g}m: closed={res.closed_form:.4f} "
              f"mc={res.monte_carlo:.4f} gap={100 * res.rel_gap:.3f}% "
              f"[{res.status}]")
        failed |= res.status == "fail"
    return 2 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
