#!/usr/bin/env python3
"""Sweep the frequency-domain regularity criteria across orders s.

For each family, evaluates the wavelet-side divergence criterion on a grid
of s values, prints where the verdict flips, and compares against the
bisected critical order from both the wavelet and scaling criteria.

Usage: python3 scripts/sobolev_sweep.py [--outdir DIR] [--step 0.1]
"""

import argparse
import os

import numpy as np

from waverate import make_family
from waverate.sobolev import (
    criterion_sweep,
    critical_order,
    export_critical_json,
    export_sweep_csv,
    family_spectrum,
)

FAMILIES = (
    ("haar", 0),
    ("daubechies", 2),
    ("daubechies", 3),
    ("battle_lemarie", 2),
)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--outdir", help="write sweep CSV and critical-order JSON here")
    parser.add_argument("--step", type=float, default=0.1)
    args = parser.parse_args()

    print(f"{'family':<18} {'flip at':>8} {'s* (wav)':>9} {'s* (scal)':>10}")
    for name, param in FAMILIES:
        fam = make_family(name, param)
        spectrum = family_spectrum(fam, "psi")
        s_values = np.arange(args.step, 4.0 + args.step / 2, args.step)
        results = criterion_sweep(spectrum, s_values)
        flips = [r.s for r in results if r.diverged]
        flip = min(flips) if flips else float("nan")
        wav = critical_order(fam, criterion="wavelet")
        scal = critical_order(fam, criterion="scaling")
        print(f"{fam.label:<18} {flip:>8.2f} {wav.s_star:>9.3f} {scal.s_star:>10.3f}")
        if args.outdir:
            tag = fam.label.replace(":", "-")
            export_sweep_csv(results, os.path.join(args.outdir, f"sweep_{tag}.csv"))
            export_critical_json(wav, os.path.join(args.outdir, f"critical_{tag}.json"))


if __name__ == "__main__":
    main()
