"""Samples of J0(x) + c log(a) x J1(x) for a few radii, plus the first roots.

Writes psi_curve.csv (x, one column per radius) and psi_roots.csv with the
first three roots for the log(a) and 2 log(a) forms of the equation.
"""

import argparse
import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from newtpot.disc import k0_equation, solve_mu_k0


@dataclass
class PsiConfig:
    log_radii: tuple[float, ...] = (-2.0, -5.0, -20.0)
    xmax: float = 12.0
    points: int = 1200
    weight: float = 2.0
    out_dir: Path = Path("out")


def run(cfg: PsiConfig) -> None:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    x = np.linspace(0.0, cfg.xmax, cfg.points)
    cols = [[k0_equation(math.exp(t), xi, cfg.weight) for xi in x] for t in cfg.log_radii]
    with open(cfg.out_dir / "psi_curve.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x"] + [f"log_a={t:g}" for t in cfg.log_radii])
        for i, xi in enumerate(x):
            w.writerow([f"{xi:.17g}"] + [f"{c[i]:.17g}" for c in cols])
    with open(cfg.out_dir / "psi_roots.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["log_a", "weight", "j", "mu", "mu_sqrt_abs_log_a"])
        for t in cfg.log_radii:
            for weight in (1.0, 2.0):
                for root in solve_mu_k0(math.exp(t), 3, weight):
                    w.writerow([t, weight, root.index, f"{root.value:.17g}", f"{root.value * math.sqrt(-t):.6f}"])
    print(f"wrote {cfg.out_dir / 'psi_curve.csv'} and {cfg.out_dir / 'psi_roots.csv'}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", type=Path, default=PsiConfig.out_dir)
    ap.add_argument("--xmax", type=float, default=PsiConfig.xmax)
    ap.add_argument("--points", type=int, default=PsiConfig.points)
    args = ap.parse_args()
    run(PsiConfig(xmax=args.xmax, points=args.points, out_dir=args.out_dir))


if __name__ == "__main__":
    main()
