"""Ball eigenvalues, normalised integrals and the 3D bound report."""

import argparse
import json
from dataclasses import dataclass
from pathlib import Path

from newtpot.ball import ball_eigenvalues, ball_normalized_integral
from newtpot.scaling import prop2_report


@dataclass
class BallConfig:
    a_values: tuple[float, ...] = (1.0, 0.5, 0.1, 0.02)
    l_max: int = 3
    j_max: int = 3
    out_dir: Path = Path("out")


def run(cfg: BallConfig) -> dict:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    table = []
    for a in cfg.a_values:
        for p in ball_eigenvalues(a, cfg.l_max, cfg.j_max):
            value = ball_normalized_integral((p.l - 1) // 2, p.j, a) if p.l % 2 else 0.0
            table.append({"a": a, "l": p.l, "j": p.j, "mu": p.mu, "lambda": p.lam,
                          "lambda_over_a2": p.lam / a**2, "integral_over_a1.5": value / a**1.5})
    rep = prop2_report(cfg.a_values)
    out = {"modes": table, "report": rep.to_dict()}
    (cfg.out_dir / "ball_report.json").write_text(json.dumps(out, indent=2, sort_keys=True) + "\n")
    for item in rep.items:
        print(f"{item.name:28s} {'pass' if item.passed else 'FAIL'}  {item.value}")
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", type=Path, default=BallConfig.out_dir)
    args = ap.parse_args()
    run(BallConfig(out_dir=args.out_dir))


if __name__ == "__main__":
    main()
