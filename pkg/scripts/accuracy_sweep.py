"""Error of implicit and explicit convolution against exact answers, m = 2..2^k.

    python3 scripts/accuracy_sweep.py --kind hconv --max-log2 12 --out results/acc_hconv.csv
"""
import argparse
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from implicitconv.conv_bench import ACCURACY_HEADER, accuracy_sweep, to_text


@dataclass
class SweepConfig:
    kind: str = "cconv"
    max_log2: int = 12
    seed: int = 1
    out: Path | None = None
    ms: list = field(init=False)

    def __post_init__(self):
        # hconv needs even m, so start the doubling at 2 everywhere
        self.ms = [2 ** k for k in range(1, self.max_log2 + 1)]


def run(cfg):
    rows = accuracy_sweep(cfg.kind, cfg.ms, cfg.seed)
    text = to_text(ACCURACY_HEADER, rows)
    if cfg.out:
        cfg.out.parent.mkdir(parents=True, exist_ok=True)
        cfg.out.write_text(text)
    print(text, end="")
    worst = max(max(r[1], r[2]) for r in rows)
    # rounding should grow no faster than log2 m
    slope = np.polyfit(np.log2(cfg.ms), [r[1] for r in rows], 1)[0] if len(rows) > 1 else 0.0
    print(f"# worst error {worst:.3g}, implicit slope per doubling {slope:.3g}")
    return rows


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--kind", default="cconv", choices=["cconv", "hconv"])
    p.add_argument("--max-log2", type=int, default=12)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", type=Path)
    a = p.parse_args()
    run(SweepConfig(a.kind, a.max_log2, a.seed, a.out))
