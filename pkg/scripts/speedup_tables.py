"""Timing and storage tables for implicit vs explicit convolution in 2D and 3D.

Writes one CSV of bench rows per kind and a memory table, then prints the
explicit/implicit speedup per case.  Sizes are modest by default since the
pure-numpy inner loops pay interpreter overhead per row.

    python3 scripts/speedup_tables.py --samples 6 --outdir results
"""
import argparse
from dataclasses import dataclass, field
from pathlib import Path

from implicitconv.conv_bench import (HEADER, MEMORY_HEADER, bench, memory_table,
                                     speedup, to_text)


@dataclass
class TableConfig:
    samples: int = 4
    outdir: Path = Path("results")
    cases: dict = field(default_factory=lambda: {
        "cconv2": [(64, 64), (256, 256), (1024, 1024)],
        "conv2": [(64, 64), (256, 256)],
        "tconv2": [(64, 64), (256, 256)],
        "cconv3": [(16, 16, 16), (32, 32, 32), (64, 64, 64)],
        "hconv3": [(16, 16, 16), (32, 32, 32)],
    })
    methods: dict = field(default_factory=lambda: {
        "cconv2": ("explicit", "pruned", "implicit"),
        "cconv3": ("explicit", "pruned", "implicit"),
    })


def run(cfg):
    cfg.outdir.mkdir(parents=True, exist_ok=True)
    for kind, dims_list in cfg.cases.items():
        rows = []
        for dims in dims_list:
            reps = [bench(kind, m, dims, cfg.samples)
                    for m in cfg.methods.get(kind, ("explicit", "implicit"))]
            rows += [r.row() for r in reps]
            print(f"{kind} {'x'.join(map(str, dims))}: "
                  f"explicit/implicit {speedup(reps):.2f}")
        (cfg.outdir / f"bench_{kind}.csv").write_text(to_text(HEADER, rows))
    mem = []
    for kind, dims_list in cfg.cases.items():
        mem += memory_table(kind, dims_list)
    (cfg.outdir / "memory.csv").write_text(to_text(MEMORY_HEADER, mem))
    print(to_text(MEMORY_HEADER, mem), end="")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--samples", type=int, default=4)
    p.add_argument("--outdir", type=Path, default=Path("results"))
    a = p.parse_args()
    run(TableConfig(a.samples, a.outdir))
