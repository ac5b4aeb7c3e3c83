"""Nonlinear vorticity advection on a random band-limited field.

Reports how far the discrete enstrophy and energy transfer sums are from
zero, relative to sum |omega| |N|, which is what exact dealiasing predicts.
"""
import argparse
from dataclasses import dataclass

import numpy as np

from implicitconv.conv_bench import random_inputs
from implicitconv.implicit_nd import advection2d


@dataclass
class AdvectionConfig:
    mx: int = 32
    my: int = 32
    seed: int = 0


def transfers(omega, N):
    mx = (omega.shape[0] + 1) // 2
    kx = np.arange(omega.shape[0])[:, None] - (mx - 1)
    ky = np.arange(omega.shape[1])[None, :]
    k2 = (kx ** 2 + ky ** 2).astype(float)
    # each ky > 0 mode stands for itself and its conjugate
    weight = np.where(ky == 0, 1.0, 2.0)
    prod = (np.conj(omega) * N).real * weight
    inv = np.divide(1.0, k2, out=np.zeros_like(k2), where=k2 > 0)
    scale = np.sum(np.abs(omega) * np.abs(N) * weight)
    return prod.sum() / scale, (prod * inv).sum() / scale


def run(cfg):
    omega = random_inputs("conv2", (cfg.mx, cfg.my), cfg.seed)[0]
    N = advection2d(omega)
    ens, en = transfers(omega, N)
    print(f"{cfg.mx}x{cfg.my}: enstrophy transfer {ens:.2e}, energy transfer {en:.2e}")
    return ens, en


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--mx", type=int, default=32)
    p.add_argument("--my", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    a = p.parse_args()
    run(AdvectionConfig(a.mx, a.my, a.seed))
