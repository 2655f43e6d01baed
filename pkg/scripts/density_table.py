"""Tabulate f_{alpha,n} for a few indices next to the closed forms at alpha = 1, 2."""
import argparse
from dataclasses import dataclass

import numpy as np

from wgconv.densities import density_f1n, density_f2n, density_falphan


@dataclass
class Config:
    n: int = 3
    alphas: tuple = (0.5, 1.0, 1.5, 2.0)
    rmax: float = 6.0
    points: int = 13


def main(cfg: Config) -> None:
    r = np.linspace(0, cfg.rmax, cfg.points)
    cols = {f"a={a:g}": density_falphan(a, cfg.n, r).fs for a in cfg.alphas}
    cols["f1n"] = density_f1n(cfg.n, r)
    cols["f2n"] = density_f2n(cfg.n, r)
    print("r," + ",".join(cols))
    for i, ri in enumerate(r):
        print(f"{ri:g}," + ",".join(f"{v[i]:.6e}" for v in cols.values()))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=Config.n)
    ap.add_argument("--alphas", type=float, nargs="+", default=list(Config.alphas))
    ap.add_argument("--rmax", type=float, default=Config.rmax)
    ap.add_argument("--points", type=int, default=Config.points)
    a = ap.parse_args()
    main(Config(a.n, tuple(a.alphas), a.rmax, a.points))
