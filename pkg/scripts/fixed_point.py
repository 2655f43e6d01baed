"""Solve for the CDF of beta * sum alpha^j U_j and compare with simulation."""
import argparse
import json
from dataclasses import dataclass

import numpy as np

from wgconv.core import RngStream
from wgconv.selfdecomp import sample_fixed_point, solve_G


@dataclass
class Config:
    alpha: float = 0.5
    beta: float = 1.0
    grid_size: int = 4001
    N: int = 100_000
    seed: int = 0


def main(cfg: Config) -> None:
    sol, rep = solve_G(cfg.alpha, cfg.beta, grid_size=cfg.grid_size)
    y = np.sort(sample_fixed_point(cfg.alpha, cfg.beta, N=cfg.N, rng=RngStream(cfg.seed)).samples)
    u = np.linspace(y[0], y[-1], 201)
    ecdf = np.searchsorted(y, u, side="right") / y.size
    out = {**rep.to_dict(), "sup_ecdf_gap": float(np.max(np.abs(ecdf - sol(u)))),
           "sample_variance": float(y.var()), "series_variance": cfg.beta**2 / 3 / (1 - cfg.alpha**2)}
    print(json.dumps(out, indent=2, sort_keys=True))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    for name, val in vars(Config()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=type(val), default=val)
    main(Config(**vars(ap.parse_args())))
