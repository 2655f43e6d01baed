"""Scan pseudostable exp(-|t|^q - |t|^p) over a (q, p) grid with check_pd."""
import argparse
from dataclasses import dataclass

import numpy as np

from wgconv.analysis import check_pd
from wgconv.core import Pseudostable, RngStream


@dataclass
class Config:
    qs: tuple = (1.5, 2.0, 2.5, 3.0, 4.0, 5.0)
    ps: tuple = (0.5, 1.0, 1.5, 2.0)
    seed: int = 0


def main(cfg: Config) -> None:
    print("q,p,verdict,min_eigenvalue,min_density")
    for q in cfg.qs:
        for p in cfg.ps:
            if q < p:
                continue
            rep = check_pd(Pseudostable(1.0, 1.0, q, p), rng=RngStream(cfg.seed))
            dens = min(r["value"] for r in rep.details["fourier"])
            print(f"{q:g},{p:g},{rep.verdict.value},{rep.details['gram_min_eigenvalue']:.3e},{dens:.3e}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    main(Config(seed=ap.parse_args().seed))
