"""Run the named distributional identities over 20 seeds and write per-seed CSV."""
import argparse
import sys
from dataclasses import dataclass

from wgconv.stattests import run_multi_seed


@dataclass
class Config:
    N: int = 100_000
    seeds: int = 20


CASES = [
    ("remark3", {"alpha": 2.0, "n": 3}),
    ("remark3", {"alpha": 1.0, "n": 3}),
    ("remark3", {"alpha": 2.0, "n": 1}),
    ("remark3", {"alpha": 0.7, "n": 2}),
    ("theorem3", {"alpha": 2.0, "p": 0.5, "a": 1.0}),
    ("theorem3", {"alpha": 1.0, "p": 0.5, "a": 1.0}),
    ("theorem3", {"alpha": 1.5, "p": 0.8, "a": 2.0}),
]


def main(cfg: Config) -> None:
    header = True
    for name, params in CASES:
        res = run_multi_seed(name, seeds=range(cfg.seeds), N=cfg.N, **params)
        lines = res.to_csv().splitlines()
        sys.stdout.write("\n".join(lines if header else lines[1:]) + "\n")
        header = False
        print(f"{name} {params}: {res.n_pass}/{cfg.seeds} seeds pass", file=sys.stderr)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=Config.N)
    ap.add_argument("--seeds", type=int, default=Config.seeds)
    a = ap.parse_args()
    main(Config(a.N, a.seeds))
