"""Timing of the closed forms and of Laplacian SNF as n grows.

    python3 scripts/scale_check.py --a 3 --b 2
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass, field

from polyring import PolygonSpec, build, sandpile_group, snf
from polyring.graph import reduced_laplacian


@dataclass
class ScaleConfig:
    a: int = 3
    b: int = 2
    closed_sizes: list[int] = field(default_factory=lambda: [10**2, 10**3, 10**4, 3 * 10**4])
    snf_sizes: list[int] = field(default_factory=lambda: [10, 25, 50, 100])


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--a", type=int, default=ScaleConfig.a)
    ap.add_argument("--b", type=int, default=ScaleConfig.b)
    cfg = ScaleConfig(**vars(ap.parse_args()))

    for n in cfg.closed_sizes:
        t0 = time.perf_counter()
        g = sandpile_group(PolygonSpec.uniform(n, cfg.a, cfg.b), "closed")
        dt = time.perf_counter() - t0
        print(f"closed    n={n:<6} mu={g.mu}  order has {len(str(g.order))} digits  {dt:.3f}s")
    for n in cfg.snf_sizes:
        L = reduced_laplacian(build(PolygonSpec.uniform(n, cfg.a, cfg.b)))
        t0 = time.perf_counter()
        factors = snf(L).nontrivial_factors
        dt = time.perf_counter() - t0
        print(f"laplacian n={n:<6} {L.rows}x{L.cols}  mu={len(factors)}  {dt:.3f}s")


if __name__ == "__main__":
    main()
