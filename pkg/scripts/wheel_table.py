"""Table of generalized wheel groups R_n(a, 0) next to the Laplacian SNF.

    python3 scripts/wheel_table.py --max-n 10 --max-a 3
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

from polyring import PolygonSpec, sandpile_group


@dataclass
class WheelConfig:
    max_n: int = 8
    max_a: int = 3


def rows(cfg: WheelConfig):
    for a in range(1, cfg.max_a + 1):
        for n in range(2, cfg.max_n + 1):
            spec = PolygonSpec.uniform(n, a, 0)
            closed = sandpile_group(spec, "closed")
            lap = sandpile_group(spec, "laplacian")
            yield spec, closed, lap


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=WheelConfig.max_n)
    ap.add_argument("--max-a", type=int, default=WheelConfig.max_a)
    cfg = WheelConfig(**vars(ap.parse_args()))
    print(f"{'spec':<10} {'closed form':<28} {'laplacian SNF':<28} ok")
    for spec, closed, lap in rows(cfg):
        print(f"{str(spec):<10} {str(closed):<28} {str(lap):<28} {'yes' if closed == lap else 'NO'}")


if __name__ == "__main__":
    main()
