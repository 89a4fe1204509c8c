"""Abelian sandpile dynamics on a multigraph with a sink.

Only meant as a tiny-scale oracle: recurrent configurations are enumerated
exhaustively and counted against the Matrix-Tree determinant.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field
from itertools import product

from .graph import MultiGraph

DEFAULT_BUDGET = 10**6


class BudgetExceeded(RuntimeError):
    pass


class ContractError(ValueError):
    pass


@dataclass(frozen=True)
class Configuration:
    sink: str
    heights: tuple[tuple[str, int], ...]

    @classmethod
    def from_map(cls, sink: str, heights: dict[str, int]) -> "Configuration":
        return cls(sink, tuple(sorted(heights.items())))

    def as_map(self) -> dict[str, int]:
        return dict(self.heights)

    def to_json(self) -> str:
        return json.dumps(self.as_map(), sort_keys=True)

    def __add__(self, other: "Configuration") -> "Configuration":
        if self.sink != other.sink:
            raise ContractError("configurations have different sinks")
        d = self.as_map()
        for v, h in other.heights:
            d[v] = d.get(v, 0) + h
        return Configuration.from_map(self.sink, d)


@dataclass
class Sandpile:
    """A graph with a chosen sink, with degrees and multiplicities precomputed."""

    graph: MultiGraph
    sink: str = None
    degree: dict[str, int] = field(init=False)
    mult: dict[str, dict[str, int]] = field(init=False)

    def __post_init__(self):
        if self.sink is None:
            self.sink = self.graph.vertices[0]
        if self.sink not in self.graph.vertices:
            raise ContractError(f"unknown sink {self.sink!r}")
        self.mult = self.graph.multiplicities()
        self.degree = {v: sum(self.mult[v].values()) for v in self.graph.vertices}

    @property
    def nonsink(self) -> list[str]:
        return [v for v in self.graph.vertices if v != self.sink]

    def config(self, heights: dict[str, int] | None = None) -> Configuration:
        heights = heights or {}
        unknown = set(heights) - set(self.nonsink)
        if unknown:
            raise ContractError(f"not non-sink vertices: {sorted(unknown)}")
        return Configuration.from_map(self.sink, {v: heights.get(v, 0) for v in self.nonsink})

    def max_stable(self) -> Configuration:
        return self.config({v: self.degree[v] - 1 for v in self.nonsink})

    def is_stable(self, c: Configuration) -> bool:
        return all(h < self.degree[v] for v, h in c.heights)

    def stabilize(self, c: Configuration, seed: int | None = None, trace: list | None = None
                  ) -> tuple[Configuration, dict[str, int]]:
        """Topple until stable. Returns the stable configuration and toppling counts.

        With ``seed`` the next unstable vertex is drawn at random instead of
        from the FIFO queue; the result must not depend on it.
        """
        h = c.as_map()
        if any(x < 0 for x in h.values()):
            raise ContractError("heights must be non-negative")
        deg, mult, sink = self.degree, self.mult, self.sink
        fired = {v: 0 for v in h}
        rng = random.Random(seed) if seed is not None else None
        pending = [v for v in h if h[v] >= deg[v]]
        queue = deque(pending)
        queued = set(pending)
        while queue:
            if rng is not None:
                k = rng.randrange(len(queue))
                queue.rotate(-k)
            v = queue.popleft()
            queued.discard(v)
            times = h[v] // deg[v]
            if times == 0:
                continue
            if rng is not None:
                times = 1
            h[v] -= times * deg[v]
            fired[v] += times
            if trace is not None:
                trace.append((v, times))
            for w, m in mult[v].items():
                if w == sink:
                    continue
                h[w] += times * m
                if h[w] >= deg[w] and w not in queued:
                    queue.append(w)
                    queued.add(w)
            if h[v] >= deg[v] and v not in queued:
                queue.append(v)
                queued.add(v)
        return Configuration.from_map(sink, h), fired

    def burning_config(self) -> Configuration:
        """One grain per edge from the sink: the sink's cut."""
        return self.config({v: self.mult[self.sink].get(v, 0) for v in self.nonsink})

    def is_recurrent(self, c: Configuration) -> bool:
        """Dhar's burning test."""
        if not self.is_stable(c):
            raise ContractError("burning test needs a stable configuration")
        result, fired = self.stabilize(c + self.burning_config())
        return result == c and all(k == 1 for k in fired.values())

    def enumerate_recurrent(self, budget: int = DEFAULT_BUDGET) -> list[Configuration]:
        verts = self.nonsink
        total = 1
        for v in verts:
            total *= self.degree[v]
        if total > budget:
            raise BudgetExceeded(f"{total} stable configurations exceeds budget {budget}")
        out = []
        for hs in product(*(range(self.degree[v]) for v in verts)):
            c = Configuration.from_map(self.sink, dict(zip(verts, hs)))
            if self.is_recurrent(c):
                out.append(c)
        return out

    def add(self, c: Configuration, d: Configuration) -> Configuration:
        return self.stabilize(c + d)[0]

    def identity(self, budget: int = DEFAULT_BUDGET) -> Configuration:
        """The recurrent e with e + c = c, found by search over recurrent configurations.

        In a group one fixed point of x -> x + c already forces x to be the identity.
        """
        top = self.max_stable()
        for e in self.enumerate_recurrent(budget):
            if self.add(e, top) == top:
                return e
        raise RuntimeError("no identity found; recurrent set is not a group?")

    def element_order(self, c: Configuration, identity: Configuration | None = None) -> int:
        e = identity or self.identity()
        k, x = 1, c
        while x != e:
            x = self.add(x, c)
            k += 1
        return k


def stabilize(g: MultiGraph, c: Configuration, seed: int | None = None) -> Configuration:
    return Sandpile(g, c.sink).stabilize(c, seed)[0]


def is_recurrent(g: MultiGraph, c: Configuration) -> bool:
    return Sandpile(g, c.sink).is_recurrent(c)


def enumerate_recurrent(g: MultiGraph, sink: str | None = None, budget: int = DEFAULT_BUDGET
                        ) -> list[Configuration]:
    return Sandpile(g, sink).enumerate_recurrent(budget)


def group_op(g: MultiGraph, c: Configuration, d: Configuration) -> Configuration:
    return Sandpile(g, c.sink).add(c, d)


def find_identity(g: MultiGraph, sink: str | None = None, budget: int = DEFAULT_BUDGET) -> Configuration:
    return Sandpile(g, sink).identity(budget)
