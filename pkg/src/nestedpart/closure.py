"""Breadth-first Cayley-graph closure.

Elements are interned to dense ids in discovery order. The search runs level
by level; with ``workers > 1`` the products of a frontier are computed in a
process pool but merged back in frontier order, so ids, counts and word
lengths never depend on scheduling.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Hashable, Sequence

DEFAULT_BOUND = 10**6


class ClosureBoundError(RuntimeError):
    def __init__(self, bound: int, partial: int):
        super().__init__(f"closure exceeded bound {bound} (reached {partial} elements)")
        self.bound = bound
        self.partial = partial


@dataclass
class ClosureReport:
    size: int
    generator_count: int
    target: int | None = None
    word_lengths: list[int] | None = field(default=None, repr=False)
    seconds: float = 0.0

    @property
    def reached_target(self) -> bool | None:
        if self.target is None:
            return None
        return self.size == self.target

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "size": self.size,
            "generators": self.generator_count,
            "target": self.target,
            "reached_target": self.reached_target,
        }
        if timing:
            out["seconds"] = round(self.seconds, 3)
        if self.word_lengths is not None:
            out["max_word_length"] = max(self.word_lengths, default=0)
        return out


@dataclass
class Closure:
    elements: list
    index: dict
    parent: list[int] = field(repr=False)
    via: list[int] = field(repr=False)
    report: ClosureReport

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in self.index

    def word(self, x) -> list[int]:
        """Generator indices whose left-to-right product is ``x``."""
        i = self.index[x]
        out = []
        while i >= 0 and self.via[i] >= 0:
            out.append(self.via[i])
            i = self.parent[i]
        return out[::-1]


_pool_state: dict = {}


def _pool_init(mul, gens):
    _pool_state["mul"] = mul
    _pool_state["gens"] = gens


def _pool_products(chunk):
    mul, gens = _pool_state["mul"], _pool_state["gens"]
    return [mul(x, g) for x in chunk for g in gens]


def closure(
    gens: Sequence[Hashable],
    mul: Callable,
    identity: Hashable | None = None,
    *,
    bound: int = DEFAULT_BOUND,
    target: int | None = None,
    workers: int = 1,
    chunk: int = 4096,
) -> Closure:
    """Semigroup generated by ``gens`` under right multiplication.

    The identity is included only when it is reachable, or when ``identity``
    is supplied explicitly (monoid closure).
    """
    t0 = time.perf_counter()
    gens = list(gens)
    elements, index, parent, via = [], {}, [], []

    def add(x, p, g):
        if x in index:
            return False
        if len(elements) >= bound:
            raise ClosureBoundError(bound, len(elements))
        index[x] = len(elements)
        elements.append(x)
        parent.append(p)
        via.append(g)
        return True

    if identity is not None:
        add(identity, -1, -1)
    for gi, g in enumerate(gens):
        add(g, -1, gi)
    frontier = list(range(len(elements)))
    depth = [0 if via[i] < 0 else 1 for i in frontier]

    pool = None
    if workers > 1:
        pool = ProcessPoolExecutor(workers, initializer=_pool_init, initargs=(mul, gens))
    try:
        while frontier:
            if pool is None:
                products = [mul(elements[i], g) for i in frontier for g in gens]
            else:
                xs = [elements[i] for i in frontier]
                chunks = [xs[s:s + chunk] for s in range(0, len(xs), chunk)]
                products = [y for part in pool.map(_pool_products, chunks) for y in part]
            nxt = []
            ng = len(gens)
            for pos, y in enumerate(products):
                p = frontier[pos // ng]
                if add(y, p, pos % ng):
                    depth.append(depth[p] + 1)
                    nxt.append(len(elements) - 1)
            frontier = nxt
    finally:
        if pool is not None:
            pool.shutdown()

    report = ClosureReport(
        size=len(elements),
        generator_count=len(gens),
        target=target,
        word_lengths=depth,
        seconds=time.perf_counter() - t0,
    )
    return Closure(elements, index, parent, via, report)


def closure_size(gens, mul, **kw) -> int:
    return len(closure(gens, mul, **kw))
