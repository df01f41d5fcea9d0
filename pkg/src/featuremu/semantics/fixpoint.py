"""Kleene iteration on finite powerset lattices with inline chain checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, TypeVar

L = TypeVar("L")


class FixpointChainError(AssertionError):
    """A Kleene chain was not monotone or exceeded its iteration bound."""


@dataclass
class FixpointStats:
    """Counters collected across evaluations; pass one instance around to aggregate."""

    fixpoints: int = 0
    iterations: int = 0
    max_iterations: int = 0
    violations: int = 0
    by_kind: dict = field(default_factory=lambda: {"lfp": 0, "gfp": 0})

    def record(self, kind: str, n: int) -> None:
        self.fixpoints += 1
        self.iterations += n
        self.max_iterations = max(self.max_iterations, n)
        self.by_kind[kind] += 1

    def merge(self, other: "FixpointStats") -> None:
        self.fixpoints += other.fixpoints
        self.iterations += other.iterations
        self.max_iterations = max(self.max_iterations, other.max_iterations)
        self.violations += other.violations
        for k, v in other.by_kind.items():
            self.by_kind[k] = self.by_kind.get(k, 0) + v

    def as_dict(self) -> dict:
        return {
            "fixpoints": self.fixpoints,
            "iterations": self.iterations,
            "max_iterations": self.max_iterations,
            "violations": self.violations,
            "lfp": self.by_kind.get("lfp", 0),
            "gfp": self.by_kind.get("gfp", 0),
        }


def kleene(
    step: Callable[[L], L],
    start: L,
    leq: Callable[[L, L], bool],
    *,
    least: bool,
    capacity: int,
    stats: FixpointStats | None = None,
) -> L:
    """Iterate ``step`` from ``start`` (bottom for lfp, top for gfp) to stability.

    Every iterate must ascend (lfp) or descend (gfp), and stability must be
    reached within ``capacity + 1`` applications of ``step``, where
    ``capacity`` is the number of atoms in a lattice element.
    """
    kind = "lfp" if least else "gfp"
    cur = start
    n = 0
    while True:
        nxt = step(cur)
        n += 1
        ok = leq(cur, nxt) if least else leq(nxt, cur)
        if not ok:
            if stats is not None:
                stats.violations += 1
            raise FixpointChainError(f"{kind} chain is not {'ascending' if least else 'descending'} at iteration {n}")
        if nxt == cur:
            if stats is not None:
                stats.record(kind, n)
            return cur
        if n > capacity:
            if stats is not None:
                stats.violations += 1
            raise FixpointChainError(f"{kind} did not stabilise within {capacity + 1} iterations")
        cur = nxt


def rows_leq(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    return all(x & ~y == 0 for x, y in zip(a, b))


def mask_leq(a: int, b: int) -> bool:
    return a & ~b == 0
