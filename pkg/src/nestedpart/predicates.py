"""Level-invertibility predicates, strata, and the witnesses used for the chain
``P(n~) = P_0 > P_1 > ... > P_k``."""

from __future__ import annotations

from typing import Iterable, Sequence

from .elementary import bracket
from .partition import Endomorphism, PartitionType, enumerate_endomorphisms, is_permutation


class UnsupportedConstruction(ValueError):
    """A construction's hypotheses are not met by the given type.

    Distinct from a falsified identity: the caller asked for something the
    construction does not cover.
    """

    def __init__(self, message: str, level: int | None = None):
        super().__init__(message)
        self.level = level


def pred_level(f: Endomorphism, j: int) -> bool:
    """``P_j(f)``: the level-``j`` map is a bijection."""
    if not 1 <= j <= f.ptype.depth:
        raise ValueError(f"level {j} out of range 1..{f.ptype.depth}")
    return is_permutation(f.level_indices(j))


def predicate(levels: int | Iterable[int]):
    """A predicate ``f -> bool`` for ``P_j`` or the conjunction of several ``P_j``."""
    js = (levels,) if isinstance(levels, int) else tuple(levels)

    def check(f: Endomorphism) -> bool:
        return all(pred_level(f, j) for j in js)

    check.levels = js
    return check


def check_primitive(pred, elements: Sequence) -> tuple | None:
    """Exhaustively test ``P(ab) <=> P(a) and P(b)`` over ordered pairs.

    ``pred`` is a callable or a level / tuple of levels. Returns ``None`` if
    primitive, else the first violating pair ``(a, b)`` in scan order.
    """
    if not callable(pred):
        pred = predicate(pred)
    values = [pred(x) for x in elements]
    for a, pa in zip(elements, values):
        for b, pb in zip(elements, values):
            if pred(a * b) != (pa and pb):
                return (a, b)
    return None


def check_primitive_on_type(levels, ptype: PartitionType, bound: int = 10**4) -> tuple | None:
    elements = enumerate_endomorphisms(ptype, bound=bound)
    return check_primitive(levels, elements)


def stratum(f: Endomorphism) -> int:
    """The largest ``j`` with ``P_j(f)``, or 0."""
    s = 0
    for j in range(1, f.ptype.depth + 1):
        if not pred_level(f, j):
            break
        s = j
    return s


def _ones(j: int) -> tuple[int, ...]:
    return (1,) * j


def tau_collapse(n: int) -> tuple[int, ...]:
    """The self-map of ``[1..n]`` sending 1 to 2 and fixing the rest."""
    return (2,) + tuple(range(2, n + 1))


def step_witness(ptype: PartitionType, j: int) -> Endomorphism:
    """``[tau, (1,...,1)]`` at level ``j``; lies in stratum ``j-1`` exactly."""
    if not 1 <= j <= ptype.depth:
        raise ValueError(f"level {j} out of range 1..{ptype.depth}")
    n = ptype.n(j)
    if n < 2:
        raise UnsupportedConstruction(f"step witness needs n_{j} >= 2, got {n}", level=j)
    return bracket(ptype, tau_collapse(n), _ones(j - 1))


def conjugator_h(ptype: PartitionType, j: int, v: Sequence[int]) -> Endomorphism:
    """An involutive automorphism swapping ``(1,...,1)`` and ``v`` at level ``j-1``.

    Local maps are the transposition ``(u_s, v_s)`` at the two prefix chains
    ``u[:s-1]`` and ``v[:s-1]`` for ``s < j`` and identity everywhere else, so
    whole subtrees are carried along and deeper coordinates are untouched.
    Conjugating ``[tau, u]`` by it gives ``[tau, v]``.
    """
    v = tuple(v)
    if not 1 <= j <= ptype.depth or len(v) != j - 1:
        raise ValueError(f"anchor {v} must lie at level {j - 1}")
    ptype.encode(v)
    u = _ones(j - 1)
    local = {}
    for s in range(1, ptype.depth + 1):
        n = ptype.n(s)
        for w in ptype.points(s - 1):
            m = list(range(1, n + 1))
            if s < j and w in (u[: s - 1], v[: s - 1]):
                a, b = u[s - 1], v[s - 1]
                m[a - 1], m[b - 1] = b, a
            local[w] = m
    return Endomorphism.from_local_maps(ptype, local)
