"""Elementary endomorphisms ``[g, v]`` and the level factorisation of an endomorphism."""

from __future__ import annotations

from typing import Sequence

from .partition import Endomorphism, PartitionType, _check_local_map


def bracket(ptype: PartitionType, g: Sequence[int], v: Sequence[int]) -> Endomorphism:
    """The endomorphism with local map ``g`` (1-based) at ``v`` and identity elsewhere."""
    v = tuple(v)
    j = len(v) + 1
    if j > ptype.depth:
        raise ValueError(f"anchor {v} must have level below {ptype.depth}")
    n = ptype.n(j)
    g = _check_local_map(g, n, v)
    start = ptype.offsets[j - 1] + ptype.encode(v) * n
    table = list(Endomorphism.identity(ptype).table)
    table[start:start + n] = [x - 1 for x in g]
    return Endomorphism(ptype, tuple(table))


def t_level(f: Endomorphism, j: int) -> Endomorphism:
    """``t_j(f)``: ``f``'s local maps at level ``j``, identity at every other level.

    Assembled directly from the table rather than as a product of brackets.
    """
    pt = f.ptype
    if not 1 <= j <= pt.depth:
        raise ValueError(f"level {j} out of range 1..{pt.depth}")
    lo, hi = pt.offsets[j - 1], pt.offsets[j]
    table = list(Endomorphism.identity(pt).table)
    table[lo:hi] = f.table[lo:hi]
    return Endomorphism(pt, tuple(table))


def decompose(f: Endomorphism) -> list[Endomorphism]:
    """``[t_1(f), ..., t_k(f)]``.

    ``f`` is recovered by applying ``t_k`` first and ``t_1`` last, i.e.
    ``f == t_1 o t_2 o ... o t_k`` (see :func:`recompose`). The reverse order
    is wrong in general: ``t_1`` moves the anchors at which deeper local maps
    are read.
    """
    return [t_level(f, j) for j in range(1, f.ptype.depth + 1)]


def recompose(factors: Sequence[Endomorphism]) -> Endomorphism:
    """``t_1 o t_2 o ... o t_k`` for ``factors = [t_1, ..., t_k]``."""
    out = factors[-1]
    for t in reversed(factors[:-1]):
        out = t * out
    return out


def recompose_top_first(factors: Sequence[Endomorphism]) -> Endomorphism:
    """``t_k o ... o t_1`` (``t_1`` applied first); equals ``f`` only in special cases."""
    out = factors[0]
    for t in factors[1:]:
        out = t * out
    return out
