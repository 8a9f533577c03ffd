"""Exact rank by subset search, relative rank, and the certified ``2k`` bounds.

Search works on an enumerated semigroup: elements are interned to ids and the
full Cayley table is built once, so a candidate set's closure costs only
table lookups.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .closure import ClosureReport, closure
from .partition import Endomorphism, PartitionType, compose, enumerate_endomorphisms
from .predicates import UnsupportedConstruction, step_witness, stratum
from .wreath import gf2_rank, group_generators, parity
from .elementary import bracket

DEFAULT_MAX_CANDIDATES = 5 * 10**6


class InfeasibleError(RuntimeError):
    """The requested search is beyond the configured bounds."""


class FiniteSemigroup:
    """An explicitly enumerated finite semigroup with its Cayley table."""

    def __init__(self, elements: Sequence, mul: Callable, check_closed: bool = True):
        self.elements = list(elements)
        self.index = {x: i for i, x in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise ValueError("duplicate elements")
        self.mul = mul
        table = []
        for x in self.elements:
            row = []
            for y in self.elements:
                z = self.index.get(mul(x, y))
                if z is None:
                    if check_closed:
                        raise ValueError("element set is not closed under multiplication")
                    z = -1
                row.append(z)
            table.append(row)
        self.table = table

    def __len__(self):
        return len(self.elements)

    @classmethod
    def of_type(cls, ptype: PartitionType, keep: Callable | None = None, bound: int = 10**4):
        """``P(n~)`` (or the subset selected by ``keep``) in enumeration order."""
        elements = enumerate_endomorphisms(ptype, bound=bound)
        if keep is not None:
            elements = [f for f in elements if keep(f)]
        return cls(elements, compose)

    def ids(self, xs: Iterable) -> list[int]:
        return [self.index[x] for x in xs]

    def is_closed(self, ids: Iterable[int]) -> bool:
        s = set(ids)
        return all(self.table[a][b] in s for a in s for b in s)

    def closure_ids(self, gens: Iterable[int]) -> set[int]:
        table = self.table
        gens = list(dict.fromkeys(gens))
        seen = set(gens)
        stack = list(gens)
        while stack:
            a = stack.pop()
            row = table[a]
            for g in gens:
                c = row[g]
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        return seen

    def generates(self, gens: Iterable[int]) -> bool:
        return len(self.closure_ids(gens)) == len(self.elements)


@dataclass
class SearchOutcome:
    size: int
    witness: tuple[int, ...] | None
    candidates: int = 0
    pruned: int = 0
    closures: int = 0

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "witness": list(self.witness) if self.witness is not None else None,
            "candidates": self.candidates,
            "pruned": self.pruned,
            "closures": self.closures,
        }


@dataclass
class RankCertificate:
    kind: str  # "exact" | "lower-bound" | "upper-bound"
    value: int
    witness: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"kind": self.kind, "value": self.value, "witness": self.witness}


def search_generating_set(
    S: FiniteSemigroup,
    size: int,
    *,
    base: Sequence[int] = (),
    pool: Sequence[int] | None = None,
    prune: Callable[[tuple[int, ...]], bool] | None = None,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
) -> SearchOutcome:
    """Find ``size`` ids that together with ``base`` generate ``S``, or prove none exist.

    Candidate sets run in lexicographic id order; ``prune`` is a necessary
    condition checked before any closure.
    """
    pool = list(range(len(S))) if pool is None else list(pool)
    total = math.comb(len(pool), size)
    if total > max_candidates:
        raise InfeasibleError(f"{total} candidate {size}-subsets exceed bound {max_candidates}")
    out = SearchOutcome(size, None)
    base = list(base)
    n = len(S)
    for combo in itertools.combinations(pool, size):
        out.candidates += 1
        if prune is not None and not prune(combo):
            out.pruned += 1
            continue
        out.closures += 1
        if len(S.closure_ids(base + list(combo))) == n:
            out.witness = combo
            return out
    return out


def brute_rank(
    S: FiniteSemigroup,
    max_size: int | None = None,
    prune: Callable | None = None,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
) -> RankCertificate:
    """Exact rank: the first size with a generating subset, every smaller size exhausted."""
    max_size = len(S) if max_size is None else max_size
    exhausted = []
    for r in range(1, max_size + 1):
        res = search_generating_set(S, r, prune=prune, max_candidates=max_candidates)
        if res.witness is not None:
            return RankCertificate(
                "exact", r, {"generators": list(res.witness), "search": res.to_json(),
                             "exhausted": exhausted, "pruned_search": prune is not None},
            )
        exhausted.append(res.to_json())
    raise InfeasibleError(f"no generating set of size <= {max_size}")


def relative_rank(
    S: FiniteSemigroup,
    T: Iterable[int],
    max_size: int | None = None,
    prune: Callable | None = None,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
) -> RankCertificate:
    """Least ``r`` such that ``T`` plus some ``r`` elements generates ``S``."""
    T = sorted(set(T))
    if not S.is_closed(T):
        raise ValueError("T is not a subsemigroup")
    rest = [i for i in range(len(S)) if i not in set(T)]
    max_size = len(rest) if max_size is None else max_size
    exhausted = []
    for r in range(0, max_size + 1):
        res = search_generating_set(
            S, r, base=T, pool=rest, prune=prune, max_candidates=max_candidates
        )
        if res.witness is not None:
            return RankCertificate(
                "exact", r, {"generators": list(res.witness), "search": res.to_json(),
                             "exhausted": exhausted},
            )
        exhausted.append(res.to_json())
    raise InfeasibleError(f"no relative generating set of size <= {max_size}")


# The 2k lower bound ---------------------------------------------------------


def parity_witnesses(ptype: PartitionType) -> list[Endomorphism]:
    """``[(1,2), (1,...,1)]`` at each level: their parity vectors are triangular."""
    return [bracket(ptype, (2, 1) + tuple(range(3, ptype.n(j) + 1)), (1,) * (j - 1))
            for j in range(1, ptype.depth + 1)]


def lower_bound_2k(ptype: PartitionType) -> RankCertificate:
    """Certificate that every generating set of ``P(n~)`` has at least ``2k`` elements.

    Part (i): ``stratum(ab) = min(stratum(a), stratum(b))``, so each stratum
    ``j-1`` (non-empty, witnessed by a step element) needs a generator of its own.
    Part (ii): generators in stratum ``k`` must generate the automorphism
    group, and parity maps that onto ``Z_2^k``, so they need ``k`` elements.
    """
    k = ptype.depth
    for j in range(1, k + 1):
        if ptype.n(j) < 2:
            raise UnsupportedConstruction(f"lower bound needs every n_j >= 2; n_{j} = {ptype.n(j)}", level=j)
    strata = []
    for j in range(1, k + 1):
        w = step_witness(ptype, j)
        strata.append({"level": j, "stratum": j - 1, "witness": w.to_json()})
    matrix = [list(parity(g)) for g in parity_witnesses(ptype)]
    return RankCertificate(
        "lower-bound",
        2 * k,
        {
            "type": list(ptype.levels),
            "strata_requirements": strata,
            "parity_witnesses": [g.to_json() for g in parity_witnesses(ptype)],
            "parity_matrix": matrix,
            "parity_rank": gf2_rank(matrix),
        },
    )


def verify_lower_bound(cert: RankCertificate) -> dict[str, bool]:
    """Re-check a lower-bound certificate from its own witness data."""
    w = cert.witness
    k = len(w["type"])
    checks = {}
    checks["strata witnessed"] = [s["stratum"] for s in w["strata_requirements"]] == list(range(k)) and all(
        stratum(Endomorphism.from_json(s["witness"])) == s["stratum"] for s in w["strata_requirements"]
    )
    recomputed = [list(parity(Endomorphism.from_json(g))) for g in w["parity_witnesses"]]
    checks["parity matrix"] = recomputed == w["parity_matrix"]
    checks["parity rank = k"] = gf2_rank(recomputed) == k == w["parity_rank"]
    checks["value = 2k"] = cert.value == 2 * k
    return checks


def check_candidate(ptype: PartitionType, gens: Sequence[Endomorphism]) -> dict[str, bool]:
    """The two necessary conditions of the lower bound, applied to a candidate set."""
    k = ptype.depth
    strata = [stratum(g) for g in gens]
    top = [parity(g) for g, s in zip(gens, strata) if s == k]
    return {
        "hits every stratum below k": all(s in strata for s in range(k)),
        "parity images span Z_2^k": gf2_rank(top) == k,
    }


def strata_parity_prune(S: FiniteSemigroup, ptype: PartitionType, required_strata: Iterable[int] | None = None):
    """Necessary-condition filter for subsets of ``S`` (a subsemigroup of ``P(n~)``)."""
    k = ptype.depth
    st = [stratum(f) for f in S.elements]
    if required_strata is None:
        required_strata = sorted(set(st) - {k})
    required = frozenset(required_strata)
    par = [int("".join(map(str, parity(f))), 2) if s == k else None for f, s in zip(S.elements, st)]
    # rank of the full parity image; equals k when every n_j >= 2
    target = _bits_rank([p for p in par if p is not None])

    def ok(combo) -> bool:
        if not required <= {st[i] for i in combo}:
            return False
        if target:
            rows = [par[i] for i in combo if par[i] is not None]
            if len(rows) < target or _bits_rank(rows) < target:
                return False
        return True

    return ok


def _bits_rank(rows: list[int]) -> int:
    basis: list[int] = []
    for x in rows:
        for b in basis:
            x = min(x, x ^ b)
        if x:
            basis.append(x)
    return len(basis)


# The 2k upper bound ---------------------------------------------------------


def full_generating_set(
    ptype: PartitionType, bound: int = 10**6, workers: int = 1
) -> tuple[list[Endomorphism], ClosureReport]:
    """``k`` group generators plus ``k`` step witnesses, with their closure checked."""
    gens = group_generators(ptype) + [step_witness(ptype, j) for j in range(1, ptype.depth + 1)]
    target = ptype.monoid_size()
    if target > bound:
        raise InfeasibleError(f"|P{ptype.levels}| = {target} exceeds closure bound {bound}")
    report = closure(gens, compose, bound=bound, target=target, workers=workers).report
    return gens, report


def upper_bound_certificate(ptype: PartitionType, bound: int = 10**6, workers: int = 1) -> RankCertificate:
    gens, report = full_generating_set(ptype, bound=bound, workers=workers)
    kind = "upper-bound" if report.reached_target else "failed-upper-bound"
    return RankCertificate(
        kind,
        len(gens),
        {"generators": [g.to_json() for g in gens], "closure": report.to_json()},
    )
