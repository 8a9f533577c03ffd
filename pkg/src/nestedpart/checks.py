"""Exhaustive verification suites behind ``np verify``."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass

from .closure import closure
from .elementary import bracket, decompose, recompose, recompose_top_first
from .partition import (
    Endomorphism,
    PartitionType,
    compose,
    enumerate_endomorphisms,
)
from .predicates import (
    UnsupportedConstruction,
    check_primitive,
    conjugator_h,
    pred_level,
    step_witness,
    stratum,
)
from .wreath import (
    ISO_ORIENTATION,
    Permutation,
    SymmetricGroup,
    WreathProduct,
    coprime_split,
    endo_to_wreath,
    gf2_rank,
    group_generators,
    iterated,
    parity,
    strannaya_extract,
    wreath_to_endo,
)

SUITES = ("decomposition", "predicates", "step", "wreath-iso", "coprime", "strannaya", "generators")


@dataclass
class Check:
    name: str
    passed: int
    checked: int
    detail: str = ""
    informational: bool = False

    @property
    def ok(self) -> bool:
        return self.informational or self.passed == self.checked

    def to_json(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "checked": self.checked, "ok": self.ok}
        if self.informational:
            out["informational"] = True
        if self.detail:
            out["detail"] = self.detail
        return out


def _count(name, results, detail=""):
    results = list(results)
    return Check(name, sum(map(bool, results)), len(results), detail)


def sample_endomorphisms(ptype: PartitionType, count: int, seed: int = 0) -> list[Endomorphism]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        table = []
        for j, n in enumerate(ptype.levels):
            table.extend(rng.randrange(n) for _ in range(ptype.sizes[j] * n))
        out.append(Endomorphism(ptype, tuple(table)))
    return out


def _elements(ptype: PartitionType, bound: int, sample: int = 1000, seed: int = 0):
    if ptype.monoid_size() <= bound:
        return enumerate_endomorphisms(ptype, bound=bound), "exhaustive"
    return sample_endomorphisms(ptype, sample, seed), f"{sample} random"


def _anchors(ptype: PartitionType, j: int):
    return ptype.points(j - 1)


def local_self_maps(n: int):
    return list(itertools.product(range(1, n + 1), repeat=n))


def verify_decomposition(ptype: PartitionType, bound: int = 10**4) -> list[Check]:
    elems, how = _elements(ptype, bound)
    checks = [_count("f = t_1(f) o ... o t_k(f)", (recompose(decompose(f)) == f for f in elems), how)]
    literal = _count("f = t_k(f) o ... o t_1(f), t_1 applied first", (
        recompose_top_first(decompose(f)) == f for f in elems), how)
    literal.informational = True
    checks.append(literal)
    checks.append(
        _count(
            "t_j(f)_s = id for s < j",
            (
                decompose(f)[j - 1].level_indices(s) == list(range(ptype.sizes[s]))
                for f in elems
                for j in range(1, ptype.depth + 1)
                for s in range(j)
            ),
            how,
        )
    )
    prod, comm = [], []
    for j in range(1, ptype.depth + 1):
        maps = local_self_maps(ptype.n(j))
        anchors = _anchors(ptype, j)
        for v in anchors:
            for g1, g2 in itertools.product(maps, repeat=2):
                g12 = tuple(g1[x - 1] for x in g2)
                prod.append(bracket(ptype, g1, v) * bracket(ptype, g2, v) == bracket(ptype, g12, v))
        for v1, v2 in itertools.permutations(anchors, 2):
            for g, h in itertools.product(maps, repeat=2):
                a, b = bracket(ptype, g, v1), bracket(ptype, h, v2)
                comm.append(a * b == b * a)
    checks.append(_count("[g1,v][g2,v] = [g1 g2, v]", prod))
    checks.append(_count("[g,v1][h,v2] = [h,v2][g,v1]", comm))
    return checks


def verify_predicates(ptype: PartitionType, bound: int = 10**4) -> list[Check]:
    elems = enumerate_endomorphisms(ptype, bound=bound)
    k = ptype.depth
    checks = []
    preds = [(j,) for j in range(1, k + 1)] + [tuple(range(1, k + 1))]
    for levels in preds:
        bad = check_primitive(levels, elems)
        name = "primitive " + " & ".join(f"P_{j}" for j in levels)
        checks.append(Check(name, int(bad is None), 1, f"{len(elems) ** 2} pairs"))
    checks.append(
        _count(
            "P_j => P_{j-1}",
            (not pred_level(f, j) or pred_level(f, j - 1) for f in elems for j in range(2, k + 1)),
        )
    )
    inv = []
    for j in range(1, k + 1):
        for v in _anchors(ptype, j):
            for g in local_self_maps(ptype.n(j)):
                inv.append((stratum(bracket(ptype, g, v)) == k) == (len(set(g)) == len(g)))
    checks.append(_count("[g,v] in P_k iff g invertible", inv))
    return checks


def verify_step(ptype: PartitionType) -> list[Check]:
    k = ptype.depth
    strata, conj = [], []
    ident = Endomorphism.identity(ptype)
    for j in range(1, k + 1):
        if ptype.n(j) < 2:
            continue
        w = step_witness(ptype, j)
        strata.append(stratum(w) == j - 1)
        for v in _anchors(ptype, j):
            h = conjugator_h(ptype, j, v)
            tau_v = bracket(ptype, w.local((1,) * (j - 1)), v)
            conj.append(h * h == ident and h * w * h == tau_v)
    return [
        _count("stratum([tau,u]) = j-1", strata),
        _count("h^2 = ID and [tau,v] = h[tau,u]h", conj),
    ]


def verify_wreath_iso(ptype: PartitionType, bound: int = 10**4) -> list[Check]:
    if ptype.group_size() > bound:
        raise UnsupportedConstruction(f"automorphism group of size {ptype.group_size()} exceeds bound {bound}")
    auts = enumerate_endomorphisms(ptype, invertible_only=True, bound=bound)
    W = iterated(ptype)
    images = [endo_to_wreath(f) for f in auts]
    pos = {f: i for i, f in enumerate(auts)}
    checks = [
        Check("bijection", int(len(set(images)) == len(auts) == W.size()), 1, f"{len(auts)} <-> {W.size()}"),
        _count("inverse map", (wreath_to_endo(ptype, x) == f for f, x in zip(auts, images))),
    ]
    pairs = list(itertools.product(range(len(auts)), repeat=2))
    if ISO_ORIENTATION == "anti":
        hom = (images[pos[auts[a] * auts[b]]] == W.mul(images[b], images[a]) for a, b in pairs)
    else:
        hom = (images[pos[auts[a] * auts[b]]] == W.mul(images[a], images[b]) for a, b in pairs)
    checks.append(_count(f"orientation = {ISO_ORIENTATION}", hom))
    pv = [parity(f) for f in auts]
    checks.append(
        _count(
            "parity is a homomorphism",
            (
                parity(auts[a] * auts[b]) == tuple(x ^ y for x, y in zip(pv[a], pv[b]))
                for a, b in pairs
            ),
        )
    )
    checks.append(Check("parity is surjective", int(len(set(pv)) == 2 ** ptype.depth), 1,
                        f"image size {len(set(pv))}"))
    return checks


def coprime_instances(G, m: int, limit: int | None = None):
    """All ``(g, pi, i)`` with coprime orders and ``i`` fixed by ``pi``, in a fixed order."""
    tops = list(SymmetricGroup(m).elements())
    out = []
    for g in G.elements():
        og = G.order(g)
        for p in tops:
            op = p.order()
            if math.gcd(og, op) != 1:
                continue
            out.extend((g, p, i) for i in range(1, m + 1) if p(i) == i)
    if limit is not None:
        rng = random.Random(0)
        out = rng.sample(out, min(limit, len(out)))
    return out


def verify_coprime(instances=(((3, 3), 40), ((5, 4), 40))) -> list[Check]:
    checks = []
    for (n, m), limit in instances:
        G = SymmetricGroup(n)
        W = WreathProduct(G, m)
        results = []
        for g, p, i in coprime_instances(G, m, limit):
            x = W.mul(W.embed(g, i), W.top_element(p))
            s = coprime_split(W, x, G.order(g), p.order(), i)
            results.append(
                s.embedded == W.embed(g, i)
                and s.top == W.top_element(p)
                and W.mul(s.embedded, s.top) == x
            )
        checks.append(_count(f"coprime split in S_{n} wr S_{m}", results))
    return checks


def verify_strannaya(n: int = 3, m: int = 4) -> list[Check]:
    G = SymmetricGroup(n)
    W = WreathProduct(G, m)
    g = Permutation.cycle(n, *range(1, n + 1)) if n % 2 else Permutation.cycle(n, *range(2, n + 1))
    sigma = Permutation.cycle(n, 1, 2)
    res = strannaya_extract(W, g, sigma)
    checks = [Check(name, int(ok), 1) for name, ok in res.identities.items()]
    size = len(closure([res.a, res.b], W.mul, target=W.size()))
    checks.append(Check("<a, b> = G wr S_m", int(size == W.size()), 1, f"{size}/{W.size()}"))
    return checks


def verify_generators(ptype: PartitionType, bound: int = 10**6) -> list[Check]:
    gens = group_generators(ptype)
    W = iterated(ptype)
    target = W.size()
    if target > bound:
        raise UnsupportedConstruction(f"group of size {target} exceeds bound {bound}")
    size = len(closure(gens, compose, bound=bound))
    checks = [Check("k generators close to the automorphism group", int(size == target), 1, f"{size}/{target}")]
    pv = [parity(g) for g in gens]
    checks.append(Check("parity images span Z_2^k", int(gf2_rank(pv) == ptype.depth), 1))
    return checks


def run_suite(what: str, ptype: PartitionType | None, bound: int = 10**6) -> list[Check]:
    if what == "decomposition":
        return verify_decomposition(ptype, bound=min(bound, 10**4))
    if what == "predicates":
        return verify_predicates(ptype, bound=min(bound, 10**4))
    if what == "step":
        return verify_step(ptype)
    if what == "wreath-iso":
        return verify_wreath_iso(ptype, bound=min(bound, 10**4))
    if what == "coprime":
        return verify_coprime()
    if what == "strannaya":
        return verify_strannaya()
    if what == "generators":
        return verify_generators(ptype, bound=bound)
    raise ValueError(f"unknown suite {what!r}; choose from {', '.join(SUITES)}")
