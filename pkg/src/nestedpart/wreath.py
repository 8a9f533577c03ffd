"""Permutations, wreath products, and the automorphism group of ``I(n~)``.

Permutations act on the right and multiply left to right: ``i(ps) = (ip)s``,
so ``(1,2)(2,3) == (1,3,2)``. Wreath products ``G wr S_m`` multiply as

    (h_1..h_m) p * (g_1..g_m) s = (h_1 g_{1p}, ..., h_m g_{mp}) ps
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Iterator, Sequence

from .closure import ClosureReport, closure
from .partition import Endomorphism, PartitionType
from .predicates import UnsupportedConstruction, stratum


@dataclass(frozen=True, slots=True)
class Permutation:
    """A permutation of ``[1..m]``; ``images[i]`` is the 0-based image of ``i``."""

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a permutation: {self.images}")

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls(tuple(range(m)))

    @classmethod
    def from_images(cls, images: Sequence[int]) -> "Permutation":
        """From a 1-based image table."""
        return cls(tuple(int(x) - 1 for x in images))

    @classmethod
    def cycle(cls, m: int, *points: int) -> "Permutation":
        """The cycle ``(p1, p2, ..., pr)`` on ``[1..m]``, 1-based."""
        img = list(range(m))
        for a, b in zip(points, points[1:] + points[:1]):
            img[a - 1] = b - 1
        return cls(tuple(img))

    @classmethod
    def from_cycles(cls, m: int, *cycles: Sequence[int]) -> "Permutation":
        out = cls.identity(m)
        for c in cycles:
            out = out * cls.cycle(m, *c)
        return out

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        """``i`` acted on by this permutation, 1-based."""
        return self.images[i - 1] + 1

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.degree != self.degree:
            raise ValueError(f"degree mismatch {self.degree} vs {other.degree}")
        o = other.images
        return Permutation(tuple(o[x] for x in self.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, x in enumerate(self.images):
            inv[x] = i
        return Permutation(tuple(inv))

    def __pow__(self, e: int) -> "Permutation":
        return _power(self, e, Permutation.identity(self.degree), Permutation.inverse)

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for i in range(self.degree):
            if i in seen:
                continue
            c, j = [], i
            while j not in seen:
                seen.add(j)
                c.append(j + 1)
                j = self.images[j]
            if len(c) > 1:
                out.append(tuple(c))
        return out

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles())) if not self.is_identity() else 1

    def sign(self) -> int:
        """0 for even, 1 for odd."""
        return sum(len(c) - 1 for c in self.cycles()) % 2

    def __repr__(self):
        body = "".join("(" + ",".join(map(str, c)) + ")" for c in self.cycles())
        return f"Permutation[{self.degree}]{body or '()'}"


def perm_mul(p: Permutation, s: Permutation) -> Permutation:
    return p * s


def _power(x, e, one, inv, mul=None):
    mul = mul or (lambda a, b: a * b)
    if e < 0:
        x, e = inv(x), -e
    out = one
    while e:
        if e & 1:
            out = mul(out, x)
        x = mul(x, x)
        e >>= 1
    return out


def permutation_sign(images: Sequence[int]) -> int:
    """Parity (0/1) of a 0-based image table."""
    return Permutation(tuple(images)).sign()


# Groups -------------------------------------------------------------------


class Group:
    """A finite group with hashable elements."""

    def identity(self):
        raise NotImplementedError

    def mul(self, x, y):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def size(self) -> int:
        raise NotImplementedError

    def elements(self) -> Iterator:
        raise NotImplementedError

    def encode(self, x):
        raise NotImplementedError

    def random(self, rng: random.Random):
        raise NotImplementedError

    def power(self, x, e: int):
        return _power(x, e, self.identity(), self.inv, self.mul)

    def order(self, x) -> int:
        cache = self.__dict__.setdefault("_orders", {})
        if x not in cache:
            one, y, n = self.identity(), x, 1
            while y != one:
                y = self.mul(y, x)
                n += 1
            cache[x] = n
        return cache[x]

    def spot_check(self, trials: int = 20, seed: int = 0) -> None:
        rng = random.Random(seed)
        one = self.identity()
        for _ in range(trials):
            a, b, c = self.random(rng), self.random(rng), self.random(rng)
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                raise AssertionError(f"{self!r}: associativity fails")
            if self.mul(one, a) != a or self.mul(a, one) != a:
                raise AssertionError(f"{self!r}: identity law fails")
            if self.mul(a, self.inv(a)) != one:
                raise AssertionError(f"{self!r}: inverse law fails")


class SymmetricGroup(Group):
    def __init__(self, n: int):
        if n < 1:
            raise ValueError("degree must be positive")
        self.n = n
        self.spot_check()

    def __repr__(self):
        return f"S_{self.n}"

    def __eq__(self, other):
        return isinstance(other, SymmetricGroup) and other.n == self.n

    def __hash__(self):
        return hash(("S", self.n))

    def identity(self):
        return Permutation.identity(self.n)

    def mul(self, x, y):
        return x * y

    def inv(self, x):
        return x.inverse()

    def order(self, x) -> int:
        return x.order()

    def size(self) -> int:
        return math.factorial(self.n)

    def elements(self):
        return (Permutation(p) for p in itertools.permutations(range(self.n)))

    def encode(self, x):
        return [i + 1 for i in x.images]

    def decode(self, data):
        return Permutation.from_images(data)

    def random(self, rng):
        img = list(range(self.n))
        rng.shuffle(img)
        return Permutation(tuple(img))


@dataclass(frozen=True, slots=True)
class WreathElement:
    base: tuple
    top: Permutation


class WreathProduct(Group):
    """``G wr S_m``."""

    def __init__(self, base_group: Group, m: int):
        self.G = base_group
        self.m = m
        self.top_group = SymmetricGroup(m)
        self.spot_check()

    def __repr__(self):
        return f"({self.G!r} wr S_{self.m})"

    def __eq__(self, other):
        return isinstance(other, WreathProduct) and (other.G, other.m) == (self.G, self.m)

    def __hash__(self):
        return hash(("W", self.G, self.m))

    def identity(self):
        e = self.G.identity()
        return WreathElement((e,) * self.m, Permutation.identity(self.m))

    def mul(self, x, y):
        gm = self.G.mul
        yb = y.base
        base = tuple(gm(h, yb[ip]) for h, ip in zip(x.base, x.top.images))
        return WreathElement(base, x.top * y.top)

    def inv(self, x):
        pinv = x.top.inverse()
        base = tuple(self.G.inv(x.base[pinv.images[j]]) for j in range(self.m))
        return WreathElement(base, pinv)

    def size(self) -> int:
        return self.G.size() ** self.m * math.factorial(self.m)

    def elements(self):
        for base in itertools.product(list(self.G.elements()), repeat=self.m):
            for top in self.top_group.elements():
                yield WreathElement(tuple(base), top)

    def encode(self, x):
        return {"base": [self.G.encode(g) for g in x.base], "top": self.top_group.encode(x.top)}

    def decode(self, data):
        base = tuple(self.G.decode(g) for g in data["base"])
        if len(base) != self.m:
            raise ValueError(f"base needs {self.m} entries")
        return WreathElement(base, self.top_group.decode(data["top"]))

    def random(self, rng):
        return WreathElement(
            tuple(self.G.random(rng) for _ in range(self.m)), self.top_group.random(rng)
        )

    def embed(self, g, i: int) -> WreathElement:
        """``[g, i]``: ``g`` in base slot ``i`` (1-based), identity elsewhere."""
        if not 1 <= i <= self.m:
            raise ValueError(f"position {i} out of range 1..{self.m}")
        e = self.G.identity()
        base = tuple(g if p == i else e for p in range(1, self.m + 1))
        return WreathElement(base, Permutation.identity(self.m))

    def top_element(self, p: Permutation) -> WreathElement:
        if p.degree != self.m:
            raise ValueError(f"top permutation must have degree {self.m}")
        return WreathElement((self.G.identity(),) * self.m, p)

    def act(self, p: Permutation, base: Sequence) -> tuple:
        """The left action ``p(g_1..g_m) = (g_{1p}..g_{mp})``."""
        return tuple(base[x] for x in p.images)


def wreath_mul(W: WreathProduct, x: WreathElement, y: WreathElement) -> WreathElement:
    return W.mul(x, y)


def embed(W: WreathProduct, g, i: int) -> WreathElement:
    return W.embed(g, i)


def lift(G: Group, p: Permutation):
    """A permutation viewed in ``G``: itself in ``S_n``, the top part of a wreath product."""
    if isinstance(G, SymmetricGroup):
        if p.degree != G.n:
            raise ValueError(f"degree {p.degree} does not match {G!r}")
        return p
    return G.top_element(p)


# Recovery lemmas -----------------------------------------------------------


@dataclass
class CoprimeSplit:
    embedded: WreathElement  # [g, i]
    top: WreathElement  # pi
    exponent_embedded: int
    exponent_top: int
    order: int


def coprime_split(W: WreathProduct, x: WreathElement, ord_g: int, ord_pi: int, i: int) -> CoprimeSplit:
    """Split ``x = [g, i] pi`` into its commuting factors as powers of ``x``.

    Needs ``gcd(ord_g, ord_pi) == 1`` and ``i`` fixed by ``pi``.
    """
    if math.gcd(ord_g, ord_pi) != 1:
        raise ValueError(f"orders {ord_g} and {ord_pi} are not coprime")
    if x.top(i) != i:
        raise ValueError(f"position {i} is not fixed by the top permutation")
    order = W.order(x)
    # e_top = 1 (mod ord_pi), 0 (mod ord_g); e_emb = 1 - e_top
    e_top = (pow(ord_g, -1, ord_pi) * ord_g) % order if ord_pi > 1 else 0
    e_emb = (1 - e_top) % order
    return CoprimeSplit(W.power(x, e_emb), W.power(x, e_top), e_emb, e_top, order)


Word = list  # tokens "a", "b", "A" (a inverse)


@dataclass
class StrannayaResult:
    a: WreathElement
    b: WreathElement
    targets: dict  # name -> (element, word)
    identities: dict  # name -> bool


def eval_word(W: WreathProduct, word: Sequence[str], letters: dict) -> WreathElement:
    out = W.identity()
    for t in word:
        out = W.mul(out, letters[t])
    return out


def strannaya_extract(W: WreathProduct, g, sigma) -> StrannayaResult:
    """Recover ``[g,3]``, ``[sigma,1]``, ``(1..m)`` and ``(1,2)`` from
    ``a = [sigma,2](1..m)`` and ``b = [g,3](1,2)`` as explicit words."""
    G, m = W.G, W.m
    og, os_ = G.order(g), G.order(sigma)
    if og % 2 == 0:
        raise ValueError(f"g must have odd order, has {og}")
    if os_ != 2:
        raise ValueError(f"sigma must have order 2, has {os_}")
    if m < 3:
        raise ValueError("degree must be at least 3")

    full_cycle = Permutation.cycle(m, *range(1, m + 1))
    swap = Permutation.cycle(m, 1, 2)
    a = W.mul(W.embed(sigma, 2), W.top_element(full_cycle))
    b = W.mul(W.embed(g, 3), W.top_element(swap))
    letters = {"a": a, "b": b, "A": W.inv(a)}

    split = coprime_split(W, b, og, 2, 3)
    w_g3 = ["b"] * split.exponent_embedded
    w_swap = ["b"] * split.exponent_top
    w_am = ["a"] * m
    w_abm = ["a", "b"] * (m - 1)
    w_sigma1 = (w_am + w_abm) * og
    w_cycle = ["A"] + w_sigma1 + ["a", "a"]

    e = G.identity()
    sg = G.mul(sigma, g)
    ident = W.top_group.identity()
    identities = {
        "a^m = (s,...,s)": eval_word(W, w_am, letters) == WreathElement((sigma,) * m, ident),
        "(ab)^(m-1) = (e,sg,...,sg)": eval_word(W, w_abm, letters)
        == WreathElement((e,) + (sg,) * (m - 1), ident),
        "a^m (ab)^(m-1) = (s,g,...,g)": eval_word(W, w_am + w_abm, letters)
        == WreathElement((sigma,) + (g,) * (m - 1), ident),
        "[s,1] = (a^m (ab)^(m-1))^ord(g)": eval_word(W, w_sigma1, letters) == W.embed(sigma, 1),
        "a^-1 [s,1] a^2 = (1..m)": eval_word(W, w_cycle, letters) == W.top_element(full_cycle),
    }
    targets = {
        "[g,3]": (W.embed(g, 3), w_g3),
        "[s,1]": (W.embed(sigma, 1), w_sigma1),
        "(1..m)": (W.top_element(full_cycle), w_cycle),
        "(1,2)": (W.top_element(swap), w_swap),
    }
    for name, (elem, word) in targets.items():
        identities[f"word for {name}"] = eval_word(W, word, letters) == elem
    return StrannayaResult(a, b, targets, identities)


def gen_check(
    W: WreathProduct,
    group_gens: Sequence,
    perm_gens: Sequence[Permutation],
    positions: Sequence[int],
    bound: int = 10**6,
) -> ClosureReport:
    """Closure of ``{[g_t, i_t]} + perm_gens`` compared with ``|G|^m m!``."""
    if len(positions) != len(group_gens):
        raise ValueError("need one position per group generator")
    gens = [W.embed(g, i) for g, i in zip(group_gens, positions)]
    gens += [W.top_element(p) for p in perm_gens]
    if not gens:
        gens = [W.identity()]
    return closure(gens, W.mul, bound=bound, target=W.size()).report


# Iterated wreath products and the automorphism group ----------------------


def iterated(ptype: PartitionType) -> Group:
    """``S_nk wr ... wr S_n1``; the top group is ``S_n1``."""
    levels = ptype.levels if isinstance(ptype, PartitionType) else tuple(ptype)
    G: Group = SymmetricGroup(levels[-1])
    for n in reversed(levels[:-1]):
        G = WreathProduct(G, n)
    return G


def layer(ptype: PartitionType, j: int) -> Group:
    """``S_nk wr ... wr S_nj``."""
    return iterated(ptype.levels[j - 1:])


# endo_to_wreath(f * g) == W.mul(endo_to_wreath(g), endo_to_wreath(f)):
# endomorphisms compose right-to-left, the wreath product left-to-right.
ISO_ORIENTATION = "anti"


def _sub_local(f: Endomorphism, i: int):
    """Local maps of ``f`` on the subtree above the level-1 point ``i`` (1-based)."""
    pt = f.ptype
    sub = {}
    for j in range(1, pt.depth):
        for w in PartitionType(pt.levels[1:]).points(j - 1):
            sub[w] = f.local((i,) + w)
    return sub


def endo_to_wreath(f: Endomorphism):
    """``f -> (f(1), ..., f(n1)) f_1`` on automorphisms."""
    if stratum(f) != f.ptype.depth:
        raise ValueError("only automorphisms correspond to wreath elements")
    return _endo_to_wreath(f.ptype.levels, f.local_maps())


def _endo_to_wreath(levels, local):
    top = Permutation.from_images(local[()])
    if len(levels) == 1:
        return top
    base = []
    for i in range(1, levels[0] + 1):
        sub = {v[1:]: m for v, m in local.items() if v[:1] == (i,)}
        base.append(_endo_to_wreath(levels[1:], sub))
    return WreathElement(tuple(base), top)


def wreath_to_endo(ptype: PartitionType, x) -> Endomorphism:
    local = {}
    _collect_local(ptype.levels, x, (), local)
    return Endomorphism.from_local_maps(ptype, local)


def _collect_local(levels, x, prefix, local):
    if len(levels) == 1:
        if not isinstance(x, Permutation) or x.degree != levels[0]:
            raise ValueError(f"expected a permutation of degree {levels[0]}")
        local[prefix] = [i + 1 for i in x.images]
        return
    if not isinstance(x, WreathElement) or x.top.degree != levels[0]:
        raise ValueError(f"expected a wreath element over S_{levels[0]}")
    local[prefix] = [i + 1 for i in x.top.images]
    for i, y in enumerate(x.base, start=1):
        _collect_local(levels[1:], y, prefix + (i,), local)


def nested_embed(ptype: PartitionType, sigma: Permutation, v: Sequence[int]):
    """``[[...[sigma, v_{j-1}], ...], v_1]`` in ``S_nk wr ... wr S_n1``, with
    ``sigma`` in ``S_nj`` and ``j = len(v) + 1``."""
    v = tuple(v)
    j = len(v) + 1
    x = lift(layer(ptype, j), sigma)
    for s in range(j - 1, 0, -1):
        x = layer(ptype, s).embed(x, v[s - 1])
    return x


def parity(f: Endomorphism) -> tuple[int, ...]:
    """Levelwise sign vector in ``Z_2^k`` (0 = even, 1 = odd)."""
    if stratum(f) != f.ptype.depth:
        raise ValueError("parity is defined on automorphisms only")
    return tuple(permutation_sign(f.level_indices(j)) for j in range(1, f.ptype.depth + 1))


def gf2_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over the two-element field."""
    basis: list[int] = []
    for row in rows:
        x = int("".join(str(b & 1) for b in row) or "0", 2)
        for bvec in basis:
            x = min(x, x ^ bvec)
        if x:
            basis.append(x)
    return len(basis)


def odd_cycle(n: int) -> Permutation:
    """``(1..n)`` for odd ``n``, ``(2..n)`` for even ``n``: an odd-order
    element that, together with ``(1,2)``, generates ``S_n``."""
    if n % 2:
        return Permutation.cycle(n, *range(1, n + 1))
    return Permutation.cycle(n, *range(2, n + 1))


def group_generators_wreath(ptype: PartitionType) -> list:
    """The ``k`` generators of ``S_nk wr ... wr S_n1`` as wreath elements."""
    for j, n in enumerate(ptype.levels, start=1):
        if n < 3:
            raise UnsupportedConstruction(
                f"generator construction needs every n_j >= 3; n_{j} = {n}", level=j
            )
    k = ptype.depth
    gens = []
    for j in range(1, k):
        Wj = layer(ptype, j)
        tau = lift(layer(ptype, j + 1), odd_cycle(ptype.n(j + 1)))
        gj = Wj.mul(Wj.embed(tau, 3), Wj.top_element(Permutation.cycle(ptype.n(j), 1, 2)))
        for s in range(j - 1, 0, -1):
            gj = layer(ptype, s).embed(gj, 3)
        gens.append(gj)
    swap = Permutation.cycle(ptype.n(k), 1, 2)
    if k == 1:
        gens.append(swap)
    else:
        sigma = nested_embed(PartitionType(ptype.levels[1:]), swap, (2,) * (k - 2))
        W1 = layer(ptype, 1)
        full = Permutation.cycle(ptype.n(1), *range(1, ptype.n(1) + 1))
        gens.append(W1.mul(W1.embed(sigma, 2), W1.top_element(full)))
    return gens


def group_generators(ptype: PartitionType) -> list[Endomorphism]:
    """``k`` automorphisms generating the automorphism group of ``I(n~)`` (``k >= 2``)."""
    return [wreath_to_endo(ptype, x) for x in group_generators_wreath(ptype)]
