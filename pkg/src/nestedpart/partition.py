"""Standard uniformly nested partitions and their endomorphisms.

A partition type ``(n1, ..., nk)`` describes the tower of sets
``I_j = [1..n1] x ... x [1..nj]`` with projections dropping the last
coordinate. An endomorphism is stored as its table of local maps: for each
level ``j`` and each point ``v`` of level ``j-1`` a self-map of ``[1..nj]``.

Public points and local maps are 1-based tuples. Internally everything is a
flat 0-based table so that composition stays cheap inside closures.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

DEFAULT_MAX_LEAVES = 10**6

Point = tuple  # tuple of 1-based coordinates; () is the level-0 point


class SizeBoundError(ValueError):
    """An instance exceeds a configured size bound."""


@dataclass(frozen=True)
class PartitionType:
    levels: tuple[int, ...]
    max_leaves: int = field(default=DEFAULT_MAX_LEAVES, compare=False, repr=False)
    sizes: tuple[int, ...] = field(init=False, compare=False, repr=False)
    offsets: tuple[int, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        levels = tuple(int(n) for n in self.levels)
        if not levels:
            raise ValueError("partition type needs at least one level")
        if any(n < 1 for n in levels):
            raise ValueError(f"level sizes must be positive, got {levels}")
        sizes = [1]
        for n in levels:
            sizes.append(sizes[-1] * n)
        if sizes[-1] > self.max_leaves:
            raise SizeBoundError(
                f"type {levels} has {sizes[-1]} leaves, bound is {self.max_leaves}"
            )
        offsets = [0]
        for j, n in enumerate(levels):
            offsets.append(offsets[-1] + sizes[j] * n)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "sizes", tuple(sizes))
        object.__setattr__(self, "offsets", tuple(offsets))

    @classmethod
    def parse(cls, text: str, **kw) -> "PartitionType":
        """Parse ``"3,3"`` style input."""
        try:
            levels = tuple(int(part) for part in text.split(","))
        except ValueError:
            raise ValueError(f"bad partition type {text!r}") from None
        return cls(levels, **kw)

    @property
    def depth(self) -> int:
        return len(self.levels)

    def n(self, j: int) -> int:
        """Block size ``n_j`` for ``1 <= j <= k``."""
        return self.levels[j - 1]

    def level_size(self, j: int) -> int:
        self._check_level(j, low=0)
        return self.sizes[j]

    @property
    def table_length(self) -> int:
        return self.offsets[-1]

    def monoid_size(self) -> int:
        """``prod_j n_j ** (n_j * n1...n_{j-1})``, exact."""
        return math.prod(n ** (n * self.sizes[j]) for j, n in enumerate(self.levels))

    def group_size(self) -> int:
        """Order of the automorphism group ``S_nk wr ... wr S_n1``."""
        return math.prod(
            math.factorial(n) ** self.sizes[j] for j, n in enumerate(self.levels)
        )

    def _check_level(self, j: int, low: int = 0) -> None:
        if not low <= j <= self.depth:
            raise ValueError(f"level {j} out of range {low}..{self.depth}")

    # Points ---------------------------------------------------------------

    def encode(self, point: Sequence[int]) -> int:
        """Mixed-radix index of a point, first coordinate most significant."""
        j = len(point)
        self._check_level(j)
        idx = 0
        for c, n in zip(point, self.levels):
            if not 1 <= c <= n:
                raise ValueError(f"coordinate {c} out of range 1..{n} in {tuple(point)}")
            idx = idx * n + (c - 1)
        return idx

    def decode(self, j: int, idx: int) -> Point:
        self._check_level(j)
        if not 0 <= idx < self.sizes[j]:
            raise ValueError(f"index {idx} out of range for level {j}")
        coords = []
        for n in reversed(self.levels[:j]):
            idx, c = divmod(idx, n)
            coords.append(c + 1)
        return tuple(reversed(coords))

    def points(self, j: int) -> list[Point]:
        self._check_level(j)
        return [tuple(p) for p in itertools.product(*(range(1, n + 1) for n in self.levels[:j]))]


def points_at_level(ptype: PartitionType, j: int) -> list[Point]:
    """All points of level ``j`` in ascending mixed-radix order."""
    return ptype.points(j)


def project(ptype: PartitionType, point: Sequence[int]) -> Point:
    """Drop the last coordinate."""
    if len(point) == 0:
        raise ValueError("the level-0 point has no projection")
    ptype.encode(point)
    return tuple(point[:-1])


def is_permutation(images: Sequence[int]) -> bool:
    return len(set(images)) == len(images)


def _check_local_map(m: Sequence[int], n: int, where) -> tuple[int, ...]:
    m = tuple(int(x) for x in m)
    if len(m) != n or any(not 1 <= x <= n for x in m):
        raise ValueError(f"local map at {where} must be a self-map of [1..{n}], got {m}")
    return m


@dataclass(frozen=True, slots=True)
class Endomorphism:
    """An element of the endomorphism monoid, as a flat local-map table.

    ``table[offsets[j-1] + a*n_j + i]`` is the 0-based image of ``i`` under
    the local map at the level-(j-1) point with index ``a``.
    """

    ptype: PartitionType
    table: tuple[int, ...]

    @classmethod
    def identity(cls, ptype: PartitionType) -> "Endomorphism":
        table = []
        for j, n in enumerate(ptype.levels):
            table.extend(range(n) for _ in range(ptype.sizes[j]))
        return cls(ptype, tuple(itertools.chain.from_iterable(table)))

    @classmethod
    def from_local_maps(
        cls, ptype: PartitionType, local: Mapping[Point, Sequence[int]]
    ) -> "Endomorphism":
        """Build from a mapping ``point -> 1-based local map`` covering every prefix point."""
        table = []
        for j in range(1, ptype.depth + 1):
            n = ptype.n(j)
            for v in ptype.points(j - 1):
                if v not in local:
                    raise ValueError(f"missing local map at point {v}")
                table.extend(x - 1 for x in _check_local_map(local[v], n, v))
        expected = sum(ptype.sizes[j] for j in range(ptype.depth))
        if len(local) != expected:
            extra = set(local) - {v for j in range(ptype.depth) for v in ptype.points(j)}
            raise ValueError(f"local maps given at non-prefix points {sorted(extra)}")
        return cls(ptype, tuple(table))

    def local(self, v: Sequence[int]) -> tuple[int, ...]:
        """The 1-based local map ``f[v]``."""
        j = len(v) + 1
        if j > self.ptype.depth:
            raise ValueError(f"no local map at leaf point {tuple(v)}")
        n = self.ptype.n(j)
        start = self.ptype.offsets[j - 1] + self.ptype.encode(v) * n
        return tuple(x + 1 for x in self.table[start:start + n])

    def local_maps(self) -> dict[Point, tuple[int, ...]]:
        return {
            v: self.local(v)
            for j in range(self.ptype.depth)
            for v in self.ptype.points(j)
        }

    def level_indices(self, j: int) -> list[int]:
        """Level map ``f_j`` as a list over mixed-radix indices."""
        pt = self.ptype
        pt._check_level(j)
        t = self.table
        cur = [0]
        for lvl in range(j):
            n = pt.levels[lvl]
            off = pt.offsets[lvl]
            nxt = []
            for a, fa in enumerate(cur):
                base = off + a * n
                nxt.extend(fa * n + t[base + i] for i in range(n))
            cur = nxt
        return cur

    def level_map(self, j: int) -> dict[Point, Point]:
        pt = self.ptype
        idx = self.level_indices(j)
        return {pt.decode(j, a): pt.decode(j, b) for a, b in enumerate(idx)}

    def leaf_indices(self) -> list[int]:
        return self.level_indices(self.ptype.depth)

    def __call__(self, point: Sequence[int]) -> Point:
        j = len(point)
        return self.ptype.decode(j, self.level_indices(j)[self.ptype.encode(point)])

    def __mul__(self, other: "Endomorphism") -> "Endomorphism":
        return compose(self, other)

    def is_identity(self) -> bool:
        return self == Endomorphism.identity(self.ptype)

    def to_json(self) -> dict:
        return {
            "type": list(self.ptype.levels),
            "local": [
                {"v": list(v), "map": list(m)} for v, m in self.local_maps().items()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping, max_leaves: int = DEFAULT_MAX_LEAVES) -> "Endomorphism":
        ptype = PartitionType(tuple(data["type"]), max_leaves=max_leaves)
        local = {}
        for entry in data["local"]:
            v = tuple(entry["v"])
            if v in local:
                raise ValueError(f"duplicate local map at {v}")
            local[v] = entry["map"]
        return cls.from_local_maps(ptype, local)


def endo_from_local_maps(ptype: PartitionType, table: Mapping[Point, Sequence[int]]) -> Endomorphism:
    return Endomorphism.from_local_maps(ptype, table)


def level_map(f: Endomorphism, j: int) -> dict[Point, Point]:
    return f.level_map(j)


def compose(f: Endomorphism, g: Endomorphism) -> Endomorphism:
    """``fg``: apply ``g`` first, then ``f``; ``(fg)[v] = f[g(v)] o g[v]``."""
    pt = f.ptype
    if g.ptype != pt:
        raise ValueError(f"type mismatch: {pt.levels} vs {g.ptype.levels}")
    ft, gt = f.table, g.table
    levels, offsets = pt.levels, pt.offsets
    last = len(levels) - 1
    out = []
    gprev = [0]
    for lvl, n in enumerate(levels):
        off = offsets[lvl]
        gcur = []
        for a, ga in enumerate(gprev):
            bg = off + a * n
            bf = off + ga * n
            gl = gt[bg:bg + n]
            out.extend(ft[bf + x] for x in gl)
            if lvl != last:
                gn = ga * n
                gcur.extend(gn + x for x in gl)
        gprev = gcur
    return Endomorphism(pt, tuple(out))


def verify_commuting(f: Endomorphism) -> bool:
    """Check ``rho_j o f_{j+1} == f_j o rho_j`` for every level."""
    pt = f.ptype
    prev = f.level_indices(0)
    for j in range(pt.depth):
        n = pt.levels[j]
        cur = f.level_indices(j + 1)
        if any(cur[a] // n != prev[a // n] for a in range(len(cur))):
            return False
        prev = cur
    return True


def iter_endomorphisms(ptype: PartitionType, invertible_only: bool = False) -> Iterator[Endomorphism]:
    """All endomorphisms (or automorphisms) in lexicographic table order."""
    slots = []
    for j, n in enumerate(ptype.levels):
        if invertible_only:
            choices = list(itertools.permutations(range(n)))
        else:
            choices = list(itertools.product(range(n), repeat=n))
        slots.extend([choices] * ptype.sizes[j])
    for combo in itertools.product(*slots):
        yield Endomorphism(ptype, tuple(itertools.chain.from_iterable(combo)))


def enumerate_endomorphisms(
    ptype: PartitionType, invertible_only: bool = False, bound: int = DEFAULT_MAX_LEAVES
) -> list[Endomorphism]:
    size = ptype.group_size() if invertible_only else ptype.monoid_size()
    if size > bound:
        raise SizeBoundError(f"{size} elements exceed enumeration bound {bound}")
    return list(iter_endomorphisms(ptype, invertible_only))


@dataclass(frozen=True)
class Rejection:
    """A leaf map that does not respect the partition: ``block`` is split."""

    level: int
    block: Point
    images: tuple[Point, ...]

    def __bool__(self):
        return False


def from_leaf_map(ptype: PartitionType, leaf_map) -> Endomorphism | Rejection:
    """Recover the endomorphism induced by a map on leaf points.

    ``leaf_map`` is either a sequence of 0-based leaf indices or a mapping
    from leaf points to leaf points.
    """
    k = ptype.depth
    nleaves = ptype.sizes[k]
    if isinstance(leaf_map, Mapping):
        idx = [None] * nleaves
        for p, q in leaf_map.items():
            if len(p) != k or len(q) != k:
                raise ValueError("leaf map must send leaf points to leaf points")
            idx[ptype.encode(p)] = ptype.encode(q)
        if None in idx:
            raise ValueError("leaf map is not total")
    else:
        idx = [int(x) for x in leaf_map]
        if len(idx) != nleaves or any(not 0 <= x < nleaves for x in idx):
            raise ValueError(f"leaf map must be a total self-map of {nleaves} leaves")

    # level_maps[j][a] = image block of level-j point a
    level_maps = {k: idx}
    below = idx
    for j in range(k - 1, -1, -1):
        n = ptype.levels[j]
        cur = []
        for a in range(ptype.sizes[j]):
            images = {below[a * n + i] // n for i in range(n)}
            if len(images) != 1:
                block = ptype.decode(j, a)
                shown = tuple(ptype.decode(j, b) for b in sorted(images))
                return Rejection(j, block, shown)
            cur.append(images.pop())
        level_maps[j] = cur
        below = cur

    table = []
    for j, n in enumerate(ptype.levels):
        nxt = level_maps[j + 1]
        for a in range(ptype.sizes[j]):
            table.extend(nxt[a * n + i] % n for i in range(n))
    return Endomorphism(ptype, tuple(table))


# Generic nested partitions ------------------------------------------------


@dataclass(frozen=True)
class NestedPartition:
    """A tree-indexed family of blocks ``P_t`` of a finite set.

    ``parent`` maps every non-root vertex to its parent; ``blocks`` maps every
    vertex to its block.
    """

    root: object
    parent: Mapping
    blocks: Mapping

    def __post_init__(self):
        if self.root in self.parent:
            raise ValueError("root must not have a parent")
        verts = set(self.parent) | {self.root}
        if set(self.blocks) != verts:
            raise ValueError("every vertex needs exactly one block")
        for v, p in self.parent.items():
            if p not in verts:
                raise ValueError(f"parent {p!r} of {v!r} is not a vertex")
        level = {}
        for v in verts:
            seen, d, u = set(), 0, v
            while u != self.root:
                if u in seen:
                    raise ValueError("parent links contain a cycle")
                seen.add(u)
                u = self.parent[u]
                d += 1
            level[v] = d
        children = {v: [] for v in verts}
        for v, p in self.parent.items():
            children[p].append(v)
        for v, kids in children.items():
            if not kids:
                continue
            union = set()
            for c in kids:
                b = set(self.blocks[c])
                if union & b:
                    raise ValueError(f"children of {v!r} have overlapping blocks")
                union |= b
            if union != set(self.blocks[v]):
                raise ValueError(f"block of {v!r} is not the union of its children's blocks")
        object.__setattr__(self, "_level", level)
        object.__setattr__(self, "_children", children)

    @property
    def ground(self) -> frozenset:
        return frozenset(self.blocks[self.root])

    def level(self, v) -> int:
        return self._level[v]

    def children(self, v) -> list:
        return list(self._children[v])

    def is_leaf(self, v) -> bool:
        return not self._children[v]

    def vertices(self, level: int | None = None) -> list:
        vs = sorted(self._level, key=repr)
        if level is None:
            return vs
        return [v for v in vs if self._level[v] == level]

    @property
    def depth(self) -> int:
        return max(self._level.values())

    def leaf_of(self, x):
        """The unique leaf whose block contains ``x``."""
        v = self.root
        while not self.is_leaf(v):
            v = next(c for c in self._children[v] if x in self.blocks[c])
        return v

    def stage(self, k: int) -> list:
        """The set ``X_k``: children of non-leaf level-k vertices, plus the
        elements of level-k leaf blocks, tagged ``("v", t)`` / ``("x", x)``."""
        out = []
        for t in self.vertices(k):
            if self.is_leaf(t):
                out.extend(("x", x) for x in sorted(self.blocks[t], key=repr))
            else:
                out.extend(("v", c) for c in sorted(self._children[t], key=repr))
        return out

    def rho(self, k: int, item):
        """``rho_k: X_{k+1} -> X_k``."""
        tag, obj = item
        if tag == "v":
            return ("v", self.parent[obj])
        return ("v", self.leaf_of(obj))


def standard_nested_partition(ptype: PartitionType) -> NestedPartition:
    """``I(n~)`` as a generic nested partition: vertices are prefix points."""
    leaves = ptype.points(ptype.depth)
    parent, blocks = {}, {}
    for j in range(ptype.depth + 1):
        for v in ptype.points(j):
            if j:
                parent[v] = v[:-1]
            blocks[v] = frozenset(p for p in leaves if p[:j] == v)
    return NestedPartition((), parent, blocks)


def respects_map(f, qs: NestedPartition, pt: NestedPartition) -> bool:
    """Whether every block of ``qs`` lands inside a same-level block of ``pt``."""
    return _block_images(f, qs, pt) is not None


def _block_images(f, qs, pt):
    f = f.__getitem__ if isinstance(f, Mapping) else f
    image = {}
    for s in qs.vertices():
        lvl = qs.level(s)
        fs = {f(x) for x in qs.blocks[s]}
        hit = [t for t in pt.vertices(lvl) if fs <= pt.blocks[t]]
        if not hit:
            return None
        image[s] = hit[0]
    return image


def induced_maps(f, qs: NestedPartition, pt: NestedPartition) -> dict[int, dict]:
    """The maps ``f_k: X_k -> Y_k`` induced by a respecting map.

    Raises ``ValueError`` if ``f`` does not respect the partitions or if an
    element image falls outside ``Y_k`` (possible only for unequal leaf depths).
    """
    image = _block_images(f, qs, pt)
    if image is None:
        raise ValueError("map does not respect the nested partitions")
    fx = f.__getitem__ if isinstance(f, Mapping) else f
    out = {}
    for k in range(qs.depth + 1):
        targets = set(pt.stage(k))
        fk = {}
        for item in qs.stage(k):
            tag, obj = item
            img = ("v", image[obj]) if tag == "v" else ("x", fx(obj))
            if img not in targets:
                raise ValueError(f"induced map at stage {k} sends {item!r} outside Y_{k}")
            fk[item] = img
        out[k] = fk
    return out


def verify_induced_commuting(f, qs: NestedPartition, pt: NestedPartition) -> bool:
    """Check the squares ``rho_k o f_{k+1} == f_k o rho_k``."""
    maps = induced_maps(f, qs, pt)
    for k in range(qs.depth):
        for item, img in maps[k + 1].items():
            if maps[k][qs.rho(k, item)] != pt.rho(k, img):
                return False
    return True


def leaf_map_of(f: Endomorphism) -> dict[Point, Point]:
    return f.level_map(f.ptype.depth)


def count_respecting_leaf_maps(ptype: PartitionType, bound: int = 10**6) -> int:
    """Brute-force count of leaf self-maps that respect the partition."""
    nleaves = ptype.sizes[-1]
    if nleaves ** nleaves > bound:
        raise SizeBoundError(f"{nleaves ** nleaves} leaf maps exceed bound {bound}")
    return sum(
        1
        for m in itertools.product(range(nleaves), repeat=nleaves)
        if not isinstance(from_leaf_map(ptype, m), Rejection)
    )


def as_type(obj: PartitionType | Iterable[int]) -> PartitionType:
    return obj if isinstance(obj, PartitionType) else PartitionType(tuple(obj))
