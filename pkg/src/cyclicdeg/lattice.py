"""Cyclic subgroups, the full subgroup lattice, normality and conjugacy.

Subgroups are stored as Python-int bit masks indexed by element id, so set
equality, intersection and containment are single integer operations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence, TypeVar, Union

from .config import OrderBoundError, settings
from .groups import GroupTable

__all__ = [
    "Subgroup",
    "CyclicPoset",
    "SubgroupLattice",
    "generated_subgroup",
    "cyclic_subgroups",
    "all_subgroups",
    "is_normal",
    "conjugacy_classes",
    "conjugate_mask",
    "gamma",
    "subgroups_within",
    "normal_cyclic_count",
    "mask_of",
    "elements_of",
]


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for g in elements:
        m |= 1 << g
    return m


def elements_of(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


@dataclass(frozen=True, eq=False)
class Subgroup:
    mask: int
    order: int
    generators: tuple[int, ...]
    cyclic_witness: int | None = None

    @cached_property
    def elements(self) -> tuple[int, ...]:
        return elements_of(self.mask)

    @property
    def members(self) -> frozenset[int]:
        return frozenset(self.elements)

    @property
    def is_cyclic(self) -> bool:
        return self.cyclic_witness is not None

    def __contains__(self, g: int) -> bool:
        return bool(self.mask >> g & 1)

    def __len__(self) -> int:
        return self.order

    def issubset(self, other: "Subgroup") -> bool:
        return self.mask & other.mask == self.mask

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Subgroup) and other.mask == self.mask

    def __hash__(self) -> int:
        return hash(self.mask)

    def __repr__(self) -> str:
        tag = f", cyclic <{self.cyclic_witness}>" if self.is_cyclic else ""
        return f"Subgroup(order={self.order}{tag})"


def _closure(G: GroupTable, generators: Sequence[int], start: Iterable[int] = ()) -> list[int]:
    """Elements of the subgroup generated by ``generators``.

    ``start`` may list elements already known to lie in the result; it is
    only a speed-up.
    """
    rows = G.rows
    seen = set(start)
    seen.add(G.identity)
    queue = list(seen)
    i = 0
    while i < len(queue):
        row = rows[queue[i]]
        i += 1
        for g in generators:
            y = row[g]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return queue


def generated_subgroup(G: GroupTable, seeds: Iterable[int]) -> Subgroup:
    """Smallest subgroup of ``G`` containing ``seeds``."""
    gens = tuple(sorted({g for g in seeds if g != G.identity}))
    elems = _closure(G, gens)
    witness = None
    if not gens:
        witness = G.identity
    elif len(gens) == 1:
        witness = gens[0]
    return Subgroup(mask_of(elems), len(elems), gens, witness)


@dataclass(frozen=True)
class CyclicPoset:
    """``L_1(G)``: the distinct cyclic subgroups, sorted by (order, mask)."""

    subgroups: tuple[Subgroup, ...]
    normal: tuple[bool, ...]

    def __len__(self) -> int:
        return len(self.subgroups)

    def __iter__(self):
        return iter(self.subgroups)

    def __getitem__(self, i: int) -> Subgroup:
        return self.subgroups[i]

    @cached_property
    def index(self) -> dict[int, int]:
        return {s.mask: i for i, s in enumerate(self.subgroups)}


@dataclass(frozen=True)
class SubgroupLattice:
    """``L(G)`` with normality flags and the conjugacy-class partition.

    ``class_of[i]`` is the class id of ``subgroups[i]``; class ids follow the
    position of each class's first member.
    """

    subgroups: tuple[Subgroup, ...]
    normal: tuple[bool, ...]
    class_of: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.subgroups)

    def __iter__(self):
        return iter(self.subgroups)

    def __getitem__(self, i: int) -> Subgroup:
        return self.subgroups[i]

    @cached_property
    def index(self) -> dict[int, int]:
        return {s.mask: i for i, s in enumerate(self.subgroups)}

    @cached_property
    def classes(self) -> tuple[tuple[int, ...], ...]:
        buckets: dict[int, list[int]] = {}
        for i, c in enumerate(self.class_of):
            buckets.setdefault(c, []).append(i)
        return tuple(tuple(buckets[c]) for c in sorted(buckets))

    def join(self, a: Subgroup, b: Subgroup) -> Subgroup:
        """Subgroup generated by ``a`` and ``b``, looked up in the lattice."""
        u = a.mask | b.mask
        for s in self.subgroups:  # sorted by order: first hit is the join
            if s.mask & u == u:
                return s
        raise AssertionError("lattice does not contain the whole group")


@lru_cache(maxsize=256)
def _conjugation_maps(G: GroupTable) -> tuple[tuple[int, ...], ...]:
    """For each generator g, the permutation h -> g h g^-1."""
    rows = G.rows
    maps = []
    for g in G.generators:
        gi = G.inv[g]
        row_g = rows[g]
        maps.append(tuple(rows[row_g[h]][gi] for h in range(G.order)))
    return tuple(maps)


def _apply(perm: Sequence[int], mask: int) -> int:
    out = 0
    while mask:
        low = mask & -mask
        out |= 1 << perm[low.bit_length() - 1]
        mask ^= low
    return out


def conjugate_mask(G: GroupTable, mask: int, g: int) -> int:
    """Mask of ``g H g^-1`` for an arbitrary element ``g``."""
    rows = G.rows
    gi = G.inv[g]
    perm = [rows[rows[g][h]][gi] for h in range(G.order)]
    return _apply(perm, mask)


def _normal_mask(G: GroupTable, mask: int) -> bool:
    return all(_apply(perm, mask) == mask for perm in _conjugation_maps(G))


def is_normal(G: GroupTable, H: Subgroup) -> bool:
    """True iff ``g H g^-1 = H`` for every generator ``g`` of ``G``."""
    return _normal_mask(G, H.mask)


@lru_cache(maxsize=256)
def cyclic_subgroups(G: GroupTable) -> CyclicPoset:
    rows = G.rows
    found: dict[int, Subgroup] = {}
    done = [False] * G.order
    for g in range(G.order):
        if done[g]:
            continue
        powers = [G.identity]
        x = g
        while x != G.identity:
            powers.append(x)
            x = rows[x][g]
        m = len(powers)
        # every generator g^j with gcd(j, m) = 1 spans the same subgroup
        for j in range(1, m + 1):
            if math.gcd(j, m) == 1:
                done[powers[j % m]] = True
        mask = mask_of(powers)
        if mask not in found:
            gens = (g,) if g != G.identity else ()
            found[mask] = Subgroup(mask, m, gens, g)
    subs = tuple(sorted(found.values(), key=lambda s: (s.order, s.mask)))
    return CyclicPoset(subs, tuple(_normal_mask(G, s.mask) for s in subs))


def _orbit(G: GroupTable, mask: int) -> set[int]:
    maps = _conjugation_maps(G)
    orbit = {mask}
    frontier = [mask]
    while frontier:
        nxt = []
        for m in frontier:
            for perm in maps:
                c = _apply(perm, m)
                if c not in orbit:
                    orbit.add(c)
                    nxt.append(c)
        frontier = nxt
    return orbit


def all_subgroups(G: GroupTable) -> SubgroupLattice:
    """Complete subgroup lattice by join closure.

    Seeds are the cyclic subgroups; every known subgroup ``A`` is joined with
    every cyclic subgroup not inside it until no new subgroup appears.
    """
    # checked outside the cache so a lowered bound applies to known groups too
    if G.order > settings.lattice_max_order:
        raise OrderBoundError(
            f"full lattice of order {G.order} exceeds the bound {settings.lattice_max_order}"
        )
    return _all_subgroups(G)


@lru_cache(maxsize=128)
def _all_subgroups(G: GroupTable) -> SubgroupLattice:
    poset = cyclic_subgroups(G)
    known: dict[int, Subgroup] = {s.mask: s for s in poset}
    # cyclic witnesses as single generators of the seeds
    seeds = [(s.mask, s.cyclic_witness) for s in poset if s.order > 1]
    members: dict[int, list[int]] = {s.mask: list(s.elements) for s in poset}
    frontier = list(known.values())
    while frontier:
        nxt = []
        for A in frontier:
            start = members[A.mask]
            for cmask, c in seeds:
                if cmask & A.mask == cmask:
                    continue
                elems = _closure(G, A.generators + (c,), start)
                mask = mask_of(elems)
                if mask not in known:
                    S = Subgroup(mask, len(elems), A.generators + (c,))
                    known[mask] = S
                    members[mask] = elems
                    nxt.append(S)
        frontier = nxt
    subs = tuple(sorted(known.values(), key=lambda s: (s.order, s.mask)))
    normal = tuple(_normal_mask(G, s.mask) for s in subs)
    index = {s.mask: i for i, s in enumerate(subs)}
    class_of = [-1] * len(subs)
    next_id = 0
    for i, s in enumerate(subs):
        if class_of[i] >= 0:
            continue
        if normal[i]:
            class_of[i] = next_id
        else:
            for m in _orbit(G, s.mask):
                class_of[index[m]] = next_id
        next_id += 1
    return SubgroupLattice(subs, normal, tuple(class_of))


def conjugacy_classes(G: GroupTable, subs: Sequence[Subgroup]) -> list[list[Subgroup]]:
    """Partition ``subs`` by conjugacy in ``G``.

    Blocks are listed in order of first appearance in ``subs``.
    """
    blocks: list[list[Subgroup]] = []
    key_of: dict[int, int] = {}
    for s in subs:
        if s.mask in key_of:
            blocks[key_of[s.mask]].append(s)
            continue
        orbit = _orbit(G, s.mask)
        b = len(blocks)
        blocks.append([s])
        for m in orbit:
            key_of.setdefault(m, b)
    return blocks


def gamma(G: GroupTable) -> int:
    """Number of conjugacy classes of non-normal subgroups."""
    L = all_subgroups(G)
    return len({c for c, n in zip(L.class_of, L.normal) if not n})


Collection = TypeVar("Collection", CyclicPoset, SubgroupLattice)


def subgroups_within(L: Collection, H: Subgroup) -> Collection:
    """Entries of ``L`` contained in ``H``; flags and class ids stay relative to G."""
    keep = [i for i, s in enumerate(L.subgroups) if s.mask & H.mask == s.mask]
    subs = tuple(L.subgroups[i] for i in keep)
    normal = tuple(L.normal[i] for i in keep)
    if isinstance(L, CyclicPoset):
        return CyclicPoset(subs, normal)
    return SubgroupLattice(subs, normal, tuple(L.class_of[i] for i in keep))


def normal_cyclic_count(G: GroupTable) -> int:
    """``|N(G) n L_1(G)|``."""
    return sum(cyclic_subgroups(G).normal)


def whole_group(G: GroupTable) -> Subgroup:
    mask = (1 << G.order) - 1
    poset = cyclic_subgroups(G)
    if mask in poset.index:
        return poset[poset.index[mask]]
    return Subgroup(mask, G.order, G.generators)


def as_lattice_member(G: GroupTable, H: Union[Subgroup, int]) -> Subgroup:
    """Canonical lattice entry for a subgroup or a mask."""
    mask = H.mask if isinstance(H, Subgroup) else H
    L = all_subgroups(G)
    return L.subgroups[L.index[mask]]
