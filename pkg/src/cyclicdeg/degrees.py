"""Permutability of subgroups and the four commutativity degrees.

All degrees are exact ``Fraction`` values. Pair counts run over ordered
pairs; permutability between every pair of cyclic subgroups (and, for ``sd``,
every pair of subgroups) is computed once per group and stored as rows of
bit masks, so a relative degree is a sum of row popcounts.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .groups import GroupTable
from .lattice import (
    Subgroup,
    all_subgroups,
    cyclic_subgroups,
    whole_group,
)

__all__ = [
    "Degree",
    "permutes",
    "product_set",
    "csd_relative",
    "csd",
    "csd_of_subgroup",
    "sd_relative",
    "sd",
    "c1_set",
    "literal_pair_count",
]

Degree = Fraction


def product_set(G: GroupTable, H: Subgroup, K: Subgroup) -> frozenset[int]:
    """The element set ``HK``."""
    rows = G.rows
    ks = K.elements
    return frozenset(row[k] for h in H.elements for row in (rows[h],) for k in ks)


def permutes(G: GroupTable, H: Subgroup, K: Subgroup) -> bool:
    """True iff ``HK == KH`` as element sets (literal comparison)."""
    return product_set(G, H, K) == product_set(G, K, H)


def _permutes_quick(G: GroupTable, H: Subgroup, K: Subgroup, h_normal: bool, k_normal: bool) -> bool:
    if h_normal or k_normal:
        return True
    if H.mask & K.mask in (H.mask, K.mask):
        return True
    return permutes(G, H, K)


@lru_cache(maxsize=256)
def _cyclic_rows(G: GroupTable) -> tuple[int, ...]:
    """Row i has bit j set iff the i-th and j-th cyclic subgroups permute."""
    P = cyclic_subgroups(G)
    subs, normal = P.subgroups, P.normal
    rows = []
    for i, H in enumerate(subs):
        r = 0
        for j, K in enumerate(subs):
            if _permutes_quick(G, H, K, normal[i], normal[j]):
                r |= 1 << j
        rows.append(r)
    return tuple(rows)


@lru_cache(maxsize=128)
def _lattice_rows(G: GroupTable) -> tuple[int, ...]:
    """Same as ``_cyclic_rows`` over the full lattice.

    Uses ``HK = KH  <=>  |H||K| = |H n K| |<H, K>|`` with the join read off
    the lattice, which avoids forming product sets of large subgroups.
    """
    L = all_subgroups(G)
    subs, normal = L.subgroups, L.normal
    rows = []
    for i, H in enumerate(subs):
        r = 0
        for j, K in enumerate(subs):
            if normal[i] or normal[j] or H.mask & K.mask in (H.mask, K.mask):
                ok = True
            else:
                meet = (H.mask & K.mask).bit_count()
                ok = H.order * K.order == meet * L.join(H, K).order
            if ok:
                r |= 1 << j
        rows.append(r)
    return tuple(rows)


def _inside(subs, H: Subgroup) -> list[int]:
    return [i for i, s in enumerate(subs) if s.mask & H.mask == s.mask]


def csd_relative(G: GroupTable, H: Subgroup) -> Degree:
    """``csd(H, G)``: permuting pairs in ``L_1(H) x L_1(G)`` over their count."""
    P = cyclic_subgroups(G)
    rows = _cyclic_rows(G)
    inside = _inside(P.subgroups, H)
    hits = sum(rows[i].bit_count() for i in inside)
    return Fraction(hits, len(inside) * len(P))


def csd(G: GroupTable) -> Degree:
    return csd_relative(G, whole_group(G))


def csd_of_subgroup(G: GroupTable, H: Subgroup) -> Degree:
    """``csd(H)`` computed inside the ambient table of ``G``.

    Cyclic subgroups of ``H`` and their product sets do not depend on the
    ambient group, so no separate table for ``H`` is needed.
    """
    P = cyclic_subgroups(G)
    rows = _cyclic_rows(G)
    inside = _inside(P.subgroups, H)
    inside_mask = 0
    for i in inside:
        inside_mask |= 1 << i
    hits = sum((rows[i] & inside_mask).bit_count() for i in inside)
    return Fraction(hits, len(inside) ** 2)


def sd_relative(G: GroupTable, H: Subgroup) -> Degree:
    """``sd(H, G)`` over ``L(H) x L(G)``; needs the full lattice."""
    L = all_subgroups(G)
    rows = _lattice_rows(G)
    inside = _inside(L.subgroups, H)
    hits = sum(rows[i].bit_count() for i in inside)
    return Fraction(hits, len(inside) * len(L))


def sd(G: GroupTable) -> Degree:
    return sd_relative(G, whole_group(G))


def c1_set(G: GroupTable, H1: Subgroup) -> list[Subgroup]:
    """Cyclic subgroups of ``G`` permuting with the cyclic subgroup ``H1``."""
    P = cyclic_subgroups(G)
    i = P.index[H1.mask]
    row = _cyclic_rows(G)[i]
    return [K for j, K in enumerate(P.subgroups) if row >> j & 1]


def literal_pair_count(G: GroupTable, left, right) -> int:
    """Ordered pairs ``(A, B)`` in ``left x right`` with ``AB = BA``.

    Uses the literal product-set test only; kept as an independent oracle for
    the cached permutability rows.
    """
    return sum(1 for A in left for B in right if permutes(G, A, B))
