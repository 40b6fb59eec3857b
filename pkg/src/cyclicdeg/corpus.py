"""The built-in corpus of group specs used by scans and property suites."""

from __future__ import annotations

import math
import random

from .groups import is_prime_small

__all__ = ["builtin_corpus", "semidirect_specs", "random_coprime_products", "family_specs"]

_NONABELIAN_SMALL = ("S3", "D8", "Q8", "Zsd(7,3,2)", "A4", "Zsd(5,4,2)", "D10", "Q16")


def _unit_subgroup(k: int, m: int) -> frozenset[int]:
    out, x = {1 % m}, k % m
    while x not in out:
        out.add(x)
        x = x * k % m
    return frozenset(out)


def semidirect_specs(max_order: int) -> list[str]:
    """Non-abelian ``Zsd(m,n,k)`` up to ``max_order``, one ``k`` per cyclic subgroup ``<k>``.

    Two actions generating the same subgroup of units give isomorphic groups,
    so the smallest ``k`` of each such subgroup is kept.
    """
    out = []
    for m in range(3, max_order // 2 + 1):
        for n in range(2, max_order // m + 1):
            seen: set[frozenset[int]] = set()
            for k in range(2, m):
                if math.gcd(k, m) != 1 or pow(k, n, m) != 1:
                    continue
                sub = _unit_subgroup(k, m)
                if sub not in seen:
                    seen.add(sub)
                    out.append(f"Zsd({m},{n},{k})")
    return out


def family_specs(max_order: int) -> list[str]:
    """Single-atom specs of every family up to ``max_order``."""
    specs = [f"Z{m}" for m in range(1, min(max_order, 32) + 1)]
    specs += [f"D{o}" for o in range(6, max_order + 1, 2)]
    t = 8
    while t <= max_order:
        specs.append(f"Q{t}")
        if t >= 16:
            specs.append(f"SD{t}")
        t *= 2
    for p in range(2, max_order + 1):
        if not is_prime_small(p):
            continue
        n = 4 if p == 2 else 3
        while p ** n <= max_order:
            specs.append(f"M({p},{n})")
            n += 1
    if max_order >= 12:
        specs.append("A4")
    specs += semidirect_specs(max_order)
    return specs


def builtin_corpus(max_order: int) -> list[str]:
    """Families plus small products, deduplicated and in a fixed order."""
    specs = family_specs(max_order)
    orders = {"S3": 6, "D8": 8, "Q8": 8, "Zsd(7,3,2)": 21, "A4": 12,
              "Zsd(5,4,2)": 20, "D10": 10, "Q16": 16}
    for a in ("Z2 x Z2", "Z2 x Z4", "Z2 x Z2 x Z2", "Z3 x Z3"):
        if math.prod(int(x[1:]) for x in a.split(" x ")) <= max_order:
            specs.append(a)
    for g in _NONABELIAN_SMALL:
        for m in (2, 3, 5):
            if orders[g] * m <= max_order:
                specs.append(f"{g} x Z{m}")
        for h in _NONABELIAN_SMALL:
            if g <= h and orders[g] * orders[h] <= max_order:
                specs.append(f"{g} x {h}")
    seen: set[str] = set()
    out = []
    for s in specs:
        if s not in seen:
            seen.add(s)
            out.append(s)
    return out


def random_coprime_products(count: int, seed: int = 0, max_order: int = 128) -> list[tuple[str, str]]:
    """Up to ``count`` pairs ``(non-abelian, any)`` with coprime orders and product order within ``max_order``."""
    nonabelian = [
        ("S3", 6), ("D10", 10), ("D14", 14), ("Q8", 8), ("D8", 8), ("Q16", 16), ("D16", 16),
        ("SD16", 16), ("Zsd(7,3,2)", 21), ("Zsd(9,2,8)", 18), ("Zsd(5,4,2)", 20), ("A4", 12),
        ("M(3,3)", 27), ("M(2,4)", 16), ("Zsd(13,3,3)", 39),
    ]
    cyclic = [(f"Z{m}", m) for m in (2, 3, 4, 5, 7, 9, 11)]
    pool = nonabelian + cyclic
    candidates = [
        (a, b) for a, oa in nonabelian for b, ob in pool
        if math.gcd(oa, ob) == 1 and oa * ob <= max_order
    ]
    # at most ``count`` pairs; fewer when the bound admits fewer
    random.Random(seed).shuffle(candidates)
    return candidates[:count]
