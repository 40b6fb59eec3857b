"""Finite groups as multiplication tables.

Every group is stored as an ``order x order`` table of element indices. The
families used throughout the package (cyclic, dihedral, generalized
quaternion, quasidihedral, modular, metacyclic semidirect products, ``A_4``
and direct products) are first written structurally, as pairs or
permutations, and then flattened into a table. Downstream code only ever sees
indices.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Hashable, Sequence

import numpy as np

from .config import OrderBoundError, settings

__all__ = [
    "GroupTable",
    "GroupConstructionError",
    "build_cyclic",
    "build_dihedral",
    "build_generalized_quaternion",
    "build_quasidihedral",
    "build_semidirect_cyclic",
    "build_modular",
    "build_direct_product",
    "build_alternating4",
    "element_order",
    "order_multiset",
    "validate_table",
    "is_prime_small",
    "multiplicative_order",
]


class GroupConstructionError(ValueError):
    """Invalid family parameters."""


@dataclass(frozen=True, eq=False)
class GroupTable:
    """Immutable multiplication table.

    ``mul[i, j]`` is the index of the product ``i * j``. Equality and hashing
    are by identity, so tables can key caches cheaply.
    """

    mul: np.ndarray
    identity: int
    inv: tuple[int, ...]
    spec: str
    generators: tuple[int, ...]
    labels: tuple[Hashable, ...] = field(default=(), repr=False)

    @property
    def order(self) -> int:
        return int(self.mul.shape[0])

    @cached_property
    def rows(self) -> list[list[int]]:
        # list-of-lists indexing is much faster than numpy scalar access
        return self.mul.tolist()

    @cached_property
    def _label_index(self) -> dict[Hashable, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    def element(self, label: Hashable) -> int:
        """Index of the element with the given structural label."""
        return self._label_index[label]

    def label(self, g: int) -> Any:
        return self.labels[g] if self.labels else g

    def product(self, *elements: int) -> int:
        out = self.identity
        rows = self.rows
        for g in elements:
            out = rows[out][g]
        return out

    def power(self, g: int, e: int) -> int:
        if e < 0:
            g, e = self.inv[g], -e
        out = self.identity
        row_g = g
        rows = self.rows
        while e:
            if e & 1:
                out = rows[out][row_g]
            row_g = rows[row_g][row_g]
            e >>= 1
        return out

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def __repr__(self) -> str:
        return f"GroupTable({self.spec!r}, order={self.order})"


def _check_order(order: int) -> None:
    if order > settings.max_order:
        raise OrderBoundError(
            f"group order {order} exceeds the construction bound {settings.max_order}"
        )


def _finish(
    table: np.ndarray,
    spec: str,
    generators: Sequence[int],
    labels: Sequence[Hashable],
    validate: bool = True,
) -> GroupTable:
    table = np.ascontiguousarray(table, dtype=np.int64)
    table.setflags(write=False)
    n = table.shape[0]
    ident = np.flatnonzero((table == np.arange(n)).all(axis=1))
    if len(ident) != 1:
        raise GroupConstructionError(f"{spec}: no unique left identity")
    e = int(ident[0])
    inv = tuple(int(x) for x in np.argmax(table == e, axis=1))
    G = GroupTable(table, e, inv, spec, tuple(int(g) for g in generators), tuple(labels))
    if validate:
        validate_table(G)
    return G


def validate_table(G: GroupTable, sample: int = 20000, seed: int = 0) -> None:
    """Raise ``GroupConstructionError`` unless ``G`` is a group table.

    Associativity is checked exhaustively up to
    ``settings.exhaustive_check_order`` and on random triples beyond it.
    """
    M = G.mul
    n = G.order
    if M.shape != (n, n) or M.min() < 0 or M.max() >= n:
        raise GroupConstructionError(f"{G.spec}: table entries out of range")
    ar = np.arange(n)
    e = G.identity
    if not (np.array_equal(M[e], ar) and np.array_equal(M[:, e], ar)):
        raise GroupConstructionError(f"{G.spec}: identity is not two-sided")
    inv = np.asarray(G.inv)
    if not ((M[ar, inv] == e).all() and (M[inv, ar] == e).all()):
        raise GroupConstructionError(f"{G.spec}: inverse table is not two-sided")
    if n <= settings.exhaustive_check_order:
        for a in range(n):
            # (a*b)*c == a*(b*c) for every b, c
            if not np.array_equal(M[M[a]], M[a][M]):
                raise GroupConstructionError(f"{G.spec}: table is not associative")
    else:
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, n, size=(3, sample))
        if not np.array_equal(M[M[a, b], c], M[a, M[b, c]]):
            raise GroupConstructionError(f"{G.spec}: table is not associative")
    seen = {e}
    frontier = [e]
    rows = G.rows
    while frontier:
        nxt = []
        for x in frontier:
            for g in G.generators:
                y = rows[x][g]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    if len(seen) != n:
        raise GroupConstructionError(f"{G.spec}: generators span only {len(seen)} of {n} elements")


def is_prime_small(n: int) -> bool:
    """Trial division; used for parameter validation only."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


def multiplicative_order(k: int, m: int) -> int:
    """Order of ``k`` in the unit group modulo ``m`` (1 when m == 1)."""
    if m == 1:
        return 1
    if math.gcd(k, m) != 1:
        raise ValueError(f"{k} is not a unit modulo {m}")
    t, x = 1, k % m
    while x != 1:
        x = x * k % m
        t += 1
    return t


def _power_of_two_exponent(order: int) -> int | None:
    if order < 1 or order & (order - 1):
        return None
    return order.bit_length() - 1


def build_cyclic(m: int, validate: bool = True) -> GroupTable:
    if m < 1:
        raise GroupConstructionError(f"cyclic group order must be >= 1, got {m}")
    _check_order(m)
    ar = np.arange(m)
    table = (ar[:, None] + ar[None, :]) % m
    return _finish(table, f"Z{m}", [1 % m] if m > 1 else [0], list(range(m)), validate)


def semidirect_violation(m: int, n: int, k: int) -> str | None:
    """Describe why ``Z_m x| Z_n`` with action ``k`` is invalid, else None."""
    if m < 1 or n < 1:
        return f"m and n must be positive (got m={m}, n={n})"
    if k < 1:
        return f"k must be positive (got k={k})"
    if math.gcd(k, m) != 1:
        return f"gcd(k, m) = gcd({k}, {m}) = {math.gcd(k, m)} != 1"
    r = pow(k, n, m) if m > 1 else 0
    if m > 1 and r != 1:
        return f"k^n = {k}^{n} = {r} (mod {m}), not 1"
    return None


def _semidirect_table(m: int, n: int, k: int) -> np.ndarray:
    N = m * n
    idx = np.arange(N)
    a, b = idx // n, idx % n
    kpow = np.array([pow(k, e, m) if m > 1 else 0 for e in range(n)], dtype=np.int64)
    a2 = (a[:, None] + a[None, :] * kpow[b][:, None]) % m
    b2 = (b[:, None] + b[None, :]) % n
    return a2 * n + b2


def _semidirect(m: int, n: int, k: int, spec: str, validate: bool) -> GroupTable:
    _check_order(m * n)
    labels = [(a, b) for a in range(m) for b in range(n)]
    gens = [1 % m * n, 1 % n]  # x = (1, 0), y = (0, 1)
    return _finish(_semidirect_table(m, n, k), spec, gens, labels, validate)


def build_semidirect_cyclic(m: int, n: int, k: int, validate: bool = True) -> GroupTable:
    """``Z_m x| Z_n`` on pairs ``(a, b)``, with ``y x y^-1 = x^k``.

    Product rule: ``(a, b)(a', b') = (a + a' k^b mod m, b + b' mod n)``.
    """
    problem = semidirect_violation(m, n, k)
    if problem:
        raise GroupConstructionError(f"Zsd({m},{n},{k}): {problem}")
    return _semidirect(m, n, k, f"Zsd({m},{n},{k})", validate)


def build_dihedral(order: int, validate: bool = True) -> GroupTable:
    """Dihedral group of the given ORDER (rotation subgroup of order/2)."""
    if order < 4 or order % 2:
        raise GroupConstructionError(f"dihedral order must be even and >= 4, got {order}")
    m = order // 2
    return _semidirect(m, 2, m - 1, f"D{order}", validate)


def build_generalized_quaternion(order: int, validate: bool = True) -> GroupTable:
    """Dicyclic group of order ``2^n``, ``n >= 3``.

    Elements are ``x^a y^b`` with ``a < 2^(n-1)``, ``y^2 = x^(2^(n-2))`` and
    ``y^-1 x y = x^-1``.
    """
    t = _power_of_two_exponent(order)
    if t is None or t < 3:
        raise GroupConstructionError(f"quaternion order must be 2^t with t >= 3, got {order}")
    _check_order(order)
    m = order // 2
    idx = np.arange(order)
    a, b = idx // 2, idx % 2
    ai, bi = a[:, None], b[:, None]
    aj, bj = a[None, :], b[None, :]
    a2 = np.where(bi == 0, ai + aj, np.where(bj == 0, ai - aj, ai - aj + m // 2)) % m
    b2 = (bi + bj) % 2
    labels = [(x, y) for x in range(m) for y in range(2)]
    return _finish(a2 * 2 + b2, f"Q{order}", [2, 1], labels, validate)


def build_quasidihedral(order: int, validate: bool = True) -> GroupTable:
    t = _power_of_two_exponent(order)
    if t is None or t < 4:
        raise GroupConstructionError(
            f"quasidihedral order must be 2^t with t >= 4, got {order}"
        )
    m = order // 2
    return _semidirect(m, 2, m // 2 - 1, f"SD{order}", validate)


def modular_violation(p: int, n: int) -> str | None:
    if not is_prime_small(p):
        return f"p = {p} is not prime"
    if p >= 3 and n < 3:
        return f"M(p^n) needs n >= 3 when p >= 3 (got n={n})"
    if p == 2 and n < 4:
        return f"M(2^n) needs n >= 4 (got n={n})"
    return None


def build_modular(p: int, n: int, validate: bool = True) -> GroupTable:
    """``M(p^n)``: ``x^(p^(n-1)) = y^p = 1``, ``y^-1 x y = x^(1 + p^(n-2))``.

    Stored with the mirror convention ``y x y^-1 = x^k``, so ``k`` is the
    inverse of ``1 + p^(n-2)`` modulo ``p^(n-1)``.
    """
    problem = modular_violation(p, n)
    if problem:
        raise GroupConstructionError(f"M({p},{n}): {problem}")
    m = p ** (n - 1)
    k = pow(1 + p ** (n - 2), -1, m)
    return _semidirect(m, p, k, f"M({p},{n})", validate)


def build_direct_product(G: GroupTable, H: GroupTable, validate: bool = True) -> GroupTable:
    """Componentwise product; element ``(g, h)`` has index ``g * |H| + h``."""
    nG, nH = G.order, H.order
    _check_order(nG * nH)
    idx = np.arange(nG * nH)
    i1, i2 = idx // nH, idx % nH
    table = G.mul[np.ix_(i1, i1)] * nH + H.mul[np.ix_(i2, i2)]
    gens = [g * nH + H.identity for g in G.generators]
    gens += [G.identity * nH + h for h in H.generators]
    labels = [(G.label(g), H.label(h)) for g in range(nG) for h in range(nH)]
    return _finish(table, f"{G.spec} x {H.spec}", gens, labels, validate)


def build_alternating4(validate: bool = True) -> GroupTable:
    perms = [p for p in itertools.permutations(range(4)) if _parity(p) == 0]
    index = {p: i for i, p in enumerate(perms)}
    # (p q)(i) = p(q(i))
    table = np.array([[index[tuple(p[q[i]] for i in range(4))] for q in perms] for p in perms])
    gens = [index[(1, 2, 0, 3)], index[(1, 0, 3, 2)]]
    return _finish(table, "A4", gens, perms, validate)


def _parity(p: Sequence[int]) -> int:
    return sum(1 for i, j in itertools.combinations(range(len(p)), 2) if p[i] > p[j]) % 2


def element_order(G: GroupTable, g: int) -> int:
    rows = G.rows
    t, x = 1, g
    while x != G.identity:
        x = rows[x][g]
        t += 1
    return t


def order_multiset(G: GroupTable) -> Counter:
    """Counter mapping element order to the number of elements of that order."""
    return Counter(element_order(G, g) for g in range(G.order))

