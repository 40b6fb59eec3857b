"""Explicit witnesses showing relative cyclic degrees are dense in [0, 1].

For ``G = Z_p x| Z_{q^n}`` with ``q | p - 1`` the subgroup ``Z_{q^n}`` has
relative degree ``t(p) = (n(2n+p) + 2n + 1) / ((n+1)(2n+p))``. This value
decreases towards ``n/(n+1)`` as ``p`` grows. Coprime direct products
multiply degrees, and ``prod_{j=1}^{b-a} (a+j-1)/(a+j) = a/b``. A target
``a/b`` is therefore approached by picking ``b - a`` such factors with large
enough ``p``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .config import settings
from .degrees import csd_relative
from .formulas import csd_quaternion, g1_family_formulas
from .groups import GroupTable, build_direct_product, build_semidirect_cyclic
from .lattice import generated_subgroup

__all__ = [
    "DensityError",
    "HorizonExceeded",
    "ApproachTerm",
    "ApproachWitness",
    "is_prime",
    "next_prime_cong1",
    "limit_term",
    "term_value",
    "approach_rational",
    "quaternion_tail",
    "smallest_order_q_unit",
    "check_witness",
    "witness_from_terms",
    "oracle_product",
]

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class DensityError(ValueError):
    pass


class HorizonExceeded(DensityError):
    """A prime search ran past the configured horizon."""


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every ``n < 3.3 * 10**24``."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime_cong1(q: int, lo: int, exclude: frozenset[int] | set[int] = frozenset(),
                     horizon: int | None = None) -> int:
    """Smallest prime ``p >= lo`` with ``p = 1 (mod q)``, ``p != q`` and ``p`` not excluded."""
    if not is_prime(q):
        raise DensityError(f"q={q} is not prime")
    horizon = settings.prime_horizon if horizon is None else horizon
    lo = max(lo, 2)
    p = lo + (1 - lo) % q
    while p <= horizon:
        if p != q and p not in exclude and is_prime(p):
            return p
        p += q
    raise HorizonExceeded(f"no prime = 1 (mod {q}) in [{lo}, {horizon}]")


def term_value(q: int, n: int, p: int) -> Fraction:
    """``csd(Z_{q^n}, Z_p x| Z_{q^n})`` from the closed form."""
    return g1_family_formulas(p, q, n)["csd(Z_q^n,G1)"]


def _factor(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def smallest_order_q_unit(q: int, p: int) -> int:
    """Smallest ``k > 1`` of multiplicative order ``q`` modulo the prime ``p``."""
    if (p - 1) % q:
        raise DensityError(f"q={q} does not divide p-1={p - 1}")
    primes = _factor(p - 1)
    g = next(g for g in range(2, p)
             if all(pow(g, (p - 1) // r, p) != 1 for r in primes))
    step = (p - 1) // q
    return min(pow(g, step * i, p) for i in range(1, q) if math.gcd(i, q) == 1)


def _oracle_term(q: int, n: int, p: int) -> Fraction:
    G = build_semidirect_cyclic(p, q ** n, smallest_order_q_unit(q, p))
    return csd_relative(G, generated_subgroup(G, [G.element((0, 1))]))


def limit_term(q: int, n: int, p: int, audit: bool = True) -> tuple[Fraction, Fraction]:
    """``(term value, n/(n+1))``, with brute-force confirmation for small groups."""
    value = term_value(q, n, p)
    if audit and p * q ** n <= settings.oracle_max_order:
        truth = _oracle_term(q, n, p)
        if truth != value:
            raise AssertionError(f"term formula {value} != oracle {truth} at q={q}, n={n}, p={p}")
    return value, Fraction(n, n + 1)


@dataclass(frozen=True)
class ApproachTerm:
    q: int
    n: int
    p: int
    k: int
    value: Fraction
    limit: Fraction

    @property
    def spec(self) -> str:
        return f"Zsd({self.p},{self.q ** self.n},{self.k})"


@dataclass(frozen=True)
class ApproachWitness:
    """Degree of ``prod Z_{q^n}`` inside ``prod Zsd(p, q^n, k)``.

    With ``a = 0`` there are no terms; the witness is then ``Q_{2^n}`` inside
    itself with ``n = quaternion_n``.
    """

    target: Fraction
    tol: Fraction
    terms: tuple[ApproachTerm, ...]
    value: Fraction
    error: Fraction
    quaternion_n: int | None = None
    # the unreduced a of a/b; fixes the exponents n_j = a + j - 1
    base_exponent: int | None = None

    @property
    def specs(self) -> list[str]:
        if self.quaternion_n is not None:
            return [f"Q{2 ** self.quaternion_n}"]
        return [t.spec for t in self.terms]


def _primes_3_mod_4() -> Iterator[int]:
    q = 3
    while True:
        if is_prime(q):
            yield q
        q += 4


def _threshold(n: int, bound: Fraction, m: int) -> int:
    """Least ``p >= 2`` with ``(t(p) / (n/(n+1)))^m < bound``; ``t`` decreases in ``p``."""
    limit = Fraction(n, n + 1)

    def ok(p: int) -> bool:
        t = Fraction(n * (2 * n + p) + 2 * n + 1, (n + 1) * (2 * n + p))
        return (t / limit) ** m < bound

    hi = 2
    while not ok(hi):
        hi *= 2
    lo = hi // 2 if hi > 2 else 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def approach_rational(a: int, b: int, tol: Fraction) -> ApproachWitness:
    """A witness whose exact degree is within ``tol`` of ``a/b``.

    Term ``j`` uses the ``j``-th unused prime ``q = 3 (mod 4)``, exponent
    ``a + j - 1`` and the smallest unused prime ``p = 1 (mod q)`` whose term
    overshoots its limit by a factor below ``(1 + tol*b/a)^(1/(b-a))``. Every
    term exceeds its limit, so the product exceeds ``a/b`` by less than ``tol``.
    """
    tol = Fraction(tol)
    if b < 1 or not 0 <= a <= b:
        raise DensityError(f"need 0 <= a <= b and b >= 1 (got {a}/{b})")
    if tol <= 0:
        raise DensityError("tolerance must be positive")
    target = Fraction(a, b)
    if a == b:
        return ApproachWitness(target, tol, (), Fraction(1), Fraction(0))
    if a == 0:
        n = 4
        while csd_quaternion(n) >= tol:
            n += 1
            if 2 ** n > settings.prime_horizon:
                raise HorizonExceeded(f"quaternion tail does not reach {tol} below 2^{n}")
        v = csd_quaternion(n)
        return ApproachWitness(target, tol, (), v, v, quaternion_n=n)
    m = b - a
    bound = 1 + tol * b / a
    used: set[int] = set()
    qs = _primes_3_mod_4()
    terms = []
    for j in range(1, m + 1):
        q = next(x for x in qs if x not in used)
        used.add(q)
        n = a + j - 1
        p = next_prime_cong1(q, _threshold(n, bound, m), exclude=used)
        used.add(p)
        value, limit = limit_term(q, n, p, audit=False)
        terms.append(ApproachTerm(q, n, p, smallest_order_q_unit(q, p), value, limit))
    value = math.prod((t.value for t in terms), start=Fraction(1))
    w = ApproachWitness(target, tol, tuple(terms), value, abs(value - target), base_exponent=a)
    problems = check_witness(w)
    if problems:
        raise AssertionError("; ".join(problems))
    return w


def check_witness(w: ApproachWitness) -> list[str]:
    """Recheck every witness invariant from scratch; returns the violations."""
    problems = []
    if w.quaternion_n is not None:
        if csd_quaternion(w.quaternion_n) != w.value:
            problems.append("quaternion value does not match the closed form")
    else:
        seen: list[int] = []
        for j, t in enumerate(w.terms, start=1):
            if not (is_prime(t.q) and is_prime(t.p)):
                problems.append(f"term {j}: q={t.q} or p={t.p} not prime")
            congruent = (t.p - 1) % t.q == 0
            if not congruent:
                problems.append(f"term {j}: p={t.p} is not 1 mod q={t.q}")
            if w.base_exponent is not None and t.n != w.base_exponent + j - 1:
                problems.append(f"term {j}: exponent {t.n} is not a+j-1")
            if pow(t.k, t.q, t.p) != 1 or t.k % t.p == 1:
                problems.append(f"term {j}: k={t.k} does not have order q mod p")
            if congruent and is_prime(t.p) and is_prime(t.q) and term_value(t.q, t.n, t.p) != t.value:
                problems.append(f"term {j}: stored value differs from the closed form")
            seen += [t.q, t.p]
        if len(set(seen)) != len(seen):
            problems.append("primes are not pairwise distinct")
        product = math.prod((t.value for t in w.terms), start=Fraction(1))
        if product != w.value:
            problems.append("value is not the product of the term values")
    if abs(w.value - w.target) != w.error:
        problems.append("error is not |value - target|")
    if w.target != 1 and w.error >= w.tol:
        problems.append(f"error {w.error} is not below the tolerance {w.tol}")
    return problems


def witness_from_terms(triples: Sequence[tuple[int, int, int]], target: Fraction | None = None,
                       tol: Fraction = Fraction(1)) -> ApproachWitness:
    """Assemble a witness from explicit ``(q, n, p)`` triples."""
    terms = []
    for q, n, p in triples:
        value, limit = limit_term(q, n, p, audit=False)
        terms.append(ApproachTerm(q, n, p, smallest_order_q_unit(q, p), value, limit))
    value = math.prod((t.value for t in terms), start=Fraction(1))
    if target is None:
        target = math.prod((t.limit for t in terms), start=Fraction(1))
    return ApproachWitness(Fraction(target), Fraction(tol), tuple(terms), value, abs(value - target))


def _assemble(terms: Sequence[ApproachTerm]) -> tuple[GroupTable, int]:
    """Left-folded product of the term groups and the mask of ``prod Z_{q^n}``."""
    factors = [build_semidirect_cyclic(t.p, t.q ** t.n, t.k) for t in terms]
    G = factors[0]
    ys = [G.element((0, 1))]
    for F in factors[1:]:
        ys = [y * F.order + F.identity for y in ys]
        G_next = build_direct_product(G, F)
        ys.append(G.identity * F.order + F.element((0, 1)))
        G = G_next
    return G, generated_subgroup(G, ys).mask


def oracle_product(w: ApproachWitness) -> tuple[Fraction, Fraction | None]:
    """Brute-force degrees for a witness's concrete groups.

    Returns the product of per-factor oracle values and, when the whole
    product fits the oracle bound, the degree computed on the product itself
    (otherwise ``None``). Factors above the bound raise ``DensityError``.
    """
    if not w.terms:
        return w.value, w.value
    per_factor = Fraction(1)
    for t in w.terms:
        if t.p * t.q ** t.n > settings.oracle_max_order:
            raise DensityError(f"{t.spec} exceeds the oracle bound {settings.oracle_max_order}")
        per_factor *= _oracle_term(t.q, t.n, t.p)
    whole = None
    if math.prod(t.p * t.q ** t.n for t in w.terms) <= settings.oracle_max_order:
        G, mask = _assemble(w.terms)
        H = generated_subgroup(G, [g for g in range(G.order) if mask >> g & 1])
        whole = csd_relative(G, H)
    return per_factor, whole


def quaternion_tail(max_n: int) -> list[tuple[int, Fraction]]:
    """``csd(Q_{2^n})`` for ``n = 3..max_n``."""
    if max_n < 3:
        raise DensityError(f"max_n must be >= 3 (got {max_n})")
    return [(n, csd_quaternion(n)) for n in range(3, max_n + 1)]
