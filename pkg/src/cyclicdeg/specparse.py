"""The group-spec mini-language.

Grammar (whitespace between tokens is ignored)::

    expr := atom { "x" atom }
    atom := "Z" nat | "D" nat | "Q" nat | "SD" nat | "A4" | "S3"
          | "M(" nat "," nat ")" | "Zsd(" nat "," nat "," nat ")"

``D``, ``Q`` and ``SD`` take the group order; ``M(p,n)`` takes a prime and
an exponent. ``S3`` is accepted as a synonym and renders as ``D6``. Products are n-ary and left-associative when built. The
rendering produced by :meth:`GroupExpr.render` is the canonical spec string
used in reports and as cache-key material.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .config import OrderBoundError, settings
from .groups import (
    GroupTable,
    build_alternating4,
    build_cyclic,
    build_dihedral,
    build_direct_product,
    build_generalized_quaternion,
    build_modular,
    build_quasidihedral,
    build_semidirect_cyclic,
    modular_violation,
    semidirect_violation,
)

__all__ = [
    "SpecError",
    "SpecSyntaxError",
    "SpecConstraintError",
    "GroupExpr",
    "Cyclic",
    "Dihedral",
    "Quaternion",
    "Quasidihedral",
    "Modular",
    "SemidirectCyclic",
    "A4",
    "Product",
    "parse",
    "build",
    "build_spec",
]


class SpecError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset
        self.reason = message


class SpecSyntaxError(SpecError):
    pass


class SpecConstraintError(SpecError):
    pass


class GroupExpr:
    def render(self) -> str:
        raise NotImplementedError

    @property
    def order(self) -> int:
        raise NotImplementedError

    def constraint_violation(self) -> str | None:
        return None

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class Cyclic(GroupExpr):
    m: int

    def render(self) -> str:
        return f"Z{self.m}"

    @property
    def order(self) -> int:
        return self.m

    def constraint_violation(self) -> str | None:
        return None if self.m >= 1 else "Z order must be >= 1"


def _power_of_two_at_least(order: int, t_min: int) -> bool:
    return order >= 1 and order & (order - 1) == 0 and order.bit_length() - 1 >= t_min


@dataclass(frozen=True)
class Dihedral(GroupExpr):
    n: int  # group order

    def render(self) -> str:
        return f"D{self.n}"

    @property
    def order(self) -> int:
        return self.n

    def constraint_violation(self) -> str | None:
        if self.n < 4 or self.n % 2:
            return f"D order must be even and >= 4 (got {self.n})"
        return None


@dataclass(frozen=True)
class Quaternion(GroupExpr):
    n: int

    def render(self) -> str:
        return f"Q{self.n}"

    @property
    def order(self) -> int:
        return self.n

    def constraint_violation(self) -> str | None:
        if not _power_of_two_at_least(self.n, 3):
            return f"Q order must be 2^t with t >= 3 (got {self.n})"
        return None


@dataclass(frozen=True)
class Quasidihedral(GroupExpr):
    n: int

    def render(self) -> str:
        return f"SD{self.n}"

    @property
    def order(self) -> int:
        return self.n

    def constraint_violation(self) -> str | None:
        if not _power_of_two_at_least(self.n, 4):
            return f"SD order must be 2^t with t >= 4 (got {self.n})"
        return None


@dataclass(frozen=True)
class Modular(GroupExpr):
    p: int
    n: int

    def render(self) -> str:
        return f"M({self.p},{self.n})"

    @property
    def order(self) -> int:
        return self.p ** self.n

    def constraint_violation(self) -> str | None:
        return modular_violation(self.p, self.n)


@dataclass(frozen=True)
class SemidirectCyclic(GroupExpr):
    m: int
    n: int
    k: int

    def render(self) -> str:
        return f"Zsd({self.m},{self.n},{self.k})"

    @property
    def order(self) -> int:
        return self.m * self.n

    def constraint_violation(self) -> str | None:
        return semidirect_violation(self.m, self.n, self.k)


@dataclass(frozen=True)
class A4(GroupExpr):
    def render(self) -> str:
        return "A4"

    @property
    def order(self) -> int:
        return 12


@dataclass(frozen=True)
class Product(GroupExpr):
    factors: tuple[GroupExpr, ...]

    def __post_init__(self):
        flat: list[GroupExpr] = []
        for f in self.factors:
            flat.extend(f.factors if isinstance(f, Product) else (f,))
        if len(flat) < 2:
            raise ValueError("a product needs at least two factors")
        object.__setattr__(self, "factors", tuple(flat))

    def render(self) -> str:
        return " x ".join(f.render() for f in self.factors)

    @property
    def order(self) -> int:
        return math.prod(f.order for f in self.factors)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def offset(self, pos: int | None = None) -> int:
        pos = self.pos if pos is None else pos
        return len(self.text[:pos].encode("utf-8"))

    def fail(self, message: str, pos: int | None = None) -> SpecSyntaxError:
        return SpecSyntaxError(message, self.offset(pos))

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def describe_here(self) -> str:
        c = self.peek()
        return repr(c) if c else "end of input"

    def accept(self, token: str) -> bool:
        self.skip_ws()
        if self.text.startswith(token, self.pos):
            self.pos += len(token)
            return True
        return False

    def expect(self, token: str) -> None:
        if not self.accept(token):
            raise self.fail(f"expected {token!r}, found {self.describe_here()}")

    def nat(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] in "0123456789":
            self.pos += 1
        if start == self.pos:
            raise self.fail(f"expected a number, found {self.describe_here()}")
        return int(self.text[start:self.pos])

    def args(self, count: int) -> list[int]:
        self.expect("(")
        out = [self.nat()]
        for _ in range(count - 1):
            self.expect(",")
            out.append(self.nat())
        self.expect(")")
        return out

    _KEYWORDS = ("Zsd", "Z", "SD", "S3", "D", "Q", "A4", "M")

    def keyword(self) -> str:
        """Longest keyword at the cursor; a partial match fails where it breaks."""
        self.skip_ws()
        best, reach = "", 0
        for kw in self._KEYWORDS:
            n = 0
            while n < len(kw) and self.text.startswith(kw[n], self.pos + n):
                n += 1
            if n == len(kw) and n > len(best):
                best = kw
            reach = max(reach, n)
        if reach > len(best):
            raise self.fail(
                f"expected a group atom, found {self.text[self.pos:self.pos + reach + 1]!r}",
                self.pos + reach,
            )
        if not best:
            raise self.fail(f"expected a group atom, found {self.describe_here()}")
        self.pos += len(best)
        return best

    def atom(self) -> tuple[GroupExpr, int]:
        self.skip_ws()
        start = self.pos
        kw = self.keyword()
        node: GroupExpr
        if kw == "Zsd":
            node = SemidirectCyclic(*self.args(3))
        elif kw == "Z":
            node = Cyclic(self.nat())
        elif kw == "SD":
            node = Quasidihedral(self.nat())
        elif kw == "S3":
            node = Dihedral(6)
        elif kw == "D":
            node = Dihedral(self.nat())
        elif kw == "Q":
            node = Quaternion(self.nat())
        elif kw == "A4":
            node = A4()
        else:
            node = Modular(*self.args(2))
        return node, start

    def expr(self) -> GroupExpr:
        atoms = [self.atom()]
        while self.accept("x"):
            atoms.append(self.atom())
        self.skip_ws()
        if self.pos != len(self.text):
            raise self.fail(f"expected 'x' or end of input, found {self.describe_here()}")
        # constraints only after the whole string is syntactically valid
        for node, start in atoms:
            problem = node.constraint_violation()
            if problem:
                raise SpecConstraintError(f"{node.render()}: {problem}", self.offset(start))
        factors = [node for node, _ in atoms]
        return factors[0] if len(factors) == 1 else Product(tuple(factors))


def parse(spec: str) -> GroupExpr:
    """Parse a spec string, validating every family constraint."""
    return _Parser(spec).expr()


def _build_atom(node: GroupExpr) -> GroupTable:
    if isinstance(node, Cyclic):
        return build_cyclic(node.m)
    if isinstance(node, Dihedral):
        return build_dihedral(node.n)
    if isinstance(node, Quaternion):
        return build_generalized_quaternion(node.n)
    if isinstance(node, Quasidihedral):
        return build_quasidihedral(node.n)
    if isinstance(node, Modular):
        return build_modular(node.p, node.n)
    if isinstance(node, SemidirectCyclic):
        return build_semidirect_cyclic(node.m, node.n, node.k)
    if isinstance(node, A4):
        return build_alternating4()
    raise TypeError(f"not a group atom: {node!r}")


def build(expr: GroupExpr) -> GroupTable:
    """Construct the table; identical canonical specs share one table."""
    if expr.order > settings.max_order:
        raise OrderBoundError(
            f"{expr.render()} has order {expr.order}, above the bound {settings.max_order}"
        )
    return _build_canonical(expr.render(), settings.max_order)


@lru_cache(maxsize=512)
def _build_canonical(spec: str, _bound: int) -> GroupTable:
    expr = parse(spec)
    if isinstance(expr, Product):
        G = _build_atom(expr.factors[0])
        for f in expr.factors[1:]:
            G = build_direct_product(G, _build_atom(f))
        return G
    return _build_atom(expr)


def build_spec(spec: str) -> GroupTable:
    return build(parse(spec))
