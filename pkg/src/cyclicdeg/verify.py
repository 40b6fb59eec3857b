"""Named verification suites.

Each suite returns a list of :class:`Check` records. A check either passes,
fails, or is a documented deviation: a formula mismatch listed in
``formulas.DOCUMENTED_DEVIATIONS``, reported with both values but not counted
as a failure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .corpus import builtin_corpus, random_coprime_products
from .degrees import _cyclic_rows, csd_of_subgroup, csd_relative, permutes, sd_relative
from .density import (
    approach_rational,
    check_witness,
    oracle_product,
    quaternion_tail,
    witness_from_terms,
)
from .formulas import audit_formula, quaternion_relative
from .groups import GroupTable
from .lattice import all_subgroups, cyclic_subgroups, generated_subgroup, gamma, normal_cyclic_count
from .specparse import build_spec
from .spectra import (
    csd_spectrum,
    is_iwasawa,
    three_value_criterion,
    relative_csd_spectrum,
    scan_two_valued,
)

__all__ = ["Check", "SUITES", "run_suite", "property_corpus", "check_group_properties",
           "check_product_multiplicativity"]

PASS, FAIL, DOCUMENTED = "pass", "fail", "documented deviation"


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    expected: str
    observed: str
    status: str

    @property
    def ok(self) -> bool:
        return self.status != FAIL


def _check(suite: str, name: str, expected, observed) -> Check:
    return Check(suite, name, str(expected), str(observed), PASS if expected == observed else FAIL)


def _audit_checks(suite: str, family: str, points) -> list[Check]:
    out = []
    for r in audit_formula(family, points):
        params = ",".join(f"{k}={v}" for k, v in r.params)
        status = PASS if r.verdict == "match" else (DOCUMENTED if r.documented else FAIL)
        out.append(Check(suite, f"{family}({params}) {r.quantity}", str(r.formula),
                         str(r.oracle), status))
    return out


def _im_f1(spec: str) -> int:
    return len(relative_csd_spectrum(build_spec(spec)))


# ---- suites ------------------------------------------------------------------

def suite_closed_forms() -> list[Check]:
    s = "cor32"
    out = _audit_checks(s, "dihedral", range(3, 8))
    out += _audit_checks(s, "quaternion", range(3, 8))
    out += _audit_checks(s, "quasidihedral", range(4, 8))
    for spec, want in (("D8", 3), ("D16", 4), ("Q16", 4), ("Q32", 5), ("SD16", 6)):
        out.append(_check(s, f"|Im f1|({spec})", want, _im_f1(spec)))
    return out


def suite_quaternion_relative() -> list[Check]:
    s = "thm33"
    out = [_check(s, "|Im f1|(Q8)", 1, _im_f1("Q8"))]
    for n in range(4, 8):
        G = build_spec(f"Q{2 ** n}")
        spec = relative_csd_spectrum(G)
        out.append(_check(s, f"|Im f1|(Q{2 ** n})", n, len(spec)))
        formula = sorted({Fraction(1)} | {quaternion_relative(n, i) for i in range(2, n + 1)})
        out.append(_check(s, f"Im f1(Q{2 ** n}) values", formula, sorted(spec.values)))
    return out


def suite_quaternion_intrinsic() -> list[Check]:
    s = "thm312"
    return [_check(s, f"|Im g1|(Q{2 ** (n + 2)})", n, len(csd_spectrum(build_spec(f"Q{2 ** (n + 2)}"))))
            for n in range(1, 6)]


def suite_one_class() -> list[Check]:
    s = "thm39"
    out = _audit_checks(s, "g1", [(7, 3, 1), (13, 3, 2)])
    for spec, want in (("Zsd(7,3,2)", 3), ("Zsd(13,9,3)", 3), ("M(3,3)", 1), ("M(2,4)", 1)):
        out.append(_check(s, f"|Im f1|({spec})", want, _im_f1(spec)))
    return out


TWO_CLASS_CENSUS = (
    ("A4", 5), ("Zsd(5,4,2)", 5), ("Zsd(3,2,2) x Z5", 3), ("Zsd(9,2,8)", 4), ("M(3,3) x Z2", 1),
    ("Zsd(4,4,3)", 3), ("Q16", 4), ("Zsd(8,4,5)", 1), ("D8", 3),
)


def suite_two_classes() -> list[Check]:
    s = "thm310"
    out = [_check(s, f"|Im f1|({spec})", want, _im_f1(spec)) for spec, want in TWO_CLASS_CENSUS]
    out += _audit_checks(s, "two_class_g2", [(5, 2, 2), (5, 2, 3), (13, 2, 2)])
    out += _audit_checks(s, "two_class_g4", [(3, 2, 1), (3, 2, 2), (5, 2, 1)])
    return out


def suite_remarks() -> list[Check]:
    s = "remarks"
    out = [_check(s, "gamma(Zsd(3,2,2) x Z3)", 3, gamma(build_spec("Zsd(3,2,2) x Z3")))]
    # D8 x Z_{3^(n-1)} has 2n classes of non-normal subgroups yet three degrees
    for n in (2, 3):
        spec = f"D8 x Z{3 ** (n - 1)}"
        G = build_spec(spec)
        out.append(_check(s, f"gamma({spec})", 2 * n, gamma(G)))
        out.append(_check(s, f"|Im f1|({spec})", 3, len(relative_csd_spectrum(G))))
    out.append(_check(s, "|Im f1|(Q32 x Z3)", 5, _im_f1("Q32 x Z3")))
    return out


def property_corpus() -> list[str]:
    """Every family at orders up to 128, used by the structural property checks."""
    return [
        "Z1", "Z12", "Z2 x Z2", "Z2 x Z4", "Z3 x Z3", "S3", "D8", "D10", "D12", "D16", "D18",
        "D20", "D32", "D64", "D128", "Q8", "Q16", "Q32", "Q64", "Q128", "SD16", "SD32",
        "SD64", "SD128", "M(2,4)", "M(2,5)", "M(3,3)", "A4", "Zsd(7,3,2)", "Zsd(13,3,3)",
        "Zsd(5,4,2)", "Zsd(9,2,8)", "Zsd(4,4,3)", "Zsd(8,4,5)", "Zsd(3,4,2)", "Zsd(13,4,5)",
        "Zsd(3,2,2) x Z3", "D8 x Z3", "Q8 x Z2", "D8 x Z2", "S3 x S3", "A4 x Z2",
        "Zsd(7,3,2) x Z3", "Q32 x Z3",
    ]


def check_group_properties(G: GroupTable) -> list[tuple[str, bool]]:
    """Structural invariants of the degrees on one group, over every subgroup."""
    L = all_subgroups(G)
    P = cyclic_subgroups(G)
    n1 = len(P)
    floor = Fraction(normal_cyclic_count(G), n1)
    whole = (1 << G.order) - 1
    out = []
    lower1 = lower2 = equiv = True
    values: list[Fraction] = []
    for H in L:
        v = csd_relative(G, H)
        values.append(v)
        lower1 &= v >= floor
        if H.mask != whole:
            inside = sum(1 for c in P if c.mask & H.mask == c.mask)
            lower2 &= v >= Fraction(inside, n1) * csd_of_subgroup(G, H)
        equiv &= (v == 1) == (sd_relative(G, H) == 1)
    out.append(("lower bound |N n L1|/|L1|", lower1))
    out.append(("lower bound |L1(H)|/|L1(G)| csd(H)", lower2))
    out.append(("csd(H,G)=1 iff sd(H,G)=1", equiv))
    constant = all(len({values[i] for i in members}) == 1 for members in L.classes)
    out.append(("constant on conjugacy classes", constant))
    rows = _cyclic_rows(G)
    symmetric = all((rows[i] >> j & 1) == (rows[j] >> i & 1) for i in range(n1) for j in range(n1))
    out.append(("permutability symmetric", symmetric))
    # the cached rows agree with the literal HK = KH test on a few pairs
    sample = list(itertools.islice(itertools.product(range(n1), repeat=2), 0, None, max(1, n1 * n1 // 50)))
    literal = all(bool(rows[i] >> j & 1) == permutes(G, P[i], P[j]) for i, j in sample)
    out.append(("cached permutability matches HK = KH", literal))
    return out


def check_product_multiplicativity(a: str, b: str) -> bool:
    """``csd(H1 x H2, G1 x G2) = csd(H1, G1) csd(H2, G2)`` for every pair of subgroups."""
    G1, G2 = build_spec(a), build_spec(b)
    G = build_spec(f"{a} x {b}")
    n2 = G2.order
    L1, L2 = all_subgroups(G1), all_subgroups(G2)
    v2 = {H2.mask: csd_relative(G2, H2) for H2 in L2}
    for H1 in L1:
        v1 = csd_relative(G1, H1)
        for H2 in L2:
            H = generated_subgroup(G, [g * n2 + h for g in H1.elements for h in H2.elements])
            if csd_relative(G, H) != v1 * v2[H2.mask]:
                return False
    return True


def suite_bounds() -> list[Check]:
    s = "bounds"
    out = []
    for spec in property_corpus():
        for name, ok in check_group_properties(build_spec(spec)):
            out.append(Check(s, f"{spec}: {name}", "True", str(ok), PASS if ok else FAIL))
    for a, b in random_coprime_products(10):
        ok = check_product_multiplicativity(a, b)
        out.append(Check(s, f"{a} x {b}: multiplicative", "True", str(ok), PASS if ok else FAIL))
    return out


THREE_VALUE_THRESHOLDS = (("D", 3, 7, 5), ("Q", 3, 7, 6), ("SD", 4, 7, 5))


def suite_three_value() -> list[Check]:
    s = "prop31"
    out = []
    for prefix, lo, hi, threshold in THREE_VALUE_THRESHOLDS:
        for n in range(lo, hi + 1):
            spec = f"{prefix}{2 ** n}"
            out.append(_check(s, f"criterion({spec})", n >= threshold, three_value_criterion(build_spec(spec))))
    for spec in builtin_corpus(64):
        G = build_spec(spec)
        if three_value_criterion(G):
            k = len(relative_csd_spectrum(G))
            out.append(Check(s, f"{spec}: criterion => |Im f1| > 2", "> 2", str(k), PASS if k > 2 else FAIL))
        iw = is_iwasawa(G)
        one = len(relative_csd_spectrum(G)) == 1
        out.append(_check(s, f"{spec}: |Im f1| = 1 iff csd = 1", iw, one))
    return out


def suite_density() -> list[Check]:
    s = "density"
    w = approach_rational(1, 2, Fraction(1, 100))
    out = [
        _check(s, "approach 1/2 tol 1/100: p", [151], [t.p for t in w.terms]),
        _check(s, "approach 1/2 tol 1/100: error", Fraction(1, 102), w.error),
    ]
    w = approach_rational(2, 5, Fraction(1, 20))
    out.append(_check(s, "approach 2/5 tol 1/20: terms", 3, len(w.terms)))
    out.append(_check(s, "approach 2/5 tol 1/20: error below tol", True, w.error < Fraction(1, 20)))
    out.append(_check(s, "approach 2/5 tol 1/20: witness invariants", [], check_witness(w)))
    for triples in ([(3, 1, 7), (2, 1, 5)], [(3, 1, 7)], [(2, 2, 5), (3, 1, 7)], [(3, 1, 13), (2, 1, 11)]):
        w = witness_from_terms(triples)
        per_factor, whole = oracle_product(w)
        out.append(_check(s, f"oracle product {' x '.join(w.specs)}", w.value, per_factor))
        if whole is not None:
            out.append(_check(s, f"oracle on product group {' x '.join(w.specs)}", w.value, whole))
    tail = quaternion_tail(10)
    decreasing = all(a[1] > b[1] for a, b in zip(tail[1:], tail[2:]))
    out.append(_check(s, "qtail strictly decreasing from n=4", True, decreasing))
    out.append(_check(s, "qtail value at n=10 below 1/10", True, tail[-1][1] < Fraction(1, 10)))
    return out


def suite_two_valued_probe() -> list[Check]:
    r = scan_two_valued(builtin_corpus(64), 64)
    return [
        _check("conj311", "groups scanned without error", 0, len(r.errors)),
        _check("conj311", "groups with |Im f1| = 2 up to order 64", [], [row["spec"] for row in r.findings]),
    ]


SUITES: dict[str, Callable[[], list[Check]]] = {
    "cor32": suite_closed_forms,
    "thm33": suite_quaternion_relative,
    "thm312": suite_quaternion_intrinsic,
    "thm39": suite_one_class,
    "thm310": suite_two_classes,
    "remarks": suite_remarks,
    "bounds": suite_bounds,
    "prop31": suite_three_value,
    "density": suite_density,
    "conj311": suite_two_valued_probe,
}


def run_suite(name: str) -> list[Check]:
    if name == "all":
        return [c for fn in SUITES.values() for c in fn()]
    try:
        return SUITES[name]()
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join([*SUITES, 'all'])}") from None
