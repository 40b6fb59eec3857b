"""Degree spectra over the subgroup lattice and corpus scans.

A spectrum is the set of distinct values a degree function takes on
``L(G)``. Degrees are conjugation invariant, so each function is evaluated
once per conjugacy class of subgroups; one extra member of every non-trivial
class is recomputed as a guard.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, NamedTuple

from .config import OrderBoundError
from .degrees import csd, csd_of_subgroup, csd_relative, sd_relative
from .groups import GroupTable
from .lattice import Subgroup, all_subgroups, cyclic_subgroups, gamma, normal_cyclic_count
from .specparse import SpecError, build, parse

__all__ = [
    "ClassRow",
    "DegreeSpectrum",
    "SpectrumCounts",
    "ScanResult",
    "relative_csd_spectrum",
    "csd_spectrum",
    "relative_sd_spectrum",
    "is_iwasawa",
    "three_value_criterion",
    "spectrum_counts",
    "scan_two_valued",
    "scan_equal_degrees",
    "describe_subgroup",
]


@dataclass(frozen=True)
class ClassRow:
    class_id: int
    representative: str
    order: int
    size: int
    cyclic: bool
    normal: bool
    value: Fraction


@dataclass(frozen=True)
class DegreeSpectrum:
    kind: str
    distinct_values: tuple[Fraction, ...]
    table: tuple[ClassRow, ...]

    def __len__(self) -> int:
        return len(self.distinct_values)

    @property
    def values(self) -> frozenset[Fraction]:
        return frozenset(self.distinct_values)


class SpectrumCounts(NamedTuple):
    sd_relative: int  # |Im f|
    csd_relative: int  # |Im f_1|
    csd: int  # |Im g_1|
    gamma: int


def describe_subgroup(G: GroupTable, H: Subgroup) -> str:
    gens = ", ".join(str(G.label(g)) for g in H.generators) or str(G.label(G.identity))
    return f"<{gens}> order {H.order}"


def _spectrum(G: GroupTable, kind: str, fn: Callable[[GroupTable, Subgroup], Fraction],
              verify: bool) -> DegreeSpectrum:
    L = all_subgroups(G)
    rows = []
    for cid, members in enumerate(L.classes):
        rep = L.subgroups[members[0]]
        value = fn(G, rep)
        if verify and len(members) > 1:
            other = fn(G, L.subgroups[members[-1]])
            if other != value:
                raise AssertionError(
                    f"{kind} not constant on class {cid} of {G.spec}: {value} vs {other}"
                )
        rows.append(ClassRow(
            class_id=cid,
            representative=describe_subgroup(G, rep),
            order=rep.order,
            size=len(members),
            cyclic=rep.mask in cyclic_subgroups(G).index,
            normal=L.normal[members[0]],
            value=value,
        ))
    distinct = tuple(sorted({r.value for r in rows}))
    return DegreeSpectrum(kind, distinct, tuple(rows))


def relative_csd_spectrum(G: GroupTable, verify: bool = True) -> DegreeSpectrum:
    """``Im f_1``: distinct ``csd(H, G)`` over subgroups ``H``."""
    return _spectrum(G, "csd_relative", csd_relative, verify)


def csd_spectrum(G: GroupTable, verify: bool = True) -> DegreeSpectrum:
    """``Im g_1``: distinct ``csd(H)`` over subgroups ``H``."""
    return _spectrum(G, "csd", csd_of_subgroup, verify)


def relative_sd_spectrum(G: GroupTable, verify: bool = True) -> DegreeSpectrum:
    """``Im f``: distinct ``sd(H, G)`` over subgroups ``H``."""
    return _spectrum(G, "sd_relative", sd_relative, verify)


def is_iwasawa(G: GroupTable) -> bool:
    return csd(G) == 1


def three_value_criterion(G: GroupTable) -> bool:
    """``csd(G) < 1/2 + |N(G) n L_1(G)| / (2 |L_1(G)|)``, compared exactly.

    When it holds, ``G`` has more than two relative cyclic degrees.
    """
    n1 = len(cyclic_subgroups(G))
    return csd(G) < Fraction(1, 2) + Fraction(normal_cyclic_count(G), 2 * n1)


def spectrum_counts(G: GroupTable) -> SpectrumCounts:
    return SpectrumCounts(
        len(relative_sd_spectrum(G)),
        len(relative_csd_spectrum(G)),
        len(csd_spectrum(G)),
        gamma(G),
    )


@dataclass
class ScanResult:
    census: list[dict] = field(default_factory=list)
    findings: list[dict] = field(default_factory=list)
    skipped: list[dict] = field(default_factory=list)
    errors: list[dict] = field(default_factory=list)


def _census_row(spec: str) -> dict:
    G = build(parse(spec))
    counts = spectrum_counts(G)
    return {
        "spec": G.spec,
        "order": G.order,
        "im_f": counts.sd_relative,
        "im_f1": counts.csd_relative,
        "im_g1": counts.csd,
        "gamma": counts.gamma,
        "iwasawa": is_iwasawa(G),
    }


def _run_census(specs: Iterable[str], max_order: int, workers: int, cache=None) -> ScanResult:
    """Census rows in input order. ``cache`` may be any object with ``get``/``put``."""
    result = ScanResult()
    todo = []
    for spec in specs:
        try:
            expr = parse(spec)
        except SpecError as exc:
            result.errors.append({"spec": spec, "error": str(exc)})
            continue
        if expr.order > max_order:
            result.skipped.append({"spec": expr.render(), "order": expr.order})
            continue
        todo.append(expr.render())
    cached = {s: cache.get(s, "census") for s in todo} if cache is not None else {}
    missing = [s for s in todo if cached.get(s) is None]
    if workers > 1 and len(missing) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            fresh = dict(zip(missing, pool.map(_safe_census_row, missing)))
    else:
        fresh = {s: _safe_census_row(s) for s in missing}
    for spec in todo:
        outcome = cached.get(spec)
        if outcome is None:
            outcome = fresh[spec]
            if cache is not None and not isinstance(outcome, str):
                cache.put(spec, "census", outcome)
        if isinstance(outcome, str):
            result.errors.append({"spec": spec, "error": outcome})
        else:
            result.census.append(outcome)
    return result


def _safe_census_row(spec: str) -> dict | str:
    try:
        return _census_row(spec)
    except (OrderBoundError, ValueError) as exc:
        return f"{type(exc).__name__}: {exc}"


def scan_two_valued(specs: Iterable[str], max_order: int, workers: int = 1, cache=None) -> ScanResult:
    """Census of ``|Im f_1|``; findings are the groups where it equals 2.

    A finding is a counterexample candidate and is reported as such.
    """
    result = _run_census(specs, max_order, workers, cache)
    result.findings = [row for row in result.census if row["im_f1"] == 2]
    return result


def scan_equal_degrees(specs: Iterable[str], max_order: int, workers: int = 1,
                       cache=None) -> ScanResult:
    """Non-Iwasawa groups with ``|Im f| = |Im f_1|``."""
    result = _run_census(specs, max_order, workers, cache)
    result.findings = [
        row for row in result.census if not row["iwasawa"] and row["im_f"] == row["im_f1"]
    ]
    return result
