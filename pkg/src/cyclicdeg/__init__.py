"""Exact cyclic subgroup commutativity degrees of finite groups."""

from .config import OrderBoundError, Settings, settings
from .degrees import Degree, csd, csd_of_subgroup, csd_relative, permutes, sd, sd_relative
from .groups import GroupConstructionError, GroupTable
from .lattice import (
    Subgroup,
    all_subgroups,
    conjugacy_classes,
    cyclic_subgroups,
    gamma,
    generated_subgroup,
    is_normal,
    normal_cyclic_count,
)
from .specparse import SpecConstraintError, SpecError, SpecSyntaxError, build_spec, parse
from .spectra import (
    csd_spectrum,
    is_iwasawa,
    three_value_criterion,
    relative_csd_spectrum,
    relative_sd_spectrum,
    spectrum_counts,
)

__version__ = "0.1.0"

__all__ = [
    "Degree",
    "GroupConstructionError",
    "GroupTable",
    "OrderBoundError",
    "Settings",
    "SpecConstraintError",
    "SpecError",
    "SpecSyntaxError",
    "Subgroup",
    "all_subgroups",
    "build_spec",
    "conjugacy_classes",
    "csd",
    "csd_of_subgroup",
    "csd_relative",
    "csd_spectrum",
    "cyclic_subgroups",
    "gamma",
    "generated_subgroup",
    "is_iwasawa",
    "is_normal",
    "normal_cyclic_count",
    "parse",
    "permutes",
    "three_value_criterion",
    "relative_csd_spectrum",
    "relative_sd_spectrum",
    "sd",
    "sd_relative",
    "settings",
    "spectrum_counts",
]
