"""Engel elements, radicals and central series of concrete groups."""
from .core import (
    CapacityError,
    ClosureDivergenceError,
    CrossGroupError,
    Element,
    Group,
    GroupError,
    InfiniteGroupError,
    NotAnAutomorphismError,
    commutator,
    conjugate,
    element_order,
)
from .definitions import DefinitionError, GroupDefinition, build_groups, parse_definitions
from .engel import (
    NOT_ENGEL,
    UNKNOWN,
    EngelClassification,
    classify,
    iterated_commutator,
    left_engel_degree,
    right_engel_degree,
)
from .engines import (
    CyclicGroup,
    DirectProduct,
    ModularGroup,
    PermutationGroup,
    SemidirectProduct,
    alternating_group,
    dihedral_group,
    direct_product,
    modular_group,
    semidirect_product,
    symmetric_group,
)
from .example import ExampleGroup, ExampleParams, example_group
from .series import (
    baer_radical,
    center,
    fitting_subgroup,
    lower_central_series,
    nilpotency_class,
    rho,
    rho_bar,
    series_report,
    upper_central_series,
)
from .subgroups import Subgroup, centralizer, normal_closure, subgroup_generated
from .verify import catalog, check_example, run_checks

__all__ = [
    "CapacityError",
    "ClosureDivergenceError",
    "CrossGroupError",
    "CyclicGroup",
    "DefinitionError",
    "DirectProduct",
    "Element",
    "EngelClassification",
    "ExampleGroup",
    "ExampleParams",
    "Group",
    "GroupDefinition",
    "GroupError",
    "InfiniteGroupError",
    "ModularGroup",
    "NOT_ENGEL",
    "NotAnAutomorphismError",
    "PermutationGroup",
    "SemidirectProduct",
    "Subgroup",
    "UNKNOWN",
    "alternating_group",
    "baer_radical",
    "build_groups",
    "catalog",
    "center",
    "centralizer",
    "check_example",
    "classify",
    "commutator",
    "conjugate",
    "dihedral_group",
    "direct_product",
    "element_order",
    "example_group",
    "fitting_subgroup",
    "iterated_commutator",
    "left_engel_degree",
    "lower_central_series",
    "modular_group",
    "nilpotency_class",
    "normal_closure",
    "parse_definitions",
    "rho",
    "rho_bar",
    "right_engel_degree",
    "run_checks",
    "semidirect_product",
    "series_report",
    "subgroup_generated",
    "symmetric_group",
    "upper_central_series",
]
__version__ = "0.1.0"
