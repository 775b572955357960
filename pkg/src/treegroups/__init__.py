"""Self-similar groups acting on the rooted binary tree.

Elements are given by words in a finite recursion table; the table supplies
sections and root activity, and a closure computation decides triviality.
On top of that sit exact word lengths for weighted generating sets, ball
enumeration, the splitting estimates that drive subexponential growth bounds
for the three built-in groups, and a census of the alternating words those
estimates cannot shorten.
"""

from importlib import metadata as _metadata

try:
    __version__ = _metadata.version("artifact")
except _metadata.PackageNotFoundError:  # running from a checkout
    __version__ = "0.1.0"

from .tree_automorphism import (
    BudgetExceeded,
    Element,
    Portrait,
    RecursionTable,
    StateBudgetExceeded,
    act,
    activity,
    compose,
    equal,
    inverse,
    load_recursion_spec,
    parse_recursion_spec,
    portrait,
    sections,
    trivial,
)
from .group_defs import (
    MetricGenerator,
    NamedGroup,
    builtin,
    element_order,
    load_group,
    verify_extended_table,
    verify_structure_lemmas,
)
from .metric import (
    Ball,
    EntryBudgetExceeded,
    GrowthSeries,
    WordCapExceeded,
    alternation_check,
    enumerate_ball,
    growth_series,
    level_stabilizer_member,
)
from .splitting import (
    ContractionCertificate,
    SplitResult,
    check_contraction_criterion,
    good_by_nature,
    split,
    verify_good_letter_bound,
    verify_reduction_G,
)
from .patterns import (
    AlternatingWord,
    BadStringCensus,
    PatternMatch,
    alternating_form,
    bad_strings_census,
    bad_word_bound,
    classify_word,
    count_bad_elements,
    find_good_blocks,
    max_letter_count,
    reduction_factor_H,
    verify_patterns,
)

__all__ = [
    "__version__",
    "BudgetExceeded",
    "Element",
    "Portrait",
    "RecursionTable",
    "StateBudgetExceeded",
    "act",
    "activity",
    "compose",
    "equal",
    "inverse",
    "load_recursion_spec",
    "parse_recursion_spec",
    "portrait",
    "sections",
    "trivial",
    "MetricGenerator",
    "NamedGroup",
    "builtin",
    "element_order",
    "load_group",
    "verify_extended_table",
    "verify_structure_lemmas",
    "Ball",
    "EntryBudgetExceeded",
    "GrowthSeries",
    "WordCapExceeded",
    "alternation_check",
    "enumerate_ball",
    "growth_series",
    "level_stabilizer_member",
    "ContractionCertificate",
    "SplitResult",
    "check_contraction_criterion",
    "good_by_nature",
    "split",
    "verify_good_letter_bound",
    "verify_reduction_G",
    "AlternatingWord",
    "BadStringCensus",
    "PatternMatch",
    "alternating_form",
    "bad_strings_census",
    "bad_word_bound",
    "classify_word",
    "count_bad_elements",
    "find_good_blocks",
    "max_letter_count",
    "reduction_factor_H",
    "verify_patterns",
]
