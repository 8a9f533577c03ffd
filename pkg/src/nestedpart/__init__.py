"""Endomorphism monoids of uniformly nested partitions, iterated wreath
products, and exact/certified rank computations."""

from .closure import Closure, ClosureReport, closure
from .elementary import bracket, decompose, recompose, t_level
from .partition import (
    Endomorphism,
    NestedPartition,
    PartitionType,
    Rejection,
    compose,
    endo_from_local_maps,
    enumerate_endomorphisms,
    from_leaf_map,
    level_map,
    points_at_level,
    project,
    respects_map,
)
from .predicates import (
    UnsupportedConstruction,
    check_primitive,
    conjugator_h,
    pred_level,
    step_witness,
    stratum,
)
from .rank import (
    FiniteSemigroup,
    RankCertificate,
    brute_rank,
    full_generating_set,
    lower_bound_2k,
    relative_rank,
    search_generating_set,
)
from .wreath import (
    Permutation,
    SymmetricGroup,
    WreathElement,
    WreathProduct,
    coprime_split,
    endo_to_wreath,
    group_generators,
    iterated,
    parity,
    strannaya_extract,
    wreath_to_endo,
)

__version__ = "0.1.0"
