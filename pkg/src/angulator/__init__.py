"""Cotorsion pairs in type-A (d+2)-angulated cluster categories, via diagonal models."""
from angulator.model import (
    Diagonal,
    DiagonalSet,
    ExplicitModel,
    HomModel,
    ModelParams,
    TypeAModel,
    enumerate_diagonals,
    ext,
    fixture_example_3_10,
    format_diagonal,
    hom_nonzero,
    intertwines,
    make_params,
    parse_diagonal,
    shift,
    type_a,
)
from angulator.pairs import (
    SelfPairClass,
    Strategy,
    WeakCotorsionPair,
    classify_self_pair,
    core,
    enumerate_weak_cotorsion_pairs,
    is_cluster_tilting,
    is_rigid,
    is_weak_cotorsion,
    max_rigid_cardinality,
    nc,
    ncnc_closure,
)

__version__ = "0.1.0"
