"""Subfactor categories nc(D)/D of polygon models.

Cutting the polygon along the non-crossing diagonals of ``D`` leaves cells;
a cell with ``k >= 4`` vertices is again a polygon model (``n = k - 3``) and
the subfactor is the product of these.  Objects are the diagonals of
``nc(D)`` outside ``D``, each living inside exactly one cell.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from angulator.errors import CapacityError, DomainError, PreconditionError, UnsupportedError
from angulator.model import (
    Diagonal,
    ExplicitModel,
    ModelParams,
    TypeAModel,
    format_diagonal,
    intertwines,
    make_params,
    rotate,
)
from angulator.mutation import is_non_crossing, polygon_cells
from angulator.pairs import Report, enumerate_weak_cotorsion_pairs

THEOREM_4_11_MAX_M = 8


@dataclass(frozen=True)
class SubfactorModel:
    parent: ModelParams
    dset: frozenset
    cells: tuple[tuple[int, ...], ...]
    # per cell: local polygon parameters, or None for triangles
    cell_params: tuple[ModelParams | None, ...]
    # parent diagonal -> (cell index, local diagonal)
    to_local: dict
    to_parent: dict

    def __hash__(self):
        return hash((self.parent, self.dset))

    @property
    def objects(self) -> list[Diagonal]:
        return sorted(self.to_local)

    def to_json(self) -> dict:
        return {
            "parent": {"n": self.parent.n, "d": self.parent.d},
            "dset": [format_diagonal(u) for u in sorted(self.dset)],
            "cells": [list(c) for c in self.cells],
            "objects": [
                {"parent": format_diagonal(u), "cell": self.to_local[u][0], "local": format_diagonal(self.to_local[u][1])}
                for u in self.objects
            ],
        }


def build_subfactor(params: ModelParams, dset: Iterable) -> SubfactorModel:
    if params.d != 1:
        raise UnsupportedError("subfactor models are only built for d = 1")
    model = TypeAModel(params)
    dset = frozenset(Diagonal(u) for u in dset)
    for u in dset:
        model.index(u)
    if not is_non_crossing(dset):
        raise PreconditionError("D must be pairwise non-crossing")
    decomposition = polygon_cells(params.m, dset)
    cell_params = tuple(make_params(len(c) - 3, 1) if len(c) >= 4 else None for c in decomposition.cells)
    to_local, to_parent = {}, {}
    dmask = model.mask(dset)
    for i, u in enumerate(model.objects):
        if dmask >> i & 1 or model.conflict_masks[i] & dmask:
            continue
        k = decomposition.cell_of(u)
        cell = decomposition.cells[k]
        local = Diagonal(cell.index(v) + 1 for v in u)
        to_local[u] = (k, local)
        to_parent[(k, local)] = u
    return SubfactorModel(params, dset, decomposition.cells, cell_params, to_local, to_parent)


def _local(sf: SubfactorModel, u) -> tuple[int, Diagonal]:
    try:
        return sf.to_local[Diagonal(u)]
    except KeyError:
        raise DomainError(f"{Diagonal(u)} is not an object of nc(D) \\ D") from None


def local_ext(sf: SubfactorModel, u, v) -> bool:
    cu, lu = _local(sf, u)
    cv, lv = _local(sf, v)
    if cu != cv:
        return False
    return intertwines(lu, lv) or intertwines(lv, lu)


def local_shift(sf: SubfactorModel, u, steps: int = 1) -> Diagonal:
    """The subfactor shift: rotation inside the cell of ``u``."""
    k, local = _local(sf, u)
    return sf.to_parent[(k, rotate(local, steps, len(sf.cells[k])))]


def as_explicit_model(sf: SubfactorModel) -> ExplicitModel:
    objs = sf.objects
    index = {u: i for i, u in enumerate(objs)}
    table = tuple(tuple(local_ext(sf, u, v) for v in objs) for u in objs)
    perm = tuple(index[local_shift(sf, u)] for u in objs)
    return ExplicitModel(tuple(format_diagonal(u) for u in objs), table, perm, 1)


# --------------------------------------------------------------------------
# pair sets, all as (X, Y) of parent diagonals


@lru_cache(maxsize=None)
def _polygon_pairs(params: ModelParams) -> tuple:
    return tuple((p.x, p.y) for p in enumerate_weak_cotorsion_pairs(TypeAModel(params)))


def parent_pairs_over(params: ModelParams, dset: Iterable) -> set[tuple[frozenset, frozenset]]:
    """Weak cotorsion pairs of the parent whose core contains ``dset``."""
    dset = frozenset(Diagonal(u) for u in dset)
    return {(x, y) for x, y in _polygon_pairs(params) if dset <= x and dset <= y}


def product_pairs(sf: SubfactorModel) -> set[tuple[frozenset, frozenset]]:
    """Subfactor pairs assembled cell by cell."""
    per_cell = []
    for k, local_params in enumerate(sf.cell_params):
        if local_params is None:
            continue
        lift = lambda s, k=k: frozenset(sf.to_parent[(k, u)] for u in s)
        per_cell.append([(lift(x), lift(y)) for x, y in _polygon_pairs(local_params)])
    out = set()
    for combo in itertools.product(*per_cell):
        out.add((frozenset().union(*(c[0] for c in combo)), frozenset().union(*(c[1] for c in combo))))
    return out


def direct_pairs(sf: SubfactorModel) -> set[tuple[frozenset, frozenset]]:
    """Subfactor pairs from enumerating the explicit ext table of nc(D) \\ D."""
    model = as_explicit_model(sf)
    back = {format_diagonal(u): u for u in sf.objects}
    return {
        (frozenset(back[o] for o in p.x), frozenset(back[o] for o in p.y))
        for p in enumerate_weak_cotorsion_pairs(model)
    }


def check_theorem_4_11(params: ModelParams, dset: Iterable) -> Report:
    """(X, Y) -> (X \\ D, Y \\ D) is a bijection onto the subfactor's pairs."""
    if params.m > THEOREM_4_11_MAX_M:
        raise CapacityError(f"the bijection check is limited to m <= {THEOREM_4_11_MAX_M}")
    sf = build_subfactor(params, dset)
    parents = parent_pairs_over(params, sf.dset)
    product = product_pairs(sf)
    direct = direct_pairs(sf)
    d = sf.dset
    image = {(x - d, y - d) for x, y in parents}
    roundtrip = {(x | d, y | d) for x, y in image}

    counterexample = None
    if product != direct:
        bad = sorted(product ^ direct, key=_pair_key)[0]
        counterexample = {"reason": "product and direct subfactor enumerations differ", **_pair_json(bad)}
    elif len(image) != len(parents):
        counterexample = {"reason": "the map is not injective"}
    elif image != product:
        bad = sorted(image ^ product, key=_pair_key)[0]
        counterexample = {"reason": "image differs from the subfactor pairs", **_pair_json(bad)}
    elif roundtrip != parents:
        bad = sorted(roundtrip ^ parents, key=_pair_key)[0]
        counterexample = {"reason": "roundtrip does not return the parent pairs", **_pair_json(bad)}
    return Report("4.11", len(parents), counterexample is None, counterexample)


def _pair_key(pair):
    return (sorted(pair[0]), sorted(pair[1]))


def _pair_json(pair) -> dict:
    return {"x": [format_diagonal(u) for u in sorted(pair[0])], "y": [format_diagonal(u) for u in sorted(pair[1])]}
