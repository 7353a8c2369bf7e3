"""The nc calculus: perpendicular sets, closure, rigidity and weak cotorsion pairs."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from angulator._bits import iter_bits, popcount, union_table
from angulator.errors import CapacityError, DomainError
from angulator.model import (
    HomModel,
    ModelParams,
    enumerate_diagonals,
    intertwines,
)

BRUTE_FORCE_LIMIT = 25
THEOREM_3_14_LIMIT = 20
# above this many objects the 3.14 check evaluates only the pairs where some
# condition can hold; every other pair fails all three conditions outright
THEOREM_3_14_GRID_LIMIT = 10


class Strategy(enum.Enum):
    BRUTE_FORCE = "brute-force"
    NEXT_CLOSURE = "next-closure"


class SelfPairClass(enum.Enum):
    CLUSTER_TILTING = "ClusterTilting"
    MAXIMAL_RIGID_ONLY = "MaximalRigidOnly"
    NOT_SELF_DUAL = "NotSelfDual"


@dataclass(frozen=True)
class WeakCotorsionPair:
    x: frozenset
    y: frozenset
    core: frozenset


@dataclass(frozen=True)
class Report:
    theorem: str
    instances_checked: int
    passed: bool
    counterexample: dict | None = None

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "instances_checked": self.instances_checked,
            "passed": self.passed,
            "counterexample": self.counterexample,
        }


# --------------------------------------------------------------------------
# set operations


def nc(s: Iterable, model: HomModel) -> frozenset:
    """Objects with vanishing ext against every member of ``s``, in both orders."""
    return model.unmask(model.nc_mask(model.mask(s)))


def ncnc_closure(s: Iterable, model: HomModel) -> frozenset:
    return model.unmask(model.nc_mask(model.nc_mask(model.mask(s))))


def is_rigid(s: Iterable, model: HomModel) -> bool:
    mask = model.mask(s)
    return all(model.ext_masks[i] & mask == 0 for i in iter_bits(mask))


def is_weak_cotorsion(x: Iterable, y: Iterable, model: HomModel) -> bool:
    xm, ym = model.mask(x), model.mask(y)
    return model.nc_mask(ym) == xm and model.nc_mask(xm) == ym


def core(x: Iterable, y: Iterable) -> frozenset:
    return frozenset(x) & frozenset(y)


def make_pair(x: Iterable, model: HomModel) -> WeakCotorsionPair:
    """The pair ``(x, nc x)``; ``x`` must be ncnc-closed."""
    xm = model.mask(x)
    ym = model.nc_mask(xm)
    if model.nc_mask(ym) != xm:
        raise DomainError("x is not ncnc-closed, so (x, nc x) is not a weak cotorsion pair")
    return _pair_from_masks(model, xm, ym)


def _pair_from_masks(model: HomModel, xm: int, ym: int) -> WeakCotorsionPair:
    return WeakCotorsionPair(model.unmask(xm), model.unmask(ym), model.unmask(xm & ym))


# --------------------------------------------------------------------------
# enumeration


def nc_table(model: HomModel) -> np.ndarray:
    """``table[S] = nc(S)`` as bitmasks, for every subset ``S``."""
    blocked = union_table(model.conflict_masks)
    return np.bitwise_and(~blocked, blocked.dtype.type(model.full_mask))


def closed_masks_brute_force(model: HomModel) -> list[int]:
    if model.size > BRUTE_FORCE_LIMIT:
        raise CapacityError(
            f"brute force is limited to {BRUTE_FORCE_LIMIT} objects "
            f"(model has {model.size}); use the next-closure strategy"
        )
    table = nc_table(model)
    closed = table[table] == np.arange(len(table), dtype=table.dtype)
    return [int(s) for s in np.flatnonzero(closed)]


def closed_masks_next_closure(model: HomModel) -> list[int]:
    """ncnc-closed sets in lectic order (Ganter's next-closure walk).

    Earlier objects in canonical order are the more significant ones, so
    each step tries to add the latest object it can.
    """
    n = model.size
    full = model.full_mask

    def close(mask: int) -> int:
        return model.nc_mask(model.nc_mask(mask))

    current = close(0)
    out = [current]
    while current != full:
        for i in range(n - 1, -1, -1):
            bit = 1 << i
            if current & bit:
                current &= ~bit
                continue
            candidate = close(current | bit)
            if (candidate & ~current) & (bit - 1) == 0:
                current = candidate
                break
        out.append(current)
    return out


def _sort_key(model: HomModel, pair: tuple[int, int]):
    xm, ym = pair
    return (list(iter_bits(xm)), list(iter_bits(ym)))


def enumerate_weak_cotorsion_pairs(
    model: HomModel, strategy: Strategy = Strategy.NEXT_CLOSURE
) -> list[WeakCotorsionPair]:
    """Every ordered weak cotorsion pair ``(X, nc X)``, canonically sorted.

    Pairs are sorted by the index lists of ``X`` then ``Y`` in canonical
    object order, so both strategies produce the same list.
    """
    strategy = Strategy(strategy)
    if strategy is Strategy.BRUTE_FORCE:
        closed = closed_masks_brute_force(model)
    else:
        closed = closed_masks_next_closure(model)
    masks = sorted(((xm, model.nc_mask(xm)) for xm in closed), key=lambda p: _sort_key(model, p))
    return [_pair_from_masks(model, xm, ym) for xm, ym in masks]


def pair_class(pair: WeakCotorsionPair, model: HomModel) -> str:
    if pair.x != pair.y:
        return "Mixed"
    return classify_self_pair(pair.x, model).value


def pairs_document(model: HomModel, pairs: list[WeakCotorsionPair], descriptor: dict | None = None) -> dict:
    fmt = model.format_object
    return {
        "model": descriptor if descriptor is not None else model.describe(),
        "ordered_pairs": [
            {
                "x": [fmt(o) for o in model.ordered(p.x)],
                "y": [fmt(o) for o in model.ordered(p.y)],
                "core": [fmt(o) for o in model.ordered(p.core)],
                "class": pair_class(p, model),
            }
            for p in pairs
        ],
    }


# --------------------------------------------------------------------------
# rigidity and cluster tilting


def _max_independent(adjacency: list[int], candidates: int) -> int:
    best = 0

    def expand(size: int, cand: int):
        nonlocal best
        if cand == 0:
            best = max(best, size)
            return
        if size + popcount(cand) <= best:
            return
        # branch on the candidate with most neighbours among candidates
        v = max(iter_bits(cand), key=lambda i: popcount(adjacency[i] & cand))
        bit = 1 << v
        expand(size + 1, cand & ~bit & ~adjacency[v])
        # an isolated candidate is always worth taking, so only branch otherwise
        if adjacency[v] & cand:
            expand(size, cand & ~bit)

    expand(0, candidates)
    return best


@lru_cache(maxsize=None)
def max_rigid_cardinality(model: HomModel) -> int:
    """Size of a largest rigid set, by exact branch and bound."""
    adjacency = list(model.conflict_masks)
    candidates = 0
    for i, row in enumerate(model.ext_masks):
        if not (row >> i) & 1:
            candidates |= 1 << i
    return _max_independent(adjacency, candidates)


def is_cluster_tilting(s: Iterable, model: HomModel) -> bool:
    s = frozenset(s)
    return is_rigid(s, model) and len(s) == max_rigid_cardinality(model)


def classify_self_pair(s: Iterable, model: HomModel) -> SelfPairClass:
    mask = model.mask(s)
    if model.nc_mask(mask) != mask:
        return SelfPairClass.NOT_SELF_DUAL
    if popcount(mask) == max_rigid_cardinality(model):
        return SelfPairClass.CLUSTER_TILTING
    return SelfPairClass.MAXIMAL_RIGID_ONLY


# --------------------------------------------------------------------------
# polygon oracle (d = 1)


def _crossing(a, b) -> bool:
    return intertwines(a, b) or intertwines(b, a)


def _connectors(a, b, params: ModelParams) -> list:
    ends = set(a) | set(b)
    return [u for u in enumerate_diagonals(params) if set(u) <= ends]


def _require_polygon(params: ModelParams):
    if params.d != 1:
        raise DomainError(f"the polygon oracle needs d = 1, got d = {params.d}")


def is_ptolemy(s: Iterable, params: ModelParams) -> bool:
    """Whether every crossing pair in ``s`` brings along all diagonals on its four endpoints."""
    _require_polygon(params)
    s = frozenset(tuple(u) for u in s)
    members = sorted(s)
    for i, a in enumerate(members):
        for b in members[i + 1 :]:
            if _crossing(a, b) and not all(tuple(u) in s for u in _connectors(a, b, params)):
                return False
    return True


def ptolemy_flags(params: ModelParams) -> np.ndarray:
    """Vectorised :func:`is_ptolemy` over all subsets, as bitmasks in diagonal order."""
    _require_polygon(params)
    diags = enumerate_diagonals(params)
    n = len(diags)
    if n > BRUTE_FORCE_LIMIT:
        raise CapacityError(f"{n} diagonals is too many for a full subset table")
    index = {u: i for i, u in enumerate(diags)}
    subsets = np.arange(1 << n, dtype=np.int64)
    ok = np.ones(1 << n, dtype=bool)
    for i, a in enumerate(diags):
        for j in range(i + 1, n):
            b = diags[j]
            if not _crossing(a, b):
                continue
            need = sum(1 << index[u] for u in _connectors(a, b, params))
            both = ((subsets >> i) & 1).astype(bool) & ((subsets >> j) & 1).astype(bool)
            ok &= ~both | ((subsets & need) == need)
    return ok


# --------------------------------------------------------------------------
# agreement of the pair characterisations


def _conditions(table: np.ndarray, xs: np.ndarray, ys: np.ndarray):
    nc_x, nc_y = table[xs], table[ys]
    c2 = (xs == nc_y) & (ys == nc_x)
    c4 = (ys == nc_x) & (xs == table[nc_x])
    c5 = (xs == nc_y) & (ys == table[nc_y])
    c2_swapped = (ys == nc_x) & (xs == nc_y)
    return c2, c4, c5, c2_swapped


def check_theorem_3_14(model: HomModel) -> Report:
    """Check that the three nc characterisations of weak cotorsion pairs agree.

    Every subset pair ``(X, Y)`` is covered.  Small models are evaluated on
    the full grid; larger ones only on pairs with ``Y = nc X`` or
    ``X = nc Y``, since every condition implies one of these.
    """
    n = model.size
    if n > THEOREM_3_14_LIMIT:
        raise CapacityError(f"the equivalence check is limited to {THEOREM_3_14_LIMIT} objects")
    table = nc_table(model).astype(np.int64)
    size = 1 << n
    if n <= THEOREM_3_14_GRID_LIMIT:
        xs = np.repeat(np.arange(size, dtype=np.int64), size)
        ys = np.tile(np.arange(size, dtype=np.int64), size)
    else:
        all_sets = np.arange(size, dtype=np.int64)
        xs = np.concatenate([all_sets, table])
        ys = np.concatenate([table, all_sets])
        order = np.lexsort((ys, xs))
        xs, ys = xs[order], ys[order]
    c2, c4, c5, c2_swapped = _conditions(table, xs, ys)
    bad = (c2 != c4) | (c2 != c5) | (c2 != c2_swapped)
    counterexample = None
    if bad.any():
        k = int(np.flatnonzero(bad)[0])
        fmt = model.format_object
        counterexample = {
            "x": [fmt(o) for o in model.ordered(model.unmask(int(xs[k])))],
            "y": [fmt(o) for o in model.ordered(model.unmask(int(ys[k])))],
            "conditions": {
                "2": bool(c2[k]),
                "4": bool(c4[k]),
                "5": bool(c5[k]),
                "2_swapped": bool(c2_swapped[k]),
            },
        }
    return Report("3.14", size * size, counterexample is None, counterexample)
