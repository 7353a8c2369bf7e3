"""Mutation of subcategories relative to a rigid subcategory ``D``.

Two regimes have a concrete combinatorial rule:

* ``D = 0`` in any model: forward mutation is the shift, backward its inverse.
* ``d = 1`` type-A models with ``D`` a set of non-crossing diagonals: cut the
  polygon along ``D``; every diagonal of ``nc(D)`` outside ``D`` lives in
  exactly one cell and mutates by rotating inside that cell.

Anything else raises :class:`UnsupportedError`.
"""
from __future__ import annotations

import enum
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import numpy as np

from angulator._bits import iter_bits, submasks, union_table
from angulator.errors import (
    CapacityError,
    DomainError,
    HypothesisError,
    PreconditionError,
    UnsupportedError,
)
from angulator.model import Diagonal, HomModel, TypeAModel, intertwines
from angulator.pairs import (
    BRUTE_FORCE_LIMIT,
    Report,
    closed_masks_next_closure,
)


class Direction(enum.Enum):
    FORWARD = "fwd"
    BACKWARD = "bwd"

    @property
    def steps(self) -> int:
        return 1 if self is Direction.FORWARD else -1


@dataclass(frozen=True)
class CellDecomposition:
    cells: tuple[tuple[int, ...], ...]

    def cell_of(self, u) -> int:
        """Index of the unique cell having ``u`` as an internal diagonal."""
        a, b = u
        for k, cell in enumerate(self.cells):
            if a in cell and b in cell:
                i, j = cell.index(a), cell.index(b)
                if (j - i) % len(cell) not in (1, len(cell) - 1):
                    return k
        raise DomainError(f"{Diagonal(u)} is not a diagonal of any cell")


def polygon_cells(m: int, chords: Iterable) -> CellDecomposition:
    """Cut the ``m``-gon along pairwise non-crossing ``chords``.

    Cells list their vertices ascending and are ordered by smallest vertex,
    then by length.
    """
    cells = [tuple(range(1, m + 1))]
    for a, b in sorted(tuple(c) for c in chords):
        for k, cell in enumerate(cells):
            if a in cell and b in cell:
                i, j = cell.index(a), cell.index(b)
                if j - i in (1, len(cell) - 1):
                    raise PreconditionError(f"{a}-{b} repeats an existing edge or chord")
                cells[k : k + 1] = [cell[i : j + 1], cell[: i + 1] + cell[j:]]
                break
        else:
            raise PreconditionError(f"chord {a}-{b} crosses another chord")
    return CellDecomposition(tuple(sorted(cells, key=lambda c: (c[0], len(c), c))))


@dataclass(frozen=True)
class MutationContext:
    model: HomModel
    dset: frozenset
    z: frozenset
    dmask: int = field(repr=False)
    zmask: int = field(repr=False)

    @property
    def is_polygon(self) -> bool:
        return isinstance(self.model, TypeAModel) and self.model.d == 1

    @cached_property
    def _maps(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Forward and backward images of every object index in ``z`` (else -1)."""
        model = self.model
        n = model.size
        fwd, bwd = [-1] * n, [-1] * n
        if not self.dset:
            for i in range(n):
                fwd[i] = model._shift_index(i, 1)
                bwd[i] = model._shift_index(i, -1)
            return tuple(fwd), tuple(bwd)
        if not self.is_polygon:
            raise UnsupportedError(
                "mutation with nonzero D is only realised for d = 1 polygon models; "
                "no diagonal-level rule is known for d >= 2"
            )
        decomposition = cells(self)
        for i in iter_bits(self.zmask):
            u = model.objects[i]
            if self.dmask >> i & 1:
                fwd[i] = bwd[i] = i
                continue
            cell = decomposition.cells[decomposition.cell_of(u)]
            fwd[i] = model.index(_rotate_in_cell(u, cell, -1))
            bwd[i] = model.index(_rotate_in_cell(u, cell, 1))
        return tuple(fwd), tuple(bwd)

    def element_map(self, direction: Direction) -> tuple[int, ...]:
        fwd, bwd = self._maps
        return fwd if Direction(direction) is Direction.FORWARD else bwd

    def mutate_mask(self, mask: int, direction: Direction) -> int:
        if self.dmask & ~mask or mask & ~self.zmask:
            raise PreconditionError("mutation needs D ⊆ S ⊆ nc(D)")
        images = self.element_map(direction)
        out = self.dmask
        for i in iter_bits(mask):
            out |= 1 << images[i]
        return out


def _rotate_in_cell(u, cell: tuple[int, ...], step: int) -> Diagonal:
    k = len(cell)
    return Diagonal(sorted(cell[(cell.index(v) + step) % k] for v in u))


def make_context(model: HomModel, dset: Iterable) -> MutationContext:
    dset = frozenset(dset)
    dmask = model.mask(dset)
    if any(model.ext_masks[i] & dmask for i in iter_bits(dmask)):
        raise PreconditionError("D must be rigid")
    n = model.size
    # ⊥(Σ^d D): Hom(X, Σ^d D) = 0
    left = sum(1 << x for x in range(n) if not any(model._ext_index(x, j) for j in iter_bits(dmask)))
    # (Σ^{-d} D)^⊥: Hom(Σ^{-d} D, Y) = ext(Σ^{-d} D, Σ^{-d} Y) = 0
    back = [model._shift_index(i, -1) for i in range(n)]
    right = sum(
        1 << y
        for y in range(n)
        if not any(model._ext_index(back[j], back[y]) for j in iter_bits(dmask))
    )
    if left != right:
        raise HypothesisError("the left and right perpendicular categories of D differ")
    zmask = model.nc_mask(dmask)
    return MutationContext(model, dset, model.unmask(zmask), dmask, zmask)


def mutate_set_zero(s: Iterable, model: HomModel, direction: Direction) -> frozenset:
    """Σ^d S (forward) or Σ^{-d} S (backward)."""
    steps = Direction(direction).steps
    return frozenset(model.shift(x, steps) for x in s)


def _require_polygon(ctx: MutationContext):
    if not ctx.is_polygon:
        raise UnsupportedError("cell decompositions exist only for d = 1 polygon models")


def cells(ctx: MutationContext) -> CellDecomposition:
    _require_polygon(ctx)
    return polygon_cells(ctx.model.params.m, ctx.dset)


def mutate_diagonal_d1(u, ctx: MutationContext, direction: Direction) -> Diagonal:
    _require_polygon(ctx)
    u = Diagonal(u)
    if u not in ctx.z:
        raise DomainError(f"{u} does not lie in nc(D)")
    if u in ctx.dset:
        return u
    decomposition = cells(ctx)
    cell = decomposition.cells[decomposition.cell_of(u)]
    step = -1 if Direction(direction) is Direction.FORWARD else 1
    return _rotate_in_cell(u, cell, step)


def mutate_set(s: Iterable, ctx: MutationContext, direction: Direction) -> frozenset:
    return ctx.model.unmask(ctx.mutate_mask(ctx.model.mask(s), direction))


# --------------------------------------------------------------------------
# theorem checks


def _fmt(model: HomModel, mask: int) -> list[str]:
    return [model.format_object(o) for o in model.ordered(model.unmask(mask))]


def _check_pairs(model: HomModel, pairs: list[tuple[int, int]], mode: str, dmask_only: int | None):
    """Check a batch of pairs; returns (instances, failures)."""
    contexts: dict[int, MutationContext] = {}
    instances = 0
    failures = []
    for xm, ym in pairs:
        core = xm & ym
        if dmask_only is not None:
            if dmask_only & ~core:
                continue
            dmasks = [dmask_only]
        elif mode == "all-cores":
            dmasks = list(submasks(core))
        else:
            dmasks = [0]
        for dm in dmasks:
            ctx = contexts.get(dm)
            if ctx is None:
                ctx = contexts[dm] = make_context(model, model.unmask(dm))
            for direction in Direction:
                instances += 1
                x2 = ctx.mutate_mask(xm, direction)
                y2 = ctx.mutate_mask(ym, direction)
                core2 = ctx.mutate_mask(core, direction)
                ok = model.nc_mask(x2) == y2 and model.nc_mask(y2) == x2 and x2 & y2 == core2
                if not ok:
                    failures.append((xm, ym, dm, direction.value))
    return instances, failures


def _worker_count(workers: int | None) -> int:
    if workers is not None:
        return max(1, workers)
    env = os.environ.get("ANGULATOR_THREADS")
    return int(env) if env and env.isdigit() and int(env) > 0 else 1


def check_theorem_4_13(
    model: HomModel,
    exhaustive: bool = True,
    dset: Iterable | None = None,
    workers: int | None = None,
) -> Report:
    """Mutate every weak cotorsion pair along every supported ``D`` inside its core.

    Checks that both mutated pairs are weak cotorsion pairs again and that
    the core of the mutated pair is the mutated core.  With ``dset`` given,
    only that ``D`` is used (pairs whose core misses it are skipped).
    Otherwise every subset of the core is used for polygon models when
    ``exhaustive`` is set, and ``D = 0`` everywhere else.
    """
    if model.size > BRUTE_FORCE_LIMIT:
        raise CapacityError(f"theorem checks are limited to {BRUTE_FORCE_LIMIT} objects")
    dmask_only = None
    if dset is not None:
        dmask_only = model.mask(dset)
        make_context(model, dset)._maps  # fail early on unsupported regimes
    polygon = isinstance(model, TypeAModel) and model.d == 1
    mode = "all-cores" if exhaustive and polygon else "zero"
    pairs = [(xm, model.nc_mask(xm)) for xm in closed_masks_next_closure(model)]
    workers = _worker_count(workers)
    if workers > 1 and len(pairs) > 1:
        chunks = [pairs[k::workers] for k in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(
                pool.map(_check_pairs, [model] * workers, chunks, [mode] * workers, [dmask_only] * workers)
            )
    else:
        results = [_check_pairs(model, pairs, mode, dmask_only)]
    instances = sum(r[0] for r in results)
    failures = sorted(
        (f for r in results for f in r[1]),
        key=lambda f: (list(iter_bits(f[0])), list(iter_bits(f[1])), list(iter_bits(f[2])), f[3]),
    )
    counterexample = None
    if failures:
        xm, ym, dm, direction = failures[0]
        counterexample = {
            "x": _fmt(model, xm),
            "y": _fmt(model, ym),
            "dset": _fmt(model, dm),
            "direction": direction,
        }
    return Report("4.13", instances, not failures, counterexample)


def check_prop_4_12(ctx: MutationContext) -> Report:
    """Forward and backward mutation are inverse on every S with D ⊆ S ⊆ nc(D)."""
    model = ctx.model
    free = list(iter_bits(ctx.zmask & ~ctx.dmask))
    if len(free) > BRUTE_FORCE_LIMIT:
        raise CapacityError(f"too many free objects ({len(free)}) for the exhaustive check")
    fwd = ctx.element_map(Direction.FORWARD)
    bwd = ctx.element_map(Direction.BACKWARD)
    dtype = np.int64
    d = dtype(ctx.dmask)
    sets = d | union_table([1 << i for i in free], dtype)

    def image_table(images):
        return d | union_table([1 << images[i] for i in free], dtype)

    def compress(masks):
        # position of each free object inside the free-index space
        out = np.zeros_like(masks)
        for j, i in enumerate(free):
            out |= ((masks >> i) & 1) << j
        return out

    first_f, first_b = image_table(fwd), image_table(bwd)
    ok = ((first_f & ~dtype(ctx.zmask)) == 0) & ((first_b & ~dtype(ctx.zmask)) == 0)
    round_fb = image_table(bwd)[compress(first_f)]
    round_bf = image_table(fwd)[compress(first_b)]
    ok &= (round_fb == sets) & (round_bf == sets)
    counterexample = None
    if not ok.all():
        k = int(np.flatnonzero(~ok)[0])
        counterexample = {"dset": _fmt(model, ctx.dmask), "s": _fmt(model, int(sets[k]))}
    return Report("4.12", len(sets), counterexample is None, counterexample)


def non_crossing_sets(model: TypeAModel) -> list[frozenset]:
    """All rigid subsets of a polygon model (partial triangulations)."""
    n = model.size
    out = []

    def grow(start: int, mask: int):
        out.append(mask)
        for i in range(start, n):
            if not model.conflict_masks[i] & (mask | 1 << i):
                grow(i + 1, mask | 1 << i)

    grow(0, 0)
    return [model.unmask(m) for m in out]


def is_non_crossing(dset: Iterable) -> bool:
    ds = [tuple(u) for u in dset]
    return not any(
        intertwines(a, b) or intertwines(b, a) for i, a in enumerate(ds) for b in ds[i + 1 :]
    )
