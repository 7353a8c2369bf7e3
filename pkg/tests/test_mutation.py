import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from angulator.errors import (
    CapacityError,
    DomainError,
    HypothesisError,
    PreconditionError,
    UnsupportedError,
)
from angulator.model import ExplicitModel, intertwines, type_a
from angulator.mutation import (
    Direction,
    cells,
    check_prop_4_12,
    check_theorem_4_13,
    make_context,
    mutate_diagonal_d1,
    mutate_set,
    mutate_set_zero,
    non_crossing_sets,
    polygon_cells,
)
from angulator.pairs import enumerate_weak_cotorsion_pairs, is_weak_cotorsion, nc
from reference_tables import ROWS_2_2, diags

FWD, BWD = Direction.FORWARD, Direction.BACKWARD


def crossing(a, b):
    return intertwines(a, b) or intertwines(b, a)


# --------------------------------------------------------------------------
# contexts


def test_context_examples(a22, a23):
    ctx = make_context(a22, diags(["135"]))
    assert ctx.z == diags(["135", "136", "146", "257", "357"])
    assert make_context(a22, frozenset()).z == frozenset(a22.objects)
    d = diags(["1357", "1358"])
    ctx = make_context(a23, d)
    brute = frozenset(u for u in a23.objects if not any(crossing(u, v) for v in d))
    assert ctx.z == brute
    assert d <= ctx.z


def test_context_rejects_non_rigid(a22):
    with pytest.raises(PreconditionError):
        make_context(a22, diags(["135", "246"]))


def test_context_rejects_one_sided_perpendiculars():
    # ext(a, c) only: ⊥(Σ D) and (Σ^{-1} D)^⊥ differ for D = {c}
    model = ExplicitModel(
        ("a", "b", "c"),
        ((False, False, True), (False, False, False), (False, False, False)),
        (0, 1, 2),
        1,
    )
    with pytest.raises(HypothesisError):
        make_context(model, {"c"})


# --------------------------------------------------------------------------
# D = 0


def test_zero_mutation_examples(a22):
    assert mutate_set_zero(diags(["135"]), a22, FWD) == diags(["247"])
    assert mutate_set_zero(diags(["135", "136", "146"]), a22, FWD) == diags(["247", "257", "357"])


@settings(max_examples=100)
@given(st.sets(st.sampled_from(type_a(2, 3).objects)))
def test_zero_mutation_roundtrip(s):
    model = type_a(2, 3)
    assert mutate_set_zero(mutate_set_zero(s, model, FWD), model, BWD) == s


@pytest.mark.parametrize("n, d", [(2, 2), (2, 3), (3, 1)])
def test_zero_mutation_preserves_pair_relation(n, d):
    model = type_a(n, d)
    objs = model.objects
    for r in range(len(objs) + 1):
        for x in itertools.combinations(objs, r):
            x = frozenset(x)
            y = nc(x, model)
            for candidate in (y, y - {objs[0]}):
                before = is_weak_cotorsion(x, candidate, model)
                after = is_weak_cotorsion(
                    mutate_set_zero(x, model, FWD), mutate_set_zero(candidate, model, FWD), model
                )
                assert before == after


def test_mutate_set_zero_via_context(a22):
    ctx = make_context(a22, frozenset())
    assert mutate_set(diags(["135"]), ctx, FWD) == diags(["247"])


def test_zero_mutation_on_fixture(fixture310):
    assert mutate_set_zero({"13"}, fixture310, FWD) == {"15"}
    assert mutate_set_zero({"13"}, fixture310, BWD) == {"35"}


# --------------------------------------------------------------------------
# cells


def test_cell_examples(hexagon):
    assert cells(make_context(hexagon, {(1, 3)})).cells == ((1, 2, 3), (1, 3, 4, 5, 6))
    assert cells(make_context(hexagon, frozenset())).cells == ((1, 2, 3, 4, 5, 6),)
    got = cells(make_context(hexagon, {(1, 3), (3, 5)})).cells
    assert got == ((1, 2, 3), (1, 3, 5, 6), (3, 4, 5))


def test_cells_need_d1(a22):
    with pytest.raises(UnsupportedError):
        cells(make_context(a22, frozenset()))


def test_polygon_cells_rejects_crossing():
    with pytest.raises(PreconditionError):
        polygon_cells(6, [(1, 4), (2, 5)])


def _cell_diagonals(cell):
    k = len(cell)
    return {
        (cell[i], cell[j]) for i in range(k) for j in range(i + 2, k) if not (i == 0 and j == k - 1)
    }


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_cells_partition_z_minus_d(n):
    """Each diagonal of nc(D) \\ D is internal to exactly one cell, and nothing else is."""
    model = type_a(n, 1)
    m = model.params.m
    for dset in non_crossing_sets(model):
        ctx = make_context(model, dset)
        decomposition = cells(ctx)
        assert sum(len(c) - 2 for c in decomposition.cells) == m - 2  # triangle count
        inner = [_cell_diagonals(c) for c in decomposition.cells]
        flat = [u for group in inner for u in group]
        assert len(flat) == len(set(flat))
        assert set(flat) == set(ctx.z - ctx.dset)


# --------------------------------------------------------------------------
# d = 1 element mutation


def test_mutate_diagonal_examples(hexagon):
    ctx = make_context(hexagon, {(1, 3)})
    assert mutate_diagonal_d1((3, 5), ctx, FWD) == (1, 4)
    assert mutate_diagonal_d1((1, 4), ctx, BWD) == (3, 5)
    assert mutate_diagonal_d1((3, 5), ctx, BWD) == (4, 6)
    assert mutate_diagonal_d1((1, 3), ctx, FWD) == (1, 3)
    empty = make_context(hexagon, frozenset())
    assert mutate_diagonal_d1((3, 5), empty, FWD) == (2, 4)


def test_mutate_diagonal_errors(hexagon, a22):
    ctx = make_context(hexagon, {(1, 3)})
    with pytest.raises(DomainError):
        mutate_diagonal_d1((2, 4), ctx, FWD)
    with pytest.raises(UnsupportedError):
        mutate_diagonal_d1((1, 3, 5), make_context(a22, frozenset()), FWD)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_cell_rotation_output_is_in_z_minus_d(n):
    model = type_a(n, 1)
    for dset in non_crossing_sets(model):
        ctx = make_context(model, dset)
        free = ctx.z - ctx.dset
        for direction in Direction:
            images = [mutate_diagonal_d1(u, ctx, direction) for u in free]
            assert set(images) == free  # bijection of z \ D onto itself
        for u in free:
            assert mutate_diagonal_d1(mutate_diagonal_d1(u, ctx, FWD), ctx, BWD) == u


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_empty_d_cell_rotation_is_the_shift(n):
    model = type_a(n, 1)
    ctx = make_context(model, frozenset())
    for u in model.objects:
        for direction in Direction:
            assert {mutate_diagonal_d1(u, ctx, direction)} == mutate_set_zero({u}, model, direction)


# --------------------------------------------------------------------------
# set mutation


def test_mutate_set_examples(hexagon, a22):
    ctx = make_context(hexagon, {(1, 3)})
    assert mutate_set({(1, 3), (3, 5)}, ctx, FWD) == {(1, 3), (1, 4)}
    assert mutate_set({(1, 3)}, ctx, FWD) == {(1, 3)}
    assert mutate_set({(1, 3)}, ctx, BWD) == {(1, 3)}


def test_mutate_set_preconditions(hexagon, a22):
    ctx = make_context(hexagon, {(1, 3)})
    with pytest.raises(PreconditionError):
        mutate_set({(3, 5)}, ctx, FWD)  # misses D
    with pytest.raises(PreconditionError):
        mutate_set({(1, 3), (2, 4)}, ctx, FWD)  # leaves nc(D)
    with pytest.raises(UnsupportedError, match="d >= 2"):
        mutate_set(diags(["135"]), make_context(a22, diags(["135"])), FWD)


# --------------------------------------------------------------------------
# theorem checks


def test_prop_4_12_examples(hexagon, a22):
    report = check_prop_4_12(make_context(hexagon, {(1, 3)}))
    assert report.passed and report.instances_checked == 2**5
    report = check_prop_4_12(make_context(a22, frozenset()))
    assert report.passed and report.instances_checked == 2**7


def test_prop_4_12_detects_broken_maps(hexagon, monkeypatch):
    from angulator import mutation

    ctx = make_context(hexagon, {(1, 3)})
    real = mutation.MutationContext.element_map

    def identity_forward(self, direction):
        images = real(self, direction)
        return list(range(len(images))) if direction is FWD else images

    monkeypatch.setattr(mutation.MutationContext, "element_map", identity_forward)
    report = check_prop_4_12(ctx)
    assert not report.passed
    assert report.counterexample is not None


def test_theorem_4_13_zero_on_2_2(a22):
    report = check_theorem_4_13(a22)
    assert report.passed
    assert report.instances_checked == 51 * 2
    image = {
        (mutate_set_zero(p.x, a22, FWD), mutate_set_zero(p.y, a22, FWD))
        for p in enumerate_weak_cotorsion_pairs(a22)
    }
    assert image == {(p.x, p.y) for p in enumerate_weak_cotorsion_pairs(a22)}


def test_row_images(a22):
    x2, y2 = map(diags, ROWS_2_2[2])
    x6, y6 = map(diags, ROWS_2_2[6])
    assert (mutate_set_zero(x2, a22, FWD), mutate_set_zero(y2, a22, FWD)) == (x6, y6)
    assert y6 == diags(["146", "246", "247", "257", "357"])
    x23, _ = map(diags, ROWS_2_2[23])
    x27, _ = map(diags, ROWS_2_2[27])
    assert mutate_set_zero(x23, a22, FWD) == x27


def test_full_pair_maps_to_itself(a23):
    everything = frozenset(a23.objects)
    assert mutate_set_zero(everything, a23, FWD) == everything
    assert mutate_set_zero(frozenset(), a23, FWD) == frozenset()


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_theorem_4_13_polygons(n):
    assert check_theorem_4_13(type_a(n, 1)).passed


def test_theorem_4_13_single_d(hexagon):
    report = check_theorem_4_13(hexagon, dset={(1, 3)})
    assert report.passed
    pairs_over = [p for p in enumerate_weak_cotorsion_pairs(hexagon) if (1, 3) in p.core]
    assert report.instances_checked == 2 * len(pairs_over)


def test_theorem_4_13_fixture(fixture310):
    assert check_theorem_4_13(fixture310).passed


def test_theorem_4_13_unsupported_d(a22):
    with pytest.raises(UnsupportedError):
        check_theorem_4_13(a22, dset=diags(["135"]))


def test_theorem_4_13_capacity():
    with pytest.raises(CapacityError):
        check_theorem_4_13(type_a(6, 1))


def test_theorem_4_13_parallel_matches_serial():
    model = type_a(4, 1)
    assert check_theorem_4_13(model, workers=3) == check_theorem_4_13(model, workers=1)


def test_theorem_4_13_reports_first_failure(hexagon, monkeypatch):
    from angulator import mutation

    real = mutation.MutationContext.mutate_mask

    def skewed(self, mask, direction):
        out = real(self, mask, direction)
        return out if self.dmask else out ^ 1  # toggle the first object for D = 0

    monkeypatch.setattr(mutation.MutationContext, "mutate_mask", skewed)
    report = check_theorem_4_13(hexagon)
    assert not report.passed
    cx = report.counterexample
    assert set(cx) == {"x", "y", "dset", "direction"}
    assert cx["dset"] == [] and cx["direction"] in ("fwd", "bwd")
