"""Type-A diagonal models and explicit ext-table models.

A type-A model with parameters ``(n, d)`` has one indecomposable object for
every increasing ``(d+1)``-tuple of vertices of the ``m``-gon,
``m = n + 2d + 1``, whose consecutive entries differ by at least two (and
whose last entry sits at least two steps before the first, going around).
Two objects have a nonvanishing shifted Hom exactly when one intertwines the
other.

Explicit models carry the same information as a dense boolean table and a
shift permutation, which is enough for all of the pair calculus.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Hashable, Iterable, Sequence

from angulator._bits import iter_bits
from angulator.errors import (
    ArityError,
    DomainError,
    GapConditionError,
    MalformedDiagonalError,
    UnknownObjectError,
)

# A finite set of objects of one model.  Canonical order comes from the model.
DiagonalSet = frozenset


@dataclass(frozen=True)
class ModelParams:
    n: int
    d: int
    m: int

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise DomainError(f"need n >= 1 and d >= 1, got n={self.n}, d={self.d}")
        if self.m != self.n + 2 * self.d + 1:
            raise DomainError(f"m must equal n + 2d + 1 = {self.n + 2 * self.d + 1}, got {self.m}")


def make_params(n: int, d: int) -> ModelParams:
    if not (isinstance(n, int) and isinstance(d, int)) or n < 1 or d < 1:
        raise DomainError(f"need integers n >= 1 and d >= 1, got n={n!r}, d={d!r}")
    return ModelParams(n, d, n + 2 * d + 1)


class Diagonal(tuple):
    """An increasing vertex tuple; compares and hashes like the plain tuple."""

    __slots__ = ()

    def __new__(cls, vertices: Iterable[int]):
        return super().__new__(cls, (int(v) for v in vertices))

    def __repr__(self):
        return f"Diagonal({format_diagonal(self)})"

    def __str__(self):
        return format_diagonal(self)


def is_diagonal(vertices: Sequence[int], params: ModelParams) -> bool:
    if len(vertices) != params.d + 1:
        return False
    if any(v < 1 or v > params.m for v in vertices):
        return False
    if any(a + 2 > b for a, b in zip(vertices, vertices[1:])):
        return False
    return vertices[-1] + 2 <= vertices[0] + params.m


@lru_cache(maxsize=None)
def _diagonals(params: ModelParams) -> tuple[Diagonal, ...]:
    d, m = params.d, params.m
    out = []

    # the remaining vertices need two steps each, ending by i_0 + m - 2
    def extend(prefix):
        k = len(prefix)
        if k == d + 1:
            out.append(Diagonal(prefix))
            return
        if not prefix:
            start, stop = 1, m
        else:
            start, stop = prefix[-1] + 2, min(m, prefix[0] + m - 2 - 2 * (d - k))
        for v in range(start, stop + 1):
            extend(prefix + [v])

    extend([])
    return tuple(out)


def enumerate_diagonals(params: ModelParams) -> list[Diagonal]:
    """All diagonals of the model, lexicographically sorted."""
    return list(_diagonals(params))


def intertwines(x: Sequence[int], y: Sequence[int]) -> bool:
    """True iff ``x_0 < y_0 < x_1 < y_1 < ... < x_d < y_d``."""
    if len(x) != len(y):
        raise DomainError("diagonals of different arity")
    prev = None
    for a, b in zip(x, y):
        if prev is not None and not prev < a:
            return False
        if not a < b:
            return False
        prev = b
    return True


# --------------------------------------------------------------------------
# text forms


_DIGITS = re.compile(r"^\d+$")


def format_diagonal(diagonal: Sequence[int]) -> str:
    return "-".join(str(v) for v in diagonal)


def parse_diagonal(text: str, params: ModelParams) -> Diagonal:
    s = text.strip()
    if not s:
        raise MalformedDiagonalError("empty diagonal")
    if "-" in s:
        parts = s.split("-")
        if not all(_DIGITS.match(p.strip()) for p in parts):
            raise MalformedDiagonalError(f"malformed diagonal {text!r}")
        vertices = [int(p) for p in parts]
    elif _DIGITS.match(s):
        if params.m > 9:
            raise MalformedDiagonalError(
                f"concatenated form {text!r} is ambiguous for m = {params.m}; use dashes"
            )
        vertices = [int(c) for c in s]
    else:
        raise MalformedDiagonalError(f"malformed diagonal {text!r}")
    if len(vertices) != params.d + 1:
        raise ArityError(f"{text!r} has {len(vertices)} vertices, expected {params.d + 1}")
    if any(v < 1 or v > params.m for v in vertices):
        raise GapConditionError(f"{text!r}: vertices must lie in 1..{params.m}")
    for a, b in zip(vertices, vertices[1:]):
        if a + 2 > b:
            raise GapConditionError(f"{text!r} violates i_x + 2 <= i_(x+1) at {a}, {b}")
    if vertices[-1] + 2 > vertices[0] + params.m:
        raise GapConditionError(
            f"{text!r} violates i_d + 2 <= i_0 + m ({vertices[-1]} + 2 > {vertices[0]} + {params.m})"
        )
    return Diagonal(vertices)


# --------------------------------------------------------------------------
# models


class HomModel:
    """Common query surface of the type-A and explicit models.

    Subclasses provide ``objects``, ``d``, ``_ext_index`` and
    ``_shift_index``; everything else is derived.  Sets of objects are also
    handled as bitmasks over ``objects`` (see :mod:`angulator._bits`).
    """

    objects: tuple
    d: int

    @cached_property
    def _index(self) -> dict:
        return {obj: i for i, obj in enumerate(self.objects)}

    @property
    def size(self) -> int:
        return len(self.objects)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.objects)) - 1

    def index(self, obj: Hashable) -> int:
        try:
            return self._index[obj]
        except (KeyError, TypeError):
            raise UnknownObjectError(f"{obj!s} is not an object of this model") from None

    def ext(self, x, y) -> bool:
        return self._ext_index(self.index(x), self.index(y))

    def shift(self, x, steps: int = 1):
        return self.objects[self._shift_index(self.index(x), steps)]

    def hom_nonzero(self, x, y) -> bool:
        return self.ext(x, self.shift(y, -1))

    @cached_property
    def ext_masks(self) -> tuple[int, ...]:
        """``ext_masks[i]`` has bit ``j`` set iff ext(object i, object j)."""
        n = len(self.objects)
        return tuple(
            sum(1 << j for j in range(n) if self._ext_index(i, j)) for i in range(n)
        )

    @cached_property
    def conflict_masks(self) -> tuple[int, ...]:
        """ext in either direction, per object."""
        out = list(self.ext_masks)
        for i, row in enumerate(self.ext_masks):
            for j in iter_bits(row):
                out[j] |= 1 << i
        return tuple(out)

    @cached_property
    def shift_table(self) -> tuple[int, ...]:
        return tuple(self._shift_index(i, 1) for i in range(len(self.objects)))

    def mask(self, objs: Iterable) -> int:
        out = 0
        for obj in objs:
            out |= 1 << self.index(obj)
        return out

    def unmask(self, mask: int) -> frozenset:
        return frozenset(self.objects[i] for i in iter_bits(mask))

    def ordered(self, objs: Iterable) -> list:
        """Objects of ``objs`` in canonical model order."""
        return sorted(objs, key=self.index)

    def nc_mask(self, mask: int) -> int:
        blocked = 0
        for i in iter_bits(mask):
            blocked |= self.conflict_masks[i]
        return self.full_mask & ~blocked

    def format_object(self, obj) -> str:
        raise NotImplementedError

    def parse_object(self, text: str):
        raise NotImplementedError

    def format_set(self, objs: Iterable) -> str:
        return ",".join(self.format_object(o) for o in self.ordered(objs))

    def parse_set(self, text: str) -> frozenset:
        """Comma-separated objects; whitespace is ignored and blank means empty."""
        s = "".join(text.split())
        if not s:
            return frozenset()
        return frozenset(self.parse_object(part) for part in s.split(","))

    def describe(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True, eq=True)
class TypeAModel(HomModel):
    params: ModelParams

    @property
    def d(self) -> int:
        return self.params.d

    @cached_property
    def objects(self) -> tuple[Diagonal, ...]:
        return _diagonals(self.params)

    def _ext_index(self, i: int, j: int) -> bool:
        x, y = self.objects[i], self.objects[j]
        return intertwines(x, y) or intertwines(y, x)

    def _shift_index(self, i: int, steps: int) -> int:
        return self._index[rotate(self.objects[i], steps, self.params.m)]

    def shift(self, x, steps: int = 1) -> Diagonal:
        self.index(x)
        return rotate(x, steps, self.params.m)

    def format_object(self, obj) -> str:
        return format_diagonal(obj)

    def parse_object(self, text: str) -> Diagonal:
        return parse_diagonal(text, self.params)

    def describe(self) -> dict:
        return {"n": self.params.n, "d": self.params.d}


def rotate(diagonal: Sequence[int], steps: int, m: int) -> Diagonal:
    """Subtract ``steps`` from every vertex mod ``m`` (representatives 1..m), re-sorted."""
    return Diagonal(sorted((v - 1 - steps) % m + 1 for v in diagonal))


def type_a(n: int, d: int) -> TypeAModel:
    return TypeAModel(make_params(n, d))


@dataclass(frozen=True, eq=True)
class ExplicitModel(HomModel):
    """A finite model given by labels, an ext table and the shift permutation.

    ``ext_table[i][j]`` is whether Hom(objects[i], shift(objects[j])) is
    nonzero; ``shift_perm[i]`` is the index of the shift of ``objects[i]``.
    """

    objects: tuple[str, ...]
    ext_table: tuple[tuple[bool, ...], ...]
    shift_perm: tuple[int, ...]
    d: int
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        objs = tuple(str(o) for o in self.objects)
        table = tuple(tuple(bool(v) for v in row) for row in self.ext_table)
        perm = tuple(int(v) for v in self.shift_perm)
        object.__setattr__(self, "objects", objs)
        object.__setattr__(self, "ext_table", table)
        object.__setattr__(self, "shift_perm", perm)
        n = len(objs)
        if len(set(objs)) != n:
            raise DomainError("object labels must be unique")
        if any("," in o or not o.strip() or o != o.strip() for o in objs):
            raise DomainError("object labels must be non-blank, unpadded and comma-free")
        if len(table) != n or any(len(row) != n for row in table):
            raise DomainError(f"ext table must be {n} x {n}")
        if sorted(perm) != list(range(n)):
            raise DomainError("shift must be a permutation of the object indices")
        if not isinstance(self.d, int) or self.d < 1:
            raise DomainError("d must be a positive integer")

    @cached_property
    def _inverse_perm(self) -> tuple[int, ...]:
        inv = [0] * len(self.shift_perm)
        for i, j in enumerate(self.shift_perm):
            inv[j] = i
        return tuple(inv)

    def _ext_index(self, i: int, j: int) -> bool:
        return self.ext_table[i][j]

    def _shift_index(self, i: int, steps: int) -> int:
        perm = self.shift_perm if steps >= 0 else self._inverse_perm
        return _apply_power(perm, i, abs(steps))

    def format_object(self, obj) -> str:
        return str(obj)

    def parse_object(self, text: str) -> str:
        label = text.strip()
        self.index(label)
        return label

    def describe(self) -> dict:
        if self.name:
            return {"fixture": self.name}
        return {"explicit": {"d": self.d, "objects": list(self.objects)}}

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "objects": list(self.objects),
            "ext": [list(row) for row in self.ext_table],
            "shift": list(self.shift_perm),
        }

    @classmethod
    def from_json(cls, data: dict, name: str | None = None) -> "ExplicitModel":
        if not isinstance(data, dict):
            raise DomainError("model file must hold a JSON object")
        missing = {"d", "objects", "ext", "shift"} - set(data)
        if missing:
            raise DomainError(f"model file lacks keys: {', '.join(sorted(missing))}")
        d, objects, ext_rows, shift = data["d"], data["objects"], data["ext"], data["shift"]
        if not isinstance(d, int) or isinstance(d, bool):
            raise DomainError("'d' must be an integer")
        if not isinstance(objects, list) or not all(isinstance(o, str) for o in objects):
            raise DomainError("'objects' must be a list of strings")
        if not isinstance(ext_rows, list) or not all(
            isinstance(row, list) and all(isinstance(v, bool) for v in row) for row in ext_rows
        ):
            raise DomainError("'ext' must be a list of lists of true/false")
        if not isinstance(shift, list) or not all(
            isinstance(v, int) and not isinstance(v, bool) for v in shift
        ):
            raise DomainError("'shift' must be a list of integers")
        if len(shift) != len(objects):
            raise DomainError("'shift' must have one entry per object")
        return cls(tuple(objects), tuple(map(tuple, ext_rows)), tuple(shift), d, name=name)


def _apply_power(perm: Sequence[int], i: int, k: int) -> int:
    # orbit of i is a cycle; reduce k modulo its length
    orbit = [i]
    j = perm[i]
    while j != i:
        orbit.append(j)
        j = perm[j]
    return orbit[k % len(orbit)]


def load_explicit_model(path, name: str | None = None) -> ExplicitModel:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DomainError(f"{path}: invalid JSON ({exc.msg})") from None
    return ExplicitModel.from_json(data, name=name)


def dump_explicit_model(model: ExplicitModel) -> str:
    return json.dumps(model.to_json())


def verify_symmetry(model: HomModel) -> bool:
    """Whether ext(X, Y) == ext(Y, X) for all object pairs."""
    n = model.size
    return all(
        model._ext_index(i, j) == model._ext_index(j, i) for i in range(n) for j in range(i + 1, n)
    )


def verify_shift_equivariance(model: HomModel) -> bool:
    n = model.size
    s = model.shift_table
    return all(
        model._ext_index(s[i], s[j]) == model._ext_index(i, j) for i in range(n) for j in range(n)
    )


# --------------------------------------------------------------------------
# module-level query API


def ext(x, y, model: HomModel) -> bool:
    """Whether Hom(x, Σ^d y) is nonzero."""
    return model.ext(x, y)


def shift(x, model: HomModel, steps: int = 1):
    """Apply Σ^d ``steps`` times (negative steps apply the inverse)."""
    return model.shift(x, steps)


def hom_nonzero(x, y, model: HomModel) -> bool:
    return model.hom_nonzero(x, y)


# --------------------------------------------------------------------------
# fixtures


def _hexagon_crossing(a: tuple[int, int], b: tuple[int, int]) -> bool:
    return intertwines(a, b) or intertwines(b, a)


def fixture_example_3_10() -> ExplicitModel:
    """The 4-angulated category add(13 ⊕ 15 ⊕ 35) inside the hexagon cluster category.

    Hom(a, b[2]) is nonzero iff ``a`` crosses ``b[1]``, and ``[1]`` rotates
    hexagon arcs one vertex backwards; ``[2]`` permutes the three arcs
    13 -> 15 -> 35 -> 13.
    """
    labels = ("13", "15", "35")
    arcs = [tuple(int(c) for c in lab) for lab in labels]
    table = tuple(
        tuple(_hexagon_crossing(a, tuple(rotate(b, 1, 6))) for b in arcs) for a in arcs
    )
    perm = tuple(arcs.index(tuple(rotate(a, 2, 6))) for a in arcs)
    return ExplicitModel(labels, table, perm, 2, name="example-3-10")


FIXTURES = {"example-3-10": fixture_example_3_10}


def load_fixture(name: str) -> ExplicitModel:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise DomainError(
            f"unknown fixture {name!r}; available: {', '.join(sorted(FIXTURES))}"
        ) from None
