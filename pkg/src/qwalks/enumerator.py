"""Exact enumeration of lattice walks with small steps.

This is the ground truth for everything else in the package: a layer-by-layer
dynamic programme over arbitrary-precision integers.  Layer ``n`` is a dense
``numpy`` object array indexed by the end point ``(i, j)``; a walk of length
``n`` is a walk of length ``n - 1`` plus one step that stays in the region.
"""
from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .poly import Poly
from .series import PolySeries, TruncSeries

COMPASS = {
    "N": (0, 1), "NE": (1, 1), "E": (1, 0), "SE": (1, -1),
    "S": (0, -1), "SW": (-1, -1), "W": (-1, 0), "NW": (-1, 1),
}


class StepSetError(ValueError):
    """Malformed step-set text; ``position`` is the offending character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class StepSet:
    steps: tuple[tuple[int, int], ...]
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        steps = tuple(sorted(tuple(s) for s in self.steps))
        if not steps:
            raise ValueError("a step set needs at least one step")
        if len(set(steps)) != len(steps):
            raise ValueError("duplicate step")
        for dx, dy in steps:
            if dx not in (-1, 0, 1) or dy not in (-1, 0, 1):
                raise ValueError(f"step {(dx, dy)} is not a unit step")
            if (dx, dy) == (0, 0):
                raise ValueError("the zero step is not allowed")
        object.__setattr__(self, "steps", steps)

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def label(self) -> str:
        return self.name or ";".join(f"({dx},{dy})" for dx, dy in self.steps)


SET_S = StepSet(((-1, 1), (1, 1), (1, -1)), "S")
SET_T = StepSet(((-1, 1), (0, 1), (1, -1)), "T")
PRESETS = {"S": SET_S, "T": SET_T}

_PAIR = re.compile(r"\(\s*([+-]?\d+)\s*,\s*([+-]?\d+)\s*\)")


def parse_step_set(text: str) -> StepSet:
    """Parse ``"S"``, ``"T"``, or a ``;``-separated list of pairs / compass names.

    A bare ``S`` or ``T`` means the preset; a lone south step is ``(0,-1)``.
    """
    stripped = text.strip()
    if stripped in PRESETS:
        return PRESETS[stripped]
    steps: list[tuple[int, int]] = []
    pos = 0
    for raw in text.split(";"):
        lead = len(raw) - len(raw.lstrip())
        tok = raw.strip()
        where = pos + lead
        pos += len(raw) + 1
        if not tok:
            raise StepSetError("empty token", where)
        m = _PAIR.fullmatch(tok)
        if m:
            step = (int(m.group(1)), int(m.group(2)))
            if step[0] not in (-1, 0, 1) or step[1] not in (-1, 0, 1):
                raise StepSetError(f"step {tok} is not a unit step", where)
            if step == (0, 0):
                raise StepSetError("the zero step is not allowed", where)
        elif tok.upper() in COMPASS:
            step = COMPASS[tok.upper()]
        else:
            raise StepSetError(f"malformed token {tok!r}", where)
        if step in steps:
            raise StepSetError(f"duplicate step {tok!r}", where)
        steps.append(step)
    if not steps:
        raise StepSetError("empty step set", 0)
    return StepSet(tuple(steps))


class Region(enum.Enum):
    QUARTER_PLANE = "QuarterPlane"
    HALF_PLANE_Y = "HalfPlaneY"
    UNRESTRICTED = "Unrestricted"

    def lower_bounds(self, n: int) -> tuple[int, int]:
        """Smallest reachable ``(i, j)`` after ``n`` unit steps."""
        if self is Region.QUARTER_PLANE:
            return 0, 0
        if self is Region.HALF_PLANE_Y:
            return -n, 0
        return -n, -n


class Axis(enum.Enum):
    X_AXIS = "X_axis"  # j = 0
    Y_AXIS = "Y_axis"  # i = 0


def _layers(steps: StepSet, region: Region, n_max: int) -> Iterator[np.ndarray]:
    prev = np.zeros((1, 1), dtype=object)
    prev[0, 0] = 1
    yield prev
    for n in range(1, n_max + 1):
        pil, pjl = region.lower_bounds(n - 1)
        il, jl = region.lower_bounds(n)
        cur = np.zeros((n - il + 1, n - jl + 1), dtype=object)
        pw, ph = prev.shape
        for dx, dy in steps.steps:
            # source index a (in prev) lands at a + pil + dx - il in cur
            ox, oy = pil + dx - il, pjl + dy - jl
            a0, a1 = max(0, -ox), min(pw, cur.shape[0] - ox)
            b0, b1 = max(0, -oy), min(ph, cur.shape[1] - oy)
            if a0 < a1 and b0 < b1:
                cur[a0 + ox:a1 + ox, b0 + oy:b1 + oy] += prev[a0:a1, b0:b1]
        yield cur
        prev = cur


class CountTable:
    """Counts ``c[n][i][j]`` of walks of length ``n`` ending at ``(i, j)``.

    Immutable after construction; use :meth:`replace` to derive a modified
    copy (fault injection in tests).
    """

    def __init__(self, steps: StepSet, region: Region, layers: list[np.ndarray]):
        self.steps = steps
        self.region = region
        self.n_max = len(layers) - 1
        self._layers = layers
        for layer in layers:
            layer.flags.writeable = False

    def layer(self, n: int) -> np.ndarray:
        self._check_n(n)
        return self._layers[n]

    def _check_n(self, n: int) -> None:
        if not 0 <= n <= self.n_max:
            raise IndexError(f"length {n} outside 0..{self.n_max}")

    def coefficient(self, n: int, i: int, j: int) -> int:
        self._check_n(n)
        il, jl = self.region.lower_bounds(n)
        a, b = i - il, j - jl
        layer = self._layers[n]
        if 0 <= a < layer.shape[0] and 0 <= b < layer.shape[1]:
            return int(layer[a, b])
        return 0

    def entries(self, n: int) -> Iterator[tuple[int, int, int]]:
        """Nonzero ``(i, j, count)`` of layer ``n`` in row-major order."""
        il, jl = self.region.lower_bounds(n)
        layer = self.layer(n)
        for a, b in zip(*np.nonzero(layer)):
            yield int(a) + il, int(b) + jl, int(layer[a, b])

    def replace(self, n: int, i: int, j: int, value: int) -> "CountTable":
        self._check_n(n)
        il, jl = self.region.lower_bounds(n)
        layers = list(self._layers)
        new = layers[n].copy()
        new.flags.writeable = True
        new[i - il, j - jl] = value
        layers[n] = new
        return CountTable(self.steps, self.region, layers)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CountTable):
            return NotImplemented
        return (self.steps == other.steps and self.region == other.region
                and self.n_max == other.n_max
                and all(np.array_equal(a, b) for a, b in zip(self._layers, other._layers)))

    def to_json(self) -> dict:
        rows = [{"n": n, "i": i, "j": j, "count": str(c)}
                for n in range(self.n_max + 1) for i, j, c in self.entries(n)]
        return {
            "steps": [list(s) for s in self.steps.steps],
            "name": self.steps.name,
            "region": self.region.value,
            "n_max": self.n_max,
            "rows": rows,
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "CountTable":
        if isinstance(data, str):
            data = json.loads(data)
        steps = StepSet(tuple(tuple(s) for s in data["steps"]), data.get("name"))
        region = Region(data["region"])
        layers = []
        for n in range(data["n_max"] + 1):
            il, jl = region.lower_bounds(n)
            layers.append(np.zeros((n - il + 1, n - jl + 1), dtype=object))
        for row in data["rows"]:
            n = row["n"]
            il, jl = region.lower_bounds(n)
            layers[n][row["i"] - il, row["j"] - jl] = int(row["count"])
        return cls(steps, region, layers)


def count_walks(steps: StepSet, region: Region, n_max: int) -> CountTable:
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    return CountTable(steps, region, list(_layers(steps, region, n_max)))


def iter_total_counts(steps: StepSet, region: Region, n_max: int) -> Iterator[int]:
    """Total number of walks of each length, without storing the table."""
    for layer in _layers(steps, region, n_max):
        yield int(layer.sum())


def coefficient(table: CountTable, n: int, i: int, j: int) -> int:
    return table.coefficient(n, i, j)


def series_W(table: CountTable) -> TruncSeries:
    """Counting series ``W(t) = Q(1, 1; t)`` to order ``n_max + 1``."""
    return TruncSeries([int(layer.sum()) for layer in table._layers], table.n_max + 1)


def series_boundary(table: CountTable, axis: Axis) -> TruncSeries:
    """``Q(1, 0; t)`` (X axis) or ``Q(0, 1; t)`` (Y axis) from the table."""
    out = []
    for n in range(table.n_max + 1):
        il, jl = table.region.lower_bounds(n)
        layer = table.layer(n)
        if axis is Axis.X_AXIS:
            out.append(int(layer[:, -jl].sum()) if -jl < layer.shape[1] else 0)
        else:
            out.append(int(layer[-il, :].sum()) if -il < layer.shape[0] else 0)
    return TruncSeries(out, table.n_max + 1)


def boundary_poly(table: CountTable, n: int, axis: Axis) -> Poly:
    """Coefficient of ``t^n`` in ``Q(x, 0)`` (X axis) or ``Q(0, y)`` (Y axis)."""
    il, jl = table.region.lower_bounds(n)
    layer = table.layer(n)
    if axis is Axis.X_AXIS:
        if il != 0 or not 0 <= -jl < layer.shape[1]:
            raise ValueError("boundary polynomials need a nonnegative x range")
        return Poly(int(v) for v in layer[:, -jl])
    if jl != 0 or not 0 <= -il < layer.shape[0]:
        raise ValueError("boundary polynomials need a nonnegative y range")
    return Poly(int(v) for v in layer[-il, :])


def series_boundary_poly(table: CountTable, axis: Axis) -> PolySeries:
    """``Q(x, 0; t)`` or ``Q(0, y; t)`` with the free variable kept symbolic."""
    return PolySeries([boundary_poly(table, n, axis) for n in range(table.n_max + 1)],
                      table.n_max + 1)


def series_line(table: CountTable, k: int) -> PolySeries:
    """Walks ending on ``x + y = k``; the coefficient of ``t^n`` is
    ``sum_j c[n][k-j][j] y^j``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    jl = table.region.lower_bounds(table.n_max)[1]
    out = []
    for n in range(table.n_max + 1):
        lo = min(0, jl)
        coeffs = {j: table.coefficient(n, k - j, j) for j in range(lo - n - k, k + n + 1)}
        if any(j < 0 and v for j, v in coeffs.items()):
            raise ValueError("series_line needs walks confined to j >= 0")
        out.append(Poly([coeffs.get(j, 0) for j in range(0, k + n + 1)]))
    return PolySeries(out, table.n_max + 1)


@dataclass(frozen=True)
class FunctionalEquationReport:
    passed: bool
    n_checked: int
    first_violation: tuple[int, int, int] | None = None
    expected: int | None = None
    found: int | None = None

    def to_json(self) -> dict:
        out = {"status": "pass" if self.passed else "fail", "n_checked": self.n_checked}
        if self.first_violation is not None:
            n, i, j = self.first_violation
            out.update(first_violation={"n": n, "i": i, "j": j},
                       expected=str(self.expected), found=str(self.found))
        return out


def functional_equation_check(table: CountTable, steps: StepSet | None = None
                              ) -> FunctionalEquationReport:
    """Check the table coefficientwise against the quarter-plane equation

    ``Q = 1 + t*S(x,y)*Q - t*(x/y)*Q(x,0) - t*(y/x)*Q(0,y)``

    with both boundary series re-read from the table itself.  Only the two
    step sets whose boundary losses are exactly the SE and NW steps are
    supported.
    """
    steps = table.steps if steps is None else steps
    if steps not in (SET_S, SET_T):
        raise ValueError(f"no functional equation for step set {steps.label()}")
    if table.region is not Region.QUARTER_PLANE:
        raise ValueError("the functional equation is for quarter-plane tables")

    def violation(n, i, j, expected, found):
        return FunctionalEquationReport(False, n, (n, i, j), expected, found)

    first = table.layer(0)
    if first.shape != (1, 1) or first[0, 0] != 1:
        return violation(0, 0, 0, 1, table.coefficient(0, 0, 0))
    for n in range(1, table.n_max + 1):
        prev = table.layer(n - 1)
        # predicted layer on [-1, n] x [-1, n]
        pred = np.zeros((n + 2, n + 2), dtype=object)
        w, h = prev.shape
        for dx, dy in steps.steps:
            pred[1 + dx:1 + dx + w, 1 + dy:1 + dy + h] += prev
        # -t (x/y) Q(x,0): the SE step leaving the x axis
        pred[2:2 + w, 0] -= prev[:, 0]
        # -t (y/x) Q(0,y): the NW step leaving the y axis
        pred[0, 2:2 + h] -= prev[0, :]
        actual = np.zeros_like(pred)
        cur = table.layer(n)
        actual[1:1 + cur.shape[0], 1:1 + cur.shape[1]] = cur
        diff = np.nonzero(pred != actual)
        if len(diff[0]):
            a, b = int(diff[0][0]), int(diff[1][0])
            return violation(n, a - 1, b - 1, int(pred[a, b]), int(actual[a, b]))
    return FunctionalEquationReport(True, table.n_max)
