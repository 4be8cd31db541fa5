"""WG4 fronthaul delay budgets and which O-RU/O-DU pairs tolerate MACsec."""

from __future__ import annotations

import csv
import enum
import io
import math
from collections import Counter
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import InconsistentColoring

RU_CATEGORIES = tuple("OPQRSTUVWXYZ")
DU_CATEGORIES = tuple("ABCDEFGHIJKLMN")


class Region(enum.IntEnum):
    """Ordered weakest to strongest."""

    INFEASIBLE = 0
    FEASIBLE_WITHOUT_MACSEC_ONLY = 1
    FEASIBLE_WITHOUT_ENCRYPTION_ONLY = 2
    FEASIBLE_WITH_ENCRYPTION = 3

    @property
    def letter(self) -> str:
        return {3: "E", 2: "M", 1: "P", 0: "."}[self.value]

    @property
    def short(self) -> str:
        return {3: "enc", 2: "noenc-only", 1: "no-macsec-only", 0: "infeasible"}[self.value]


@dataclass(frozen=True)
class SecurityDelayAssumptions:
    baseline_oneway: float = 118.0
    delta_macsec: float = 153.0
    delta_macsec_enc: float = 218.0

    def __post_init__(self):
        if not 0 <= self.delta_macsec <= self.delta_macsec_enc:
            raise ValueError("need 0 <= delta_macsec <= delta_macsec_enc")

    def thresholds(self) -> dict[Region, float]:
        b = self.baseline_oneway
        return {
            Region.FEASIBLE_WITH_ENCRYPTION: b + self.delta_macsec_enc,
            Region.FEASIBLE_WITHOUT_ENCRYPTION_ONLY: b + self.delta_macsec,
            Region.FEASIBLE_WITHOUT_MACSEC_ONLY: b,
        }


@dataclass(frozen=True)
class LatencyBudgetTable:
    ru_categories: tuple[str, ...]
    du_categories: tuple[str, ...]
    budget: np.ndarray  # µs, rows = O-RU, cols = O-DU

    def __post_init__(self):
        b = np.asarray(self.budget, dtype=float)
        if b.shape != (len(self.ru_categories), len(self.du_categories)):
            raise ValueError(f"budget shape {b.shape} does not match the category labels")
        if (b < 0).any():
            raise ValueError("budgets must be >= 0")
        b.setflags(write=False)
        object.__setattr__(self, "budget", b)

    def is_monotone(self) -> bool:
        b = self.budget
        return bool((np.diff(b, axis=1) <= 0).all() and (np.diff(b, axis=0) <= 0).all())

    def cell(self, ru: str, du: str) -> float:
        return float(self.budget[self.ru_categories.index(ru), self.du_categories.index(du)])

    def cells(self):
        for i, ru in enumerate(self.ru_categories):
            for j, du in enumerate(self.du_categories):
                yield ru, du, float(self.budget[i, j])


def load_table(source=None) -> LatencyBudgetTable:
    """Read a budget CSV (first column O-RU label, header row O-DU labels).

    With no argument the shipped WG4 table is returned.
    """
    if source is None:
        text = resources.files("seccost").joinpath("data/wg4_max_delay.csv").read_text()
    elif hasattr(source, "read"):
        text = source.read()
    else:
        with open(source) as fh:
            text = fh.read()
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], [r for r in rows[1:] if r]
    return LatencyBudgetTable(tuple(r[0] for r in body), tuple(header[1:]),
                              np.array([[float(v) for v in r[1:]] for r in body]))


def wg4_table() -> LatencyBudgetTable:
    t = load_table()
    if t.ru_categories != RU_CATEGORIES or t.du_categories != DU_CATEGORIES:
        raise ValueError("shipped table has unexpected category labels")
    return t


def classify_cell(budget: float, a: SecurityDelayAssumptions | None = None) -> Region:
    if budget < 0:
        raise ValueError("budget must be >= 0")
    a = a or SecurityDelayAssumptions()
    for region, threshold in a.thresholds().items():
        if budget >= threshold:
            return region
    return Region.INFEASIBLE


@dataclass(frozen=True)
class Classification:
    table: LatencyBudgetTable
    regions: tuple[tuple[Region, ...], ...]
    counts: dict[Region, int]

    def region(self, ru: str, du: str) -> Region:
        return self.regions[self.table.ru_categories.index(ru)][self.table.du_categories.index(du)]

    def grid(self) -> list[str]:
        return ["".join(r.letter for r in row) for row in self.regions]

    def rows(self) -> list[dict]:
        out = []
        for i, ru in enumerate(self.table.ru_categories):
            for j, du in enumerate(self.table.du_categories):
                out.append({"ru": ru, "du": du, "budget_us": float(self.table.budget[i, j]),
                            "region": self.regions[i][j].short})
        return out


def classify_table(t: LatencyBudgetTable | None = None,
                   a: SecurityDelayAssumptions | None = None) -> Classification:
    t = t or wg4_table()
    regions = tuple(tuple(classify_cell(float(v), a) for v in row) for row in t.budget)
    counts = Counter(r for row in regions for r in row)
    return Classification(t, regions, {r: counts.get(r, 0) for r in reversed(Region)})


def baseline_interval_from_coloring(t: LatencyBudgetTable, coloring, delta_macsec: float = 153.0,
                                    delta_macsec_enc: float = 218.0) -> tuple[float, float]:
    """Baselines that reproduce ``coloring`` exactly, as a half-open interval (low, high].

    ``coloring`` is a row-major grid of :class:`Region` values.  Each region
    boundary pins the baseline between the largest budget left outside the
    region and the smallest budget inside it.
    """
    grid = [list(row) for row in coloring]
    if len(grid) != t.budget.shape[0] or any(len(r) != t.budget.shape[1] for r in grid):
        raise ValueError("coloring shape does not match the table")
    deltas = {
        Region.FEASIBLE_WITH_ENCRYPTION: delta_macsec_enc,
        Region.FEASIBLE_WITHOUT_ENCRYPTION_ONLY: delta_macsec,
        Region.FEASIBLE_WITHOUT_MACSEC_ONLY: 0.0,
    }
    low, high = -math.inf, math.inf
    for level, delta in deltas.items():
        for i, row in enumerate(grid):
            for j, region in enumerate(row):
                b = float(t.budget[i, j]) - delta
                if Region(region) >= level:
                    high = min(high, b)
                else:
                    low = max(low, b)
    if not low < high:
        raise InconsistentColoring(
            f"no baseline reproduces this coloring (needs > {low:g} and <= {high:g})")
    return low, high
