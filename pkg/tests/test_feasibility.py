import io

import numpy as np
import pytest

from seccost.errors import InconsistentColoring
from seccost.feasibility import (DU_CATEGORIES, RU_CATEGORIES, LatencyBudgetTable, Region,
                                 SecurityDelayAssumptions, baseline_interval_from_coloring, classify_cell,
                                 classify_table, load_table, wg4_table)


class TestTable:
    """The shipped O-RU x O-DU budget table."""

    def test_shape_and_labels(self):
        t = wg4_table()
        assert t.budget.shape == (12, 14)
        assert t.ru_categories == RU_CATEGORIES
        assert t.du_categories == DU_CATEGORIES

    def test_corners(self):
        t = wg4_table()
        assert t.cell("O", "A") == 3000
        assert t.cell("O", "B") == 399
        assert t.cell("P", "C") == 328

    def test_monotone(self):
        assert wg4_table().is_monotone()

    def test_read_only(self):
        with pytest.raises(ValueError):
            wg4_table().budget[0, 0] = 1

    def test_custom_csv(self):
        t = load_table(io.StringIO("ru,A,B\nX,300,100\nY,200,50\n"))
        assert t.cells().__next__() == ("X", "A", 300.0)

    def test_validation(self):
        with pytest.raises(ValueError):
            LatencyBudgetTable(("a",), ("b", "c"), np.array([[1.0]]))
        with pytest.raises(ValueError):
            LatencyBudgetTable(("a",), ("b",), np.array([[-1.0]]))


class TestClassify:
    @pytest.mark.parametrize("budget,region", [
        (336, Region.FEASIBLE_WITH_ENCRYPTION),
        (335.9, Region.FEASIBLE_WITHOUT_ENCRYPTION_ONLY),
        (271, Region.FEASIBLE_WITHOUT_ENCRYPTION_ONLY),
        (270, Region.FEASIBLE_WITHOUT_MACSEC_ONLY),
        (118, Region.FEASIBLE_WITHOUT_MACSEC_ONLY),
        (117, Region.INFEASIBLE),
    ])
    def test_thresholds_inclusive(self, budget, region):
        assert classify_cell(budget) is region

    def test_assumption_validation(self):
        with pytest.raises(ValueError):
            SecurityDelayAssumptions(118, 300, 200)

    def test_negative_budget(self):
        with pytest.raises(ValueError):
            classify_cell(-1)

    def test_letters(self):
        c = classify_table()
        assert c.grid()[0] == "EEEEEMMMPPPPPP"
        assert c.region("Z", "N") is Region.INFEASIBLE
        assert len(c.rows()) == 168

    def test_zero_baseline_everything_feasible_somewhere(self):
        c = classify_table(a=SecurityDelayAssumptions(0, 0, 0))
        assert c.counts[Region.FEASIBLE_WITH_ENCRYPTION] == 168


class TestInterval:
    def test_round_trip(self):
        t = wg4_table()
        c = classify_table(t, SecurityDelayAssumptions(119.5))
        assert baseline_interval_from_coloring(t, c.regions) == (115.0, 121.0)

    def test_inconsistent(self):
        t = wg4_table()
        grid = [list(r) for r in classify_table(t).regions]
        grid[11][0], grid[0][13] = Region.INFEASIBLE, Region.FEASIBLE_WITH_ENCRYPTION
        with pytest.raises(InconsistentColoring):
            baseline_interval_from_coloring(t, grid)

    def test_shape(self):
        with pytest.raises(ValueError):
            baseline_interval_from_coloring(wg4_table(), [[Region.INFEASIBLE]])
