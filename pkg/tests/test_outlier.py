import math
import random

import numpy as np
import pytest

from wrangle.core import InteractionSet
from wrangle.outlier import (
    AggregateFilter,
    OutlierRowsAssistant,
    OutlierValuesAssistant,
    RemoveRows,
    RemoveValue,
    collect_aggregate_filters,
    detect_outliers,
    outlier_best,
    outlier_choices,
    parse_rows_constraint,
    parse_value_constraint,
    remove_rows,
    remove_values,
)
from wrangle.table import read_csv


def outlier_oracle(values, m):
    mean = sum(values) / len(values)
    sigma = math.sqrt(sum((v - mean) ** 2 for v in values) / len(values))
    if sigma == 0:
        return set()
    return {v for v in values if v <= mean - m * sigma or v >= mean + m * sigma}


class TestDetect:
    def test_single_spike(self):
        values = [0.0] * 50 + [100.0]
        outliers = detect_outliers(values, 3.0)
        assert outliers.values == (100.0,)

    def test_constant_column(self):
        outliers = detect_outliers([5.0] * 10, 3.0)
        assert outliers.values == ()

    def test_symmetric_small_m(self):
        outliers = detect_outliers([-1.0, 1.0], 0.5)
        assert set(outliers.values) == {-1.0, 1.0}

    def test_closed_bounds(self):
        # values exactly at mean +/- m*sigma are flagged
        values = [-1.0, 1.0]
        outliers = detect_outliers(values, 1.0)
        assert set(outliers.values) == {-1.0, 1.0}

    def test_preconditions(self):
        with pytest.raises(ValueError):
            detect_outliers([1.0], 3.0)
        with pytest.raises(ValueError):
            detect_outliers([1.0, 2.0], 0.0)

    def test_random_against_oracle(self):
        rng = random.Random(4)
        for _ in range(100):
            values = [rng.gauss(0, 10) for _ in range(rng.randint(2, 60))]
            m = rng.choice([0.5, 1.0, 2.0, 3.0])
            assert set(detect_outliers(values, m).values) == outlier_oracle(values, m)


class TestBestAndChoices:
    def test_best_is_identity_on_interactions(self):
        h = InteractionSet((RemoveValue("100"),))
        assert outlier_best(h) == (RemoveValue("100"),)
        assert outlier_best(InteractionSet()) == ()

    def test_choices_cover_unselected(self):
        outliers = detect_outliers([0.0] * 50 + [100.0, -90.0], 2.0)
        options = outlier_choices(outliers, InteractionSet())
        values = [c.interactions.constraints[-1].value for c in options]
        assert set(values) == {"100", "-90"}

    def test_choices_ordered_by_distance(self):
        outliers = detect_outliers([0.0] * 80 + [60.0, -90.0, 70.0], 2.0)
        options = outlier_choices(outliers, InteractionSet())
        values = [c.interactions.constraints[-1].value for c in options]
        assert values[0] == "-90"

    def test_selected_not_reoffered(self):
        outliers = detect_outliers([0.0] * 50 + [100.0, -90.0], 2.0)
        h = InteractionSet((RemoveValue("100"),))
        options = outlier_choices(outliers, h)
        assert [c.interactions.constraints[-1].value for c in options] == ["-90"]

    def test_empty_when_all_selected(self):
        outliers = detect_outliers([0.0] * 50 + [100.0], 3.0)
        h = InteractionSet((RemoveValue("100"),))
        assert outlier_choices(outliers, h) == []


class TestRemove:
    def test_removes_matching(self):
        kept = remove_values([RemoveValue("100")], ["0"] * 50 + ["100"])
        assert len(kept) == 50

    def test_empty_selection_keeps_all(self):
        cells = ["1", "2", "3"]
        assert remove_values([], cells) == cells

    def test_missing_cells_kept(self):
        kept = remove_values([RemoveValue("1")], ["1", "?", "2"])
        assert kept == ["?", "2"]


class TestAggregate:
    def test_aviation_filters(self, data_dir):
        table = read_csv(data_dir / "aviation.csv")
        filters = collect_aggregate_filters(table, 3.0)
        regis = {f.value for f in filters if f.column == "c_regis"}
        geo = {f.value for f in filters if f.column == "c_geo"}
        assert regis == {"EU28", "FR", "CH", "NEASA"}
        assert geo == {"EU28", "OTH", "FR"}

    def test_count_ordering(self, data_dir):
        table = read_csv(data_dir / "aviation.csv")
        filters = collect_aggregate_filters(table, 3.0)
        assert filters[0] == AggregateFilter("c_geo", "EU28", 2)

    def test_eu28_sweep(self, data_dir):
        table = read_csv(data_dir / "aviation.csv")
        cleaned = remove_rows(
            [RemoveRows("c_regis", "EU28"), RemoveRows("c_geo", "EU28")], table
        )
        for row in cleaned.rows():
            assert "EU28" not in row

    def test_eight_sigma_after_sweep(self, data_dir):
        table = read_csv(data_dir / "aviation.csv")
        cleaned = remove_rows(
            [RemoveRows("c_regis", "EU28"), RemoveRows("c_geo", "EU28")], table
        )
        for col in cleaned.columns:
            if col.kind != "numeric":
                continue
            data = col.numeric_view[~np.isnan(col.numeric_view)]
            mean, sigma = float(np.mean(data)), float(np.std(data))
            assert not np.any((data <= mean - 8 * sigma) | (data >= mean + 8 * sigma))

    def test_no_outlier_rows_empty(self):
        from wrangle.table import table_from_cells

        table = table_from_cells(
            ["cat", "num"], [["a", "1"], ["b", "1"], ["a", "1"], ["b", "1"]]
        )
        assert collect_aggregate_filters(table, 3.0) == []

    def test_no_categorical_columns_empty(self):
        from wrangle.table import table_from_cells

        table = table_from_cells(["n"], [["0"]] * 30 + [["100"]])
        assert collect_aggregate_filters(table, 3.0) == []


class TestAssistants:
    def test_values_assistant_flow(self, tmp_path):
        path = tmp_path / "vals.csv"
        path.write_text("x\n" + "\n".join(["0"] * 50 + ["100"]) + "\n")
        assistant = OutlierValuesAssistant(m=3.0)
        data = assistant.bind({"input": str(path)})
        options = assistant.choices(data, InteractionSet())
        assert [c.label for c in options] == ["Remove value 100"]
        h = options[0].interactions
        best = assistant.best(data, h)
        output = assistant.apply(best, data)
        assert output.table.n_rows == 50
        assert assistant.script(best) == "remove_value(100)"
        assert assistant.valid(best, h, data)

    def test_rows_assistant_flow(self, data_dir):
        assistant = OutlierRowsAssistant(m=3.0)
        data = assistant.bind({"input": str(data_dir / "aviation.csv")})
        options = assistant.choices(data, InteractionSet())
        labels = [c.label for c in options]
        assert "Remove rows where c_geo = EU28" in labels
        h = InteractionSet(
            (RemoveRows("c_regis", "EU28"), RemoveRows("c_geo", "EU28"))
        )
        output = assistant.apply(assistant.best(data, h), data)
        assert output.table.n_rows == data.table.n_rows - 2
        assert assistant.script(assistant.best(data, h)) == (
            "remove_rows(c_regis=EU28)\nremove_rows(c_geo=EU28)"
        )

    def test_constraint_round_trips(self):
        assert parse_value_constraint("remove_value(100)").render() == "remove_value(100)"
        constraint = RemoveRows("a=b", "c=d")
        assert parse_rows_constraint(constraint.render()) == constraint
