import random

import pytest

from wrangle.core import ConflictingConstraintsError, InteractionSet
from wrangle.semantic import (
    ConstantScorer,
    GazetteerScorer,
    IsType,
    NotType,
    Sample,
    SemanticAssistant,
    adjusted_score,
    column_score,
    draw_samples,
    parse_constraint,
    score_matrix,
    semantic_best,
    semantic_choices,
)


def virgin_matrix():
    """Four singleton samples with constant base scores matching the
    broadband walkthrough: Work 0.6, Company 0.5, Person 0.4."""
    samples = [
        Sample(1, ("Virgin",)),
        Sample(2, ("BT",)),
        Sample(3, ("Sky",)),
        Sample(4, ("Vodafone",)),
    ]
    scorer = ConstantScorer({"dbo:Work": 0.6, "dbo:Company": 0.5, "dbo:Person": 0.4})
    return score_matrix(samples, scorer)


class TestSampling:
    def test_few_distinct_values_single_sample(self):
        samples = draw_samples(["a", "b", "c", "d", "a"], 8, 4, seed=1)
        assert len(samples) == 1
        assert samples[0].values == ("a", "b", "c", "d")

    def test_seed_determinism(self):
        cells = [f"v{i}" for i in range(40)]
        first = draw_samples(cells, 4, 3, seed=9)
        second = draw_samples(cells, 4, 3, seed=9)
        assert first == second
        third = draw_samples(cells, 4, 3, seed=10)
        assert first != third

    def test_within_sample_no_replacement(self):
        cells = [f"v{i}" for i in range(40)]
        for sample in draw_samples(cells, 6, 4, seed=2):
            assert len(set(sample.values)) == 4

    def test_missing_values_never_sampled(self):
        samples = draw_samples(["a", "?", "b", "NA", "c", "d", "e"], 3, 2, seed=0)
        for sample in samples:
            assert "?" not in sample.values and "NA" not in sample.values


class TestAdjustedScore:
    def test_piecewise(self):
        matrix = virgin_matrix()
        h = InteractionSet((IsType(1, "dbo:Company"), NotType(2, "dbo:Work")))
        assert adjusted_score(matrix, h, 1, "dbo:Company") == 1.0
        assert adjusted_score(matrix, h, 2, "dbo:Work") == 0.0
        assert adjusted_score(matrix, h, 3, "dbo:Company") == 0.5

    def test_polarity_conflict(self):
        matrix = virgin_matrix()
        h = InteractionSet((IsType(1, "dbo:Company"), NotType(1, "dbo:Company")))
        with pytest.raises(ConflictingConstraintsError):
            adjusted_score(matrix, h, 1, "dbo:Company")

    def test_randomized_piecewise(self):
        rng = random.Random(7)
        samples = [Sample(i + 1, (f"v{i}",)) for i in range(5)]
        for _ in range(200):
            scores = {f"t{j}": rng.random() for j in range(3)}
            matrix = score_matrix(samples, ConstantScorer(scores))
            index = rng.randint(1, 5)
            type_name = rng.choice(list(scores))
            h = InteractionSet()
            expected = scores[type_name]
            mode = rng.random()
            if mode < 0.4:
                h = h.add(IsType(index, type_name))
                expected = 1.0
            elif mode < 0.8:
                h = h.add(NotType(index, type_name))
                expected = 0.0
            assert adjusted_score(matrix, h, index, type_name) == expected


class TestColumnScore:
    def test_mean_at_h0(self):
        matrix = virgin_matrix()
        assert column_score(matrix, InteractionSet(), "dbo:Company") == pytest.approx(0.5)

    def test_override_average(self):
        matrix = virgin_matrix()
        h = InteractionSet((IsType(1, "dbo:Company"),))
        assert column_score(matrix, h, "dbo:Company") == pytest.approx(0.625)

    def test_all_not_type_zero(self):
        matrix = virgin_matrix()
        h = InteractionSet(tuple(NotType(i, "dbo:Work") for i in (1, 2, 3, 4)))
        assert column_score(matrix, h, "dbo:Work") == 0.0

    def test_monotonicity(self):
        matrix = virgin_matrix()
        base = column_score(matrix, InteractionSet(), "dbo:Person")
        up = column_score(matrix, InteractionSet((IsType(2, "dbo:Person"),)), "dbo:Person")
        down = column_score(matrix, InteractionSet((NotType(2, "dbo:Person"),)), "dbo:Person")
        assert down <= base <= up


class TestBest:
    def test_h0_is_work(self):
        assert semantic_best(virgin_matrix(), InteractionSet()) == "dbo:Work"

    def test_is_type_flips_to_company(self):
        h = InteractionSet((IsType(1, "dbo:Company"),))
        assert semantic_best(virgin_matrix(), h) == "dbo:Company"

    def test_single_type_catalog(self):
        samples = [Sample(1, ("x",))]
        matrix = score_matrix(samples, ConstantScorer({"only": 0.01}))
        assert semantic_best(matrix, InteractionSet()) == "only"

    def test_catalog_order_breaks_ties(self):
        samples = [Sample(1, ("x",))]
        matrix = score_matrix(samples, ConstantScorer({"first": 0.5, "second": 0.5}))
        assert semantic_best(matrix, InteractionSet()) == "first"


class TestChoices:
    def test_threshold_filters(self):
        samples = [Sample(1, ("x",))]
        matrix = score_matrix(samples, ConstantScorer({"low": 0.2, "high": 0.5}))
        offered = {
            c.interactions.constraints[-1].type
            for c in semantic_choices(matrix, InteractionSet(), epsilon=0.3)
        }
        assert offered == {"high"}

    def test_both_polarities(self):
        matrix = virgin_matrix()
        options = semantic_choices(matrix, InteractionSet(), epsilon=0.55)
        added = [c.interactions.constraints[-1] for c in options]
        assert IsType(1, "dbo:Work") in added and NotType(1, "dbo:Work") in added

    def test_all_below_threshold(self):
        samples = [Sample(1, ("x",))]
        matrix = score_matrix(samples, ConstantScorer({"t": 0.1}))
        assert semantic_choices(matrix, InteractionSet(), epsilon=0.3) == []

    def test_existing_constraints_filtered(self):
        matrix = virgin_matrix()
        h = InteractionSet((IsType(1, "dbo:Work"),))
        added = [c.interactions.constraints[-1] for c in semantic_choices(matrix, h, 0.55)]
        assert IsType(1, "dbo:Work") not in added
        assert NotType(1, "dbo:Work") not in added

    def test_descending_score_order(self):
        matrix = virgin_matrix()
        options = semantic_choices(matrix, InteractionSet(), epsilon=0.3)
        scores = [
            matrix.scores[
                (
                    c.interactions.constraints[-1].sample,
                    c.interactions.constraints[-1].type,
                )
            ]
            for c in options
        ]
        assert scores == sorted(scores, reverse=True)


class TestGazetteer:
    def test_fraction_scoring(self, data_dir):
        scorer = GazetteerScorer(data_dir / "gazetteer.tsv")
        scores = scorer.score(["BT", "Sky"])
        assert scores["dbo:Company"] == 1.0
        assert scores["dbo:Person"] == 0.0

    def test_ambiguous_value(self, data_dir):
        scorer = GazetteerScorer(data_dir / "gazetteer.tsv")
        scores = scorer.score(["Virgin"])
        assert scores["dbo:Company"] == 1.0 and scores["dbo:Work"] == 1.0

    def test_case_insensitive(self, data_dir):
        scorer = GazetteerScorer(data_dir / "gazetteer.tsv")
        assert scorer.score(["virgin"])["dbo:Company"] == 1.0

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(ConflictingConstraintsError):
            GazetteerScorer(tmp_path / "missing.tsv")


class TestScorerPluggability:
    def test_swapping_scorers_keeps_algebra(self):
        # the constraint layer behaves identically for any score source
        samples = [Sample(i + 1, (f"v{i}",)) for i in range(3)]
        for scorer in (
            ConstantScorer({"a": 0.4, "b": 0.6}),
            ConstantScorer({"a": 0.9, "b": 0.1}),
        ):
            matrix = score_matrix(samples, scorer)
            h = InteractionSet((IsType(1, "a"), NotType(2, "b")))
            assert adjusted_score(matrix, h, 1, "a") == 1.0
            assert adjusted_score(matrix, h, 2, "b") == 0.0

    def test_constraint_on_missing_type_is_inert(self):
        matrix = virgin_matrix()
        h = InteractionSet((IsType(1, "dbo:Nowhere"),))
        assert semantic_best(matrix, h) == semantic_best(matrix, InteractionSet())


class TestAssistant:
    def test_constraint_round_trip(self):
        for text in ("is_type(S3,dbo:Company)", "not_type(S1,dbo:Work)"):
            assert parse_constraint(text).render() == text

    def test_full_flow(self, data_dir):
        assistant = SemanticAssistant(
            gazetteer=str(data_dir / "gazetteer.tsv"), column="provider", sample_size=1, n_samples=4
        )
        path = data_dir / "_providers.csv"
        path.write_text("provider\nVirgin\nBT\nSky\nVodafone\n")
        data = assistant.bind({"input": str(path)})
        best = assistant.best(data, InteractionSet())
        assert best in data.matrix.catalog
        assert assistant.script(best) == f"semantic_type={best}"
        path.unlink()

    def test_requires_scorer(self):
        with pytest.raises(ConflictingConstraintsError):
            SemanticAssistant()
