import pytest
from hypothesis import given, strategies as st

from wrangle.core import ConflictingConstraintsError, ConstraintParseError, InteractionSet
from wrangle.dialect import (
    BlockComponent,
    Dialect,
    DialectAssistant,
    FixComponent,
    candidate_dialects,
    dialect_best,
    dialect_choices,
    dialect_valid,
    parse_constraint,
    parse_dialect,
    parse_with_dialect,
    pattern_score,
    rank_dialects,
    type_score,
)
from wrangle.table import read_text_file


class TestParsing:
    def test_quoted_cell(self):
        rows = parse_with_dialect('"a,b",c', Dialect(",", '"', None))
        assert rows == [["a,b", "c"]]

    def test_escaped_delimiter(self):
        rows = parse_with_dialect(
            "Atlantic City\\, USA,7.4", Dialect(",", None, "\\")
        )
        assert rows == [["Atlantic City, USA", "7.4"]]

    def test_none_delimiter_one_cell_per_line(self):
        rows = parse_with_dialect("a,b\nc,d\n", Dialect(None, None, None))
        assert rows == [["a,b"], ["c,d"]]

    def test_doubled_quote(self):
        rows = parse_with_dialect('"say ""hi""",x', Dialect(",", '"', None))
        assert rows == [['say "hi"', "x"]]

    def test_unterminated_quote_consumes_to_end(self):
        rows = parse_with_dialect('"abc\ndef', Dialect(",", '"', None))
        assert rows == [["abc\ndef"]]

    def test_crlf(self):
        rows = parse_with_dialect("a,b\r\nc,d\r\n", Dialect(",", None, None))
        assert rows == [["a", "b"], ["c", "d"]]


class TestScores:
    def test_pattern_uniform(self):
        assert pattern_score([["a"] * 3] * 4) == pytest.approx(8 / 3)

    def test_pattern_single_cell_rows(self):
        assert pattern_score([["a"]] * 4) == 0.0

    def test_pattern_mixed_groups(self):
        rows = [["a"] * 3, ["b"] * 3, ["c"] * 2]
        assert pattern_score(rows) == pytest.approx(11 / 12)

    def test_type_all_numeric(self):
        assert type_score([["1", "2"], ["3", "4"]]) == 1.0

    def test_type_floor(self):
        assert type_score([["{x}", "^^"]]) == pytest.approx(1e-3)

    def test_type_half(self):
        assert type_score([["1", "{x}"]]) == 0.5

    def test_consistency_is_product(self):
        text = "a,b\n1,2\n3,4\n"
        for scored in rank_dialects(text, InteractionSet()):
            assert scored.consistency == scored.pattern * scored.type


class TestCandidates:
    def test_basic_scan(self):
        candidates = candidate_dialects("a,b\n1,2\n", InteractionSet())
        delimiters = {d.delimiter for d in candidates}
        assert "," in delimiters and None in delimiters
        assert all(d.quote is None for d in candidates)

    def test_contradiction_errors(self):
        h = InteractionSet((FixComponent("delimiter", ","), BlockComponent("delimiter", ",")))
        with pytest.raises(ConflictingConstraintsError):
            candidate_dialects("a,b\n", h)

    def test_fix_forces_inclusion(self):
        # Tab does not occur in the text but an explicit fix is definitive.
        h = InteractionSet((FixComponent("delimiter", "\t"),))
        candidates = candidate_dialects("a,b\n", h)
        assert all(d.delimiter == "\t" for d in candidates)

    def test_block_prunes(self):
        base = candidate_dialects("a,b;c\n", InteractionSet())
        pruned = candidate_dialects(
            "a,b;c\n", InteractionSet((BlockComponent("delimiter", ";"),))
        )
        assert {d.delimiter for d in pruned} == {
            d.delimiter for d in base
        } - {";"}

    def test_json_fixture_has_colon_and_comma(self, data_dir):
        text = read_text_file(data_dir / "json_cells.csv")
        delimiters = {d.delimiter for d in candidate_dialects(text, InteractionSet())}
        assert ":" in delimiters and "," in delimiters

    def test_monotone_pruning(self, data_dir):
        text = read_text_file(data_dir / "colors.csv")
        base = set(candidate_dialects(text, InteractionSet()))
        for constraint in (
            BlockComponent("delimiter", ","),
            FixComponent("quote", None),
            BlockComponent("escape", "\\"),
        ):
            restricted = set(candidate_dialects(text, InteractionSet((constraint,))))
            assert restricted <= base


class TestBest:
    def test_json_fixture(self, data_dir):
        text = read_text_file(data_dir / "json_cells.csv")
        best, ranking = dialect_best(text, InteractionSet())
        assert best.delimiter == ":"
        assert ranking[1].dialect == Dialect(",", '"', None)

    def test_json_fixed_comma(self, data_dir):
        text = read_text_file(data_dir / "json_cells.csv")
        h = InteractionSet((FixComponent("delimiter", ","),))
        best, _ = dialect_best(text, h)
        assert best == Dialect(",", '"', None)

    def test_colors_tab_fix(self, data_dir):
        text = read_text_file(data_dir / "colors.csv")
        best, _ = dialect_best(text, InteractionSet())
        assert best.delimiter == ","
        h = InteractionSet((FixComponent("delimiter", "\t"),))
        fixed, _ = dialect_best(text, h)
        assert fixed.delimiter == "\t"
        rows = parse_with_dialect(text, fixed)
        assert all(len(r) == 4 for r in rows)

    def test_ranking_copies_every_candidate(self, data_dir):
        text = read_text_file(data_dir / "json_cells.csv")
        candidates = candidate_dialects(text, InteractionSet())
        ranking = rank_dialects(text, InteractionSet())
        assert {s.dialect for s in ranking} == set(candidates)

    def test_deterministic(self, data_dir):
        text = read_text_file(data_dir / "json_cells.csv")
        first = [s.dialect for s in rank_dialects(text, InteractionSet())]
        second = [s.dialect for s in rank_dialects(text, InteractionSet())]
        assert first == second


class TestChoices:
    def test_json_first_fix_is_comma(self, data_dir):
        text = read_text_file(data_dir / "json_cells.csv")
        options = dialect_choices(text, InteractionSet())
        fixes = [
            c for c in options
            if isinstance(c.interactions.constraints[-1], FixComponent)
            and c.interactions.constraints[-1].slot == "delimiter"
        ]
        assert fixes[0].interactions.constraints[-1].value == ","

    def test_fixed_slot_offers_nothing(self, data_dir):
        text = read_text_file(data_dir / "json_cells.csv")
        h = InteractionSet((FixComponent("delimiter", ","),))
        for choice in dialect_choices(text, h):
            constraint = choice.interactions.constraints[-1]
            assert constraint.slot != "delimiter"

    def test_not_options_precede_fixes(self, data_dir):
        text = read_text_file(data_dir / "json_cells.csv")
        options = dialect_choices(text, InteractionSet())
        kinds = [type(c.interactions.constraints[-1]) for c in options]
        first_fix = kinds.index(FixComponent)
        assert all(k is BlockComponent for k in kinds[:first_fix])

    def test_single_candidate_only_not_options(self):
        h = InteractionSet(
            (
                FixComponent("delimiter", ","),
                FixComponent("quote", None),
                FixComponent("escape", None),
            )
        )
        options = dialect_choices("a,b\n1,2\n", h)
        assert options == []


class TestValidAndSerialization:
    def test_valid_respects_fix_and_block(self):
        d = Dialect(",", '"', None)
        assert dialect_valid(d, InteractionSet((FixComponent("delimiter", ","),)))
        assert not dialect_valid(d, InteractionSet((FixComponent("delimiter", ";"),)))
        assert not dialect_valid(d, InteractionSet((BlockComponent("quote", '"'),)))

    def test_render_round_trip(self):
        for dialect in (
            Dialect(",", '"', None),
            Dialect("\t", None, "\\"),
            Dialect(None, None, None),
        ):
            assert parse_dialect(dialect.render()) == dialect

    def test_constraint_round_trip(self):
        for text in (
            "fix_delimiter(\\t)",
            "not_quote(')",
            "fix_escape(none)",
            "not_delimiter(|)",
        ):
            assert parse_constraint(text).render() == text

    def test_bad_constraint(self):
        with pytest.raises(ConstraintParseError):
            parse_constraint("fix_width(3)")

    @given(
        st.sampled_from(["fix", "not"]),
        st.sampled_from(["delimiter", "quote", "escape"]),
        st.one_of(st.none(), st.characters(min_codepoint=32, max_codepoint=126), st.sampled_from(["\t", "\n"])),
    )
    def test_constraint_round_trip_property(self, kind, slot, value):
        constraint = FixComponent(slot, value) if kind == "fix" else BlockComponent(slot, value)
        assert parse_constraint(constraint.render()) == constraint


class TestAssistant:
    def test_best_and_apply(self, data_dir):
        assistant = DialectAssistant()
        data = assistant.bind({"input": str(data_dir / "colors.csv")})
        h = InteractionSet((FixComponent("delimiter", "\t"),))
        best = assistant.best(data, h)
        output = assistant.apply(best, data)
        assert output.table.n_columns == 4

    def test_score_memoized(self, data_dir):
        assistant = DialectAssistant()
        data = assistant.bind({"input": str(data_dir / "json_cells.csv")})
        assistant.best(data, InteractionSet())
        cached = dict(data.score_cache)
        assistant.best(data, InteractionSet((BlockComponent("delimiter", ":"),)))
        for dialect, scored in cached.items():
            assert data.score_cache[dialect] is scored
