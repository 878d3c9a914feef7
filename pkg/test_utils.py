#!/usr/bin/env python3
"""
Unit tests for utils module.

Run with: pytest test_utils.py -v
"""

import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from utils import (
    parse_rational,
    format_rational,
    parse_polynomial_text,
    format_polynomial_text,
    read_polynomial_argument,
    read_fixture_rows,
    to_json,
    TableFormatter
)


class TestParseRational:
    """Tests for parse_rational function."""

    def test_parses_integer_string(self):
        assert parse_rational("10") == Fraction(10)

    def test_parses_fraction_string(self):
        assert parse_rational("3/4") == Fraction(3, 4)
        assert parse_rational("-4") == Fraction(-4)

    def test_parses_decimal_exactly(self):
        assert parse_rational("1509.375") == Fraction(12075, 8)
        assert parse_rational("0.139") == Fraction(139, 1000)

    def test_parses_float_as_decimal(self):
        assert parse_rational(1.139) == Fraction(1139, 1000)

    def test_passes_through_fraction_and_int(self):
        assert parse_rational(Fraction(1, 3)) == Fraction(1, 3)
        assert parse_rational(7) == Fraction(7)

    def test_handles_whitespace(self):
        assert parse_rational("  5/2  ") == Fraction(5, 2)

    def test_rejects_empty_string(self):
        with pytest.raises(ValueError):
            parse_rational("")

    def test_rejects_garbage(self):
        with pytest.raises(ValueError):
            parse_rational("abc")

    def test_rejects_zero_denominator(self):
        with pytest.raises(ValueError):
            parse_rational("1/0")

    def test_rejects_other_types(self):
        with pytest.raises(ValueError):
            parse_rational(None)


class TestFormatRational:
    """Tests for format_rational function."""

    def test_formats_fraction(self):
        assert format_rational(Fraction(3, 4)) == "3/4"

    def test_formats_integer_without_denominator(self):
        assert format_rational(Fraction(-4)) == "-4"
        assert format_rational(Fraction(110, 1)) == "110"

    @given(st.fractions())
    def test_parse_inverts_format(self, value):
        assert parse_rational(format_rational(value)) == value


class TestPolynomialText:
    """Tests for the canonical polynomial text format."""

    def test_parses_ascending_coefficients(self):
        assert parse_polynomial_text("10 7 3 1") == [Fraction(10), Fraction(7), Fraction(3), Fraction(1)]

    def test_ignores_comments_and_newlines(self):
        text = "# cubic\n10 7\n3 1  # leading term\n"
        assert parse_polynomial_text(text) == [Fraction(10), Fraction(7), Fraction(3), Fraction(1)]

    def test_mixed_rational_forms(self):
        assert parse_polynomial_text("1/2 0.25 3") == [Fraction(1, 2), Fraction(1, 4), Fraction(3)]

    def test_empty_text_gives_no_coefficients(self):
        assert parse_polynomial_text("  # nothing\n") == []

    def test_formats_in_canonical_form(self):
        coeffs = [Fraction(17160), Fraction(12075, 8), Fraction(1)]
        assert format_polynomial_text(coeffs) == "17160 12075/8 1"

    def test_rejects_bad_token(self):
        with pytest.raises(ValueError):
            parse_polynomial_text("1 two 3")


class TestReadPolynomialArgument:
    """Tests for read_polynomial_argument function."""

    def test_reads_inline_text(self):
        assert read_polynomial_argument("1/2 1") == [Fraction(1, 2), Fraction(1)]

    def test_reads_existing_file(self, tmp_path):
        path = tmp_path / "ex2.poly"
        path.write_text("# cubic\n10 7 3 1\n")
        assert read_polynomial_argument(str(path)) == [Fraction(10), Fraction(7), Fraction(3), Fraction(1)]

    def test_missing_poly_file_raises(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            read_polynomial_argument(str(tmp_path / "missing.poly"))


class TestToJson:
    """Tests for to_json function."""

    def test_sorted_keys(self):
        text = to_json({'b': 1, 'a': 2})
        assert text.index('"a"') < text.index('"b"')

    def test_round_trips(self):
        data = {'minors': ['3', '11', '110'], 'verdict': 'stable'}
        assert json.loads(to_json(data)) == data


class TestReadFixtureRows:
    """Tests for read_fixture_rows function."""

    HEADER = "fixture_id,check,polynomial,argument,expected,provenance\n"

    def test_reads_rows_and_skips_comments(self, tmp_path):
        path = tmp_path / "facts.csv"
        path.write_text("# comment\n" + self.HEADER + "Ex2,rh, 10 7 3 1 ,,true,[WORKED]\n")
        rows = read_fixture_rows(str(path))

        assert len(rows) == 1
        assert rows[0]['polynomial'] == "10 7 3 1"
        assert rows[0]['argument'] == ""

    def test_filter(self, tmp_path):
        path = tmp_path / "facts.csv"
        path.write_text(self.HEADER + "Ex1,rh,3 2 4 2 2,,false,[WORKED]\nEx2,rh,10 7 3 1,,true,[WORKED]\n")
        rows = read_fixture_rows(str(path), filter_fn=lambda r: r['fixture_id'] == 'Ex2')
        assert [r['fixture_id'] for r in rows] == ['Ex2']

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            read_fixture_rows(str(tmp_path / "none.csv"))

    def test_missing_columns(self, tmp_path):
        path = tmp_path / "facts.csv"
        path.write_text("fixture_id,check\nEx1,rh\n")
        with pytest.raises(ValueError, match="missing columns"):
            read_fixture_rows(str(path))


class TestTableFormatter:
    """Tests for TableFormatter class."""

    def test_to_csv_basic(self):
        headers = ['Field', 'Value']
        rows = [
            ['verdict', 'stable'],
            ['Delta_1', '3']
        ]
        result = TableFormatter.to_csv(headers, rows)

        lines = result.strip().split('\n')
        assert lines[0].strip() == 'Field,Value'
        assert 'verdict' in lines[1]
        assert 'Delta_1' in lines[2]

    def test_to_csv_with_quotes(self):
        headers = ['Polynomial', 'Note']
        rows = [['10 7 3 1', 'stable, in W']]
        result = TableFormatter.to_csv(headers, rows)

        assert '"stable, in W"' in result

    def test_to_markdown_basic(self):
        headers = ['Field', 'Value']
        rows = [['lambda_2', '3/4'], ['lambda_3', '1/2']]
        result = TableFormatter.to_markdown(headers, rows)

        lines = result.strip().split('\n')
        assert '| Field | Value |' in lines[0]
        assert '|--' in lines[1]  # Separator
        assert '| lambda_2 | 3/4 |' in lines[2]
        assert '| lambda_3 | 1/2 |' in lines[3]

    def test_to_markdown_numeric_column_right_aligned(self):
        result = TableFormatter.to_markdown(['Field', 'Value'], [['Delta_1', '3'], ['Delta_2', '-1/4']])
        assert result.split('\n')[1] == '|-------|------:|'

    def test_to_markdown_escapes_pipes(self):
        result = TableFormatter.to_markdown(['Note'], [['a|b']])
        assert result.split('\n')[2] == '| a\\|b |'

    def test_short_rows_padded(self):
        result = TableFormatter.to_csv(['A', 'B'], [['x']])
        assert result == 'A,B\nx,\n'

    def test_to_console_table_basic(self):
        headers = ['Field', 'Value']
        rows = [['Delta_3', '-4'], ['verdict', 'unstable']]
        result = TableFormatter.to_console_table(headers, rows)

        lines = result.strip().split('\n')
        assert 'Field' in lines[0]
        assert '-' in lines[1]  # Separator
        assert 'Delta_3' in lines[2]
        assert 'unstable' in lines[3]

    def test_to_console_table_with_custom_widths(self):
        headers = ['Field', 'Value']
        rows = [['verdict', 'stable']]
        result = TableFormatter.to_console_table(headers, rows, column_widths=[20, 10])

        assert len(result.split('\n')[0]) >= 30

    def test_rationals_right_aligned(self):
        headers = ['Field', 'Value']
        rows = [['Delta_1', '3'], ['Delta_3', '-1/4']]
        result = TableFormatter.to_console_table(headers, rows, column_widths=[8, 8])

        assert result.split('\n')[2].endswith('       3')

    def test_render_dispatch(self):
        headers = ['A']
        rows = [['x']]
        assert TableFormatter.render('markdown', headers, rows).startswith('| A |')
        assert TableFormatter.render('csv', headers, rows).startswith('A')
        assert TableFormatter.render('console', headers, rows).startswith('A')


class TestTableFormatterEdgeCases:
    """Edge case tests for TableFormatter."""

    def test_empty_table(self):
        headers = ['Property', 'Failed']
        rows = []

        csv_result = TableFormatter.to_csv(headers, rows)
        assert 'Property,Failed' in csv_result

        md_result = TableFormatter.to_markdown(headers, rows)
        assert '| Property | Failed |' in md_result

    def test_single_row(self):
        headers = ['Property']
        rows = [['w_alpha_closure']]

        result = TableFormatter.to_markdown(headers, rows)
        assert '| w_alpha_closure |' in result


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
