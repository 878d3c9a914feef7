#!/usr/bin/env python3
"""
Shared utilities for the Hadamard stability toolkit.

This module provides common functionality used by the library modules, the
fixture runner and the CLI, including rational parsing, the canonical
polynomial text format, table rendering and fixture file reading.
"""

import csv
import json
import os
from fractions import Fraction
from io import StringIO
from typing import Any, Callable, Dict, List, Optional, Sequence

from config import (
    FIELD_FIXTURE_ID,
    FIELD_CHECK,
    FIELD_POLYNOMIAL,
    FIELD_ARGUMENT,
    FIELD_EXPECTED,
    FIELD_PROVENANCE,
)

FIXTURE_FIELDS = [
    FIELD_FIXTURE_ID, FIELD_CHECK, FIELD_POLYNOMIAL,
    FIELD_ARGUMENT, FIELD_EXPECTED, FIELD_PROVENANCE,
]


def parse_rational(value: Any) -> Fraction:
    """
    Parse an exact rational from an integer, decimal or p/q string.

    Args:
        value: The value to parse (string, int, float or Fraction)

    Returns:
        The exact rational value

    Raises:
        ValueError: If the value is not a finite rational

    Examples:
        >>> parse_rational("3/4")
        Fraction(3, 4)
        >>> parse_rational("1509.375")
        Fraction(12075, 8)
        >>> parse_rational(10)
        Fraction(10, 1)
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        # Decimal reading, so 1.139 means 1139/1000 rather than its binary double
        return Fraction(repr(value))
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"not a rational number: {value!r}") from e
    raise ValueError(f"not a rational number: {value!r}")


def format_rational(value: Fraction) -> str:
    """
    Format a rational in p/q form (integers without a denominator).

    Examples:
        >>> format_rational(Fraction(3, 4))
        '3/4'
        >>> format_rational(Fraction(-4))
        '-4'
    """
    return str(Fraction(value))


def parse_polynomial_text(text: str) -> List[Fraction]:
    """
    Parse the canonical polynomial text format.

    The format is whitespace-separated rationals in ascending powers, so
    `10 7 3 1` is s^3 + 3s^2 + 7s + 10. Lines starting with '#' are ignored.

    Raises:
        ValueError: If a token is not a rational
    """
    tokens = []
    for line in text.splitlines():
        line = line.split('#', 1)[0]
        tokens.extend(line.split())
    return [parse_rational(token) for token in tokens]


def format_polynomial_text(coeffs: Sequence[Fraction]) -> str:
    """
    Render coefficients in the canonical polynomial text format.

    Examples:
        >>> format_polynomial_text([Fraction(10), Fraction(7), Fraction(3), Fraction(1)])
        '10 7 3 1'
    """
    return ' '.join(format_rational(c) for c in coeffs)


def read_polynomial_argument(argument: str) -> List[Fraction]:
    """
    Read a polynomial given on the command line.

    The argument is treated as a path when such a file exists, otherwise as
    inline canonical text (e.g. "10 7 3 1"). Names ending in .txt or
    .poly are always paths.

    Raises:
        FileNotFoundError: If the argument looks like a path but is missing
        ValueError: If the content is not valid canonical text
    """
    if os.path.isfile(argument):
        with open(argument, 'r', encoding='utf-8') as file:
            return parse_polynomial_text(file.read())

    if argument.endswith(('.txt', '.poly')):
        raise FileNotFoundError(f"Polynomial file not found: {argument}")

    return parse_polynomial_text(argument)


def to_json(data: Any) -> str:
    """Serialize to JSON with sorted keys so equal data gives equal bytes."""
    return json.dumps(data, indent=2, sort_keys=True)


def _looks_numeric(cell: str) -> bool:
    text = cell.lstrip('-')
    return bool(text) and text.replace('/', '').replace('.', '').isdigit()


class TableFormatter:
    """
    Table formatter for console, Markdown and CSV output.

    Reports from every subcommand are reduced to headers plus rows and
    rendered through this class.
    """

    @staticmethod
    def _cells(headers: List[str], rows: List[List[Any]]) -> List[List[str]]:
        """Rows as strings, clipped or padded to the header count."""
        width = len(headers)
        return [[str(c) for c in row[:width]] + [''] * (width - len(row)) for row in rows]

    @classmethod
    def to_csv(cls, headers: List[str], rows: List[List[Any]]) -> str:
        """CSV quoted by the csv module, one '\\n'-terminated line per row."""
        output = StringIO()
        writer = csv.writer(output, lineterminator='\n')
        writer.writerow(headers)
        writer.writerows(cls._cells(headers, rows))
        return output.getvalue()

    @classmethod
    def to_markdown(cls, headers: List[str], rows: List[List[Any]]) -> str:
        """
        A Markdown pipe table.

        Columns holding only rationals get a right-aligned rule ('---:').
        Pipes inside cells are escaped.
        """
        cells = cls._cells(headers, rows)

        def line(values: List[str]) -> str:
            return "| " + " | ".join(v.replace('|', '\\|') for v in values) + " |"

        rule = []
        for i, header in enumerate(headers):
            right = bool(cells) and all(_looks_numeric(row[i]) for row in cells)
            rule.append("-" * (len(str(header)) + 1) + (":" if right else "-"))
        lines = [line([str(h) for h in headers]), "|" + "|".join(rule) + "|"]
        lines.extend(line(row) for row in cells)
        return '\n'.join(lines)

    @staticmethod
    def to_console_table(headers: List[str], rows: List[List[Any]],
                         column_widths: Optional[List[int]] = None) -> str:
        """
        Format rows as an aligned console table.

        Rationals (including p/q and negative values) are right-aligned,
        text is left-aligned. Widths grow to fit the widest cell.
        """
        widths = list(column_widths) if column_widths else [0] * len(headers)
        for i, header in enumerate(headers):
            widths[i] = max(widths[i], len(str(header)))
        for row in rows:
            for i, cell in enumerate(row[:len(headers)]):
                widths[i] = max(widths[i], len(str(cell)))

        lines = [" | ".join(f"{str(h):<{widths[i]}}" for i, h in enumerate(headers))]
        lines.append("-|-".join("-" * w for w in widths))

        for row in rows:
            parts = []
            for i, cell in enumerate(row[:len(headers)]):
                cell_str = str(cell)
                if _looks_numeric(cell_str):
                    parts.append(f"{cell_str:>{widths[i]}}")
                else:
                    parts.append(f"{cell_str:<{widths[i]}}")
            lines.append(" | ".join(parts))

        return '\n'.join(lines)

    @classmethod
    def render(cls, output_format: str, headers: List[str], rows: List[List[Any]],
               column_widths: Optional[List[int]] = None) -> str:
        """Dispatch on an output format name: 'console', 'markdown' or 'csv'."""
        if output_format == 'markdown':
            return cls.to_markdown(headers, rows)
        if output_format == 'csv':
            return cls.to_csv(headers, rows)
        return cls.to_console_table(headers, rows, column_widths)


def read_fixture_rows(csv_file_path: str,
                      filter_fn: Optional[Callable[[Dict[str, str]], bool]] = None) -> List[Dict[str, str]]:
    """
    Read fixture rows from a CSV file with proper error handling.

    Lines whose first cell starts with '#' are comments.

    Args:
        csv_file_path: Path to the fixture CSV file
        filter_fn: Optional function that returns True for rows to include

    Returns:
        List of row dictionaries with stripped values

    Raises:
        FileNotFoundError: If the CSV file doesn't exist
        ValueError: If the CSV file has invalid format or missing columns
    """
    if not os.path.exists(csv_file_path):
        raise FileNotFoundError(f"Fixture file not found: {csv_file_path}")

    rows = []

    try:
        with open(csv_file_path, 'r', encoding='utf-8') as file:
            lines = [line for line in file if not line.lstrip().startswith('#')]
        reader = csv.DictReader(lines)

        missing = [f for f in FIXTURE_FIELDS if f not in (reader.fieldnames or [])]
        if missing:
            raise ValueError(f"Fixture file is missing columns: {', '.join(missing)}")

        for row in reader:
            cleaned = {key: (value or '').strip() for key, value in row.items() if key}
            if filter_fn is None or filter_fn(cleaned):
                rows.append(cleaned)

    except csv.Error as e:
        raise ValueError(f"Error reading fixture file: {e}")
    except UnicodeDecodeError as e:
        raise ValueError(f"Error decoding fixture file: {e}")

    return rows
