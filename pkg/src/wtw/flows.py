"""Bilateral trade-flow tables: CSV ingestion, validation, per-country totals.

A :class:`FlowTable` holds one calendar year of reporter -> partner
merchandise flows in dollars. Tables are immutable once built and safe to
share across threads; every downstream stage treats them as read-only.

The input CSV schema (UTF-8, LF or CRLF):

    year,reporter,partner,value

with ``year`` a base-10 integer, ``reporter``/``partner`` country codes
(2-3 uppercase alphanumerics), and ``value`` a non-negative decimal in
real dollars. Lines starting with ``#`` are comments. Repeated
``(year, reporter, partner)`` rows are aggregated by summation and
zero-valued rows are dropped.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import IO, Iterable, Mapping

from .errors import EmptyInputError, ParseError

CSV_HEADER = "year,reporter,partner,value"

_CODE_RE = re.compile(r"[A-Z0-9]{2,3}")


def is_valid_code(code: str) -> bool:
    """True if ``code`` is a well-formed country identifier (2-3 uppercase alphanumerics)."""
    return bool(_CODE_RE.fullmatch(code))


@dataclass(frozen=True)
class FlowTable:
    """One year of bilateral flows.

    ``flows`` maps ``(reporter, partner)`` to a strictly positive dollar
    value and is stored in sorted key order; ``countries`` is the sorted
    registry of every code appearing on either side of a flow. Sorted
    storage makes every downstream artifact independent of input row
    order.
    """

    year: int
    flows: dict[tuple[str, str], float]
    countries: tuple[str, ...]

    def __post_init__(self):
        registry = set()
        for (reporter, partner), value in self.flows.items():
            for code in (reporter, partner):
                if not is_valid_code(code):
                    raise ValueError(f"invalid country code {code!r}")
            if reporter == partner:
                raise ValueError(f"self-flow {reporter!r} -> {partner!r}")
            if not (isinstance(value, float) and math.isfinite(value)):
                raise ValueError(f"flow value for {(reporter, partner)} is not a finite number")
            if value <= 0.0:
                raise ValueError(f"non-positive flow value {value!r} for {(reporter, partner)}; "
                                 "zero flows are never stored")
            registry.add(reporter)
            registry.add(partner)
        if tuple(sorted(registry)) != self.countries:
            raise ValueError("country registry must be exactly the sorted set of codes in flows")
        object.__setattr__(self, "flows", dict(sorted(self.flows.items())))
        out: dict[str, list[float]] = {c: [] for c in self.countries}
        inc: dict[str, list[float]] = {c: [] for c in self.countries}
        for (reporter, partner), value in self.flows.items():
            out[reporter].append(value)
            inc[partner].append(value)
        object.__setattr__(self, "out_totals", {c: math.fsum(vs) for c, vs in out.items()})
        object.__setattr__(self, "in_totals", {c: math.fsum(vs) for c, vs in inc.items()})

    @classmethod
    def build(cls, year: int, flows: Mapping[tuple[str, str], float]) -> "FlowTable":
        """Build a table from a raw mapping, dropping zero-valued entries."""
        kept = {pair: float(v) for pair, v in flows.items() if v != 0.0}
        registry = tuple(sorted({code for pair in kept for code in pair}))
        return cls(year, kept, registry)


def total_outflow(table: FlowTable, country: str) -> float:
    """Total reported outgoing dollars of ``country``; 0.0 if it reports no flows."""
    try:
        return table.out_totals[country]
    except KeyError:
        raise KeyError(f"country {country!r} not registered in {table.year} table") from None


def total_inflow(table: FlowTable, country: str) -> float:
    """Total dollars flowing into ``country``; 0.0 if nobody reports to it."""
    try:
        return table.in_totals[country]
    except KeyError:
        raise KeyError(f"country {country!r} not registered in {table.year} table") from None


def parse_flow_csv(source: str | IO[str]) -> dict[int, FlowTable]:
    """Parse a flow CSV stream into one FlowTable per year, keyed by year.

    Raises :class:`ParseError` (with the offending 1-based line number)
    for a bad header, wrong column count, malformed year, invalid or
    equal country codes, or a non-numeric or negative value. Raises
    :class:`EmptyInputError` when the stream holds no data rows at all.
    """
    lines: Iterable[str] = source.splitlines() if isinstance(source, str) else source
    pending: dict[int, dict[tuple[str, str], list[float]]] = {}
    saw_header = False
    saw_row = False
    lineno = 0
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not saw_header:
            if line != CSV_HEADER:
                raise ParseError(f"expected header {CSV_HEADER!r}, got {line!r}", lineno)
            saw_header = True
            continue
        fields = line.split(",")
        if len(fields) != 4:
            raise ParseError(f"expected 4 fields, got {len(fields)}", lineno)
        year_text, reporter, partner, value_text = fields
        try:
            year = int(year_text)
        except ValueError:
            raise ParseError(f"invalid year {year_text!r}", lineno) from None
        for code in (reporter, partner):
            if not is_valid_code(code):
                raise ParseError(f"invalid country code {code!r}", lineno)
        if reporter == partner:
            raise ParseError(f"self-flow {reporter!r} -> {partner!r}", lineno)
        try:
            value = float(value_text)
        except ValueError:
            raise ParseError(f"non-numeric value {value_text!r}", lineno) from None
        if math.isnan(value) or math.isinf(value):
            raise ParseError(f"non-finite value {value_text!r}", lineno)
        if value < 0.0:
            raise ParseError(f"negative value {value_text!r}", lineno)
        saw_row = True
        if value == 0.0:
            continue
        pending.setdefault(year, {}).setdefault((reporter, partner), []).append(value)
    if not saw_header:
        raise EmptyInputError("input contains no content")
    if not saw_row:
        raise EmptyInputError("input contains a header but no data rows")
    # fsum is exact, so aggregation does not depend on row order.
    return {
        year: FlowTable.build(year, {pair: math.fsum(vs) for pair, vs in rows.items()})
        for year, rows in sorted(pending.items())
    }


def write_flow_csv(tables: Mapping[int, FlowTable] | Iterable[FlowTable], sink: IO[str]) -> None:
    """Write tables back to the CSV schema in canonical (year, reporter, partner) order.

    Values are rendered with ``repr`` so a parse -> write -> parse round
    trip reproduces every float bit-exactly.
    """
    if isinstance(tables, Mapping):
        ordered = [tables[y] for y in sorted(tables)]
    else:
        ordered = sorted(tables, key=lambda t: t.year)
    out = [CSV_HEADER]
    for table in ordered:
        for (reporter, partner), value in table.flows.items():
            out.append(f"{table.year},{reporter},{partner},{value!r}")
    sink.write("\n".join(out) + "\n")
