"""Synthetic trade panels: bloc-structured scenarios standing in for real data.

A scenario describes a set of trade blocs. Every bloc member sends one
large flow to its bloc hub each year plus small "leakage" flows to a
fixed number of countries outside the bloc, so a scenario with leakage
kept below the significance threshold produces one island per bloc.
Generation is a pure function of ``(spec, seed)``.
"""

from __future__ import annotations

import configparser
import random
from dataclasses import dataclass
from typing import IO

from .errors import ConfigError, ParseError
from .flows import FlowTable, is_valid_code


@dataclass(frozen=True)
class Bloc:
    """One trade bloc: a hub plus the members that trade through it."""

    name: str
    hub: str
    members: tuple[str, ...]
    intra_scale: float = 100.0
    leakage_scale: float = 0.0


@dataclass(frozen=True)
class ScenarioSpec:
    """A full scenario: blocs, the years to generate, and the leakage fan-out."""

    blocs: tuple[Bloc, ...]
    years: tuple[int, ...]
    leakage_partners: int = 2

    def __post_init__(self):
        if not self.blocs:
            raise ConfigError("scenario needs at least one bloc")
        if not self.years:
            raise ConfigError("scenario needs at least one year")
        if self.leakage_partners < 0:
            raise ConfigError("leakage_partners must be >= 0")
        seen: dict[str, str] = {}
        for bloc in self.blocs:
            if not bloc.members:
                raise ConfigError(f"bloc {bloc.name!r} has no members")
            if bloc.intra_scale <= 0:
                raise ConfigError(f"bloc {bloc.name!r}: intra_scale must be > 0")
            if bloc.leakage_scale < 0:
                raise ConfigError(f"bloc {bloc.name!r}: leakage_scale must be >= 0")
            if bloc.hub in bloc.members:
                raise ConfigError(f"bloc {bloc.name!r}: hub {bloc.hub!r} also listed as member")
            for code in (bloc.hub, *bloc.members):
                if not is_valid_code(code):
                    raise ConfigError(f"bloc {bloc.name!r}: invalid country code {code!r}")
                if code in seen:
                    raise ConfigError(
                        f"country {code!r} belongs to blocs {seen[code]!r} and {bloc.name!r}")
                seen[code] = bloc.name
        object.__setattr__(self, "years", tuple(sorted(set(self.years))))

    @property
    def countries(self) -> tuple[str, ...]:
        return tuple(sorted(c for b in self.blocs for c in (b.hub, *b.members)))


def parse_year_spec(text: str) -> tuple[int, ...]:
    """Parse a year selector: ``1950``, ``1950-1955``, or a comma list of both."""
    years: set[int] = set()
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        lo, sep, hi = token.partition("-")
        try:
            if sep:
                start, end = int(lo), int(hi)
                if end < start:
                    raise ValueError
                years.update(range(start, end + 1))
            else:
                years.add(int(token))
        except ValueError:
            raise ConfigError(f"invalid year selector {token!r}") from None
    if not years:
        raise ConfigError(f"no years in selector {text!r}")
    return tuple(sorted(years))


def parse_scenario(source: str | IO[str]) -> ScenarioSpec:
    """Read a scenario config (INI-style key=value sections, one per bloc).

    Format::

        [scenario]
        years = 1950-1955
        leakage_partners = 2

        [west]
        hub = USA
        members = CAN, MEX, BRA
        intra_scale = 100
        leakage_scale = 1

    Every section other than ``[scenario]`` defines a bloc; ``members``
    accepts comma or whitespace separated codes. Syntax problems raise
    :class:`ParseError`; semantic ones (overlapping blocs, empty bloc,
    bad codes) raise :class:`ConfigError`.
    """
    text = source if isinstance(source, str) else source.read()
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ParseError(str(exc).replace("\n", " "), getattr(exc, "lineno", None)) from None

    years: tuple[int, ...] = ()
    leakage_partners = 2
    if parser.has_section("scenario"):
        scen = parser["scenario"]
        for key in scen:
            if key not in ("years", "leakage_partners"):
                raise ConfigError(f"unknown scenario key {key!r}")
        if "years" in scen:
            years = parse_year_spec(scen["years"])
        if "leakage_partners" in scen:
            try:
                leakage_partners = int(scen["leakage_partners"])
            except ValueError:
                raise ConfigError(
                    f"leakage_partners must be an integer, got {scen['leakage_partners']!r}") from None
    if not years:
        raise ConfigError("scenario config must set years in a [scenario] section")

    blocs = []
    for name in parser.sections():
        if name == "scenario":
            continue
        section = parser[name]
        for key in section:
            if key not in ("hub", "members", "intra_scale", "leakage_scale"):
                raise ConfigError(f"bloc {name!r}: unknown key {key!r}")
        if "hub" not in section or "members" not in section:
            raise ConfigError(f"bloc {name!r} must define hub and members")
        members = tuple(section["members"].replace(",", " ").split())
        try:
            intra = float(section.get("intra_scale", "100"))
            leakage = float(section.get("leakage_scale", "0"))
        except ValueError:
            raise ConfigError(f"bloc {name!r}: scales must be numeric") from None
        blocs.append(Bloc(name, section["hub"], members, intra, leakage))
    return ScenarioSpec(tuple(blocs), years, leakage_partners)


def generate_synthetic(spec: ScenarioSpec, seed: int) -> dict[int, FlowTable]:
    """Generate one FlowTable per scenario year, deterministically in (spec, seed).

    Each member sends ``intra_scale`` (jittered +-25%) to its hub, and,
    when ``leakage_scale > 0``, a jittered ``leakage_scale`` flow to
    ``spec.leakage_partners`` out-of-bloc countries chosen by the seeded
    RNG. Hubs only receive.
    """
    everyone = set(spec.countries)
    tables: dict[int, FlowTable] = {}
    for year in spec.years:
        # Per-year generator keeps years independent of one another.
        rng = random.Random((seed * 0x9E3779B1) ^ year)
        flows: dict[tuple[str, str], float] = {}
        for bloc in spec.blocs:
            outside = sorted(everyone - {bloc.hub, *bloc.members})
            fanout = min(spec.leakage_partners, len(outside))
            for member in bloc.members:
                flows[(member, bloc.hub)] = bloc.intra_scale * rng.uniform(0.75, 1.25)
                if bloc.leakage_scale > 0 and fanout:
                    partners = outside if fanout == len(outside) else rng.sample(outside, fanout)
                    for partner in partners:
                        flows[(member, partner)] = bloc.leakage_scale * rng.uniform(0.75, 1.25)
        tables[year] = FlowTable.build(year, flows)
    return tables
