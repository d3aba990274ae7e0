"""Instance types, catalogs and the built-in trade-off scenarios.

All money and duration values are held as :class:`fractions.Fraction` so that
the optimizer's exact cost-equality branch is well defined.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import Iterable, Sequence, Union

Number = Union[int, float, str, Decimal, Fraction]

HEADER = ("name", "cost_per_hour", "seconds_per_task")
DEFAULT_STARTUP = Fraction(10)
HOUR = 3600


class CatalogError(ValueError):
    """Raised for malformed or invalid catalog data."""


def exact(value: Number) -> Fraction:
    """Convert a number to an exact Fraction.

    Floats go through their shortest repr, so ``exact(0.077) == Fraction("0.077")``.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


def format_number(value: Fraction) -> str:
    """Exact textual form: integer, terminating decimal, or ``p/q``."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{value.numerator}/{value.denominator}"
    places = max(twos, fives)
    text = format(Decimal(value.numerator) / Decimal(value.denominator), f".{places}f")
    return text


@dataclass(frozen=True)
class InstanceType:
    name: str
    cost_per_hour: Fraction
    seconds_per_task: Fraction

    def __post_init__(self):
        object.__setattr__(self, "cost_per_hour", exact(self.cost_per_hour))
        object.__setattr__(self, "seconds_per_task", exact(self.seconds_per_task))
        if not self.name:
            raise CatalogError("instance type name must be non-empty")
        if self.cost_per_hour <= 0:
            raise CatalogError(f"{self.name}: non-positive cost {self.cost_per_hour}")
        if self.seconds_per_task <= 0:
            raise CatalogError(
                f"{self.name}: non-positive performance {self.seconds_per_task}"
            )


@dataclass(frozen=True)
class Catalog:
    """Ordered, validated list of instance types.

    Order matters: it is the tie-break of last resort in every planner step.
    """

    types: tuple[InstanceType, ...]
    startup_seconds: Fraction = field(default=DEFAULT_STARTUP)

    def __post_init__(self):
        object.__setattr__(self, "types", tuple(self.types))
        object.__setattr__(self, "startup_seconds", exact(self.startup_seconds))
        if not self.types:
            raise CatalogError("catalog is empty")
        if not 0 <= self.startup_seconds < HOUR:
            raise CatalogError(
                f"startup_seconds must be in [0, {HOUR}), got {self.startup_seconds}"
            )
        seen = set()
        for it in self.types:
            if it.name in seen:
                raise CatalogError(f"duplicate instance type name {it.name!r}")
            seen.add(it.name)

    def __iter__(self):
        return iter(self.types)

    def __len__(self):
        return len(self.types)

    def __getitem__(self, name: str) -> InstanceType:
        for it in self.types:
            if it.name == name:
                return it
        raise KeyError(name)

    @property
    def names(self) -> list[str]:
        return [it.name for it in self.types]

    def index(self, name: str) -> int:
        return self.names.index(name)

    def with_startup(self, startup: Number) -> "Catalog":
        return Catalog(self.types, exact(startup))


def make_catalog(
    rows: Iterable[tuple[str, Number, Number]], startup: Number = DEFAULT_STARTUP
) -> Catalog:
    return Catalog(tuple(InstanceType(n, exact(c), exact(p)) for n, c, p in rows), startup)


def parse_catalog(text: str | io.TextIOBase, startup: Number = DEFAULT_STARTUP) -> Catalog:
    """Parse the CSV catalog format.

    The header ``name,cost_per_hour,seconds_per_task`` is optional; lines
    starting with ``#`` and blank lines are skipped. Errors carry the
    1-based line number.
    """
    if not isinstance(text, str):
        text = text.read()
    types: list[InstanceType] = []
    names: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in next(csv.reader([line]))]
        if tuple(f.lower() for f in fields) == HEADER:
            continue
        if len(fields) != 3:
            raise CatalogError(f"row {lineno}: expected 3 fields, got {len(fields)}")
        name, cost_s, perf_s = fields
        try:
            cost = Fraction(cost_s)
            perf = Fraction(perf_s)
        except (ValueError, ZeroDivisionError):
            raise CatalogError(f"row {lineno}: malformed number in {line!r}") from None
        if name in names:
            raise CatalogError(f"row {lineno}: duplicate name {name!r}")
        if cost <= 0:
            raise CatalogError(f"row {lineno}: non-positive cost {cost_s}")
        if perf <= 0:
            raise CatalogError(f"row {lineno}: non-positive performance {perf_s}")
        if not name:
            raise CatalogError(f"row {lineno}: empty name")
        names.add(name)
        types.append(InstanceType(name, cost, perf))
    if not types:
        raise CatalogError("catalog is empty")
    return Catalog(tuple(types), exact(startup))


def load_catalog(path, startup: Number = DEFAULT_STARTUP) -> Catalog:
    with open(path, encoding="utf-8") as fh:
        return parse_catalog(fh.read(), startup)


def format_catalog(catalog: Catalog) -> str:
    lines = [",".join(HEADER)]
    for it in catalog:
        lines.append(
            f"{it.name},{format_number(it.cost_per_hour)},{format_number(it.seconds_per_task)}"
        )
    return "\n".join(lines) + "\n"


def tradeoff_ratio(cheap: InstanceType, expensive: InstanceType) -> Fraction:
    """Performance gain divided by cost increase when moving cheap -> expensive.

    1 is a fair trade-off, above 1 cost-effective, below 1 cost-ineffective.
    """
    speedup = cheap.seconds_per_task / expensive.seconds_per_task
    price_up = expensive.cost_per_hour / cheap.cost_per_hour
    return speedup / price_up


def tradeoff_matrix(catalog: Catalog) -> list[list[Fraction | None]]:
    """Pairwise ratios, row = cheaper type, column = pricier type.

    Entries where the column type is not pricier than the row type are None,
    except the diagonal which is 1.
    """
    out: list[list[Fraction | None]] = []
    for a in catalog:
        row: list[Fraction | None] = []
        for b in catalog:
            if a is b:
                row.append(Fraction(1))
            elif b.cost_per_hour > a.cost_per_hour:
                row.append(tradeoff_ratio(a, b))
            else:
                row.append(None)
        out.append(row)
    return out


def classify_tradeoff(ratio: Fraction) -> str:
    if ratio == 1:
        return "fair"
    return "cost-effective" if ratio > 1 else "cost-ineffective"


_SCENARIOS: dict[int, tuple[str, Sequence[tuple[str, str, str]]]] = {
    1: (
        "fair",
        [("it1", "1", "32"), ("it2", "2", "16"), ("it3", "4", "8"),
         ("it4", "8", "4"), ("it5", "16", "2")],
    ),
    2: (
        "cost-ineffective",
        [("it1", "1", "32"), ("it2", "2", "18"), ("it3", "4", "10"),
         ("it4", "8", "6"), ("it5", "16", "4")],
    ),
    3: (
        "cost-effective",
        [("it1", "1", "32"), ("it2", "2", "15"), ("it3", "4", "7"),
         ("it4", "8", "3"), ("it5", "16", "1")],
    ),
    4: (
        "mixed",
        [("M3.Medium", "0.077", "87.37"), ("C3.Large", "0.12", "25.33"),
         ("M3.Large", "0.154", "27.08"), ("C3.Xlarge", "0.239", "12.7"),
         ("M3.Xlarge", "0.308", "13.79")],
    ),
}

SCENARIO_IDS = tuple(sorted(_SCENARIOS))


def scenario_label(scenario_id: int) -> str:
    return _SCENARIOS[scenario_id][0]


def builtin_scenario(scenario_id: int, startup: Number = DEFAULT_STARTUP) -> Catalog:
    if scenario_id not in _SCENARIOS:
        raise CatalogError(f"scenario id must be one of {SCENARIO_IDS}, got {scenario_id}")
    return make_catalog(_SCENARIOS[scenario_id][1], startup)
