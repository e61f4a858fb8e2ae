"""Benchmark fixtures: named inputs with recorded divisors.

The divisor lists live in a versioned text file (one decimal integer per
line under a name header) so they can be audited without touching code.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .descent import RationalBase
from .expr import parse_expression


@dataclass(frozen=True)
class Fixture:
    name: str
    expression: str
    base: RationalBase
    known_divisors: tuple[int, ...]
    expected_factor_digits: int | None

    def value(self) -> int:
        """Evaluate the input expression exactly."""
        return _fixture_value(self.name)


@lru_cache(maxsize=None)
def _fixture_value(name: str) -> int:
    return parse_expression(_load()[name].expression)


@lru_cache(maxsize=1)
def _load() -> dict[str, Fixture]:
    text = (resources.files("rbd") / "data" / "fixtures.txt").read_text()
    fixtures: dict[str, Fixture] = {}
    name = None
    fields: dict[str, str] = {}
    divisors: list[int] = []

    def flush() -> None:
        if name is None:
            return
        fixtures[name] = Fixture(
            name=name,
            expression=fields["expr"],
            base=RationalBase.parse(fields["base"]),
            known_divisors=tuple(divisors),
            expected_factor_digits=int(fields["digits"]) if "digits" in fields else None,
        )

    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("schema"):
            continue
        if line.startswith("[") and line.endswith("]"):
            flush()
            name = line[1:-1]
            fields = {}
            divisors = []
        elif line[0].isdigit():
            divisors.append(int(line))
        else:
            key, _, value = line.partition(" ")
            fields[key] = value.strip()
    flush()
    return fixtures


FIXTURE_NAMES = ("cunningham_1041", "repunit_2224", "repunit_153", "repunit_366")


def get_fixture(name: str) -> Fixture:
    """Look up a benchmark fixture by name; unknown names raise ValueError."""
    try:
        return _load()[name]
    except KeyError:
        raise ValueError(
            f"unknown fixture {name!r}; available: {', '.join(FIXTURE_NAMES)}"
        ) from None


def all_fixtures() -> tuple[Fixture, ...]:
    return tuple(_load()[n] for n in FIXTURE_NAMES)
