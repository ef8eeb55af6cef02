"""Engine configuration: a flat `key = value` text file with `#` comments.
Paths are resolved relative to the config file. Command-line flags override
whatever the file says."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from decimal import Decimal, InvalidOperation
from pathlib import Path

from .model import Iri, expand_curie
from .vocab import DEFAULT_CATEGORIES, EX


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class SdhThreshold:
    indicator: str
    direction: str  # above | below
    threshold: Decimal
    class_iri: Iri

    def marks_adverse(self, value: Decimal) -> bool:
        return value >= self.threshold if self.direction == "above" else value <= self.threshold


DEFAULT_SDH_THRESHOLDS: tuple[SdhThreshold, ...] = (
    SdhThreshold("poverty_rate", "above", Decimal("0.2"), Iri(EX + "High_Poverty")),
    SdhThreshold("transit_access", "below", Decimal("0.3"), Iri(EX + "Poor_Transit_Access")),
)


@dataclass(frozen=True)
class EngineConfig:
    ontology_path: Path | None = None
    data_paths: tuple[Path, ...] = ()
    rule_paths: tuple[Path, ...] = ()
    categories: tuple[Iri, ...] = DEFAULT_CATEGORIES
    skolem_depth: int = 2
    max_rounds: int = 20
    nho_frequency_threshold: int = 3
    sdh_thresholds: tuple[SdhThreshold, ...] = DEFAULT_SDH_THRESHOLDS
    question_catalog_path: Path | None = None
    listen: str = "127.0.0.1:8075"
    order: str = "asc"
    prefixes: dict[str, str] = field(default_factory=lambda: {"ex": EX})

    def with_overrides(self, **kwargs) -> "EngineConfig":
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **kwargs)

    def validate_paths(self) -> None:
        missing = [
            str(p) for p in (
                *( [self.ontology_path] if self.ontology_path else [] ),
                *self.data_paths,
                *self.rule_paths,
                *( [self.question_catalog_path] if self.question_catalog_path else [] ),
            )
            if not Path(p).exists()
        ]
        if missing:
            raise ConfigError(f"configured paths do not exist: {', '.join(missing)}")
        if self.skolem_depth < 0 or self.max_rounds < 0 or self.nho_frequency_threshold < 0:
            raise ConfigError("numeric limits must be >= 0")


def _parse_iri(value: str, prefixes: dict[str, str]) -> Iri:
    value = value.strip()
    if value.startswith("<") and value.endswith(">"):
        return Iri(value[1:-1])
    if ":" in value and not value.startswith("http"):
        return expand_curie(prefixes, value)
    return Iri(value)


def _parse_threshold(indicator: str, spec: str, prefixes: dict[str, str]) -> SdhThreshold:
    # e.g. "above 0.2 -> ex:High_Poverty"
    try:
        condition, target = spec.split("->")
        direction, raw = condition.split()
        if direction not in ("above", "below"):
            raise ValueError(direction)
        return SdhThreshold(indicator, direction, Decimal(raw), _parse_iri(target, prefixes))
    except (ValueError, InvalidOperation) as exc:
        raise ConfigError(f"bad sdh threshold for {indicator!r}: {spec!r} ({exc})") from None


def _strip_comment(line: str) -> str:
    """A '#' starts a comment only at line start or after whitespace, so
    IRI values like `http://aceso.example/#` survive."""
    if line.lstrip().startswith("#"):
        return ""
    for i, c in enumerate(line):
        if c == "#" and i > 0 and line[i - 1] in " \t":
            return line[:i]
    return line


def load_config(path: Path | str, check_paths: bool = True) -> EngineConfig:
    path = Path(path)
    base = path.parent
    entries: list[tuple[str, str]] = []
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        stripped = _strip_comment(line).strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = stripped.split("=", 1)
        entries.append((key.strip(), value.strip()))

    prefixes = {"ex": EX}
    for key, value in entries:
        if key.startswith("prefix."):
            prefixes[key[len("prefix."):]] = value

    cfg = EngineConfig(prefixes=prefixes)
    sdh: list[SdhThreshold] = []
    for key, value in entries:
        if key == "ontology":
            cfg = cfg.with_overrides(ontology_path=base / value)
        elif key == "data":
            cfg = cfg.with_overrides(
                data_paths=tuple(base / p.strip() for p in value.split(",") if p.strip()))
        elif key == "rules":
            cfg = cfg.with_overrides(
                rule_paths=tuple(base / p.strip() for p in value.split(",") if p.strip()))
        elif key == "categories":
            cfg = cfg.with_overrides(
                categories=tuple(_parse_iri(c, prefixes) for c in value.split(",") if c.strip()))
        elif key == "skolem_depth":
            cfg = cfg.with_overrides(skolem_depth=int(value))
        elif key == "max_rounds":
            cfg = cfg.with_overrides(max_rounds=int(value))
        elif key == "nho_frequency_threshold":
            cfg = cfg.with_overrides(nho_frequency_threshold=int(value))
        elif key == "question_catalog":
            cfg = cfg.with_overrides(question_catalog_path=base / value)
        elif key == "listen":
            cfg = cfg.with_overrides(listen=value)
        elif key == "order":
            if value not in ("asc", "desc"):
                raise ConfigError(f"order must be asc or desc, got {value!r}")
            cfg = cfg.with_overrides(order=value)
        elif key.startswith("sdh."):
            sdh.append(_parse_threshold(key[len("sdh."):], value, prefixes))
        elif key.startswith("prefix."):
            pass
        else:
            raise ConfigError(f"unknown configuration key: {key!r}")
    if sdh:
        cfg = cfg.with_overrides(sdh_thresholds=tuple(sdh))
    if check_paths:
        cfg.validate_paths()
    return cfg
