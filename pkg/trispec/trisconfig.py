"""
trispec.trisconfig
=================================

Configuration dataclasses and helpers used to coerce a JSON configuration
into the typed run settings consumed by the CLI and the engines.

The primary public surface is :class:`RunConfig`, which mirrors the JSON
structure users author (see ``config-sample.json``). :func:`load_config`
reads such a file and returns a typed :class:`RunConfig`.
"""

import json
import os
from dataclasses import dataclass, field, fields, is_dataclass
from pathlib import Path
from types import UnionType
from typing import Any, Literal, Union, get_args, get_origin, get_type_hints

WORD_CAP = 16
BALL_CAP = 6


class ResourceCapError(RuntimeError):
    """Raised when a requested enumeration would exceed a configured cap."""


@dataclass
class GridConfig:
    """
    Signature range for grid validation.

    Fields
    ------
    rmin, rmax: bounds on r.
    pmax: bound on p (defaults to ``qmax`` when 0).
    qmax: bound on q.
    """

    rmin: int = 3
    rmax: int = 8
    pmax: int = 0
    qmax: int = 8


@dataclass
class BruteForceConfig:
    """
    Settings of the brute-force oracle.

    Fields
    ------
    cutoff: length cutoff; ``None`` selects the signature default.
    max_word: rotation-word bound for candidate enumeration.
    conj_depth: rotation-word bound for conjugator enumeration.
    tile_budget: maximal number of tiles a single search may visit.
    """

    cutoff: float | None = None
    max_word: int = 12
    conj_depth: int = 10
    tile_budget: int = 400_000


@dataclass
class GraphConfig:
    """Radius of star balls built for ρ* and λ*."""

    ball: int = 5
    max_ball: int = BALL_CAP


@dataclass
class CertifierConfig:
    """
    Interval branch-and-bound settings.

    Fields
    ------
    eps: radius of the neighbourhoods removed around declared zero loci.
    max_depth: maximal number of bisections along one branch.
    n_max: largest pinned index of the signature region.
    tails: include continuous tails beyond ``n_max``.
    """

    eps: float = 1e-3
    max_depth: int = 40
    n_max: int = 7
    tails: bool = True


@dataclass
class OutputConfig:
    """Output format and destinations."""

    format: Literal["text", "json", "csv"] = "text"
    out: Path | None = None
    svg: Path | None = None


@dataclass
class RunConfig:
    """
    Top-level run configuration.

    This dataclass mirrors the keys accepted by the JSON configuration files.
    Command-line flags override values loaded with :func:`load_config`.
    """

    signatures: list[str] = field(default_factory=list)
    grid: GridConfig = field(default_factory=GridConfig)
    brute: BruteForceConfig = field(default_factory=BruteForceConfig)
    graph: GraphConfig = field(default_factory=GraphConfig)
    cert: CertifierConfig = field(default_factory=CertifierConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    seed: int = 0
    jobs: int = 1
    word_cap: int = WORD_CAP

    def check(self) -> None:
        """Enforce the word and ball caps."""
        cap = min(self.word_cap, WORD_CAP)
        for name, value in (
            ("max_word", self.brute.max_word),
            ("conj_depth", self.brute.conj_depth),
        ):
            if value > cap:
                msg = f"{name}={value} exceeds the word cap {cap}"
                raise ResourceCapError(msg)
        if self.graph.ball > min(self.graph.max_ball, BALL_CAP):
            msg = f"ball radius {self.graph.ball} exceeds the cap {BALL_CAP}"
            raise ResourceCapError(msg)
        if self.jobs < 1:
            msg = f"jobs must be positive, got {self.jobs}"
            raise ValueError(msg)

    def as_dict(self) -> dict[str, Any]:
        """JSON-friendly view used in report metadata."""
        return _plain(self)


def _plain(obj: Any) -> Any:
    if is_dataclass(obj):
        return {f.name: _plain(getattr(obj, f.name)) for f in fields(obj)}
    if isinstance(obj, Path):
        return str(obj)
    if isinstance(obj, list):
        return [_plain(v) for v in obj]
    return obj


def _optional_inner(tp: Any) -> tuple[Any, bool]:
    """Split ``X | None`` into ``(X, True)``; other annotations pass unchanged."""
    if get_origin(tp) in (Union, UnionType):
        rest = [a for a in get_args(tp) if a is not type(None)]
        if len(rest) == 1:
            return rest[0], True
    return tp, False


def _setting(where: str, value: Any, tp: Any) -> Any:
    """Check one JSON value against the annotation of a config field."""
    tp, nullable = _optional_inner(tp)
    if value is None:
        if nullable:
            return None
        msg = f"{where} may not be null"
        raise ValueError(msg)
    if is_dataclass(tp):
        if not isinstance(value, dict):
            msg = f"{where} must be an object, got {type(value).__name__}"
            raise ValueError(msg)
        return _section(value, tp, where)
    if get_origin(tp) is Literal:
        if value not in get_args(tp):
            msg = f"{where} must be one of {', '.join(get_args(tp))}, got {value!r}"
            raise ValueError(msg)
        return value
    if get_origin(tp) is list:
        if not isinstance(value, list):
            msg = f"{where} must be a list, got {type(value).__name__}"
            raise ValueError(msg)
        (item,) = get_args(tp)
        return [_setting(f"{where}[{i}]", v, item) for i, v in enumerate(value)]
    if tp is Path:
        return Path(value)
    if tp is float and isinstance(value, int) and not isinstance(value, bool):
        return float(value)
    if tp in (int, float, str, bool) and (type(value) is not tp):
        msg = f"{where} must be {tp.__name__}, got {value!r}"
        raise ValueError(msg)
    return value


def _section(raw: dict[str, Any], cls: type[Any], where: str = "config") -> Any:
    """Build one config dataclass from its JSON object; unknown keys are errors."""
    hints = get_type_hints(cls)
    names = {f.name for f in fields(cls)}
    unknown = sorted(set(raw) - names)
    if unknown:
        msg = f"unknown key(s) in {where}: {', '.join(unknown)}"
        raise ValueError(msg)
    return cls(**{k: _setting(f"{where}.{k}", v, hints[k]) for k, v in raw.items()})


def load_config(path: str | Path) -> RunConfig:
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(raw, dict):
        msg = f"config {path} must hold a JSON object"
        raise ValueError(msg)
    return _section(raw, RunConfig)


def config_from_env(cfg: RunConfig | None = None) -> RunConfig:
    """
    Build a config from ``TRISPEC_CONFIG`` and ``TRISPEC_JOBS``.

    The caller is expected to have run ``load_dotenv()`` first so that a
    local ``.env`` file can provide these variables.
    """
    path = os.environ.get("TRISPEC_CONFIG", "")
    if cfg is None:
        cfg = load_config(path) if path else RunConfig()
    jobs = os.environ.get("TRISPEC_JOBS", "")
    if jobs:
        try:
            cfg.jobs = int(jobs)
        except ValueError as exc:
            msg = f"TRISPEC_JOBS must be an integer, got {jobs!r}"
            raise ValueError(msg) from exc
    return cfg
