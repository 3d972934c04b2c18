"""Run configuration: TOML files with inline matrices, overridden by CLI flags."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from typing import Optional

import tomli

from .exact import parse_exact


class ConfigError(ValueError):
    """Malformed configuration (bad schedule, inconsistent dimensions)."""


@dataclass
class RunConfig:
    subcommand: str = ""
    m: Optional[int] = None
    n: Optional[int] = None
    A: Optional[list] = None  # m x n, exact entries
    b: Optional[list] = None
    x: Optional[list] = None  # rational point of the torus (Farey point), s1 only
    eps: list = field(default_factory=list)
    X: list = field(default_factory=list)
    T: list = field(default_factory=list)
    t: list = field(default_factory=list)
    Q: list = field(default_factory=list)
    C: Optional[Fraction] = None
    mode: str = ""
    eta: Fraction = Fraction(1, 4)
    delta: Fraction = Fraction(1, 4)
    depth: int = 3
    N_cap: int = 50
    d: Optional[int] = None
    s: Optional[Fraction] = None
    alpha: Optional[Fraction] = None
    k: int = 1
    Kmax: int = 20
    seed: int = 0
    out: str = "report.json"
    csv: Optional[str] = None
    gnuplot: Optional[str] = None
    workers: int = 1

    def validate(self) -> "RunConfig":
        if self.A is not None:
            rows = len(self.A)
            if not rows or len({len(r) for r in self.A}) != 1:
                raise ConfigError("A must be a nonempty rectangular matrix")
            cols = len(self.A[0])
            if self.m is not None and self.m != rows:
                raise ConfigError(f"m = {self.m} but A has {rows} rows")
            if self.n is not None and self.n != cols:
                raise ConfigError(f"n = {self.n} but A has {cols} columns")
            self.m, self.n = rows, cols
            if self.b is not None and len(self.b) != rows:
                raise ConfigError(f"b must have {rows} entries, got {len(self.b)}")
        for name in ("X", "T", "t", "Q"):
            sched = getattr(self, name)
            if any(b <= a for a, b in zip(sched, sched[1:])):
                raise ConfigError(f"schedule {name} must be strictly increasing")
        if any(e <= 0 for e in self.eps):
            raise ConfigError("eps values must be positive")
        if self.depth < 1:
            raise ConfigError("depth must be >= 1")
        return self

    def to_json(self):
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            out[f.name] = _jsonable(v)
        return out

    def canonical(self) -> str:
        """Deterministic text used for the config hash (output paths excluded)."""
        d = self.to_json()
        for k in ("out", "csv", "gnuplot", "workers"):
            d.pop(k, None)
        return json.dumps(d, sort_keys=True, separators=(",", ":"))


def _jsonable(v):
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, Fraction):
        return str(v)
    if v is None or isinstance(v, (int, str, bool)):
        return v
    return str(v)


def parse_schedule(text) -> list:
    """'a:b' (powers of two 2^a .. 2^b), 'start:step:count', or a comma list of exact values."""
    if isinstance(text, list):
        return [parse_exact(x) if not isinstance(x, int) else Fraction(x) for x in text]
    text = str(text).strip()
    if not text:
        return []
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) == 2:
                lo, hi = int(parts[0]), int(parts[1])
                return [Fraction(2) ** j for j in range(lo, hi + 1)]
            if len(parts) == 3:
                start, step, count = Fraction(parts[0]), Fraction(parts[1]), int(parts[2])
                return [start + i * step for i in range(count)]
            raise ConfigError(f"bad schedule {text!r}")
        return [parse_exact(x) for x in text.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad schedule {text!r}: {exc}") from None


def parse_matrix(text) -> list:
    """Inline JSON (e.g. '[["1/3","1/3"]]') or a bare scalar / vector."""
    obj = json.loads(text) if isinstance(text, str) else text
    if not isinstance(obj, list):
        obj = [[obj]]
    elif obj and not isinstance(obj[0], list):
        obj = [obj]
    try:
        return [[parse_exact(x) for x in row] for row in obj]
    except ValueError as exc:
        raise ConfigError(f"bad matrix {text!r}: {exc}") from None


def parse_vector(text) -> list:
    obj = json.loads(text) if isinstance(text, str) and text.strip().startswith("[") else text
    if not isinstance(obj, list):
        obj = str(obj).split(",")
    try:
        return [parse_exact(x) for x in obj]
    except ValueError as exc:
        raise ConfigError(f"bad vector {text!r}: {exc}") from None


_SCHEDULES = ("eps", "X", "T", "t", "Q")
_FRACTIONS = ("C", "eta", "delta", "s", "alpha")


def _coerce(key, value):
    if key in _SCHEDULES:
        return parse_schedule(value)
    if key == "A":
        return parse_matrix(value)
    if key in ("b", "x"):
        return parse_vector(value)
    if key in _FRACTIONS:
        return None if value is None else Fraction(str(value))
    return value


def load_config(path: Optional[str] = None, overrides: Optional[dict] = None) -> RunConfig:
    """Read a TOML file (flat keys) and apply non-None overrides."""
    data = {}
    if path:
        try:
            with open(path, "rb") as fh:
                data = tomli.load(fh)
        except (OSError, tomli.TOMLDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
    data.update({k: v for k, v in (overrides or {}).items() if v is not None})
    known = {f.name for f in fields(RunConfig)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    cfg = RunConfig(**{k: _coerce(k, v) for k, v in data.items()})
    return cfg.validate()


def config_dict(cfg: RunConfig) -> dict:
    return asdict(cfg)
