"""Run configuration: defaults, a flat ``key = value`` file format, and CLI overrides."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, fields
from pathlib import Path

from .classifier import SolverParams
from .encoding import Encoding
from .experiments import DEFAULT_PC_LIST, NOISE_STAGES, SplitSpec


@dataclass(frozen=True)
class Config:
    encoding: str = "seg2"
    pcs: int = 200
    lam: float = 1e-4
    tol: float = 1e-6
    max_iter: int = 5000
    seed: int = 0
    train_per_class: int = 300
    drop_ambiguous: bool = False
    sigma: float = 1.0
    pc_list: tuple[int, ...] = DEFAULT_PC_LIST
    noise_stage: str = "projected"
    jobs: int = 1

    def __post_init__(self):
        Encoding(self.encoding)
        if self.pcs < 1:
            raise ValueError(f"pcs must be positive, got {self.pcs}")
        if self.train_per_class < 0:
            raise ValueError("train_per_class must be nonnegative")
        if not self.sigma >= 0:
            raise ValueError(f"sigma must be nonnegative, got {self.sigma}")
        if self.noise_stage not in NOISE_STAGES:
            raise ValueError(f"noise_stage must be one of {NOISE_STAGES}")
        if self.jobs < 1:
            raise ValueError(f"jobs must be positive, got {self.jobs}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")
        self.solver  # validates lam / tol / max_iter

    @property
    def solver(self) -> SolverParams:
        return SolverParams(self.lam, self.tol, self.max_iter)

    @property
    def split(self) -> SplitSpec:
        return SplitSpec(self.train_per_class, self.seed)

    def merged(self, **overrides) -> "Config":
        return dataclasses.replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def as_header(self) -> dict:
        """Settings that can change results (``jobs`` cannot, so it is left out)."""
        d = dataclasses.asdict(self)
        del d["jobs"]
        d["pc_list"] = ",".join(map(str, self.pc_list))
        return d


# file keys that differ from field names
_ALIASES = {"lambda": "lam", "max-iter": "max_iter"}
_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _parse_bool(s: str) -> bool:
    s = s.lower()
    if s in _TRUE:
        return True
    if s in _FALSE:
        return False
    raise ValueError(f"not a boolean: {s!r}")


def parse_pc_list(s: str) -> tuple[int, ...]:
    return tuple(int(x) for x in s.replace(" ", "").split(",") if x)


def _convert(name: str, raw: str):
    if name == "pc_list":
        return parse_pc_list(raw)
    typ = {f.name: f.type for f in fields(Config)}[name]
    if typ in ("bool", bool):
        return _parse_bool(raw)
    if typ in ("int", int):
        return int(raw)
    if typ in ("float", float):
        return float(raw)
    return raw


def parse_config(text: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment. Keys mirror CLI flags."""
    known = {f.name for f in fields(Config)}
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key = value")
        key, raw = (s.strip() for s in line.split("=", 1))
        key = _ALIASES.get(key, key).replace("-", "_")
        if key not in known:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        try:
            out[key] = _convert(key, raw)
        except ValueError as e:
            raise ValueError(f"config line {lineno}: {e}") from None
    return out


def load_config(path=None, **overrides) -> Config:
    base = parse_config(Path(path).read_text()) if path else {}
    return Config(**base).merged(**overrides)
