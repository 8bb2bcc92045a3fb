"""Run configuration: defaults, flat key=value config files, CLI overrides.

Sweep grammars: "a:b:s" is an inclusive begin:end:step range, "a,b,c" a
comma list, and a bare number a single value.  The cutoff scale is given in
multiples of the grid's frequency spacing so configurations stay meaningful
across grid sizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from pathlib import Path


def parse_reals(text: str) -> tuple[float, ...]:
    """Parse "0:16:1", "4,8,16", or "4" into a tuple of floats."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"range must be begin:end:step, got {text!r}")
        begin, end, step = (float(p) for p in parts)
        if step <= 0:
            raise ValueError(f"range step must be positive, got {step}")
        count = int(math.floor((end - begin) / step + 1e-9)) + 1
        if count < 1:
            raise ValueError(f"empty range {text!r}")
        return tuple(begin + i * step for i in range(count))
    return tuple(float(tok) for tok in text.split(",") if tok.strip())


def parse_ints(text: str) -> tuple[int, ...]:
    vals = parse_reals(text)
    out = []
    for v in vals:
        if v != int(v):
            raise ValueError(f"expected integers, got {v}")
        out.append(int(v))
    return tuple(out)


@dataclass(frozen=True)
class RunConfig:
    """Full effective configuration; echoed verbatim into every report."""

    n: int = 512
    half_width: float = 4.0
    p: float = 4.0 / 3.0
    # cutoff scales in frequency-cell units; None means the subcommand picks
    # its own reference default
    delta_units: tuple[float, ...] | None = None
    profile: str = "quintic_smoothstep"
    k_list: tuple[int, ...] | None = None
    t_list: tuple[float, ...] | None = None
    fn: str | None = None
    potential: str | None = None
    seed_fn: str | None = None
    r: float = 0.2
    r_inner: float | None = None
    no_solve: bool = False
    tol: float = 1e-8
    max_iter: int = 64
    out: str | None = None
    fmt: str = "json"
    rng_seed: int = 0
    dump_fields: bool = False
    no_timestamp: bool = False

    def __post_init__(self):
        if self.fmt not in ("json", "csv"):
            raise ValueError(f"format must be json or csv, got {self.fmt!r}")

    def effective(self) -> dict:
        d = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = list(v)
            d[f.name] = v
        return d


_PARSERS = {
    "n": int,
    "half_width": float,
    "L": float,  # alias
    "p": float,
    "delta_units": parse_reals,
    "delta": parse_reals,  # alias
    "profile": str,
    "k_list": parse_ints,
    "k": parse_ints,  # alias
    "t_list": parse_reals,
    "t": parse_reals,  # alias
    "fn": str,
    "potential": str,
    "seed_fn": str,
    "r": float,
    "r_inner": float,
    "no_solve": lambda s: s.lower() in ("1", "true", "yes"),
    "tol": float,
    "max_iter": int,
    "out": str,
    "fmt": str,
    "format": str,  # alias
    "rng_seed": int,
    "seed": int,  # alias
    "dump_fields": lambda s: s.lower() in ("1", "true", "yes"),
    "no_timestamp": lambda s: s.lower() in ("1", "true", "yes"),
}

_ALIASES = {
    "L": "half_width",
    "delta": "delta_units",
    "k": "k_list",
    "t": "t_list",
    "format": "fmt",
    "seed": "rng_seed",
}


def load_config_file(path: str | Path) -> dict:
    """Parse a flat key=value file (blank lines and # comments allowed)."""
    overrides: dict = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _PARSERS:
            raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
        overrides[_ALIASES.get(key, key)] = _PARSERS[key](value)
    return overrides


def build_config(file_path: str | Path | None, cli_overrides: dict) -> RunConfig:
    """Defaults, then the config file, then explicit CLI flags."""
    merged: dict = {}
    if file_path is not None:
        merged.update(load_config_file(file_path))
    merged.update({k: v for k, v in cli_overrides.items() if v is not None})
    return replace(RunConfig(), **merged)
