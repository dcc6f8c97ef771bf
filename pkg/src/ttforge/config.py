"""Runtime limits and tunables.

Defaults match the documented desk-scale envelope; every cap exists to turn
a potential non-termination into a diagnosable error.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields, replace


@dataclass(frozen=True)
class Config:
    precision_bits: int = 256
    degree_cap: int = 8
    n_max: int = 64                  # largest power tried when hunting a Perron power
    cone_scale_start: int = 8        # rounding scale R for cone generators
    cone_scale_cap: int = 2 ** 16
    polygon_k: int = 4               # half the polygon size inscribed per complex pair
    p_cap: int = 10_000              # exponent search cap in the star recipe
    enumeration_cap: int = 10 ** 6   # lattice-point candidates in the Gordan box
    path_cap: int = 10 ** 7          # refuse to build edge paths longer than this

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise ValueError(f"{f.name} must be positive")
        if self.cone_scale_cap < self.cone_scale_start:
            raise ValueError("cone_scale_cap must be >= cone_scale_start")

    def with_overrides(self, **kwargs) -> "Config":
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **kwargs) if kwargs else self


def load_config(path: str | None = None) -> Config:
    """Build a Config from a JSON file, falling back to FORGE_CONFIG, then defaults."""
    if path is None:
        path = os.environ.get("FORGE_CONFIG")
    if not path:
        return Config()
    with open(path) as fh:
        data = json.load(fh)
    known = {f.name for f in fields(Config)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return Config(**data)
