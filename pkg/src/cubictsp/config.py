"""Run settings for the benchmark harness and the solver entry points."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class InstanceSpec:
    """One manifest entry: either a generator call or an edge-list file."""

    kind: str | None = None
    params: dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    file: str | None = None
    rotation: str | None = None
    name: str | None = None

    @classmethod
    def from_dict(cls, d: dict, default_seed: int = 0) -> "InstanceSpec":
        d = dict(d)
        kind = d.pop("kind", None)
        seed = int(d.pop("seed", default_seed))
        file = d.pop("file", None)
        rotation = d.pop("rotation", None)
        name = d.pop("name", None)
        if kind is None and file is None:
            raise ValueError(f"manifest entry needs 'kind' or 'file': {d}")
        return cls(kind, d, seed, file, rotation, name)


@dataclass
class BenchConfig:
    instances: list[InstanceSpec] = field(default_factory=list)
    seed: int = 0
    opt_max_n: int = 16  # Held-Karp is run up to this size
    solver: str = "auto"  # auto | barnette | two_connected | general

    @classmethod
    def from_dict(cls, d: dict) -> "BenchConfig":
        seed = int(d.get("seed", 0))
        items = [InstanceSpec.from_dict(x, seed) for x in d.get("instances", [])]
        return cls(items, seed, int(d.get("opt_max_n", 16)), d.get("solver", "auto"))
