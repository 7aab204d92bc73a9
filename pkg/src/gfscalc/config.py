"""Run configuration for the verification harness and the command line."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields

from .errors import InvalidSpec


@dataclass
class RunConfig:
    """All knobs of a verification run.  Defaults are the documented ones;
    ``profile = "quick"`` shrinks sample counts for smoke runs."""

    profile: str = "default"
    seed: int = 7
    circle_tol: float = 1e-10
    circle_nmax: int = 2**20
    radial_tol: float = 1e-9
    r_min: float = 1e-3
    r_max: float = 10.0
    grid_points: int = 30
    gfs_samples: int = 64
    dfc_samples: int = 32
    gamma_K: int = 2000
    holder_instances: int = 20
    random_instances: int = 10
    horizon: int = 2048
    log_degrees: tuple = (2, 4, 8, 16, 32, 64)
    log_samples: int = 64

    def __post_init__(self):
        if self.profile not in ("default", "quick"):
            raise InvalidSpec(f"unknown profile {self.profile!r}")
        if not (0 < self.r_min < self.r_max - 1):
            raise InvalidSpec("need 0 < r_min < r_max - 1")
        self.log_degrees = tuple(int(n) for n in self.log_degrees)

    @classmethod
    def quick(cls, **overrides) -> "RunConfig":
        base = dict(profile="quick", gfs_samples=16, dfc_samples=8, gamma_K=500,
                    holder_instances=4, random_instances=3, grid_points=12,
                    horizon=256, log_degrees=(2, 8, 32), log_samples=16)
        base.update(overrides)
        return cls(**base)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InvalidSpec(f"unknown configuration keys: {sorted(unknown)}")
        if data.get("profile") == "quick":
            return cls.quick(**{k: v for k, v in data.items() if k != "profile"})
        return cls(**data)

    @classmethod
    def load(cls, path) -> "RunConfig":
        with open(path) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise InvalidSpec(f"configuration is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise InvalidSpec("configuration must be a JSON object")
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["log_degrees"] = list(self.log_degrees)
        return d
