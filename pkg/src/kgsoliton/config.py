"""Flat key=value experiment configuration.

Sections are dotted (solver.dt=0.005); '#' starts a comment.  Every CSV the
CLI writes carries a header block with the configuration hash, the grid,
and the cutoff sharpness, so runs are reproducible byte for byte.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, fields


class ConfigError(ValueError):
    """Invalid or inconsistent configuration."""


_BOOL = {"true": True, "1": True, "yes": True, "on": True,
         "false": False, "0": False, "no": False, "off": False}


@dataclass
class ExperimentConfig:
    grid_L: float = 80.0
    grid_N: int = 4096
    solver_dt: float = 0.01
    solver_t_end: float = 20.0
    solver_integrator: str = "strang"
    solver_dealias: bool = True
    solver_output_stride: int = 5
    data_family: str = "gaussian_bump"
    data_eps: float = 0.05
    data_sigma: float = 3.0
    data_d: float = 0.0
    data_file: str = ""
    shoot_t_goal: float = 200.0
    shoot_max_iter: int = 40
    shoot_bracket_override: float = 0.0
    output_stride: int = 1
    cutoff_sharpness: int = 0
    seed: int = 0

    @staticmethod
    def _key_to_field(key: str) -> str:
        return key.strip().replace(".", "_").replace("-", "_")

    @classmethod
    def from_items(cls, items: dict[str, str]) -> "ExperimentConfig":
        cfg = cls()
        valid = {f.name: f.type for f in fields(cls)}
        for key, raw in items.items():
            name = cls._key_to_field(key)
            if name not in valid:
                raise ConfigError(f"unknown config key {key!r}")
            current = getattr(cfg, name)
            try:
                if isinstance(current, bool):
                    value = _BOOL[raw.strip().lower()]
                elif isinstance(current, int):
                    value = int(raw)
                elif isinstance(current, float):
                    value = float(raw)
                else:
                    value = raw.strip()
            except (ValueError, KeyError) as exc:
                raise ConfigError(f"bad value for {key!r}: {raw!r}") from exc
            setattr(cfg, name, value)
        return cfg

    @classmethod
    def from_file(cls, path: str) -> "ExperimentConfig":
        items: dict[str, str] = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                stripped = line.split("#", 1)[0].strip()
                if not stripped:
                    continue
                if "=" not in stripped:
                    raise ConfigError(f"{path}:{lineno}: expected key=value")
                key, raw = stripped.split("=", 1)
                items[key.strip()] = raw.strip()
        return cls.from_items(items)

    def canonical_items(self) -> list[tuple[str, str]]:
        out = []
        for f in sorted(fields(self), key=lambda f: f.name):
            value = getattr(self, f.name)
            key = f.name.replace("_", ".", 1)
            out.append((key, repr(value) if isinstance(value, float) else str(value)))
        return out

    def config_hash(self) -> str:
        text = "\n".join(f"{k}={v}" for k, v in self.canonical_items())
        return hashlib.sha256(text.encode()).hexdigest()[:12]

    def validate(self, needs_box_guard: bool = False) -> None:
        if self.grid_L <= 0:
            raise ConfigError("grid.L must be positive")
        n = self.grid_N
        if n <= 0 or (n & (n - 1)) != 0:
            raise ConfigError("grid.N must be a power of two")
        if self.solver_dt <= 0 or self.solver_t_end <= 0:
            raise ConfigError("solver.dt and solver.t_end must be positive")
        if self.solver_integrator not in ("strang", "etdrk4"):
            raise ConfigError(f"unknown integrator {self.solver_integrator!r}")
        if self.data_eps <= 0:
            raise ConfigError("data.eps must be positive")
        if needs_box_guard and self.grid_L < 2.0 * self.solver_t_end + 40.0:
            raise ConfigError(
                f"box rule violated: grid.L={self.grid_L:g} < "
                f"2*solver.t_end + 40 = {2 * self.solver_t_end + 40:g}")
