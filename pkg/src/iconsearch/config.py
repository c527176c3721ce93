"""Service configuration: flat key=value files with ICONSEARCH_* env overrides."""

import os
from dataclasses import dataclass, fields

ENV_PREFIX = "ICONSEARCH_"

_INT_FIELDS = {"port", "default_k", "default_n", "default_probe", "ivf_partitions", "ivf_seed", "encoder_dim"}


class ConfigError(ValueError):
    pass


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8642
    scheme_path: str | None = None
    embeddings_path: str | None = None
    metadata_path: str | None = None
    adapter_table_path: str | None = None
    encoder_endpoint: str | None = None
    encoder_dim: int | None = None
    default_k: int = 100
    default_n: int = 20
    default_probe: int | None = None
    ivf_partitions: int | None = None
    ivf_seed: int = 0
    static_dir: str | None = None

    def validate(self) -> None:
        if self.default_k < 1 or self.default_n < 1:
            raise ConfigError(f"default_k/default_n must be >= 1, got {self.default_k}/{self.default_n}")
        for name in ("scheme_path", "embeddings_path", "metadata_path"):
            value = getattr(self, name)
            if value is None:
                raise ConfigError(f"{name} is required")
            if not os.path.exists(value):
                raise ConfigError(f"{name} does not exist: {value}")
        if self.adapter_table_path is not None and not os.path.exists(self.adapter_table_path):
            raise ConfigError(f"adapter_table_path does not exist: {self.adapter_table_path}")
        if self.static_dir is not None and not os.path.isdir(self.static_dir):
            raise ConfigError(f"static_dir is not a directory: {self.static_dir}")


def _coerce(name: str, raw: str):
    if name in _INT_FIELDS:
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{name} must be an integer, got {raw!r}") from None
    return raw


def load_config(path=None, env=None) -> ServiceConfig:
    """Read ``key=value`` lines (# comments allowed), then apply env overrides."""
    known = {f.name for f in fields(ServiceConfig)}
    values = {}

    if path is not None:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
                key, value = (part.strip() for part in line.split("=", 1))
                if key not in known:
                    raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
                values[key] = _coerce(key, value)

    env = os.environ if env is None else env
    for key in known:
        raw = env.get(ENV_PREFIX + key.upper())
        if raw is not None:
            values[key] = _coerce(key, raw)

    return ServiceConfig(**values)
