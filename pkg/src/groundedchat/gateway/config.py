"""Server configuration: defaults, overridden by a JSON file, overridden by
GROUNDEDCHAT_* environment variables."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields
from pathlib import Path

from ..embodiment import ExecutorConfig, SynthConfig, WorldConfig
from ..errors import ConfigurationError

_ENV_KEYS = {
    "GROUNDEDCHAT_HOST": ("host", str),
    "GROUNDEDCHAT_PORT": ("port", int),
    "GROUNDEDCHAT_BACKEND_URL": ("backend_url", str),
    "GROUNDEDCHAT_API_KEY": ("api_key", str),
    "GROUNDEDCHAT_MODEL": ("model_id", str),
}


@dataclass
class AppConfig:
    host: str = "127.0.0.1"
    port: int = 8080
    backend_url: str | None = None
    api_key: str | None = None
    model_id: str = "gpt-3.5-turbo"
    temperature: float = 0.2
    max_tokens: int = 512
    history_budget: int = 4000
    synth_latency_base: float = 0.1
    synth_latency_per_char: float = 0.005
    synth_duration_per_char: float = 0.05
    look_duration: float = 0.5
    point_duration: float = 1.5
    give_duration: float = 3.0
    motion_start: float = 0.2
    push_distance: float = 0.25
    event_buffer_size: int = 1000

    def synth_config(self) -> SynthConfig:
        return SynthConfig(latency_base=self.synth_latency_base,
                           latency_per_char=self.synth_latency_per_char,
                           duration_per_char=self.synth_duration_per_char)

    def executor_config(self) -> ExecutorConfig:
        return ExecutorConfig(look_duration=self.look_duration,
                              point_duration=self.point_duration,
                              give_duration=self.give_duration,
                              motion_start=self.motion_start)

    def world_config(self) -> WorldConfig:
        return WorldConfig(push_distance=self.push_distance)


def load_config(path: str | Path | None = None,
                env: dict | None = None) -> AppConfig:
    env = os.environ if env is None else env
    values: dict = {}
    if path is not None:
        try:
            with open(path, encoding="utf-8") as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
        known = {f.name for f in fields(AppConfig)}
        unknown = set(data) - known
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
        values.update(data)
    for key, (name, cast) in _ENV_KEYS.items():
        if key in env and env[key] != "":
            values[name] = cast(env[key])
    return AppConfig(**values)
