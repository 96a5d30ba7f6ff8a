"""Declarative pipeline configuration (JSON or YAML, schema version 1).

Command templates are plain strings with {placeholders}; the literal
``{python}`` expands to the running interpreter so in-repo mock tools work
from config files.
"""

from __future__ import annotations

import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional, Sequence, Tuple

import yaml

CONFIG_SCHEMA_VERSION = 1
DEFAULT_BITRATES_KBPS = (100.0, 300.0, 600.0, 1000.0, 2000.0, 4000.0)
DEFAULT_STUDY_BITRATES_KBPS = (600.0, 1000.0, 2000.0)
WORKERS_ENV_VAR = "SRVQA_WORKERS"

NO_SR = "no_sr"  # built-in pseudo method: encode at native resolution


class ConfigError(Exception):
    pass


def _require_placeholders(template: str, required: Sequence[str], what: str) -> None:
    for name in required:
        if "{" + name + "}" not in template:
            raise ConfigError(f"{what} template is missing {{{name}}}: {template!r}")


def expand_template(template: str) -> str:
    return template.replace("{python}", sys.executable)


@dataclass(frozen=True)
class SourceSpec:
    path: str
    clip_id: str


@dataclass(frozen=True)
class CodecSpec:
    name: str
    encode_template: str
    decode_template: str
    preset: str = "medium"

    def __post_init__(self):
        _require_placeholders(
            self.encode_template, ("input", "output", "bitrate_kbps"), f"codec {self.name} encode"
        )
        _require_placeholders(
            self.decode_template, ("input", "output"), f"codec {self.name} decode"
        )


@dataclass(frozen=True)
class SRSpec:
    name: str
    template: str = ""  # empty for the built-in no_sr pseudo method
    scale: int = 4

    def __post_init__(self):
        if self.name == NO_SR:
            return
        if self.scale not in (2, 4):
            raise ConfigError(f"SR {self.name}: scale must be 2 or 4, got {self.scale}")
        _require_placeholders(self.template, ("in_dir", "out_dir"), f"SR {self.name}")

    @property
    def is_no_sr(self) -> bool:
        return self.name == NO_SR


@dataclass(frozen=True)
class ProviderSpec:
    kind: str  # "stub" or the provider kind name
    command: str = ""
    config: Dict[str, object] = field(default_factory=dict)


@dataclass(frozen=True)
class PipelineConfig:
    sources: Tuple[SourceSpec, ...]
    codecs: Tuple[CodecSpec, ...]
    sr_methods: Tuple[SRSpec, ...]
    output_dir: str
    target_bitrates_kbps: Tuple[float, ...] = DEFAULT_BITRATES_KBPS
    metrics: Tuple[str, ...] = ("psnr", "ms_ssim", "erqa")
    providers: Dict[str, ProviderSpec] = field(
        default_factory=lambda: {
            "lpips": ProviderSpec("stub"),
            "mdtvsfa": ProviderSpec("stub"),
            "saliency": ProviderSpec("stub"),
        }
    )
    downscale: Tuple[int, int] = (480, 270)
    downscale_template: str = ""  # external tool; empty = native bicubic
    bsq_quality: str = "erqa"
    study_bitrates_kbps: Tuple[float, ...] = DEFAULT_STUDY_BITRATES_KBPS
    crop_size: Tuple[int, int] = (480, 270)
    seed: int = 0
    workers: int = 2

    def __post_init__(self):
        if not self.sources:
            raise ConfigError("config needs at least one source clip")
        if not self.codecs:
            raise ConfigError("config needs at least one codec")
        if not self.sr_methods:
            raise ConfigError("config needs at least one SR method")
        rates = tuple(float(b) for b in self.target_bitrates_kbps)
        if any(b <= 0 for b in rates):
            raise ConfigError(f"bitrates must be positive: {rates}")
        if list(rates) != sorted(rates) or len(set(rates)) != len(rates):
            raise ConfigError(f"bitrates must be strictly ascending: {rates}")
        object.__setattr__(self, "target_bitrates_kbps", rates)
        ids = [s.clip_id for s in self.sources]
        if len(set(ids)) != len(ids):
            raise ConfigError(f"duplicate source clip ids: {ids}")
        names = [s.name for s in self.sr_methods]
        if len(set(names)) != len(names):
            raise ConfigError(f"duplicate SR method names: {names}")

    @property
    def effective_workers(self) -> int:
        env = os.environ.get(WORKERS_ENV_VAR)
        if env:
            try:
                return max(1, int(env))
            except ValueError:
                raise ConfigError(f"{WORKERS_ENV_VAR} must be an integer, got {env!r}")
        return max(1, self.workers)


def config_from_dict(payload: dict, base_dir: Optional[Path] = None) -> PipelineConfig:
    if payload.get("version") != CONFIG_SCHEMA_VERSION:
        raise ConfigError(
            f"unsupported config version {payload.get('version')!r}; "
            f"expected {CONFIG_SCHEMA_VERSION}"
        )
    base = Path(base_dir) if base_dir else Path.cwd()

    def resolve(p: str) -> str:
        path = Path(p)
        return str(path if path.is_absolute() else base / path)

    sources = tuple(
        SourceSpec(path=resolve(s["path"]), clip_id=s.get("id") or Path(s["path"]).stem)
        for s in payload.get("sources", [])
    )
    codecs = tuple(
        CodecSpec(
            name=c["name"],
            encode_template=c["encode"],
            decode_template=c["decode"],
            preset=c.get("preset", "medium"),
        )
        for c in payload.get("codecs", [])
    )
    sr_methods = tuple(
        SRSpec(
            name=s["name"],
            template=s.get("template", ""),
            scale=int(s.get("scale", 4)),
        )
        for s in payload.get("sr_methods", [])
    )
    providers = {
        name: ProviderSpec(
            kind=spec.get("kind", "stub"),
            command=spec.get("command", ""),
            config=spec.get("config", {}),
        )
        for name, spec in payload.get("providers", {}).items()
    }
    kwargs = {}
    for key in (
        "target_bitrates_kbps",
        "metrics",
        "bsq_quality",
        "study_bitrates_kbps",
        "seed",
        "workers",
        "downscale_template",
    ):
        if key in payload:
            value = payload[key]
            kwargs[key] = tuple(value) if isinstance(value, list) else value
    if "downscale" in payload:
        kwargs["downscale"] = (
            int(payload["downscale"]["width"]),
            int(payload["downscale"]["height"]),
        )
    if "crop" in payload:
        kwargs["crop_size"] = (
            int(payload["crop"]["width"]),
            int(payload["crop"]["height"]),
        )
    if not providers:
        providers = {
            "lpips": ProviderSpec("stub"),
            "mdtvsfa": ProviderSpec("stub"),
            "saliency": ProviderSpec("stub"),
        }
    return PipelineConfig(
        sources=sources,
        codecs=codecs,
        sr_methods=sr_methods,
        output_dir=resolve(payload["output_dir"]),
        providers=providers,
        **kwargs,
    )


def load_config(path) -> PipelineConfig:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix in (".yaml", ".yml"):
        payload = yaml.safe_load(text)
    else:
        payload = json.loads(text)
    return config_from_dict(payload, base_dir=path.parent)
