"""Shared JSON configuration for the command-line tool."""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Mapping

from qkdring.errors import ConfigError
from qkdring.skr_model import BUILTIN_PROFILES, SkrProfile
from qkdring.topology import RING_FIELDS

TOP_LEVEL_KEYS = {"profiles", "ring", "flags"}
FLAG_KEYS = {"adjacent_uses_chord", "gs_factor_two"}

RING_DEFAULTS: dict[str, Any] = {
    "n_nodes": 5,
    "adjacent_len_km": 10.0,
    "alpha_db_per_km": 0.21,
    "switch_penalty_db": 5.0,
    "adjacent_uses_chord": False,
}


@dataclass(frozen=True)
class AppConfig:
    profiles: dict[str, SkrProfile] = field(default_factory=lambda: dict(BUILTIN_PROFILES))
    ring: dict[str, Any] = field(default_factory=lambda: dict(RING_DEFAULTS))
    adjacent_uses_chord: bool = False
    gs_factor_two: bool = False

    def profile(self, name: str) -> SkrProfile:
        try:
            return self.profiles[name]
        except KeyError:
            raise ConfigError(f"unknown profile {name!r}; known: {sorted(self.profiles)}") from None

    def with_flags(self, **overrides: Any) -> AppConfig:
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


def _reject_unknown(doc: Mapping[str, Any], allowed: set[str] | tuple[str, ...], where: str) -> None:
    unknown = set(doc) - set(allowed)
    if unknown:
        raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")


def parse_config(doc: Mapping[str, Any]) -> AppConfig:
    if not isinstance(doc, Mapping):
        raise ConfigError("config root must be a JSON object")
    _reject_unknown(doc, TOP_LEVEL_KEYS, "config")

    profiles = dict(BUILTIN_PROFILES)
    seen: set[str] = set()
    for i, entry in enumerate(doc.get("profiles", [])):
        if not isinstance(entry, Mapping):
            raise ConfigError(f"profiles[{i}] must be an object")
        name = entry.get("name")
        if name in seen:
            raise ConfigError(f"duplicate profile name {name!r}")
        base = BUILTIN_PROFILES[name].params if name in BUILTIN_PROFILES else None
        prof = SkrProfile.from_dict(entry, base)
        seen.add(prof.name)
        profiles[prof.name] = prof

    ring_doc = doc.get("ring", {})
    if not isinstance(ring_doc, Mapping):
        raise ConfigError("ring must be an object")
    _reject_unknown(ring_doc, RING_FIELDS, "ring")
    ring = {**RING_DEFAULTS, **ring_doc}

    flags = doc.get("flags", {})
    if not isinstance(flags, Mapping):
        raise ConfigError("flags must be an object")
    _reject_unknown(flags, FLAG_KEYS, "flags")
    for key, value in flags.items():
        if not isinstance(value, bool):
            raise ConfigError(f"flags.{key} must be a boolean")

    return AppConfig(
        profiles=profiles,
        ring=ring,
        adjacent_uses_chord=flags.get("adjacent_uses_chord", bool(ring["adjacent_uses_chord"])),
        gs_factor_two=flags.get("gs_factor_two", False),
    )


def load_config(path: str | Path | None) -> AppConfig:
    if path is None:
        return AppConfig()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    return parse_config(doc)
