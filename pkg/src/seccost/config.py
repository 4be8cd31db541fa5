"""Plain-text key-value configuration for profiles, cipher caps and CPU slopes.

Sections::

    [profile fh-pt]
    anchors = [[62, 110.0], [9000, 130.0]]

    [caps]
    AES256-GCM = 1400

    [cpu]
    pt_slope = 3.65e-5
    ct_slope = 0.002
    saturation = 1.0

    [load-latency fh-macsec-enc]
    anchors = [[0, 39], [2300, 4300]]
    cap = 2300

A file holding a single profile may skip the section header and give
``name = ...`` and ``anchors = ...`` directly.
"""

from __future__ import annotations

import configparser
import json
import os
from dataclasses import dataclass, field, replace

from .delaymodel import ProcessingProfile, default_profiles
from .errors import ConfigError, ProfileError
from .perfmodel import LOAD_LATENCY_PROFILES, CipherCapTable, CpuModel, LoadLatencyProfile

ENV_VAR = "SECCOST_CONFIG"


@dataclass
class Config:
    profiles: dict[str, ProcessingProfile] = field(default_factory=default_profiles)
    caps: CipherCapTable = field(default_factory=CipherCapTable)
    cpu: CpuModel = field(default_factory=CpuModel)
    load_profiles: dict[str, LoadLatencyProfile] = field(default_factory=lambda: dict(LOAD_LATENCY_PROFILES))
    source: str | None = None

    def profile(self, name: str) -> ProcessingProfile:
        try:
            return self.profiles[name]
        except KeyError:
            raise ConfigError(f"unknown profile {name!r}; known: {', '.join(sorted(self.profiles))}") from None


def _anchors(section, where: str):
    try:
        pts = json.loads(section["anchors"])
    except KeyError:
        raise ConfigError(f"{where}: missing 'anchors'") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{where}: anchors are not a [[x, y], ...] list: {exc}") from None
    if not isinstance(pts, list) or not all(isinstance(p, list) and len(p) == 2 for p in pts):
        raise ConfigError(f"{where}: anchors must be [[x, y], ...]")
    return pts


def parse_config(text: str, source: str = "<string>", base: Config | None = None) -> Config:
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # keep cipher names as written
    body = text if text.lstrip().startswith("[") else "[profile]\n" + text
    try:
        parser.read_string(body, source=source)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None
    cfg = base or Config()
    cfg = replace(cfg, profiles=dict(cfg.profiles), load_profiles=dict(cfg.load_profiles), source=source)
    for name in parser.sections():
        sec = parser[name]
        kind, _, label = name.partition(" ")
        label = label.strip()
        try:
            if kind == "profile":
                label = label or sec.get("name", "").strip()
                if not label:
                    raise ConfigError(f"{source}: profile needs a name")
                cfg.profiles[label] = ProcessingProfile(label, _anchors(sec, f"{source}[{name}]"),
                                                        sec.get("description", ""))
            elif kind == "caps":
                merged = dict(cfg.caps.entries)
                merged.update({k: float(v) for k, v in sec.items()})
                cfg.caps = CipherCapTable(merged)
            elif kind == "cpu":
                cfg.cpu = CpuModel(**{k: float(v) for k, v in sec.items()})
            elif kind == "load-latency":
                if not label:
                    raise ConfigError(f"{source}: load-latency section needs a name")
                cfg.load_profiles[label] = LoadLatencyProfile(
                    tuple(map(tuple, _anchors(sec, f"{source}[{name}]"))), float(sec["cap"]), label)
            else:
                raise ConfigError(f"{source}: unknown section [{name}]")
        except (ValueError, TypeError, KeyError, ProfileError) as exc:
            raise ConfigError(f"{source}[{name}]: {exc}") from None
    return cfg


def load_config(path: str | None = None) -> Config:
    """Defaults, overridden by ``path`` or else the SECCOST_CONFIG file."""
    path = path or os.environ.get(ENV_VAR)
    if not path:
        return Config()
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text, source=str(path))
