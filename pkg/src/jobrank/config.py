"""Engine configuration: one human-readable document holding every constant.

The packaged ``data/engine_config.yaml`` carries the defaults; deployments
may point the CLI/service at an override file. Modules never hard-code
pipeline constants — they read them from here, and the benchmark manifest
pins the values a run used.
"""

from __future__ import annotations

import copy
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

import yaml

_DEFAULTS_CACHE: dict[str, Any] | None = None


def default_config() -> dict[str, Any]:
    """The packaged engine configuration as a plain dict (deep copy)."""
    global _DEFAULTS_CACHE
    if _DEFAULTS_CACHE is None:
        text = resources.files("jobrank.data").joinpath("engine_config.yaml").read_text()
        _DEFAULTS_CACHE = _canonicalize(yaml.safe_load(text))
    return copy.deepcopy(_DEFAULTS_CACHE)


def load_config(path: str | Path | None = None) -> dict[str, Any]:
    """Load the engine config, overlaying an optional override file.

    Overrides merge section-by-section (dicts recursively; scalars and
    lists replace), so an override file only needs the keys it changes.
    """
    cfg = default_config()
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            override = yaml.safe_load(fh) or {}
        _merge(cfg, _canonicalize(override))
    return cfg


def data_text(name: str) -> str:
    """Read a packaged data file as text."""
    return resources.files("jobrank.data").joinpath(name).read_text()


def _merge(base: dict[str, Any], override: Mapping[str, Any]) -> None:
    for key, value in override.items():
        if isinstance(value, Mapping) and isinstance(base.get(key), dict):
            _merge(base[key], value)
        else:
            base[key] = copy.deepcopy(value)


def _canonicalize(node: Any) -> Any:
    """String-keyed copy of a parsed YAML tree.

    The config is stored inside saved index bundles as JSON, whose object
    keys are always strings; normalizing here keeps a loaded bundle's
    config equal to the one it was built with (YAML would otherwise parse
    mapping keys like hop distances as ints).
    """
    if isinstance(node, Mapping):
        return {str(k): _canonicalize(v) for k, v in node.items()}
    if isinstance(node, list):
        return [_canonicalize(v) for v in node]
    return node
