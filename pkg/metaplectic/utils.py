"""Configuration, logging and other shared utils.
"""

from typing import Any
from pathlib import Path
import sys
import yaml
from loguru import logger

CONFIG = Path(__file__).resolve().parent / "metaplectic.yaml"


class ScaleError(ValueError):
    """Raised when a computation is refused because the instance is too large."""


def _read_config(config: Path | str) -> dict[str, Any]:
    with open(config, "r", encoding="utf-8") as fin:
        return yaml.load(fin, Loader=yaml.FullLoader) or {}


def _merge(base: dict[str, Any], other: dict[str, Any]) -> dict[str, Any]:
    merged = dict(base)
    for key, val in other.items():
        if isinstance(val, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], val)
        else:
            merged[key] = val
    return merged


def load_config(config: Path | str | None = None) -> dict[str, Any]:
    """Load the bundled default configuration,
    optionally overridden by a user-supplied YAML file.

    :param config: Path to a YAML file whose keys override the defaults.
    :return: A dict containing the merged configuration.
    """
    settings = _read_config(CONFIG)
    if config is None:
        return settings
    config = Path(config)
    if not config.is_file():
        raise FileNotFoundError(f"The config file {config} does not exist!")
    return _merge(settings, _read_config(config))


def set_log_level(level: str = "INFO") -> None:
    """Route loguru messages to stderr with the specified level.

    :param level: The logging level for loguru.
    """
    logger.remove()
    logger.add(sys.stderr, level=level)


def check_limit(value: int, limit: int, what: str, advice: str = "") -> None:
    """Refuse work that exceeds a configured limit.

    :param value: The size of the requested computation.
    :param limit: The largest size allowed.
    :param what: A short description of the size being checked.
    :param advice: Extra text appended to the error message.
    :raises ScaleError: If value exceeds limit.
    """
    if value > limit:
        msg = f"{what} = {value} exceeds the limit {limit}!"
        if advice:
            msg += " " + advice
        raise ScaleError(msg)
