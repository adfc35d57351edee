import os
import inspect
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import yaml

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_NAME = "experiment_config.yaml"

# keys a suite section may carry, with the type each value must have
SUITE_KEYS = {
    "k": (int, list),
    "m": (int, list),
    "pool": int,
    "max_len": int,
    "samples": int,
    "cases": int,
    "words_per_sentence": int,
    "max_size": int,
    "max_fqr": int,
    "states": int,
    "workers": int,
    "max_run_len": int,
    "per_k": dict,
}

# keys a per_k entry may override
PER_K_KEYS = ("pool", "max_len", "samples")


def _per_k_errors(where: str, per_k: Dict[Any, Any]) -> List[str]:
    errors = []
    for k, overrides in per_k.items():
        if not isinstance(k, int) or isinstance(k, bool) or k < 1:
            errors.append(f"❌ {where}.per_k: '{k}' is not a pebble count")
        elif not isinstance(overrides, dict):
            errors.append(f"❌ {where}.per_k.{k} must be a mapping")
        else:
            for key, value in overrides.items():
                if key not in PER_K_KEYS:
                    errors.append(f"❌ {where}.per_k.{k}: unknown key '{key}'")
                elif not isinstance(value, int) or isinstance(value, bool) or value < 0:
                    errors.append(f"❌ {where}.per_k.{k}.{key} must be a non-negative integer")
    return errors


def find_config_file(config_name: str, search_paths: Optional[List[str]] = None) -> str:
    """
    Find a configuration file in the usual locations.

    Args:
        config_name: File name, or a path that already exists
        search_paths: Directories to search. If None: the caller's directory,
            the current working directory, then the package's configs directory.

    Returns:
        str: Path to the found config file

    Raises:
        FileNotFoundError: If the file is in none of the search paths
    """
    if os.path.isabs(config_name) and os.path.exists(config_name):
        return config_name
    if search_paths is None:
        frame = inspect.currentframe()
        try:
            # two frames up is whoever called load_config
            caller_frame = frame.f_back.f_back
            caller_path = caller_frame.f_globals.get("__file__", "")
            caller_dir = os.path.dirname(os.path.abspath(caller_path))
        finally:
            del frame
        search_paths = [
            caller_dir,
            os.getcwd(),
            str(Path(__file__).parent.parent / "configs"),
        ]

    for path in search_paths:
        config_path = os.path.join(path, config_name)
        if os.path.exists(config_path):
            return config_path

    raise FileNotFoundError(
        f"Could not find config file '{config_name}' in any of these locations: {search_paths}"
    )


def load_config(config_name: str = DEFAULT_CONFIG_NAME, search_paths: Optional[List[str]] = None) -> Dict[str, Any]:
    """
    Load an experiment configuration from YAML.

    Args:
        config_name: Name of the config file to load
        search_paths: Optional list of directories to search

    Returns:
        dict: Loaded configuration (empty if the file is empty)

    Raises:
        FileNotFoundError: If the config file cannot be found
    """
    config_path = find_config_file(config_name, search_paths)
    logger.debug(f"Loading configuration from {config_path}")
    with open(config_path, "r", encoding="utf-8") as f:
        return yaml.safe_load(f) or {}


def suite_settings(config: Dict[str, Any], suite: str) -> Dict[str, Any]:
    """Defaults section merged with the section of one suite."""
    settings = dict(config.get("defaults") or {})
    settings.update((config.get("suites") or {}).get(suite) or {})
    return settings


def validate_experiment_config(config: Dict[str, Any]) -> Tuple[bool, List[str]]:
    """
    Validate an experiment configuration.

    Args:
        config: Configuration dictionary

    Returns:
        Tuple[bool, List[str]]: (is_valid, validation_messages)
    """
    messages = []
    is_valid = True

    if not isinstance(config, dict):
        return False, ["❌ Configuration must be a mapping"]

    suites = config.get("suites")
    if not isinstance(suites, dict) or not suites:
        is_valid = False
        messages.append("❌ Missing or empty 'suites' section")
        suites = {}
    else:
        messages.append("✓ Top-level structure is valid")

    sections = [("defaults", config.get("defaults") or {})]
    sections += [(f"suites.{name}", section or {}) for name, section in suites.items()]
    for where, section in sections:
        if not isinstance(section, dict):
            is_valid = False
            messages.append(f"❌ {where} must be a mapping")
            continue
        for key, value in section.items():
            if key == "seed":
                if not isinstance(value, int):
                    is_valid = False
                    messages.append(f"❌ {where}.seed must be an integer")
                continue
            expected = SUITE_KEYS.get(key)
            if expected is None:
                is_valid = False
                messages.append(f"❌ {where}: unknown key '{key}'")
            elif not isinstance(value, expected) or isinstance(value, bool):
                is_valid = False
                messages.append(f"❌ {where}.{key} has the wrong type ({type(value).__name__})")
            elif isinstance(value, int) and value < 0:
                is_valid = False
                messages.append(f"❌ {where}.{key} must not be negative")
            elif key == "per_k":
                errors = _per_k_errors(where, value)
                is_valid = is_valid and not errors
                messages += errors

    if is_valid:
        messages.append(f"✓ {len(suites)} suite sections are valid")
    return is_valid, messages
