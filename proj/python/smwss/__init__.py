"""Surface-modified Wannier-Stark states: Python front end to the C++ core."""

import json
import os
from pathlib import Path

_data = Path(__file__).with_name("data")
if _data.is_dir():
    os.environ.setdefault("SMWSS_DATA_DIR", str(_data))

from ._core import (  # noqa: E402
    Config,
    ConfigError,
    DomainError,
    Error,
    InputError,
    bloch_frequency,
    config_keys,
    cp_potential,
    extract_c3,
    lj_depth_from_z0,
    recoil_energy,
    solve,
    version,
)
from . import _core  # noqa: E402

__version__ = version()


def run(subcommand, config, json_mirror=False):
    """Write the outputs of one subcommand and return its manifest as a dict."""
    return json.loads(_core.run(subcommand, config, json_mirror))


def compute(subcommand, config):
    """Tables of one subcommand as {name: {"columns": [...], "rows": [...]}}; nothing is written."""
    return {k: json.loads(v) for k, v in _core.compute(subcommand, config).items()}


__all__ = [
    "Config", "ConfigError", "DomainError", "Error", "InputError",
    "bloch_frequency", "compute", "config_keys", "cp_potential", "extract_c3",
    "lj_depth_from_z0", "recoil_energy", "run", "solve", "version",
]
