"""
Built-in configs shipped in presets/
"""
import os

from models.errors import ConfigError

PRESET_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'presets')

PRESETS = {
    'paper-table': 'paper_table.cfg',
    'gaps-p3': 'gaps_p3.cfg',
}


def list_presets():
    return sorted(PRESETS)


def preset_path(name):
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(list_presets())}")
    return os.path.join(PRESET_DIR, PRESETS[name])


def load_preset(name):
    """
    Text of a built-in config

    Returns:
        str: config contents
    """
    with open(preset_path(name), 'r', encoding='utf-8') as f:
        return f.read()
