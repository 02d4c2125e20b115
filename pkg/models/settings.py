"""
Run settings from the environment

Values come from STMOD_* variables (a .env file is loaded by app.py);
missing keys get their defaults through setdefault, and explicit
overrides (CLI flags) win over both.
"""
import os

from models.errors import ConfigError

ENV_KEYS = {
    'window': 'STMOD_WINDOW',
    'nmax': 'STMOD_NMAX',
    'seed': 'STMOD_SEED',
    'trials': 'STMOD_TRIALS',
    'dim_budget': 'STMOD_DIM_BUDGET',
    'database_url': 'STMOD_DATABASE_URL',
    'broker_url': 'STMOD_BROKER_URL',
    'log_level': 'STMOD_LOG_LEVEL',
    'record_timings': 'STMOD_RECORD_TIMINGS',
}

INT_KEYS = ('window', 'nmax', 'seed', 'trials', 'dim_budget')
POSITIVE_KEYS = ('window', 'nmax', 'trials', 'dim_budget')


def _as_bool(value):
    if isinstance(value, bool):
        return value
    return str(value).strip().lower() in ('1', 'true', 'yes', 'on')


def _as_int(key, value):
    try:
        number = int(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key} must be an integer, got {value!r}")
    if key in POSITIVE_KEYS and number <= 0:
        raise ConfigError(f"{key} must be positive, got {number}")
    return number


def load_settings(overrides=None):
    """
    Load settings

    Args:
        overrides (dict, optional): values that win over the environment;
            None values are ignored

    Returns:
        dict: settings with every key present
    """
    data = {}
    for key, env in ENV_KEYS.items():
        value = os.getenv(env)
        if value not in (None, ''):
            data[key] = value
    for key, value in (overrides or {}).items():
        if value is not None:
            data[key] = value

    data.setdefault('window', None)
    data.setdefault('nmax', None)
    data.setdefault('seed', 0)
    data.setdefault('trials', 64)
    data.setdefault('dim_budget', 400)
    data.setdefault('database_url', '')
    data.setdefault('broker_url', '')
    data.setdefault('log_level', 'INFO')
    data.setdefault('record_timings', False)

    for key in INT_KEYS:
        if data[key] is not None:
            data[key] = _as_int(key, data[key])
    data['record_timings'] = _as_bool(data['record_timings'])
    data['log_level'] = str(data['log_level']).upper()
    return data
