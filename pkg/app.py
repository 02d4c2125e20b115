import logging
from dataclasses import dataclass

from dotenv import load_dotenv

from models.settings import load_settings

# Load .env
load_dotenv()

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


@dataclass
class App:
    settings: dict
    logger: logging.Logger
    history_enabled: bool = False


def configure_logging(level='INFO'):
    """One stream handler on the root logger; calling again only resets the level"""
    root = logging.getLogger()
    if not any(getattr(h, '_stmod', False) for h in root.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._stmod = True
        root.addHandler(handler)
    root.setLevel(getattr(logging, str(level).upper(), logging.INFO))
    return logging.getLogger('stmod')


def create_app(overrides=None):
    """
    Build settings, logging and (when a database URL is set) the run history.

    Args:
        overrides (dict, optional): settings that win over the environment

    Returns:
        App
    """
    settings = load_settings(overrides)
    logger = configure_logging(settings['log_level'])

    history_enabled = False
    if settings['database_url']:
        # Initialize database schema (auto-creates tables from models)
        from database.database import configure_engine, init_db
        configure_engine(settings['database_url'])
        init_db()
        history_enabled = True

    return App(settings, logger, history_enabled)
