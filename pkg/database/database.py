"""
Database configuration and session management

Provides the SQLAlchemy engine and session factory for the run history.
The engine is built lazily from STMOD_DATABASE_URL or from an explicit
URL passed to configure_engine.
"""
import os
from contextlib import contextmanager

from sqlalchemy import create_engine
from sqlalchemy.orm import scoped_session, sessionmaker

# Database URL from environment; an empty value disables history
DATABASE_URL = os.getenv('STMOD_DATABASE_URL', '')

engine = None

# Create session factory (bound in configure_engine)
SessionFactory = sessionmaker()

# Thread-safe scoped session
SessionLocal = scoped_session(SessionFactory)


def configure_engine(url=None):
    """(Re)bind the session factory to the database at ``url``"""
    global engine
    url = url or DATABASE_URL
    if not url:
        raise RuntimeError('no database URL configured (set STMOD_DATABASE_URL or pass --db)')
    if engine is not None and str(engine.url) == url:
        return engine
    SessionLocal.remove()
    engine = create_engine(
        url,
        pool_pre_ping=True,  # Verify connections before using
        echo=False  # Set to True for SQL logging during development
    )
    SessionFactory.configure(bind=engine)
    return engine


def get_db_session():
    """Get a database session"""
    if engine is None:
        configure_engine()
    return SessionLocal()


@contextmanager
def db_session_scope():
    """
    Provide a transactional scope around a series of operations.

    Usage:
        with db_session_scope() as session:
            run = ReportRun(config_name="paper-table")
            session.add(run)
            # Automatically commits on success, rolls back on exception
    """
    session = get_db_session()
    try:
        yield session
        session.commit()
    except Exception:
        session.rollback()
        raise
    finally:
        session.close()


def init_db():
    """Initialize database tables"""
    from database.db_models import Base
    if engine is None:
        configure_engine()
    Base.metadata.create_all(bind=engine)
