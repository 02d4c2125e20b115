from celery import Celery

from models.settings import load_settings


def make_celery(settings=None):
    """Create and configure Celery application"""
    settings = settings or load_settings()
    broker_url = settings.get('broker_url') or 'memory://'
    celery = Celery(
        'stmod',
        broker=broker_url,
        backend=settings.get('broker_url') or 'cache+memory://'
    )

    celery.conf.update(
        task_serializer='json',
        accept_content=['json'],
        result_serializer='json',
        timezone='UTC',
        enable_utc=True,
        task_track_started=True,
        task_time_limit=600,  # 10 minutes max per row
        task_soft_time_limit=540,
        broker_connection_retry_on_startup=True,
        # No broker configured: run rows in-process
        task_always_eager=not settings.get('broker_url'),
        task_eager_propagates=False,
    )

    return celery

celery = make_celery()

# Import tasks AFTER creating celery instance (avoid circular import)
import tasks.report_tasks  # This registers the tasks
