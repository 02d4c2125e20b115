"""
Background tasks for report rows
"""
import logging

from celery_app import celery
from models.errors import StmodError
from services import config_service, report_service

logger = logging.getLogger(__name__)


@celery.task(bind=True, name='tasks.run_check_row')
def run_check_row(self, config_text, index, settings=None, name='config'):
    """
    Evaluate one check of a config.

    The config is re-parsed from its text, which is deterministic, so a
    worker needs nothing but the arguments.

    Args:
        config_text: config contents
        index: check index
        settings: settings dict (seed, window, nmax, ...)
        name: config name

    Returns:
        dict: row payload, or {'error': ...}
    """
    try:
        if not self.request.is_eager:
            self.update_state(state='PROGRESS', meta={'status': f"Running check {index}..."})
        config = config_service.parse_config(config_text, name)
        row = report_service.run_check(config, index, settings or {})
        return report_service.row_payload(row)
    except StmodError as e:
        logger.error(f"Row {index} of {name} failed: {e}", exc_info=True)
        return {'error': str(e)}
