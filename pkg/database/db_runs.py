"""
Run history operations

Stores reports and lists past runs using SQLAlchemy sessions.
"""
from database.database import db_session_scope
from database.db_models import ReportRowRecord, ReportRun


def save_report(report, settings=None):
    """
    Store a report with its rows

    Args:
        report (Report): finished report
        settings (dict, optional): run settings (window, nmax)

    Returns:
        dict: stored run
    """
    settings = settings or {}
    with db_session_scope() as session:
        run = ReportRun(
            config_name=report.name,
            seed=report.seed,
            window=settings.get('window'),
            nmax=settings.get('nmax'),
            exit_status=report.exit_status
        )
        for row in report.rows:
            data = row.to_dict()
            run.rows.append(ReportRowRecord(
                row_index=row.index,
                subject=data['subject'],
                claimed=data['claimed'],
                citation=data['citation'],
                lower=data['lower'],
                upper=data['upper'],
                status=data['status'],
                runtime_ms=data['runtime_ms']
            ))
        session.add(run)
        session.flush()
        return run.to_dict()


def list_runs(limit=20):
    """
    List the most recent runs, newest first

    Args:
        limit (int): maximum number of runs

    Returns:
        list: run dictionaries
    """
    with db_session_scope() as session:
        runs = session.query(ReportRun).order_by(ReportRun.id.desc()).limit(limit).all()
        return [run.to_dict() for run in runs]


def get_run_rows(run_id):
    """
    Rows of one stored run

    Returns:
        list: row dictionaries (empty if the run does not exist)
    """
    with db_session_scope() as session:
        run = session.query(ReportRun).filter_by(id=run_id).first()
        if not run:
            return []
        return [row.to_dict() for row in run.rows]
