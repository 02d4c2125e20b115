import pytest

from app import create_app
from models.errors import ConfigError
from models.report import MATCH, MISMATCH, Claim, Report, ReportRow
from models.settings import ENV_KEYS, load_settings


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    for env in ENV_KEYS.values():
        monkeypatch.delenv(env, raising=False)


def test_defaults():
    settings = load_settings()
    assert settings['seed'] == 0
    assert settings['window'] is None and settings['nmax'] is None
    assert settings['trials'] == 64
    assert settings['record_timings'] is False
    assert settings['database_url'] == ''


def test_environment_and_overrides(monkeypatch):
    monkeypatch.setenv('STMOD_WINDOW', '6')
    monkeypatch.setenv('STMOD_SEED', '3')
    monkeypatch.setenv('STMOD_RECORD_TIMINGS', 'yes')
    monkeypatch.setenv('STMOD_LOG_LEVEL', 'debug')
    settings = load_settings({'seed': 9, 'nmax': None})
    assert settings['window'] == 6
    assert settings['seed'] == 9
    assert settings['nmax'] is None
    assert settings['record_timings'] is True
    assert settings['log_level'] == 'DEBUG'


@pytest.mark.parametrize('env, value', [
    ('STMOD_WINDOW', 'wide'),
    ('STMOD_NMAX', '0'),
    ('STMOD_TRIALS', '-2'),
])
def test_bad_values_raise(monkeypatch, env, value):
    monkeypatch.setenv(env, value)
    with pytest.raises(ConfigError):
        load_settings()


def test_negative_seed_is_allowed():
    assert load_settings({'seed': -1})['seed'] == -1


def test_app_without_database():
    app = create_app({'seed': 2})
    assert not app.history_enabled
    assert app.settings['seed'] == 2


def _report(name, statuses):
    rows = [ReportRow(i, f"row{i}", 'series', Claim(1, 1), 'cite', 1, 1, status)
            for i, status in enumerate(statuses)]
    return Report(name, rows, seed=5)


def test_run_history_in_sqlite(tmp_path):
    app = create_app({'database_url': f"sqlite:///{tmp_path / 'history.db'}"})
    assert app.history_enabled
    from database.db_runs import get_run_rows, list_runs, save_report

    first = save_report(_report('first', [MATCH, MATCH]), {'window': 4})
    second = save_report(_report('second', [MISMATCH]))
    assert first['row_count'] == 2 and first['window'] == 4
    assert second['exit_status'] == 1

    runs = list_runs()
    assert [run['config_name'] for run in runs] == ['second', 'first']
    assert len(list_runs(limit=1)) == 1

    rows = get_run_rows(first['id'])
    assert [row['index'] for row in rows] == [0, 1]
    assert rows[0]['claimed'] == '1'
    assert get_run_rows(first['id'] + 100) == []
