"""
SQLAlchemy database models for the stmod run history

A run stores the config name and run parameters; each report row is a
child record. History is informational only and never feeds back into
results files.
"""
from sqlalchemy import Column, ForeignKey, Integer, String, Text, TIMESTAMP
from sqlalchemy.orm import declarative_base, relationship
from sqlalchemy.sql import func

Base = declarative_base()


class ReportRun(Base):
    """One `stmod run` or `stmod preset` invocation"""
    __tablename__ = 'report_runs'

    id = Column(Integer, primary_key=True)
    config_name = Column(String(255), nullable=False, index=True)
    seed = Column(Integer, nullable=False, default=0)
    window = Column(Integer)  # None means the per-group default
    nmax = Column(Integer)
    exit_status = Column(Integer, nullable=False, default=0)
    created_at = Column(TIMESTAMP, server_default=func.now())

    # Relationships
    rows = relationship('ReportRowRecord', back_populates='run', cascade='all, delete-orphan',
                        order_by='ReportRowRecord.row_index')

    def __repr__(self):
        return f"<ReportRun(id={self.id}, config='{self.config_name}', exit_status={self.exit_status})>"

    def to_dict(self):
        """Convert to dictionary for the history listing"""
        return {
            'id': self.id,
            'config_name': self.config_name,
            'seed': self.seed,
            'window': self.window,
            'nmax': self.nmax,
            'exit_status': self.exit_status,
            'created_at': self.created_at.isoformat() if self.created_at else None,
            'row_count': len(self.rows) if self.rows else 0
        }


class ReportRowRecord(Base):
    """A single report row of a stored run"""
    __tablename__ = 'report_rows'

    id = Column(Integer, primary_key=True)
    run_id = Column(Integer, ForeignKey('report_runs.id', ondelete='CASCADE'), nullable=False, index=True)
    row_index = Column(Integer, nullable=False)
    subject = Column(String(255), nullable=False)
    claimed = Column(String(50))
    citation = Column(Text)
    lower = Column(Integer)
    upper = Column(Integer)
    status = Column(String(20), nullable=False)
    runtime_ms = Column(Integer, default=0)

    # Relationships
    run = relationship('ReportRun', back_populates='rows')

    def __repr__(self):
        return f"<ReportRowRecord(run_id={self.run_id}, index={self.row_index}, status='{self.status}')>"

    def to_dict(self):
        return {
            'index': self.row_index,
            'subject': self.subject,
            'claimed': self.claimed,
            'citation': self.citation,
            'lower': self.lower,
            'upper': self.upper,
            'status': self.status,
            'runtime_ms': self.runtime_ms
        }
