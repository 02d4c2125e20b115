"""
Run configuration, report rows and reports for the stmod CLI
"""
import json
from dataclasses import dataclass, field

MATCH = 'match'
WITHIN_BOUNDS = 'within-bounds'
INCONCLUSIVE = 'inconclusive'
MISMATCH = 'mismatch'

CHECK_KINDS = ('series', 'ghost_bounds', 'ar', 'word_identities', 'classification_row', 'group_bounds')


@dataclass(frozen=True)
class Claim:
    """A claimed interval; ``upper`` None means open above"""
    lower: int
    upper: int = None

    def __str__(self):
        if self.upper is None:
            return f"{self.lower}.."
        if self.upper == self.lower:
            return str(self.lower)
        return f"{self.lower}..{self.upper}"


@dataclass
class CheckSpec:
    kind: str
    target: str = ''
    options: dict = field(default_factory=dict)
    line: int = None


@dataclass
class RunConfig:
    """
    A parsed config: prime, named groups and modules, checks and output.

    ``modules`` maps a name to (expression, group name, line).
    """
    name: str = 'config'
    prime: int = None
    groups: dict = field(default_factory=dict)
    modules: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    seed: int = None
    output: str = None
    text: str = ''

    @property
    def default_group(self):
        return next(iter(self.groups), None)


@dataclass
class ReportRow:
    index: int
    subject: str
    kind: str
    claimed: Claim = None
    citation: str = ''
    lower: int = None
    upper: int = None
    status: str = INCONCLUSIVE
    runtime_ms: int = 0
    details: dict = field(default_factory=dict)

    def to_dict(self):
        """Fields of the results file"""
        return {
            'subject': self.subject,
            'claimed': str(self.claimed) if self.claimed is not None else None,
            'citation': self.citation,
            'lower': self.lower,
            'upper': self.upper,
            'status': self.status,
            'runtime_ms': self.runtime_ms,
        }

    @classmethod
    def from_dict(cls, data):
        claimed = data.get('claimed')
        return cls(
            index=data['index'],
            subject=data['subject'],
            kind=data.get('kind', ''),
            claimed=Claim(*claimed) if claimed is not None else None,
            citation=data.get('citation', ''),
            lower=data.get('lower'),
            upper=data.get('upper'),
            status=data.get('status', INCONCLUSIVE),
            runtime_ms=data.get('runtime_ms', 0),
            details=data.get('details', {}),
        )


@dataclass
class Report:
    name: str
    rows: list = field(default_factory=list)
    seed: int = 0

    @property
    def exit_status(self):
        return 1 if any(row.status == MISMATCH for row in self.rows) else 0

    def counts(self):
        result = {}
        for row in self.rows:
            result[row.status] = result.get(row.status, 0) + 1
        return result

    def to_json(self):
        """Deterministic results file contents"""
        return json.dumps([row.to_dict() for row in self.rows], indent=2, ensure_ascii=False) + '\n'

    def to_text(self):
        lines = [f"stmod report: {self.name} (seed {self.seed})"]
        for row in self.rows:
            computed = '-' if row.lower is None else (
                str(row.lower) if row.lower == row.upper else f"[{row.lower}, {row.upper}]")
            claimed = '-' if row.claimed is None else str(row.claimed)
            cite = f"  ({row.citation})" if row.citation else ''
            lines.append(f"{row.index:3d}  {row.subject:<32} claimed {claimed:<8} computed {computed:<10} "
                         f"{row.status}{cite}")
            theorem = row.details.get('theorem_upper')
            if theorem is not None:
                methods = ', '.join(row.details.get('theorem_methods', []))
                status = row.details.get('theorem_status', INCONCLUSIVE)
                lines.append(f"     theorem upper {theorem} ({methods}): {status} with it")
            error = row.details.get('error')
            if error:
                lines.append(f"     error: {error}")
        counts = ', '.join(f"{n} {status}" for status, n in sorted(self.counts().items()))
        lines.append(f"{len(self.rows)} rows" + (f": {counts}" if counts else ''))
        return '\n'.join(lines) + '\n'
