"""
Ghost certificates and ghost-length bounds
"""
from dataclasses import dataclass, field

from models.module import GMap

THEOREM = 'theorem'
WINDOW = 'window'
COMPOSITE = 'composite'


@dataclass(frozen=True, eq=False)
class GhostCertificate:
    """
    Why a map is (or is taken to be) a ghost.

    A theorem certificate claims true ghostness, a window certificate
    only vanishing on Ω^i k for |i| <= window, and a composite chains
    certificates in the order the maps are applied.
    """
    kind: str
    payload: GMap
    label: str = ''
    window: int = None
    parts: tuple = ()
    notes: str = ''

    @classmethod
    def by_theorem(cls, f, label, notes=''):
        return cls(THEOREM, f, label=label, notes=notes)

    @classmethod
    def by_window(cls, f, window):
        return cls(WINDOW, f, label=f"window({window})", window=window)

    @classmethod
    def composite(cls, certs, notes=''):
        certs = tuple(certs)
        if not certs:
            raise ValueError("a composite certificate needs at least one factor")
        payload = certs[0].payload
        for cert in certs[1:]:
            payload = payload.then(cert.payload)
        return cls(COMPOSITE, payload, label='composite', parts=certs, notes=notes)

    @property
    def length(self):
        """Number of ghost factors"""
        if self.kind == COMPOSITE:
            return sum(part.length for part in self.parts)
        return 1

    @property
    def is_theorem(self):
        if self.kind == COMPOSITE:
            return all(part.is_theorem for part in self.parts)
        return self.kind == THEOREM

    def factor_labels(self):
        if self.kind == COMPOSITE:
            return [label for part in self.parts for label in part.factor_labels()]
        return [self.label]

    def to_dict(self):
        return {
            'kind': self.kind,
            'length': self.length,
            'factors': self.factor_labels(),
            'notes': self.notes,
        }


@dataclass(frozen=True, eq=False)
class UniversalGhost:
    """Windowed universal ghost phi: source -> target with sigma: F -> source"""
    source: object
    target: object
    phi: GMap
    sigma: GMap
    cert: GhostCertificate


@dataclass
class LengthBounds:
    """
    lower <= gl(M) <= gel(M) <= upper.

    ``lower_witness`` is the stably non-trivial composite of theorem-certified
    ghosts behind ``lower`` (None when the bound is the trivial one).
    """
    module: object
    lower: int
    upper: int
    lower_witness: GhostCertificate = None
    upper_method: str = 'socle_bound'
    window: int = None
    nmax: int = None
    notes: list = field(default_factory=list)

    @property
    def consistent(self):
        return self.lower <= self.upper

    @property
    def conclusive(self):
        return self.lower == self.upper

    def to_dict(self):
        return {
            'module': self.module.label,
            'dim': self.module.dim,
            'lower': self.lower,
            'upper': self.upper,
            'upper_method': self.upper_method,
            'witness': self.lower_witness.to_dict() if self.lower_witness else None,
            'window': self.window,
            'nmax': self.nmax,
            'notes': list(self.notes),
        }


@dataclass
class GroupBounds:
    """
    Computed bounds on the ghost number of kG with the methods behind them.

    ``theorem_upper`` is a published upper bound kept beside the computed
    interval as a cross-check; it takes no part in ``lower`` or ``upper``.
    """
    group: object
    p: int
    lower: int
    upper: int
    lower_method: str = ''
    upper_methods: list = field(default_factory=list)
    witness: GhostCertificate = None
    theorem_upper: int = None
    theorem_methods: list = field(default_factory=list)

    @property
    def conclusive(self):
        return self.lower == self.upper

    def to_dict(self):
        return {
            'group': self.group.name,
            'p': self.p,
            'lower': self.lower,
            'upper': self.upper,
            'lower_method': self.lower_method,
            'upper_methods': list(self.upper_methods),
            'theorem_upper': self.theorem_upper,
            'theorem_methods': list(self.theorem_methods),
        }


@dataclass
class QuotientChain:
    """M -> M/soc -> (M/soc)/soc -> ... with the composite projections out of M"""
    modules: list
    projections: list
    nontrivial: list

    @property
    def steps(self):
        return len(self.projections)
