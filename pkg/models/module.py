"""
kG-modules, equivariant maps and series data
"""
from dataclasses import dataclass, field

import numpy as np

from models.errors import ModuleError, NotEquivariantError


@dataclass(frozen=True, eq=False)
class GModule:
    """
    A finite-dimensional kG-module.

    ``action[g]`` is the dim x dim matrix of g acting on row vectors from
    the right: g.v = v @ action[g]. Writing A for ``action`` and gh for
    ``group.mul[g, h]``, this makes A[gh] = A[h] @ A[g].
    """
    group: object
    p: int
    action: np.ndarray
    label: str = ''
    certified_indecomposable: bool = False

    @property
    def dim(self):
        return self.action.shape[1]

    def act(self, g):
        return self.action[g]

    def generator_actions(self):
        return [(name, self.action[g]) for name, g in self.group.generators]

    def validate(self):
        """Check the homomorphism law on generators (enough for the whole group)"""
        g, p, a = self.group, self.p, self.action
        if a.shape != (g.order, self.dim, self.dim):
            raise ModuleError(f"action has shape {a.shape}, expected ({g.order}, d, d)")
        if not np.array_equal(a[g.identity], np.eye(self.dim, dtype=np.int64)):
            raise ModuleError("identity does not act as the identity matrix")
        for name, s in g.generators:
            lhs = a[g.mul[s, :]]
            rhs = (a @ a[s]) % p
            if not np.array_equal(lhs, rhs):
                raise ModuleError(f"action is not a homomorphism at generator {name}")
        return self

    def __repr__(self):
        label = f" '{self.label}'" if self.label else ''
        return f"<GModule{label}(group='{self.group.name}', p={self.p}, dim={self.dim})>"


@dataclass(frozen=True, eq=False)
class GMap:
    """An equivariant map dom -> cod with matrix ``mat`` (v -> v @ mat)"""
    dom: GModule
    cod: GModule
    mat: np.ndarray

    @property
    def p(self):
        return self.dom.p

    def validate(self):
        if self.mat.shape != (self.dom.dim, self.cod.dim):
            raise ModuleError(f"map matrix has shape {self.mat.shape}, expected ({self.dom.dim}, {self.cod.dim})")
        if self.dom.group is not self.cod.group:
            raise ModuleError("map between modules over different groups")
        for name, s in self.dom.group.generators:
            lhs = (self.dom.action[s] @ self.mat) % self.p
            rhs = (self.mat @ self.cod.action[s]) % self.p
            if not np.array_equal(lhs, rhs):
                raise NotEquivariantError(f"map does not commute with generator {name}")
        return self

    def then(self, other):
        """Composite 'self, then other' (matrix product self.mat @ other.mat)"""
        if other.dom is not self.cod:
            raise ModuleError("maps are not composable")
        return GMap(self.dom, other.cod, (self.mat @ other.mat) % self.p)

    def __add__(self, other):
        return GMap(self.dom, self.cod, (self.mat + other.mat) % self.p)

    def scaled(self, c):
        return GMap(self.dom, self.cod, (int(c) * self.mat) % self.p)

    def is_zero(self):
        return not np.any(self.mat)

    def __repr__(self):
        return f"<GMap({self.dom.dim} -> {self.cod.dim})>"


@dataclass
class SeriesReport:
    """Radical and socle series as lists of row-space bases"""
    radical_series: list = field(default_factory=list)
    socle_series: list = field(default_factory=list)
    radical_length: int = 0
    socle_length: int = 0

    def to_dict(self):
        return {
            'radical_dims': [int(b.shape[0]) for b in self.radical_series],
            'socle_dims': [int(b.shape[0]) for b in self.socle_series],
            'radical_length': self.radical_length,
            'socle_length': self.socle_length,
        }
