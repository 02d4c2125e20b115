"""
Auslander-Reiten triangles and stable endomorphism data
"""
from dataclasses import dataclass, field

import numpy as np

from models.module import GMap, GModule


@dataclass(eq=False)
class StableEndAlgebra:
    """
    [m, m] with structure constants in the reduced stable basis.

    ``table[i, j]`` holds the coordinates of basis[i] then basis[j];
    ``unit`` the coordinates of the identity; ``radical`` spans J as
    coordinate rows.
    """
    module: GModule
    basis: list
    table: np.ndarray
    unit: np.ndarray
    radical: np.ndarray = None
    method: str = ''

    @property
    def dim(self):
        return len(self.basis)

    @property
    def residue_degree(self):
        return self.dim - (0 if self.radical is None else self.radical.shape[0])

    def radical_maps(self):
        if self.radical is None or not self.basis:
            return []
        mats = np.stack([f.mat for f in self.basis])
        p = self.module.p
        return [GMap(self.module, self.module, np.tensordot(row, mats, axes=1) % p) for row in self.radical]


@dataclass(eq=False)
class ARTriangle:
    """
    Ω²m --alpha--> heart --beta--> m --gamma--> Ωm.

    ``middle`` is the pullback before free summands are stripped and
    ``free_rank`` the number of copies of kG removed from it.
    """
    m: GModule
    gamma: GMap
    heart: GModule
    alpha: GMap
    beta: GMap
    omega_m: GModule = None
    omega2_m: GModule = None
    middle: GModule = field(repr=False, default=None)
    free_rank: int = 0
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {
            'module': self.m.label,
            'dim': self.m.dim,
            'heart_dim': self.heart.dim,
            'omega_dim': self.omega_m.dim if self.omega_m is not None else None,
            'free_rank': self.free_rank,
            'notes': list(self.notes),
        }
