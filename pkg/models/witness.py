"""
Explicit ghosts and lower-bound witnesses
"""
from dataclasses import dataclass, field

import numpy as np

from models.ghost import GhostCertificate
from models.module import GMap, GModule


@dataclass(frozen=True, eq=False)
class CentralWitness:
    """Left multiplication by x - 1 for a central element x"""
    element: int
    module: GModule
    map: GMap
    cert: GhostCertificate


@dataclass(eq=False)
class CyclicNormalWitness:
    """
    M_n induced from a cyclic normal subgroup, realized as the left ideal
    kG.(c - 1)^(|C| - n) of kG.

    ``basis`` holds the ideal's rows in the element basis of kG and
    ``right_mults[x]`` is right multiplication by x - 1 on the ideal.
    """
    embedding: object
    n: int
    induced: GModule
    basis: np.ndarray
    right_mults: dict = field(repr=False, default_factory=dict)
    certs: dict = field(repr=False, default_factory=dict)


@dataclass(frozen=True, eq=False)
class ThetaWitness:
    """θ = Π (g_i - 1)^(n_i - 1) on the tensor product of the M_{n_i}"""
    module: GModule
    theta: GMap
    dims: tuple
    cert: GhostCertificate = None

    @property
    def factors(self):
        return sum(n - 1 for n in self.dims)


@dataclass(frozen=True, eq=False)
class InductionWitness:
    """
    (x - 1)^(l - 1) after f↑, with the detection composite
    r . ((x - 1)^(l - 1) f↑)↓ . i, which equals sign * f.
    """
    composite: GMap
    detection: np.ndarray
    sign: int
    l: int
    holds: bool
