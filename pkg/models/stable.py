"""
Stable-category data: covers, hulls, stable Hom spaces and triangles
"""
from dataclasses import dataclass, field

from models.module import GMap, GModule


@dataclass(frozen=True, eq=False)
class CoverData:
    """Minimal projective cover: 0 -> kernel --incl--> cover --surj--> M -> 0"""
    cover: GModule
    surj: GMap
    kernel: GModule
    incl: GMap

    @property
    def rank(self):
        return self.cover.dim // self.cover.group.order if self.cover.dim else 0


@dataclass(frozen=True, eq=False)
class HullData:
    """Minimal injective hull: 0 -> M --inj--> hull --proj--> cokernel -> 0"""
    hull: GModule
    inj: GMap
    cokernel: GModule
    proj: GMap

    @property
    def rank(self):
        return self.hull.dim // self.hull.group.order if self.hull.dim else 0


@dataclass(eq=False)
class StableHom:
    """
    [M, N] = Hom(M, N) / PHom(M, N).

    ``basis`` holds representatives reduced modulo PHom, ``phom_rows`` is
    the reduced echelon basis of PHom with each map flattened to a row.
    """
    dom: GModule
    cod: GModule
    basis: list
    phom_basis: list
    phom_rows: object = field(repr=False, default=None)
    hom_dim: int = 0

    @property
    def dim(self):
        return len(self.basis)


@dataclass(frozen=True, eq=False)
class Triangle:
    """X --alpha--> Y --beta--> Z --connecting--> Ω⁻¹X"""
    x: GModule
    y: GModule
    z: GModule
    alpha: GMap
    beta: GMap
    connecting: GMap
    hull: HullData = field(repr=False, default=None)
