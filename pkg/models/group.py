"""
Finite p-groups as multiplication tables
"""
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """
    A finite p-group given by its full multiplication table.

    Element 0 is always the identity. ``mul[a, b]`` is the index of ab.
    ``name`` is the canonical group expression and doubles as a cache key.
    """
    name: str
    mul: np.ndarray
    inv: np.ndarray
    generators: tuple
    labels: tuple
    prime: int = None
    cyclic_factors: tuple = None
    identity: int = 0

    @property
    def order(self):
        return self.mul.shape[0]

    @property
    def elements(self):
        return range(self.order)

    def generator(self, name):
        for gen_name, index in self.generators:
            if gen_name == name:
                return index
        raise KeyError(f"{self.name} has no generator named {name!r}")

    def power(self, g, k):
        result = self.identity
        if k < 0:
            g, k = int(self.inv[g]), -k
        for _ in range(k):
            result = int(self.mul[result, g])
        return result

    def element_order(self, g):
        k, current = 1, g
        while current != self.identity:
            current = int(self.mul[current, g])
            k += 1
        return k

    def is_abelian(self):
        return bool(np.array_equal(self.mul, self.mul.T))

    def label(self, g):
        return self.labels[g]

    def __repr__(self):
        return f"<FiniteGroup(name='{self.name}', order={self.order})>"


@dataclass(frozen=True, eq=False)
class SubgroupEmbedding:
    """
    A subgroup H of an ambient group G.

    ``map[h]`` is the ambient index of sub element h, ``coset_reps`` lists
    one representative per left coset gH (smallest index, identity first)
    and ``coset_of[g]`` is the position of gH in that list.
    """
    sub: FiniteGroup
    ambient: FiniteGroup
    map: np.ndarray
    coset_reps: tuple
    coset_of: np.ndarray
    sub_index: dict = field(repr=False)

    @property
    def index(self):
        return len(self.coset_reps)

    def contains(self, g):
        return int(g) in self.sub_index

    def __repr__(self):
        return f"<SubgroupEmbedding(sub='{self.sub.name}', ambient='{self.ambient.name}')>"
