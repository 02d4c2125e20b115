"""
String and band descriptors over Λ = k<X, Y>/(X², Y²)

Letter ('a', 1) is the direct letter a, ('a', -1) its inverse; a acts
through X and b through Y.
"""
from dataclasses import dataclass, field

import numpy as np

SUPERSCRIPT_INVERSE = '⁻¹'


@dataclass(frozen=True)
class Word:
    letters: tuple = ()

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __str__(self):
        if not self.letters:
            return '1'
        return ''.join(name + ('' if exp > 0 else SUPERSCRIPT_INVERSE) for name, exp in self.letters)

    @property
    def is_empty(self):
        return not self.letters

    def is_direct(self, i):
        return self.letters[i][1] > 0

    def inverse(self):
        return Word(tuple((name, -exp) for name, exp in reversed(self.letters)))

    def rotate(self, k):
        if not self.letters:
            return self
        k %= len(self.letters)
        return Word(self.letters[k:] + self.letters[:k])

    def power(self, k):
        if k < 0:
            return self.inverse().power(-k)
        return Word(self.letters * k)

    def __add__(self, other):
        return Word(self.letters + other.letters)

    def sort_key(self):
        return tuple((name, -exp) for name, exp in self.letters)


@dataclass(frozen=True, eq=False)
class BandDescriptor:
    """
    A cyclic word with an automorphism φ placed on its first letter.

    ``auto_certified`` records that φ came from the companion constructor
    and is the companion matrix of a power of an irreducible polynomial.
    """
    word: Word
    auto: np.ndarray
    auto_certified: bool = False

    @property
    def multiplicity(self):
        return self.auto.shape[0]

    @property
    def dim(self):
        return len(self.word) * self.multiplicity

    def __str__(self):
        return f"({self.word}, φ of size {self.multiplicity})"


@dataclass(frozen=True, eq=False)
class LambdaModule:
    """X and Y acting on row vectors from the right, both squaring to zero"""
    p: int
    x: np.ndarray
    y: np.ndarray
    label: str = ''
    certified_indecomposable: bool = False

    @property
    def dim(self):
        return self.x.shape[0]


@dataclass(eq=False)
class PeakSplit:
    """
    0 -> source --incl--> ⊕ M(L_i) --coker--> ⊕ k -> 0 with every L_i free of
    the peaks ab⁻¹ and ba⁻¹.
    """
    source: LambdaModule
    pieces: list
    middle: LambdaModule
    incl: np.ndarray
    coker: np.ndarray
    opened: Word = None
    notes: list = field(default_factory=list)

    @property
    def cokernel_dim(self):
        return self.coker.shape[1]
