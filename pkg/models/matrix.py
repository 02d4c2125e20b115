"""
Dense matrices over the prime field F_p
"""
from dataclasses import dataclass

import numpy as np
from sympy import isprime

from models.errors import FieldError


def check_prime(p):
    """Validate a prime modulus and return it as int"""
    p = int(p)
    if p < 2 or not isprime(p):
        raise FieldError(f"modulus {p} is not prime")
    return p


@dataclass(frozen=True, eq=False)
class FpMatrix:
    """
    A rows x cols matrix with entries in [0, p).

    Vectors are rows; a matrix acts on row vectors from the right.
    """
    p: int
    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'p', check_prime(self.p))
        data = np.array(self.entries, dtype=np.int64)
        if data.ndim == 1 and data.size == 0:
            data = data.reshape(0, 0)
        if data.ndim != 2:
            raise FieldError(f"matrix entries must be 2-dimensional, got shape {data.shape}")
        object.__setattr__(self, 'entries', data % self.p)

    @property
    def rows(self):
        return self.entries.shape[0]

    @property
    def cols(self):
        return self.entries.shape[1]

    @classmethod
    def zeros(cls, p, rows, cols):
        return cls(p, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, p, n):
        return cls(p, np.eye(n, dtype=np.int64))

    @classmethod
    def from_rows(cls, p, rows, cols=None):
        """Build from nested lists; cols is needed when rows is empty"""
        if len(rows) == 0:
            return cls.zeros(p, 0, cols or 0)
        return cls(p, np.array(rows, dtype=np.int64))

    def __matmul__(self, other):
        if self.p != other.p:
            raise FieldError(f"cannot multiply matrices over F_{self.p} and F_{other.p}")
        return FpMatrix(self.p, self.entries @ other.entries)

    def __eq__(self, other):
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.p, self.entries.shape, self.entries.tobytes()))

    def tolist(self):
        return self.entries.tolist()

    def __repr__(self):
        return f"<FpMatrix(p={self.p}, shape={self.rows}x{self.cols})>"
