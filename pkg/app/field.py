"""Exact scalar fields: a prime field with int64 residues and the rationals.

Both fields expose the same small surface so that linear algebra and
polynomial code never branch on the characteristic.
"""

from fractions import Fraction
from functools import lru_cache
from typing import Any, Tuple, Union

import numpy as np
from sympy import isprime

Scalar = Union[int, Fraction]

_INT64_LIMIT = 2 ** 63 - 1


class PrimeField:
    """The prime field F_p with residues stored as int64 in [0, p)"""

    dtype = np.int64
    is_prime_field = True

    def __init__(self, characteristic: int):
        if not isprime(characteristic):
            raise ValueError(f"Characteristic must be prime, got {characteristic}")
        if characteristic >= 2 ** 31:
            raise ValueError(f"Characteristic must be below 2^31, got {characteristic}")
        self.characteristic = int(characteristic)

    def __repr__(self) -> str:
        return f"PrimeField({self.characteristic})"

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, PrimeField) and other.characteristic == self.characteristic

    def __hash__(self) -> int:
        return hash(("F", self.characteristic))

    def __call__(self, value: Any) -> int:
        if isinstance(value, Fraction):
            return self.div(value.numerator, value.denominator)
        if isinstance(value, str):
            return self(Fraction(value))
        return int(value) % self.characteristic

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def add(self, a: Scalar, b: Scalar) -> int:
        return (int(a) + int(b)) % self.characteristic

    def sub(self, a: Scalar, b: Scalar) -> int:
        return (int(a) - int(b)) % self.characteristic

    def mul(self, a: Scalar, b: Scalar) -> int:
        return (int(a) * int(b)) % self.characteristic

    def neg(self, a: Scalar) -> int:
        return (-int(a)) % self.characteristic

    def inv(self, a: Scalar) -> int:
        a = int(a) % self.characteristic
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return pow(a, self.characteristic - 2, self.characteristic)

    def div(self, a: Scalar, b: Scalar) -> int:
        return self.mul(self(a), self.inv(self(b)))

    def normalize(self, array: np.ndarray) -> np.ndarray:
        return np.mod(array, self.characteristic)

    def array(self, data: Any) -> np.ndarray:
        if isinstance(data, np.ndarray) and data.dtype == object:
            return np.array([[self(v) for v in row] for row in data], dtype=np.int64).reshape(data.shape)
        return np.mod(np.asarray(data, dtype=np.int64), self.characteristic)

    def zeros(self, shape: Union[int, Tuple[int, ...]]) -> np.ndarray:
        return np.zeros(shape, dtype=np.int64)

    def identity(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        inner = a.shape[1] if a.ndim == 2 else a.shape[0]
        if inner and inner * (self.characteristic - 1) ** 2 > _INT64_LIMIT:
            product = np.dot(a.astype(object), b.astype(object))
            return np.mod(product, self.characteristic).astype(np.int64)
        return np.mod(a @ b, self.characteristic)

    def random_elements(self, rng: np.random.Generator, size: Union[int, Tuple[int, ...]]) -> np.ndarray:
        return rng.integers(0, self.characteristic, size=size, dtype=np.int64)

    def random_nonzero(self, rng: np.random.Generator) -> int:
        return int(rng.integers(1, self.characteristic))

    def to_json(self, value: Scalar) -> int:
        return int(value)


class RationalField:
    """The rationals, stored as object arrays of Fraction; used for cross-checks"""

    dtype = object
    is_prime_field = False
    characteristic = 0

    def __repr__(self) -> str:
        return "RationalField()"

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash(("Q", 0))

    def __call__(self, value: Any) -> Fraction:
        return Fraction(value)

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def add(self, a: Scalar, b: Scalar) -> Fraction:
        return Fraction(a) + Fraction(b)

    def sub(self, a: Scalar, b: Scalar) -> Fraction:
        return Fraction(a) - Fraction(b)

    def mul(self, a: Scalar, b: Scalar) -> Fraction:
        return Fraction(a) * Fraction(b)

    def neg(self, a: Scalar) -> Fraction:
        return -Fraction(a)

    def inv(self, a: Scalar) -> Fraction:
        a = Fraction(a)
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return 1 / a

    def div(self, a: Scalar, b: Scalar) -> Fraction:
        return self.mul(a, self.inv(b))

    def normalize(self, array: np.ndarray) -> np.ndarray:
        return array

    def array(self, data: Any) -> np.ndarray:
        arr = np.array(data, dtype=object)
        flat = [Fraction(v) for v in arr.ravel()]
        out = np.empty(arr.shape, dtype=object)
        out.ravel()[:] = flat if flat else []
        return out

    def zeros(self, shape: Union[int, Tuple[int, ...]]) -> np.ndarray:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out

    def identity(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = Fraction(1)
        return out

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.dot(a, b)

    def random_elements(self, rng: np.random.Generator, size: Union[int, Tuple[int, ...]]) -> np.ndarray:
        return self.array(rng.integers(-9, 10, size=size))

    def random_nonzero(self, rng: np.random.Generator) -> Fraction:
        value = 0
        while value == 0:
            value = int(rng.integers(-9, 10))
        return Fraction(value)

    def to_json(self, value: Scalar) -> str:
        return str(Fraction(value))


Field = Union[PrimeField, RationalField]


@lru_cache(maxsize=None)
def get_field(characteristic: int) -> Field:
    """Field for a configured characteristic (0 means the rationals)"""
    if characteristic == 0:
        return RationalField()
    return PrimeField(characteristic)
