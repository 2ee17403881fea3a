"""Truncated q-series over the integers or the integers mod m.

A :class:`QSeries` holds the coefficients c_0 ... c_T of a power series in q,
everything beyond q^T being discarded.  Coefficients are stored densely in a
read-only numpy array: ``object`` dtype (Python ints) for the exact ring,
``int64`` for modular rings whose residues fit comfortably.

Also home to :func:`partition_series`, the ordinary partition numbers from
Euler's pentagonal recurrence.  It never touches the two-variable product
machinery, which is what makes it usable as an oracle for it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import UsageError

__all__ = [
    "CoeffRing",
    "EXACT",
    "QSeries",
    "qs_add",
    "qs_mul",
    "qs_pow",
    "qs_reduce",
    "partition_series",
    "partition_numbers",
]

_INT64_SAFE = 2**62


@dataclass(frozen=True)
class CoeffRing:
    """Coefficient ring: exact integers (``modulus is None``) or Z/mZ."""

    modulus: Optional[int] = None

    def __post_init__(self):
        if self.modulus is not None and self.modulus < 2:
            raise UsageError(f"modulus must be >= 2, got {self.modulus}")

    @classmethod
    def exact(cls) -> "CoeffRing":
        return cls(None)

    @classmethod
    def mod(cls, m: int) -> "CoeffRing":
        return cls(int(m))

    @property
    def is_exact(self) -> bool:
        return self.modulus is None

    @property
    def dtype(self):
        if self.modulus is None or self.modulus > 2**31:
            return object
        return np.int64

    def normalize(self, arr: np.ndarray) -> np.ndarray:
        """Reduce ``arr`` into canonical residues [0, m) (no-op for the exact ring)."""
        if self.modulus is None:
            return arr
        return np.mod(arr, self.modulus).astype(self.dtype, copy=False)

    def array(self, values: Iterable[int], length: Optional[int] = None) -> np.ndarray:
        vals = [int(v) for v in values]
        if length is not None:
            vals = (vals + [0] * length)[:length]
        if self.modulus is not None:
            vals = [v % self.modulus for v in vals]
        return np.array(vals, dtype=self.dtype) if vals else np.zeros(0, dtype=self.dtype)

    def zeros(self, shape) -> np.ndarray:
        if self.dtype is object:
            arr = np.empty(shape, dtype=object)
            arr.fill(0)
            return arr
        return np.zeros(shape, dtype=np.int64)

    def __str__(self) -> str:
        return "ZZ" if self.modulus is None else f"ZZ/{self.modulus}"


EXACT = CoeffRing.exact()


def int64_safe(modulus: Optional[int], n_terms: int) -> bool:
    """Whether summing ``n_terms`` products of residues mod ``modulus`` fits in int64."""
    return modulus is not None and n_terms * (modulus - 1) ** 2 < _INT64_SAFE


def convolve(a: np.ndarray, b: np.ndarray, length: int, modulus: Optional[int]) -> np.ndarray:
    """First ``length`` coefficients of the product of coefficient arrays ``a`` and ``b``.

    Schoolbook for both storage kinds.  Returned array is *not* reduced.
    """
    a = a[:length]
    b = b[:length]
    if len(a) == 0 or len(b) == 0:
        return np.zeros(length, dtype=object if modulus is None else np.int64)
    if int64_safe(modulus, min(len(a), len(b))):
        out = np.convolve(a.astype(np.int64, copy=False), b.astype(np.int64, copy=False))
    else:
        out = np.convolve(a.astype(object, copy=False), b.astype(object, copy=False))
    if len(out) >= length:
        return out[:length]
    res = np.zeros(length, dtype=out.dtype) if out.dtype != object else _obj_zeros(length)
    res[: len(out)] = out
    return res


def _obj_zeros(n: int) -> np.ndarray:
    arr = np.empty(n, dtype=object)
    arr.fill(0)
    return arr


class QSeries:
    """A power series in q known modulo q^(T+1).

    Supports ``+``, ``*`` and ``**`` (the operator forms of :func:`qs_add`,
    :func:`qs_mul`, :func:`qs_pow`), indexing, and equality.  Instances are
    immutable.
    """

    __slots__ = ("ring", "_coeffs")

    def __init__(self, coeffs: Sequence[int] | np.ndarray, ring: CoeffRing = EXACT, trunc: Optional[int] = None):
        if trunc is None:
            trunc = len(coeffs) - 1
        if trunc < 0:
            raise UsageError(f"truncation must be nonnegative, got {trunc}")
        arr = ring.array(list(coeffs), trunc + 1)
        arr.setflags(write=False)
        self.ring = ring
        self._coeffs = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray, ring: CoeffRing) -> "QSeries":
        # trusted constructor: arr already has canonical entries and dtype
        obj = cls.__new__(cls)
        arr = ring.normalize(arr)
        if arr.dtype != np.dtype(ring.dtype):
            arr = arr.astype(ring.dtype)
        arr.setflags(write=False)
        obj.ring = ring
        obj._coeffs = arr
        return obj

    @classmethod
    def zero(cls, trunc: int, ring: CoeffRing = EXACT) -> "QSeries":
        return cls([], ring, trunc)

    @classmethod
    def one(cls, trunc: int, ring: CoeffRing = EXACT) -> "QSeries":
        return cls([1], ring, trunc)

    @classmethod
    def monomial(cls, degree: int, trunc: int, ring: CoeffRing = EXACT, coeff: int = 1) -> "QSeries":
        if degree > trunc:
            return cls.zero(trunc, ring)
        return cls([0] * degree + [coeff], ring, trunc)

    @property
    def trunc(self) -> int:
        return len(self._coeffs) - 1

    @property
    def coeffs(self) -> np.ndarray:
        """Read-only coefficient array c_0 ... c_T."""
        return self._coeffs

    def tolist(self) -> list[int]:
        return [int(c) for c in self._coeffs]

    def __len__(self) -> int:
        return len(self._coeffs)

    def __getitem__(self, n: int) -> int:
        return int(self._coeffs[n])

    def __iter__(self):
        return (int(c) for c in self._coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.trunc == other.trunc
            and all(int(x) == int(y) for x, y in zip(self._coeffs, other._coeffs))
        )

    __hash__ = None

    def __add__(self, other: "QSeries") -> "QSeries":
        return qs_add(self, other)

    def __mul__(self, other: "QSeries") -> "QSeries":
        return qs_mul(self, other)

    def __pow__(self, e: int) -> "QSeries":
        return qs_pow(self, e)

    def truncate(self, trunc: int) -> "QSeries":
        """Drop every coefficient above q^trunc (``trunc`` may not exceed the current one)."""
        if trunc > self.trunc:
            raise UsageError(f"cannot extend truncation {self.trunc} to {trunc}")
        return QSeries._wrap(self._coeffs[: trunc + 1].copy(), self.ring)

    def shift(self, m: int) -> "QSeries":
        """Multiply by q^m (m >= 0), keeping the truncation."""
        if m < 0:
            raise UsageError("negative shifts leave the power-series ring")
        out = self.ring.zeros(self.trunc + 1)
        if m <= self.trunc:
            out[m:] = self._coeffs[: self.trunc + 1 - m]
        return QSeries._wrap(out, self.ring)

    def __repr__(self) -> str:
        terms = []
        for n, c in enumerate(self):
            if c:
                terms.append(f"{c}" if n == 0 else f"{c}*q^{n}")
        body = " + ".join(terms) if terms else "0"
        return f"QSeries({body} + O(q^{self.trunc + 1}), {self.ring})"


def _check_compatible(a: QSeries, b: QSeries) -> None:
    if a.ring != b.ring:
        raise UsageError(f"ring mismatch: {a.ring} vs {b.ring}")
    if a.trunc != b.trunc:
        raise UsageError(f"truncation mismatch: {a.trunc} vs {b.trunc}")


def qs_add(a: QSeries, b: QSeries) -> QSeries:
    _check_compatible(a, b)
    return QSeries._wrap(a.coeffs + b.coeffs, a.ring)


def qs_mul(a: QSeries, b: QSeries) -> QSeries:
    """Cauchy product of ``a`` and ``b`` truncated at their common q^T."""
    _check_compatible(a, b)
    out = convolve(a.coeffs, b.coeffs, a.trunc + 1, a.ring.modulus)
    return QSeries._wrap(out, a.ring)


def qs_pow(a: QSeries, e: int) -> QSeries:
    """``a**e`` by repeated squaring, truncating after every product."""
    if e < 0:
        raise UsageError(f"exponent must be nonnegative, got {e}")
    result = QSeries.one(a.trunc, a.ring)
    base = a
    while e:
        if e & 1:
            result = qs_mul(result, base)
        e >>= 1
        if e:
            base = qs_mul(base, base)
    return result


def qs_reduce(a: QSeries, m: int) -> QSeries:
    """Map an exact series into Z/mZ, coefficients landing in [0, m)."""
    if m < 2:
        raise UsageError(f"modulus must be >= 2, got {m}")
    if not a.ring.is_exact:
        raise UsageError(f"qs_reduce expects an exact series, got ring {a.ring}")
    return QSeries(a.tolist(), CoeffRing.mod(m), a.trunc)


def partition_numbers(trunc: int) -> list[int]:
    """p(0), ..., p(trunc) via Euler's pentagonal number recurrence."""
    if trunc < 0:
        raise UsageError(f"truncation must be nonnegative, got {trunc}")
    p = [1] + [0] * trunc
    for n in range(1, trunc + 1):
        total = 0
        j = 1
        while True:
            g1 = j * (3 * j - 1) // 2
            if g1 > n:
                break
            g2 = g1 + j
            term = p[n - g1] + (p[n - g2] if g2 <= n else 0)
            total += term if j % 2 else -term
            j += 1
        p[n] = total
    return p


def partition_series(trunc: int) -> QSeries:
    """Sum of p(n) q^n for n <= trunc, exact ring."""
    return QSeries(partition_numbers(trunc), EXACT, trunc)
