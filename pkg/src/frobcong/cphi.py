"""Tables of k-colored generalized Frobenius partition numbers cφ_k(n).

Four routes to the same numbers:

* :func:`cphi_direct` -- constant term of the k-color product, pruned window.
* :func:`cphi_mod_descent` -- residues mod a prime p via the base-p digits of
  k.  Since (1 + x)^p ≡ 1 + x^p (mod p), the k-color product is congruent to
  prod_i P(z^(p^i), q^(p^i))^(k_i) where P is the one-color product and the k_i
  are the digits.  Each digit factor only needs truncation T // p^i, so the
  cost grows with log_p(k) rather than with k.
* :func:`cphi_theta` -- Jacobi triple product: P = theta(z, q) / (q; q)_inf,
  where theta = sum_m z^m q^(m(m+1)/2).
* :func:`cphi_unpruned` -- plain dictionary expansion over the full z-range,
  factors in reverse order.  Small sizes only; used as a brute-force oracle.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import sympy

from .ctengine import (
    ZWindowSeries,
    _apply_terms,
    _intersect,
    _build_product,
    constant_term,
    live_window,
    support_bounds,
    substitute_power,
    window_bounds,
    zw_mul,
)
from .errors import UsageError
from .qseries import EXACT, CoeffRing, QSeries, partition_series, qs_pow, qs_reduce

__all__ = [
    "Method",
    "CphiTable",
    "cphi_direct",
    "cphi_mod_descent",
    "cphi_theta",
    "cphi_unpruned",
    "compute_table",
    "base_digits",
    "theta_terms",
    "UNPRUNED_MAX_T",
    "UNPRUNED_MAX_K",
]

UNPRUNED_MAX_T = 12
UNPRUNED_MAX_K = 6


class Method(str, enum.Enum):
    DIRECT = "direct"
    DESCENT = "descent"
    THETA = "theta"
    UNPRUNED = "unpruned"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class CphiTable:
    """cφ_k(0..T) in ``ring``, tagged with the route that produced it."""

    k: int
    ring: CoeffRing
    trunc: int
    values: tuple[int, ...]
    method: Method

    def __post_init__(self):
        if len(self.values) != self.trunc + 1:
            raise ValueError(f"expected {self.trunc + 1} values, got {len(self.values)}")
        one = 1 if self.ring.is_exact else 1 % self.ring.modulus
        if self.values[0] != one:
            raise ValueError(f"cφ_{self.k}(0) must be 1, got {self.values[0]}")

    @classmethod
    def from_series(cls, k: int, series: QSeries, method: Method) -> "CphiTable":
        return cls(k, series.ring, series.trunc, tuple(series.tolist()), method)

    @property
    def series(self) -> QSeries:
        return QSeries(self.values, self.ring, self.trunc)

    def __getitem__(self, n: int) -> int:
        return self.values[n]

    def __len__(self) -> int:
        return len(self.values)

    def same_values(self, other: "CphiTable") -> bool:
        return (self.k, self.ring, self.trunc, self.values) == (other.k, other.ring, other.trunc, other.values)


def _check_k(k: int) -> None:
    if k < 1:
        raise UsageError(f"number of colors must be >= 1, got {k} (the zero-color product is identically 1)")


def _check_prime(p: int) -> None:
    if not sympy.isprime(p):
        raise UsageError(f"descent needs a prime modulus, got {p}")


def cphi_direct(k: int, T: int, ring: CoeffRing = EXACT) -> CphiTable:
    _check_k(k)
    s = _build_product(k, T, ring, window_bounds(k, T), embed=False)
    return CphiTable.from_series(k, constant_term(s), Method.DIRECT)


def base_digits(k: int, p: int) -> list[int]:
    """Base-p digits of k, least significant first."""
    digits = []
    while k:
        k, d = divmod(k, p)
        digits.append(d)
    return digits


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def descent_product(k: int, T: int, p: int) -> ZWindowSeries:
    """The k-color product mod p, assembled from its base-p digit factors.

    Every factor and partial product is a sub-product of the full k-color
    product (a p^i-fold repeated factor counts as p^i colors).  So each can be
    clipped to ``window_bounds(k, T)`` (the rest cannot bring anything outside
    back to z^0) and to ``support_bounds(k, T)`` (nothing outside is nonzero).
    The intersection is O(T) wide, where ``window_bounds`` alone is O(k).
    """
    _check_k(k)
    _check_prime(p)
    ring = CoeffRing.mod(p)
    window = live_window(k, T)
    factors = []
    for i, digit in enumerate(base_digits(k, p)):
        if digit == 0:
            continue
        scale = p**i
        t_i = T // scale
        local = (_ceil_div(window[0], scale), window[1] // scale)
        local = _intersect(local, support_bounds(digit, t_i))
        factor = _build_product(digit, t_i, ring, local)
        factors.append(factor if scale == 1 else substitute_power(factor, scale, T))
    # sparsest (highest digit) factors first keeps the row count of partial products low
    acc = factors.pop()
    while factors:
        acc = zw_mul(acc, factors.pop(), window)
    return acc.reclip(window)


def cphi_mod_descent(k: int, T: int, p: int) -> CphiTable:
    """cφ_k(n) mod p for n <= T by the base-p digit descent."""
    _check_k(k)
    _check_prime(p)
    if T < 0:
        raise UsageError(f"truncation must be nonnegative, got {T}")
    return CphiTable.from_series(k, constant_term(descent_product(k, T, p)), Method.DESCENT)


def theta_terms(T: int) -> list[tuple[int, int]]:
    """(m, m(m+1)/2) for every m whose theta term survives truncation at q^T."""
    terms = []
    m = 0
    while m * (m + 1) // 2 <= T:
        terms.append((m, m * (m + 1) // 2))
        m += 1
    m = -1
    while m * (m + 1) // 2 <= T:
        terms.append((m, m * (m + 1) // 2))
        m -= 1
    return sorted(terms)


def cphi_theta(k: int, T: int, ring: CoeffRing = EXACT) -> CphiTable:
    """Same table through theta(z, q)^k / (q; q)_inf^k."""
    _check_k(k)
    if T < 0:
        raise UsageError(f"truncation must be nonnegative, got {T}")
    work = live_window(k, T)
    data = ring.zeros((work[1] - work[0] + 1, T + 1))
    data[-work[0], 0] = 1
    terms = [(m, d, 1) for m, d in theta_terms(T)]
    for _ in range(k):
        data = _apply_terms(data, terms, ring)
    theta_ct = QSeries._wrap(data[-work[0]].copy(), ring)
    euler_inv = partition_series(T)
    if not ring.is_exact:
        euler_inv = qs_reduce(euler_inv, ring.modulus)
    return CphiTable.from_series(k, theta_ct * qs_pow(euler_inv, k), Method.THETA)


def cphi_unpruned(k: int, T: int) -> CphiTable:
    """Brute-force expansion on the full z-range ±k·T, exact integers.

    Deliberately shares no code with the windowed engine: monomials live in a
    dict keyed by (z-exponent, q-exponent).
    """
    _check_k(k)
    if not 0 <= T <= UNPRUNED_MAX_T or k > UNPRUNED_MAX_K:
        raise UsageError(
            f"unpruned expansion limited to T <= {UNPRUNED_MAX_T}, k <= {UNPRUNED_MAX_K}; got k={k}, T={T}"
        )
    bound = k * T
    poly = {(0, 0): 1}
    factors = [(1, n + 1) for n in range(T + 1)] + [(-1, n) for n in range(T + 1)]
    for sign, j in reversed(factors):
        for _ in range(k):
            nxt = dict(poly)
            for (a, d), c in poly.items():
                key = (a + sign, d + j)
                if key[1] <= T and abs(key[0]) <= bound:
                    nxt[key] = nxt.get(key, 0) + c
            poly = nxt
    values = tuple(poly.get((0, d), 0) for d in range(T + 1))
    return CphiTable(k, EXACT, T, values, Method.UNPRUNED)


def compute_table(k: int, T: int, modulus: Optional[int] = None, method: Method | str = Method.DIRECT) -> CphiTable:
    """Dispatch on ``method``; descent requires a prime ``modulus``."""
    method = Method(method)
    ring = EXACT if modulus is None else CoeffRing.mod(modulus)
    if method is Method.DIRECT:
        return cphi_direct(k, T, ring)
    if method is Method.THETA:
        return cphi_theta(k, T, ring)
    if method is Method.DESCENT:
        if modulus is None:
            raise UsageError("descent computes residues only; pass a prime modulus")
        return cphi_mod_descent(k, T, modulus)
    if modulus is not None:
        raise UsageError("the unpruned oracle works over the integers only")
    return cphi_unpruned(k, T)
