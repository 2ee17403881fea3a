"""Constant-term engine for the two-variable product

    prod_{n>=0} (1 + z q^(n+1))^k (1 + z^-1 q^n)^k .

The product is expanded as a :class:`ZWindowSeries`: one truncated q-series per
power of z, kept only on a window of z-exponents.  Exponents outside
:func:`window_bounds` provably cannot reach z^0 within the q-budget, so every
partial product is clipped to that window as it is built.  Rows are also
clipped to the *support* of the product (exponents that can carry a nonzero
coefficient at all), which is the mirror image of the same cost analysis.

Only the z^0 row is guaranteed exact by default.  Passing ``margin=M`` to
:func:`build_base_product` widens the window so that every row z^m with
|m| <= M is exact as well.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import UsageError
from .qseries import EXACT, CoeffRing, QSeries, convolve, int64_safe

__all__ = [
    "WindowBudget",
    "ZWindowSeries",
    "window_bounds",
    "support_bounds",
    "live_window",
    "build_base_product",
    "constant_term",
    "z_coefficient",
    "zw_mul",
    "substitute_power",
]

Window = tuple[int, int]


@dataclass(frozen=True)
class WindowBudget:
    """Minimal q-degree needed to accumulate a given z-degree from k colors.

    ``poscost(a)``: cheapest way to reach z^a using factors z q^j (j >= 1,
    each at most k times), i.e. sum_{i<=a} ceil(i/k).

    ``negcost(b)``: cheapest way to reach z^-b using factors z^-1 q^j
    (j >= 0, each at most k times), i.e. sum_{i<=b} floor((i-1)/k).
    """

    k: int
    T: int

    def poscost(self, a: int) -> int:
        q, r = divmod(a, self.k)
        return self.k * q * (q + 1) // 2 + r * (q + 1)

    def negcost(self, b: int) -> int:
        q, r = divmod(b, self.k)
        return self.k * q * (q - 1) // 2 + r * q

    def max_pos(self) -> int:
        """Largest a with poscost(a) <= T."""
        return bisect.bisect_right(range(self.T + 2), self.T, key=self.poscost) - 1

    def max_neg(self) -> int:
        """Largest b with negcost(b) <= T."""
        hi = self.k * (self.T + 2) + 1
        return bisect.bisect_right(range(hi), self.T, key=self.negcost) - 1


def _check_colors(k: int, T: int) -> None:
    if k < 1:
        raise UsageError(f"number of colors must be >= 1, got {k}")
    if T < 0:
        raise UsageError(f"truncation must be nonnegative, got {T}")


def window_bounds(k: int, T: int) -> Window:
    """z-exponent window outside of which nothing can reach z^0 by q^T.

    A positive exponent a is kept if it can still be cancelled by negative
    factors within budget, and symmetrically for negative exponents.
    """
    _check_colors(k, T)
    budget = WindowBudget(k, T)
    return (-budget.max_pos(), budget.max_neg())


def support_bounds(k: int, T: int) -> Window:
    """z-exponents at which the k-color product can be nonzero up to q^T."""
    e_min, e_max = window_bounds(k, T)
    return (-e_max, -e_min)


def _intersect(a: Window, b: Window) -> Window:
    return (max(a[0], b[0]), min(a[1], b[1]))


def live_window(k: int, T: int) -> Window:
    """window_bounds ∩ support_bounds: rows that can be nonzero *and* reach z^0.

    Its width is at most 2T + 1 whatever k is.
    """
    return _intersect(window_bounds(k, T), support_bounds(k, T))


class ZWindowSeries:
    """Bivariate series: z-exponent -> truncated q-series, on a window [e_min, e_max].

    Rows are stored densely as a ``(e_max - e_min + 1, T + 1)`` array,
    zero rows included.
    """

    __slots__ = ("ring", "trunc", "e_min", "e_max", "_data")

    def __init__(self, data: np.ndarray, window: Window, trunc: int, ring: CoeffRing = EXACT):
        e_min, e_max = window
        if not e_min <= 0 <= e_max:
            raise UsageError(f"window {window} must contain 0")
        if data.shape != (e_max - e_min + 1, trunc + 1):
            raise UsageError(f"row array shape {data.shape} does not match window {window}, trunc {trunc}")
        data = ring.normalize(data)
        data.setflags(write=False)
        self.ring = ring
        self.trunc = trunc
        self.e_min = e_min
        self.e_max = e_max
        self._data = data

    @classmethod
    def from_rows(
        cls,
        rows: Mapping[int, Sequence[int] | QSeries],
        trunc: int,
        ring: CoeffRing = EXACT,
        window: Optional[Window] = None,
    ) -> "ZWindowSeries":
        if window is None:
            keys = list(rows) + [0]
            window = (min(keys), max(keys))
        data = ring.zeros((window[1] - window[0] + 1, trunc + 1))
        for e, coeffs in rows.items():
            if window[0] <= e <= window[1]:
                vals = coeffs.tolist() if isinstance(coeffs, QSeries) else list(coeffs)
                data[e - window[0]] = ring.array(vals, trunc + 1)
        return cls(data, window, trunc, ring)

    @classmethod
    def one(cls, trunc: int, ring: CoeffRing = EXACT, window: Window = (0, 0)) -> "ZWindowSeries":
        return cls.from_rows({0: [1]}, trunc, ring, window)

    @property
    def window(self) -> Window:
        return (self.e_min, self.e_max)

    @property
    def data(self) -> np.ndarray:
        return self._data

    def __contains__(self, e: int) -> bool:
        return self.e_min <= e <= self.e_max

    def row(self, e: int) -> QSeries:
        if e not in self:
            return QSeries.zero(self.trunc, self.ring)
        return QSeries._wrap(self._data[e - self.e_min].copy(), self.ring)

    @property
    def rows(self) -> dict[int, QSeries]:
        return {e: self.row(e) for e in range(self.e_min, self.e_max + 1)}

    def nonzero_exponents(self) -> list[int]:
        mask = np.array([any(r) for r in self._data], dtype=bool)
        return [int(i) + self.e_min for i in np.flatnonzero(mask)]

    def reclip(self, window: Window) -> "ZWindowSeries":
        """Same series on another window (rows outside the old window are zero)."""
        out = self.ring.zeros((window[1] - window[0] + 1, self.trunc + 1))
        lo, hi = _intersect(window, self.window)
        if lo <= hi:
            out[lo - window[0] : hi - window[0] + 1] = self._data[lo - self.e_min : hi - self.e_min + 1]
        return ZWindowSeries(out, window, self.trunc, self.ring)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ZWindowSeries):
            return NotImplemented
        if self.ring != other.ring or self.trunc != other.trunc:
            return False
        lo = min(self.e_min, other.e_min)
        hi = max(self.e_max, other.e_max)
        return all(self.row(e) == other.row(e) for e in range(lo, hi + 1))

    __hash__ = None

    def __repr__(self) -> str:
        return f"ZWindowSeries(window={self.window}, trunc={self.trunc}, ring={self.ring})"


# -- kernels ---------------------------------------------------------------

Term = tuple[int, int, int]  # (z-shift, q-shift, coefficient)


def _apply_terms(data: np.ndarray, terms: Sequence[Term], ring: CoeffRing) -> np.ndarray:
    """Multiply a dense row block by sum of c * z^dz * q^dq, clipping to the same block."""
    R, L = data.shape
    m = ring.modulus
    out = ring.zeros((R, L))
    reduce_each = m is not None and not int64_safe(m, len(terms))
    for dz, dq, c in terms:
        if dq >= L or abs(dz) >= R:
            continue
        src = data[max(0, -dz) : R - max(0, dz), : L - dq]
        dst = out[max(0, dz) : R - max(0, -dz), dq:]
        if c == 1:
            dst += src
        else:
            dst += c * src
        if reduce_each:
            np.mod(out, m, out=out)
    return ring.normalize(out)


def _binomial_terms(k: int, z_step: int, q_step: int, T: int, ring: CoeffRing) -> list[Term]:
    """Terms of (1 + z^z_step q^q_step)^k below q^(T+1)."""
    terms = []
    for t in range(k + 1):
        if q_step * t > T:
            break
        c = math.comb(k, t)
        if ring.modulus is not None:
            c %= ring.modulus
        if c:
            terms.append((z_step * t, q_step * t, c))
    return terms


def _product_factors(T: int, n_upto: int, reverse: bool) -> list[tuple[int, int]]:
    """(z-sign, q-exponent) of each binomial factor that is not identically 1 mod q^(T+1)."""
    factors = []
    for n in range(n_upto + 1):
        if n + 1 <= T:
            factors.append((1, n + 1))
        if n <= T:
            factors.append((-1, n))
    return factors[::-1] if reverse else factors


def _build_product(
    k: int,
    T: int,
    ring: CoeffRing,
    window: Window,
    *,
    n_upto: Optional[int] = None,
    reverse: bool = False,
    embed: bool = True,
) -> ZWindowSeries:
    """k-color product on ``window``; work is confined to window ∩ support.

    With ``embed=False`` the result stays on window ∩ support, whose width is
    O(T) even when ``window`` is O(k) wide.
    """
    work = _intersect(window, support_bounds(k, T))
    data = ring.zeros((work[1] - work[0] + 1, T + 1))
    data[-work[0], 0] = 1
    for sign, j in _product_factors(T, T if n_upto is None else n_upto, reverse):
        data = _apply_terms(data, _binomial_terms(k, sign, j, T, ring), ring)
    # work always contains 0: support_bounds and window both do
    out = ZWindowSeries(data, work, T, ring)
    return out.reclip(window) if embed else out


def build_base_product(k: int, T: int, ring: CoeffRing = EXACT, margin: int = 0) -> ZWindowSeries:
    """Expand prod_{n=0}^{T} (1 + z q^(n+1))^k (1 + z^-1 q^n)^k mod q^(T+1).

    The window is :func:`window_bounds` widened by ``margin`` on both sides;
    rows z^m with |m| <= margin are exact, and z^0 always is.
    """
    _check_colors(k, T)
    if margin < 0:
        raise UsageError(f"margin must be nonnegative, got {margin}")
    e_min, e_max = window_bounds(k, T)
    return _build_product(k, T, ring, (e_min - margin, e_max + margin))


def constant_term(s: ZWindowSeries) -> QSeries:
    """The z^0 row."""
    return s.row(0)


def z_coefficient(s: ZWindowSeries, m: int) -> QSeries:
    """The z^m row, or the zero series when m lies outside the window."""
    return s.row(m)


def _row_spans(s: ZWindowSeries) -> list[tuple[int, int, np.ndarray]]:
    spans = []
    for i, row in enumerate(s.data):
        nz = np.flatnonzero(row)
        if len(nz):
            lo, hi = int(nz[0]), int(nz[-1])
            spans.append((i + s.e_min, lo, row[lo : hi + 1]))
    return spans


def zw_mul(a: ZWindowSeries, b: ZWindowSeries, clip: Optional[Window] = None) -> ZWindowSeries:
    """Bivariate product of ``a`` and ``b``, rows kept on ``clip``.

    ``clip`` defaults to the sum of the two windows (no clipping).
    """
    if a.ring != b.ring:
        raise UsageError(f"ring mismatch: {a.ring} vs {b.ring}")
    if a.trunc != b.trunc:
        raise UsageError(f"truncation mismatch: {a.trunc} vs {b.trunc}")
    if clip is None:
        clip = (a.e_min + b.e_min, a.e_max + b.e_max)
    ring, L = a.ring, a.trunc + 1
    m = ring.modulus
    out = ring.zeros((clip[1] - clip[0] + 1, L))
    b_spans = _row_spans(b)
    for ea, la, ra in _row_spans(a):
        for eb, lb, rb in b_spans:
            e = ea + eb
            off = la + lb
            if not clip[0] <= e <= clip[1] or off >= L:
                continue
            prod = convolve(ra, rb, L - off, m)
            n = min(len(prod), L - off)
            dst = out[e - clip[0], off : off + n]
            dst += prod[:n]
            if m is not None:
                np.mod(dst, m, out=dst)
    return ZWindowSeries(out, clip, a.trunc, ring)


def substitute_power(s: ZWindowSeries, scale: int, trunc: int) -> ZWindowSeries:
    """Substitute z -> z^scale, q -> q^scale, re-truncating at q^trunc.

    Requires ``s.trunc >= trunc // scale`` so that no needed coefficient is missing.
    """
    if scale < 1:
        raise UsageError(f"scale must be >= 1, got {scale}")
    if s.trunc < trunc // scale:
        raise UsageError(f"series truncated at {s.trunc} cannot supply q^{trunc} after scaling by {scale}")
    window = (s.e_min * scale, s.e_max * scale)
    out = s.ring.zeros((window[1] - window[0] + 1, trunc + 1))
    d_max = trunc // scale
    for i in range(s.e_max - s.e_min + 1):
        out[i * scale, : d_max * scale + 1 : scale] = s.data[i, : d_max + 1]
    return ZWindowSeries(out, window, trunc, s.ring)
