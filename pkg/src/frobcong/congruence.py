"""Ramanujan-type congruences cφ_k(p n + r) ≡ 0 (mod p).

Checking single congruences, lifting a base case to the whole family
k = k0 + p N (the base-p descent makes the added p N colors invisible mod p),
combining families for distinct primes with the Chinese remainder theorem,
scanning for new candidates, and probing the off-center z-rows that the
dissection argument couples to.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import sympy

from .cphi import CphiTable, Method, cphi_direct, cphi_mod_descent
from .ctengine import build_base_product, support_bounds, z_coefficient
from .errors import UsageError
from .qseries import CoeffRing

__all__ = [
    "CongruenceFamily",
    "CompositeCongruence",
    "Counterexample",
    "Verdict",
    "Candidate",
    "DissectionRow",
    "DIRECT_COLOR_LIMIT",
    "SEARCH_MIN_SCAN",
    "residue_table",
    "verify_single",
    "lift_family",
    "verify_family",
    "crt_solve",
    "crt_combine",
    "verify_composite",
    "search",
    "verify_dissection_ingredients",
]

# Members with more colors than this are always computed by descent.
DIRECT_COLOR_LIMIT = 24
SEARCH_MIN_SCAN = 25


def _check_prime(p: int) -> None:
    if not sympy.isprime(p):
        raise UsageError(f"modulus must be prime, got {p}")


def _check_hypothesis(k: int, p: int, r: int) -> None:
    _check_prime(p)
    if not 0 < r < p:
        raise UsageError(f"residue must satisfy 0 < r < p (got r={r}, p={p}); r = 0 is outside the lifting theorem")
    if k < 1:
        raise UsageError(f"number of colors must be >= 1, got {k}")


@dataclass(frozen=True)
class CongruenceFamily:
    """cφ_{k0 + step·N}(p n + r) ≡ 0 (mod p) for all N, n >= 0; step 0 is a single k."""

    k0: int
    p: int
    r: int
    step: int = 0
    label: str = ""

    def __post_init__(self):
        _check_hypothesis(self.k0, self.p, self.r)
        if self.step < 0:
            raise UsageError(f"step must be >= 0, got {self.step}")

    def colors(self, N: int) -> int:
        return self.k0 + self.step * N

    def __str__(self) -> str:
        k = f"{self.step}N+{self.k0}" if self.step else str(self.k0)
        return f"cφ_{{{k}}}({self.p}n+{self.r}) ≡ 0 (mod {self.p})"


@dataclass(frozen=True)
class CompositeCongruence:
    """cφ_{M N + k_residue}(M n + n_residue) ≡ 0 (mod M), for N >= N_min and n >= 0."""

    k_residue: int
    k_modulus: int
    n_residue: int
    n_modulus: int
    modulus: int
    N_min: int = 0
    members: tuple[CongruenceFamily, ...] = field(default=(), compare=False)

    @property
    def primes(self) -> list[int]:
        return sorted(sympy.primefactors(self.modulus))

    def colors(self, N: int) -> int:
        return self.k_modulus * N + self.k_residue

    def __str__(self) -> str:
        M = self.modulus
        return f"cφ_{{{self.k_modulus}N+{self.k_residue}}}({self.n_modulus}n+{self.n_residue}) ≡ 0 (mod {M})"


@dataclass(frozen=True)
class Counterexample:
    k: int
    n: int
    argument: int
    residue: int
    modulus: int


@dataclass(frozen=True)
class Verdict:
    holds: bool
    checked_n_max: int
    checked_N_max: int
    counterexample: Optional[Counterexample] = None

    def __post_init__(self):
        if not self.holds and self.counterexample is None:
            raise ValueError("a failing verdict needs a witness")


@dataclass(frozen=True)
class Candidate:
    k: int
    r: int
    p: int
    n_scan: int
    status: str = "empirical"


@dataclass(frozen=True)
class DissectionRow:
    j: int
    z_exponent: int
    status: str  # "vanishes", "nonvanishing" or "vacuous (outside window)"
    witness_n: Optional[int] = None
    witness_residue: Optional[int] = None


def residue_table(k: int, p: int, T: int, method: Method | str = Method.DESCENT) -> CphiTable:
    """cφ_k(0..T) mod p, forcing descent beyond ``DIRECT_COLOR_LIMIT`` colors."""
    method = Method(method)
    if method is Method.DIRECT and k <= DIRECT_COLOR_LIMIT:
        return cphi_direct(k, T, CoeffRing.mod(p))
    if method not in (Method.DIRECT, Method.DESCENT):
        raise UsageError(f"verification uses direct or descent, got {method}")
    return cphi_mod_descent(k, T, p)


def _other(method: Method) -> Method:
    return Method.DIRECT if method is Method.DESCENT else Method.DESCENT


def _confirm(k: int, p: int, argument: int, residue: int, method: Method) -> None:
    """Recompute a failing value along the other route; disagreement is a bug."""
    other = _other(method)
    if other is Method.DIRECT:
        again = cphi_direct(k, argument, CoeffRing.mod(p))[argument]
    else:
        again = cphi_mod_descent(k, argument, p)[argument]
    if again != residue:
        raise RuntimeError(
            f"cφ_{k}({argument}) mod {p}: {method} gave {residue} but {other} gave {again}"
        )


def _first_failure(table: CphiTable, p: int, r: int, n_max: int, step: int = None) -> Optional[tuple[int, int]]:
    step = p if step is None else step
    for n in range(n_max + 1):
        v = table[step * n + r] % p
        if v:
            return n, v
    return None


def verify_single(k: int, p: int, r: int, n_max: int, method: Method | str = Method.DESCENT) -> Verdict:
    """Check cφ_k(p n + r) ≡ 0 (mod p) for 0 <= n <= n_max."""
    _check_hypothesis(k, p, r)
    method = Method(method)
    if n_max < 0:
        return Verdict(True, -1, 0)
    table = residue_table(k, p, p * n_max + r, method)
    fail = _first_failure(table, p, r, n_max)
    if fail is None:
        return Verdict(True, n_max, 0)
    n, v = fail
    _confirm(k, p, p * n + r, v, table.method)
    return Verdict(False, n_max, 0, Counterexample(k, n, p * n + r, v, p))


def lift_family(k: int, p: int, r: int, label: str = "") -> CongruenceFamily:
    """The family cφ_{pN+k}(pn+r) ≡ 0 (mod p) implied by a base congruence at k.

    Encodes the implication only; nothing is verified here.
    """
    _check_hypothesis(k, p, r)
    return CongruenceFamily(k, p, r, p, label or f"lifted from cφ_{k}({p}n+{r})")


def verify_family(
    f: CongruenceFamily, N_max: int, n_max: int, method: Method | str = Method.DESCENT
) -> Verdict:
    """verify_single for each member k0 + step·N, N = 0..N_max; first failure wins."""
    if N_max < 0 or n_max < 0:
        return Verdict(True, -1, -1)
    N_range = range(N_max + 1) if f.step else range(1)
    for N in N_range:
        v = verify_single(f.colors(N), f.p, f.r, n_max, method)
        if not v.holds:
            return Verdict(False, n_max, N, v.counterexample)
    return Verdict(True, n_max, N_max)


def crt_solve(residues: Sequence[int], moduli: Sequence[int]) -> tuple[int, int]:
    """x in [0, M) with x ≡ residues[i] (mod moduli[i]); moduli pairwise coprime."""
    x, M = 0, 1
    for a, m in zip(residues, moduli):
        if math.gcd(M, m) != 1:
            raise UsageError(f"moduli must be pairwise coprime, {m} shares a factor with {M}")
        # x + M t ≡ a (mod m)
        t = ((a - x) * pow(M, -1, m)) % m
        x += M * t
        M *= m
    return x % M, M


def crt_combine(families: Iterable[CongruenceFamily]) -> CompositeCongruence:
    """Glue lifted families for distinct primes into one congruence mod their product."""
    families = tuple(families)
    if len(families) < 2:
        raise UsageError("need at least two families to combine")
    primes = [f.p for f in families]
    if len(set(primes)) != len(primes):
        raise UsageError(f"primes must be distinct, got {primes}")
    for f in families:
        if f.step != f.p:
            raise UsageError(f"family {f} has step {f.step}; only lifted families (step = p) combine")
    k_res, M = crt_solve([f.k0 for f in families], primes)
    n_res, _ = crt_solve([f.r for f in families], primes)
    # member i covers k >= k0_i only
    N_min = max(0, max(-((k_res - f.k0) // M) for f in families))
    return CompositeCongruence(k_res, M, n_res, M, M, N_min, families)


def verify_composite(c: CompositeCongruence, N_max: int, n_max: int) -> Verdict:
    """Per-prime descent checks of cφ_{MN+k}(Mn+r) for N_min <= N <= N_max, n <= n_max."""
    if N_max < c.N_min or n_max < 0:
        return Verdict(True, -1, -1)
    M = c.n_modulus
    T = M * n_max + c.n_residue
    for N in range(c.N_min, N_max + 1):
        k = c.colors(N)
        for p in c.primes:
            table = cphi_mod_descent(k, T, p)
            fail = _first_failure(table, p, c.n_residue, n_max, step=M)
            if fail is not None:
                n, v = fail
                arg = M * n + c.n_residue
                _confirm(k, p, arg, v, Method.DESCENT)
                return Verdict(False, n_max, N, Counterexample(k, n, arg, v, p))
    return Verdict(True, n_max, N_max)


def search(p: int, k_range: Iterable[int], n_scan: int, method: Method | str = Method.DESCENT) -> list[Candidate]:
    """(k, r) pairs with cφ_k(p n + r) ≡ 0 (mod p) for every n <= n_scan.

    Survivors are scan results, not theorems.
    """
    _check_prime(p)
    if n_scan < SEARCH_MIN_SCAN:
        raise UsageError(f"n_scan must be >= {SEARCH_MIN_SCAN} to keep accidental survivors out, got {n_scan}")
    found = []
    T = p * n_scan + p - 1
    for k in k_range:
        table = residue_table(k, p, T, method)
        for r in range(1, p):
            if _first_failure(table, p, r, n_scan) is None:
                found.append(Candidate(k, r, p, n_scan))
    return found


def verify_dissection_ingredients(k: int, p: int, r: int, j_max: int, n_max: int) -> list[DissectionRow]:
    """For |j| <= j_max: does [q^(pn+r)] of the z^(pj) row of the k-color product vanish mod p?

    Rows beyond the support of the product are zero to begin with and are
    reported as vacuous.
    """
    _check_hypothesis(k, p, r)
    if j_max < 0 or n_max < 0:
        return []
    T = p * n_max + r
    lo, hi = support_bounds(k, T)
    live = [p * j for j in range(-j_max, j_max + 1) if lo <= p * j <= hi]
    margin = max((abs(e) for e in live), default=0)
    s = build_base_product(k, T, CoeffRing.mod(p), margin=margin)
    report = []
    for j in range(-j_max, j_max + 1):
        e = p * j
        if e not in live:
            report.append(DissectionRow(j, e, "vacuous (outside window)"))
            continue
        row = z_coefficient(s, e)
        bad = next(((n, row[p * n + r]) for n in range(n_max + 1) if row[p * n + r]), None)
        if bad is None:
            report.append(DissectionRow(j, e, "vanishes"))
        else:
            report.append(DissectionRow(j, e, "nonvanishing", bad[0], bad[1]))
    return report
