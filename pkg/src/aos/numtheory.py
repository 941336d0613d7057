"""Arithmetic functions and small-modulus Dirichlet characters.

The sieve fills von Mangoldt Lambda, Moebius mu, Liouville lambda and the
smallest prime factor in one pass of numpy slicing (python-level iteration
only over primes up to sqrt(N)).  Lambda(p^j) is stored as the binary64 of
log p directly, never accumulated, so Lambda-weighted sums do not drift.

Characters are explicit value tables for moduli {1, 3, 4, 5, 8, 12}; index
0 is always the principal character.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import InvalidParameterError
from .quadrature import TailCertificate

_SIEVE_LIMIT = 10 ** 7


@dataclass(frozen=True)
class SieveTable:
    """Per-k arithmetic data for 0 <= k <= limit (index 0 unused)."""

    limit: int
    mangoldt: np.ndarray        # Lambda(k), float64
    moebius: np.ndarray         # mu(k) in {-1, 0, 1}, int8
    liouville: np.ndarray       # (-1)^{Omega(k)} in {-1, 1}, int8
    smallest_prime_factor: np.ndarray  # int64

    def is_prime(self, k: int) -> bool:
        return k >= 2 and self.smallest_prime_factor[k] == k


@lru_cache(maxsize=4)
def build_sieve(N: int) -> SieveTable:
    """Sieve all arithmetic-function tables up to N (2 <= N <= 1e7)."""
    if not isinstance(N, int) or not (2 <= N <= _SIEVE_LIMIT):
        raise InvalidParameterError(f"build_sieve: N={N} outside 2..1e7")
    idx = np.arange(N + 1, dtype=np.int64)
    spf = np.zeros(N + 1, dtype=np.int64)
    mangoldt = np.zeros(N + 1)
    omega = np.zeros(N + 1, dtype=np.int16)  # with multiplicity
    squared = np.zeros(N + 1, dtype=bool)
    divided = idx.copy()  # k with all prime factors <= sqrt(N) divided out
    for p in range(2, int(math.isqrt(N)) + 1):
        if spf[p] == 0:
            seg = spf[p * p::p]
            np.copyto(seg, p, where=(seg == 0))
            logp = math.log(p)
            pk = p
            while pk <= N:
                omega[pk::pk] += 1
                divided[pk::pk] //= p
                mangoldt[pk] = logp
                pk *= p
            squared[p * p::p * p] = True
    big = divided > 1  # one leftover prime factor > sqrt(N)
    omega[big] += 1
    big_primes = (divided == idx) & (idx >= 2)
    mangoldt[big_primes] = np.log(idx[big_primes].astype(np.float64))
    np.copyto(spf, idx, where=(spf == 0) & (idx >= 2))
    liouville = np.where(omega % 2 == 0, 1, -1).astype(np.int8)
    liouville[0] = 0
    moebius = np.where(squared, 0, liouville).astype(np.int8)
    moebius[0] = 0
    for arr in (spf, mangoldt, moebius, liouville):
        arr.flags.writeable = False
    return SieveTable(N, mangoldt, moebius, liouville, spf)


# ---------------------------------------------------------------------------
# Dirichlet characters

_SUPPORTED_MODULI = (1, 3, 4, 5, 8, 12)

# unit group generators (g, order) per modulus
_GROUP = {
    1: (),
    3: ((2, 2),),
    4: ((3, 2),),
    5: ((2, 4),),
    8: ((7, 2), (5, 2)),
    12: ((11, 2), (7, 2)),
}


@dataclass(frozen=True)
class DirichletCharacter:
    """Table-backed character mod q; chi(a) = 0 when gcd(a, q) > 1."""

    modulus: int
    index: int
    values: tuple  # chi(a) for a = 0..q-1
    principal: bool = field(default=False)

    def __call__(self, n: int) -> complex:
        return self.values[n % self.modulus]

    def on_array(self, ks: np.ndarray) -> np.ndarray:
        table = np.array(self.values, dtype=np.complex128)
        return table[np.asarray(ks, dtype=np.int64) % self.modulus]


def _unit_exponents(q: int):
    """Map each unit a mod q to its exponent vector over the generators."""
    gens = _GROUP[q]
    units = [a for a in range(1, q + 1) if math.gcd(a, q) == 1]
    expo = {}
    if not gens:
        return {1: ()}, units
    orders = [o for (_, o) in gens]
    for a in units:
        found = None
        ranges = [range(o) for o in orders]
        # direct product is tiny (<= 4 elements per factor); brute force
        def prod(vec):
            v = 1
            for (g, _), e in zip(gens, vec):
                v = (v * pow(g, e, q)) % q
            return v
        import itertools
        for vec in itertools.product(*ranges):
            if prod(vec) == a % q:
                found = vec
                break
        if found is None:
            raise InvalidParameterError(f"unit {a} not generated mod {q}")
        expo[a % q] = found
    return expo, units


@lru_cache(maxsize=32)
def character(modulus: int, index: int) -> DirichletCharacter:
    """The ``index``-th character mod ``modulus``; index 0 is principal."""
    if modulus not in _SUPPORTED_MODULI:
        raise InvalidParameterError(
            f"character: modulus {modulus} not in {_SUPPORTED_MODULI}"
        )
    gens = _GROUP[modulus]
    orders = [o for (_, o) in gens]
    group_size = 1
    for o in orders:
        group_size *= o
    if not isinstance(index, int) or not (0 <= index < group_size):
        raise InvalidParameterError(
            f"character: index {index} outside 0..{group_size - 1} mod {modulus}"
        )
    expo, _units = _unit_exponents(modulus)
    # decompose index into character exponents per generator
    cexp = []
    rem = index
    for o in orders:
        cexp.append(rem % o)
        rem //= o
    values = []
    for a in range(modulus if modulus > 1 else 1):
        if modulus == 1:
            values.append(1.0 + 0.0j)
            continue
        if math.gcd(a, modulus) != 1:
            values.append(0.0 + 0.0j)
            continue
        phase = 0.0
        for e, ce, o in zip(expo[a], cexp, orders):
            phase += 2.0 * math.pi * e * ce / o
        v = cmath.exp(1j * phase)
        # snap to exact roots of unity (tables stay crisp)
        v = complex(round(v.real, 15), round(v.imag, 15))
        if abs(v.imag) < 1e-15:
            v = complex(v.real, 0.0)
        if abs(v.real) < 1e-15:
            v = complex(0.0, v.imag)
        values.append(v)
    return DirichletCharacter(
        modulus=max(modulus, 1),
        index=index,
        values=tuple(values),
        principal=(index == 0),
    )


def character_count(modulus: int) -> int:
    if modulus not in _SUPPORTED_MODULI:
        raise InvalidParameterError(f"character_count: unsupported modulus {modulus}")
    n = 1
    for _, o in _GROUP[modulus]:
        n *= o
    return n


# ---------------------------------------------------------------------------
# certified Dirichlet-type sums over the sieve

_DEFAULT_SIEVE_N = 700_000


def _log_tail(N: int, sigma: float) -> float:
    """Upper bound on sum_{k>N} log(k) k^{-sigma} (integral comparison)."""
    if N < 3:
        N = 3
    return (math.log(N) / (sigma - 1) + 1.0 / (sigma - 1) ** 2) * N ** (1.0 - sigma)


def mangoldt_series(s: complex, tol: float = 1e-9,
                    weights: np.ndarray | None = None) -> TailCertificate:
    """Certified Σ_k w(k) Lambda(k) k^{-s} with |w| <= 1 (default w = 1).

    The certificate's finite part is the sieve sum; the tail bound is the
    integral comparison on log(k) k^{-Re s}.
    """
    s = complex(s)
    sigma = s.real
    if sigma <= 1.2:
        raise InvalidParameterError("mangoldt_series: Re s must exceed 1.2")
    # choose K so the tail certificate meets tol (cap at the sieve limit)
    K = 64
    while _log_tail(K, sigma) > tol and K < _DEFAULT_SIEVE_N:
        K *= 2
    K = min(K, _DEFAULT_SIEVE_N)
    table = build_sieve(max(K, 1000))
    k = np.arange(2, K + 1, dtype=np.float64)
    lam = table.mangoldt[2:K + 1]
    kernel = np.exp(-s * np.log(k)) if s.imag != 0 else k ** (-sigma)
    if weights is not None:
        kernel = kernel * weights[2:K + 1]
    vals = lam * kernel
    from .quadrature import kahan_sum

    finite = kahan_sum(vals)
    return TailCertificate(finite, _log_tail(K, sigma), "integral-comparison", K - 1)
