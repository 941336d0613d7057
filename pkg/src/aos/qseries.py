"""q-Pochhammer products, the Ramanujan entire function A_q, and the
squared-norm series attached to the Gaussian-measure q-cases.

Infinite products are truncated once the running factor satisfies
|a q^k| < 1e-17; the discarded factors multiply the result by
exp(Σ_{j>k} |a| q^j) - 1 <= 2 |a| q^{k+1} / (1 - q), which is below one ulp
at that cut.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidParameterError
from .quadrature import TailCertificate, geometric_tail

_CUT = 1e-17
_MAX_FACTORS = 4000


@dataclass(frozen=True)
class QParams:
    """Base q in (0,1) and exponent scale beta > 0 for the Gaussian q-measure."""

    q: float
    beta: float

    def __post_init__(self):
        if not (0.0 < self.q < 1.0):
            raise InvalidParameterError(f"QParams: q={self.q} outside (0,1)")
        if not (self.beta > 0.0):
            raise InvalidParameterError(f"QParams: beta={self.beta} must be positive")

    @property
    def std(self) -> float:
        """Standard deviation of the matching Gaussian density."""
        return math.sqrt(2.0 * self.beta * math.log(1.0 / self.q))


def _check_q(q: float):
    if not (0.0 < q < 1.0):
        raise DomainError(f"q={q} outside (0,1)")


def qpochhammer(a: complex, q: float, n: int | float = math.inf) -> complex:
    """(a; q)_n; pass n = math.inf for the convergent infinite product."""
    _check_q(q)
    a = complex(a)
    if n is math.inf or n == math.inf:
        prod = 1.0 + 0.0j
        aq = a
        for _ in range(_MAX_FACTORS):
            if abs(aq) < _CUT:
                break
            prod *= 1.0 - aq
            aq *= q
        return prod
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise InvalidParameterError(f"qpochhammer: n={n} must be a nonnegative integer")
    prod = 1.0 + 0.0j
    aq = a
    for _ in range(int(n)):
        prod *= 1.0 - aq
        aq *= q
    return prod


def qpochhammer_inf_vec(a: np.ndarray, q: float) -> np.ndarray:
    """(a; q)_inf elementwise over a complex array."""
    _check_q(q)
    prod = np.ones_like(a, dtype=np.complex128)
    aq = np.array(a, dtype=np.complex128)
    for _ in range(_MAX_FACTORS):
        if np.max(np.abs(aq)) < _CUT:
            break
        prod *= 1.0 - aq
        aq *= q
    return prod


def ramanujan_Aq(q: float, z: complex) -> complex:
    """A_q(z) = Σ_n q^{n²} (-z)^n / (q; q)_n, entire in z."""
    _check_q(q)
    z = complex(z)
    term = 1.0 + 0.0j
    acc = term
    for n in range(1, 600):
        term *= q ** (2 * n - 1) * (-z) / (1.0 - q ** n)
        acc += term
        if abs(term) < 1e-18 * max(abs(acc), 1e-280):
            break
    return acc


def gaussian_weighted_poch(q: float, z: complex, mu: float) -> complex:
    """q^{mu²/2} (-z q^{1/2-mu}; q)_inf through its stable shifted series.

    Equal to Σ_k z^k q^{(k-mu)²/2} / (q;q)_k; every term is bounded by
    |z|^k, so the value never overflows even when the product factor and the
    Gaussian prefactor separately leave float64 range.
    """
    _check_q(q)
    z = complex(z)
    lnq = math.log(q)
    acc = 0.0 + 0.0j
    zk = 1.0 + 0.0j
    poch = 1.0
    k = 0
    peak = max(0.0, mu)
    while True:
        e = 0.5 * (k - mu) ** 2 * lnq
        if e > -745.0:
            acc += zk * math.exp(e) / poch
        k += 1
        if k > peak + 80 and k > 8:
            break
        zk *= z
        poch *= 1.0 - q ** k
        if abs(zk) < 1e-300:
            break
    return acc


def ramanujan_Aq_gaussian(q: float, z: complex, center: float,
                          pre_exponent: float) -> complex:
    """Σ_n (-z)^n q^{(n-center)² + pre_exponent} / (q;q)_n, stable form.

    Covers the Gaussian-weighted Ramanujan values q^{w mu²} A_q(q^{-c mu} z)
    whose factored pieces overflow: with center = c mu / 2 and
    pre_exponent = (w - c²/4) mu² the series terms stay below |z|^n.
    """
    _check_q(q)
    z = complex(z)
    lnq = math.log(q)
    if pre_exponent * lnq < -745.0:
        return 0.0 + 0.0j  # below the double-precision floor
    acc = 0.0 + 0.0j
    zk = 1.0 + 0.0j
    poch = 1.0
    k = 0
    while True:
        e = ((k - center) ** 2 + pre_exponent) * lnq
        if e > -745.0:
            acc += zk * math.exp(e) / poch
        k += 1
        if k > center + 80 and k > 8:
            break
        zk *= -z
        poch *= 1.0 - q ** k
        if abs(zk) < 1e-300:
            break
    return acc


_QSERIES_CASES = ("binomial", "binomial-halfshift", "ramanujan-a", "ramanujan-a2")


def qseries_sum(case_id: str, q: float, z: complex, swapped: bool = False) -> complex:
    """Evaluate one of the catalog's squared-norm q-series.

    * ``binomial``:        (z̄;q)_∞ Σ (-z)^n q^{n(n-1)/2} / ((q;q)_n (z̄;q)_n),
      for |z| < 1; the swapped variant exchanges z and z̄.
    * ``binomial-halfshift``: (-z q^{1/2};q)_∞ Σ z̄^n q^{n²/2} /
      ((q;q)_n (-z q^{1/2};q)_n), for |z| < 1.
    * ``ramanujan-a``:     Σ (-z)^n q^{n²} A_q(q^{-n} z̄) / (q;q)_n, any z.
    * ``ramanujan-a2``:    Σ (-z)^n q^{n²} A_q(q^{-2n} z̄) / (q;q)_n, |z| < 1.
    """
    _check_q(q)
    z = complex(z)
    if case_id not in _QSERIES_CASES:
        raise InvalidParameterError(f"qseries_sum: unknown case {case_id!r}")
    if swapped:
        return qseries_sum(case_id, q, z.conjugate(), swapped=False)
    zbar = z.conjugate()
    if case_id == "binomial":
        if abs(z) >= 1:
            raise DomainError("qseries_sum binomial: requires |z| < 1")
        acc = 0.0 + 0.0j
        for n in range(0, 400):
            t = (
                (-z) ** n
                * q ** (n * (n - 1) // 2)
                / (qpochhammer(q, q, n) * qpochhammer(zbar, q, n))
            )
            acc += t
            if n > 4 and abs(t) < 1e-18 * max(abs(acc), 1e-280):
                break
        return qpochhammer(zbar, q, math.inf) * acc
    if case_id == "binomial-halfshift":
        if abs(z) >= 1:
            raise DomainError("qseries_sum binomial-halfshift: requires |z| < 1")
        w = -z * math.sqrt(q)
        acc = 0.0 + 0.0j
        for n in range(0, 400):
            t = (
                zbar ** n
                * q ** (n * n / 2.0)
                / (qpochhammer(q, q, n) * qpochhammer(w, q, n))
            )
            acc += t
            if n > 4 and abs(t) < 1e-18 * max(abs(acc), 1e-280):
                break
        return qpochhammer(w, q, math.inf) * acc
    # expanding A_q inside gives the absolutely convergent double series
    # Σ_{n,m} (-z)^n (-z̄)^m q^{n² + m² - shift n m} / ((q;q)_n (q;q)_m),
    # whose terms are bounded by |z|^{n+m} (shift 2) or decay Gaussian-fast
    # (shift 1); the factored single sum overflows for large shifts.
    shift = 1 if case_id == "ramanujan-a" else 2
    if shift == 2 and abs(z) >= 1:
        raise DomainError("qseries_sum ramanujan-a2: requires |z| < 1")
    if shift == 2:
        M = min(400, max(24, int(math.ceil(44.0 / max(1e-3, -math.log(abs(z) + 1e-12))))))
    else:
        lnq = -math.log(q)
        M = min(240, 32 + int(math.ceil(2.0 * math.log1p(abs(z)) / lnq))
                + int(math.ceil(64.0 / math.sqrt(lnq))))
    n_idx = np.arange(M + 1)
    poch = np.ones(M + 1)
    for k in range(1, M + 1):
        poch[k] = poch[k - 1] * (1.0 - q ** k)
    zpow = (-z) ** n_idx / poch
    zbpow = (-zbar) ** n_idx / poch
    expo = (n_idx[:, None] ** 2 + n_idx[None, :] ** 2
            - shift * n_idx[:, None] * n_idx[None, :]) * math.log(q)
    with np.errstate(under="ignore"):
        grid = np.where(expo > -745.0, np.exp(expo), 0.0)
    return complex(zpow @ grid @ zbpow)


def gaussian_gram_row(beta: float, q: float, schedule, m: int, N: int,
                      tol: float = 1e-12) -> TailCertificate:
    """Row-m partial sum Σ_{n<=N} q^{beta (mu_m - mu_n)²} with a tail bound.

    The tail over n > N uses the schedule's gap function g: entries are
    bounded by q^{beta g(n-m)²}, summed geometrically when the schedule is
    arithmetic and by the (1+k)^{-alpha²/2} integral comparison otherwise.
    Schedules that certify neither way yield an uncertified (infinite-tail)
    certificate.
    """
    QParams(q, beta)  # validates q, beta
    if not (1 <= m <= N):
        raise InvalidParameterError("gaussian_gram_row: need 1 <= m <= N")
    mus = schedule.values(N)
    finite = float(np.sum(np.power(q, beta * (mus[m - 1] - mus) ** 2)))
    c = beta * math.log(1.0 / q)

    step = getattr(schedule, "arithmetic_step", None)
    if step:
        k0 = N + 1 - m  # first missing offset
        first = math.exp(-c * (step * k0) ** 2)
        ratio = math.exp(-c * step * step * (2 * k0 + 1))
        tail = geometric_tail(first, ratio)
        return TailCertificate(finite, tail, "geometric", N)
    alpha_eff = getattr(schedule, "sqrtlog_alpha_effective", None)
    if alpha_eff is not None and alpha_eff > math.sqrt(2.0):
        # entries beyond the window fall under (1+k)^{-alpha^2/2}
        expo = alpha_eff * alpha_eff / 2.0
        k0 = N + 1 - m
        tail = (1.0 + k0) ** (1.0 - expo) / (expo - 1.0)
        return TailCertificate(finite, tail, "integral-comparison", N)
    return TailCertificate(finite, math.inf, "uncertified", N)
