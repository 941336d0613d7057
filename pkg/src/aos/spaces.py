"""Weighted L² probability spaces and the test-sequence families over them.

A ``WeightedMeasure`` owns its integrator (a quadrature rule or a certified
discrete summator); a ``SequenceFamily`` pairs a kind of test sequence
(``fourier`` e^{iλx}, ``mellin`` x^{iμ}, ``dirichlet`` k^{-λ}) with a
``FrequencySchedule``.  Inner products, coefficients (f, φ_n) and Gram
entries are computed here, with closed forms dispatched per
(measure, family) pair and an independent numeric path for cross-checks.

Numeric Gram entries use, per measure kind:

* gaussian: Gauss-Hermite with the node count scaled to the oscillation,
  n = max(64, 8 ceil(freq * std * sqrt(2))) capped at 512;
* gamma: trapezoid in u = log x on a contour rotated into the upper half
  plane for large frequency differences, which keeps the entries
  relatively accurate where real-axis cancellation would floor them;
* beta: tanh-sinh with the level raised alongside the oscillation;
* circle: the M-point periodic trapezoid (exact below the aliasing bound);
* discrete: certified sieve sums with adaptive per-frequency cutoffs.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import DomainError, InvalidParameterError, UnsupportedModeError
from .numtheory import build_sieve
from .quadrature import gauss_hermite_rule, kahan_sum, log_axis_rule, tanh_sinh_rule
from . import specfun

_DISCRETE_SIEVE_N = 700_000


# ---------------------------------------------------------------------------
# frequency schedules

@dataclass(frozen=True)
class FrequencySchedule:
    """Strictly increasing frequency sequence with its gap law.

    Kinds: ``integer`` (λ_n = n), ``shifted`` (λ_n = n-1), ``sqrtlog``,
    ``loglinear``, ``power``, ``explicit``.  The parametric kinds realize
    the minimal sequence compatible with their pairwise gap law
    g(|m-n|); for sqrtlog/loglinear and power with exponent <= 1 that
    greedy sequence is arithmetic because k g(1) >= g(k).
    """

    kind: str
    alpha: float = 0.0
    scale: float = 1.0
    exponent: float = 1.0
    explicit: tuple = ()

    def gap(self, k: int) -> float:
        """Required minimal gap for index offset k >= 1."""
        if self.kind == "integer" or self.kind == "shifted":
            return float(k)
        if self.kind == "sqrtlog":
            return self.alpha * self.scale * math.sqrt(math.log1p(k))
        if self.kind == "loglinear":
            return self.alpha * self.scale * math.log1p(k)
        if self.kind == "power":
            return self.alpha * (1.0 + k) ** self.exponent
        return 0.0  # explicit: no law

    @property
    def arithmetic_step(self) -> float | None:
        if self.kind in ("integer", "shifted"):
            return 1.0
        if self.kind == "sqrtlog":
            return self.alpha * self.scale * math.sqrt(math.log(2.0))
        if self.kind == "loglinear":
            return self.alpha * self.scale * math.log(2.0)
        if self.kind == "power" and self.exponent <= 1.0:
            return self.alpha * 2.0 ** self.exponent
        return None

    def values(self, N: int) -> np.ndarray:
        return _schedule_values(self, N)

    def value(self, n: int) -> float:
        if n < 1:
            raise InvalidParameterError("schedule index must be >= 1")
        return float(self.values(n)[n - 1])


@lru_cache(maxsize=512)
def _schedule_values(schedule: FrequencySchedule, N: int) -> np.ndarray:
    if schedule.kind == "integer":
        out = np.arange(1, N + 1, dtype=np.float64)
    elif schedule.kind == "shifted":
        out = np.arange(0, N, dtype=np.float64)
    elif schedule.kind == "explicit":
        if len(schedule.explicit) < N:
            raise InvalidParameterError("explicit schedule shorter than N")
        out = np.asarray(schedule.explicit[:N], dtype=np.float64)
    else:
        step = schedule.arithmetic_step
        if step is not None:
            out = step * np.arange(1, N + 1, dtype=np.float64)
        else:
            # greedy: lambda_m = max_{n<m} (lambda_n + g(m-n))
            vals = [schedule.gap(1)]
            for m in range(2, N + 1):
                vals.append(max(vals[n - 1] + schedule.gap(m - n)
                                for n in range(1, m)))
            out = np.asarray(vals)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class ScheduleReport:
    ok: bool
    violations: tuple = ()


def validate_schedule(schedule: FrequencySchedule, measure=None,
                      n_check: int = 64) -> ScheduleReport:
    """Check the pairwise gap law up to n_check plus the scalar side conditions.

    Side conditions per kind: sqrtlog needs alpha > sqrt(2); loglinear needs
    alpha * pi/2 > 1; power needs exponent * q > 1 with q taken from a beta
    measure when one is supplied; shifted needs λ_n >= n - 1.  Violations
    are reported as data, never raised.
    """
    problems = []
    vals = schedule.values(n_check)
    if not np.all(np.diff(vals) > 0):
        problems.append("frequencies not strictly increasing")
    if schedule.kind == "sqrtlog" and not (schedule.alpha > math.sqrt(2.0)):
        problems.append(
            f"sqrtlog requires alpha > sqrt(2); got alpha={schedule.alpha}")
    if schedule.kind == "loglinear" and not (schedule.alpha * math.pi / 2 > 1.0):
        problems.append(
            f"loglinear requires alpha*pi/2 > 1; got {schedule.alpha * math.pi / 2:.4f}")
    if schedule.kind == "power":
        q = None
        if measure is not None and getattr(measure, "kind", "") == "beta":
            q = measure.params["q"]
        if q is not None and not (schedule.exponent * q > 1.0):
            problems.append(
                f"power requires exponent*q > 1; got {schedule.exponent * q:.4f}")
    if schedule.kind == "shifted":
        ns = np.arange(1, n_check + 1)
        if np.any(vals < ns - 1 - 1e-12):
            problems.append("shifted schedule fell below n-1")
    if schedule.kind not in ("integer", "shifted", "explicit"):
        for m in range(2, n_check + 1):
            for n in range(1, m):
                if vals[m - 1] - vals[n - 1] < schedule.gap(m - n) - 1e-12:
                    problems.append(f"gap law violated at (m,n)=({m},{n})")
                    break
            else:
                continue
            break
    return ScheduleReport(ok=not problems, violations=tuple(problems))


# ---------------------------------------------------------------------------
# test functions

class TestFunction:
    """Catalog test function: vectorized evaluation plus optional oracles."""

    def __init__(self, fid: str, evaluate: Callable[[np.ndarray], np.ndarray],
                 osc_bandwidth: float = 0.0, sup_bound: float = 1.0,
                 closed_coeff: Callable[[float], complex] | None = None,
                 closed_norm_sq: Callable[[], float] | None = None,
                 notes: str = ""):
        self.id = fid
        self.evaluate = evaluate
        self.osc_bandwidth = osc_bandwidth
        self.sup_bound = sup_bound
        self.closed_coeff = closed_coeff
        self.closed_norm_sq = closed_norm_sq
        self.notes = notes

    def __repr__(self):
        return f"TestFunction({self.id!r})"


# ---------------------------------------------------------------------------
# measures

class WeightedMeasure:
    """Probability measure with a working integrator or certified summator."""

    def __init__(self, kind: str, params: dict):
        self.kind = kind
        self.params = dict(params)
        self.quad_tol = 1e-11
        if kind == "discrete-mangoldt" or kind == "discrete-zeta-tail":
            self._init_discrete()
        elif kind == "beta":
            self.quad_tol = 1e-10

    # -- discrete machinery
    def _init_discrete(self):
        sigma = self.params["sigma"]
        if not (sigma > 1):
            raise InvalidParameterError("discrete measures need sigma > 1")
        table = build_sieve(_DISCRETE_SIEVE_N)
        K = _DISCRETE_SIEVE_N
        ks = np.arange(2, K + 1, dtype=np.float64)
        if self.kind == "discrete-mangoldt":
            ratio = specfun.zeta_log_ratio(sigma)  # zeta'/zeta < 0
            scale = -1.0 / ratio.real  # -(zeta/zeta')(sigma) > 0
            # psi(k) = -(zeta/zeta') Lambda(k) k^{-sigma}
            w = scale * table.mangoldt[2:K + 1] * ks ** (-sigma)
            tail = scale * (math.log(K) / (sigma - 1) + (sigma - 1) ** -2.0) \
                * K ** (1.0 - sigma)
        else:
            zm1 = specfun.zeta_minus_one(sigma).real
            w = ks ** (-sigma) / zm1
            tail = K ** (1.0 - sigma) / (sigma - 1) / zm1
        self._ks = ks
        self._weights = w
        self._mass_tail = float(tail)
        self.quad_tol = max(1e-12, float(tail))

    # -- integrator dispatch
    def _gaussian_rule(self, osc: float):
        std = self.params["std"]
        n = int(min(512, max(64, 8 * math.ceil(max(osc, 1e-9) * std * math.sqrt(2.0)))))
        return gauss_hermite_rule(n), std

    def _beta_level(self, osc: float) -> int:
        level = 9
        for cut in (24.0, 48.0, 96.0):
            if osc > cut:
                level += 1
        return min(level, 12)

    def integrate(self, fn: Callable[[np.ndarray], np.ndarray],
                  osc_hint: float = 0.0) -> complex:
        """∫ fn dψ over this measure's support."""
        if self.kind == "gaussian":
            rule, std = self._gaussian_rule(osc_hint)
            x = math.sqrt(2.0) * std * rule.nodes
            return complex(np.sum(rule.weights * np.asarray(fn(x)))
                           / math.sqrt(math.pi))
        if self.kind == "circle":
            m = int(2 ** math.ceil(math.log2(max(256.0, 4.0 * (osc_hint + 2.0)))))
            x = 2.0 * math.pi * np.arange(m) / m
            return complex(np.mean(np.asarray(fn(x))))
        if self.kind == "gamma":
            sigma = self.params["sigma"]
            h = 0.05
            if osc_hint > 50:
                h = 0.025
            if osc_hint > 110:
                h = 0.0125
            rule = log_axis_rule(sigma, h=h, U=max(40.0, 43.0 / sigma + 2.0))
            lg = specfun.lgamma_complex(sigma).real
            return complex(np.sum(rule.weights * np.asarray(fn(rule.nodes)))
                           * math.exp(-lg))
        if self.kind == "beta":
            p, q = self.params["p"], self.params["q"]
            rule = tanh_sinh_rule(self._beta_level(osc_hint))
            x = rule.nodes
            dens = np.exp((p - 1.0) * np.log(x) + (q - 1.0) * np.log1p(-x))
            lb = (specfun.lgamma_complex(p).real + specfun.lgamma_complex(q).real
                  - specfun.lgamma_complex(p + q).real)
            return complex(np.sum(rule.weights * dens * np.asarray(fn(x)))
                           * math.exp(-lb))
        if self.kind in ("discrete-mangoldt", "discrete-zeta-tail"):
            vals = np.asarray(fn(self._ks))
            return kahan_sum(self._weights * vals)
        raise InvalidParameterError(f"unknown measure kind {self.kind}")

    def discrete_sum(self, fn: Callable[[np.ndarray], np.ndarray],
                     decay: float = 0.0) -> complex:
        """Σ ψ(k) fn(k) with the cutoff tightened when fn decays like k^-decay."""
        if self.kind not in ("discrete-mangoldt", "discrete-zeta-tail"):
            raise UnsupportedModeError("discrete_sum on a continuous measure")
        ks = self._ks
        if decay > 0.0:
            sigma = self.params["sigma"]
            k_eff = int(min(len(ks), math.ceil(10 ** (18.0 / (sigma + decay))) + 8))
            ks = ks[:k_eff]
        return kahan_sum(self._weights[:len(ks)] * np.asarray(fn(ks)))

    def total_mass(self) -> complex:
        return self.integrate(lambda x: np.ones_like(x, dtype=np.float64))

    @property
    def mass_tail(self) -> float:
        return getattr(self, "_mass_tail", 0.0)


def make_space(kind: str, **params) -> WeightedMeasure:
    """Construct a WeightedMeasure; parameter domains are validated here.

    Kinds and parameters:
      gaussian(q, beta)        0 < q < 1, beta > 0; std = sqrt(2 beta log(1/q))
      gamma(sigma)             sigma > 0
      beta(p, q)               p, q > 0
      circle()                 uniform dx/2pi on [0, 2pi)
      discrete-mangoldt(sigma) sigma > 1
      discrete-zeta-tail(sigma) sigma > 1
    """
    if kind == "gaussian":
        q = params.get("q", 0.5)
        beta = params.get("beta", 0.5)
        if not (0 < q < 1):
            raise InvalidParameterError(f"gaussian: q={q} outside (0,1)")
        if not (beta > 0):
            raise InvalidParameterError("gaussian: beta must be positive")
        std = math.sqrt(2.0 * beta * math.log(1.0 / q))
        return WeightedMeasure("gaussian", {"q": q, "beta": beta, "std": std})
    if kind == "gamma":
        sigma = params.get("sigma", 3.0)
        if not (sigma > 0):
            raise InvalidParameterError("gamma: sigma must be positive")
        return WeightedMeasure("gamma", {"sigma": sigma})
    if kind == "beta":
        p = params.get("p", 1.5)
        q = params.get("q", 2.5)
        if not (p > 0 and q > 0):
            raise InvalidParameterError("beta: p, q must be positive")
        return WeightedMeasure("beta", {"p": p, "q": q})
    if kind == "circle":
        return WeightedMeasure("circle", {})
    if kind in ("discrete-mangoldt", "discrete-zeta-tail"):
        sigma = params.get("sigma", 3.0)
        if not (sigma > 1):
            raise InvalidParameterError(f"{kind}: sigma must exceed 1")
        return WeightedMeasure(kind, {"sigma": sigma})
    raise InvalidParameterError(f"make_space: unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# sequence families

_COMPATIBLE = {
    "fourier": ("gaussian", "circle"),
    "mellin": ("gamma", "beta"),
    "dirichlet": ("discrete-mangoldt", "discrete-zeta-tail"),
}


@dataclass(frozen=True)
class SequenceFamily:
    """Test sequence φ_n over a measure: fourier, mellin, or dirichlet kind."""

    kind: str
    schedule: FrequencySchedule

    def compatible_with(self, measure: WeightedMeasure) -> bool:
        return measure.kind in _COMPATIBLE.get(self.kind, ())

    def frequency(self, n: int) -> float:
        return self.schedule.value(n)

    def phi(self, n: int) -> Callable[[np.ndarray], np.ndarray]:
        lam = self.frequency(n)
        if self.kind == "fourier":
            return lambda x: np.exp(1j * lam * x)
        if self.kind == "mellin":
            return lambda x: np.exp(1j * lam * np.log(x))
        if self.kind == "dirichlet":
            return lambda k: np.exp(-lam * np.log(k))
        raise InvalidParameterError(f"unknown family kind {self.kind}")


def make_family(kind: str, schedule: FrequencySchedule,
                measure: WeightedMeasure | None = None) -> SequenceFamily:
    fam = SequenceFamily(kind, schedule)
    if measure is not None and not fam.compatible_with(measure):
        raise InvalidParameterError(
            f"family kind {kind!r} incompatible with measure {measure.kind!r}")
    return fam


# ---------------------------------------------------------------------------
# inner products, coefficients, norms

def inner_product(space: WeightedMeasure, f, g, osc_hint: float = 0.0) -> complex:
    """(f, g) = ∫ f ḡ dψ; conjugate-linear in g.

    ``f`` and ``g`` are vectorized callables (TestFunction instances are
    unwrapped).  ``osc_hint`` sizes the quadrature for oscillatory factors.
    """
    fe = f.evaluate if isinstance(f, TestFunction) else f
    ge = g.evaluate if isinstance(g, TestFunction) else g
    hint = osc_hint
    for h in (f, g):
        if isinstance(h, TestFunction):
            hint += h.osc_bandwidth
    return space.integrate(lambda x: np.asarray(fe(x)) * np.conj(ge(x)), hint)


@dataclass(frozen=True)
class CoefficientRecord:
    value: complex
    closed: complex | None
    discrepancy: float | None
    flagged: bool


def coefficient(space: WeightedMeasure, family: SequenceFamily, f, n: int,
                tol: float = 1e-7) -> CoefficientRecord:
    """(f, φ_n) by the measure's integrator, cross-checked against a
    closed-form oracle when the TestFunction carries one.

    A mismatch beyond ``tol`` (relative for resolvable values, absolute at
    the quadrature noise floor) is flagged in the record, never fatal.
    """
    lam = family.frequency(n)
    fe = f.evaluate if isinstance(f, TestFunction) else f
    bw = f.osc_bandwidth if isinstance(f, TestFunction) else 0.0
    if family.kind == "dirichlet":
        val = space.discrete_sum(
            lambda k: np.asarray(fe(k)) * np.exp(-lam * np.log(k)), decay=lam)
    else:
        phi_conj = (lambda x: np.exp(-1j * lam * x)) if family.kind == "fourier" \
            else (lambda x: np.exp(-1j * lam * np.log(x)))
        val = space.integrate(lambda x: np.asarray(fe(x)) * phi_conj(x),
                              osc_hint=abs(lam) + bw)
    closed = None
    disc = None
    flagged = False
    if isinstance(f, TestFunction) and f.closed_coeff is not None:
        closed = complex(f.closed_coeff(lam))
        disc = abs(val - closed)
        scale = max(abs(closed), abs(val))
        flagged = disc > tol * scale and disc > 1e-12
    return CoefficientRecord(val, closed, disc, flagged)


def norm_sq(space: WeightedMeasure, f, osc_hint: float = 0.0) -> float:
    """‖f‖² under the measure; imaginary residue <= 1e-11 is checked and dropped."""
    fe = f.evaluate if isinstance(f, TestFunction) else f
    bw = f.osc_bandwidth if isinstance(f, TestFunction) else 0.0
    val = space.integrate(lambda x: np.abs(np.asarray(fe(x))) ** 2.0,
                          osc_hint=osc_hint + 2 * bw)
    if abs(val.imag) > 1e-11 * max(1.0, abs(val.real)):
        raise DomainError(f"norm_sq: imaginary residue {val.imag:.3e}")
    if val.real < 0:
        raise DomainError(f"norm_sq: negative value {val.real:.3e}")
    return float(val.real)


# ---------------------------------------------------------------------------
# Gram entries

def closed_gram_available(space: WeightedMeasure, family: SequenceFamily) -> bool:
    return (space.kind, family.kind) in _CLOSED_GRAM


def _closed_gaussian(space, delta):
    c = space.params["beta"] * math.log(1.0 / space.params["q"])
    return complex(math.exp(-c * delta * delta))


def _closed_gamma(space, delta):
    return specfun.gamma_ratio(space.params["sigma"], delta)


def _closed_beta(space, delta):
    return specfun.beta_ratio(space.params["p"], space.params["q"], delta)


def _closed_circle(space, delta):
    return complex(1.0 if abs(delta) < 1e-12 else 0.0)


def _closed_mangoldt(space, wsum):
    sigma = space.params["sigma"]
    return complex(specfun.zeta_log_ratio(sigma + wsum) / specfun.zeta_log_ratio(sigma))


def _closed_zetatail(space, wsum):
    sigma = space.params["sigma"]
    return complex(specfun.zeta_minus_one(sigma + wsum)
                   / specfun.zeta_minus_one(sigma))


_CLOSED_GRAM = {
    ("gaussian", "fourier"): ("diff", _closed_gaussian),
    ("circle", "fourier"): ("diff", _closed_circle),
    ("gamma", "mellin"): ("diff", _closed_gamma),
    ("beta", "mellin"): ("diff", _closed_beta),
    ("discrete-mangoldt", "dirichlet"): ("sum", _closed_mangoldt),
    ("discrete-zeta-tail", "dirichlet"): ("sum", _closed_zetatail),
}


def _gamma_entry_rotated(sigma: float, delta: float) -> complex:
    """Gamma(sigma + i delta)/Gamma(sigma) by trapezoid on a rotated contour.

    The contour u + i phi with phi pushed toward pi/2 absorbs the e^{-pi
    delta/2} decay into the integrand's amplitude, so the quotient stays
    relatively accurate where the real-axis integral would be pure
    cancellation.  Independent of the Lanczos path.
    """
    d = abs(delta)
    if d < 5.0:
        phi = 0.0
    else:
        phi = (math.pi / 2.0) * (1.0 - (sigma + 1.0) / d)
    h = 0.01
    U = 40.0 / max(sigma, 1.0) + 12.0
    u = np.arange(-int(U / h), int(U / h) + 1) * h
    zz = u + 1j * phi
    expo = -np.exp(zz) + (sigma + 1j * d) * zz
    with np.errstate(over="ignore"):
        vals = np.where(expo.real > -745.0, np.exp(expo), 0.0)
    gam = h * vals.sum()
    out = gam * cmath.exp(-specfun.lgamma_complex(sigma))
    return out if delta >= 0 else out.conjugate()


def gram_entry(space: WeightedMeasure, family: SequenceFamily, m: int, n: int,
               mode: str = "numeric"):
    """a_{m,n} = (φ_m, φ_n); mode ``closed``, ``numeric``, or ``both``.

    ``both`` returns (numeric, closed, |difference|).
    """
    if mode not in ("closed", "numeric", "both"):
        raise UnsupportedModeError(f"gram_entry: unknown mode {mode!r}")
    lam_m = family.frequency(m)
    lam_n = family.frequency(n)
    key = (space.kind, family.kind)
    spec_entry = _CLOSED_GRAM.get(key)
    if mode in ("closed", "both") and spec_entry is None:
        raise UnsupportedModeError(f"no closed Gram form for {key}")
    closed_val = None
    if spec_entry is not None and mode in ("closed", "both"):
        how, fn = spec_entry
        arg = (lam_m - lam_n) if how == "diff" else (lam_m + lam_n)
        closed_val = fn(space, arg)
        if mode == "closed":
            return closed_val
    # numeric path
    delta = lam_m - lam_n
    if space.kind == "gamma":
        num = _gamma_entry_rotated(space.params["sigma"], delta)
    elif family.kind == "dirichlet":
        w = lam_m + lam_n
        num = space.discrete_sum(lambda k: np.exp(-w * np.log(k)), decay=w)
    else:
        phi_m = family.phi(m)
        phi_n = family.phi(n)
        num = space.integrate(lambda x: phi_m(x) * np.conj(phi_n(x)),
                              osc_hint=abs(delta))
    if mode == "numeric":
        return num
    return num, closed_val, abs(num - closed_val)
