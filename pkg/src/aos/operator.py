"""Truncated Gram operators on ℓ²: Schur constants, norms, positivity,
compactness diagnostics, and the Bessel / Riesz-Fischer verifications.

The N x N truncation A^(N) of the Gram operator satisfies the classical
norm chain  ||A^(N)||_2 <= sqrt(||A^(N)||_1 ||A^(N)||_inf) <= C,  with C
the Schur constant sup_m Σ_n |a_{m,n}|.  Everything here is deterministic:
power iteration starts from the all-ones vector (a fixed cosine-profile
fallback covers a stalled Rayleigh quotient), and the cyclic Jacobi
eigensolver sweeps pairs in a fixed order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InvalidParameterError,
    NumericalInconsistencyError,
    ToleranceNotMetError,
)
from . import spaces as _spaces


@dataclass
class GramMatrix:
    """Hermitian truncation of the Gram operator with entry provenance."""

    entries: np.ndarray
    provenance: str  # closed | numeric | both
    max_discrepancy: float | None = None

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def row_abs_sums(self) -> np.ndarray:
        return np.abs(self.entries).sum(axis=1)

    def col_abs_sums(self) -> np.ndarray:
        return np.abs(self.entries).sum(axis=0)

    def hermitian_defect(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))


@dataclass
class SchurEstimate:
    """finite_sup <= C <= finite_sup + tail_bound for the true Schur constant."""

    finite_sup: float
    tail_bound: float
    certified: bool
    achieved_at_row: int
    method: str = "none"

    @property
    def upper(self) -> float:
        return self.finite_sup + self.tail_bound


@dataclass
class BesselReport:
    lhs_partial: float
    rhs: float
    margin: float
    c_value: float
    budget: float
    status: str                      # pass | fail | advisory
    norm_sq: float
    per_term: np.ndarray
    partials: dict = field(default_factory=dict)


@dataclass
class RieszFischerReport:
    n_construct: int
    m_test: int
    residual: float
    bound: float
    cauchy_defect: float
    cauchy_allowance: float
    status: str


@dataclass
class CompactnessDiagnostics:
    n_list: tuple
    hs_partial: tuple            # Σ_{m,n<=N} |a|²
    hs_perturbation: tuple       # Σ_{m,n<=N} |a - δ|²
    row_tail_sup: tuple          # sup_{N<m<=W} Σ_{n<=W} |a_{m,n}|
    col_tail_sup: tuple          # sup_{n<=W} Σ_{N<m<=W} |a_{m,n}|
    window: int


def build_gram(space, family, N: int, mode: str = "auto") -> GramMatrix:
    """Assemble the Hermitian N x N Gram truncation.

    ``mode``: closed | numeric | both | auto (closed when a closed form is
    registered for the (measure, family) pair, else numeric).  Entries
    depend only on the frequency difference (continuous kinds) or sum
    (discrete kinds), so unique values are evaluated once.  ``both``
    records the maximum closed-vs-numeric discrepancy and raises
    NumericalInconsistency when the Hermitian defect exceeds 1e-8.
    """
    if not (1 <= N <= 256):
        raise InvalidParameterError(f"build_gram: N={N} outside 1..256")
    if mode == "auto":
        mode = "closed" if _spaces.closed_gram_available(space, family) else "numeric"
    lam = family.schedule.values(N)
    a = np.zeros((N, N), dtype=np.complex128)
    cache: dict = {}
    max_disc = 0.0 if mode == "both" else None
    for m in range(N):
        for n in range(m, N):
            if family.kind == "dirichlet":
                key = round(lam[m] + lam[n], 12)
            else:
                key = round(lam[m] - lam[n], 12)
            if key not in cache:
                val = _spaces.gram_entry(space, family, m + 1, n + 1, mode)
                if mode == "both":
                    num, closed, disc = val
                    max_disc = max(max_disc, disc)
                    val = num
                cache[key] = val
            a[m, n] = cache[key]
            a[n, m] = np.conj(cache[key])
    gram = GramMatrix(a, mode if mode != "auto" else "closed", max_disc)
    if gram.hermitian_defect() > 1e-8:
        raise NumericalInconsistencyError(
            f"build_gram: Hermitian defect {gram.hermitian_defect():.3e}")
    return gram


def schur_constant(gram: GramMatrix, tail_supplier=None) -> SchurEstimate:
    """Finite sup of row ℓ¹ norms, certified when a tail supplier is given.

    ``tail_supplier(N, finite_sup)`` returns (tail_bound, certified, method)
    with the guarantee that the untruncated Schur constant is at most
    finite_sup + tail_bound.
    """
    rows = gram.row_abs_sums()
    idx = int(np.argmax(rows))
    finite = float(rows[idx])
    if tail_supplier is None:
        return SchurEstimate(finite, 0.0, False, idx + 1, "none")
    tail, certified, method = tail_supplier(gram.n, finite)
    return SchurEstimate(finite, float(tail), bool(certified), idx + 1, method)


def operator_norm(gram: GramMatrix, tol: float = 1e-9,
                  max_iter: int = 10 ** 4) -> float:
    """Largest |eigenvalue| by power iteration from the all-ones start.

    The Rayleigh quotient of a Hermitian PSD matrix never exceeds the true
    norm, so the estimate is always a valid lower witness for the norm
    chain.  If the quotient stalls before meeting ``tol`` the iteration
    restarts once from a fixed cosine-profile vector; failure after both
    starts raises ToleranceNotMetError carrying the best iterate.
    """
    a = gram.entries
    n = gram.n
    starts = [
        np.ones(n, dtype=np.complex128),
        np.cos(np.pi * np.arange(n) / max(n - 1, 1)) + 0.5,
    ]
    best = 0.0
    for si, v0 in enumerate(starts):
        v = v0 / np.linalg.norm(v0)
        lam_old = math.inf
        for _ in range(max_iter // len(starts)):
            w = a @ v
            nw = np.linalg.norm(w)
            if nw == 0.0:
                return 0.0
            lam = float(np.real(np.vdot(v, w)))
            v = w / nw
            if abs(lam - lam_old) <= tol * max(abs(lam), 1e-300):
                return max(best, abs(lam))
            lam_old = lam
        best = max(best, abs(lam_old))
    raise ToleranceNotMetError(
        f"operator_norm: power iteration stalled at {best}", achieved=best)


def _jacobi_eigenvalues_real(a: np.ndarray, off_tol: float = 1e-12,
                             max_sweeps: int = 40) -> np.ndarray:
    """Cyclic Jacobi rotations on a real symmetric matrix."""
    a = a.copy()
    n = a.shape[0]
    for _ in range(max_sweeps):
        off = math.sqrt(max(0.0, float((a * a).sum() - (np.diag(a) ** 2).sum())))
        if off < off_tol:
            break
        for p in range(n - 1):
            row_p = a[p]
            for q in range(p + 1, n):
                apq = row_p[q]
                if apq == 0.0:
                    continue
                diff = a[q, q] - a[p, p]
                if abs(apq) < 1e-36 * abs(diff):
                    continue
                if diff == 0.0:
                    t = 1.0
                else:
                    phi = diff / (2.0 * apq)
                    t = math.copysign(1.0, phi) / (abs(phi) + math.hypot(phi, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
            row_p = a[p]
    return np.sort(np.diag(a).real)


def jacobi_eigenvalues(matrix: np.ndarray, off_tol: float = 1e-12) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations.

    Complex Hermitian input is embedded as the real symmetric
    [[X, -Y], [Y, X]] whose spectrum doubles each eigenvalue.
    """
    m = np.asarray(matrix)
    if np.max(np.abs(m - m.conj().T)) > 1e-8:
        raise NumericalInconsistencyError("jacobi_eigenvalues: input not Hermitian")
    if np.max(np.abs(m.imag)) < 1e-300:
        return _jacobi_eigenvalues_real(m.real.astype(np.float64), off_tol)
    x, y = m.real, m.imag
    emb = np.block([[x, -y], [y, x]])
    ev = _jacobi_eigenvalues_real(emb, off_tol)
    return ev[::2]


def min_eigenvalue(gram: GramMatrix, off_tol: float = 1e-12) -> float:
    """Smallest eigenvalue via cyclic Jacobi; N <= 128."""
    if gram.n > 128:
        raise InvalidParameterError("min_eigenvalue: N must be <= 128")
    return float(jacobi_eigenvalues(gram.entries, off_tol)[0])


def quadratic_form_check(gram: GramMatrix, c_upper: float, trials: int = 50,
                         seed: int = 20260809) -> dict:
    """Re<x, Ax> >= -1e-9 C ||x||² and |Im| <= 1e-10 over seeded random x."""
    rng = np.random.default_rng(seed)
    n = gram.n
    worst_re = math.inf
    worst_im = 0.0
    for _ in range(trials):
        x = rng.normal(size=n) + 1j * rng.normal(size=n)
        x /= np.linalg.norm(x)
        qf = complex(np.vdot(x, gram.entries @ x))
        worst_re = min(worst_re, qf.real)
        worst_im = max(worst_im, abs(qf.imag))
    ok = worst_re >= -1e-9 * c_upper and worst_im <= 1e-10
    return {"min_re": worst_re, "max_im": worst_im, "ok": bool(ok),
            "trials": trials}


def bessel_verify(coefficients: np.ndarray, norm_sq_value: float,
                  c_estimate: SchurEstimate, quad_tol: float = 1e-11,
                  extra_budget: float = 0.0,
                  partial_points: tuple = ()) -> BesselReport:
    """Check Σ_{n<=N} |(f, φ_n)|² <= C ||f||² with an explicit numeric budget.

    ``coefficients`` holds (f, φ_n) for n = 1..N.  The right side uses the
    certified upper end of the Schur estimate; when the estimate is not
    certified the verdict is advisory.  budget = 10 * quad_tol * N +
    extra_budget, so the inequality is asserted only beyond certified
    numerics.
    """
    coeffs = np.asarray(coefficients, dtype=np.complex128)
    per_term = np.abs(coeffs) ** 2
    partial = np.cumsum(per_term)
    lhs = float(partial[-1]) if per_term.size else 0.0
    c_up = c_estimate.upper
    rhs = c_up * norm_sq_value
    budget = 10.0 * quad_tol * max(len(coeffs), 1) + extra_budget
    margin = rhs - lhs
    if not c_estimate.certified:
        status = "advisory"
    else:
        status = "pass" if margin >= -budget else "fail"
    partials = {int(p): float(partial[p - 1]) for p in partial_points
                if 1 <= p <= len(coeffs)}
    return BesselReport(lhs, rhs, margin, c_up, budget, status,
                        norm_sq_value, per_term, partials)


def riesz_fischer(gram_large: GramMatrix, x: np.ndarray, N: int, M: int,
                  c_estimate: SchurEstimate) -> RieszFischerReport:
    """Residual of the constructive coefficient-recovery bound.

    s_N = Σ_{k<=N} x_k φ_k gives (s_N, φ_n) = Σ_k x_k a_{k,n}; the report
    carries Σ_{n<=M} |x_n - (s_N, φ_n)|² against C² ||x||², plus the Cauchy
    defect ||s_{2N} - s_N}||² against C Σ_{N<j<=2N} |x_j|².
    """
    x = np.asarray(x, dtype=np.complex128)
    if M > N:
        raise InvalidParameterError("riesz_fischer: require M <= N")
    if np.linalg.norm(x) == 0:
        raise InvalidParameterError("riesz_fischer: x must be nonzero")
    W = gram_large.n
    if W < min(2 * N, max(N, len(x))):
        raise InvalidParameterError("riesz_fischer: gram window too small")
    a = gram_large.entries
    xs = np.zeros(W, dtype=np.complex128)
    xs[:min(len(x), W)] = x[:W]
    # (s_N, phi_n) = sum_{k<=N} x_k a_{k,n}
    sn_coeff = xs[:N] @ a[:N, :]
    resid_vec = xs[:M] - sn_coeff[:M]
    residual = float(np.sum(np.abs(resid_vec) ** 2))
    bound = c_estimate.upper ** 2 * float(np.sum(np.abs(xs) ** 2))
    # Cauchy defect over the (N, 2N] block
    hi = min(2 * N, W)
    blk = xs[N:hi]
    if blk.size:
        defect = float(np.real(np.vdot(blk, a[N:hi, N:hi] @ blk)))
        allowance = c_estimate.upper * float(np.sum(np.abs(blk) ** 2))
    else:
        defect, allowance = 0.0, 0.0
    status = "pass" if residual <= bound * (1 + 1e-8) + 1e-18 else "fail"
    if not c_estimate.certified:
        status = "advisory"
    return RieszFischerReport(N, M, residual, bound, defect, allowance, status)


def compactness_diagnostics(gram_window: GramMatrix, n_list) -> CompactnessDiagnostics:
    """Hilbert-Schmidt partials and windowed row/column tail sups.

    The sup over all rows beyond N is infinite data; it is proxied over the
    window (N, W] where W is the size of the supplied Gram block, and the
    report labels it as such.
    """
    n_list = tuple(int(n) for n in n_list)
    if any(n2 <= n1 for n1, n2 in zip(n_list, n_list[1:])):
        raise InvalidParameterError("compactness_diagnostics: N_list must ascend")
    W = gram_window.n
    if n_list and max(n_list) > W:
        raise InvalidParameterError("compactness_diagnostics: window too small")
    a = np.abs(gram_window.entries)
    a2 = a * a
    eye = np.eye(W)
    p2 = np.abs(gram_window.entries - eye) ** 2
    hs, hsp, rowt, colt = [], [], [], []
    for n in n_list:
        hs.append(float(a2[:n, :n].sum()))
        hsp.append(float(p2[:n, :n].sum()))
        if n < W:
            rowt.append(float(a[n:, :].sum(axis=1).max()))
            colt.append(float(a[:, n:].sum(axis=1).max()))
        else:
            rowt.append(0.0)
            colt.append(0.0)
    return CompactnessDiagnostics(n_list, tuple(hs), tuple(hsp),
                                  tuple(rowt), tuple(colt), W)
