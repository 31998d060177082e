"""Ground-truth inner products by direct integration.

The oracle never looks at the gamma formulas: it integrates the symbol
pointwise against monomials, either on a deterministic polar tensor grid
(n <= 2) or by seeded Monte Carlo under the exact probability measure of
the space.  Formula values are tested against these numbers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .indexing import (
    DomainError,
    Partition,
    monomial_norm_sq_ball,
    monomial_norm_sq_projective,
)
from .quadrature import mc_integrate, simplex_rule
from .symbols import SymbolSpec, evaluate_symbol_batch

DEFAULT_GRID = 64
DEFAULT_SAMPLES = 10**6
_THETA_CHUNK = 256


@dataclass(frozen=True)
class OracleResult:
    value: complex
    stderr: float  # 0 for the deterministic path
    method: str  # "polar-grid" | "monte-carlo"
    samples_or_points: int


def _theta_grid(n: int, q: int) -> np.ndarray:
    axes = [2 * np.pi * np.arange(q) / q] * n
    grids = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=-1)  # (q^n, n)


def _grid_inner(psi, alpha, beta, k, rho, W, logpref, q_theta):
    """Shared polar-grid accumulation given radial nodes rho and weights W."""
    n = rho.shape[1]
    thetas = _theta_grid(n, q_theta)
    diff = np.asarray(beta, dtype=float) - np.asarray(alpha, dtype=float)
    total = 0j
    npoints = 0
    for start in range(0, thetas.shape[0], _THETA_CHUNK):
        th = thetas[start:start + _THETA_CHUNK]  # (T, n)
        phase = np.exp(1j * th)  # (T, n)
        Z = rho[:, None, :] * phase[None, :, :]  # (Nr, T, n)
        vals = evaluate_symbol_batch(psi, Z, k)  # (Nr, T)
        # monomial phases exp(i (alpha - beta) . theta), conjugated monomial
        mono = np.exp(-1j * th @ diff)  # (T,)
        total += np.sum(W[:, None] * vals * mono[None, :])
        npoints += rho.shape[0] * th.shape[0]
    value = complex(np.exp(logpref) * total / q_theta**n)
    return value, npoints


def inner_product_projective(psi: SymbolSpec, alpha, beta, m: int, n: int,
                             k: Partition, method: str = "polar-grid",
                             q_r: int = DEFAULT_GRID,
                             q_theta: int = DEFAULT_GRID,
                             samples: int = DEFAULT_SAMPLES,
                             seed: int = 0) -> OracleResult:
    """<psi z^alpha, z^beta> at weight m, by direct integration."""
    alpha = tuple(int(x) for x in alpha)
    beta = tuple(int(x) for x in beta)
    if sum(alpha) > m or sum(beta) > m:
        raise DomainError("monomials outside the weight-m space")
    if method == "polar-grid":
        if n > 2:
            raise DomainError("deterministic oracle supports n <= 2 only")
        e = tuple((a + b) / 2 for a, b in zip(alpha, beta))
        a0 = m - sum(e)
        X, W = simplex_rule(n, e, float(a0), q_r)
        rem = 1.0 - X.sum(axis=-1, keepdims=True)
        rho = np.sqrt(X / rem)
        logpref = gammaln(n + m + 1) - gammaln(m + 1)
        value, npoints = _grid_inner(psi, alpha, beta, k, rho, W, logpref,
                                     q_theta)
        return OracleResult(value, 0.0, "polar-grid", npoints)
    if method != "monte-carlo":
        raise DomainError(f"unknown oracle method {method!r}")

    # Importance-sample from the heavier-tailed weight-M measure so the
    # estimator keeps finite variance: the integrand grows like |z|^D with
    # D = |alpha|+|beta|, and the second moment under weight M is finite
    # exactly when M <= 2m - D.
    D = sum(alpha) + sum(beta)
    M = m if D <= m else 2 * m - D
    log_c = lambda w: gammaln(n + w + 1) - gammaln(w + 1)
    logw0 = log_c(m) - log_c(M)

    def f(Z):
        mono = np.prod(Z ** np.asarray(alpha), axis=-1)
        mono = mono * np.prod(np.conj(Z) ** np.asarray(beta), axis=-1)
        w = np.exp(logw0 + (M - m) * np.log1p(
            np.sum(np.abs(Z) ** 2, axis=-1)))
        return evaluate_symbol_batch(psi, Z, k) * mono * w

    est, stderr = mc_integrate(f, ("nu_m", n, M), samples, seed)
    return OracleResult(complex(est), stderr, "monte-carlo", samples)


def inner_product_ball(psi: SymbolSpec, alpha, beta, lam: float, n: int,
                       k: Partition, method: str = "polar-grid",
                       q_r: int = DEFAULT_GRID, q_theta: int = DEFAULT_GRID,
                       samples: int = DEFAULT_SAMPLES,
                       seed: int = 0) -> OracleResult:
    """<psi z^alpha, z^beta> on the weight-lambda ball space."""
    if lam <= -1:
        raise DomainError(f"need lambda > -1, got {lam}")
    alpha = tuple(int(x) for x in alpha)
    beta = tuple(int(x) for x in beta)
    if method == "polar-grid":
        if n > 2:
            raise DomainError("deterministic oracle supports n <= 2 only")
        e = tuple((a + b) / 2 for a, b in zip(alpha, beta))
        X, W = simplex_rule(n, e, float(lam), q_r)
        rho = np.sqrt(X)
        logpref = gammaln(n + lam + 1) - gammaln(lam + 1)
        value, npoints = _grid_inner(psi, alpha, beta, k, rho, W, logpref,
                                     q_theta)
        return OracleResult(value, 0.0, "polar-grid", npoints)
    if method != "monte-carlo":
        raise DomainError(f"unknown oracle method {method!r}")

    c_norm = float(np.exp(gammaln(n + lam + 1) - gammaln(lam + 1))) / np.pi**n

    def f(Z):
        inside = np.sum(np.abs(Z) ** 2, axis=-1) < 1.0
        weight = np.where(inside, (1.0 - np.sum(np.abs(Z) ** 2, axis=-1))
                          ** lam, 0.0)
        mono = np.prod(Z ** np.asarray(alpha), axis=-1)
        mono = mono * np.prod(np.conj(Z) ** np.asarray(beta), axis=-1)
        return evaluate_symbol_batch(psi, Z, k) * mono * weight * c_norm

    est, stderr = mc_integrate(f, ("polydisk", n), samples, seed)
    return OracleResult(complex(est), stderr, "monte-carlo", samples)


def gamma_from_oracle(psi: SymbolSpec, alpha, p, m: int, n: int,
                      k: Partition, method: str = "polar-grid",
                      **kwargs) -> OracleResult:
    """gamma(alpha) = <psi z^alpha, z^(alpha+p)> / ||z^(alpha+p)||^2."""
    beta = tuple(a + q for a, q in zip(alpha, p))
    if any(b < 0 for b in beta):
        raise DomainError(f"shifted index {beta} has a negative entry")
    res = inner_product_projective(psi, alpha, beta, m, n, k, method, **kwargs)
    nsq = float(monomial_norm_sq_projective(beta, m))
    return OracleResult(res.value / nsq, res.stderr / nsq, res.method,
                        res.samples_or_points)


def gamma_from_oracle_ball(psi: SymbolSpec, alpha, p, lam: float, n: int,
                           k: Partition, method: str = "polar-grid",
                           **kwargs) -> OracleResult:
    beta = tuple(a + q for a, q in zip(alpha, p))
    if any(b < 0 for b in beta):
        raise DomainError(f"shifted index {beta} has a negative entry")
    res = inner_product_ball(psi, alpha, beta, lam, n, k, method, **kwargs)
    nsq = monomial_norm_sq_ball(beta, lam, n)
    return OracleResult(res.value / nsq, res.stderr / nsq, res.method,
                        res.samples_or_points)
