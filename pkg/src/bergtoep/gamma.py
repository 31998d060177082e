"""Coefficient functions gamma(alpha) for every covered symbol family.

Each Toeplitz operator in the covered families acts on monomials as
T(z^alpha) = gamma(alpha) z^(alpha+p).  The functions here evaluate
gamma by reducing to the two quadrature kernels: a rational-weight
radial integral over the positive orthant and per-block simplex
integrals with (possibly half-integer) monomial weights.  Factorials at
half-integer arguments are read as Gamma(x+1) throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from . import quadrature
from .expr import Expr, evaluate
from .indexing import DomainError, Partition, enumerate_basis
from .quadrature import QuadratureSpec, radial_integrate_projective, simplex_integrate
from .symbols import (
    ExtendedFactor,
    MultiSphereFactor,
    PhaseMonomial,
    Product,
    QuasiRadial,
    SingleSphereFactor,
    SymbolSpec,
    ValidationError,
    flatten,
    total_shift,
    validate_product,
)


class UnsupportedCaseError(DomainError):
    """A case the closed-form theorems do not cover."""


@dataclass(frozen=True)
class ProjectiveSpace:
    n: int
    m: int


@dataclass(frozen=True)
class BallSpace:
    n: int
    lam: float
    cap: int  # basis degree cap |alpha| <= cap


@dataclass(frozen=True)
class GammaTable:
    space: ProjectiveSpace | BallSpace
    partition: Partition
    shift: tuple[int, ...]
    entries: dict
    annotation: str

    def __getitem__(self, alpha):
        return self.entries[tuple(alpha)]


def _radial_evaluator(a_expr: Expr | None, ell: int):
    if a_expr is None:
        return None

    def g(rho):
        # rho holds the block radii sqrt(r_j), shape (N, ell)
        env = {f"r{j + 1}": rho[:, j] for j in range(ell)}
        return evaluate(a_expr, env) * np.ones(rho.shape[0])

    return g


def _block_evaluator(b_expr: Expr | None, kj: int):
    """Evaluator for b(sqrt(s)) on Delta_{kj-1}; the dependent last
    coordinate is sqrt(1 - sum s)."""
    if b_expr is None:
        return None

    def f(S):
        env = {f"s{l + 1}": np.sqrt(S[:, l]) for l in range(kj - 1)}
        env[f"s{kj}"] = np.sqrt(np.clip(1.0 - S.sum(axis=-1), 0.0, None))
        return evaluate(b_expr, env) * np.ones(S.shape[0])

    return f


def _split_product(psi: SymbolSpec, k: Partition, allowed):
    """Collect (a_expr, per-block factors, total shift) from a product."""
    validate_product(psi, k)
    a_expr = None
    blocks: dict[int, SymbolSpec] = {}
    for f in flatten(psi):
        if isinstance(f, QuasiRadial):
            a_expr = f.a
        elif isinstance(f, allowed):
            blocks[f.j] = f
        elif isinstance(f, PhaseMonomial):
            pass
        else:
            raise ValidationError(
                f"factor {type(f).__name__} is outside this symbol family"
            )
    return a_expr, blocks, total_shift(psi, k)


def _hard_zero_projective(alpha, p, m: int) -> bool:
    shifted = tuple(a + q for a, q in zip(alpha, p))
    return any(x < 0 for x in shifted) or sum(shifted) > m


def gamma_quasi_radial(a: Expr, k: Partition, m: int, alpha,
                       spec: QuadratureSpec) -> float:
    """Diagonal coefficient of a quasi-radial symbol at weight m."""
    n, ell = k.n, k.num_blocks
    alpha = tuple(int(x) for x in alpha)
    d = sum(alpha)
    if d > m:
        raise DomainError(f"|alpha|={d} exceeds m={m}")
    block_deg = [sum(k.block(alpha, j)) for j in range(ell)]
    e = [block_deg[j] + k.parts[j] - 1 for j in range(ell)]
    logpref = gammaln(n + m + 1) - gammaln(m - d + 1)
    logpref -= sum(gammaln(k.parts[j] + block_deg[j]) for j in range(ell))
    integral = radial_integrate_projective(
        _radial_evaluator(a, ell), ell, e, n + m + 1, spec)
    return float(np.exp(logpref) * integral)


def gamma_multisphere_factor(b: Expr | None, k: Partition, j: int, p_j,
                             alpha, spec: QuadratureSpec) -> float:
    """Weight-independent per-block coefficient for b_j(s_(j)) t_(j)^p_(j)
    with a blockwise-zero shift."""
    p_j = tuple(int(x) for x in p_j)
    kj = k.parts[j]
    if len(p_j) != kj or sum(p_j) != 0:
        raise ValidationError(f"shift {p_j} is not blockwise-zero on block {j}")
    a_j = k.block(alpha, j)
    shifted = tuple(a + q for a, q in zip(a_j, p_j))
    if any(x < 0 for x in shifted):
        return 0.0
    deg = sum(a_j)
    exps = tuple(a_j[l] + p_j[l] / 2 for l in range(kj - 1))
    a0 = a_j[kj - 1] + p_j[kj - 1] / 2
    logpref = gammaln(kj + deg) - sum(gammaln(x + 1) for x in shifted)
    integral = simplex_integrate(_block_evaluator(b, kj), kj - 1, exps, a0, spec)
    return float(np.exp(logpref) * integral)


def gamma_multisphere(psi: SymbolSpec, k: Partition, m: int, alpha,
                      spec: QuadratureSpec) -> float:
    """Coefficient of a quasi-radial multi-sphere pseudo-homogeneous
    product with total shift summing to zero (the general theorem; the
    per-block shifts need not vanish individually)."""
    a_expr, blocks, p = _split_product(psi, k, (MultiSphereFactor,))
    if sum(p) != 0:
        raise ValidationError(f"total shift {p} must sum to zero")
    alpha = tuple(int(x) for x in alpha)
    d = sum(alpha)
    if d > m:
        raise DomainError(f"|alpha|={d} exceeds m={m}")
    if _hard_zero_projective(alpha, p, m):
        return 0.0
    n, ell = k.n, k.num_blocks
    e = []
    log_value = gammaln(n + m + 1) - gammaln(m - d + 1)
    block_integrals = 1.0
    for j in range(ell):
        kj = k.parts[j]
        a_j = k.block(alpha, j)
        p_j = k.block(p, j)
        half = sum(p_j) / 2
        e.append(sum(a_j) + half + kj - 1)
        # the Gamma(k_j + |alpha_(j)| + |p_(j)|/2) factors cancel between
        # the global denominator and the block numerators
        log_value -= sum(gammaln(a_j[l] + p_j[l] + 1) for l in range(kj))
        b_expr = blocks[j].b if j in blocks else None
        exps = tuple(a_j[l] + p_j[l] / 2 for l in range(kj - 1))
        a0 = a_j[kj - 1] + p_j[kj - 1] / 2
        block_integrals *= simplex_integrate(
            _block_evaluator(b_expr, kj), kj - 1, exps, a0, spec)
    radial = radial_integrate_projective(
        _radial_evaluator(a_expr, ell), ell, e, n + m + 1, spec)
    return float(np.exp(log_value) * radial * block_integrals)


def gamma_single_sphere(b: Expr | None, k: Partition, j: int, p_j, n: int,
                        alpha, spec: QuadratureSpec) -> float:
    """Coefficient of a single-sphere factor b_j(sigma_(j)) t_(j)^p_j.

    Independent of the weight; depends on alpha only through alpha_(j)
    and |alpha|.  The case k_j = n is outside the theorem (the leftover
    simplex factor degenerates) and raises.
    """
    kj = k.parts[j]
    if kj >= n:
        raise UnsupportedCaseError(
            "single-sphere factor with k_j = n is not covered; "
            "use the one-block multi-sphere form instead")
    p_j = tuple(int(x) for x in p_j)
    if len(p_j) != kj or sum(p_j) != 0:
        raise ValidationError(f"shift {p_j} is not blockwise-zero on block {j}")
    alpha = tuple(int(x) for x in alpha)
    a_j = k.block(alpha, j)
    shifted = tuple(a + q for a, q in zip(a_j, p_j))
    if any(x < 0 for x in shifted):
        return 0.0
    d = sum(alpha)
    a0 = d - sum(a_j) + n - kj - 1
    exps = tuple(a_j[l] + p_j[l] / 2 for l in range(kj))
    logpref = gammaln(d + n) - gammaln(a0 + 1)
    logpref -= sum(gammaln(x + 1) for x in shifted)

    if b is None:
        f = None
    else:
        def f(S):
            env = {f"sig{l + 1}": np.sqrt(S[:, l]) for l in range(kj)}
            return evaluate(b, env) * np.ones(S.shape[0])

    integral = simplex_integrate(f, kj, exps, a0, spec)
    return float(np.exp(logpref) * integral)


def _gamma_extended_common(a_expr, blocks, p, k: Partition, alpha,
                           radial_rule, log_value, spec: QuadratureSpec):
    """Shared coupled-integral evaluation for the extended families.

    radial_rule gives (nodes U, weights W, rho(U)) for the outer integral
    with the monomial/rational weights already absorbed.
    """
    ell = k.num_blocks
    U, W, rho = radial_rule
    if a_expr is not None:
        env = {f"r{j + 1}": rho[:, j] for j in range(ell)}
        avals = evaluate(a_expr, env) * np.ones(rho.shape[0])
    else:
        avals = np.ones(rho.shape[0])
    inner = np.ones(rho.shape[0])
    for j in range(ell):
        kj = k.parts[j]
        a_j = k.block(alpha, j)
        p_j = k.block(p, j)
        exps = tuple(a_j[l] + p_j[l] / 2 for l in range(kj - 1))
        a0 = a_j[kj - 1] + p_j[kj - 1] / 2
        Xb, Wb = quadrature.simplex_rule(kj - 1, tuple(float(x) for x in exps),
                                         float(a0), spec.order)
        if j in blocks:
            h = _extended_block_matrix(blocks[j].b, kj, rho, Xb)
            inner = inner * (h @ Wb)
        else:
            inner = inner * float(np.sum(Wb))
    return float(np.exp(log_value) * np.sum(W * avals * inner))


def _extended_block_matrix(b_expr: Expr, kj: int, rho: np.ndarray,
                           S: np.ndarray) -> np.ndarray:
    """Matrix b_j(sqrt(r)_i, sqrt(s)_q) over radial nodes i, block nodes q."""
    env = {f"r{v + 1}": rho[:, v][:, None] for v in range(rho.shape[1])}
    for l in range(kj - 1):
        env[f"s{l + 1}"] = np.sqrt(S[:, l])[None, :]
    env[f"s{kj}"] = np.sqrt(np.clip(1.0 - S.sum(axis=-1), 0.0, None))[None, :]
    return evaluate(b_expr, env) * np.ones((rho.shape[0], S.shape[0]))


def _extended_dims_check(k: Partition):
    dim = k.num_blocks + sum(kj - 1 for kj in k.parts)
    if dim > quadrature.MAX_TENSOR_DIM:
        raise DomainError(
            f"coupled integral dimension {dim} > {quadrature.MAX_TENSOR_DIM}; "
            "use a monte-carlo quadrature spec")


def gamma_extended_projective(psi: SymbolSpec, k: Partition, m: int, alpha,
                              spec: QuadratureSpec) -> float:
    """Coefficient of an extended symbol a(r) prod b_j(r, s_(j)) t^p on the
    weight-m projective space."""
    a_expr, blocks, p = _split_product(
        psi, k, (ExtendedFactor, MultiSphereFactor))
    if sum(p) != 0:
        raise ValidationError(f"total shift {p} must sum to zero")
    alpha = tuple(int(x) for x in alpha)
    d = sum(alpha)
    if d > m:
        raise DomainError(f"|alpha|={d} exceeds m={m}")
    if _hard_zero_projective(alpha, p, m):
        return 0.0
    n, ell = k.n, k.num_blocks
    N = n + m + 1
    e, log_value = [], gammaln(n + m + 1) - gammaln(m - d + 1)
    for j in range(ell):
        kj = k.parts[j]
        a_j, p_j = k.block(alpha, j), k.block(p, j)
        e.append(sum(a_j) + sum(p_j) / 2 + kj - 1)
        log_value -= sum(gammaln(a_j[l] + p_j[l] + 1) for l in range(kj))
    if spec.method == "monte-carlo":
        return _gamma_extended_projective_mc(
            a_expr, blocks, p, k, alpha, e, N, log_value, spec)
    _extended_dims_check(k)
    a0 = N - ell - 1 - sum(e)
    if a0 <= -1:
        raise DomainError("integrability violated in the radial factor")
    U, W = quadrature.simplex_rule(ell, tuple(float(x) for x in e),
                                   float(a0), spec.order)
    rem = 1.0 - U.sum(axis=-1, keepdims=True)
    rho = np.sqrt(U / rem)
    return _gamma_extended_common(a_expr, blocks, p, k, alpha,
                                  (U, W, rho), log_value, spec)


def _gamma_extended_projective_mc(a_expr, blocks, p, k, alpha, e, N,
                                  log_value, spec):
    """Monte Carlo branch: the monomial/rational weights are folded into
    Dirichlet proposals so the integrand left to average stays bounded."""
    ell = k.num_blocks
    rng = np.random.default_rng(spec.seed)
    nsamp = spec.order
    rest = N - ell - 1 - sum(e)
    if rest <= -1:
        raise DomainError("integrability violated in the radial factor")
    radial_alphas = np.concatenate([np.asarray(e) + 1.0, [rest + 1.0]])
    u = rng.dirichlet(radial_alphas, nsamp)
    r = u[:, :ell] / u[:, ell:]
    rho = np.sqrt(r)
    vals = np.full(nsamp,
                   quadrature.dirichlet_closed_form(tuple(e), rest))
    if a_expr is not None:
        env = {f"r{j + 1}": rho[:, j] for j in range(ell)}
        vals = vals * evaluate(a_expr, env)
    for j in range(ell):
        kj = k.parts[j]
        a_j, p_j = k.block(alpha, j), k.block(p, j)
        exps = tuple(a_j[l] + p_j[l] / 2 for l in range(kj - 1))
        a0 = a_j[kj - 1] + p_j[kj - 1] / 2
        S = rng.dirichlet(np.asarray(exps + (a0,)) + 1.0, nsamp)[:, : kj - 1]
        w = quadrature.dirichlet_closed_form(exps, a0)
        if j in blocks:
            env = {f"r{v + 1}": rho[:, v] for v in range(ell)}
            for l in range(kj - 1):
                env[f"s{l + 1}"] = np.sqrt(S[:, l])
            env[f"s{kj}"] = np.sqrt(np.clip(1.0 - S.sum(axis=-1), 0.0, None))
            w = w * evaluate(blocks[j].b, env)
        vals = vals * w
    return float(np.exp(log_value) * np.mean(vals))


def gamma_extended_ball(psi: SymbolSpec, k: Partition, lam: float, alpha,
                        spec: QuadratureSpec) -> float:
    """Coefficient of an extended symbol on the weight-lambda ball space."""
    if lam <= -1:
        raise DomainError(f"need lambda > -1, got {lam}")
    a_expr, blocks, p = _split_product(
        psi, k, (ExtendedFactor, MultiSphereFactor))
    if sum(p) != 0:
        raise ValidationError(f"total shift {p} must sum to zero")
    alpha = tuple(int(x) for x in alpha)
    shifted = tuple(a + q for a, q in zip(alpha, p))
    if any(x < 0 for x in shifted):
        return 0.0
    n, ell = k.n, k.num_blocks
    d = sum(alpha)
    _extended_dims_check(k)
    e, log_value = [], gammaln(n + d + lam + 1) - gammaln(lam + 1)
    for j in range(ell):
        kj = k.parts[j]
        a_j, p_j = k.block(alpha, j), k.block(p, j)
        e.append(sum(a_j) + sum(p_j) / 2 + kj - 1)
        log_value -= sum(gammaln(a_j[l] + p_j[l] + 1) for l in range(kj))
    U, W = quadrature.simplex_rule(ell, tuple(float(x) for x in e),
                                   float(lam), spec.order)
    rho = np.sqrt(U)
    return _gamma_extended_common(a_expr, blocks, p, k, alpha,
                                  (U, W, rho), log_value, spec)


def _classify(psi: SymbolSpec, k: Partition):
    factors = flatten(psi)
    kinds = {type(f) for f in factors}
    if SingleSphereFactor in kinds:
        if kinds - {SingleSphereFactor} or len(factors) != 1:
            raise ValidationError(
                "single-sphere factors combine with no other variant under "
                "a covering theorem; express the product in extended form")
        return "single-sphere"
    if ExtendedFactor in kinds:
        return "extended"
    return "multi-sphere"


def build_gamma_table(psi: SymbolSpec, space, k: Partition,
                      spec: QuadratureSpec) -> GammaTable:
    """Evaluate gamma over the whole basis, recording hard zeros."""
    validate_product(psi, k)
    family = _classify(psi, k)
    p = total_shift(psi, k)
    if isinstance(space, ProjectiveSpace):
        basis = enumerate_basis(space.n, space.m)
    else:
        basis = enumerate_basis(space.n, space.cap)
    entries = {}
    if isinstance(space, BallSpace):
        annotation = "extended-ball"
        for alpha in basis:
            entries[alpha] = complex(
                gamma_extended_ball(psi, k, space.lam, alpha, spec))
        return GammaTable(space, k, p, entries, annotation)

    if family == "single-sphere":
        factor = flatten(psi)[0]
        annotation = "single-sphere"
        for alpha in basis:
            if _hard_zero_projective(alpha, p, space.m):
                entries[alpha] = 0j
            else:
                entries[alpha] = complex(gamma_single_sphere(
                    factor.b, k, factor.j, factor.p, space.n, alpha, spec))
    elif family == "extended":
        annotation = "extended-projective"
        for alpha in basis:
            entries[alpha] = complex(
                gamma_extended_projective(psi, k, space.m, alpha, spec))
    else:
        annotation = "quasi-radial-pseudo-homogeneous"
        for alpha in basis:
            entries[alpha] = complex(
                gamma_multisphere(psi, k, space.m, alpha, spec))
    return GammaTable(space, k, p, entries, annotation)
