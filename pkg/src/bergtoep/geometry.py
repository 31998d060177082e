"""Moment maps, the simplex polytope of the torus action, and randomized
orbit-invariance checks for the symbol classes.

All invariance claims are function-factorization statements; they are
verified by sampling torus/unitary orbits at fixed seeds, not proved
symbolically.
"""

from __future__ import annotations

import numpy as np

from .indexing import DomainError, Partition
from .symbols import SymbolSpec, evaluate_symbol_batch

_ZERO_CUTOFF = 1e-8


def moment_map_full(w) -> np.ndarray:
    """(1/2|w|^2)(|w_0|^2, ..., |w_n|^2) for homogeneous coordinates w."""
    w = np.asarray(w, dtype=complex)
    nsq = float(np.sum(np.abs(w) ** 2))
    if nsq == 0:
        raise DomainError("moment map undefined at w = 0")
    return np.abs(w) ** 2 / (2 * nsq)


def moment_map_partition(w, k: Partition) -> np.ndarray:
    """Block version: (1/2|w|^2)(|w_0|^2, |w_(1)|^2, ..., |w_(l)|^2)."""
    w = np.asarray(w, dtype=complex)
    if w.shape != (k.n + 1,):
        raise DomainError(f"expected {k.n + 1} homogeneous coordinates")
    nsq = float(np.sum(np.abs(w) ** 2))
    if nsq == 0:
        raise DomainError("moment map undefined at w = 0")
    out = np.empty(k.num_blocks + 1)
    out[0] = np.abs(w[0]) ** 2
    for j in range(k.num_blocks):
        sl = k.block_slice(j)
        out[j + 1] = np.sum(np.abs(w[1 + sl.start:1 + sl.stop]) ** 2)
    return out / (2 * nsq)


def to_delzant(mu: np.ndarray) -> np.ndarray:
    """Drop the 0-th coordinate and rescale by 2; lands in the simplex."""
    mu = np.asarray(mu, dtype=float)
    if abs(float(mu.sum()) - 0.5) > 1e-12 or np.any(mu < -1e-14):
        raise DomainError(f"not a moment value: {mu}")
    x = 2.0 * mu[1:]
    if x.sum() > 1 + 1e-12:
        raise DomainError("image point escapes the simplex")
    return x


def _sample_points(rng, n: int, count: int) -> np.ndarray:
    """Complex Gaussian chart points, resampling near-zero coordinates."""
    z = rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))
    for _ in range(100):
        bad = np.abs(z) < _ZERO_CUTOFF
        if not bad.any():
            break
        z[bad] = (rng.standard_normal(int(bad.sum()))
                  + 1j * rng.standard_normal(int(bad.sum())))
    return z


def invariance_check(psi: SymbolSpec, k: Partition, action: str,
                     trials: int = 1000, seed: int = 0) -> float:
    """Max |psi(t.z) - psi(z)| over random points and torus elements.

    action "full-torus" multiplies each coordinate by its own phase;
    "partition-torus" multiplies block j by t_j / t_0 (the chart form of
    the block-diagonal torus action on homogeneous coordinates).
    """
    if trials < 1:
        raise DomainError("need at least one trial")
    if action not in ("full-torus", "partition-torus"):
        raise DomainError(f"unknown action {action!r}")
    worst = 0.0
    for trial in range(trials):
        rng = np.random.default_rng(seed + trial)
        z = _sample_points(rng, k.n, 1)[0]
        if action == "full-torus":
            phases = np.exp(2j * np.pi * rng.random(k.n))
            zt = z * phases
        else:
            block_phases = np.exp(2j * np.pi * rng.random(k.num_blocks + 1))
            zt = z.copy()
            for j in range(k.num_blocks):
                zt[k.block_slice(j)] *= block_phases[j + 1] / block_phases[0]
        vals = evaluate_symbol_batch(psi, np.stack([z, zt]), k)
        worst = max(worst, float(abs(vals[1] - vals[0])))
    return worst


def _random_block_unitary(rng, dim: int) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    # fix the phase ambiguity so the distribution is Haar
    return q * (np.diag(r) / np.abs(np.diag(r)))


def factorization_check(a: SymbolSpec, k: Partition, pairs: int = 1000,
                        seed: int = 0) -> float:
    """Max |a(z) - a(Uz)| over random block-diagonal unitaries U.

    Block unitaries preserve the block moment map exactly, so any symbol
    factoring through it must be constant along these orbits.
    """
    if pairs < 1:
        raise DomainError("need at least one pair")
    worst = 0.0
    for trial in range(pairs):
        rng = np.random.default_rng(seed + trial)
        z = _sample_points(rng, k.n, 1)[0]
        zt = z.copy()
        for j in range(k.num_blocks):
            U = _random_block_unitary(rng, k.parts[j])
            sl = k.block_slice(j)
            zt[sl] = U @ z[sl]
        vals = evaluate_symbol_batch(a, np.stack([z, zt]), k)
        worst = max(worst, float(abs(vals[1] - vals[0])))
    return worst
