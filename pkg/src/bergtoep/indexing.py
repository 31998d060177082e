"""Multi-index and partition combinatorics for the monomial bases.

The basis of the weighted space over n variables at weight m is the set of
monomials z^alpha with |alpha| <= m, frozen in graded lexicographic order
(grade = |alpha|, then plain lexicographic within a grade).  Every matrix
row/column index in the package refers to this order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement

import numpy as np
from scipy.special import gammaln


class DomainError(ValueError):
    """Raised when an operation is called outside its mathematical domain."""


@dataclass(frozen=True)
class Partition:
    """Block structure k = (k_1, ..., k_l) of the n coordinates."""

    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if not parts or any(p < 1 for p in parts):
            raise DomainError(f"partition parts must be positive, got {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def num_blocks(self) -> int:
        return len(self.parts)

    @property
    def block_offsets(self) -> tuple[int, ...]:
        offs = []
        acc = 0
        for p in self.parts:
            offs.append(acc)
            acc += p
        return tuple(offs)

    def block_slice(self, j: int) -> slice:
        """0-based block index j -> slice of coordinates in that block."""
        off = self.block_offsets[j]
        return slice(off, off + self.parts[j])

    def block(self, vec, j: int):
        """Slice of a length-n sequence belonging to block j."""
        return tuple(vec[self.block_slice(j)])


def multi_index_degree(alpha) -> int:
    return sum(alpha)


@dataclass(frozen=True)
class ShiftVector:
    """Integer shift p with a declared zero-sum mode.

    mode "total-zero" requires sum(p) == 0; mode "blockwise-zero" requires
    sum over every block of the attached partition to vanish (which implies
    total-zero).
    """

    entries: tuple[int, ...]
    mode: str = "total-zero"
    partition: Partition | None = None

    def __post_init__(self):
        entries = tuple(int(p) for p in self.entries)
        object.__setattr__(self, "entries", entries)
        if self.mode not in ("total-zero", "blockwise-zero"):
            raise DomainError(f"unknown shift mode {self.mode!r}")
        if self.mode == "total-zero":
            if sum(entries) != 0:
                raise DomainError(f"shift {entries} does not sum to zero")
        else:
            if self.partition is None:
                raise DomainError("blockwise-zero mode needs a partition")
            for j in range(self.partition.num_blocks):
                if sum(self.partition.block(entries, j)) != 0:
                    raise DomainError(
                        f"shift {entries} has nonzero sum on block {j}"
                    )


def enumerate_basis(n: int, m: int) -> list[tuple[int, ...]]:
    """All alpha in N^n with |alpha| <= m, graded lexicographic.

    Length is binomial(n+m, n).  The order is the package-wide contract:
    grade ascending, lexicographic within each grade.
    """
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    if m < 0:
        raise DomainError(f"need m >= 0, got {m}")
    out: list[tuple[int, ...]] = []
    for d in range(m + 1):
        grade = []
        # compositions of d into n parts
        for comb in combinations_with_replacement(range(n), d):
            alpha = [0] * n
            for c in comb:
                alpha[c] += 1
            grade.append(tuple(alpha))
        grade.sort()
        out.extend(grade)
    return out


def basis_index(basis: list[tuple[int, ...]]) -> dict[tuple[int, ...], int]:
    return {alpha: i for i, alpha in enumerate(basis)}


def monomial_norm_sq_projective(alpha, m: int) -> Fraction:
    """Exact squared norm of z^alpha at weight m: alpha!(m-|alpha|)!/m!."""
    alpha = tuple(int(a) for a in alpha)
    d = sum(alpha)
    if d > m:
        raise DomainError(f"|alpha|={d} exceeds weight m={m}")
    num = math.factorial(m - d)
    for a in alpha:
        num *= math.factorial(a)
    return Fraction(num, math.factorial(m))


def monomial_norm_sq_ball(alpha, lam: float, n: int) -> float:
    """Squared norm of z^alpha on the weighted ball space:
    alpha! Gamma(n+lam+1) / Gamma(n+|alpha|+lam+1)."""
    if lam <= -1:
        raise DomainError(f"need lambda > -1, got {lam}")
    alpha = tuple(int(a) for a in alpha)
    d = sum(alpha)
    logv = gammaln(n + lam + 1) - gammaln(n + d + lam + 1)
    for a in alpha:
        logv += gammaln(a + 1)
    return float(np.exp(logv))


@dataclass(frozen=True)
class PolarDecomposition:
    """Per-block polar data of a point z in C^n.

    r[j] is the block radius |z_(j)|; s[j] the direction cosines within
    block j; t the coordinate phases (1 where the coordinate vanishes);
    sigma the global direction cosines |z_u|/|z|.
    """

    r: tuple[float, ...]
    s: tuple[tuple[float, ...], ...]
    t: tuple[complex, ...]
    sigma: tuple[float, ...]


def decompose(z, k: Partition) -> PolarDecomposition:
    """Polar decomposition of z with respect to the partition k.

    Conventions at measure-zero sets: phases of zero coordinates are 1,
    and the direction of a zero-radius block is the uniform point
    (1/sqrt(k_j), ..., 1/sqrt(k_j)).
    """
    z = np.asarray(z, dtype=complex)
    if z.shape != (k.n,):
        raise DomainError(f"point has shape {z.shape}, expected ({k.n},)")
    mod = np.abs(z)
    t = np.where(mod > 0, z / np.where(mod > 0, mod, 1.0), 1.0 + 0j)
    total = float(np.sqrt(np.sum(mod**2)))
    if total > 0:
        sigma = mod / total
    else:
        sigma = np.full(k.n, 1.0 / math.sqrt(k.n))
    r = []
    s = []
    for j in range(k.num_blocks):
        blk = mod[k.block_slice(j)]
        rj = float(np.sqrt(np.sum(blk**2)))
        r.append(rj)
        if rj > 0:
            s.append(tuple(float(x) for x in blk / rj))
        else:
            s.append(tuple([1.0 / math.sqrt(k.parts[j])] * k.parts[j]))
    return PolarDecomposition(
        r=tuple(r),
        s=tuple(s),
        t=tuple(complex(x) for x in t),
        sigma=tuple(float(x) for x in sigma),
    )


def reconstruct(dec: PolarDecomposition, k: Partition) -> np.ndarray:
    """Inverse of decompose on inputs with nonzero coordinates."""
    z = np.empty(k.n, dtype=complex)
    for j in range(k.num_blocks):
        sl = k.block_slice(j)
        rj = dec.r[j]
        for l, u in enumerate(range(sl.start, sl.stop)):
            z[u] = rj * dec.s[j][l] * dec.t[u]
    return z
