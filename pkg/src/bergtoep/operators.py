"""Toeplitz matrices over the monomial basis and operator-algebra checks.

A gamma table turns into a matrix with at most one nonzero per column:
column(alpha) carries its value in row(alpha+p).  By default entries are
expressed in the orthonormal basis, where the matrix of the conjugate
symbol is exactly the conjugate transpose; raw monomial-basis entries are
kept as a debugging mode.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import expr as exprmod
from .gamma import BallSpace, GammaTable, ProjectiveSpace, build_gamma_table
from .indexing import (
    DomainError,
    Partition,
    basis_index,
    enumerate_basis,
    monomial_norm_sq_ball,
    monomial_norm_sq_projective,
)
from .quadrature import QuadratureSpec
from .symbols import (
    ExtendedFactor,
    Product,
    QuasiRadial,
    SingleSphereFactor,
    SymbolSpec,
    flatten,
)


def space_basis(space) -> list[tuple[int, ...]]:
    if isinstance(space, ProjectiveSpace):
        return enumerate_basis(space.n, space.m)
    return enumerate_basis(space.n, space.cap)


def norm_sq(space, alpha) -> float:
    if isinstance(space, ProjectiveSpace):
        return float(monomial_norm_sq_projective(alpha, space.m))
    return monomial_norm_sq_ball(alpha, space.lam, space.n)


@dataclass(frozen=True)
class ToeplitzMatrix:
    data: np.ndarray  # dense complex, shape (dim, dim)
    shift: tuple[int, ...]
    basis: tuple[tuple[int, ...], ...]
    space: ProjectiveSpace | BallSpace
    normalized: bool = True

    @property
    def dim(self) -> int:
        return self.data.shape[0]


def assemble(table: GammaTable, space=None, basis=None) -> ToeplitzMatrix:
    """Materialize a gamma table as a matrix in the frozen basis order."""
    space = table.space if space is None else space
    if space != table.space:
        raise DomainError("table and target space disagree")
    basis = space_basis(space) if basis is None else list(basis)
    index = basis_index(basis)
    dim = len(basis)
    M = np.zeros((dim, dim), dtype=complex)
    p = table.shift
    for alpha, col in index.items():
        g = table.entries.get(alpha, 0j)
        if g == 0:
            continue
        beta = tuple(a + q for a, q in zip(alpha, p))
        row = index.get(beta)
        if row is None:
            continue
        M[row, col] = g * np.sqrt(norm_sq(space, beta) / norm_sq(space, alpha))
    return ToeplitzMatrix(M, p, tuple(basis), space, normalized=True)


def assemble_raw(table: GammaTable) -> ToeplitzMatrix:
    """Monomial-basis (unnormalized) variant, entry gamma(alpha) itself."""
    basis = space_basis(table.space)
    index = basis_index(basis)
    M = np.zeros((len(basis), len(basis)), dtype=complex)
    for alpha, col in index.items():
        g = table.entries.get(alpha, 0j)
        beta = tuple(a + q for a, q in zip(alpha, table.shift))
        row = index.get(beta)
        if row is not None and g != 0:
            M[row, col] = g
    return ToeplitzMatrix(M, table.shift, tuple(basis), table.space,
                          normalized=False)


def compose(m1: ToeplitzMatrix, m2: ToeplitzMatrix) -> ToeplitzMatrix:
    if m1.basis != m2.basis:
        raise DomainError("operands assembled over different bases")
    shift = tuple(a + b for a, b in zip(m1.shift, m2.shift))
    return ToeplitzMatrix(m1.data @ m2.data, shift, m1.basis, m1.space,
                          m1.normalized)


def commutator(m1: ToeplitzMatrix, m2: ToeplitzMatrix) -> np.ndarray:
    if m1.basis != m2.basis:
        raise DomainError("operands assembled over different bases")
    return m1.data @ m2.data - m2.data @ m1.data


def frobenius_norm(m) -> float:
    data = m.data if isinstance(m, ToeplitzMatrix) else np.asarray(m)
    return float(np.sqrt(np.sum(np.abs(data) ** 2)))


def audit_shift_structure(m: ToeplitzMatrix) -> bool:
    """Every column has at most one nonzero, in row(alpha + p)."""
    index = basis_index(list(m.basis))
    for col, alpha in enumerate(m.basis):
        nz = np.flatnonzero(m.data[:, col])
        if len(nz) > 1:
            return False
        if len(nz) == 1:
            beta = tuple(a + q for a, q in zip(alpha, m.shift))
            if index.get(beta) != int(nz[0]):
                return False
    return True


def single_sphere_to_extended(f: SingleSphereFactor,
                              k: Partition) -> ExtendedFactor:
    """Rewrite b(sigma_(j)) in extended form: sigma_u = r_j s_u / |r|."""
    ell = k.num_blocks
    norm_src = "sqrt(" + " + ".join(f"r{v + 1}^2" for v in range(ell)) + ")"
    mapping = {
        f"sig{l + 1}": exprmod.parse(f"r{f.j + 1}*s{l + 1}/{norm_src}")
        for l in range(k.parts[f.j])
    }
    return ExtendedFactor(f.j, exprmod.subst(f.b, mapping), f.p)


def product_table(factors: list[SymbolSpec], space, k: Partition,
                  spec: QuadratureSpec) -> GammaTable:
    """Gamma table of the pointwise product of the given factors.

    Single-sphere factors are rewritten in extended form whenever they are
    combined with anything else, so the coupled-integral theorem covers
    the product.
    """
    flat = []
    for f in factors:
        flat.extend(flatten(f))
    if len(flat) > 1 and any(isinstance(f, SingleSphereFactor) for f in flat):
        flat = [single_sphere_to_extended(f, k)
                if isinstance(f, SingleSphereFactor) else f for f in flat]
    return build_gamma_table(Product(tuple(flat)), space, k, spec)


def fusion_defect(a: SymbolSpec | None, factors: list[SymbolSpec], space,
                  k: Partition, spec: QuadratureSpec) -> tuple[float, float]:
    """Frobenius distance between T of the product symbol and the product
    of the factor operators, plus the product-symbol scale."""
    all_factors = ([a] if a is not None else []) + list(factors)
    prod_matrix = assemble(product_table(all_factors, space, k, spec))
    acc = np.eye(prod_matrix.dim, dtype=complex)
    for f in all_factors:
        acc = acc @ assemble(build_gamma_table(f, space, k, spec)).data
    defect = frobenius_norm(prod_matrix.data - acc)
    scale = frobenius_norm(prod_matrix)
    return defect, scale


def commutation_suite(symbols: list[SymbolSpec], space, k: Partition,
                      spec: QuadratureSpec) -> float:
    """Max pairwise relative commutator Frobenius norm over the suite."""
    mats = [assemble(build_gamma_table(s, space, k, spec)) for s in symbols]
    worst = 0.0
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            ni, nj = frobenius_norm(mats[i]), frobenius_norm(mats[j])
            if ni == 0 or nj == 0:
                continue
            worst = max(worst, frobenius_norm(commutator(mats[i], mats[j]))
                        / (ni * nj))
    return worst


def export_matrix(m: ToeplitzMatrix, fh) -> None:
    """Coordinate-list text format, one entry per line: row col re im."""
    if isinstance(m.space, ProjectiveSpace):
        weight = m.space.m
    else:
        weight = m.space.lam
    shift = ",".join(str(x) for x in m.shift)
    fh.write(f"# {m.space.n} {weight} {m.dim} shift={shift}\n")
    rows, cols = np.nonzero(m.data)
    for r, c in zip(rows.tolist(), cols.tolist()):
        v = m.data[r, c]
        fh.write(f"{r} {c} {float(v.real)!r} {float(v.imag)!r}\n")
