"""Hermitian operator bases normalized to Tr[F_a F_b] = dim * delta_ab.

Every construction in this package is phrased in terms of an ordered family
of Hermitian matrices F_0, ..., F_{d^2-1} with F_0 the identity and the
remaining elements traceless. The normalization Tr[F_a F_b] = d * delta_ab
makes mean values and expansion coefficients proportional: any matrix Q
decomposes as Q = sum_a c_a F_a with c_a = Tr[F_a Q] / d.

For a bipartite system the joint family is the tensor table
F_{mu nu} = F_{mu 0} (x) F_{0 nu}, flattened as (mu, nu) -> mu * M^2 + nu.

The single-system family is the generalized Gell-Mann construction:
identity, then the symmetric pairs, the antisymmetric pairs, and the
diagonal ladder, each in lexicographic index order and rescaled to the
normalization above. At dim 2 this is exactly [I, sigma_x, sigma_y,
sigma_z] with no special casing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "HermitianBasis",
    "JointBasis",
    "build_basis",
    "joint_basis",
    "expand",
    "reconstruct",
]


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class HermitianBasis:
    """Ordered Hermitian family for one system.

    elements has shape (dim^2, dim, dim); elements[0] is the identity and
    Tr[elements[a] @ elements[b]] = dim * delta_ab.
    """

    dim: int
    elements: np.ndarray

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError(f"dimension must be positive, got {self.dim}")
        expected = (self.dim**2, self.dim, self.dim)
        if self.elements.shape != expected:
            raise ValueError(
                f"basis table has shape {self.elements.shape}, expected {expected}"
            )
        object.__setattr__(self, "elements", _freeze(self.elements))

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return self.dim**2


@dataclass(frozen=True)
class JointBasis:
    """Tensor-product family for a bipartite system.

    elements[mu, nu] = basis_s.elements[mu] (x) basis_r.elements[nu], with
    the first tensor factor acting on the N-dimensional system of interest
    and the second on the M-dimensional partner. The flat view orders pairs
    as (mu, nu) -> mu * M^2 + nu.
    """

    basis_s: HermitianBasis
    basis_r: HermitianBasis
    elements: np.ndarray

    def __post_init__(self) -> None:
        n, m = self.dims
        expected = (n**2, m**2, n * m, n * m)
        if self.elements.shape != expected:
            raise ValueError(
                f"joint table has shape {self.elements.shape}, expected {expected}"
            )
        object.__setattr__(self, "elements", _freeze(self.elements))

    @property
    def dims(self) -> tuple[int, int]:
        return (self.basis_s.dim, self.basis_r.dim)

    @property
    def flat_elements(self) -> np.ndarray:
        """View of shape (N^2 * M^2, N*M, N*M) in flattened pair order."""
        n, m = self.dims
        return self.elements.reshape(n**2 * m**2, n * m, n * m)

    def flat_index(self, mu: int, nu: int) -> int:
        n, m = self.dims
        if not (0 <= mu < n**2 and 0 <= nu < m**2):
            raise ValueError(f"pair index ({mu}, {nu}) out of range for dims {self.dims}")
        return mu * m**2 + nu


def build_basis(dim: int) -> HermitianBasis:
    """Generalized Gell-Mann family for one system, identity first.

    Order after the identity: symmetric pair elements (j < k,
    lexicographic), antisymmetric pair elements (same order), then the
    diagonal ladder. Each element is rescaled so Tr[F_a^2] = dim.
    """
    if dim < 1:
        raise ValueError(f"dimension must be positive, got {dim}")
    mats: list[np.ndarray] = [np.eye(dim, dtype=complex)]
    for j in range(dim):
        for k in range(j + 1, dim):
            g = np.zeros((dim, dim), dtype=complex)
            g[j, k] = 1.0
            g[k, j] = 1.0
            mats.append(g)
    for j in range(dim):
        for k in range(j + 1, dim):
            g = np.zeros((dim, dim), dtype=complex)
            g[j, k] = -1.0j
            g[k, j] = 1.0j
            mats.append(g)
    for l in range(1, dim):
        g = np.zeros((dim, dim), dtype=complex)
        for j in range(l):
            g[j, j] = 1.0
        g[l, l] = -float(l)
        mats.append(g)
    table = np.empty((dim**2, dim, dim), dtype=complex)
    for a, g in enumerate(mats):
        norm2 = np.trace(g @ g).real
        table[a] = g * np.sqrt(dim / norm2)
    return HermitianBasis(dim=dim, elements=table)


def joint_basis(basis_s: HermitianBasis, basis_r: HermitianBasis) -> JointBasis:
    """Tensor table F_{mu nu} = F_mu (x) F_nu from two single-system families."""
    n, m = basis_s.dim, basis_r.dim
    table = np.empty((n**2, m**2, n * m, n * m), dtype=complex)
    for mu in range(n**2):
        for nu in range(m**2):
            table[mu, nu] = np.kron(basis_s.elements[mu], basis_r.elements[nu])
    return JointBasis(basis_s=basis_s, basis_r=basis_r, elements=table)


def expand(matrix: np.ndarray, basis: HermitianBasis) -> np.ndarray:
    """Coefficients c_a = Tr[F_a Q] / dim, so Q = sum_a c_a F_a.

    Returns a complex vector; the coefficients are real exactly when Q is
    Hermitian.
    """
    if matrix.shape != (basis.dim, basis.dim):
        raise ValueError(
            f"matrix shape {matrix.shape} does not match basis dimension {basis.dim}"
        )
    return np.einsum("aij,ji->a", basis.elements, matrix) / basis.dim


def reconstruct(coeffs: np.ndarray, basis: HermitianBasis) -> np.ndarray:
    """Inverse of expand: sum_a c_a F_a."""
    if coeffs.shape != (basis.dim**2,):
        raise ValueError(
            f"coefficient vector has shape {coeffs.shape}, expected ({basis.dim**2},)"
        )
    return np.einsum("a,aij->ij", coeffs, basis.elements)
