"""Subsystem maps generated by a joint unitary.

Two affine families act on the N-dimensional system after the joint system
evolves by a unitary U. The fixed-mean-value map holds a chosen set of
joint mean values <F_{mu nu}> (nu >= 1) fixed:

    Q -> Tr_R[U (Q (x) 1/M) U^dag]
         + (1/(N M)) sum <F_{mu nu}> Tr_R[U F_{mu nu} U^dag] * Tr[Q].

The fixed-correlation map holds the partner state and the correlations
Gamma_{mu nu} = <F_{mu nu}> - <F_{mu 0}><F_{0 nu}> fixed:

    Q -> Tr_R[U (Q (x) rho_R) U^dag]
         + (1/(N M)) sum Gamma_{mu nu} Tr_R[U F_{mu nu} U^dag] * Tr[Q].

Both offsets are traceless and both homogeneous parts are trace-preserving,
so each family maps unit-trace matrices to unit-trace matrices.

A mean value enters the subsystem dynamics at all only if some row
t[(alpha 0), (mu nu)] of the transfer matrix is nonzero; those index pairs
are the map's parameters, and `detect_parameters` reads them off. Mean
values outside the parameter set multiply a partial trace that is
identically zero, so supplying them changes nothing.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from types import MappingProxyType

import numpy as np

from .basis import JointBasis, build_basis, joint_basis
from .states import CorrelationTable, DensityMatrix, JointState, MeanValueVector, partial_trace_r
from .superop import (
    AffineMap,
    SuperOperator,
    TransferMatrix,
    from_action,
    is_hermiticity_preserving,
    transfer_matrix,
    vec,
)

__all__ = [
    "FixedMeanParameters",
    "FixedCorrelationParameters",
    "ParameterReport",
    "PARAMETER_TOL",
    "canonical_joint_basis",
    "conjugated_reduced_basis",
    "fixed_mean_value_map",
    "fixed_correlation_map",
    "unitalize",
    "heisenberg_means",
    "detect_parameters",
]

PARAMETER_TOL = 1e-12


@dataclass(frozen=True)
class FixedMeanParameters:
    """Fixed joint mean values for the fixed-mean-value family.

    fixed_means maps index pairs (mu, nu) with 0 <= mu < N^2 and
    1 <= nu < M^2 to real values; pairs not listed are fixed at zero.
    """

    dims: tuple[int, int]
    fixed_means: Mapping[tuple[int, int], float]

    def __post_init__(self) -> None:
        n, m = self.dims
        if n < 1 or m < 1:
            raise ValueError(f"dims must be positive, got {self.dims}")
        clean: dict[tuple[int, int], float] = {}
        for key, value in dict(self.fixed_means).items():
            mu, nu = key
            if not (0 <= mu < n**2 and 1 <= nu < m**2):
                raise ValueError(
                    f"mean index {key} out of range for dims {self.dims} (need nu >= 1)"
                )
            value = float(value)
            clean[(int(mu), int(nu))] = value
        object.__setattr__(self, "fixed_means", MappingProxyType(clean))


@dataclass(frozen=True)
class FixedCorrelationParameters:
    """Partner state and correlation table for the fixed-correlation family."""

    dims: tuple[int, int]
    rho_r: DensityMatrix
    gamma: CorrelationTable

    def __post_init__(self) -> None:
        n, m = self.dims
        if self.rho_r.dim != m:
            raise ValueError(
                f"partner state dim {self.rho_r.dim} does not match dims {self.dims}"
            )
        if not isinstance(self.gamma, CorrelationTable):
            object.__setattr__(self, "gamma", CorrelationTable(self.gamma))
        if self.gamma.gamma.shape != (n**2 - 1, m**2 - 1):
            raise ValueError(
                f"correlation table shape {self.gamma.gamma.shape} does not match dims {self.dims}"
            )


@dataclass(frozen=True)
class ParameterReport:
    """Index sets read off the transfer matrix at threshold 1e-12.

    fixed_mean_indices: pairs (mu, nu), nu >= 1, whose mean value enters the
    fixed-mean-value map. environment_mean_indices: the nu with (0, nu) a
    parameter (partner means entering). correlation_indices: the pairs with
    mu >= 1 (genuine correlations entering the fixed-correlation map).
    """

    dims: tuple[int, int]
    fixed_mean_indices: frozenset[tuple[int, int]]
    environment_mean_indices: frozenset[int]
    correlation_indices: frozenset[tuple[int, int]]


def canonical_joint_basis(dims: tuple[int, int]) -> JointBasis:
    return joint_basis(build_basis(dims[0]), build_basis(dims[1]))


def conjugated_reduced_basis(u: np.ndarray, basis: JointBasis) -> np.ndarray:
    """Table Tr_R[U F_{mu nu} U^dag], shape (N^2, M^2, N, N).

    Precompute this once when building several maps from the same unitary.
    """
    n, m = basis.dims
    d = n * m
    if u.shape != (d, d):
        raise ValueError(f"unitary shape {u.shape} does not match joint dimension {d}")
    conjugated = np.matmul(np.matmul(u, basis.flat_elements), u.conj().T)
    traced = np.einsum("aimjm->aij", conjugated.reshape(-1, n, m, n, m))
    return traced.reshape(n**2, m**2, n, n)


def _check_unitary(u: np.ndarray, d: int) -> None:
    if u.shape != (d, d):
        raise ValueError(f"unitary shape {u.shape} does not match joint dimension {d}")
    if np.abs(u.conj().T @ u - np.eye(d)).max() > 1e-10:
        raise ValueError("input matrix is not unitary")


def fixed_mean_value_map(
    u: np.ndarray,
    params: FixedMeanParameters,
    basis: JointBasis | None = None,
    reduced: np.ndarray | None = None,
) -> AffineMap:
    """Affine map with the partner thrown in maximally mixed.

    The homogeneous part Q -> Tr_R[U (Q (x) 1/M) U^dag] is unital and
    trace-preserving; the offset is the traceless sum over the fixed mean
    values. `reduced` may carry a precomputed conjugated_reduced_basis
    table.
    """
    n, m = params.dims
    _check_unitary(u, n * m)
    if basis is None:
        basis = canonical_joint_basis(params.dims)
    eye_r = np.eye(m, dtype=complex) / m
    dims = params.dims
    homogeneous = from_action(
        n, lambda q: partial_trace_r(u @ np.kron(q, eye_r) @ u.conj().T, dims)
    )
    offset = np.zeros((n, n), dtype=complex)
    for (mu, nu), value in params.fixed_means.items():
        if reduced is not None:
            term = reduced[mu, nu]
        else:
            f = basis.elements[mu, nu]
            term = partial_trace_r(u @ f @ u.conj().T, dims)
        offset += value * term
    offset /= n * m
    return AffineMap(homogeneous=homogeneous, offset=offset, kind="fixed-mean-value")


def fixed_correlation_map(
    u: np.ndarray,
    params: FixedCorrelationParameters,
    basis: JointBasis | None = None,
    reduced: np.ndarray | None = None,
) -> AffineMap:
    """Affine map with the partner thrown in at rho_R and correlations fixed."""
    n, m = params.dims
    _check_unitary(u, n * m)
    if basis is None:
        basis = canonical_joint_basis(params.dims)
    rho_r = params.rho_r.matrix
    dims = params.dims
    homogeneous = from_action(
        n, lambda q: partial_trace_r(u @ np.kron(q, rho_r) @ u.conj().T, dims)
    )
    offset = np.zeros((n, n), dtype=complex)
    gamma = params.gamma.gamma
    for mu, nu in zip(*np.nonzero(gamma)):
        if reduced is not None:
            term = reduced[mu + 1, nu + 1]
        else:
            f = basis.elements[mu + 1, nu + 1]
            term = partial_trace_r(u @ f @ u.conj().T, dims)
        offset += gamma[mu, nu] * term
    offset /= n * m
    return AffineMap(homogeneous=homogeneous, offset=offset, kind="fixed-correlation")


def unitalize(s: SuperOperator) -> SuperOperator:
    """Q -> s(Q) - s(1) Tr[Q]/N + 1 Tr[Q]/N; unital whenever s is TP.

    This is the standard unital companion of the fixed-correlation
    homogeneous part; on traceless matrices it agrees with s.
    """
    if not is_hermiticity_preserving(s):
        raise ValueError("unitalize expects a Hermiticity-preserving map")
    n = s.dim
    eye = np.eye(n, dtype=complex)
    correction = np.outer(vec(s(eye) - eye), vec(eye)) / n
    return SuperOperator(dim=n, rep=s.rep - correction)


def heisenberg_means(u: np.ndarray, state: JointState) -> MeanValueVector:
    """System mean values after the joint unitary, straight from the table.

    <F_{alpha 0}>' = sum_{mu nu} t[(alpha 0), (mu nu)] <F_{mu nu}>.
    """
    tm = transfer_matrix(u, state.basis)
    n = state.basis.basis_s.dim
    flat = state.means.reshape(-1)
    comps = np.array([tm.row(alpha, 0) @ flat for alpha in range(1, n**2)])
    return MeanValueVector(dim=n, components=comps)


def detect_parameters(tm: TransferMatrix) -> ParameterReport:
    """Read the parameter index sets off a transfer matrix.

    (mu, nu) with nu >= 1 is a parameter when any row (alpha 0), alpha >= 1,
    has |t[(alpha 0), (mu nu)]| > 1e-12. The (0 0) row is a delta row and
    never contributes.
    """
    n, m = tm.dims
    rows = np.stack([tm.row(alpha, 0) for alpha in range(1, n**2)])
    influence = np.abs(rows).max(axis=0).reshape(n**2, m**2)
    mean_idx = {
        (mu, nu)
        for mu in range(n**2)
        for nu in range(1, m**2)
        if influence[mu, nu] > PARAMETER_TOL
    }
    return ParameterReport(
        dims=tm.dims,
        fixed_mean_indices=frozenset(mean_idx),
        environment_mean_indices=frozenset(nu for mu, nu in mean_idx if mu == 0),
        correlation_indices=frozenset((mu, nu) for mu, nu in mean_idx if mu >= 1),
    )
