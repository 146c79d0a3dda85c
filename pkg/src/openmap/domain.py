"""Compatibility domains: which system states fit the map parameters.

A map built from a joint unitary comes with parameters that are mean
values of the joint system. A mean-value vector for the system alone
belongs to the map's compatibility domain when there is a joint density
matrix carrying both: the vector as its system means and the parameters at
their fixed values. Membership is an existence question over the
unconstrained joint means.

The check is two-tier. The cheap tier tests positivity of the canonical
completion: unconstrained joint means are set to zero for fixed-mean-value
queries, and unconstrained correlations to zero (the product completion)
for fixed-correlation queries. That settles every example this package
ships. The thorough tier (flag-gated)
searches the free means by alternating projections: clip negative
eigenvalues, re-impose the fixed coordinates, repeat. It reports its
method and iteration count, and only hands back a witness that strictly
satisfies the constraints.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import JointBasis
from .mapgen import (
    FixedCorrelationParameters,
    FixedMeanParameters,
    canonical_joint_basis,
)
from .states import JointState, MeanValueVector, mean_vector, means_from_matrix

__all__ = [
    "DomainQuery",
    "CompatibilityResult",
    "ShrinkageReport",
    "PSD_TOL",
    "RESIDUAL_TOL",
    "MAX_ITERATIONS",
    "compatible",
    "domain_shrinkage_demo",
]

PSD_TOL = -1e-10
RESIDUAL_TOL = 1e-8
MAX_ITERATIONS = 500
_MEANS_TOL = 1e-12


@dataclass(frozen=True)
class DomainQuery:
    """A candidate system state paired with fixed map parameters."""

    mean_vector: MeanValueVector
    parameters: FixedMeanParameters | FixedCorrelationParameters
    kind: str

    def __post_init__(self) -> None:
        if self.kind not in ("fixed-mean-value", "fixed-correlation"):
            raise ValueError(f"unknown query kind {self.kind!r}")
        expected = (
            FixedMeanParameters if self.kind == "fixed-mean-value" else FixedCorrelationParameters
        )
        if not isinstance(self.parameters, expected):
            raise ValueError(
                f"{self.kind} query requires {expected.__name__}, got "
                f"{type(self.parameters).__name__}"
            )
        if self.mean_vector.dim != self.parameters.dims[0]:
            raise ValueError(
                f"mean vector dim {self.mean_vector.dim} does not match "
                f"parameter dims {self.parameters.dims}"
            )


@dataclass(frozen=True)
class CompatibilityResult:
    """Outcome of a membership check.

    witness is a joint density matrix that strictly carries the query
    (PSD to -1e-10, fixed means reproduced to 1e-12) or None; when the
    thorough search judges the query compatible from a small residual
    without reaching a strict iterate, compatible is True with witness
    None. min_eigenvalue always refers to the best completion found.
    """

    compatible: bool
    witness: np.ndarray | None
    min_eigenvalue: float
    method: str
    iterations: int


def _assemble(query: DomainQuery, basis: JointBasis) -> tuple[np.ndarray, np.ndarray]:
    """Mean table with fixed coordinates filled in, plus the fixed mask."""
    n, m = query.parameters.dims
    table = np.zeros((n**2, m**2))
    fixed = np.zeros((n**2, m**2), dtype=bool)
    table[0, 0] = 1.0
    fixed[0, 0] = True
    table[1:, 0] = query.mean_vector.components
    fixed[1:, 0] = True
    if query.kind == "fixed-mean-value":
        for (mu, nu), value in query.parameters.fixed_means.items():
            table[mu, nu] = value
            fixed[mu, nu] = True
    else:
        r = mean_vector(basis.basis_r, query.parameters.rho_r.matrix).components
        table[0, 1:] = r
        fixed[0, 1:] = True
        gamma = query.parameters.gamma.gamma
        spec_mask = query.parameters.gamma.specified
        v = query.mean_vector.components
        # unspecified correlations start at zero correlation (the product
        # completion), not zero mean value; they stay free for the search
        block = np.outer(v, r)
        block[spec_mask] += gamma[spec_mask]
        table[1:, 1:] = block
        fixed[1:, 1:] = spec_mask
    return table, fixed


def _min_eig(matrix: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(matrix).min())


def compatible(
    query: DomainQuery,
    thorough: bool = False,
    max_iterations: int = MAX_ITERATIONS,
    basis: JointBasis | None = None,
) -> CompatibilityResult:
    """Decide whether any joint density matrix carries the query.

    The zero completion is checked first. With thorough=True and free
    coordinates available, an alternating-projection search follows:
    project onto the positive cone by eigenvalue clipping, re-impose the
    fixed coordinates, stop when the re-imposed iterate is positive to
    -1e-10 or after max_iterations, then judge residual negativity above
    1e-8 as incompatible.
    """
    if basis is None:
        basis = canonical_joint_basis(query.parameters.dims)
    table, fixed = _assemble(query, basis)
    x = JointState(basis=basis, means=table).to_matrix()
    low = _min_eig(x)
    if low >= PSD_TOL:
        return CompatibilityResult(
            compatible=True, witness=x, min_eigenvalue=low, method="zero-completion", iterations=0
        )
    if not thorough or bool(fixed.all()):
        return CompatibilityResult(
            compatible=False, witness=None, min_eigenvalue=low, method="zero-completion", iterations=0
        )

    iterations = 0
    for iterations in range(1, max_iterations + 1):
        w, vecs = np.linalg.eigh(x)
        x = (vecs * np.clip(w, 0.0, None)) @ vecs.conj().T
        t = means_from_matrix(basis, x)
        t[fixed] = table[fixed]
        x = JointState(basis=basis, means=t).to_matrix()
        low = _min_eig(x)
        if low >= PSD_TOL:
            break

    witness = None
    if low >= PSD_TOL:
        reproduced = means_from_matrix(basis, x)
        if np.abs(reproduced[fixed] - table[fixed]).max() <= _MEANS_TOL:
            witness = x
    return CompatibilityResult(
        compatible=bool(low >= -RESIDUAL_TOL),
        witness=witness,
        min_eigenvalue=low,
        method="feasibility-search",
        iterations=iterations,
    )


@dataclass(frozen=True)
class ShrinkageReport:
    """Side-by-side domain membership over a sampled set of mean vectors."""

    dims: tuple[int, int]
    grid_points: int
    thorough: bool
    samples: np.ndarray
    mean_kind_ok: np.ndarray
    corr_kind_ok: np.ndarray

    @property
    def total(self) -> int:
        return self.samples.shape[0]

    @property
    def mean_kind_count(self) -> int:
        return int(np.count_nonzero(self.mean_kind_ok))

    @property
    def corr_kind_count(self) -> int:
        return int(np.count_nonzero(self.corr_kind_ok))

    @property
    def mean_only_count(self) -> int:
        return int(np.count_nonzero(self.mean_kind_ok & ~self.corr_kind_ok))

    @property
    def corr_only_count(self) -> int:
        return int(np.count_nonzero(self.corr_kind_ok & ~self.mean_kind_ok))

    def mean_only_examples(self, limit: int = 5) -> np.ndarray:
        idx = np.nonzero(self.mean_kind_ok & ~self.corr_kind_ok)[0][:limit]
        return self.samples[idx]


def domain_shrinkage_demo(
    mean_params: FixedMeanParameters,
    corr_params: FixedCorrelationParameters,
    grid_points: int = 20,
    thorough: bool = False,
    seed: int = 42,
) -> ShrinkageReport:
    """Sample mean vectors and test membership under both map kinds.

    For a qubit system side the samples are a grid_points^3 cube grid over
    [-1, 1]^3; for larger N, grid_points^3 seeded uniform draws from the
    ball of radius sqrt(N-1) that contains all valid mean vectors.
    """
    if mean_params.dims != corr_params.dims:
        raise ValueError(
            f"parameter dims differ: {mean_params.dims} vs {corr_params.dims}"
        )
    n = mean_params.dims[0]
    basis = canonical_joint_basis(mean_params.dims)
    if n == 2:
        axis = np.linspace(-1.0, 1.0, grid_points)
        samples = np.array([(a, b, c) for a in axis for b in axis for c in axis])
    else:
        rng = np.random.default_rng(seed)
        count = grid_points**3
        raw = rng.normal(size=(count, n**2 - 1))
        raw /= np.linalg.norm(raw, axis=1, keepdims=True)
        radii = rng.uniform(0.0, 1.0, size=count) ** (1.0 / (n**2 - 1))
        samples = raw * radii[:, None] * np.sqrt(n - 1.0)

    mean_ok = np.zeros(samples.shape[0], dtype=bool)
    corr_ok = np.zeros(samples.shape[0], dtype=bool)
    for i, row in enumerate(samples):
        v = MeanValueVector(dim=n, components=row)
        mean_ok[i] = compatible(
            DomainQuery(v, mean_params, "fixed-mean-value"), thorough=thorough, basis=basis
        ).compatible
        corr_ok[i] = compatible(
            DomainQuery(v, corr_params, "fixed-correlation"), thorough=thorough, basis=basis
        ).compatible
    return ShrinkageReport(
        dims=mean_params.dims,
        grid_points=grid_points,
        thorough=thorough,
        samples=samples,
        mean_kind_ok=mean_ok,
        corr_kind_ok=corr_ok,
    )
