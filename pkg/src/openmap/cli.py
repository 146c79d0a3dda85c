"""Command-line surface: build, analyze, invert, demo, domain.

Exit codes: 0 success, 1 oracle/assertion failure, 2 input error,
3 precondition failure. Matrices travel as {"rows": [[[re, im], ...]]};
sparse mean and correlation tables as [mu, nu, value] triples. The default
tolerance is 1e-10, overridable by --tol or the OPENMAP_TOL environment
variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .analysis import (
    SingularMapError,
    choi_analysis,
    dynamics_realizability,
    invert,
    invertibility,
)
from .domain import DomainQuery, compatible, domain_shrinkage_demo
from .mapgen import (
    FixedCorrelationParameters,
    FixedMeanParameters,
    canonical_joint_basis,
    detect_parameters,
    fixed_correlation_map,
    fixed_mean_value_map,
)
from .states import CorrelationTable, DensityMatrix, MeanValueVector
from .superop import AffineMap, SuperOperator, transfer_matrix
from .twoqubit import (
    DisconnectionTranscript,
    ScenarioReport,
    TwoQubitScenario,
    disconnection_demo,
    reproduce_fixed_corr,
    reproduce_fixed_mean,
)

EXIT_OK = 0
EXIT_ORACLE = 1
EXIT_INPUT = 2
EXIT_PRECONDITION = 3

DEFAULT_SEED = 42
DEFAULT_TOLERANCE = 1e-10


class CliInputError(Exception):
    pass


class CliPreconditionError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    seed: int = DEFAULT_SEED
    tolerance: float = DEFAULT_TOLERANCE
    out: Path | None = None


def default_tolerance() -> float:
    raw = os.environ.get("OPENMAP_TOL")
    if raw is None:
        return DEFAULT_TOLERANCE
    try:
        return float(raw)
    except ValueError as exc:
        raise CliInputError(f"OPENMAP_TOL is not a number: {raw!r}") from exc


def matrix_to_json(matrix) -> dict:
    m = np.asarray(matrix, dtype=complex)
    return {"rows": [[[float(z.real), float(z.imag)] for z in row] for row in m]}


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict) or "rows" not in obj:
        raise CliInputError("matrix JSON must be an object with a 'rows' field")
    rows = obj["rows"]
    if not isinstance(rows, list) or not rows:
        raise CliInputError("matrix 'rows' must be a nonempty list")
    width = None
    out = []
    for row in rows:
        if not isinstance(row, list):
            raise CliInputError("matrix rows must be lists")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise CliInputError("matrix rows must all have the same length")
        line = []
        for entry in row:
            if not (isinstance(entry, list) and len(entry) == 2):
                raise CliInputError("matrix entries must be [re, im] pairs")
            re, im = entry
            if not all(isinstance(x, (int, float)) for x in (re, im)):
                raise CliInputError("matrix entries must be [re, im] number pairs")
            line.append(complex(re, im))
        out.append(line)
    return np.array(out, dtype=complex)


def affine_map_to_json(m: AffineMap, extra: dict | None = None) -> dict:
    doc = {
        "kind": m.kind,
        "dim": m.dim,
        "homogeneous": matrix_to_json(m.homogeneous.rep),
        "offset": matrix_to_json(m.offset),
    }
    if extra:
        doc.update(extra)
    return doc


def affine_map_from_json(obj) -> AffineMap:
    if not isinstance(obj, dict):
        raise CliInputError("map JSON must be an object")
    for key in ("kind", "dim", "homogeneous", "offset"):
        if key not in obj:
            raise CliInputError(f"map JSON is missing the {key!r} field")
    dim = obj["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise CliInputError(f"map dim must be a positive integer, got {dim!r}")
    rep = matrix_from_json(obj["homogeneous"])
    offset = matrix_from_json(obj["offset"])
    try:
        return AffineMap(
            homogeneous=SuperOperator(dim=dim, rep=rep), offset=offset, kind=obj["kind"]
        )
    except ValueError as exc:
        raise CliInputError(str(exc)) from exc


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise CliInputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliInputError(f"{path} is not valid JSON: {exc}") from exc


def _triples(obj, what: str) -> list[tuple[int, int, float]]:
    if not isinstance(obj, list):
        raise CliInputError(f"{what} must be a list of [mu, nu, value] triples")
    out = []
    for item in obj:
        if not (isinstance(item, list) and len(item) == 3):
            raise CliInputError(f"{what} entries must be [mu, nu, value] triples")
        mu, nu, value = item
        if not (isinstance(mu, int) and isinstance(nu, int)):
            raise CliInputError(f"{what} indices must be integers")
        if not isinstance(value, (int, float)):
            raise CliInputError(f"{what} values must be numbers")
        out.append((mu, nu, float(value)))
    return out


def _dims_from_json(obj) -> tuple[int, int]:
    dims = obj.get("dims")
    if not (
        isinstance(dims, list)
        and len(dims) == 2
        and all(isinstance(d, int) and d >= 1 for d in dims)
    ):
        raise CliInputError("params 'dims' must be a pair of positive integers")
    return (dims[0], dims[1])


def mean_params_from_json(obj) -> FixedMeanParameters:
    dims = _dims_from_json(obj)
    triples = _triples(obj.get("means", []), "means")
    try:
        return FixedMeanParameters(
            dims=dims, fixed_means={(mu, nu): value for mu, nu, value in triples}
        )
    except ValueError as exc:
        raise CliInputError(str(exc)) from exc


def corr_params_from_json(obj) -> FixedCorrelationParameters:
    dims = _dims_from_json(obj)
    n, m = dims
    if "rho_r" not in obj:
        raise CliInputError("fixed-corr params need a 'rho_r' matrix")
    rho = matrix_from_json(obj["rho_r"])
    try:
        rho_r = DensityMatrix(dim=m, matrix=rho)
    except ValueError as exc:
        raise CliPreconditionError(f"rho_r is not a density matrix: {exc}") from exc
    gamma = np.zeros((n**2 - 1, m**2 - 1))
    specified = np.zeros((n**2 - 1, m**2 - 1), dtype=bool)
    for mu, nu, value in _triples(obj.get("gamma", []), "gamma"):
        if not (1 <= mu < n**2 and 1 <= nu < m**2):
            raise CliInputError(f"correlation index ({mu}, {nu}) out of range for dims {dims}")
        gamma[mu - 1, nu - 1] = value
        specified[mu - 1, nu - 1] = True
    try:
        return FixedCorrelationParameters(
            dims=dims, rho_r=rho_r, gamma=CorrelationTable(gamma=gamma, specified=specified)
        )
    except ValueError as exc:
        raise CliInputError(str(exc)) from exc


def _check_unitary_input(u: np.ndarray) -> None:
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise CliInputError(f"unitary must be square, got shape {u.shape}")
    dev = float(np.abs(u.conj().T @ u - np.eye(u.shape[0])).max())
    if dev > 1e-10:
        raise CliPreconditionError(f"matrix is not unitary: max |U^dag U - 1| = {dev:.3e}")


def _emit(doc: dict, out: Path | None) -> None:
    text = json.dumps(doc, indent=2)
    if out is None:
        print(text)
    else:
        out.write_text(text + "\n")


def _float_list(values) -> list[float]:
    return [float(x) for x in np.asarray(values).ravel()]


def _checks_json(checks) -> list[dict]:
    return [
        {"name": c.name, "deviation": c.deviation, "passed": c.passed} for c in checks
    ]


def scenario_report_json(report: ScenarioReport) -> dict:
    s = report.scenario
    return {
        "label": report.label,
        "scenario": {
            "gamma": s.gamma,
            "xi3": s.xi3,
            "corr13": s.corr13,
            "corr23": s.corr23,
            "mean_s2x3": s.mean_s2x3,
            "mean_s1x3": s.mean_s1x3,
        },
        "tolerance": report.tolerance,
        "checks": _checks_json(report.checks),
        "max_deviation": report.max_deviation,
        "ok": report.ok,
    }


def transcript_json(t: DisconnectionTranscript) -> dict:
    doc = {
        "gamma": t.gamma,
        "initial_means": _float_list(t.initial_means),
        "forward_means": _float_list(t.forward_means),
        "evolved_mean_s2x3": t.evolved_mean_s2x3,
        "evolved_mean_s1x3": t.evolved_mean_s1x3,
        "backward_offset": matrix_to_json(t.backward_offset),
        "returned_means": _float_list(t.returned_means),
        "round_trip_deviation": t.round_trip_deviation,
        "checks": _checks_json(t.checks),
        "ok": t.ok,
    }
    if t.contrast is not None:
        doc["contrast"] = {
            "initial_means": _float_list(t.contrast.initial_means),
            "backward_offset": matrix_to_json(t.contrast.backward_offset),
            "offset_difference": t.contrast.offset_difference,
        }
    return doc


def cmd_build(args) -> int:
    u = matrix_from_json(_load_json(args.unitary))
    _check_unitary_input(u)
    params_doc = _load_json(args.params)
    if args.kind == "fixed-mean":
        params = mean_params_from_json(params_doc)
        builder = fixed_mean_value_map
    else:
        params = corr_params_from_json(params_doc)
        builder = fixed_correlation_map
    n, m = params.dims
    if u.shape != (n * m, n * m):
        raise CliInputError(
            f"unitary shape {u.shape} does not match params dims {params.dims}"
        )
    basis = canonical_joint_basis(params.dims)
    mapped = builder(u, params, basis=basis)
    report = detect_parameters(transfer_matrix(u, basis))
    extra = {
        "detected_parameters": {
            "fixed_mean": sorted(report.fixed_mean_indices),
            "environment": sorted(report.environment_mean_indices),
            "correlation": sorted(report.correlation_indices),
        }
    }
    _emit(affine_map_to_json(mapped, extra), args.out)
    return EXIT_OK


def cmd_analyze(args) -> int:
    m = affine_map_from_json(_load_json(args.map))
    try:
        inv_report = invertibility(m)
    except ValueError as exc:
        raise CliPreconditionError(str(exc)) from exc
    cp_report = choi_analysis(m.homogeneous)
    realizability = dynamics_realizability(m)
    doc = {
        "invertible": inv_report.invertible,
        "kernel_dimension": inv_report.kernel_dimension,
        "smallest_singular_value": inv_report.smallest_singular_value,
        "basis_image_rank": inv_report.basis_image_rank,
        "mean_map_kernel_dimension": inv_report.mean_map_kernel_dimension,
        "choi_eigenvalues": _float_list(cp_report.choi_eigenvalues),
        "is_cp": cp_report.is_cp,
        "is_tp": cp_report.is_tp,
        "is_unital": cp_report.is_unital,
        "choi_rank": cp_report.choi_rank,
        "realizability": realizability.verdict,
        "realizability_detail": {
            "is_hermiticity_preserving": realizability.is_hermiticity_preserving,
            "is_tp": realizability.is_tp,
            "is_cp": realizability.is_cp,
            "is_unital": realizability.is_unital,
            "is_invertible": realizability.is_invertible,
            "choi_rank": realizability.choi_rank,
            "min_choi_eigenvalue": realizability.min_choi_eigenvalue,
        },
    }
    _emit(doc, args.out)
    return EXIT_OK


def cmd_invert(args) -> int:
    m = affine_map_from_json(_load_json(args.map))
    try:
        inverse = invert(m)
    except SingularMapError as exc:
        raise CliPreconditionError(str(exc)) from exc
    except ValueError as exc:
        raise CliPreconditionError(str(exc)) from exc
    _emit(affine_map_to_json(inverse), args.out)
    return EXIT_OK


def _parse_vector(text: str, what: str) -> np.ndarray:
    try:
        return np.array([float(p) for p in text.split(",")])
    except ValueError as exc:
        raise CliInputError(f"{what} must be comma-separated numbers, got {text!r}") from exc


def cmd_demo(args) -> int:
    tol = args.tol if args.tol is not None else default_tolerance()
    if args.name == "fixed-mean":
        scenario = TwoQubitScenario(
            gamma=args.gamma,
            mean_s2x3=args.mean_s2x3,
            mean_s1x3=args.mean_s1x3,
        )
        report = reproduce_fixed_mean(scenario, tolerance=tol, seed=args.seed)
        _emit(scenario_report_json(report), args.out)
        if not report.ok:
            print(f"oracle mismatch: {', '.join(report.failures())}", file=sys.stderr)
            return EXIT_ORACLE
        return EXIT_OK
    if args.name == "fixed-corr":
        try:
            scenario = TwoQubitScenario(
                gamma=args.gamma, xi3=args.xi3, corr13=args.corr13, corr23=args.corr23
            )
        except ValueError as exc:
            raise CliPreconditionError(str(exc)) from exc
        report = reproduce_fixed_corr(scenario, tolerance=tol, seed=args.seed)
        det = np.cos(args.gamma) ** 2 + args.xi3**2 * np.sin(args.gamma) ** 2
        doc = scenario_report_json(report)
        doc["determinant"] = float(det)
        doc["invertible"] = bool(det > 1e-12)
        _emit(doc, args.out)
        if not report.ok:
            print(f"oracle mismatch: {', '.join(report.failures())}", file=sys.stderr)
            return EXIT_ORACLE
        return EXIT_OK
    if args.name == "disconnect":
        bloch = _parse_vector(args.bloch, "--bloch")
        contrast = _parse_vector(args.contrast, "--contrast") if args.contrast else None
        try:
            transcript = disconnection_demo(args.gamma, bloch, contrast, tolerance=tol)
        except ValueError as exc:
            raise CliInputError(str(exc)) from exc
        _emit(transcript_json(transcript), args.out)
        if not transcript.ok:
            print(f"oracle mismatch: {', '.join(transcript.failures())}", file=sys.stderr)
            return EXIT_ORACLE
        return EXIT_OK
    # domain comparison over the sampled grid
    mean_params = FixedMeanParameters(
        dims=(2, 2), fixed_means={(2, 3): args.mean_s2x3, (1, 3): args.mean_s1x3}
    )
    try:
        rho_r = DensityMatrix(
            dim=2, matrix=np.array([[1 + args.xi3, 0], [0, 1 - args.xi3]], dtype=complex) / 2
        )
    except ValueError as exc:
        raise CliPreconditionError(str(exc)) from exc
    gamma = np.zeros((3, 3))
    gamma[0, 2] = args.corr13
    gamma[1, 2] = args.corr23
    corr_params = FixedCorrelationParameters(
        dims=(2, 2), rho_r=rho_r, gamma=CorrelationTable(gamma=gamma)
    )
    report = domain_shrinkage_demo(
        mean_params, corr_params, grid_points=args.grid, thorough=args.thorough, seed=args.seed
    )
    doc = {
        "dims": list(report.dims),
        "grid_points": report.grid_points,
        "thorough": report.thorough,
        "total": report.total,
        "mean_kind_count": report.mean_kind_count,
        "corr_kind_count": report.corr_kind_count,
        "mean_only_count": report.mean_only_count,
        "corr_only_count": report.corr_only_count,
        "mean_only_examples": [_float_list(row) for row in report.mean_only_examples()],
    }
    _emit(doc, args.out)
    if args.csv:
        lines = ["v1,v2,v3,mean_kind,corr_kind"]
        for row, a, b in zip(report.samples, report.mean_kind_ok, report.corr_kind_ok):
            lines.append(
                ",".join(repr(float(x)) for x in row) + f",{int(a)},{int(b)}"
            )
        Path(args.csv).write_text("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_domain(args) -> int:
    params_doc = _load_json(args.params)
    if args.kind == "fixed-mean":
        params = mean_params_from_json(params_doc)
        kind = "fixed-mean-value"
    else:
        params = corr_params_from_json(params_doc)
        kind = "fixed-correlation"
    v = _parse_vector(args.mean, "--mean")
    n = params.dims[0]
    try:
        query = DomainQuery(
            mean_vector=MeanValueVector(dim=n, components=v), parameters=params, kind=kind
        )
    except ValueError as exc:
        raise CliInputError(str(exc)) from exc
    result = compatible(query, thorough=args.thorough)
    doc = {
        "compatible": result.compatible,
        "min_eigenvalue": result.min_eigenvalue,
        "method": result.method,
        "iterations": result.iterations,
        "witness": None if result.witness is None else matrix_to_json(result.witness),
    }
    _emit(doc, args.out)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="openmap",
        description="Build, analyze, and invert affine subsystem maps from bipartite unitaries.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="build a map from a unitary and a params file")
    p_build.add_argument("--kind", choices=["fixed-mean", "fixed-corr"], required=True)
    p_build.add_argument("--unitary", required=True, help="MatrixJSON file")
    p_build.add_argument("--params", required=True, help="params JSON file")
    p_build.add_argument("--out", type=Path, default=None)
    p_build.set_defaults(func=cmd_build)

    p_analyze = sub.add_parser("analyze", help="invertibility + CP + realizability report")
    p_analyze.add_argument("map", help="AffineMap JSON file")
    p_analyze.add_argument("--out", type=Path, default=None)
    p_analyze.set_defaults(func=cmd_analyze)

    p_invert = sub.add_parser("invert", help="invert a map file")
    p_invert.add_argument("map", help="AffineMap JSON file")
    p_invert.add_argument("--out", type=Path, default=None)
    p_invert.set_defaults(func=cmd_invert)

    p_demo = sub.add_parser("demo", help="two-qubit scenarios with closed-form oracles")
    p_demo.add_argument("name", choices=["fixed-mean", "fixed-corr", "disconnect", "domain"])
    p_demo.add_argument("--gamma", type=float, default=np.pi / 3)
    p_demo.add_argument("--xi3", type=float, default=0.0)
    p_demo.add_argument("--corr13", type=float, default=0.0)
    p_demo.add_argument("--corr23", type=float, default=0.0)
    p_demo.add_argument("--mean-s2x3", type=float, default=0.0, dest="mean_s2x3")
    p_demo.add_argument("--mean-s1x3", type=float, default=0.0, dest="mean_s1x3")
    p_demo.add_argument("--bloch", default="1,0,0", help="initial means v1,v2,v3")
    p_demo.add_argument("--contrast", default=None, help="second initial means for disconnect")
    p_demo.add_argument("--grid", type=int, default=20, help="grid points per axis (domain)")
    p_demo.add_argument("--thorough", action="store_true", help="feasibility search (domain)")
    p_demo.add_argument("--csv", default=None, help="write the domain grid as CSV (domain)")
    p_demo.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_demo.add_argument("--tol", type=float, default=None)
    p_demo.add_argument("--out", type=Path, default=None)
    p_demo.set_defaults(func=cmd_demo)

    p_domain = sub.add_parser("domain", help="compatibility of one mean vector with params")
    p_domain.add_argument("--kind", choices=["fixed-mean", "fixed-corr"], required=True)
    p_domain.add_argument("--params", required=True, help="params JSON file")
    p_domain.add_argument("--mean", required=True, help="mean vector v1,v2,...")
    p_domain.add_argument("--thorough", action="store_true")
    p_domain.add_argument("--out", type=Path, default=None)
    p_domain.set_defaults(func=cmd_domain)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliInputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CliPreconditionError as exc:
        print(f"precondition failure: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
