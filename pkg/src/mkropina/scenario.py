"""Scenario documents: loading, eager validation, and command orchestration.

A scenario is a single JSON object naming the algebra (preset or sparse
structure constants), the reductive split, the two inner products, the
m-Kropina data (X and m), explicit flags and/or a seeded scan request, and
tolerances.  ``load_scenario`` validates everything up front so that the
computation commands never meet malformed data.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass

import numpy as np

from . import reductivity
from .curvature import CurvatureBackend
from .errors import MKropinaError, ScenarioError
from .flags import (
    Flag,
    flag_curvature_biinv,
    flag_curvature_general,
    flag_curvature_natred,
    flag_curvature_thm31,
    orthonormalize_flag,
)
from .lie_algebra import (
    CheckResult,
    InnerProductPair,
    LieAlgebraData,
    ReductiveDecomposition,
    build_inner_product_pair,
    check_ad_invariance,
    check_bi_invariance,
    check_jacobi,
    from_sparse,
    preset,
)
from .metric import MKropinaMetric, check_flag_admissible
from .sampling import (
    SCAN_MARGIN,
    admissible_pole,
    fd_margin,
    orthonormal_admissible_flag,
    unit_vector,
)
from .tensors import (
    TensorEvalContext,
    g_closed,
    g_fd_oracle,
    orthonormal_identity_residuals,
)

METHODS = ("general", "thm31", "natred", "biinv")

COMMANDS = ("check", "curvature", "scan", "verify")


@dataclass(frozen=True)
class FlagSpec:
    flag_id: str
    y: np.ndarray
    u: np.ndarray


@dataclass(frozen=True)
class ScanSpec:
    count: int = 10
    seed: int = 2024
    margin: float = SCAN_MARGIN


@dataclass(frozen=True)
class Tolerances:
    closed_form: float = 1e-8
    fd_oracle: float = 1e-6


@dataclass(frozen=True)
class Scenario:
    name: str
    alg: LieAlgebraData
    dec: ReductiveDecomposition
    pair: InnerProductPair
    met: MKropinaMetric
    sigma: int = -1
    flags: tuple[FlagSpec, ...] = ()
    scan: ScanSpec | None = None
    tolerances: Tolerances = Tolerances()

    def with_sigma(self, sigma: int) -> "Scenario":
        if sigma not in (-1, 1):
            raise ScenarioError("sign_convention must be +1 or -1")
        return dataclasses.replace(self, sigma=sigma)


def _as_matrix(raw, n: int, what: str) -> np.ndarray:
    try:
        mat = np.array(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"{what} is not a numeric matrix: {exc}") from None
    if mat.shape != (n, n):
        raise ScenarioError(f"{what} must be {n}x{n}, got shape {mat.shape}")
    return mat


def _as_vector(raw, n: int, what: str) -> np.ndarray:
    try:
        vec = np.array(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"{what} is not a numeric vector: {exc}") from None
    if vec.shape != (n,):
        raise ScenarioError(f"{what} must have length {n}, got shape {vec.shape}")
    return vec


def _build_algebra(raw) -> LieAlgebraData:
    if isinstance(raw, str):
        try:
            return preset(raw)
        except MKropinaError as exc:
            raise ScenarioError(str(exc)) from None
    if isinstance(raw, dict):
        if "dim" not in raw or "brackets" not in raw:
            raise ScenarioError("explicit algebra needs 'dim' and 'brackets'")
        try:
            return from_sparse(
                int(raw["dim"]), raw["brackets"], raw.get("labels")
            )
        except MKropinaError as exc:
            raise ScenarioError(f"bad structure constants: {exc}") from None
    raise ScenarioError("algebra must be a preset name or an explicit object")


def load_scenario(text: str) -> Scenario:
    """Parse and eagerly validate a scenario document; raises ScenarioError."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ScenarioError("scenario must be a JSON object")
    unknown = set(doc) - {
        "name",
        "algebra",
        "h_indices",
        "gram0",
        "gram_m",
        "x_vec",
        "m_exponent",
        "sign_convention",
        "relax_norm_bound",
        "flags",
        "scan",
        "tolerances",
    }
    if unknown:
        raise ScenarioError(f"unknown scenario fields: {sorted(unknown)}")
    if "algebra" not in doc:
        raise ScenarioError("scenario requires an 'algebra' field")

    alg = _build_algebra(doc["algebra"])
    n = alg.dim
    jacobi = check_jacobi(alg)
    if not jacobi.passed:
        raise ScenarioError(
            f"Jacobi identity fails (residual {jacobi.residual:.3e} "
            f"at {jacobi.witness})"
        )

    try:
        dec = ReductiveDecomposition(n, tuple(doc.get("h_indices", ())))
    except MKropinaError as exc:
        raise ScenarioError(f"malformed decomposition: {exc}") from None
    ad = check_ad_invariance(alg, dec)
    if not ad.passed:
        raise ScenarioError(
            f"decomposition is not ad(h)-invariant (residual {ad.residual:.3e} "
            f"at {ad.witness})"
        )

    gram0 = (
        _as_matrix(doc["gram0"], n, "gram0") if "gram0" in doc else np.eye(n)
    )
    m_idx = list(dec.m_indices)
    gram_m = (
        _as_matrix(doc["gram_m"], len(m_idx), "gram_m")
        if "gram_m" in doc
        else None
    )
    try:
        pair = build_inner_product_pair(alg, dec, gram0, gram_m)
    except MKropinaError as exc:
        raise ScenarioError(str(exc)) from None

    if "x_vec" not in doc:
        raise ScenarioError("scenario requires an 'x_vec' field")
    if "m_exponent" not in doc:
        raise ScenarioError("scenario requires an 'm_exponent' field")
    x_vec = _as_vector(doc["x_vec"], n, "x_vec")
    try:
        met = MKropinaMetric(
            m_exp=float(doc["m_exponent"]),
            x_vec=x_vec,
            gram=pair.gram,
            m_indices=dec.m_indices,
            relax_norm_bound=bool(doc.get("relax_norm_bound", False)),
        )
    except MKropinaError as exc:
        raise ScenarioError(str(exc)) from None

    sigma = int(doc.get("sign_convention", -1))
    if sigma not in (-1, 1):
        raise ScenarioError("sign_convention must be +1 or -1")

    flags = []
    for i, raw in enumerate(doc.get("flags", ())):
        if not isinstance(raw, dict) or "Y" not in raw or "U" not in raw:
            raise ScenarioError(f"flag #{i} must be an object with 'Y' and 'U'")
        flag_id = str(raw.get("id", f"flag_{i}"))
        if "," in flag_id:
            raise ScenarioError(f"flag id {flag_id!r} must not contain commas")
        flags.append(
            FlagSpec(
                flag_id=flag_id,
                y=_as_vector(raw["Y"], n, f"flag {flag_id} Y"),
                u=_as_vector(raw["U"], n, f"flag {flag_id} U"),
            )
        )

    scan = None
    if "scan" in doc:
        raw = doc["scan"]
        if not isinstance(raw, dict) or "count" not in raw or "seed" not in raw:
            raise ScenarioError("scan must be an object with 'count' and 'seed'")
        scan = ScanSpec(
            count=int(raw["count"]),
            seed=int(raw["seed"]),
            margin=float(raw.get("margin", SCAN_MARGIN)),
        )

    tol_raw = doc.get("tolerances", {})
    if not isinstance(tol_raw, dict):
        raise ScenarioError("tolerances must be an object")
    tolerances = Tolerances(
        closed_form=float(tol_raw.get("closed_form", 1e-8)),
        fd_oracle=float(tol_raw.get("fd_oracle", 1e-6)),
    )

    return Scenario(
        name=str(doc.get("name", "scenario")),
        alg=alg,
        dec=dec,
        pair=pair,
        met=met,
        sigma=sigma,
        flags=tuple(flags),
        scan=scan,
        tolerances=tolerances,
    )


def load_scenario_file(path) -> Scenario:
    with open(path, "r", encoding="utf-8") as handle:
        return load_scenario(handle.read())


@dataclass(frozen=True)
class ReportRow:
    """Per-flag computation record; field names are the report schema."""

    flag_id: str
    admissible: bool
    K_general: float | None = None
    K_thm31: float | None = None
    K_natred: float | None = None
    K_biinv: float | None = None
    g_YY: float | None = None
    g_UU: float | None = None
    g_UY: float | None = None
    eqn_n: float | None = None
    max_residual: float | None = None


def _row_for_flag(scn: Scenario, flag_id: str, y, u, methods) -> ReportRow:
    adm = check_flag_admissible(scn.met, y, u)
    if not adm.admissible:
        return ReportRow(flag_id=flag_id, admissible=False)
    flag = orthonormalize_flag(scn.pair.gram, y, u)
    ctx = TensorEvalContext.create(scn.met, flag.y)
    g_yy = g_closed(ctx, flag.y, flag.y)
    g_uu = g_closed(ctx, flag.u, flag.u)
    g_uy = g_closed(ctx, flag.u, flag.y)
    values: dict[str, float] = {}
    if "general" in methods:
        backend = CurvatureBackend(kind="puttmann", sigma=scn.sigma)
        values["general"] = flag_curvature_general(
            scn.met, scn.pair, backend, flag
        ).k
    if "thm31" in methods:
        values["thm31"] = flag_curvature_thm31(
            scn.met, scn.pair, flag, sigma=scn.sigma
        ).k
    if "natred" in methods:
        values["natred"] = flag_curvature_natred(scn.met, scn.pair, flag).k
    if "biinv" in methods:
        values["biinv"] = flag_curvature_biinv(scn.met, scn.pair, flag).k
    spread = max(values.values()) - min(values.values()) if len(values) > 1 else 0.0
    return ReportRow(
        flag_id=flag_id,
        admissible=True,
        K_general=values.get("general"),
        K_thm31=values.get("thm31"),
        K_natred=values.get("natred"),
        K_biinv=values.get("biinv"),
        g_YY=g_yy,
        g_UU=g_uu,
        g_UY=g_uy,
        eqn_n=g_yy * g_uu - g_uy * g_uy,
        max_residual=spread,
    )


def _validate_methods(methods) -> tuple[str, ...]:
    methods = tuple(methods) if methods else METHODS
    for name in methods:
        if name not in METHODS:
            raise ScenarioError(
                f"unknown method {name!r}; choose from {', '.join(METHODS)}"
            )
    return methods


def run_curvature(scn: Scenario, methods=None) -> list[ReportRow]:
    """One report row per explicit flag, in input order."""
    methods = _validate_methods(methods)
    return [
        _row_for_flag(scn, spec.flag_id, spec.y, spec.u, methods)
        for spec in scn.flags
    ]


def run_scan(
    scn: Scenario,
    count: int | None = None,
    seed: int | None = None,
    methods=None,
) -> list[ReportRow]:
    """Rows for seeded random orthonormal admissible flags."""
    methods = _validate_methods(methods)
    spec = scn.scan or ScanSpec()
    count = spec.count if count is None else count
    seed = spec.seed if seed is None else seed
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(count):
        y, u = orthonormal_admissible_flag(rng, scn.met, spec.margin)
        rows.append(_row_for_flag(scn, f"scan_{i:03d}", y, u, methods))
    return rows


def _check_dict(result: CheckResult) -> dict:
    out = {"passed": result.passed, "residual": result.residual}
    if result.witness is not None:
        out["witness"] = result.witness
    if result.note:
        out["note"] = result.note
    return out


def run_check(scn: Scenario) -> dict:
    """Structural report plus the natural-reductivity verdicts."""
    report = reductivity.natural_reductivity_report(scn.met, scn.pair)
    return {
        "scenario": scn.name,
        "structure": {
            "jacobi": _check_dict(check_jacobi(scn.alg)),
            "ad_invariance": _check_dict(check_ad_invariance(scn.alg, scn.dec)),
            "gram0_bi_invariance": _check_dict(
                check_bi_invariance(scn.alg, scn.pair.gram0)
            ),
        },
        "metric": {
            "m_exponent": scn.met.m_exp,
            "norm_of_x": scn.met.b_norm,
            "warnings": list(scn.met.warnings),
        },
        "reductivity": {
            "riemannian_natred": _check_dict(report.riemannian_natred),
            "latifi_natred": _check_dict(report.latifi_natred),
            "parallel_condition": _check_dict(report.parallel_condition),
            "equivalence_consistent": report.equivalence_consistent,
        },
    }


@dataclass(frozen=True)
class VerifyCheck:
    check: str
    max_residual: float
    tolerance: float
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class VerifyReport:
    checks: tuple[VerifyCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _applicable_methods(scn: Scenario) -> tuple[str, ...]:
    """Methods whose hypotheses hold, hence must agree with the general route."""
    methods = ["general"]
    parallel = reductivity.check_parallel_condition(scn.met, scn.alg, scn.dec)
    if not parallel.passed:
        return tuple(methods)
    endo_is_identity = (
        float(np.max(np.abs(scn.pair.endo - np.eye(scn.alg.dim)))) <= 1e-12
    )
    if endo_is_identity:
        methods.append("thm31")
    if reductivity.check_riemannian_natred(
        scn.alg, scn.dec, scn.pair.gram
    ).passed:
        methods.append("natred")
    if not scn.dec.h_indices and check_bi_invariance(scn.alg, scn.pair.gram).passed:
        methods.append("biinv")
    return tuple(methods)


def run_verify(
    scn: Scenario,
    tolerance: float | None = None,
    oracle_samples: int = 40,
    flag_samples: int = 25,
) -> VerifyReport:
    """Oracle cross-checks: closed form vs finite differences, method agreement,
    and the orthonormal-flag identity suite."""
    tol_oracle = tolerance if tolerance is not None else scn.tolerances.fd_oracle
    tol_closed = tolerance if tolerance is not None else scn.tolerances.closed_form
    seed = scn.scan.seed if scn.scan else 2024
    rng = np.random.default_rng(seed)
    met = scn.met
    margin = fd_margin(met)

    worst_oracle = 0.0
    for _ in range(oracle_samples):
        y = admissible_pole(rng, met, margin)
        u = unit_vector(rng, met.gram, met.m_indices)
        v = unit_vector(rng, met.gram, met.m_indices)
        ctx = TensorEvalContext.create(met, y)
        closed = g_closed(ctx, u, v)
        oracle = g_fd_oracle(met, y, u, v)
        worst_oracle = max(worst_oracle, abs(closed - oracle) / (1.0 + abs(closed)))

    methods = _applicable_methods(scn)
    worst_methods = 0.0
    worst_identity = 0.0
    for _ in range(flag_samples):
        y, u = orthonormal_admissible_flag(rng, met, margin)
        row = _row_for_flag(scn, "verify", y, u, methods)
        if row.max_residual is not None:
            worst_methods = max(worst_methods, row.max_residual)
        ctx = TensorEvalContext.create(met, y)
        worst_identity = max(
            worst_identity, orthonormal_identity_residuals(ctx, u).max_residual
        )

    checks = (
        VerifyCheck(
            check="g_oracle",
            max_residual=worst_oracle,
            tolerance=tol_oracle,
            passed=worst_oracle <= tol_oracle,
            detail=f"{oracle_samples} seeded samples, seed {seed}",
        ),
        VerifyCheck(
            check="method_agreement",
            max_residual=worst_methods,
            tolerance=tol_closed,
            passed=worst_methods <= tol_closed,
            detail="methods: " + ",".join(methods),
        ),
        VerifyCheck(
            check="identity_suite",
            max_residual=worst_identity,
            tolerance=tol_closed,
            passed=worst_identity <= tol_closed,
            detail=f"{flag_samples} orthonormal flags",
        ),
    )
    return VerifyReport(checks=checks)


def run_command(scn: Scenario, command: str, **kwargs):
    """Dispatch one of: check, curvature, scan, verify."""
    if command == "check":
        return run_check(scn)
    if command == "curvature":
        return run_curvature(scn, methods=kwargs.get("methods"))
    if command == "scan":
        return run_scan(
            scn,
            count=kwargs.get("count"),
            seed=kwargs.get("seed"),
            methods=kwargs.get("methods"),
        )
    if command == "verify":
        return run_verify(scn, tolerance=kwargs.get("tolerance"))
    raise ScenarioError(f"unknown command {command!r}; choose from {COMMANDS}")
