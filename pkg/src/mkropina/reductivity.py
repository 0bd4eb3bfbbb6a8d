"""Natural-reductivity criteria, the parallel condition, and their equivalence.

Two notions of naturally reductive are checked against each other:

* Riemannian: the trilinear condition
      <[x,y]_m, z> + <y, [x,z]_m> = 0   for all x, y, z in m.
  (The variant with the second slot bracketed, <x, [y,z]_m>, is also
  computed for audit; it evaluates to 2<[x,y],z> on any bi-invariant
  product and therefore cannot be the intended condition.)
* Finslerian (Latifi): for all nonzero Y in the cone and all z, u, v in m,
      g_Y([z,u]_m, v) + g_Y([z,v]_m, u) + 2 C_Y([z,y]_m, u, v) = 0,
  evaluated on seeded sample poles plus the admissible basis directions.

The parallel condition <X, [m,m]_m> = 0 (with [h, X] = 0) is the bridge:
whenever it holds, the two verdicts must agree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .lie_algebra import (
    CheckResult,
    InnerProductPair,
    LieAlgebraData,
    ReductiveDecomposition,
)
from .metric import MKropinaMetric
from .sampling import admissible_pole, fd_margin
from .tensors import TensorEvalContext, cartan, g_closed

RIEMANNIAN_TOL = 1e-10
LATIFI_TOL = 1e-7  # limited by the finite-difference Cartan evaluation
PARALLEL_TOL = 1e-10


def riemannian_natred_residuals(
    alg: LieAlgebraData, dec: ReductiveDecomposition, gram: np.ndarray
) -> tuple[float, float, tuple | None]:
    """(standard residual, second-slot-bracketed variant residual, worst triple)."""
    basis = [alg.basis_vector(i) for i in dec.m_indices]
    labels = [alg.labels[i] for i in dec.m_indices]
    proj = lambda v: dec.project(v, "m")
    worst = variant_worst = 0.0
    witness = None
    for i, x in enumerate(basis):
        for j, y in enumerate(basis):
            bxy = proj(alg.bracket(x, y))
            for k, z in enumerate(basis):
                standard = float(bxy @ gram @ z) + float(
                    y @ gram @ proj(alg.bracket(x, z))
                )
                variant = float(bxy @ gram @ z) + float(
                    x @ gram @ proj(alg.bracket(y, z))
                )
                variant_worst = max(variant_worst, abs(variant))
                if abs(standard) > worst:
                    worst = abs(standard)
                    witness = (labels[i], labels[j], labels[k])
    return worst, variant_worst, witness


def check_riemannian_natred(
    alg: LieAlgebraData,
    dec: ReductiveDecomposition,
    gram: np.ndarray,
    tol: float = RIEMANNIAN_TOL,
) -> CheckResult:
    """Standard trilinear natural-reductivity condition over all basis triples."""
    residual, variant, witness = riemannian_natred_residuals(alg, dec, gram)
    note = f"second-slot-bracketed variant residual {variant:.3e}"
    if residual <= tol:
        return CheckResult(True, residual, note=note)
    return CheckResult(False, residual, witness, note=note)


def check_parallel_condition(
    met: MKropinaMetric,
    alg: LieAlgebraData,
    dec: ReductiveDecomposition,
    tol: float = PARALLEL_TOL,
) -> CheckResult:
    """<X, [y, z]_m> = 0 for all basis pairs of m, and [h, X] = 0."""
    worst = 0.0
    witness = None
    for i in dec.m_indices:
        for j in dec.m_indices:
            bracket_m = dec.project(alg.structure[i, j], "m")
            value = abs(met.ip(met.x_vec, bracket_m))
            if value > worst:
                worst = value
                witness = (alg.labels[i], alg.labels[j])
    for h in dec.h_indices:
        value = float(
            np.max(np.abs(alg.bracket(alg.basis_vector(h), met.x_vec)))
        )
        if value > worst:
            worst = value
            witness = (alg.labels[h], "X")
    return CheckResult(worst <= tol, worst, None if worst <= tol else witness)


@dataclass(frozen=True)
class SampleSpec:
    """How many poles the Latifi check samples, and from where.

    ``margin`` is the absolute rejection threshold on beta(Y); None selects
    the finite-difference-safe default for the metric.
    """

    count: int = 16
    seed: int = 2024
    margin: float | None = None


def latifi_residual(
    met: MKropinaMetric,
    pair: InnerProductPair,
    y: np.ndarray,
    z: np.ndarray,
    u: np.ndarray,
    v: np.ndarray,
) -> float:
    """Value of the Latifi condition at one (Y; z, u, v).

    The Cartan contribution 2 C_Y([z,y]_m, u, v) is written as
    C_Y(w,u,v) + C_Y(w,v,u), which makes the expression exactly symmetric
    under swapping u and v.
    """
    alg, dec = pair.alg, pair.dec
    ctx = TensorEvalContext.create(met, y)
    proj = lambda vec: dec.project(vec, "m")
    w = proj(alg.bracket(z, y))
    return (
        g_closed(ctx, proj(alg.bracket(z, u)), v)
        + g_closed(ctx, proj(alg.bracket(z, v)), u)
        + cartan(met, y, w, u, v)
        + cartan(met, y, w, v, u)
    )


def check_latifi_natred(
    met: MKropinaMetric,
    pair: InnerProductPair,
    spec: SampleSpec | None = None,
    tol: float = LATIFI_TOL,
) -> CheckResult:
    """Latifi condition over all basis triples of m and sampled poles Y.

    The Cartan term is written as C_Y(w,u,v) + C_Y(w,v,u), which makes the
    evaluated expression exactly symmetric under swapping u and v.  Sampled
    poles come from a seeded rejection sampler; the admissible basis
    directions are always included.
    """
    spec = spec or SampleSpec()
    alg, dec = pair.alg, pair.dec
    margin = spec.margin if spec.margin is not None else fd_margin(met)
    rng = np.random.default_rng(spec.seed)
    poles: list[np.ndarray] = []
    for i in dec.m_indices:
        e = alg.basis_vector(i)
        norm = np.sqrt(met.ip(e, e))
        e = e / norm
        if met.ip(met.x_vec, e) > margin:
            poles.append(e)
    try:
        for _ in range(spec.count):
            poles.append(admissible_pole(rng, met, margin))
    except DomainError as exc:
        return CheckResult(False, float("inf"), note=f"sampling failure: {exc}")

    basis = [alg.basis_vector(i) for i in dec.m_indices]
    labels = [alg.labels[i] for i in dec.m_indices]
    worst = 0.0
    witness = None
    for y in poles:
        for zi, z in enumerate(basis):
            for ui, u in enumerate(basis):
                for vi, v in enumerate(basis):
                    if vi < ui:
                        continue  # expression is symmetric in (u, v)
                    value = latifi_residual(met, pair, y, z, u, v)
                    if abs(value) > worst:
                        worst = abs(value)
                        witness = (
                            tuple(float(t) for t in y),
                            (labels[zi], labels[ui], labels[vi]),
                        )
    if worst <= tol:
        return CheckResult(True, worst)
    return CheckResult(False, worst, witness)


@dataclass(frozen=True)
class ReductivityReport:
    """Joint verdicts of the reductivity criteria for one scenario.

    ``equivalence_consistent`` is None when the parallel condition fails
    (the equivalence statement is silent there), otherwise it records whether
    the Riemannian and Latifi verdicts agree.
    """

    riemannian_natred: CheckResult
    latifi_natred: CheckResult
    parallel_condition: CheckResult
    equivalence_consistent: bool | None


def natural_reductivity_report(
    met: MKropinaMetric,
    pair: InnerProductPair,
    samples: SampleSpec | None = None,
) -> ReductivityReport:
    """Run all three checks; never overrides an individual verdict."""
    riem = check_riemannian_natred(pair.alg, pair.dec, pair.gram)
    parallel = check_parallel_condition(met, pair.alg, pair.dec)
    latifi = check_latifi_natred(met, pair, samples)
    consistent = (riem.passed == latifi.passed) if parallel.passed else None
    return ReductivityReport(
        riemannian_natred=riem,
        latifi_natred=latifi,
        parallel_condition=parallel,
        equivalence_consistent=consistent,
    )
