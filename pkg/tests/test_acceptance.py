"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines; every tolerance is pinned here, not configurable.
"""

import math
import time

import numpy as np
import pytest

import mkropina as mk
from mkropina.cli import main, resolve_scenario
from mkropina.curvature import CurvatureBackend, natred_curvature, puttmann_scalar
from mkropina.flags import (
    Flag,
    flag_curvature_biinv,
    flag_curvature_from_components,
    flag_curvature_general,
    flag_curvature_natred,
    flag_curvature_thm31,
)
from mkropina.reductivity import natural_reductivity_report
from mkropina.sampling import (
    admissible_pole,
    fd_margin,
    orthonormal_admissible_flag,
    unit_vector,
)
from mkropina.scenario import load_scenario, run_scan, run_verify
from mkropina.report import emit_report
from mkropina.tensors import (
    TensorEvalContext,
    cartan,
    cartan_bracket_closed,
    g_closed,
    g_fd_oracle,
    orthonormal_identity_residuals,
)

from conftest import SQRT_HALF, metric_for_preset

PRESETS = ("su2", "u2", "abelian_4")
EXPONENTS = (1.0, 2.0, 0.5, -0.5)
CORPUS = (
    "u2_central",
    "abelian",
    "su2_diag",
    "u2_noncentral",
    "random_gram_su2",
    "random_gram_u2",
)


def report(criterion: int, passed: bool, detail: str) -> None:
    marker = "PASS" if passed else "FAIL"
    print(f"ACCEPTANCE {criterion:2d}: {marker} - {detail}")
    assert passed, f"criterion {criterion}: {detail}"


def worked_fixture():
    met, pair = metric_for_preset("u2", 1.0)
    y = np.array([SQRT_HALF, 0.0, SQRT_HALF, 0.0])
    u = np.array([0.0, 1.0, 0.0, 0.0])
    return met, pair, Flag(y, u, orthonormal=True)


def test_criterion_1_fundamental_tensor_oracle():
    start = time.monotonic()
    worst = 0.0
    for preset_name in PRESETS:
        for m_exp in EXPONENTS:
            met, _ = metric_for_preset(preset_name, m_exp)
            rng = np.random.default_rng(9100)
            for _ in range(100):
                y = admissible_pole(rng, met, fd_margin(met))
                u = unit_vector(rng, met.gram, met.m_indices)
                v = unit_vector(rng, met.gram, met.m_indices)
                closed = g_closed(TensorEvalContext.create(met, y), u, v)
                oracle = g_fd_oracle(met, y, u, v)
                worst = max(worst, abs(closed - oracle) / (1.0 + abs(closed)))
    elapsed = time.monotonic() - start
    report(
        1,
        worst <= 1e-6 and elapsed < 5.0,
        f"max scaled |g_closed - g_fd| = {worst:.3e} (tol 1e-6), {elapsed:.2f}s",
    )


def test_criterion_2_euler_homogeneity():
    worst = 0.0
    for preset_name in PRESETS:
        for m_exp in EXPONENTS:
            met, _ = metric_for_preset(preset_name, m_exp)
            rng = np.random.default_rng(9200)
            for _ in range(100):
                y = admissible_pole(rng, met, fd_margin(met)) * rng.uniform(0.5, 2.0)
                f_sq = met.norm(y) ** 2
                g_yy = g_closed(TensorEvalContext.create(met, y), y, y)
                worst = max(worst, abs(g_yy - f_sq) / f_sq)
    report(2, worst <= 1e-10, f"max relative |g_Y(Y,Y) - F^2| = {worst:.3e}")


def test_criterion_3_orthonormal_identities():
    worst = 0.0
    min_det = math.inf
    for preset_name in PRESETS:
        for m_exp in (1.0, 2.0, 0.5):
            met, _ = metric_for_preset(preset_name, m_exp)
            rng = np.random.default_rng(9300)
            for _ in range(100):
                y, u = orthonormal_admissible_flag(rng, met, fd_margin(met))
                res = orthonormal_identity_residuals(
                    TensorEvalContext.create(met, y), u
                )
                worst = max(worst, res.max_residual)
                min_det = min(min_det, res.det_value)
    report(
        3,
        worst <= 1e-10 and min_det > 0.0,
        f"max identity residual = {worst:.3e}, min det = {min_det:.3e} > 0",
    )


def test_criterion_4_worked_flag_all_methods():
    met, pair, flag = worked_fixture()
    backend = CurvatureBackend("naturally_reductive")
    closed = {
        "general": flag_curvature_general(met, pair, backend, flag).k,
        "thm31": flag_curvature_thm31(met, pair, flag).k,
        "natred": flag_curvature_natred(met, pair, flag).k,
        "biinv": flag_curvature_biinv(met, pair, flag).k,
    }
    worst_closed = max(abs(v - 0.04) for v in closed.values())
    fd = flag_curvature_general(met, pair, backend, flag, g_eval="fd").k
    report(
        4,
        worst_closed <= 1e-10 and abs(fd - 0.04) <= 1e-6,
        f"K = 0.04: closed-path error {worst_closed:.3e}, fd-path error "
        f"{abs(fd - 0.04):.3e}",
    )


def test_criterion_5_commuting_flag_is_flat():
    met, pair, _ = worked_fixture()
    y = np.array([SQRT_HALF, 0.0, SQRT_HALF, 0.0])
    u = np.array([SQRT_HALF, 0.0, -SQRT_HALF, 0.0])
    flag = Flag(y, u, orthonormal=True)
    backend = CurvatureBackend("puttmann")
    values = [
        flag_curvature_general(met, pair, backend, flag).k,
        flag_curvature_thm31(met, pair, flag).k,
        flag_curvature_natred(met, pair, flag).k,
        flag_curvature_biinv(met, pair, flag).k,
    ]
    worst = max(abs(v) for v in values)
    report(5, worst <= 1e-10, f"max |K| = {worst:.3e} across the four methods")


def test_criterion_6_sign_calibration():
    worst = 0.0
    for preset_name in ("su2", "u2"):
        alg = mk.preset(preset_name)
        dec = mk.ReductiveDecomposition(alg.dim, ())
        pair = mk.build_inner_product_pair(alg, dec, np.eye(alg.dim))
        basis = [alg.basis_vector(i) for i in range(alg.dim)]
        for u in basis:
            for y in basis:
                r = natred_curvature(alg, dec, u, y)
                for w in basis:
                    calibrated = puttmann_scalar(pair, u, y, y, w, sigma=-1)
                    worst = max(
                        worst, abs(calibrated - float(w @ pair.gram @ r))
                    )
    su2 = mk.preset("su2")
    pair3 = mk.build_inner_product_pair(
        su2, mk.ReductiveDecomposition(3, ()), np.eye(3)
    )
    e = np.eye(3)
    printed = puttmann_scalar(pair3, e[0], e[1], e[1], e[0], sigma=1)
    bracket_value = float(
        e[0] @ pair3.gram @ natred_curvature(su2, pair3.dec, e[0], e[1])
    )
    anchor_ok = printed == pytest.approx(-0.25, abs=1e-14) and abs(
        printed - bracket_value
    ) == pytest.approx(2 * abs(bracket_value), abs=1e-14)
    report(
        6,
        worst <= 1e-12 and anchor_ok,
        f"sigma=-1 agreement {worst:.3e}; sigma=+1 anchor residual "
        f"{abs(printed - bracket_value):.3f} = 2|0.25|",
    )


def test_criterion_7_riemannian_reduction():
    su2 = mk.preset("su2")
    dec = mk.ReductiveDecomposition(3, ())
    pair = mk.build_inner_product_pair(su2, dec, np.eye(3))
    e = np.eye(3)
    r = natred_curvature(su2, dec, e[0], e[1])
    k, _, _ = flag_curvature_from_components(
        0.0,
        b_xy=0.8,
        b_xu=0.0,
        u_dot_r=float(e[0] @ pair.gram @ r),
        x_dot_r=float((0.8 * e[1]) @ pair.gram @ r),
    )
    expected = 0.25  # ||[e1, e2]||^2 / 4
    report(
        7,
        abs(k - expected) <= 1e-12,
        f"m=0 closed formula gives {k:.12f} vs sectional curvature 0.25",
    )


def test_criterion_8_equivalence_over_corpus():
    start = time.monotonic()
    ok = True
    details = []
    for name in CORPUS:
        scn = load_scenario(resolve_scenario(name))
        rep = natural_reductivity_report(scn.met, scn.pair)
        if rep.parallel_condition.passed:
            consistent = (
                rep.riemannian_natred.passed == rep.latifi_natred.passed
            )
            ok = ok and consistent
            if rep.latifi_natred.passed:
                ok = ok and rep.latifi_natred.residual <= 1e-7
            details.append(f"{name}:consistent={consistent}")
        else:
            details.append(f"{name}:n/a")
    elapsed = time.monotonic() - start
    report(
        8,
        ok and elapsed < 30.0,
        f"{'; '.join(details)} ({elapsed:.1f}s)",
    )


def test_criterion_9_convexity_thresholds():
    full = mk.check_strong_convexity(1.0, 0.9)
    slice_report = mk.check_strong_convexity(-0.5, 0.9, s_count=900, b_fixed=0.9)
    threshold = 0.9 / math.sqrt(3.0)
    ok = (
        full.valid
        and not slice_report.valid
        and slice_report.max_failing_s < threshold < slice_report.min_passing_s
    )
    report(
        9,
        ok,
        f"m=1 valid; m=-0.5 failures end at s={slice_report.max_failing_s:.3f} "
        f"< {threshold:.4f} < first pass s={slice_report.min_passing_s:.3f}",
    )


def test_criterion_10_cartan_properties():
    met, pair, _ = worked_fixture()
    alg, dec = pair.alg, pair.dec
    rng = np.random.default_rng(9400)
    worst_sym = worst_pole = 0.0
    for _ in range(100):
        y = admissible_pole(rng, met, fd_margin(met))
        z, u, v = (unit_vector(rng, met.gram, met.m_indices) for _ in range(3))
        c0 = cartan(met, y, z, u, v)
        worst_sym = max(
            worst_sym,
            abs(c0 - cartan(met, y, u, z, v)),
            abs(c0 - cartan(met, y, z, v, u)),
        )
        worst_pole = max(worst_pole, abs(cartan(met, y, y, u, v)))
    worst_pattern = 0.0
    for _ in range(100):
        y = admissible_pole(rng, met, fd_margin(met))
        z, u, v = (unit_vector(rng, met.gram, met.m_indices) for _ in range(3))
        w = dec.project(alg.bracket(z, y), "m")
        closed = cartan_bracket_closed(met, alg, dec, z, y, u, v)
        worst_pattern = max(
            worst_pattern, abs(closed - 2.0 * cartan(met, y, w, u, v))
        )
    report(
        10,
        worst_sym <= 1e-8 and worst_pole <= 1e-8 and worst_pattern <= 1e-7,
        f"symmetry {worst_sym:.3e}, pole slot {worst_pole:.3e}, "
        f"bracket pattern {worst_pattern:.3e}",
    )


def test_criterion_11_invariance_suite():
    met, pair, flag = worked_fixture()
    backend = CurvatureBackend("naturally_reductive")
    rng = np.random.default_rng(9500)
    worst = 0.0
    flags = [flag] + [
        Flag(*orthonormal_admissible_flag(rng, met, 0.16)) for _ in range(20)
    ]
    for base in flags:
        k0 = flag_curvature_general(met, pair, backend, base).k
        for lam in (0.5, 3.0):
            k = flag_curvature_general(
                met, pair, backend, Flag(lam * base.y, base.u)
            ).k
            worst = max(worst, abs(k - k0))
        for shift in (-1.0, 0.7):
            k = flag_curvature_general(
                met, pair, backend, Flag(base.y, base.u + shift * base.y)
            ).k
            worst = max(worst, abs(k - k0))
    report(11, worst <= 1e-9, f"max |K drift| under scaling/shear = {worst:.3e}")


def test_criterion_12_cli_determinism_and_verify(capsys):
    scn = load_scenario(resolve_scenario("u2_central"))
    first = emit_report(run_scan(scn, count=10, seed=7), "csv")
    second = emit_report(run_scan(scn, count=10, seed=7), "csv")
    byte_identical = first == second
    exit_codes = {}
    for name in CORPUS:
        exit_codes[name] = main(["verify", "--scenario", name])
    capsys.readouterr()
    all_zero = all(code == 0 for code in exit_codes.values())
    report(
        12,
        byte_identical and all_zero,
        f"scan byte-identical={byte_identical}; verify exit codes {exit_codes}",
    )
