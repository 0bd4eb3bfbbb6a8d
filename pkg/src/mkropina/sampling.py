"""Deterministic rejection samplers for admissible directions and flags.

All draws go through ``numpy.random.default_rng(seed)`` so a fixed seed
yields bit-identical samples across runs and platforms.  The cone margin
keeps finite-difference stencils (and the fundamental tensor itself) away
from the beta = 0 boundary where everything blows up like beta^-(2m+2).
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError
from .metric import MKropinaMetric

#: Default rejection margin for scan flags: reject beta(Y) <= 0.05 on
#: gram-unit poles.  Large enough to keep stencils in-cone, small enough to
#: visit most of the admissible hemisphere.
SCAN_MARGIN = 0.05

#: Relative margin (times the alpha-norm of X) for oracle and reductivity
#: sampling, where finite differences must stay well conditioned.
FD_MARGIN_SCALE = 0.2

MAX_TRIES_PER_SAMPLE = 1000


def fd_margin(met: MKropinaMetric) -> float:
    """Cone margin for finite-difference work, grown with the exponent.

    Everything g-related scales like beta^-(2m+2), so for large positive m
    the rounding floor of closed-form residuals rises steeply near the cone;
    widening the margin keeps those floors below the stated tolerances.
    """
    scale = min(0.45, FD_MARGIN_SCALE * max(1.0, abs(met.m_exp)))
    return scale * met.b_norm


def unit_vector(rng: np.random.Generator, gram: np.ndarray, m_indices) -> np.ndarray:
    """A gram-unit vector supported on the tangent index set."""
    n = gram.shape[0]
    v = np.zeros(n)
    idx = list(m_indices)
    v[idx] = rng.standard_normal(len(idx))
    norm_sq = float(v @ gram @ v)
    if norm_sq <= 0.0:
        raise DomainError("degenerate draw from the unit-sphere sampler")
    return v / math.sqrt(norm_sq)


def admissible_pole(
    rng: np.random.Generator, met: MKropinaMetric, margin: float
) -> np.ndarray:
    """Gram-unit Y with beta(Y) > margin, by rejection."""
    for _ in range(MAX_TRIES_PER_SAMPLE):
        y = unit_vector(rng, met.gram, met.m_indices)
        if met.ip(met.x_vec, y) > margin:
            return y
    raise DomainError(
        f"no admissible pole found with beta > {margin:g}: cone too thin"
    )


def orthonormal_admissible_flag(
    rng: np.random.Generator, met: MKropinaMetric, margin: float
) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal (Y, U) for the gram product with Y strictly inside the cone."""
    gram = met.gram
    for _ in range(MAX_TRIES_PER_SAMPLE):
        y = admissible_pole(rng, met, margin)
        u = unit_vector(rng, gram, met.m_indices)
        u_perp = u - float(u @ gram @ y) * y
        norm_sq = float(u_perp @ gram @ u_perp)
        if norm_sq > 1e-12:
            return y, u_perp / math.sqrt(norm_sq)
    raise DomainError("could not generate an independent flag edge")
