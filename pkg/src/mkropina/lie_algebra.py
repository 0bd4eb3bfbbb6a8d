"""Finite-dimensional real Lie algebras given by structure constants.

A Lie algebra is stored as the coefficient tensor c[i][j][k] of its bracket,
[e_i, e_j] = sum_k c[i][j][k] e_k, together with optional basis labels.
Reductive splits g = h (+) m are basis-adapted: h and m are spanned by
disjoint subsets of the basis, so projections are coordinate masks.

The inner-product machinery pairs a bi-invariant product <<.,.>> on g with
an invariant product <.,.> whose restriction to m is the metric of interest;
the two are linked by the positive endomorphism Phi with
<x, z> = <<Phi x, z>> for all x, z.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, MKropinaError

#: Absolute tolerance for structural identities (inputs are exact rationals
#: in practice, so residuals only reflect float rounding).
STRUCTURE_TOL = 1e-12


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a report-valued structural check."""

    passed: bool
    residual: float
    witness: tuple | None = None
    note: str = ""

    def __bool__(self) -> bool:
        return self.passed


def _readonly(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class LieAlgebraData:
    """Structure constants realizing the bracket on a real Lie algebra."""

    dim: int
    structure: np.ndarray
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        c = np.asarray(self.structure, dtype=float)
        if c.shape != (self.dim, self.dim, self.dim):
            raise DimensionError(
                f"structure tensor must have shape {(self.dim,) * 3}, got {c.shape}"
            )
        if np.max(np.abs(c + np.swapaxes(c, 0, 1))) > STRUCTURE_TOL:
            raise MKropinaError("structure constants are not antisymmetric in (i, j)")
        object.__setattr__(self, "structure", _readonly(c))
        labels = tuple(self.labels) or tuple(f"e{i}" for i in range(self.dim))
        if len(labels) != self.dim:
            raise DimensionError("label count does not match dimension")
        object.__setattr__(self, "labels", labels)

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """[x, y] for coefficient vectors x, y."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.shape != (self.dim,) or y.shape != (self.dim,):
            raise DimensionError(
                f"bracket arguments must be vectors of length {self.dim}"
            )
        return np.einsum("i,j,ijk->k", x, y, self.structure)

    def basis_vector(self, i: int) -> np.ndarray:
        e = np.zeros(self.dim)
        e[i] = 1.0
        return e


def from_sparse(
    dim: int,
    entries: Iterable[Sequence[float]],
    labels: Sequence[str] | None = None,
) -> LieAlgebraData:
    """Build an algebra from sparse bracket entries (i, j, k, value), i < j.

    The antisymmetric completion c[j][i][k] = -value is applied automatically.
    """
    c = np.zeros((dim, dim, dim))
    seen = set()
    for entry in entries:
        if len(entry) != 4:
            raise MKropinaError(f"sparse entry must be (i, j, k, value), got {entry!r}")
        i, j, k = (int(entry[0]), int(entry[1]), int(entry[2]))
        value = float(entry[3])
        if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
            raise DimensionError(f"sparse entry index out of range: {entry!r}")
        if i >= j:
            raise MKropinaError(f"sparse entries require i < j, got ({i}, {j})")
        if (i, j, k) in seen:
            raise MKropinaError(f"duplicate sparse entry for ({i}, {j}, {k})")
        seen.add((i, j, k))
        c[i, j, k] = value
        c[j, i, k] = -value
    return LieAlgebraData(dim=dim, structure=c, labels=tuple(labels or ()))


def preset(name: str) -> LieAlgebraData:
    """Named algebras: "su2", "u2", and "abelian_<n>"."""
    if name == "su2":
        return from_sparse(
            3,
            [(0, 1, 2, 1.0), (1, 2, 0, 1.0), (0, 2, 1, -1.0)],
            labels=("e1", "e2", "e3"),
        )
    if name == "u2":
        # su2 block shifted by one slot; e0 is central.
        return from_sparse(
            4,
            [(1, 2, 3, 1.0), (2, 3, 1, 1.0), (1, 3, 2, -1.0)],
            labels=("e0", "e1", "e2", "e3"),
        )
    if name.startswith("abelian_"):
        try:
            n = int(name.removeprefix("abelian_"))
        except ValueError:
            raise MKropinaError(f"unknown preset {name!r}") from None
        if n < 1:
            raise MKropinaError("abelian preset needs dimension >= 1")
        return LieAlgebraData(dim=n, structure=np.zeros((n, n, n)))
    raise MKropinaError(f"unknown preset {name!r}")


def check_jacobi(alg: LieAlgebraData, tol: float = STRUCTURE_TOL) -> CheckResult:
    """Jacobi identity over all basis triples; reports the worst triple."""
    c = alg.structure
    jac = (
        np.einsum("jka,ial->ijkl", c, c)
        + np.einsum("kia,jal->ijkl", c, c)
        + np.einsum("ija,kal->ijkl", c, c)
    )
    residual = float(np.max(np.abs(jac)))
    if residual <= tol:
        return CheckResult(True, residual)
    i, j, k, _ = np.unravel_index(int(np.argmax(np.abs(jac))), jac.shape)
    witness = (alg.labels[i], alg.labels[j], alg.labels[k])
    return CheckResult(False, residual, witness)


@dataclass(frozen=True)
class ReductiveDecomposition:
    """Basis-adapted split g = h (+) m given by disjoint index sets."""

    dim: int
    h_indices: tuple[int, ...]
    m_indices: tuple[int, ...] = ()

    def __post_init__(self):
        h = tuple(int(i) for i in self.h_indices)
        m = tuple(int(i) for i in self.m_indices)
        if not m:
            m = tuple(i for i in range(self.dim) if i not in set(h))
        if sorted(h + m) != list(range(self.dim)):
            raise DimensionError(
                "h_indices and m_indices must partition {0, ..., dim-1}"
            )
        object.__setattr__(self, "h_indices", h)
        object.__setattr__(self, "m_indices", m)

    def mask(self, part: str) -> np.ndarray:
        if part not in ("m", "h"):
            raise MKropinaError(f"part must be 'm' or 'h', got {part!r}")
        out = np.zeros(self.dim)
        out[list(self.m_indices if part == "m" else self.h_indices)] = 1.0
        return out

    def project(self, x: np.ndarray, part: str) -> np.ndarray:
        """Zero the coefficients outside the requested index set."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise DimensionError(f"vector length must be {self.dim}")
        return x * self.mask(part)


def check_ad_invariance(
    alg: LieAlgebraData,
    dec: ReductiveDecomposition,
    tol: float = STRUCTURE_TOL,
) -> CheckResult:
    """[h, h] in h and [h, m] in m, checked on basis pairs."""
    if dec.dim != alg.dim:
        raise DimensionError("decomposition dimension does not match algebra")
    worst = 0.0
    witness = None
    h_set = list(dec.h_indices)
    for i in h_set:
        for j, target in [(j, "h") for j in h_set] + [
            (j, "m") for j in dec.m_indices
        ]:
            leak = alg.structure[i, j] * (1.0 - dec.mask(target))
            residual = float(np.max(np.abs(leak))) if leak.size else 0.0
            if residual > worst:
                worst = residual
                witness = (alg.labels[i], alg.labels[j])
    if worst <= tol:
        return CheckResult(True, worst)
    return CheckResult(False, worst, witness)


def check_bi_invariance(
    alg: LieAlgebraData, gram0: np.ndarray, tol: float = STRUCTURE_TOL
) -> CheckResult:
    """<<[z,x],y>> + <<x,[z,y]>> = 0 over all basis triples (z, x, y)."""
    gram0 = np.asarray(gram0, dtype=float)
    if gram0.shape != (alg.dim, alg.dim):
        raise DimensionError("gram0 shape does not match algebra dimension")
    c = alg.structure
    lhs = np.einsum("zxa,ay->zxy", c, gram0) + np.einsum("zya,xa->zxy", c, gram0)
    residual = float(np.max(np.abs(lhs)))
    if residual <= tol:
        return CheckResult(True, residual)
    z, x, y = np.unravel_index(int(np.argmax(np.abs(lhs))), lhs.shape)
    return CheckResult(False, residual, (alg.labels[z], alg.labels[x], alg.labels[y]))


def _require_spd(mat: np.ndarray, name: str) -> np.ndarray:
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DimensionError(f"{name} must be a square matrix")
    if np.max(np.abs(mat - mat.T)) > STRUCTURE_TOL * max(1.0, np.max(np.abs(mat))):
        raise MKropinaError(f"{name} is not symmetric")
    eigs = np.linalg.eigvalsh(mat)
    if eigs.min() <= 1e-14 * max(1.0, eigs.max()):
        raise MKropinaError(f"{name} is not positive definite")
    return mat


def metric_endomorphism(
    gram0: np.ndarray, gram: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Phi with <x,z> = <<Phi x, z>>, plus its inverse.

    Phi = gram0^-1 gram; it is gram0-self-adjoint with positive spectrum.
    """
    gram0 = _require_spd(gram0, "gram0")
    gram = _require_spd(gram, "gram")
    if gram.shape != gram0.shape:
        raise DimensionError("gram and gram0 must have matching shape")
    endo = np.linalg.solve(gram0, gram)
    endo_inv = np.linalg.solve(gram, gram0)
    if np.max(np.abs(endo @ endo_inv - np.eye(len(endo)))) > 1e-12:
        raise MKropinaError("endomorphism inverse fails the identity check")
    return endo, endo_inv


@dataclass(frozen=True)
class InnerProductPair:
    """Bi-invariant <<.,.>>, invariant <.,.>, and the endomorphism linking them.

    ``gram`` carries the m-metric extended to all of g with gram0 on h and
    h orthogonal to m, so mixed pairings in curvature formulas are well
    defined.  The algebra and decomposition travel with the pair.
    """

    alg: LieAlgebraData
    dec: ReductiveDecomposition
    gram0: np.ndarray
    gram: np.ndarray
    endo: np.ndarray
    endo_inv: np.ndarray

    def ip0(self, x: np.ndarray, y: np.ndarray) -> float:
        """Bi-invariant pairing <<x, y>>."""
        return float(x @ self.gram0 @ y)

    def ip(self, x: np.ndarray, y: np.ndarray) -> float:
        """Invariant pairing <x, y> (extended to all of g)."""
        return float(x @ self.gram @ y)

    @property
    def gram_mm(self) -> np.ndarray:
        idx = list(self.dec.m_indices)
        return self.gram[np.ix_(idx, idx)]


def build_inner_product_pair(
    alg: LieAlgebraData,
    dec: ReductiveDecomposition,
    gram0: np.ndarray,
    gram_m: np.ndarray | None = None,
) -> InnerProductPair:
    """Assemble and validate the inner-product pair for (alg, dec).

    gram_m is the invariant metric on m, indexed by dec.m_indices; it
    defaults to the restriction of gram0.  Raises on: non-SPD inputs, a
    gram0 that is not bi-invariant, or a gram0 that does not make h
    orthogonal to m (the split must be a metric complement).
    """
    gram0 = _require_spd(gram0, "gram0")
    if gram0.shape != (alg.dim, alg.dim):
        raise DimensionError("gram0 shape does not match algebra dimension")
    bi = check_bi_invariance(alg, gram0)
    if not bi.passed:
        raise MKropinaError(
            f"gram0 is not bi-invariant (residual {bi.residual:.3e} at {bi.witness})"
        )
    m_idx = list(dec.m_indices)
    h_idx = list(dec.h_indices)
    if h_idx and np.max(np.abs(gram0[np.ix_(h_idx, m_idx)])) > STRUCTURE_TOL:
        raise MKropinaError("gram0 must make h orthogonal to m")
    if gram_m is None:
        gram_m = gram0[np.ix_(m_idx, m_idx)]
    gram_m = _require_spd(gram_m, "gram_m")
    if gram_m.shape != (len(m_idx), len(m_idx)):
        raise DimensionError("gram_m shape does not match the m-index set")
    gram = np.zeros_like(gram0)
    gram[np.ix_(m_idx, m_idx)] = gram_m
    if h_idx:
        gram[np.ix_(h_idx, h_idx)] = gram0[np.ix_(h_idx, h_idx)]
    endo, endo_inv = metric_endomorphism(gram0, gram)
    return InnerProductPair(
        alg=alg,
        dec=dec,
        gram0=_readonly(gram0),
        gram=_readonly(gram),
        endo=_readonly(endo),
        endo_inv=_readonly(endo_inv),
    )
