"""18-parameter assumed stress field and the hybrid element matrices.

The stress field for a parallel-sided brick is

    s11 = b1  + b2 eta + b3 mu + b4 eta mu
    s22 = b5  + b6 xi  + b7 mu + b8 xi mu
    s33 = b9  + b10 xi + b11 eta + b12 xi eta
    s12 = b13 + b14 mu
    s23 = b15 + b16 xi
    s13 = b17 + b18 eta

which is self-equilibrated with zero body force.  Nodal forces follow from
the boundary tractions, ``f = A beta``; the flexibility is
``F = int N^T C N dV`` and the element stiffness ``K = A F^-1 A^T``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.linalg import lapack

from .errors import FactorizationError
from .geometry import (
    N_DOF,
    BrickGeometry,
    FaceId,
    IsotropicMaterial,
    NODE_SIGNS,
    as_point,
    compliance_matrix,
    dof,
)

N_BETA = 18

# (stress row, beta column, exponents of (xi, eta, mu)); rows in Voigt order
# (11, 22, 33, 12, 23, 13).
STRESS_MONOMIALS = (
    (0, 0, (0, 0, 0)),
    (0, 1, (0, 1, 0)),
    (0, 2, (0, 0, 1)),
    (0, 3, (0, 1, 1)),
    (1, 4, (0, 0, 0)),
    (1, 5, (1, 0, 0)),
    (1, 6, (0, 0, 1)),
    (1, 7, (1, 0, 1)),
    (2, 8, (0, 0, 0)),
    (2, 9, (1, 0, 0)),
    (2, 10, (0, 1, 0)),
    (2, 11, (1, 1, 0)),
    (3, 12, (0, 0, 0)),
    (3, 13, (0, 0, 1)),
    (4, 14, (0, 0, 0)),
    (4, 15, (1, 0, 0)),
    (5, 16, (0, 0, 0)),
    (5, 17, (0, 1, 0)),
)

# beta columns carrying the constant stress states, in Voigt order
CONSTANT_COLUMNS = (0, 4, 8, 12, 14, 16)

# Voigt row of the symmetric tensor component (i, j)
_VOIGT = np.array([[0, 3, 5], [3, 1, 4], [5, 4, 2]])

# The closed-form face forces as usually tabulated are 4x the values produced
# with the bc/4 face Jacobian; only the latter makes A consistent with L.
TABULATED_FORCE_SCALE = 4


def _monomial(exps, p) -> float:
    return p[0] ** exps[0] * p[1] ** exps[1] * p[2] ** exps[2]


def stress_interpolation(p) -> np.ndarray:
    """6x18 stress interpolation matrix N at natural point ``p``."""
    p = as_point(p)
    N = np.zeros((6, N_BETA))
    for row, col, exps in STRESS_MONOMIALS:
        N[row, col] = _monomial(exps, p)
    return N


def stress_interpolation_derivative(p, axis: int) -> np.ndarray:
    """dN/d(natural coordinate ``axis``) at ``p``."""
    p = as_point(p)
    dN = np.zeros((6, N_BETA))
    for row, col, exps in STRESS_MONOMIALS:
        k = exps[axis]
        if k == 0:
            continue
        lowered = list(exps)
        lowered[axis] -= 1
        dN[row, col] = k * _monomial(lowered, p)
    return dN


def stress_tensor(voigt) -> np.ndarray:
    v = np.asarray(voigt)
    return v[_VOIGT]


def divergence_residual(beta, p, g: BrickGeometry) -> np.ndarray:
    """Physical divergence ``sigma_ij,j`` of the field N(p) beta.

    Uses d/dx_j = (2 / d_j) d/dnat_j for the rectangular map.
    """
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (N_BETA,):
        raise ValueError(f"beta must have length {N_BETA}, got shape {beta.shape}")
    div = np.zeros(3)
    for j, d in enumerate(g.dims):
        dsigma = stress_tensor(stress_interpolation_derivative(p, j) @ beta)
        div += dsigma[:, j] * (2.0 / float(d))
    return div


def _edge_moment(power: int, sign: int) -> Fraction:
    # int_{-1}^{1} t^power (1 + sign t) / 2 dt
    even = Fraction(1, power + 1) if power % 2 == 0 else Fraction(0)
    odd = Fraction(sign, power + 2) if (power + 1) % 2 == 0 else Fraction(0)
    return even + odd


def face_force_block(face: FaceId, g: BrickGeometry) -> np.ndarray:
    """12x18 map from beta to nodal forces on the four nodes of ``face``.

    Rows are ``(node, direction)`` pairs in the order of ``face.nodes``.  The
    traction ``sigma . n`` is integrated exactly against the bilinear face
    shape functions with Jacobian ``face.jacobian(g)``.  Fraction edge lengths
    give an exact rational block.
    """
    exact = g.exact
    J = face.jacobian(g)
    k, s = face.axis, face.sign
    ip = face.in_plane_axes
    rows = [[Fraction(0)] * N_BETA for _ in range(12)]
    for q, node in enumerate(face.nodes):
        node_sign = NODE_SIGNS[node - 1]
        for row, col, exps in STRESS_MONOMIALS:
            weight = Fraction(s) ** exps[k]
            for axis in ip:
                weight *= _edge_moment(exps[axis], int(node_sign[axis]))
            if weight == 0:
                continue
            # traction component i picks stress (i, k); outward normal sign s
            for i in range(3):
                if _VOIGT[i, k] == row:
                    rows[3 * q + i][col] += s * weight
    if exact:
        return np.array([[v * J for v in r] for r in rows], dtype=object)
    return np.array(rows, dtype=float) * float(J)


def equilibrium_matrix(g: BrickGeometry) -> np.ndarray:
    """24x18 equilibrium matrix assembled from the six face blocks."""
    dtype = object if g.exact else float
    A = np.zeros((N_DOF, N_BETA), dtype=dtype)
    if g.exact:
        A[:] = Fraction(0)
    for face in FaceId:
        block = face_force_block(face, g)
        for q, node in enumerate(face.nodes):
            for i in range(3):
                A[dof(node, i)] += block[3 * q + i]
    return A


def gauss_points(order: int):
    return np.polynomial.legendre.leggauss(order)


def _parity_mask() -> np.ndarray:
    # entries whose monomial product is odd in some coordinate integrate to 0
    mask = np.ones((N_BETA, N_BETA), dtype=bool)
    for _, c1, e1 in STRESS_MONOMIALS:
        for _, c2, e2 in STRESS_MONOMIALS:
            mask[c1, c2] = all((p + q) % 2 == 0 for p, q in zip(e1, e2))
    return mask


_EVEN_PARITY = _parity_mask()


def flexibility_matrix(g: BrickGeometry, m: IsotropicMaterial, order: int = 2) -> np.ndarray:
    """F = int N^T C N dV by ``order``-point Gauss rule per axis.

    The integrand is at most quadratic per axis, so ``order=2`` is exact.
    """
    C = compliance_matrix(m).astype(float)
    a, b, c = (float(d) for d in g.dims)
    jac = a * b * c / 8
    pts, wts = gauss_points(order)
    F = np.zeros((N_BETA, N_BETA))
    for xi, wx in zip(pts, wts):
        for eta, wy in zip(pts, wts):
            for mu, wz in zip(pts, wts):
                N = stress_interpolation((xi, eta, mu))
                F += (wx * wy * wz * jac) * (N.T @ C @ N)
    F = np.where(_EVEN_PARITY, 0.5 * (F + F.T), 0.0)
    return F


def generalized_stiffness(F: np.ndarray) -> np.ndarray:
    """Inverse of the flexibility via Cholesky factorization."""
    F = np.asarray(F, dtype=float)
    c, info = lapack.dpotrf(F, lower=1)
    if info > 0:
        raise FactorizationError(
            f"flexibility matrix not positive definite: leading minor {info} fails", minor=int(info)
        )
    if info < 0:
        raise FactorizationError(f"invalid input to Cholesky factorization (info={info})")
    inv, info = lapack.dpotri(c, lower=1)
    if info != 0:
        raise FactorizationError(f"Cholesky inverse failed (info={info})")
    S = np.tril(inv) + np.tril(inv, -1).T
    return S


@dataclass(frozen=True)
class ElementMatrices:
    geometry: BrickGeometry
    material: IsotropicMaterial
    A: np.ndarray
    F: np.ndarray
    S: np.ndarray
    K: np.ndarray

    def stress_amplitudes(self, u) -> np.ndarray:
        """beta = S A^T u for nodal displacements ``u``."""
        return self.S @ (self.A.T @ np.asarray(u, dtype=float))


def element_matrices(g: BrickGeometry, m: IsotropicMaterial) -> ElementMatrices:
    A = equilibrium_matrix(g).astype(float)
    F = flexibility_matrix(g, m)
    S = generalized_stiffness(F)
    K = A @ S @ A.T
    K = 0.5 * (K + K.T)
    return ElementMatrices(g, m, A, F, S, K)


def physical_stiffness(g: BrickGeometry, m: IsotropicMaterial) -> np.ndarray:
    """24x24 hybrid stiffness ``A S A^T`` (symmetrized)."""
    return element_matrices(g, m).K
