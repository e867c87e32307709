"""Basic / higher-order split of the brick stiffness.

    K = V^-1 L E L^T  +  V Hh^T W^T R W Hh  =  Kb + Kh

``L`` lumps a constant stress state to nodal forces, ``Hh`` extracts the 12
higher-order (hourglass type) nodal patterns and ``Grc`` collects the rigid
body motions and constant strain states.  ``Kh`` is obtained by subtraction
and its 12x12 kernel recovered by projection onto the rows of ``Hh``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DecompositionInconsistencyError, IncompatibleMatricesError
from .geometry import (
    N_DOF,
    NODE_SIGNS,
    BrickGeometry,
    IsotropicMaterial,
    elasticity_matrix,
)
from .stress import ElementMatrices, element_matrices

RANK_TOL = 1e-10
RECONSTRUCTION_TOL = 1e-9

# Hh^T as tabulated: one row per DOF, tokens are
# ab -> ab/4, ac -> ac/4, bc -> bc/4, abc -> abc/8, with sign.
_HH_T_TABLE = (
    "-ab -ac 0 0 0 0 bc 0 0 -abc 0 0",
    "0 0 -ab -bc 0 0 0 ac 0 0 -abc 0",
    "0 0 0 0 -ac -bc 0 0 ab 0 0 -abc",
    "ab ac 0 0 0 0 bc 0 0 abc 0 0",
    "0 0 ab -bc 0 0 0 -ac 0 0 abc 0",
    "0 0 0 0 ac -bc 0 0 -ab 0 0 abc",
    "-ab ac 0 0 0 0 -bc 0 0 -abc 0 0",
    "0 0 -ab bc 0 0 0 -ac 0 0 -abc 0",
    "0 0 0 0 ac bc 0 0 ab 0 0 -abc",
    "ab -ac 0 0 0 0 -bc 0 0 abc 0 0",
    "0 0 ab bc 0 0 0 ac 0 0 abc 0",
    "0 0 0 0 -ac bc 0 0 -ab 0 0 abc",
    "-ab ac 0 0 0 0 -bc 0 0 abc 0 0",
    "0 0 -ab bc 0 0 0 -ac 0 0 abc 0",
    "0 0 0 0 ac bc 0 0 ab 0 0 abc",
    "ab -ac 0 0 0 0 -bc 0 0 -abc 0 0",
    "0 0 ab bc 0 0 0 ac 0 0 -abc 0",
    "0 0 0 0 -ac bc 0 0 -ab 0 0 -abc",
    "-ab -ac 0 0 0 0 bc 0 0 abc 0 0",
    "0 0 -ab -bc 0 0 0 ac 0 0 abc 0",
    "0 0 0 0 -ac -bc 0 0 ab 0 0 abc",
    "ab ac 0 0 0 0 bc 0 0 -abc 0 0",
    "0 0 ab -bc 0 0 0 -ac 0 0 -abc 0",
    "0 0 0 0 ac -bc 0 0 -ab 0 0 -abc",
)


def _new(shape, exact: bool) -> np.ndarray:
    if exact:
        out = np.empty(shape, dtype=object)
        out[...] = Fraction(0)
        return out
    return np.zeros(shape)


def _products(g: BrickGeometry) -> dict:
    a, b, c = g.dims
    return {"ab": a * b / 4, "ac": a * c / 4, "bc": b * c / 4, "abc": a * b * c / 8}


def lumping_matrix(g: BrickGeometry) -> np.ndarray:
    """24x6 force lumping matrix, columns (xx, yy, zz, xy, yz, zx)."""
    p = _products(g)
    bc, ac, ab = p["bc"], p["ac"], p["ab"]
    L = _new((N_DOF, 6), g.exact)
    for i, (sx, sy, sz) in enumerate(NODE_SIGNS):
        sx, sy, sz = int(sx), int(sy), int(sz)
        L[3 * i, [0, 3, 5]] = [sx * bc, sy * ac, sz * ab]
        L[3 * i + 1, [1, 3, 4]] = [sy * ac, sx * bc, sz * ab]
        L[3 * i + 2, [2, 4, 5]] = [sz * ab, sy * ac, sx * bc]
    return L


def higher_order_projector(g: BrickGeometry) -> np.ndarray:
    """12x24 geometric projector Hh (transpose of the tabulated Hh^T)."""
    p = _products(g)
    HT = _new((N_DOF, 12), g.exact)
    for r, line in enumerate(_HH_T_TABLE):
        for col, tok in enumerate(line.split()):
            if tok == "0":
                continue
            sign = -1 if tok.startswith("-") else 1
            HT[r, col] = sign * p[tok.lstrip("-")]
    return HT.T.copy()


def weight_matrix(g: BrickGeometry) -> np.ndarray:
    """12x12 diagonal higher-order mode weights.

    Each weight is the reciprocal of the area (or volume) carried by the
    matching row of Hh, so ``W Hh`` has entries of magnitude 1/4 or 1/8.
    """
    a, b, c = g.dims
    one = Fraction(1) if g.exact else 1.0
    ab, ac, bc, abc = one / (a * b), one / (a * c), one / (b * c), one / (a * b * c)
    diag = [ab, ac, ab, bc, ac, bc, bc, ac, ab, abc, abc, abc]
    W = _new((12, 12), g.exact)
    for k, w in enumerate(diag):
        W[k, k] = w
    return W


def basic_modes(g: BrickGeometry) -> np.ndarray:
    """24x12 matrix of rigid body and constant strain nodal patterns.

    Columns: x, y, z translations; rotations about x, y, z (``theta x X``);
    unit strains xx, yy, zz, xy, yz, zx with engineering shear split evenly.
    """
    G = _new((N_DOF, 12), g.exact)
    half = Fraction(1, 2) if g.exact else 0.5
    for i in range(8):
        x, y, z = g.node_coord(i + 1)
        rows = slice(3 * i, 3 * i + 3)
        cols = [
            (1, 0, 0),
            (0, 1, 0),
            (0, 0, 1),
            (0, -z, y),
            (z, 0, -x),
            (-y, x, 0),
            (x, 0, 0),
            (0, y, 0),
            (0, 0, z),
            (half * y, half * x, 0),
            (0, half * z, half * y),
            (half * z, 0, half * x),
        ]
        for k, u in enumerate(cols):
            G[rows, k] = list(u)
    return G


def rigid_modes(g: BrickGeometry) -> np.ndarray:
    return basic_modes(g)[:, :6]


def strain_modes(g: BrickGeometry) -> np.ndarray:
    return basic_modes(g)[:, 6:]


def basic_stiffness(g: BrickGeometry, m: IsotropicMaterial) -> np.ndarray:
    """Kb = V^-1 L E L^T."""
    L = lumping_matrix(g).astype(float)
    E = elasticity_matrix(m).astype(float)
    Kb = L @ E @ L.T / float(g.volume())
    return 0.5 * (Kb + Kb.T)


def higher_order_stiffness(k_sigma, k_b) -> np.ndarray:
    """Kh = K_sigma - Kb.

    Either argument may be an :class:`ElementMatrices`; when both carry a
    geometry and material they must agree.
    """
    sources = []
    arrays = []
    for item in (k_sigma, k_b):
        if isinstance(item, ElementMatrices):
            sources.append((item.geometry, item.material))
            arrays.append(item.K)
        elif isinstance(item, Decomposition):
            sources.append((item.geometry, item.material))
            arrays.append(item.Kb)
        else:
            arrays.append(np.asarray(item, dtype=float))
    if len(sources) == 2 and sources[0] != sources[1]:
        raise IncompatibleMatricesError(
            f"stiffness matrices built for different inputs: {sources[0]} vs {sources[1]}"
        )
    Ks, Kb = arrays
    if Ks.shape != (N_DOF, N_DOF) or Kb.shape != (N_DOF, N_DOF):
        raise IncompatibleMatricesError(f"expected 24x24 matrices, got {Ks.shape} and {Kb.shape}")
    return Ks - Kb


def extract_ho_kernel(Kh, Hh, W, V):
    """Recover X (and R = W^-1 X W^-1) with ``Kh = V Hh^T X Hh``.

    Raises :class:`DecompositionInconsistencyError` when ``Kh`` does not lie
    in the span of ``Hh^T (.) Hh``.
    """
    Kh = np.asarray(Kh, dtype=float)
    Hh = np.asarray(Hh, dtype=float)
    W = np.asarray(W, dtype=float)
    V = float(V)
    P = np.linalg.solve(Hh @ Hh.T, Hh)  # (Hh Hh^T)^-1 Hh
    X = P @ Kh @ P.T / V
    X = 0.5 * (X + X.T)
    residual = np.abs(Kh - V * Hh.T @ X @ Hh).max()
    scale = np.abs(Kh).max()
    if residual > RECONSTRUCTION_TOL * max(scale, np.finfo(float).tiny):
        raise DecompositionInconsistencyError(
            f"Kh is not of the form V Hh^T X Hh: residual {residual:.3e} vs |Kh| {scale:.3e}"
        )
    w = np.diag(W)
    R = X / np.outer(w, w)
    return X, R


@dataclass(frozen=True)
class RankReport:
    name: str
    singular_values: np.ndarray = field(repr=False)
    threshold: float
    rank: int
    expected: int | None = None

    @property
    def passed(self) -> bool:
        return self.expected is not None and self.rank == self.expected

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"rank({self.name})={self.rank} expected {self.expected} {verdict}"


def rank_threshold(M: np.ndarray, singular_values=None) -> float:
    s = np.linalg.svd(M, compute_uv=False) if singular_values is None else singular_values
    smax = s[0] if s.size else 0.0
    return max(M.shape) * smax * RANK_TOL


def numeric_rank(M, name: str = "M", expected: int | None = None) -> RankReport:
    """Count singular values above ``max(shape) * s_max * 1e-10``."""
    M = np.asarray(M, dtype=float)
    s = np.linalg.svd(M, compute_uv=False)
    tol = rank_threshold(M, s)
    rank = int(np.count_nonzero(s > tol)) if s.size and s[0] > 0 else 0
    return RankReport(name, s, tol, rank, expected)


@dataclass(frozen=True)
class Decomposition:
    geometry: BrickGeometry
    material: IsotropicMaterial
    L: np.ndarray
    E: np.ndarray
    Hh: np.ndarray
    W: np.ndarray
    Grc: np.ndarray
    Kb: np.ndarray
    Kh: np.ndarray
    X: np.ndarray
    R: np.ndarray
    element: ElementMatrices

    @property
    def volume(self) -> float:
        return float(self.geometry.volume())

    @property
    def K(self) -> np.ndarray:
        return self.element.K


def decompose(g: BrickGeometry, m: IsotropicMaterial, element: ElementMatrices | None = None) -> Decomposition:
    el = element_matrices(g, m) if element is None else element
    if (el.geometry, el.material) != (g, m):
        raise IncompatibleMatricesError("element matrices built for a different geometry/material")
    Kb = basic_stiffness(g, m)
    Kh = higher_order_stiffness(el.K, Kb)
    Hh = higher_order_projector(g).astype(float)
    W = weight_matrix(g).astype(float)
    X, R = extract_ho_kernel(Kh, Hh, W, g.volume())
    return Decomposition(
        geometry=g,
        material=m,
        L=lumping_matrix(g).astype(float),
        E=elasticity_matrix(m).astype(float),
        Hh=Hh,
        W=W,
        Grc=basic_modes(g).astype(float),
        Kb=Kb,
        Kh=Kh,
        X=X,
        R=R,
        element=el,
    )
