"""Brick geometry, node conventions and isotropic elasticity.

Nodes are numbered 1..8 in the usual counter-clockwise order, bottom face
(mu = -1) first::

        8-------7
       /|      /|        mu (z)
      5-------6 |        |  eta (y)
      | 4-----|-3        | /
      |/      |/         |/
      1-------2          +---- xi (x)

Edge lengths ``a, b, c`` are full lengths along x, y, z; the element is
centred at the origin so node ``i`` sits at ``(xi_i a/2, eta_i b/2, mu_i c/2)``.

Degrees of freedom are ordered ``(ux1, uy1, uz1, ..., ux8, uy8, uz8)`` and
Voigt vectors as ``(xx, yy, zz, xy, yz, zx)`` with engineering shear strains.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import InvalidGeometryError, InvalidPointError, SingularMaterialError

NODE_SIGNS = np.array(
    [
        (-1, -1, -1),
        (+1, -1, -1),
        (+1, +1, -1),
        (-1, +1, -1),
        (-1, -1, +1),
        (+1, -1, +1),
        (+1, +1, +1),
        (-1, +1, +1),
    ],
    dtype=int,
)

N_NODES = 8
N_DOF = 24
VOIGT_LABELS = ("xx", "yy", "zz", "xy", "yz", "zx")


def dof(node: int, direction: int) -> int:
    """Zero-based DOF index for a 1-based node and a 0-based direction."""
    return 3 * (node - 1) + direction


def is_exact(*values) -> bool:
    return any(isinstance(v, Fraction) for v in values)


@dataclass(frozen=True)
class BrickGeometry:
    """Rectangular brick with full edge lengths ``a`` (x), ``b`` (y), ``c`` (z).

    The lengths may be :class:`fractions.Fraction` to request exact
    rational evaluation from the matrix builders that support it.
    """

    a: float
    b: float
    c: float

    def __post_init__(self):
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            try:
                ok = math.isfinite(v) and v > 0
            except TypeError:
                ok = False
            if not ok:
                raise InvalidGeometryError(f"edge length {name}={v!r} must be finite and > 0")

    @property
    def dims(self) -> tuple:
        return (self.a, self.b, self.c)

    @property
    def half(self) -> tuple:
        return tuple(d / 2 for d in self.dims)

    @property
    def exact(self) -> bool:
        return is_exact(*self.dims)

    def volume(self):
        return self.a * self.b * self.c

    @property
    def node_coords(self) -> np.ndarray:
        """8x3 table of physical node coordinates (node 1 in row 0)."""
        dtype = object if self.exact else float
        h = np.array(self.half, dtype=dtype)
        return NODE_SIGNS.astype(dtype) * h

    def node_coord(self, node: int) -> tuple:
        s = NODE_SIGNS[node - 1]
        return tuple(int(si) * hi for si, hi in zip(s, self.half))

    def scaled(self, factor) -> BrickGeometry:
        return BrickGeometry(self.a * factor, self.b * factor, self.c * factor)

    def with_dim(self, axis: int, value) -> BrickGeometry:
        d = list(self.dims)
        d[axis] = value
        return BrickGeometry(*d)


def make_brick(a, b, c) -> BrickGeometry:
    return BrickGeometry(a, b, c)


class NaturalPoint(NamedTuple):
    xi: float
    eta: float
    mu: float


def as_point(p) -> NaturalPoint:
    """Validate a natural-coordinate triple, each component in [-1, 1]."""
    try:
        xi, eta, mu = p
    except (TypeError, ValueError):
        raise InvalidPointError(f"expected three natural coordinates, got {p!r}") from None
    for v in (xi, eta, mu):
        if not (math.isfinite(v) and -1 <= v <= 1):
            raise InvalidPointError(f"natural coordinate {v!r} outside [-1, 1]")
    return NaturalPoint(xi, eta, mu)


class FaceId(enum.Enum):
    """The six faces; value is (fixed natural axis, sign, node quadruple)."""

    XI_POS = (0, +1, (2, 3, 7, 6))
    XI_NEG = (0, -1, (1, 4, 8, 5))
    ETA_POS = (1, +1, (3, 4, 8, 7))
    ETA_NEG = (1, -1, (1, 2, 6, 5))
    MU_POS = (2, +1, (5, 6, 7, 8))
    MU_NEG = (2, -1, (1, 4, 3, 2))

    @property
    def axis(self) -> int:
        return self.value[0]

    @property
    def sign(self) -> int:
        return self.value[1]

    @property
    def nodes(self) -> tuple:
        return self.value[2]

    @property
    def normal(self) -> tuple:
        n = [0, 0, 0]
        n[self.axis] = self.sign
        return tuple(n)

    @property
    def in_plane_axes(self) -> tuple:
        return tuple(k for k in range(3) if k != self.axis)

    def jacobian(self, g: BrickGeometry):
        """Area Jacobian of the face map from [-1, 1]^2, e.g. bc/4 for xi faces."""
        i, j = self.in_plane_axes
        return g.dims[i] * g.dims[j] / 4


def shape_function(node: int, p) -> float:
    """Trilinear shape function of ``node`` (1-based) at natural point ``p``."""
    if not 1 <= node <= N_NODES:
        raise IndexError(f"node index {node} not in 1..8")
    xi, eta, mu = as_point(p)
    s = NODE_SIGNS[node - 1]
    return (1 + s[0] * xi) * (1 + s[1] * eta) * (1 + s[2] * mu) / 8


def shape_functions(p) -> np.ndarray:
    xi, eta, mu = as_point(p)
    return np.prod(1 + NODE_SIGNS * np.array([xi, eta, mu]), axis=1) / 8


@dataclass(frozen=True)
class IsotropicMaterial:
    youngs: float
    poisson: float

    def __post_init__(self):
        E, nu = self.youngs, self.poisson
        if not (math.isfinite(E) and E > 0):
            raise SingularMaterialError(f"singular material: Young's modulus {E!r} must be > 0")
        if not (math.isfinite(nu) and -1 < nu < 0.5):
            raise SingularMaterialError(f"singular material: Poisson ratio {nu!r} not in (-1, 0.5)")

    @property
    def shear_modulus(self):
        return self.youngs / (2 * (1 + self.poisson))


def elasticity_matrix(m: IsotropicMaterial) -> np.ndarray:
    """6x6 isotropic elasticity matrix in Voigt order (xx, yy, zz, xy, yz, zx)."""
    E, nu = m.youngs, m.poisson
    d = (1 - 2 * nu) * (nu + 1)
    out = np.zeros((6, 6), dtype=object if is_exact(E, nu) else float)
    out[:3, :3] = E * nu / d
    for k in range(3):
        out[k, k] = E * (1 - nu) / d
        out[3 + k, 3 + k] = E * (Fraction(1, 2) - nu) / d if is_exact(E, nu) else E * (0.5 - nu) / d
    return out


def compliance_matrix(m: IsotropicMaterial) -> np.ndarray:
    """Closed-form inverse of :func:`elasticity_matrix`."""
    E, nu = m.youngs, m.poisson
    out = np.zeros((6, 6), dtype=object if is_exact(E, nu) else float)
    out[:3, :3] = -nu / E
    for k in range(3):
        out[k, k] = 1 / E if not is_exact(E, nu) else Fraction(1) / E
        out[3 + k, 3 + k] = 2 * (1 + nu) / E
    return out
