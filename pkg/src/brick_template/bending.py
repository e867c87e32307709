"""In-plane bending energy benchmark.

A bending case ``(p, q)`` bends the brick along axis ``p`` with fibre
direction ``q``; the nodal displacements sample the pure-bending field

    u_p = k x_p x_q,    u_q = -k (x_p**2 + nu x_q**2) / 2,    u_r = 0

and the element energy ``u^T K u / 2`` is compared with the beam energy
``E I k**2 L / 2`` (``L`` = length along ``p``, ``I = t d**3 / 12`` with depth
``d`` along ``q`` and thickness ``t`` along the remaining axis).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .decomposition import decompose
from .errors import DegenerateEnergyError, InvalidParameterError, InvalidPlaneError
from .geometry import BrickGeometry, IsotropicMaterial

AXES = "xyz"
PLANES = ("xy", "yx", "xz", "zx", "yz", "zy")
KINDS = ("full", "higher_order")

# Closed-form curve r = 1 + (rho**2) / 32 at nu = 0 that the benchmark is
# compared against; see reference_ratio.
REFERENCE_CONSTANT = 1.0 / 32.0


class Plane(NamedTuple):
    bend: int
    fiber: int

    @property
    def thickness(self) -> int:
        return 3 - self.bend - self.fiber

    @property
    def name(self) -> str:
        return AXES[self.bend] + AXES[self.fiber]


def parse_plane(plane) -> Plane:
    if isinstance(plane, Plane):
        return plane
    if isinstance(plane, str) and plane.lower() in PLANES:
        s = plane.lower()
        return Plane(AXES.index(s[0]), AXES.index(s[1]))
    if isinstance(plane, tuple) and len(plane) == 2:
        try:
            p, q = (AXES.index(v) if isinstance(v, str) else int(v) for v in plane)
        except ValueError:
            p = q = -1
        if {p, q} < {0, 1, 2} and p != q:
            return Plane(p, q)
    raise InvalidPlaneError(f"invalid bending plane {plane!r}; expected one of {PLANES}")


def bending_displacements(g: BrickGeometry, plane, curvature: float, poisson: float) -> np.ndarray:
    """24-vector of nodal displacements for the pure-bending field."""
    pl = parse_plane(plane)
    X = g.node_coords.astype(float)
    xp, xq = X[:, pl.bend], X[:, pl.fiber]
    u = np.zeros((8, 3))
    u[:, pl.bend] = curvature * xp * xq
    u[:, pl.fiber] = -curvature * (xp**2 + poisson * xq**2) / 2
    return u.ravel()


def section(g: BrickGeometry, plane):
    """(bending length, section depth, section thickness)."""
    pl = parse_plane(plane)
    d = [float(v) for v in g.dims]
    return d[pl.bend], d[pl.fiber], d[pl.thickness]


def beam_reference_energy(g: BrickGeometry, plane, curvature: float, m: IsotropicMaterial) -> float:
    length, depth, thick = section(g, plane)
    inertia = thick * depth**3 / 12
    return m.youngs * inertia * curvature**2 * length / 2


def energy_ratio(K, u, reference_energy: float) -> float:
    if not reference_energy > 0:
        raise DegenerateEnergyError(f"reference energy must be positive, got {reference_energy!r}")
    u = np.asarray(u, dtype=float)
    r = float(u @ np.asarray(K, dtype=float) @ u) / 2 / reference_energy
    if not math.isfinite(r):
        raise DegenerateEnergyError("energy ratio is not finite")
    return r


def reference_ratio(aspect: float, poisson: float) -> float:
    """Closed-form comparison curve ``(rho^2 (nu - 1) - 32) / (32 (nu^2 - 1))``."""
    return (aspect**2 * (poisson - 1) - 32) / (32 * (poisson**2 - 1))


@dataclass(frozen=True)
class BendingCase:
    plane: str
    curvature: float
    poisson: float
    displacements: np.ndarray
    reference_energy: float
    element_energy: float
    higher_order_energy: float
    ratio: float

    @property
    def higher_order_ratio(self) -> float:
        return self.higher_order_energy / self.reference_energy


def bending_case(
    g: BrickGeometry,
    plane,
    m: IsotropicMaterial,
    curvature: float = 1.0,
    kind: str = "full",
    decomposition=None,
) -> BendingCase:
    """Evaluate one bending case; ``kind`` picks K_sigma ("full") or Kh."""
    if kind not in KINDS:
        raise InvalidParameterError(f"unknown stiffness kind {kind!r}; expected one of {KINDS}")
    pl = parse_plane(plane)
    dec = decompose(g, m) if decomposition is None else decomposition
    u = bending_displacements(g, pl, curvature, m.poisson)
    u_ref = beam_reference_energy(g, pl, curvature, m)
    # the nodal u_q is partly a rigid translation; drop it so sum(u) = 0
    u = (u.reshape(8, 3) - u.reshape(8, 3).mean(axis=0)).ravel()
    e_full = float(u @ dec.K @ u) / 2
    e_ho = float(u @ dec.Kh @ u) / 2
    K = dec.K if kind == "full" else dec.Kh
    return BendingCase(
        plane=pl.name,
        curvature=curvature,
        poisson=m.poisson,
        displacements=u,
        reference_energy=u_ref,
        element_energy=e_full,
        higher_order_energy=e_ho,
        ratio=energy_ratio(K, u, u_ref),
    )


class SweepRow(NamedTuple):
    aspect_ratio: float
    poisson: float
    kind: str
    plane: str
    ratio: float


@dataclass(frozen=True)
class SweepTable:
    rows: tuple

    @property
    def aspect_ratios(self) -> np.ndarray:
        return np.array([r.aspect_ratio for r in self.rows])

    @property
    def ratios(self) -> np.ndarray:
        return np.array([r.ratio for r in self.rows])


def sweep_geometry(base: BrickGeometry, plane, aspect: float) -> BrickGeometry:
    """Base brick with the bending length set to ``aspect`` x section depth."""
    pl = parse_plane(plane)
    depth = float(base.dims[pl.fiber])
    return base.with_dim(pl.bend, aspect * depth)


def _check_ratios(ratios: Sequence[float]) -> list:
    values = [float(r) for r in ratios]
    if not values:
        raise InvalidParameterError("aspect ratio list is empty")
    if any(not (math.isfinite(r) and r > 0) for r in values):
        raise InvalidParameterError(f"aspect ratios must be positive: {values}")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise InvalidParameterError(f"aspect ratios must be strictly increasing: {values}")
    return values


def aspect_sweep(
    base: BrickGeometry,
    plane,
    poisson: float,
    kind: str,
    ratios: Sequence[float],
    youngs: float = 1.0,
    curvature: float = 1.0,
) -> SweepTable:
    pl = parse_plane(plane)
    m = IsotropicMaterial(youngs, poisson)
    rows = []
    for rho in _check_ratios(ratios):
        g = sweep_geometry(base, pl, rho)
        case = bending_case(g, pl, m, curvature=curvature, kind=kind)
        rows.append(SweepRow(rho, poisson, kind, pl.name, case.ratio))
    return SweepTable(tuple(rows))


def fit_quadratic_constant(aspects, ratios) -> float:
    """Least-squares ``alpha`` in ``r = 1 + alpha rho^2``."""
    x = np.asarray(aspects, dtype=float) ** 2
    y = np.asarray(ratios, dtype=float) - 1
    return float(x @ y / (x @ x))
