"""Parametrized stiffness family K(gamma) and bending-ratio tuning.

    K(gamma) = Kb + V Hh^T D X D Hh,    D = diag(gamma)

``gamma = 1`` reproduces the hybrid element.  Every member shares ``Kb`` and
hence passes the patch test; the congruence scaling keeps the higher-order
part symmetric positive semidefinite with rank 12 for any positive gamma.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bending import PLANES, beam_reference_energy, bending_displacements, parse_plane, sweep_geometry
from .decomposition import Decomposition, decompose
from .errors import InvalidParameterError
from .geometry import BrickGeometry, IsotropicMaterial

N_PARAMS = 12

DEFAULT_SAMPLES = (1.0, 2.0, 4.0, 8.0)
DEFAULT_POISSONS = (0.0, 0.3)


def check_gamma(gamma) -> np.ndarray:
    g = np.asarray(gamma, dtype=float)
    if g.shape != (N_PARAMS,):
        raise InvalidParameterError(f"gamma must have {N_PARAMS} entries, got shape {g.shape}")
    if not np.all(np.isfinite(g)) or np.any(g <= 0):
        raise InvalidParameterError(f"gamma entries must be finite and > 0: {g}")
    return g


def templated_stiffness(g: BrickGeometry, m: IsotropicMaterial, gamma, decomposition: Decomposition | None = None):
    gamma = check_gamma(gamma)
    dec = decompose(g, m) if decomposition is None else decomposition
    X = dec.X * np.outer(gamma, gamma)
    K = dec.Kb + dec.volume * dec.Hh.T @ X @ dec.Hh
    return 0.5 * (K + K.T)


@dataclass(frozen=True)
class _Sample:
    plane: str
    aspect: float
    poisson: float
    basic_energy: float
    projected: np.ndarray  # Hh u_b
    X: np.ndarray
    volume: float
    reference_energy: float

    def ratio(self, gamma: np.ndarray) -> float:
        h = gamma * self.projected
        return (self.basic_energy + 0.5 * self.volume * float(h @ self.X @ h)) / self.reference_energy


class BendingObjective:
    """Sum over planes, aspect ratios and Poisson ratios of ``(r - 1)^2``.

    Decompositions are computed once; each evaluation is a handful of 12x12
    quadratic forms.
    """

    def __init__(
        self,
        base: BrickGeometry | None = None,
        samples: Sequence[float] = DEFAULT_SAMPLES,
        poissons: Sequence[float] = DEFAULT_POISSONS,
        planes: Sequence[str] = PLANES,
        youngs: float = 1.0,
    ):
        if not samples:
            raise InvalidParameterError("at least one aspect-ratio sample is required")
        self.base = BrickGeometry(1.0, 1.0, 1.0) if base is None else base
        self.samples = tuple(float(s) for s in samples)
        self.poissons = tuple(float(n) for n in poissons)
        self.planes = tuple(parse_plane(p).name for p in planes)
        self.youngs = youngs
        self._cases = []
        cache = {}
        for nu in self.poissons:
            m = IsotropicMaterial(youngs, nu)
            for plane in self.planes:
                for rho in self.samples:
                    geom = sweep_geometry(self.base, plane, rho)
                    key = (geom, m)
                    if key not in cache:
                        cache[key] = decompose(geom, m)
                    dec = cache[key]
                    u = bending_displacements(geom, plane, 1.0, nu)
                    self._cases.append(
                        _Sample(
                            plane=plane,
                            aspect=rho,
                            poisson=nu,
                            basic_energy=0.5 * float(u @ dec.Kb @ u),
                            projected=dec.Hh @ u,
                            X=dec.X,
                            volume=dec.volume,
                            reference_energy=beam_reference_energy(geom, plane, 1.0, m),
                        )
                    )

    def ratios(self, gamma) -> list:
        gamma = check_gamma(gamma)
        return [(c.plane, c.aspect, c.poisson, c.ratio(gamma)) for c in self._cases]

    def __call__(self, gamma) -> float:
        gamma = check_gamma(gamma)
        return float(sum((c.ratio(gamma) - 1.0) ** 2 for c in self._cases))


def ratio_objective(gamma, base=None, samples=DEFAULT_SAMPLES, poissons=DEFAULT_POISSONS, planes=PLANES):
    return BendingObjective(base, samples, poissons, planes)(gamma)


@dataclass
class OptimizationReport:
    initial_gamma: np.ndarray
    final_gamma: np.ndarray
    initial_objective: float
    final_objective: float
    trace: list = field(repr=False)
    evaluations: int
    samples: tuple
    poissons: tuple
    planes: tuple
    seed: int
    final_step: float

    def as_dict(self) -> dict:
        return {
            "initial_gamma": [float(v) for v in self.initial_gamma],
            "final_gamma": [float(v) for v in self.final_gamma],
            "initial_objective": self.initial_objective,
            "final_objective": self.final_objective,
            "evaluations": self.evaluations,
            "trace": [float(v) for v in self.trace],
            "samples": list(self.samples),
            "poissons": list(self.poissons),
            "planes": list(self.planes),
            "seed": self.seed,
            "final_step": self.final_step,
        }


def optimize(
    objective: BendingObjective,
    initial_gamma=None,
    budget: int = 2000,
    seed: int = 0,
    step: float = 0.5,
    min_step: float = 1e-6,
) -> OptimizationReport:
    """Coordinate pattern search on ``log(gamma)``.

    Each sweep polls the coordinates in a seeded random order, stepping
    +step then -step and accepting the first improvement; a sweep with no
    improvement halves the step.  Stops at ``budget`` evaluations or when the
    step falls below ``min_step``.
    """
    if budget < 1:
        raise InvalidParameterError(f"budget must be >= 1, got {budget}")
    gamma0 = check_gamma(np.ones(N_PARAMS) if initial_gamma is None else initial_gamma).copy()
    x0 = np.log(gamma0)
    rng = np.random.default_rng(seed)

    x = x0
    best = objective(gamma0)
    f_init = best
    trace = [best]
    evals = 1
    while evals < budget and step >= min_step:
        improved = False
        for k in rng.permutation(N_PARAMS):
            for direction in (1.0, -1.0):
                if evals >= budget:
                    break
                trial = x.copy()
                trial[k] += direction * step
                f = objective(np.exp(trial))
                evals += 1
                accepted = f < best
                if accepted:
                    x, best = trial, f
                    improved = True
                trace.append(best)
                if accepted:
                    break
        if not improved:
            step *= 0.5

    return OptimizationReport(
        initial_gamma=gamma0,
        final_gamma=gamma0.copy() if x is x0 or np.array_equal(x, x0) else np.exp(x),
        initial_objective=f_init,
        final_objective=best,
        trace=trace,
        evaluations=evals,
        samples=objective.samples,
        poissons=objective.poissons,
        planes=objective.planes,
        seed=seed,
        final_step=step,
    )


def objective_is_monotone(trace) -> bool:
    return all(b <= a for a, b in zip(trace, trace[1:]))


def lipschitz_probe(objective, gamma, delta: float = 1e-6, seed: int = 0) -> float:
    """|J(gamma + d) - J(gamma)| / |d| for a random direction ``d``."""
    rng = np.random.default_rng(seed)
    d = rng.standard_normal(N_PARAMS)
    d *= delta / np.linalg.norm(d)
    gamma = check_gamma(gamma)
    return abs(objective(gamma + d) - objective(gamma)) / delta
