"""Invariant checks on a decomposed element (ranks, orthogonality, patch test)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .decomposition import (
    Decomposition,
    basic_modes,
    decompose,
    higher_order_projector,
    numeric_rank,
)
from .geometry import BrickGeometry, IsotropicMaterial
from .stress import divergence_residual

PATCH_TOL = 1e-10
SYMMETRY_TOL = 0.0


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    line: str
    residual: float | None = None


def _rel(residual: float, scale: float) -> float:
    return residual / scale if scale > 0 else residual


def exact_projector_residual(g: BrickGeometry) -> Fraction:
    """max |Hh Grc| evaluated in rational arithmetic on the float geometry."""
    ge = BrickGeometry(*(Fraction(float(d)) for d in g.dims))
    P = higher_order_projector(ge).dot(basic_modes(ge))
    return max(abs(v) for v in P.ravel())


def _fmt(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def run_checks(
    g: BrickGeometry,
    m: IsotropicMaterial,
    K: np.ndarray | None = None,
    decomposition: Decomposition | None = None,
    label: str = "Ksigma",
) -> list[Check]:
    """Check a 24x24 stiffness (default: the hybrid element) for consistency.

    ``K`` replaces the hybrid stiffness, e.g. with a template instance; its
    higher-order part is then ``K - Kb``.
    """
    dec = decompose(g, m) if decomposition is None else decomposition
    K = dec.K if K is None else np.asarray(K, dtype=float)
    Kh = K - dec.Kb
    G = dec.Grc
    checks = []

    for M, name, expected in ((K, label, 18), (dec.Kb, "Kb", 6), (Kh, "Kh", 12)):
        rep = numeric_rank(M, name, expected)
        checks.append(Check(f"rank_{name}", rep.passed, rep.line()))

    asym = float(np.abs(K - K.T).max())
    ok = asym <= SYMMETRY_TOL
    checks.append(Check("symmetry", ok, f"{label} max |K - K^T| = {asym:.3g} {_fmt(ok)}", asym))

    hg = exact_projector_residual(g)
    ok = hg == 0
    checks.append(Check("HhGrc", ok, f"HhGrc max |entry| = {float(hg):.3g} {_fmt(ok)}", float(hg)))

    scale = float(np.abs(K).max())
    rigid = _rel(float(np.abs(K @ G[:, :6]).max()), scale)
    ok = rigid <= PATCH_TOL
    checks.append(Check("rigid", ok, f"{label}*rigid rel residual = {rigid:.3g} {_fmt(ok)}", rigid))

    LE = dec.L @ dec.E
    patch = _rel(float(np.abs(K @ G[:, 6:] - LE).max()), float(np.abs(LE).max()))
    ok = patch <= PATCH_TOL
    checks.append(Check("patch", ok, f"{label}*Gc - L*E rel residual = {patch:.3g} {_fmt(ok)}", patch))

    kb_patch = _rel(float(np.abs(dec.Kb @ G[:, 6:] - LE).max()), float(np.abs(LE).max()))
    ok = kb_patch <= PATCH_TOL
    checks.append(Check("patch_Kb", ok, f"Kb*Gc - L*E rel residual = {kb_patch:.3g} {_fmt(ok)}", kb_patch))

    kh_scale = float(np.abs(Kh).max())
    khg = _rel(float(np.abs(Kh @ G).max()), kh_scale)
    ok = khg <= PATCH_TOL
    checks.append(Check("KhGrc", ok, f"Kh*Grc rel residual = {khg:.3g} {_fmt(ok)}", khg))

    V = dec.volume
    P = np.linalg.solve(dec.Hh @ dec.Hh.T, dec.Hh)
    X = P @ Kh @ P.T / V
    recon = _rel(float(np.abs(Kh - V * dec.Hh.T @ X @ dec.Hh).max()), kh_scale)
    ok = recon <= 1e-9
    checks.append(Check("kernel", ok, f"Kh - V Hh^T X Hh rel residual = {recon:.3g} {_fmt(ok)}", recon))

    eig = np.linalg.eigvalsh(K)
    neg = float(-eig.min() / max(abs(eig.max()), np.finfo(float).tiny))
    ok = neg <= 1e-12
    checks.append(Check("psd", ok, f"{label} min eigenvalue / max = {-neg:.3g} {_fmt(ok)}", neg))

    el = dec.element
    sf = float(np.abs(el.S @ el.F - np.eye(el.F.shape[0])).max())
    ok = sf <= 1e-11
    checks.append(Check("SF", ok, f"S*F - I max = {sf:.3g} {_fmt(ok)}", sf))

    rng = np.random.default_rng(0)
    div = 0.0
    for _ in range(10):
        beta = rng.standard_normal(18)
        p = rng.uniform(-1, 1, 3)
        div = max(div, float(np.abs(divergence_residual(beta, p, g)).max()))
    ok = div == 0.0
    checks.append(Check("equilibrium", ok, f"max |div sigma| = {div:.3g} {_fmt(ok)}", div))
    return checks


def all_passed(checks) -> bool:
    return all(c.passed for c in checks)
