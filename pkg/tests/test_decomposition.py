from fractions import Fraction

import numpy as np
import pytest
from numpy.testing import assert_allclose

from brick_template.decomposition import (
    basic_modes,
    basic_stiffness,
    decompose,
    extract_ho_kernel,
    higher_order_projector,
    higher_order_stiffness,
    lumping_matrix,
    numeric_rank,
    strain_modes,
    weight_matrix,
)
from brick_template.errors import DecompositionInconsistencyError, IncompatibleMatricesError
from brick_template.geometry import NODE_SIGNS, BrickGeometry, IsotropicMaterial, elasticity_matrix
from brick_template.stress import element_matrices, physical_stiffness

from conftest import EXACT_BRICKS, random_case

# Force lumping matrix as tabulated; tokens stand for +-(product)/4.
TABLE_L = (
    "-bc 0 0 -ac 0 -ab",
    "0 -ac 0 -bc -ab 0",
    "0 0 -ab 0 -ac -bc",
    "bc 0 0 -ac 0 -ab",
    "0 -ac 0 bc -ab 0",
    "0 0 -ab 0 -ac bc",
    "bc 0 0 ac 0 -ab",
    "0 ac 0 bc -ab 0",
    "0 0 -ab 0 ac bc",
    "-bc 0 0 ac 0 -ab",
    "0 ac 0 -bc -ab 0",
    "0 0 -ab 0 ac -bc",
    "-bc 0 0 -ac 0 ab",
    "0 -ac 0 -bc ab 0",
    "0 0 ab 0 -ac -bc",
    "bc 0 0 -ac 0 ab",
    "0 -ac 0 bc ab 0",
    "0 0 ab 0 -ac bc",
    "bc 0 0 ac 0 ab",
    "0 ac 0 bc ab 0",
    "0 0 ab 0 ac bc",
    "-bc 0 0 ac 0 ab",
    "0 ac 0 -bc ab 0",
    "0 0 ab 0 ac -bc",
)


def tokens_to_matrix(table, g):
    a, b, c = g.dims
    value = {"ab": a * b / 4, "ac": a * c / 4, "bc": b * c / 4}
    out = np.empty((len(table), len(table[0].split())), dtype=object)
    for r, line in enumerate(table):
        for k, tok in enumerate(line.split()):
            out[r, k] = 0 if tok == "0" else (-1 if tok[0] == "-" else 1) * value[tok.lstrip("-")]
    return out


def hourglass_projector(g):
    """Hh built from the four hourglass sign vectors (xi eta, xi mu, eta mu, xi eta mu)."""
    a, b, c = g.dims
    xi, eta, mu = NODE_SIGNS.T
    patterns = {
        "xe": xi * eta,
        "xm": xi * mu,
        "em": eta * mu,
        "xem": xi * eta * mu,
    }
    # (direction, pattern, coefficient) per column of Hh^T
    columns = [
        (0, "xe", -a * b / 4),
        (0, "xm", -a * c / 4),
        (1, "xe", -a * b / 4),
        (1, "em", -b * c / 4),
        (2, "xm", -a * c / 4),
        (2, "em", -b * c / 4),
        (0, "em", b * c / 4),
        (1, "xm", a * c / 4),
        (2, "xe", a * b / 4),
        (0, "xem", a * b * c / 8),
        (1, "xem", a * b * c / 8),
        (2, "xem", a * b * c / 8),
    ]
    HT = np.empty((24, 12), dtype=object)
    HT[...] = 0
    for k, (d, pat, coef) in enumerate(columns):
        for node in range(8):
            HT[3 * node + d, k] = int(patterns[pat][node]) * coef
    return HT.T


class TestLumping:
    @pytest.mark.parametrize("g", EXACT_BRICKS, ids=str)
    def test_matches_token_table(self, g):
        assert np.array_equal(lumping_matrix(g), tokens_to_matrix(TABLE_L, g))

    def test_node1_x_row(self, brick321):
        b, c, a = brick321.b, brick321.c, brick321.a
        assert_allclose(lumping_matrix(brick321)[0], [-b * c / 4, 0, 0, -a * c / 4, 0, -a * b / 4])

    def test_node7_z_row(self, brick321):
        a, b, c = brick321.dims
        assert_allclose(lumping_matrix(brick321)[20], [0, 0, a * b / 4, 0, a * c / 4, b * c / 4])

    @pytest.mark.parametrize("g", EXACT_BRICKS, ids=str)
    def test_lumps_constant_strains_to_volume(self, g):
        LtG = lumping_matrix(g).T.dot(strain_modes(g))
        assert np.array_equal(LtG, g.volume() * np.eye(6, dtype=int))


class TestProjector:
    def test_node1_x_row(self, brick321):
        a, b, c = brick321.dims
        expected = [-a * b / 4, -a * c / 4, 0, 0, 0, 0, b * c / 4, 0, 0, -a * b * c / 8, 0, 0]
        assert_allclose(higher_order_projector(brick321).T[0], expected)

    def test_node2_x_row(self, brick321):
        a, b, c = brick321.dims
        expected = [a * b / 4, a * c / 4, 0, 0, 0, 0, b * c / 4, 0, 0, a * b * c / 8, 0, 0]
        assert_allclose(higher_order_projector(brick321).T[3], expected)

    @pytest.mark.parametrize("g", EXACT_BRICKS, ids=str)
    def test_table_matches_hourglass_patterns(self, g):
        assert np.array_equal(higher_order_projector(g), hourglass_projector(g))

    @pytest.mark.parametrize("g", EXACT_BRICKS, ids=str)
    def test_column_sums_zero(self, g):
        assert all(v == 0 for v in higher_order_projector(g).sum(axis=1))

    @pytest.mark.parametrize("g", EXACT_BRICKS, ids=str)
    def test_orthogonal_to_basic_modes_exactly(self, g):
        HG = higher_order_projector(g).dot(basic_modes(g))
        assert all(v == 0 for v in HG.ravel())

    def test_full_row_rank(self, brick321):
        assert numeric_rank(higher_order_projector(brick321)).rank == 12


class TestWeights:
    def test_entries(self, brick321):
        a, b, c = brick321.dims
        W = weight_matrix(brick321)
        assert W[0, 0] == pytest.approx(1 / (a * b))
        assert W[9, 9] == pytest.approx(1 / (a * b * c))
        assert np.count_nonzero(W - np.diag(np.diag(W))) == 0

    def test_unit_cube(self, unit_cube):
        assert np.array_equal(weight_matrix(unit_cube), np.eye(12))

    @pytest.mark.parametrize("g", EXACT_BRICKS, ids=str)
    def test_normalizes_projector(self, g):
        # every nonzero entry of W Hh is +-1/4 or +-1/8
        WH = weight_matrix(g).dot(higher_order_projector(g))
        assert {abs(v) for v in WH.ravel()} <= {0, Fraction(1, 4), Fraction(1, 8)}


class TestBasicModes:
    def test_translation(self, brick321):
        assert np.array_equal(basic_modes(brick321)[:, 0], np.tile([1, 0, 0], 8))

    def test_strain_column(self, brick321):
        assert basic_modes(brick321)[3, 6] == brick321.a / 2

    def test_rotation_about_x(self, brick321):
        _, b, c = brick321.dims
        assert_allclose(basic_modes(brick321)[18:21, 3], [0, -c / 2, b / 2])

    def test_rank(self, brick321):
        assert numeric_rank(basic_modes(brick321)).rank == 12


class TestBasicStiffness:
    def test_rank(self, unit_cube, steel_like):
        assert numeric_rank(basic_stiffness(unit_cube, steel_like)).rank == 6

    def test_translation(self, brick321, steel_like):
        Kb = basic_stiffness(brick321, steel_like)
        assert np.abs(Kb @ basic_modes(brick321)[:, 0]).max() <= 1e-15 * np.abs(Kb).max()

    def test_constant_strain_forces(self, unit_cube):
        m = IsotropicMaterial(1.0, 0.0)
        Kb = basic_stiffness(unit_cube, m)
        expected = lumping_matrix(unit_cube) @ elasticity_matrix(m)
        assert_allclose(Kb @ strain_modes(unit_cube), expected, atol=1e-15)

    def test_psd(self, brick321, steel_like):
        assert np.linalg.eigvalsh(basic_stiffness(brick321, steel_like)).min() >= -1e-14


class TestHigherOrder:
    def test_rank(self, unit_cube, steel_like):
        dec = decompose(unit_cube, steel_like)
        assert numeric_rank(dec.Kh).rank == 12

    def test_sum(self, brick321, steel_like):
        dec = decompose(brick321, steel_like)
        assert np.abs(dec.Kh + dec.Kb - dec.K).max() <= 1e-15 * np.abs(dec.K).max()

    def test_constant_strain_annihilated(self, unit_cube, steel_like):
        dec = decompose(unit_cube, steel_like)
        assert np.abs(dec.Kh @ dec.Grc[:, 6]).max() <= 1e-10 * np.abs(dec.Kh).max()

    def test_provenance_mismatch(self, brick321, steel_like):
        el = element_matrices(brick321, steel_like)
        other = decompose(brick321, IsotropicMaterial(1.0, 0.2))
        with pytest.raises(IncompatibleMatricesError):
            higher_order_stiffness(el, other)

    def test_shape_mismatch(self):
        with pytest.raises(IncompatibleMatricesError):
            higher_order_stiffness(np.eye(24), np.eye(12))

    def test_psd(self, brick321, steel_like):
        Kh = decompose(brick321, steel_like).Kh
        assert np.linalg.eigvalsh(Kh).min() >= -1e-12 * np.abs(Kh).max()

    def test_spectral_disjointness(self, brick321, steel_like):
        dec = decompose(brick321, steel_like)
        w, v = np.linalg.eigh(dec.Kh)
        for k in np.flatnonzero(w > 1e-10 * w.max()):
            assert np.abs(dec.Grc.T @ v[:, k]).max() <= 1e-9


class TestKernel:
    def test_reconstruction(self, unit_cube, steel_like):
        dec = decompose(unit_cube, steel_like)
        V = dec.volume
        residual = np.abs(dec.Kh - V * dec.Hh.T @ dec.X @ dec.Hh).max()
        assert residual <= 1e-9 * np.abs(dec.Kh).max()

    def test_symmetric(self, brick321, steel_like):
        X = decompose(brick321, steel_like).X
        assert np.abs(X - X.T).max() <= 1e-12 * np.abs(X).max()

    def test_linearity(self, brick321, steel_like):
        dec = decompose(brick321, steel_like)
        V = dec.volume
        X2, _ = extract_ho_kernel(V * dec.Hh.T @ (2 * dec.X) @ dec.Hh, dec.Hh, dec.W, V)
        assert_allclose(X2, 2 * dec.X, rtol=1e-10, atol=1e-12 * np.abs(dec.X).max())

    def test_R_undoes_weights(self, brick321, steel_like):
        dec = decompose(brick321, steel_like)
        assert_allclose(dec.W.T @ dec.R @ dec.W, dec.X, rtol=1e-12, atol=1e-15)

    def test_inconsistent_input(self, brick321, steel_like):
        dec = decompose(brick321, steel_like)
        with pytest.raises(DecompositionInconsistencyError):
            extract_ho_kernel(dec.K, dec.Hh, dec.W, dec.volume)


class TestNumericRank:
    def test_zero(self):
        assert numeric_rank(np.zeros((24, 24))).rank == 0

    def test_identity(self):
        assert numeric_rank(np.eye(24)).rank == 24

    def test_report(self, brick321, steel_like):
        rep = numeric_rank(physical_stiffness(brick321, steel_like), "Ksigma", 18)
        assert rep.rank == 18 and rep.passed
        assert rep.singular_values.shape == (24,)
        assert rep.line() == "rank(Ksigma)=18 expected 18 PASS"

    def test_report_fail_flag(self):
        assert not numeric_rank(np.eye(3), "I", 2).passed


def test_rank_triple_random(rng):
    for _ in range(50):
        g, m = random_case(rng)
        dec = decompose(g, m)
        assert (numeric_rank(dec.K).rank, numeric_rank(dec.Kb).rank, numeric_rank(dec.Kh).rank) == (18, 6, 12)
