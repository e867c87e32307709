from fractions import Fraction

import numpy as np
import pytest

from brick_template.geometry import NODE_SIGNS, BrickGeometry, IsotropicMaterial


@pytest.fixture
def unit_cube():
    return BrickGeometry(1.0, 1.0, 1.0)


@pytest.fixture
def brick321():
    return BrickGeometry(3.0, 2.0, 1.0)


@pytest.fixture
def steel_like():
    return IsotropicMaterial(1.0, 0.3)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


EXACT_BRICKS = [
    BrickGeometry(Fraction(1), Fraction(1), Fraction(1)),
    BrickGeometry(Fraction(3), Fraction(2), Fraction(1)),
    BrickGeometry(Fraction(7), Fraction(5), Fraction(2)),
]


def random_case(rng, youngs=None):
    a, b, c = rng.uniform(0.1, 10.0, 3)
    E = youngs if youngs is not None else float(rng.choice([1.0, 210e9]))
    nu = float(rng.uniform(0.0, 0.45))
    return BrickGeometry(a, b, c), IsotropicMaterial(E, nu)


def trilinear_B(p, g):
    """6x24 strain-displacement matrix of the trilinear brick (oracle only)."""
    xi = np.asarray(p, dtype=float)
    dN = np.zeros((3, 8))
    for i, s in enumerate(NODE_SIGNS):
        f = 1 + s * xi
        dN[0, i] = s[0] * f[1] * f[2] / 8
        dN[1, i] = s[1] * f[0] * f[2] / 8
        dN[2, i] = s[2] * f[0] * f[1] / 8
    dN *= (2 / np.array([float(d) for d in g.dims]))[:, None]
    B = np.zeros((6, 24))
    for i in range(8):
        x, y, z = dN[:, i]
        c = 3 * i
        B[0, c] = x
        B[1, c + 1] = y
        B[2, c + 2] = z
        B[3, c], B[3, c + 1] = y, x
        B[4, c + 1], B[4, c + 2] = z, y
        B[5, c], B[5, c + 2] = z, x
    return B


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: dict = {}


@pytest.fixture
def acceptance():
    def record(number: int, title: str, passed: bool, detail: str) -> str:
        line = f"criterion {number:2d} {'PASS' if passed else 'FAIL'}  {title}: {detail}"
        ACCEPTANCE_LINES[number] = line
        print(line)
        return line

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
