import numpy as np
import pytest

from taylorstab import _kernels as K
from taylorstab.taylorpoly import membership_poly

needs_numba = pytest.mark.skipif(not K.HAVE_NUMBA, reason="numba not installed")


def _boxes(seed=0, count=200):
    rng = np.random.default_rng(seed)
    xlo = rng.uniform(-2, 2, count)
    ylo = rng.uniform(-2, 2, count)
    w = rng.uniform(1e-6, 0.1, count)
    return xlo, xlo + w, ylo, ylo + w


@needs_numba
@pytest.mark.parametrize("n", [1, 5, 13])
def test_box_backends_agree_bitwise(n):
    args = _boxes()
    a = K.box_enclose(n, float(n), *args, backend="numba")
    b = K.box_enclose(n, float(n), *args, backend="numpy")
    for u, v in zip(a, b):
        assert np.array_equal(u, v)


@pytest.mark.parametrize("n", [2, 7])
def test_box_enclosure_contains_exact_values(n):
    xlo, xhi, ylo, yhi = _boxes(1, 40)
    gmin, gmax, _, _ = K.box_enclose(n, 1.0, xlo, xhi, ylo, yhi, backend="numpy")
    g = membership_poly(n)
    from fractions import Fraction

    for i in range(40):
        for fx in (0.0, 0.5, 1.0):
            px = Fraction(xlo[i]) + fx * (Fraction(xhi[i]) - Fraction(xlo[i]))
            py = Fraction(ylo[i]) + Fraction(1, 3) * (Fraction(yhi[i]) - Fraction(ylo[i]))
            val = g(px, py)
            assert Fraction(gmin[i]) <= val <= Fraction(gmax[i])


def test_g_values_matches_exact():
    g = membership_poly(6)
    xs = np.array([0.25, -1.5, 0.0])
    ys = np.array([0.5, 0.125, 1.0])
    got = K.g_values(6, 1.0, xs, ys)
    for a, b, v in zip(xs, ys, got):
        assert abs(float(g(a, b)) - v) < 1e-12


@pytest.mark.parametrize("backend", ["numpy", pytest.param("numba", marks=needs_numba)])
def test_aberth_finds_roots(backend):
    roots = np.array([1.0, -2.0, 0.5 + 1j, 0.5 - 1j])
    coeffs = np.poly(roots)[::-1]
    z0 = 1.5 * np.exp(2j * np.pi * (np.arange(4) + 0.25) / 4)
    z, it = K.aberth(coeffs, z0, backend=backend)
    assert it > 0
    assert np.allclose(np.sort_complex(z), np.sort_complex(roots), atol=1e-10)


def test_invalid_n():
    with pytest.raises(ValueError):
        K.box_enclose(0, 1.0, [0.0], [1.0], [0.0], [1.0])
