import numpy as np
import pytest

from vfindex import degree as dg
from vfindex.errors import VanishingOnSphere


def smap(f, n, center=None, radius=1.0):
    c = np.zeros(n) if center is None else np.asarray(center, float)
    return dg.SphereMap(f, c, radius)


def rotation2(theta):
    c, s = np.cos(theta), np.sin(theta)
    R = np.array([[c, -s], [s, c]])
    return lambda x: x @ R.T


def power_map(k):
    def f(x):
        z = x[:, 0] + 1j * x[:, 1]
        w = z ** k if k >= 0 else np.conj(z) ** (-k)
        return np.stack([w.real, w.imag], axis=-1)
    return f


def test_empty_sphere_convention():
    assert dg.degree_empty().degree == 1


def test_s0_degrees():
    ident = smap(lambda x: x, 1)
    assert dg.degree_s0(ident).degree == 1
    refl = smap(lambda x: -x, 1)
    assert dg.degree_s0(refl).degree == -1
    const = smap(lambda x: np.ones_like(x), 1)
    assert dg.degree_s0(const).degree == 0


def test_s1_power_maps():
    for k in (-2, -1, 0, 1, 2, 3, 5):
        got = dg.degree_s1(smap(power_map(k), 2)).degree
        assert got == k, f"z^{k}"


def test_s1_rotation_and_radius_invariance():
    f = rotation2(0.7)
    assert dg.degree_s1(smap(f, 2)).degree == 1
    assert dg.degree_s1(smap(f, 2, radius=0.01)).degree == 1
    assert dg.degree_s1(smap(f, 2, radius=100.0)).degree == 1


def test_s1_vanishing_detected():
    bad = smap(lambda x: x - np.array([1.0, 0.0]), 2)
    with pytest.raises(VanishingOnSphere):
        dg.degree_s1(bad)


def test_s2_standard_maps():
    ident = smap(lambda x: x, 3)
    assert dg.degree_s2(ident).degree == 1
    antip = smap(lambda x: -x, 3)
    assert dg.degree_s2(antip).degree == -1
    refl = smap(lambda x: x * np.array([1.0, 1.0, -1.0]), 3)
    assert dg.degree_s2(refl).degree == -1


def test_s2_doubled_longitude():
    # suspension of z^2 over the poles: degree 2
    def g(x):
        z = x[:, 0] + 1j * x[:, 1]
        w = z ** 2
        return np.stack([w.real, w.imag, x[:, 2]], axis=-1)

    assert dg.degree_s2(smap(g, 3)).degree == 2


def test_degree_for_dispatch():
    assert dg.degree_for(smap(lambda x: x, 1)).degree == 1
    assert dg.degree_for(smap(lambda x: x, 2)).degree == 1
    assert dg.degree_for(smap(lambda x: x, 3)).degree == 1


def test_homotopy_invariance_s1():
    # interpolate between two degree-1 maps through nonvanishing maps
    f0 = rotation2(0.0)
    f1 = rotation2(1.2)
    for t in np.linspace(0.0, 1.0, 7):
        f = rotation2(1.2 * t)
        assert dg.degree_s1(smap(f, 2)).degree == 1
    assert dg.degree_s1(smap(f0, 2)).degree == dg.degree_s1(smap(f1, 2)).degree


def test_multiplicativity_s1():
    # deg(f o g) = deg f * deg g for power maps restricted to the circle
    def compose(j, k):
        fj, fk = power_map(j), power_map(k)

        def h(x):
            y = fk(x)
            norms = np.linalg.norm(y, axis=-1, keepdims=True)
            return fj(y / np.maximum(norms, 1e-300))

        return h

    for j, k in [(2, 3), (-1, 2), (3, -2)]:
        assert dg.degree_s1(smap(compose(j, k), 2)).degree == j * k


def test_oracle_matches_s1():
    rng = np.random.default_rng(5)
    for k in (-2, 0, 1, 3):
        m = smap(power_map(k), 2)
        assert dg.degree_oracle(m, seed=int(rng.integers(1e6))).degree == k


def test_oracle_matches_s2():
    for f, want in [(lambda x: x, 1), (lambda x: -x, -1),
                    (lambda x: x * np.array([1.0, 1.0, -1.0]), -1)]:
        assert dg.degree_oracle(smap(f, 3), seed=3).degree == want
