import numpy as np
import pytest

from vfindex.complexfield import (ComplexField, complex_verdict, partition,
                                  xi1_family)
from vfindex.expr import parse
from vfindex.fields import ExpressionField
from vfindex.manifold import Hypersurface

TORUS_G = "(x1^2 + x2^2 + x3^2 + 3)^2 - 16*(x1^2 + x2^2)"
TORUS_BB = [[-3.5, 3.5], [-3.5, 3.5], [-1.5, 1.5]]


def torus_field():
    T = Hypersurface(parse(TORUS_G, 3), 3, TORUS_BB, "torus2")
    xi = ExpressionField.parse(["0 - x2", "x1", "0"])
    eta = ExpressionField.parse(["0 - 0.5*x2", "0.5*x1", "0"])
    return ComplexField(T, xi, eta)


def sphere_field():
    S = Hypersurface(parse("x1^2 + x2^2 + x3^2 - 1", 3), 3,
                     [[-1.5, 1.5]] * 3, "sphere2")
    return ComplexField(S, ExpressionField.parse(["0", "0", "1"]),
                        ExpressionField.parse(["0", "0", "0"]))


def test_square_norm_formula():
    cf = torus_field()
    pts = np.array([[3.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    q = cf.square_norm(pts)
    # eta = xi/2 and both are tangential here, so q = 0.75|xi|^2 + i |xi|^2
    xi_t, eta_t = cf.tangential_parts(pts)
    n2 = np.sum(xi_t * xi_t, axis=-1)
    assert q.real == pytest.approx(0.75 * n2)
    assert q.imag == pytest.approx(n2)


def test_tangential_parts_are_tangential():
    cf = sphere_field()
    th = np.linspace(0.1, np.pi - 0.1, 40)
    pts = np.stack([np.sin(th), np.zeros_like(th), np.cos(th)], axis=-1)
    xi_t, _ = cf.tangential_parts(pts)
    assert np.max(np.abs(np.sum(xi_t * pts, axis=-1))) < 1e-12


def test_torus_certifies_nonvanishing():
    v = complex_verdict(torus_field())
    assert v.decided and v.nonvanishing
    assert v.min_abs > v.threshold
    assert v.chi == 0 and v.consistent


def test_sphere_produces_witness():
    v = complex_verdict(sphere_field())
    assert v.decided and not v.nonvanishing
    assert v.min_abs < 1e-3
    assert abs(abs(v.witness[2]) - 1.0) < 0.1  # near a pole
    assert v.chi == 2 and v.consistent


def test_partition_labels():
    cf = torus_field()
    pts = np.array([[3.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
    assert list(partition(cf, pts)) == ["+", "+"]  # |xi| > |eta| everywhere
    swapped = ComplexField(cf.surface, cf.eta, cf.xi)
    assert list(partition(swapped, pts)) == ["-", "-"]


def test_xi1_family_endpoints():
    cf = torus_field()
    pts = np.array([[3.0, 0.0, 0.0]])
    xi_t, eta_t = cf.tangential_parts(pts)
    assert xi1_family(xi_t, eta_t, 0.0) == pytest.approx(xi_t)
    assert xi1_family(xi_t, eta_t, 1.0) == pytest.approx(eta_t)
    assert xi1_family(xi_t, eta_t, 1.0, sign=-1) == pytest.approx(-eta_t)
    # interpolates never vanish when the square norm does not
    for t in np.linspace(0, 1, 11):
        assert np.linalg.norm(xi1_family(xi_t, eta_t, t)) > 0.1
