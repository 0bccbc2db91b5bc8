import numpy as np
import pytest

from vfindex import expr as ex
from vfindex.errors import ArityMismatch, ExprSyntaxError, UnknownVariable


def fd_gradient(e, p, h=1e-6):
    p = np.asarray(p, float)
    out = np.zeros_like(p)
    for i in range(len(p)):
        dp = np.zeros_like(p)
        dp[i] = h
        out[i] = (e.evaluate(p + dp) - e.evaluate(p - dp)) / (2 * h)
    return out


def test_basic_evaluation():
    e = ex.parse("x1^2 + 2*x2 - 1", 2)
    assert e.evaluate([3.0, 0.5]) == pytest.approx(9.0)
    vals = e.values(np.array([[0.0, 0.0], [1.0, 1.0]]))
    assert vals == pytest.approx([-1.0, 2.0])


def test_precedence_and_unary():
    assert ex.parse("2 + 3*4", 1).evaluate([0.0]) == 14.0
    assert ex.parse("-x1^2", 1).evaluate([2.0]) == -4.0
    assert ex.parse("(2 + 3)*4", 1).evaluate([0.0]) == 20.0
    assert ex.parse("2 - 3 - 4", 1).evaluate([0.0]) == -5.0
    assert ex.parse("16/4/2", 1).evaluate([0.0]) == 2.0


def test_functions():
    e = ex.parse("sin(x1)^2 + cos(x1)^2", 1)
    for t in (0.0, 0.3, -2.0):
        assert e.evaluate([t]) == pytest.approx(1.0)
    assert ex.parse("exp(0)", 1).evaluate([5.0]) == 1.0
    assert ex.parse("sqrt(x1)", 1).evaluate([9.0]) == 3.0


def test_roundtrip_through_printer():
    texts = [
        "x1^2 + x2^2 - 1",
        "(x1 - 1)*(x1 + 1)/(x2 + 2)",
        "-x1*(x2 - 3)^2",
        "sqrt(x1^2 + x2^2)*x1",
        "x1 - x2 - 1",
        "x1/(x2*x1)",
    ]
    for t in texts:
        e = ex.parse(t, 2)
        again = ex.parse(str(e), 2)
        p = np.array([0.7, -1.3])
        assert again.evaluate(p) == pytest.approx(e.evaluate(p), abs=1e-14)


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(7)
    e = ex.parse("sin(x1*x2) + x3^3 - exp(x2)/2 + sqrt(x1^2 + 4)", 3)
    for _ in range(5):
        p = rng.uniform(-1.5, 1.5, size=3)
        grad = e.gradient(p)
        assert grad == pytest.approx(fd_gradient(e, p), rel=1e-5, abs=1e-6)


def test_jets_are_batched():
    e = ex.parse("x1*x2 + x2^2", 2)
    pts = np.array([[1.0, 2.0], [0.0, -1.0], [3.0, 0.5]])
    vals, grads = e.jets(pts)
    assert vals.shape == (3,)
    assert grads.shape == (3, 2)
    assert grads[0] == pytest.approx([2.0, 5.0])


def test_sqrt_kink_at_zero():
    e = ex.parse("sqrt(x1^2 + x2^2)", 2)
    jv = e.eval_jet(np.array([0.0, 0.0]))
    assert jv.value == 0.0
    assert np.all(jv.partials == 0.0)
    assert jv.kink


def test_syntax_error_offset():
    with pytest.raises(ExprSyntaxError) as info:
        ex.parse("x1 +", 1)
    assert info.value.offset == 4


def test_unknown_variable_and_arity():
    with pytest.raises(UnknownVariable):
        ex.parse("y + 1", 2)
    with pytest.raises(ArityMismatch):
        ex.parse("x3 + 1", 2)
    with pytest.raises(ArityMismatch):
        ex.parse("x1", 5)


def test_pow_requires_integer_exponent():
    with pytest.raises(ExprSyntaxError):
        ex.parse("x1^x2", 2)
    with pytest.raises(ExprSyntaxError):
        ex.parse("x1^(-2)", 1)
