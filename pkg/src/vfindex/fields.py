"""Vector fields on subsets of R^n.

Two concrete kinds are used throughout:

* ``ExpressionField`` -- n expression-backed components with exact Jacobians
  from forward-mode jets; this is what scene files produce.
* ``CallableField`` -- components given by a vectorized callable, with a
  central finite-difference Jacobian.  Perturbed fields built by the
  verification layer are of this kind (their cutoff factors have no closed
  expression in the parser grammar).

All evaluation is batched: ``value`` maps an (m, n) array of points to an
(m, n) array of vectors and ``jacobian`` to (m, n, n) matrices.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import expr as ex


class VectorField:
    n: int

    def value(self, x):
        raise NotImplementedError

    def jacobian(self, x):
        raise NotImplementedError

    def value_at(self, p):
        return self.value(np.asarray(p, float)[None, :])[0]

    def jacobian_at(self, p):
        return self.jacobian(np.asarray(p, float)[None, :])[0]

    def norms(self, x):
        return np.linalg.norm(self.value(x), axis=-1)

    def __neg__(self):
        return NegatedField(self)


class ExpressionField(VectorField):
    def __init__(self, components):
        components = list(components)
        arities = {c.arity for c in components}
        if len(arities) != 1 or len(components) not in arities:
            raise ex.ArityMismatch(
                "field needs n components of arity n, got "
                f"{len(components)} components with arities {sorted(arities)}")
        self.components = components
        self.n = len(components)

    @classmethod
    def parse(cls, texts):
        texts = list(texts)
        return cls([ex.parse(t, len(texts)) for t in texts])

    def value(self, x):
        x = np.asarray(x, float)
        return np.stack([c.values(x) for c in self.components], axis=-1)

    def jacobian(self, x):
        x = np.asarray(x, float)
        rows = [c.jets(x)[1] for c in self.components]
        return np.stack(rows, axis=-2)

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.components) + ")"


class CallableField(VectorField):
    def __init__(self, n, fn, jac=None, fd_step=1e-6):
        self.n = n
        self.fn = fn
        self._jac = jac
        self.fd_step = fd_step

    def value(self, x):
        return self.fn(np.asarray(x, float))

    def jacobian(self, x):
        x = np.asarray(x, float)
        if self._jac is not None:
            return self._jac(x)
        h = self.fd_step
        cols = []
        for i in range(self.n):
            dx = np.zeros(self.n)
            dx[i] = h
            cols.append((self.fn(x + dx) - self.fn(x - dx)) / (2.0 * h))
        return np.stack(cols, axis=-1)


class NegatedField(VectorField):
    def __init__(self, base):
        self.base = base
        self.n = base.n

    def value(self, x):
        return -self.base.value(x)

    def jacobian(self, x):
        return -self.base.jacobian(x)


# --------------------------------------------------------------------------
# Polynomial constructors (tests and the random sweeps use these heavily)
# --------------------------------------------------------------------------

def monomials(n, max_degree):
    """Exponent tuples alpha with |alpha| <= max_degree, in a fixed order."""
    out = []
    for alpha in itertools.product(range(max_degree + 1), repeat=n):
        if sum(alpha) <= max_degree:
            out.append(alpha)
    out.sort(key=lambda a: (sum(a), a))
    return out


def polynomial_expression(coeffs, n):
    """Build an Expression from {exponent tuple: coefficient}."""
    root = None
    for alpha, c in coeffs.items():
        if c == 0.0:
            continue
        term = ex.Const(float(c))
        for i, k in enumerate(alpha):
            if k == 0:
                continue
            factor = ex.Var(i) if k == 1 else ex.Pow(ex.Var(i), k)
            term = ex.Mul(term, factor)
        root = term if root is None else ex.Add(root, term)
    if root is None:
        root = ex.Const(0.0)
    return ex.Expression(root, n)


def random_polynomial_expression(rng, n, max_degree, scale=1.0):
    coeffs = {}
    for alpha in monomials(n, max_degree):
        coeffs[alpha] = float(rng.normal(scale=scale))
    return polynomial_expression(coeffs, n)


def random_polynomial_field(rng, n, max_degree, scale=1.0):
    return ExpressionField(
        [random_polynomial_expression(rng, n, max_degree, scale) for _ in range(n)])
