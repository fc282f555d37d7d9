"""Scalar functions applied to matrices.

Matrix functions are only ever evaluated through a known eigen factorization
or through interpolation; rational functions act on vectors through partial
fractions and shifted solves, never by forming v(A)^-1.
"""

from __future__ import annotations

from math import comb

import numpy as np
import scipy.linalg as sla

from .interp import NewtonForm, RationalInterpolant, partial_fractions
from .jets import FactoredPoly
from .linalg import EigenFactorization, as_square_matrix, as_vector


def matfun_via_factorization(fac: EigenFactorization, f) -> np.ndarray:
    """f(A) = S diag(f(eigenvalues)) S^-1 for a vectorized scalar f."""
    if not fac.usable:
        raise ValueError("eigenvector matrix flagged unusable; cannot form f(A)")
    vals = np.asarray(f(fac.eigenvalues), dtype=np.complex128)
    if vals.shape != fac.eigenvalues.shape or not np.all(np.isfinite(vals)):
        raise ValueError("f undefined (non-finite) at an eigenvalue")
    return (fac.S * vals[np.newaxis, :]) @ fac.Sinv


def poly_apply(p: NewtonForm, A) -> np.ndarray:
    """Evaluate a Newton-form polynomial at a matrix argument.

    Nested multiplication over the (A - z_k I) factors.
    """
    A = as_square_matrix(A)
    n = A.shape[0]
    w = p.nodes.nodes
    c = p.coefficients
    P = c[-1] * np.eye(n, dtype=np.complex128)
    for j in range(c.size - 2, -1, -1):
        P = (A - w[j] * np.eye(n)) @ P
        P[np.diag_indices(n)] += c[j]
    return P


def rational_apply(r: RationalInterpolant, A, b) -> np.ndarray:
    """r(A) b through the partial fractions of u/v and repeated solves."""
    A = as_square_matrix(A)
    b = as_vector(b)
    if b.size != A.shape[0]:
        raise ValueError("dimension mismatch between A and b")
    pf = partial_fractions(r.numerator.power_coeffs(), r.denominator)
    out = np.zeros_like(b)
    if pf.quotient.size:
        # Horner in A applied directly to the vector
        acc = pf.quotient[-1] * b
        for c in pf.quotient[-2::-1]:
            acc = A @ acc + c * b
        out = out + acc
    for pole, res in zip(pf.poles, pf.residues):
        lu = sla.lu_factor(A - pole * np.eye(A.shape[0]))
        x = b
        for j, coeff in enumerate(res, start=1):
            x = sla.lu_solve(lu, x)
            if not np.all(np.isfinite(x)):
                raise ValueError(f"pole meets spectrum: solve at {pole} diverged")
            # 1/(z - pole)^j term: j solves against (A - pole I)
            out = out + coeff * x
    return out


class VExpDerivative:
    """The N-th derivative of z -> v(z) e^(t z) in closed form.

    (v exp_t)^(N)(z) = e^(t z) sum_{j<=min(N, deg v)} C(N,j) v^(j)(z) t^(N-j).
    Vectorized over z.
    """

    def __init__(self, v: FactoredPoly, t: float, N: int):
        if N < 0:
            raise ValueError("derivative order must be >= 0")
        self.v = v
        self.t = float(t)
        self.N = int(N)
        jmax = min(self.N, v.degree)
        self._weights = np.array(
            [comb(self.N, j) * self.t ** (self.N - j) for j in range(jmax + 1)]
        )
        self._jmax = jmax

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        derivs = self.v.eval(z, self._jmax)
        acc = np.zeros(z.shape, dtype=np.complex128)
        for j in range(self._jmax + 1):
            acc += self._weights[j] * derivs[j]
        return np.exp(self.t * z) * acc


def vexp_derivative_scalar(vd: VExpDerivative, z: complex) -> complex:
    return complex(vd(np.asarray(z)))
