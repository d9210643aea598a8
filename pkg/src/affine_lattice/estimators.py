"""scikit-learn style wrappers around Ehrhart fitting.

``fit`` takes the geometric object (a polytope or a glued complex) and learns
its lattice count quasi-polynomial; ``predict`` evaluates it at dilations.
"""

from __future__ import annotations

from functools import partial

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .lattice import QuasiPolynomial, count, fit_quasi_polynomial
from .manifold import complex_volume, count_union_find
from .polytope import volume
from .validation import check_complex, check_dilations, check_polytope, check_positive


class _QuasiPolynomialModel(BaseEstimator):
    def predict(self, m):
        """Lattice counts at the given dilations, as an object array of Python ints."""
        check_is_fitted(self, "quasi_polynomial_")
        values = [self.quasi_polynomial_(k) for k in check_dilations(m)]
        return np.array([int(v) if v.denominator == 1 else v for v in values], dtype=object)

    def _store(self, report, volume_):
        self.quasi_polynomial_ = report.fitted
        self.period_ = report.fitted.period
        self.degree_ = report.fitted.degree
        self.counts_ = dict(report.counts)
        self.validated_up_to_ = report.validated_up_to
        self.volume_ = volume_
        return self


class EhrhartEstimator(_QuasiPolynomialModel):
    """Fit the Ehrhart quasi-polynomial m -> #((1/m) Z^n ∩ P) of a rational polytope.

    Parameters
    ----------
    period_hint : int, optional
        Period to fit with. Defaults to the lcm of the vertex denominators,
        which is always a valid period.
    n_validate : int, optional
        Extra samples per residue class used to validate the fit
        (default: degree + 2).
    workers : int
        Worker processes for the exact counts.

    Examples
    --------
    >>> est = EhrhartEstimator().fit([["0"], ["1/2"]])
    >>> est.period_
    2
    >>> est.predict([1, 2, 5]).tolist()
    [1, 2, 3]
    """

    def __init__(self, period_hint=None, n_validate=None, workers=1):
        self.period_hint = period_hint
        self.n_validate = n_validate
        self.workers = workers

    def fit(self, X, y=None):
        P = check_polytope(X)
        period = check_positive("period_hint", self.period_hint, allow_none=True) or P.denominator_lcm
        report = fit_quasi_polynomial(
            partial(count, P), P.ambient_dim, period, self.n_validate, self.workers
        )
        self.polytope_ = P
        return self._store(report, volume(P))


class ManifoldEhrhartEstimator(_QuasiPolynomialModel):
    """Fit the lattice count quasi-polynomial m -> L_M(m) of a glued complex.

    ``fit`` accepts an :class:`~affine_lattice.manifold.AffineComplex` or its
    dict form. After fitting, ``residual_`` is the quasi-polynomial
    L_M(m) - vol(M) m^n, and ``identity_holds_`` says whether it vanishes.
    """

    def __init__(self, period_hint=None, n_validate=None, workers=1):
        self.period_hint = period_hint
        self.n_validate = n_validate
        self.workers = workers

    def fit(self, X, y=None):
        C = check_complex(X)
        period = check_positive("period_hint", self.period_hint, allow_none=True) or C.period
        report = fit_quasi_polynomial(
            partial(count_union_find, C), C.ambient_dim, period, self.n_validate, self.workers
        )
        self.complex_ = C
        self._store(report, complex_volume(C))
        self.residual_ = report.fitted - QuasiPolynomial.monomial(self.volume_, C.ambient_dim)
        self.identity_holds_ = self.residual_.is_zero()
        return self
