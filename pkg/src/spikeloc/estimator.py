"""Scikit-learn style front end: fit on Fourier samples, predict membership."""

from __future__ import annotations

import numbers

import numpy as np
from sklearn.base import BaseEstimator

from .acquisition import PeriodicSignal, RealSignal
from .localizer import (
    DEFAULT_GRID_DENSITY,
    REFINE_TOL,
    indicator_periodic,
    indicator_real,
    localize_periodic,
    localize_real,
)
from .params import PERIODIC, REAL_LINE, ProblemParams


def _check_finite(a: np.ndarray, name: str) -> np.ndarray:
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def as_signal(X, setting: str, k_max: float):
    """Coerce fit() input into a signal object.

    Accepts PeriodicSignal / RealSignal directly.  Arrays: periodic wants the
    2*k_max+1 complex values at k = -k_max..k_max (1-d complex, or a
    (2k_max+1, 2) real [re, im] matrix); real-line wants an (n, 3) real
    matrix of [k, re, im] rows on a uniform grid covering [-k_max, k_max].
    """
    if isinstance(X, (PeriodicSignal, RealSignal)):
        want = PeriodicSignal if setting == PERIODIC else RealSignal
        if not isinstance(X, want):
            raise ValueError(f"{type(X).__name__} does not match setting={setting!r}")
        return X
    A = np.asarray(X)
    if setting == PERIODIC:
        n = 2 * int(k_max) + 1
        if A.ndim == 2 and A.shape[1] == 2:
            A = _check_finite(A.astype(float), "X")
            values = A[:, 0] + 1j * A[:, 1]
        elif A.ndim == 1:
            values = A.astype(complex)
            _check_finite(values.view(float), "X")
        else:
            raise ValueError(
                f"periodic input must be 1-d complex or (n, 2) [re, im]; got shape {A.shape}"
            )
        if values.size != n:
            raise ValueError(f"expected {n} samples for k_max={k_max}, got {values.size}")
        return PeriodicSignal(K=int(k_max), values=values)
    if A.ndim != 2 or A.shape[1] != 3:
        raise ValueError(f"real-line input must be (n, 3) [k, re, im]; got shape {A.shape}")
    A = _check_finite(A.astype(float), "X")
    k = A[:, 0]
    dk = np.diff(k)
    if k.size < 3 or dk.min() <= 0 or (dk.max() - dk.min()) > 1e-9 * dk.max():
        raise ValueError("k column must be a strictly increasing uniform grid")
    if abs(k[0] + k_max) > 1e-9 or abs(k[-1] - k_max) > 1e-9:
        raise ValueError(f"k grid must cover [-k_max, k_max] = [{-k_max}, {k_max}]")
    return RealSignal(K=float(k_max), h=float(dk.mean()), values=A[:, 1] + 1j * A[:, 2])


class SpikeLocalizer(BaseEstimator):
    """Recover the support of dominant spikes from noisy spectrum samples.

    The model smooths the truncated inverse Fourier transform of the samples
    with a Gaussian whose width is fixed in closed form by (beta, omega),
    thresholds its magnitude, and stores the resulting union of intervals.

    Parameters
    ----------
    beta : lower bound on dominant spike weights (in (0, 1])
    omega : upper bound on the residue mass (in [0, beta))
    k_max : frequency cutoff of the data
    setting : "periodic" (integer frequencies on the circle) or "real"
    eps : assumed noise bound carried through to diagnostics (optional)
    window : search window, real-line setting only
    grid_density, refine_tol : trace resolution and endpoint bisection tol

    Attributes after fit
    --------------------
    intervals_ : IntervalSet, the estimated support
    trace_ : IndicatorTrace sampled on the search grid
    derived_ : DerivedParams (kernel width, threshold, noise cap)
    threshold_ : float, the decision threshold
    n_intervals_ : int
    """

    def __init__(
        self,
        beta: float = 0.5,
        omega: float = 0.0,
        k_max: float = 8,
        setting: str = PERIODIC,
        eps: float = 0.0,
        window: tuple[float, float] = (-1.0, 1.0),
        grid_density: float = DEFAULT_GRID_DENSITY,
        refine_tol: float = REFINE_TOL,
    ):
        self.beta = beta
        self.omega = omega
        self.k_max = k_max
        self.setting = setting
        self.eps = eps
        self.window = window
        self.grid_density = grid_density
        self.refine_tol = refine_tol

    def _problem(self) -> ProblemParams:
        return ProblemParams(K=self.k_max, beta=self.beta, omega=self.omega, eps=self.eps)

    def fit(self, X, y=None):
        """Estimate the support from one signal's worth of Fourier samples."""
        if self.setting not in (PERIODIC, REAL_LINE):
            raise ValueError(f"setting must be 'periodic' or 'real', got {self.setting!r}")
        p = self._problem()
        sig = as_signal(X, self.setting, self.k_max)
        if self.setting == PERIODIC:
            support, trace = localize_periodic(
                sig, p, grid_density=self.grid_density, refine_tol=self.refine_tol
            )
        else:
            support, trace, sig = localize_real(
                sig, p, grid_density=self.grid_density, window=self.window,
                refine_tol=self.refine_tol, return_signal=True,
            )
        self.signal_ = sig
        self.intervals_ = support
        self.trace_ = trace
        self.threshold_ = trace.threshold
        from .params import derive

        self.derived_ = derive(p, self.setting)
        self.n_intervals_ = len(support.intervals)
        return self

    def _check_fitted(self):
        if not hasattr(self, "intervals_"):
            raise RuntimeError("this SpikeLocalizer instance is not fitted yet")

    def predict(self, X):
        """Boolean membership of locations in the estimated support."""
        self._check_fitted()
        x = np.atleast_1d(np.asarray(X, dtype=float))
        if isinstance(X, numbers.Real):
            return bool(self.intervals_.contains_point(float(X)))
        return np.array([self.intervals_.contains_point(float(v)) for v in x.ravel()],
                        dtype=bool).reshape(x.shape)

    def score_samples(self, X):
        """Indicator magnitude at the given locations."""
        self._check_fitted()
        x = np.asarray(X, dtype=float)
        if self.setting == PERIODIC:
            return indicator_periodic(self.signal_, self.derived_, x)
        return indicator_real(self.signal_, self.derived_, x, check=False)

    def fit_predict(self, X, locations):
        """Fit on a signal, then report membership for `locations`."""
        return self.fit(X).predict(locations)
