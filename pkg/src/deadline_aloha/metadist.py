"""Link-quality distribution across the network: moments, beta fit, classes.

The per-link transmission success probability (TSP) is a random variable over
network geometries.  Its first two moments have closed forms driven by the
network-average transmit occupancy ``x1`` and success-absorption mass ``ys``;
the full distribution is approximated by the beta distribution matching those
moments, then discretized into equal-mass percentile classes, each summarised
by its median.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betainc, betaln

from .config import NetworkParams

#: Variance below this is treated as a point mass (beta fit would blow up).
DEGENERATE_VAR_TOL = 1e-14

MACRO_SUM_TOL = 1e-10


class DegenerateBetaError(ValueError):
    """The TSP distribution has (numerically) zero variance."""


@dataclass(frozen=True)
class MacroState:
    """Network-average device state, a distribution over four categories.

    x0 backoff occupancy, x1 transmit occupancy, ys cumulative success
    absorption, yf cumulative timeout absorption.  Sums to one.
    """

    x0: float
    x1: float
    ys: float
    yf: float

    def __post_init__(self) -> None:
        for name in ("x0", "x1", "ys", "yf"):
            object.__setattr__(self, name, float(getattr(self, name)))
            v = getattr(self, name)
            if not -MACRO_SUM_TOL <= v <= 1.0 + MACRO_SUM_TOL:
                raise ValueError(f"macro component {name} out of [0, 1]: {v}")
        total = self.x0 + self.x1 + self.ys + self.yf
        if abs(total - 1.0) > MACRO_SUM_TOL:
            raise ValueError(f"macro state must sum to 1, got {total!r}")

    def as_array(self) -> np.ndarray:
        return np.array([self.x0, self.x1, self.ys, self.yf])


@dataclass(frozen=True)
class MetaModel:
    """Beta approximation of the TSP distribution plus its class grid.

    m1, m2    first two TSP moments
    a, b      beta shape parameters (nan when degenerate)
    omegas    class boundaries, 0 = omega_0 < ... < omega_L = 1
              (None when degenerate)
    medians   per-class median TSPs, ascending
    degenerate  True when the distribution is a point mass at m1
    """

    m1: float
    m2: float
    a: float
    b: float
    omegas: np.ndarray | None
    medians: np.ndarray
    degenerate: bool

    @property
    def n_classes(self) -> int:
        return len(self.medians)


def _moment_scale(net: NetworkParams, x1: float) -> float:
    """Common positive factor 2 pi^2 lam R^2 x1 theta^(2/eta) / sin(2 pi/eta)."""
    return (
        2.0
        * math.pi**2
        * net.intensity
        * net.link_distance**2
        * x1
        * net.theta ** (2.0 / net.eta)
        / math.sin(2.0 * math.pi / net.eta)
    )


def moment_m1(net: NetworkParams, x1: float) -> float:
    """Mean TSP over links; equals 1 with no interferers or no activity."""
    if not 0.0 <= x1 <= 1.0:
        raise ValueError(f"x1 must lie in [0, 1], got {x1}")
    if net.intensity == 0.0 or x1 == 0.0:
        return 1.0
    return math.exp(-_moment_scale(net, x1) / net.eta)


def moment_m2(net: NetworkParams, x1: float, ys: float) -> float:
    """Second TSP moment; needs the success-absorption mass ``ys < 1``."""
    if not 0.0 <= x1 <= 1.0:
        raise ValueError(f"x1 must lie in [0, 1], got {x1}")
    if not 0.0 <= ys < 1.0:
        raise ValueError(f"ys must lie in [0, 1), got {ys}")
    if net.intensity == 0.0 or x1 == 0.0:
        return 1.0
    bracket = 2.0 * net.eta - (net.eta - 2.0) * x1 / (1.0 - ys)
    return math.exp(-_moment_scale(net, x1) / net.eta**2 * bracket)


def reg_inc_beta(gamma, a: float, b: float):
    """Regularized incomplete beta function I_gamma(a, b).

    Thin wrapper over the SciPy routine (continued fraction with log-gamma
    prefactor), with the domain checks this package relies on.  Accepts a
    scalar or array ``gamma``.
    """
    if a <= 0.0 or b <= 0.0:
        raise ValueError(f"shape parameters must be positive, got a={a}, b={b}")
    g = np.asarray(gamma, dtype=float)
    if np.any((g < 0.0) | (g > 1.0)):
        raise ValueError("gamma must lie in [0, 1]")
    out = betainc(a, b, g)
    return float(out) if np.isscalar(gamma) or g.ndim == 0 else out


def inv_reg_inc_beta(p, a: float, b: float, tol: float = 1e-12):
    """Solve I_gamma(a, b) = p for gamma.

    Bracketed bisection on [0, 1] (the map is monotone) down to float
    resolution, then a few guarded Newton steps to polish the residual below
    ``tol``.  Accepts a scalar or array ``p``.
    """
    if a <= 0.0 or b <= 0.0:
        raise ValueError(f"shape parameters must be positive, got a={a}, b={b}")
    p_arr = np.atleast_1d(np.asarray(p, dtype=float))
    if np.any((p_arr < 0.0) | (p_arr > 1.0)):
        raise ValueError("p must lie in [0, 1]")

    lo = np.zeros_like(p_arr)
    hi = np.ones_like(p_arr)
    for _ in range(90):
        mid = 0.5 * (lo + hi)
        below = betainc(a, b, mid) < p_arr
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.max(hi - lo) < 1e-15:
            break
    g = 0.5 * (lo + hi)

    log_norm = betaln(a, b)
    for _ in range(4):
        resid = betainc(a, b, g) - p_arr
        if np.max(np.abs(resid)) <= tol:
            break
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            density = np.exp(
                (a - 1.0) * np.log(g) + (b - 1.0) * np.log1p(-g) - log_norm
            )
            step = np.where(np.isfinite(density) & (density > 0.0), resid / density, 0.0)
        g = np.clip(g - step, lo, hi)

    exact = (p_arr <= 0.0) | (p_arr >= 1.0)
    g = np.where(p_arr <= 0.0, 0.0, g)
    g = np.where(p_arr >= 1.0, 1.0, g)
    resid = np.abs(betainc(a, b, g) - p_arr)
    if np.any(resid[~exact] > max(tol, 1e-9)):
        raise RuntimeError(
            f"quantile inversion failed to reach tolerance {tol} "
            f"(worst residual {float(np.max(resid)):.3e}); internal error"
        )
    return float(g[0]) if np.isscalar(p) or np.asarray(p).ndim == 0 else g


def beta_shape(m1: float, m2: float) -> tuple[float, float]:
    """Beta shape parameters matching the first two moments.

    Raises DegenerateBetaError when the implied variance is (numerically)
    zero or negative, i.e. the distribution is a point mass.
    """
    var = m2 - m1 * m1
    if var <= DEGENERATE_VAR_TOL:
        raise DegenerateBetaError(
            f"TSP variance {var!r} too small for a beta fit (point mass at {m1!r})"
        )
    if not 0.0 < m1 < 1.0 or m2 > m1:
        raise ValueError(f"moments out of range: m1={m1}, m2={m2}")
    a = m1 * (m1 - m2) / var
    b = (1.0 - m1) * (m1 - m2) / var
    return a, b


def meta_ccdf(gamma, m1: float, m2: float):
    """P(TSP > gamma) under the beta approximation.

    Raises DegenerateBetaError for a point-mass distribution; callers that
    need a curve in that regime should emit the step function at m1.
    """
    a, b = beta_shape(m1, m2)
    g = np.asarray(gamma, dtype=float)
    out = 1.0 - betainc(a, b, g)
    return float(out) if np.isscalar(gamma) or g.ndim == 0 else out


def tsp_class_medians(n_classes: int, m1: float, m2: float, beta_tol: float = 1e-12) -> MetaModel:
    """Discretize the TSP distribution into equal-mass classes.

    Class ``l`` (1-based) covers the beta quantile range
    ``[(l-1)/L, l/L]`` and is represented by the quantile at
    ``(2l - 1) / (2L)``, which bisects the class mass.  A degenerate
    distribution yields every median equal to m1.
    """
    if n_classes < 1:
        raise ValueError(f"n_classes must be at least 1, got {n_classes}")
    try:
        a, b = beta_shape(m1, m2)
    except DegenerateBetaError:
        return MetaModel(
            m1=m1,
            m2=m2,
            a=float("nan"),
            b=float("nan"),
            omegas=None,
            medians=np.full(n_classes, m1),
            degenerate=True,
        )
    edges = np.arange(1, n_classes) / n_classes
    omegas = np.concatenate(([0.0], inv_reg_inc_beta(edges, a, b, beta_tol), [1.0])) \
        if n_classes > 1 else np.array([0.0, 1.0])
    mids = (2.0 * np.arange(1, n_classes + 1) - 1.0) / (2.0 * n_classes)
    medians = np.atleast_1d(inv_reg_inc_beta(mids, a, b, beta_tol))
    return MetaModel(m1=m1, m2=m2, a=a, b=b, omegas=omegas, medians=medians, degenerate=False)
