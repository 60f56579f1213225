"""Progress coefficients of Gaussian order statistics.

The generalized progress coefficient with indices (alpha, beta) of a
(mu, lambda) truncation selection is

    e[alpha, beta; mu, lam] =
        (lam - mu) / sqrt(2*pi)**(alpha+1) * binom(lam, mu)
        * Int t**beta * exp(-(alpha+1) t^2 / 2)
              * Phi(t)**(lam-mu-1) * (1-Phi(t))**(mu-alpha) dt.

The classical coefficient c_{mu/mu,lam} (expected mean of the mu largest of
lam standard normal draws) equals e[1, 0; mu, lam].  Values are computed by
deterministic adaptive quadrature and memoized, since the dynamics iteration
asks for the same handful of coefficients at every generation.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.special import ndtr

from .errors import ContractViolationError

__all__ = [
    "generalized_progress_coefficient",
    "c_mu_mu_lambda",
    "e11",
    "averaged_order_coefficients",
    "cache_info",
]

# Gaussian decay makes the integrand < 1e-30 outside [-12, 12] for every
# admissible index combination, so truncation error is negligible there.
_T_MAX = 12.0
_QUAD_ABS_TOL = 1e-11
_QUAD_REL_TOL = 1e-11


def _validate_key(alpha: int, beta: int, mu: int, lam: int) -> None:
    for name, v in (("alpha", alpha), ("beta", beta), ("mu", mu), ("lam", lam)):
        if int(v) != v:
            raise ContractViolationError(f"{name} must be an integer, got {v}")
    if alpha < 0 or beta < 0:
        raise ContractViolationError(f"alpha, beta must be >= 0, got ({alpha}, {beta})")
    if lam < 1 or mu > lam:
        raise ContractViolationError(f"need 1 <= mu <= lam, got mu={mu}, lam={lam}")
    if mu < 1 and not (mu == 0 and alpha == 0):
        # mu = 0 appears only through the (m-1)-indexed coefficient sums,
        # where alpha = 0 keeps the integrand well defined.
        raise ContractViolationError(f"mu must be >= 1 (or 0 with alpha=0), got mu={mu}")
    if mu - alpha < 0 and mu != lam:
        raise ContractViolationError(
            f"mu - alpha = {mu - alpha} < 0 is only admissible for mu = lam"
        )


@lru_cache(maxsize=None)
def generalized_progress_coefficient(alpha: int, beta: int, mu: int, lam: int) -> float:
    """Evaluate e[alpha, beta; mu, lam] by quadrature (absolute error <= 1e-10)."""
    _validate_key(alpha, beta, mu, lam)
    if mu == lam:
        return 0.0

    prefactor = (
        (lam - mu)
        / math.sqrt(2.0 * math.pi) ** (alpha + 1)
        * math.comb(lam, mu)
    )
    lo_exp = lam - mu - 1
    hi_exp = mu - alpha

    def integrand(t: float) -> float:
        # 1 - Phi(t) written as Phi(-t): the complementary form keeps relative
        # accuracy in the upper tail, which Phi(t)**(lam-mu-1) amplifies.
        return (
            prefactor
            * t**beta
            * math.exp(-0.5 * (alpha + 1) * t * t)
            * ndtr(t) ** lo_exp
            * ndtr(-t) ** hi_exp
        )

    value, _ = integrate.quad(
        integrand,
        -_T_MAX,
        _T_MAX,
        epsabs=_QUAD_ABS_TOL,
        epsrel=_QUAD_REL_TOL,
        limit=400,
    )
    return float(value)


def c_mu_mu_lambda(mu: int, lam: int) -> float:
    """Progress coefficient c_{mu/mu,lam} = e[1, 0; mu, lam]."""
    if mu < 1:
        raise ContractViolationError(f"mu must be >= 1, got {mu}")
    return generalized_progress_coefficient(1, 0, mu, lam)


def e11(mu: int, lam: int) -> float:
    """Second-order coefficient e[1, 1; mu, lam] entering the SAR."""
    if mu < 1:
        raise ContractViolationError(f"mu must be >= 1, got {mu}")
    return generalized_progress_coefficient(1, 1, mu, lam)


def averaged_order_coefficients(mu: int, lam: int) -> tuple[float, float]:
    """Centroid-averaged first and second order-statistic moments.

    Returns ``((1/mu) sum_{m=1..mu} e[0,1; m-1, lam],
    (1/mu) sum_{m=1..mu} e[0,2; m-1, lam])``, i.e. the mean and mean square,
    averaged over the top-mu ranks, of Gaussian order statistics.  These sums
    collapse to ``c_{mu/mu,lam}`` and ``1 + e[1,1; mu, lam]`` respectively;
    computing them term by term keeps an independent route for testing that
    identity.
    """
    if mu < 1 or mu > lam:
        raise ContractViolationError(f"need 1 <= mu <= lam, got mu={mu}, lam={lam}")
    avg_e01 = np.mean(
        [generalized_progress_coefficient(0, 1, m - 1, lam) for m in range(1, mu + 1)]
    )
    avg_e02 = np.mean(
        [generalized_progress_coefficient(0, 2, m - 1, lam) for m in range(1, mu + 1)]
    )
    return float(avg_e01), float(avg_e02)


def cache_info():
    """Memoization statistics of the coefficient cache."""
    return generalized_progress_coefficient.cache_info()
