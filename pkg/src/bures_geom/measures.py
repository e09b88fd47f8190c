"""Closed-form Bures volumes, generalized Hall constants and eigenvalue densities.

Functions taking ``beta`` accept 1 (real) and 2 (complex) matrices. Other
positive values are an analytic continuation that has only been proven
for those two cases; pass ``conjectural=True`` to allow them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import betainc, gammaln

from .exact import ExactValue, gamma_exact, pow_pi, pow_two, product


class DomainError(ValueError):
    pass


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _check_beta(beta, conjectural: bool) -> Fraction:
    b = _frac(beta)
    if b <= 0:
        raise DomainError(f"beta must be positive, got {beta}")
    if b not in (1, 2) and not conjectural:
        raise DomainError(f"beta={beta} is outside {{1, 2}}; pass conjectural=True to allow it")
    return b


def _gamma(x: Fraction, label: str) -> ExactValue:
    if x <= 0:
        raise DomainError(f"Gamma pole: factor {label} has nonpositive argument {x}")
    return gamma_exact(x)


@dataclass(frozen=True)
class EnsembleParams:
    n: int
    alpha: float | Fraction = 1
    beta: float | Fraction = 2

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"n must be >= 1, got {self.n}")
        if not self.alpha > 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if not self.beta > 0:
            raise DomainError(f"beta must be positive, got {self.beta}")

    @property
    def conjectural(self) -> bool:
        return self.beta not in (1, 2)


def flag_volume(n: int, beta=2, conjectural: bool = False) -> ExactValue:
    """Volume of U(N)/U(1)^N (beta=2) or O(N)/O(1)^N (beta=1)."""
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    b = _check_beta(beta, conjectural)
    half = b / 2
    terms = []
    for j in range(1, n + 1):
        e = (j - 1) * half
        terms.append(pow_two(e) * pow_pi(e) * gamma_exact(half) / gamma_exact(j * half))
    return product(terms)


def hall_constant(n: int) -> ExactValue:
    """Normalization C_N of the Bures eigenvalue density (complex case)."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    den = math.prod(math.factorial(j) for j in range(1, n + 1))
    return pow_two(n * n - n) * gamma_exact(Fraction(n * n, 2)) / (pow_pi(Fraction(n, 2)) * den)


def generalized_constant(params: EnsembleParams) -> ExactValue:
    """C_N(alpha, beta); the Hall constant is the case alpha=1, beta=2."""
    n = params.n
    a = _frac(params.alpha)
    b = _frac(params.beta)
    top = _gamma(n * (2 * a - 1 + (n - 1) * b / 2) / 2, "Gamma[N(2a-1+(N-1)b/2)/2]")
    scale = pow_two(n * ((n - 1) * b / 2 + 2 * (a - 1))) / pow_pi(Fraction(n, 2))
    terms = []
    for j in range(1, n + 1):
        num = _gamma(1 + j * b / 2, f"Gamma(1+{j}b/2)") * _gamma((n - j) * b / 2 + 2 * a - 1, f"Gamma[(N-{j})b/2+2a-1]")
        den = _gamma(1 + b / 2, "Gamma(1+b/2)") * _gamma((n - j) * b / 2 + a, f"Gamma[(N-{j})b/2+a]")
        terms.append(num / den)
    return top * scale / product(terms)


def dim_submanifold(n: int, k: int, beta=2) -> int | Fraction:
    """Real dimension of the set of rank N-k states."""
    if not 0 <= k <= n - 1:
        raise DomainError(f"rank defect k={k} out of range for N={n}")
    b = _frac(beta)
    d = (n - k) * (1 + (n + k - 1) * b / 2) - 1
    return int(d) if d.denominator == 1 else d


def _hemisphere_prefactor(d) -> ExactValue:
    """2^-d pi^((d+1)/2) / Gamma((d+1)/2): hemisphere of radius 1/2."""
    d = _frac(d)
    return pow_two(-d) * pow_pi((d + 1) / 2) / gamma_exact((d + 1) / 2)


def submanifold_volume(n: int, k: int, beta=2, conjectural: bool = False) -> ExactValue:
    """Bures volume of the states of rank N-k (k=0 full set, k=1 boundary, k=N-1 pure)."""
    b = _check_beta(beta, conjectural)
    d = dim_submanifold(n, k, b)
    terms = []
    for j in range(1, n - k + 1):
        num = gamma_exact(j * b / 2) * gamma_exact(1 + (2 * k + j - 1) * b / 2)
        den = gamma_exact((k + j) * b / 2) * gamma_exact(1 + (k + j - 1) * b / 2)
        terms.append(num / den)
    return _hemisphere_prefactor(d) * product(terms)


def submanifold_volume_via_constants(n: int, k: int, beta=2, conjectural: bool = False) -> ExactValue:
    """Same volume as :func:`submanifold_volume`, built from C_{N-k}(1+k*beta/2, beta)
    and flag-manifold volumes instead of the simplified product."""
    b = _check_beta(beta, conjectural)
    d = dim_submanifold(n, k, b)
    m = n - k
    c = generalized_constant(EnsembleParams(m, 1 + k * b / 2, b))
    lead = pow_two(-_frac(d) + Fraction(m * (n + k - 1)) * b / 4)
    return lead / (c * math.factorial(m)) * flag_volume(n, b, conjectural) / flag_volume(k, b, conjectural)


def bures_volume(n: int, beta=2, conjectural: bool = False) -> ExactValue:
    return submanifold_volume(n, 0, beta, conjectural)


def bures_volume_complex_closed(n: int) -> ExactValue:
    """2^(1-N^2) pi^(N^2/2) / Gamma(N^2/2)."""
    return pow_two(1 - n * n) * pow_pi(Fraction(n * n, 2)) / gamma_exact(Fraction(n * n, 2))


def hemisphere_volume(d: int, r: float) -> float:
    """Volume of half of a d-sphere of radius r: (1/2) S_d r^d."""
    if d < 0 or not r > 0:
        raise DomainError("need d >= 0 and r > 0")
    log_sd = math.log(2.0) + (d + 1) / 2 * math.log(math.pi) - math.lgamma((d + 1) / 2)
    return 0.5 * math.exp(log_sd + d * math.log(r))


def surface_to_volume_ratio(n: int) -> ExactValue:
    """Boundary area over volume of the complex Bures state space."""
    if n < 2:
        raise DomainError("surface-to-volume ratio needs N >= 2")
    x = Fraction(n * n, 2)
    return 2 * n / pow_pi(Fraction(1, 2)) * gamma_exact(x) / gamma_exact(x - Fraction(1, 2))


def pure_state_volume(n: int, beta=2, conjectural: bool = False) -> ExactValue:
    """Volume of CP^(N-1) (beta=2) or RP^(N-1) (beta=1) in the Bures metric."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    b = _check_beta(beta, conjectural)
    return pow_pi((n - 1) * b / 2) * gamma_exact(b / 2) / gamma_exact(n * b / 2)


def log_density_kernel(lam: np.ndarray, alpha: float = 1.0, beta: float = 2.0) -> np.ndarray:
    """Unnormalized log density on the simplex, vectorized over leading axes.

    prod rho_i^(alpha-3/2) * prod_{i<j} |rho_i - rho_j|^beta / (rho_i + rho_j)^(beta/2).
    Assumes strictly positive entries; coincident eigenvalues give -inf.
    """
    lam = np.asarray(lam, dtype=float)
    n = lam.shape[-1]
    with np.errstate(divide="ignore"):
        if alpha == 1.5:
            out = np.zeros(lam.shape[:-1])
        else:
            out = (alpha - 1.5) * np.sum(np.log(lam), axis=-1)
        for i in range(n):
            for j in range(i + 1, n):
                out = out + beta * np.log(np.abs(lam[..., i] - lam[..., j])) - 0.5 * beta * np.log(lam[..., i] + lam[..., j])
    return out


def joint_logdensity(lam, params: EnsembleParams | None = None) -> float:
    """Log of the normalized joint eigenvalue density at a simplex point.

    The density is with respect to Lebesgue measure on the first N-1
    coordinates of unordered eigenvalue vectors. At boundary points the
    result is -inf when two eigenvalues coincide (or the power of a zero
    eigenvalue is positive), +inf when a zero eigenvalue meets a negative
    power.
    """
    lam = np.asarray(lam, dtype=float)
    params = params or EnsembleParams(lam.size)
    if lam.size != params.n:
        raise DomainError(f"point has {lam.size} coordinates, expected {params.n}")
    if np.any(lam < 0) or abs(lam.sum() - 1.0) > 1e-12:
        raise DomainError("point is not on the probability simplex")
    alpha, beta = float(params.alpha), float(params.beta)
    n = lam.size
    if any(lam[i] == lam[j] for i in range(n) for j in range(i + 1, n)):
        return -math.inf
    if np.any(lam == 0):
        power = alpha - 1.5
        if power < 0:
            return math.inf
        if power > 0:
            return -math.inf
    return float(generalized_constant(params).log() + log_density_kernel(lam, alpha, beta))


def max_eigenvalue_cdf_n2(m, beta: float = 2.0):
    """CDF of the larger eigenvalue for N=2 under the beta-ensemble (alpha=1).

    With rho_1 = (1 - cos phi)/2 the density in phi is proportional to
    |cos phi|^beta, so the CDF is a regularized incomplete beta function.
    """
    m = np.clip(np.asarray(m, dtype=float), 0.5, 1.0)
    s = np.clip(2.0 * m - 1.0, 0.0, 1.0)  # sin(phi - pi/2)
    return betainc((beta + 1) / 2, 0.5, s * s)


def max_eigenvalue_cdf_bures_qubit(m):
    """Closed form of :func:`max_eigenvalue_cdf_n2` for beta=2."""
    m = np.clip(np.asarray(m, dtype=float), 0.5, 1.0)
    phi = np.arccos(1.0 - 2.0 * m)
    return (4.0 / math.pi) * (phi / 2 + np.sin(2 * phi) / 4 - math.pi / 4)


def selberg_lorentz(gamma: float, beta: float, n: int) -> float:
    """Closed form of the Lorentz-type integral

        int_R^N prod_i (1 + x_i^2)^(-gamma) prod_{j<k} |x_j - x_k|^beta dx.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    if not 2 * gamma - (2 * n - 2) * beta / 2 - 1 > 0:
        raise DomainError("integral diverges: need 2*gamma - (N-1)*beta - 1 > 0")
    log_val = n * math.log(math.pi) + n * ((n - 1) * beta / 2 + 2 - 2 * gamma) * math.log(2.0)
    for j in range(n):
        log_val += (
            gammaln(1 + (j + 1) * beta / 2)
            + gammaln(2 * gamma - (n + j - 1) * beta / 2 - 1)
            - gammaln(1 + beta / 2)
            - 2 * gammaln(gamma - j * beta / 2)
        )
    return math.exp(log_val)


def lorentz_constant_ratio(params: EnsembleParams) -> float:
    """Gamma[N(2a-1+(N-1)b/2)/2] / C_N(a, b) computed through the Lorentz ensemble."""
    n, a, b = params.n, float(params.alpha), float(params.beta)
    g = (n - 1) * b / 2 + a
    log_pref = sum(math.lgamma(a + (j - 1) * b / 2) for j in range(1, n + 1)) - n * 0.5 * math.log(math.pi)
    return math.exp(log_pref) * selberg_lorentz(g, b, n)
