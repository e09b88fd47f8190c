"""Verification suites: each check compares a closed form against an oracle.

Used by ``bures-geom verify`` and by the acceptance tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import kstest

from . import measures as ms
from .matcore import haar_random, hermitize
from .measures import EnsembleParams
from .metrics import bures_distance, hs_distance, hubner_line_element, trace_distance
from .montecarlo import MCConfig, mc_simplex_integral, mcmc_eigenvalues, verify_normalization
from .states import (
    DensityMatrix,
    KrausChannel,
    apply_channel,
    random_channel,
    random_hs_state,
    random_interior_state,
    random_pure,
)

TESTS = ("constants", "volume-identity", "metric", "marginal", "normalization", "monotonicity")


@dataclass(frozen=True)
class Check:
    name: str
    band: str
    observed: float
    passed: bool

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: observed {self.observed:.6g} (band {self.band})"


def rel_err(a: float, b: float) -> float:
    return abs(a - b) / abs(b)


def alpha_grid(beta) -> tuple:
    b = ms._frac(beta)
    return (ms.Fraction(1), 1 + b / 2, 1 + b)


def check_constants(n: int, beta: int, samples: int, seed: int) -> list[Check]:
    checks = []
    for m in range(1, n + 1):
        same = ms.generalized_constant(EnsembleParams(m, 1, 2)).same_value(ms.hall_constant(m))
        checks.append(Check(f"C_{m}(1,2) equals Hall constant exactly", "exact", float(ms.hall_constant(m)), same))
    for a in alpha_grid(beta):
        p = EnsembleParams(n, a, beta)
        est = mc_simplex_integral(p, MCConfig(samples=samples, seed=seed))
        target = 1.0 / float(ms.generalized_constant(p))
        checks.append(Check(
            f"MC 1/C_{n}({a},{beta}) vs closed form {target:.6g}",
            "|z| <= 3 SE", est.z_score(target), est.brackets(target),
        ))
    return checks


def check_volume_identity(n: int, beta: int) -> list[Check]:
    checks = []
    for m in range(1, n + 1):
        if beta == 2:
            v = float(ms.bures_volume(m, 2))
            h = ms.hemisphere_volume(m * m - 1, 0.5)
            checks.append(Check(f"V_{m} = hemisphere(d={m*m-1}, r=1/2)", "rel <= 1e-12", rel_err(v, h), rel_err(v, h) <= 1e-12))
        for k in range(m):
            a = ms.submanifold_volume(m, k, beta)
            b = ms.submanifold_volume_via_constants(m, k, beta)
            err = rel_err(float(b), float(a))
            checks.append(Check(f"S_({m},{k}) two routes, beta={beta}", "rel <= 1e-12", err, err <= 1e-12))
        if beta == 2 and m >= 2:
            lhs = float(ms.surface_to_volume_ratio(m) * ms.bures_volume(m, 2))
            rhs = float(ms.submanifold_volume(m, 1, 2))
            checks.append(Check(f"gamma_B({m}) * V = S_({m},1)", "rel <= 1e-12", rel_err(lhs, rhs), rel_err(lhs, rhs) <= 1e-12))
    return checks


def random_tangent(n: int, beta: int, rng: np.random.Generator) -> np.ndarray:
    """Traceless Hermitian direction with unit Frobenius norm."""
    if beta == 2:
        h = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    else:
        h = rng.standard_normal((n, n))
    h = hermitize(h)
    h = h - np.trace(h) / n * np.eye(n)
    return h / np.linalg.norm(h)


@dataclass(frozen=True)
class HubnerFD:
    line_element: float
    fine: float
    coarse: float
    richardson: float
    eps: float

    @property
    def fine_error(self) -> float:
        """|fine - ds^2| in units of eps * ds^2."""
        return abs(self.fine - self.line_element) / (self.eps * self.line_element)

    @property
    def richardson_error(self) -> float:
        return abs(self.richardson - self.line_element) / (self.eps * self.line_element)


def hubner_finite_difference(rho: DensityMatrix, drho: np.ndarray, eps: float = 1e-4, coarse: float = 1e-3) -> HubnerFD:
    """Compare D_B(rho, rho + eps drho)^2 / eps^2 against the Hubner line element."""
    ds2 = hubner_line_element(rho, drho)

    def quotient(e):
        sigma = DensityMatrix(hermitize(rho.mat + e * drho), rho.beta)
        return bures_distance(rho, sigma) ** 2 / e**2

    f, c = quotient(eps), quotient(coarse)
    # the one-sided error is linear in eps; cancel it
    r = (coarse * f - eps * c) / (coarse - eps)
    return HubnerFD(ds2, f, c, r, eps)


def check_metric(n: int, beta: int, samples: int, seed: int) -> list[Check]:
    rng = np.random.default_rng(seed)
    worst_fine = worst_rich = 0.0
    for _ in range(samples):
        rho = random_interior_state(n, beta, rng)
        fd = hubner_finite_difference(rho, random_tangent(n, beta, rng))
        worst_fine = max(worst_fine, fd.fine_error)
        worst_rich = max(worst_rich, fd.richardson_error)
    return [
        Check(f"Hubner vs D_B^2/eps^2 at eps=1e-4, N={n}, {samples} pairs", "<= 10 (units eps*ds^2)", worst_fine, worst_fine <= 10),
        Check(f"Richardson(1e-3, 1e-4) vs Hubner, N={n}", "<= 10 (units eps*ds^2)", worst_rich, worst_rich <= 10),
    ]


def check_marginal(n: int, beta: int, samples: int, seed: int) -> list[Check]:
    if n != 2:
        raise ValueError("the marginal-law check is defined for N=2 only")
    chain = mcmc_eigenvalues(EnsembleParams(2, 1, beta), MCConfig(samples=samples, seed=seed))
    largest = chain.points.max(axis=1)
    cdf = ms.max_eigenvalue_cdf_bures_qubit if beta == 2 else (lambda m: ms.max_eigenvalue_cdf_n2(m, beta))
    ks = kstest(largest, cdf).statistic
    return [
        Check(f"KS of larger eigenvalue vs analytic CDF (N=2, beta={beta}, {largest.size} samples)", "< 0.02", ks, ks < 0.02),
        Check("MH acceptance rate", "[0.1, 0.9]", chain.acceptance_rate, 0.1 <= chain.acceptance_rate <= 0.9),
        Check("split-chain Gelman-Rubin on max eigenvalue", "< 1.05", chain.gelman_rubin, chain.gelman_rubin < 1.05),
    ]


def check_normalization(n: int, beta: int, samples: int, seed: int) -> list[Check]:
    est = verify_normalization(EnsembleParams(n, 1, beta), MCConfig(samples=samples, seed=seed))
    return [Check(f"integral of P over simplex (N={n}, beta={beta})", "|z| <= 3 SE around 1", est.mean, est.brackets(1.0))]


def search_hs_increase(n: int, rng: np.random.Generator, max_iter: int = 5000, step: float = 0.1):
    """Hill-climb over (pure rho, mixed sigma, Stinespring isometry with k=2)
    for a channel that increases the Hilbert-Schmidt distance.

    Returns ``(ratio, rho, sigma, channel)`` for the best triple found.
    """
    k = 2

    def cnormal(shape):
        return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)

    def isometry(v):
        q, r = np.linalg.qr(v)
        d = np.diag(r)
        return q * (d / np.abs(d))

    def build(v, x, g):
        rho = DensityMatrix(hermitize(np.outer(x, x.conj()) / np.vdot(x, x).real), 2)
        s = g @ g.conj().T
        sigma = DensityMatrix(hermitize(s / np.trace(s).real), 2)
        ch = KrausChannel(tuple(v[i * n:(i + 1) * n] for i in range(k)))
        return rho, sigma, ch

    def ratio(rho, sigma, ch):
        return hs_distance(apply_channel(rho, ch), apply_channel(sigma, ch)) / hs_distance(rho, sigma)

    v, x, g = isometry(cnormal((n * k, n))), cnormal(n), cnormal((n, n))
    best = build(v, x, g)
    cur = ratio(*best)
    for _ in range(max_iter):
        if cur > 1 + 1e-6:
            break
        v2, x2, g2 = isometry(v + step * cnormal(v.shape)), x + step * cnormal(n), g + step * cnormal(g.shape)
        cand = build(v2, x2, g2)
        r = ratio(*cand)
        if r > cur:
            v, x, g, cur, best = v2, x2, g2, r, cand
    return (cur, *best)


def check_monotonicity(n: int, beta: int, samples: int, seed: int) -> list[Check]:
    rng = np.random.default_rng(seed)
    worst = {"bures": -math.inf, "trace": -math.inf}
    for _ in range(samples):
        rho = random_hs_state(n, beta, rng) if rng.random() < 0.5 else random_pure(n, beta, rng)
        sigma = random_hs_state(n, beta, rng)
        ch = random_channel(n, int(rng.integers(1, 5)), rng, beta)
        r2, s2 = apply_channel(rho, ch), apply_channel(sigma, ch)
        worst["bures"] = max(worst["bures"], bures_distance(r2, s2) - bures_distance(rho, sigma))
        worst["trace"] = max(worst["trace"], trace_distance(r2, s2) - trace_distance(rho, sigma))
    checks = [
        Check(f"max increase of {name} distance under channels, N={n}, {samples} triples", "<= 1e-9", w, w <= 1e-9)
        for name, w in worst.items()
    ]
    if n >= 3:
        ratio, *_ = search_hs_increase(n, rng)
        checks.append(Check(f"HS distance increase found by channel search, N={n}", "ratio > 1", ratio, ratio > 1))
    return checks


def run(test: str, n: int, beta: int, samples: int | None, seed: int) -> list[Check]:
    if test == "constants":
        return check_constants(n, beta, samples or 10**6, seed)
    if test == "volume-identity":
        return check_volume_identity(n, beta)
    if test == "metric":
        return check_metric(n, beta, samples or 100, seed)
    if test == "marginal":
        return check_marginal(n, beta, samples or 10**5, seed)
    if test == "normalization":
        return check_normalization(n, beta, samples or 10**6, seed)
    if test == "monotonicity":
        return check_monotonicity(n, beta, samples or 1000, seed)
    raise ValueError(f"unknown test {test!r}; choose from {', '.join(TESTS)}")


def haar_invariance_residual(n: int, beta: int, rng: np.random.Generator) -> float:
    """max |sorted eig(U D U^dagger) - sorted D| for one Haar U."""
    d = np.sort(rng.dirichlet(np.ones(n)))
    u = haar_random(n, beta, rng)
    return float(np.max(np.abs(np.linalg.eigvalsh(hermitize((u * d) @ u.conj().T)) - d)))
