"""Monte Carlo oracles for the closed forms in :mod:`bures_geom.measures`.

Integral estimators split the requested samples into a fixed number of
batches. Batch ``i`` draws from its own stream ``SeedSequence(seed).spawn``
child ``i``, so the result is bit-identical for any number of worker
threads. The standard error comes from the spread of the batch means.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np
from scipy.special import gammaln

from .matcore import haar_random, hermitize
from .measures import EnsembleParams, generalized_constant, log_density_kernel
from .states import DensityMatrix, new_density

TARGET_ACCEPTANCE = 0.3


def default_workers() -> int:
    return max(1, int(os.environ.get("BURES_GEOM_WORKERS", "1")))


@dataclass(frozen=True)
class MCConfig:
    samples: int = 10**6
    seed: int = 0
    workers: int = 1
    burn_in: int = 2000
    proposal_conc: float = 50.0
    batches: int = 64
    chains: int = 8

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.burn_in < 0:
            raise ValueError("burn_in must be >= 0")
        if not self.proposal_conc > 0:
            raise ValueError("proposal_conc must be positive")
        if self.batches < 1 or self.chains < 1:
            raise ValueError("batches and chains must be >= 1")


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    std_error: float
    samples: int
    seed: int

    def brackets(self, value: float, k: float = 3.0, rel_floor: float = 1e-12) -> bool:
        band = max(k * self.std_error, rel_floor * abs(value))
        return abs(self.mean - value) <= band

    def z_score(self, value: float) -> float:
        if self.std_error == 0:
            return 0.0 if self.mean == value else math.inf
        return (self.mean - value) / self.std_error

    def scaled(self, factor: float) -> "MCEstimate":
        return replace(self, mean=self.mean * factor, std_error=self.std_error * abs(factor))


def _batched_mean(draw: Callable[[np.random.Generator, int], np.ndarray], cfg: MCConfig) -> MCEstimate:
    """Mean of ``draw(rng, size)`` weights over ``cfg.samples`` draws, in batches."""
    n_batches = min(cfg.batches, cfg.samples)
    sizes = [len(c) for c in np.array_split(np.arange(cfg.samples), n_batches)]
    streams = np.random.SeedSequence(cfg.seed).spawn(n_batches)

    def run(i: int) -> tuple[float, float, int]:
        w = draw(np.random.default_rng(streams[i]), sizes[i])
        return float(np.sum(w)), float(np.sum(w * w)), sizes[i]

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(run, range(n_batches)))
    else:
        parts = [run(i) for i in range(n_batches)]

    total = sum(p[2] for p in parts)
    mean = sum(p[0] for p in parts) / total
    if n_batches >= 2:
        bm = np.array([p[0] / p[2] for p in parts])
        frac = np.array([p[2] / total for p in parts])
        var = n_batches / (n_batches - 1) * float(np.sum(frac**2 * (bm - mean) ** 2))
    else:
        s2 = parts[0][1] / total - mean * mean
        var = max(s2, 0.0) * total / max(total - 1, 1) / total
    return MCEstimate(mean, math.sqrt(var), total, cfg.seed)


def _pair_log_weight(x: np.ndarray, beta: float) -> np.ndarray:
    """sum_{i<j} beta log|x_i - x_j| - beta/2 log(x_i + x_j) along the last axis."""
    n = x.shape[-1]
    out = np.zeros(x.shape[:-1])
    with np.errstate(divide="ignore"):
        for i in range(n):
            for j in range(i + 1, n):
                out += beta * np.log(np.abs(x[..., i] - x[..., j])) - 0.5 * beta * np.log(x[..., i] + x[..., j])
    return out


def _exact_estimate(value: float, cfg: MCConfig) -> MCEstimate:
    return MCEstimate(value, 0.0, cfg.samples, cfg.seed)


def mc_simplex_integral(params: EnsembleParams, cfg: MCConfig) -> MCEstimate:
    """Estimate 1/C_N(alpha, beta) by importance sampling on the simplex.

    Draws come from Dirichlet(alpha - 1/2, ..., alpha - 1/2), which absorbs
    the prod rho^(alpha - 3/2) factor; the remaining weight is the pair
    product, bounded by 1.
    """
    n, alpha, beta = params.n, float(params.alpha), float(params.beta)
    shape = alpha - 0.5
    if shape <= 0:
        raise ValueError(f"alpha={alpha} gives Dirichlet shape {shape} <= 0; unsupported")
    if n == 1:
        return _exact_estimate(1.0, cfg)
    log_norm = n * math.lgamma(shape) - math.lgamma(n * shape)

    def draw(rng, size):
        lam = rng.dirichlet(np.full(n, shape), size=size)
        return np.exp(log_norm + _pair_log_weight(lam, beta))

    return _batched_mean(draw, cfg)


def mc_gamma_trick_integral(params: EnsembleParams, cfg: MCConfig) -> MCEstimate:
    """Estimate Gamma[N(2a + (N-1)b/2 - 1)/2] / C_N(a, b).

    Same integrand as :func:`mc_simplex_integral` but over the positive
    orthant with an exp(-sum rho) weight; each rho_i ~ Gamma(a - 1/2).
    """
    n, alpha, beta = params.n, float(params.alpha), float(params.beta)
    shape = alpha - 0.5
    if shape <= 0:
        raise ValueError(f"Gamma shape {shape} must be positive")
    log_norm = n * math.lgamma(shape)
    if n == 1:
        return _exact_estimate(math.exp(log_norm), cfg)

    def draw(rng, size):
        rho = rng.gamma(shape, 1.0, size=(size, n))
        return np.exp(log_norm + _pair_log_weight(rho, beta))

    return _batched_mean(draw, cfg)


def mc_lorentz_integral(gamma: float, beta: float, n: int, cfg: MCConfig) -> MCEstimate:
    """Estimate int prod (1+x_i^2)^-gamma prod_{j<k} |x_j - x_k|^beta dx.

    Proposal: independent x_i with density proportional to (1+x^2)^-s,
    s = gamma - (N-1) beta / 2, i.e. scaled Student-t with 2s - 1 degrees
    of freedom. With this s the weight stays bounded at infinity.
    """
    s = gamma - (n - 1) * beta / 2
    if not s > 0.5:
        raise ValueError("integral diverges for these parameters")
    nu = 2 * s - 1
    log_z = 0.5 * math.log(math.pi) + math.lgamma(s - 0.5) - math.lgamma(s)

    def draw(rng, size):
        x = rng.standard_t(nu, size=(size, n)) / math.sqrt(nu)
        lw = n * log_z + (s - gamma) * np.sum(np.log1p(x * x), axis=1)
        with np.errstate(divide="ignore"):
            for i in range(n):
                for j in range(i + 1, n):
                    lw += beta * np.log(np.abs(x[:, i] - x[:, j]))
        return np.exp(lw)

    return _batched_mean(draw, cfg)


def verify_normalization(params: EnsembleParams, cfg: MCConfig) -> MCEstimate:
    """MC estimate of the integral of the normalized density over the simplex."""
    if params.n == 1:
        return _exact_estimate(1.0, cfg)
    return mc_simplex_integral(params, cfg).scaled(float(generalized_constant(params)))


@dataclass(frozen=True, eq=False)
class ChainResult:
    points: np.ndarray  # (samples, N), chain-major
    chains: int
    acceptance_rate: float
    proposal_conc: float
    gelman_rubin: float

    def per_chain(self) -> np.ndarray:
        return self.points.reshape(self.chains, -1, self.points.shape[-1])


def _dirichlet_logpdf(x: np.ndarray, a: np.ndarray) -> np.ndarray:
    return gammaln(a.sum(-1)) - gammaln(a).sum(-1) + np.sum((a - 1) * np.log(x), axis=-1)


def split_gelman_rubin(traces: np.ndarray) -> float:
    """Split-chain potential scale reduction for traces of shape (chains, length)."""
    traces = np.asarray(traces, dtype=float)
    half = traces.shape[1] // 2
    if half < 2:
        return math.nan
    seqs = np.concatenate([traces[:, :half], traces[:, half:2 * half]], axis=0)
    n = seqs.shape[1]
    means = seqs.mean(axis=1)
    w = seqs.var(axis=1, ddof=1).mean()
    b = n * means.var(ddof=1)
    if w == 0:
        return 1.0 if b == 0 else math.inf
    var_plus = (n - 1) / n * w + b / n
    return float(math.sqrt(var_plus / w))


def _run_chains(params: EnsembleParams, n_keep: int, cfg: MCConfig, rng: np.random.Generator) -> ChainResult:
    n, alpha, beta = params.n, float(params.alpha), float(params.beta)
    chains = cfg.chains
    per_chain = -(-n_keep // chains)
    if n == 1:
        return ChainResult(np.ones((chains * per_chain, 1)), chains, 1.0, cfg.proposal_conc, 1.0)

    def target(x):
        return log_density_kernel(x, alpha, beta)

    cur = rng.dirichlet(np.ones(n), size=chains)
    cur_lp = target(cur)
    log_conc = math.log(cfg.proposal_conc)
    window, window_acc, window_len, n_windows = 50, 0.0, 0, 0
    kept = np.empty((chains, per_chain, n))
    accepted = 0

    for step in range(cfg.burn_in + per_chain):
        conc = math.exp(log_conc)
        a_fwd = conc * cur + 0.5
        g = rng.gamma(a_fwd)
        prop = g / g.sum(axis=1, keepdims=True)
        interior = np.all(prop > 0, axis=1)
        safe = np.where(interior[:, None], prop, 1.0 / n)
        prop_lp = np.where(interior, target(safe), -np.inf)
        a_rev = conc * safe + 0.5
        log_ratio = prop_lp - cur_lp + _dirichlet_logpdf(cur, a_rev) - _dirichlet_logpdf(safe, a_fwd)
        with np.errstate(invalid="ignore"):
            accept = np.log(rng.random(chains)) < log_ratio
        accept &= np.isfinite(prop_lp)
        cur = np.where(accept[:, None], safe, cur)
        cur_lp = np.where(accept, prop_lp, cur_lp)

        if step < cfg.burn_in:
            window_acc += accept.mean()
            window_len += 1
            if window_len == window:
                n_windows += 1
                rate = window_acc / window_len
                # low acceptance -> tighter proposal (higher concentration)
                log_conc += (TARGET_ACCEPTANCE - rate) * 2.0 / math.sqrt(n_windows)
                log_conc = min(max(log_conc, math.log(1e-2)), math.log(1e7))
                window_acc, window_len = 0.0, 0
        else:
            kept[:, step - cfg.burn_in] = cur
            accepted += int(accept.sum())

    rate = accepted / (chains * per_chain)
    rhat = split_gelman_rubin(kept.max(axis=2))
    return ChainResult(kept.reshape(-1, n), chains, rate, math.exp(log_conc), rhat)


def mcmc_eigenvalues(params: EnsembleParams, cfg: MCConfig) -> ChainResult:
    """Metropolis-Hastings samples of unordered eigenvalue vectors.

    ``cfg.chains`` independent chains run in lockstep, each producing
    ceil(samples / chains) points after ``cfg.burn_in`` steps. The
    proposal is Dirichlet(c * lambda + 1/2); c starts at
    ``cfg.proposal_conc``, is tuned during burn-in toward 30% acceptance
    and then frozen.
    """
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
    return _run_chains(params, cfg.samples, cfg, rng)


@dataclass(frozen=True, eq=False)
class StateSample:
    states: list
    chain: ChainResult


def sample_state(n: int, beta: int, cfg: MCConfig, thin: int = 5) -> StateSample:
    """Draw ``cfg.samples`` states from the Bures measure (alpha=1).

    Eigenvalues come from the MH chain (every ``thin``-th point, cycling
    through the chains), eigenvectors from an independent Haar stream.
    """
    eig_seq, haar_seq = np.random.SeedSequence(cfg.seed).spawn(2)
    params = EnsembleParams(n, 1, beta)
    chain = _run_chains(params, cfg.samples * thin, cfg, np.random.default_rng(eig_seq))
    per = chain.per_chain()[:, ::thin]  # (chains, length, N)
    lams = per.transpose(1, 0, 2).reshape(-1, n)[: cfg.samples]
    haar_rng = np.random.default_rng(haar_seq)
    states: list[DensityMatrix] = []
    for lam in lams:
        w = haar_random(n, beta, haar_rng)
        states.append(new_density(hermitize((w * lam) @ w.conj().T), beta))
    return StateSample(states, chain)
