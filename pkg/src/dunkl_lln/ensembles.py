"""beta-Hermite ensemble: closed-form log-BGF, its cumulant data and a sampler.

The sampler uses the tridiagonal model of Dumitriu and Edelman: a symmetric
tridiagonal matrix with N(0, 2) diagonal and chi_{beta(N-k)} off-diagonal
entries, all divided by sqrt(2), has eigenvalue density proportional to
prod |x_i - x_j|^beta exp(-sum x_i^2 / 2). Multiplying by sqrt(2/beta)
moves the Gaussian weight to exp(-beta sum x_i^2 / 4).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.linalg import LinAlgError, eigvalsh_tridiagonal

from .dunkl import MultivariatePoly
from .series import CumulantSpec, SymmetricSeries


def hermite_log_bgf(N: int, theta) -> MultivariatePoly:
    """(N / 2 theta) * sum x_i^2."""
    if N < 1:
        raise ValueError("N must be positive")
    theta = Fraction(theta)
    if theta <= 0:
        raise ValueError("theta must be positive")
    return MultivariatePoly.from_symmetric({(2,): Fraction(N) / (2 * theta)}, N)


def hermite_log_bgf_series(N: int, theta, degree_cap: int = 2) -> SymmetricSeries:
    return SymmetricSeries({(2,): Fraction(N) / (2 * Fraction(theta))}, N, degree_cap)


def hermite_spec(theta) -> CumulantSpec:
    theta = Fraction(theta)
    return CumulantSpec(theta, {(2,): 1 / theta})


def theta_from_beta(beta) -> Fraction:
    return Fraction(beta) / 2


@dataclass(frozen=True)
class EnsembleSample:
    eigenvalues: tuple[float, ...]
    beta: float
    scaled: bool = False

    def __post_init__(self):
        if len(self.eigenvalues) < 1:
            raise ValueError("a sample needs at least one eigenvalue")
        if self.beta <= 0:
            raise ValueError("beta must be positive")
        if any(a > b for a, b in zip(self.eigenvalues, self.eigenvalues[1:])):
            raise ValueError("eigenvalues must be sorted ascending")

    @property
    def N(self) -> int:
        return len(self.eigenvalues)

    def rescaled(self) -> "EnsembleSample":
        """The sqrt(N)-scaled eigenvalues a_i = sqrt(N) * lambda_i."""
        if self.scaled:
            return self
        s = math.sqrt(self.N)
        return EnsembleSample(tuple(x * s for x in self.eigenvalues), self.beta, True)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(trial,))))


def _tridiagonal_eigenvalues(N: int, beta: float, rng: np.random.Generator) -> np.ndarray:
    diag = rng.normal(0.0, math.sqrt(2.0), size=N) / math.sqrt(2.0)
    dof = beta * np.arange(N - 1, 0, -1, dtype=float)
    off = np.sqrt(rng.chisquare(dof)) / math.sqrt(2.0) if N > 1 else np.empty(0)
    if N == 1:
        vals = diag.copy()
    else:
        vals = eigvalsh_tridiagonal(diag, off)
    return np.sort(vals) * math.sqrt(2.0 / beta)


def sample_beta_hermite(N: int, beta: float, seed: int, trial: int = 0) -> EnsembleSample:
    """One draw of the unscaled beta-Hermite eigenvalues, deterministic in (seed, trial)."""
    if N < 1:
        raise ValueError("N must be positive")
    if beta <= 0:
        raise ValueError("beta must be positive")
    vals = _tridiagonal_eigenvalues(N, float(beta), trial_rng(seed, trial))
    if not np.all(np.isfinite(vals)):
        raise LinAlgError("eigensolver returned non-finite values")
    return EnsembleSample(tuple(float(x) for x in vals), float(beta))


def sample_gue_dense(N: int, seed: int, trial: int = 0) -> EnsembleSample:
    """beta = 2 eigenvalues from a dense Hermitian Gaussian matrix (independent check)."""
    rng = trial_rng(seed, trial)
    a = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
    h = (a + a.conj().T) / 2
    return EnsembleSample(tuple(float(x) for x in np.linalg.eigvalsh(h)), 2.0)


def p_k_statistic(sample: EnsembleSample, k: int) -> float:
    """(1/N) sum (a_i / N)^k with a_i the sqrt(N)-scaled eigenvalues."""
    N = sample.N
    a = np.asarray(sample.rescaled().eigenvalues)
    return float(np.mean((a / N) ** k))


@dataclass(frozen=True)
class MomentEstimate:
    order: int
    mean: float
    stderr: float
    trials: int

    def __post_init__(self):
        if self.trials < 2:
            raise ValueError("an estimate needs at least two trials")
        if self.stderr < 0:
            raise ValueError("standard error must be nonnegative")


@dataclass(frozen=True)
class MonteCarloResult:
    estimates: tuple[MomentEstimate, ...]
    failures: int


def monte_carlo_moments(
    N: int, beta: float, trials: int, orders: Sequence[int], seed: int, sampler=None
) -> MonteCarloResult:
    """Mean and standard error of p_k over independent seeded trials.

    Trials whose eigensolve fails are skipped and counted in `failures`.
    """
    if trials < 2:
        raise ValueError("trials must be at least 2")
    orders = tuple(orders)
    if sampler is None:
        def sampler(t):
            return sample_beta_hermite(N, beta, seed, t)
    stats = np.zeros((trials, len(orders)))
    ok = np.zeros(trials, dtype=bool)
    for t in range(trials):
        try:
            s = sampler(t)
        except LinAlgError:
            continue
        ok[t] = True
        stats[t] = [p_k_statistic(s, k) for k in orders]
    used = stats[ok]
    n = len(used)
    if n < 2:
        raise RuntimeError(f"only {n} of {trials} trials succeeded")
    mean = used.mean(axis=0)
    err = used.std(axis=0, ddof=1) / math.sqrt(n)
    est = tuple(
        MomentEstimate(k, float(m), float(e), n) for k, m, e in zip(orders, mean, err)
    )
    return MonteCarloResult(est, trials - n)
