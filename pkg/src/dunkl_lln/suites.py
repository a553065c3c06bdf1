"""Named property checks run by `dunkl-lln verify`.

Each check returns None on success or a short counterexample string.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import combinatorics as cb
from .cumulants import (
    finalvalue_rhs,
    free_cumulant,
    moment_from_cumulants,
    moment_via_residue,
    theorem_value_rhs,
)
from .dunkl import (
    MultivariatePoly,
    axial_to_poly,
    change_apply,
    dunkl_apply,
    finite_mixed_moment,
    poly_to_axial,
    shift_down,
)
from .ensembles import hermite_log_bgf, monte_carlo_moments, sample_beta_hermite, sample_gue_dense
from .series import LIMIT, AxialSeries, SymmetricSeries, apply_Q, apply_Q_power, iterated_R_constant

SUITES = ("appendix", "operators", "ensembles")


@dataclass
class CheckResult:
    name: str
    counterexample: str | None

    @property
    def passed(self) -> bool:
        return self.counterexample is None


def random_fraction(rng: random.Random, span: int = 5) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, span))


def random_axial(rng: random.Random, cap: int, support: int, var_count=LIMIT, density=0.5) -> AxialSeries:
    """Random axial series with keys up to total degree `support`, known to `cap`."""
    max_len = None if var_count is LIMIT else var_count - 1
    coeffs = {}
    for nu in cb.partitions_up_to(min(support, cap), max_len):
        for d in range(min(support, cap) - sum(nu) + 1):
            if rng.random() < density:
                coeffs[(d, nu)] = random_fraction(rng)
    return AxialSeries(coeffs, var_count, cap)


def random_poly(rng: random.Random, N: int, max_degree: int, terms: int = 6) -> MultivariatePoly:
    out = {}
    for _ in range(terms):
        d = rng.randint(0, max_degree)
        e = [0] * N
        for _ in range(d):
            e[rng.randrange(N)] += 1
        out[tuple(e)] = random_fraction(rng)
    return MultivariatePoly(N, out)


# ---------------------------------------------------------------------------
# appendix


def check_binomial(max_ab: int = 12, fault: bool = False):
    for a in range(max_ab + 1):
        for b in range(max_ab + 1):
            for m in range(a + 1):
                lhs, rhs = cb.binom_identity_sides(a, b, m)
                if fault and (a, b, m) == (3, 2, 1):
                    lhs += 1
                if lhs != rhs:
                    return f"(a, b, m) = ({a}, {b}, {m}): {lhs} != {rhs}"
    return None


def check_nc_recursion(rng: random.Random, max_k: int = 7, rounds: int = 5):
    for k in range(1, max_k + 1):
        for _ in range(rounds):
            a = [random_fraction(rng) for _ in range(k + 1)]
            b = [random_fraction(rng) for _ in range(k + 1)]
            if not cb.nc_recursion_check(k, a, b):
                return f"k = {k}, a = {a}, b = {b}"
    return None


def check_residue(rng: random.Random, max_n: int = 8, rounds: int = 5):
    for n in range(1, max_n + 1):
        for _ in range(rounds):
            r = [random_fraction(rng) for _ in range(n)]
            if not cb.nc_generating_check(n, r):
                return f"n = {n}, r = {r}"
    return None


def check_kreweras(max_n: int = 9):
    for n in range(1, max_n + 1):
        counts: dict = {}
        for pi in cb.enumerate_nc(n):
            t = cb.block_type(pi)
            counts[t] = counts.get(t, 0) + 1
        for m in cb.multiplicity_vectors(n):
            if counts.get(m, 0) != cb.kreweras_count(m):
                return f"n = {n}, m = {m}: enumerated {counts.get(m, 0)}, formula {cb.kreweras_count(m)}"
    return None


def check_catalan(max_k: int = 10):
    for k in range(1, max_k + 1):
        if len(cb.enumerate_nc(k)) != cb.catalan(k):
            return f"k = {k}: |NC(k)| = {len(cb.enumerate_nc(k))}"
    return None


def check_coeffsum(max_size: int = 3):
    shapes = [nu for nu in cb.partitions_up_to(max_size) if nu]
    for nu1 in shapes:
        for nu2 in shapes:
            for k in range(min(len(nu1), len(nu2)) + 1):
                lhs, rhs = cb.coeffsum_sides(nu1, nu2, k)
                if lhs != rhs:
                    return f"nu1 = {nu1}, nu2 = {nu2}, k = {k}: {lhs} != {rhs}"
    return None


# ---------------------------------------------------------------------------
# operators


def check_commutativity(rng: random.Random, max_n: int = 3, rounds: int = 5):
    for N in range(1, max_n + 1):
        theta = Fraction(rng.randint(1, 4), rng.randint(1, 3))
        for _ in range(rounds):
            P = random_poly(rng, N, 4)
            for i in range(1, N + 1):
                for j in range(i + 1, N + 1):
                    a = dunkl_apply(dunkl_apply(P, i, theta), j, theta)
                    b = dunkl_apply(dunkl_apply(P, j, theta), i, theta)
                    if a != b:
                        return f"N = {N}, (i, j) = ({i}, {j}), P = {dict(P.terms)}"
    return None


def explicit_Q(f: AxialSeries, g: AxialSeries, theta) -> AxialSeries:
    """The change operator applied monomial by monomial on explicit polynomials."""
    N = f.var_count
    P, Fp = axial_to_poly(g), axial_to_poly(f)
    acc = (N - 1) * shift_down(P, 1)
    for j in range(2, N + 1):
        acc = acc - change_apply(P, 1, j)
    res = acc * (Fraction(theta) / N) + Fp * P
    return poly_to_axial(res, 1, min(f.degree_cap, g.degree_cap - 1))


def check_apply_q_oracle(rng: random.Random, rounds: int = 20):
    for _ in range(rounds):
        N = rng.randint(2, 4)
        theta = Fraction(rng.randint(1, 5), rng.randint(1, 3))
        f = random_axial(rng, 3, 3, N)
        g = random_axial(rng, 4, 4, N)
        if apply_Q(f, g, theta) != explicit_Q(f, g, theta):
            return f"N = {N}, theta = {theta}, f = {f.coeffs}, g = {g.coeffs}"
    return None


def check_theorem_value(rng: random.Random, rounds: int = 50):
    for _ in range(rounds):
        k = rng.randint(1, 5)
        theta = Fraction(rng.randint(1, 4), rng.randint(1, 3))
        f = random_axial(rng, k, 4)
        g = random_axial(rng, k, 4)
        lhs = apply_Q_power(f, g, k - 1, theta).constant_term()
        rhs = theorem_value_rhs(f, g, k, theta)
        if lhs != rhs:
            return f"k = {k}, theta = {theta}, f = {f.coeffs}, g = {g.coeffs}: {lhs} != {rhs}"
    return None


def random_shape(rng: random.Random, max_size: int = 5) -> tuple[int, ...]:
    size = rng.randint(1, max_size)
    return rng.choice(cb.partitions_of(size))


def check_finalvalue(rng: random.Random, rounds: int = 20):
    for _ in range(rounds):
        lam = random_shape(rng)
        theta = Fraction(rng.randint(1, 4), rng.randint(1, 3))
        cap = sum(lam) + 1
        fs = [random_axial(rng, cap, 4) for _ in lam]
        g = random_axial(rng, cap, 4)
        lhs = iterated_R_constant(fs, g, lam, theta)
        rhs = finalvalue_rhs(fs, g, lam, theta)
        if lhs != rhs:
            return f"lambda = {lam}, theta = {theta}: {lhs} != {rhs}"
    return None


def check_kill_rule(rng: random.Random, rounds: int = 20):
    for _ in range(rounds):
        cap = rng.randint(1, 5)
        theta = Fraction(rng.randint(1, 4), rng.randint(1, 3))
        coeffs = {nu: random_fraction(rng) for nu in cb.partitions_up_to(cap) if rng.random() < 0.6}
        s = SymmetricSeries(coeffs, LIMIT, cap).to_axial()
        for k in range(2, cap + 2):
            if free_cumulant(s, k, theta):
                return f"k = {k}, series = {coeffs}"
    return None


def check_moment_evaluators(rng: random.Random, max_k: int = 9):
    for k in range(1, max_k + 1):
        c = [random_fraction(rng) for _ in range(k)]
        if moment_from_cumulants(c, k) != moment_via_residue(c, k):
            return f"k = {k}, c = {c}"
    return None


# ---------------------------------------------------------------------------
# ensembles


def check_single_marginal(seed: int, trials: int = 20000, beta: float = 2.0):
    xs = [sample_beta_hermite(1, beta, seed, t).eigenvalues[0] for t in range(trials)]
    n = len(xs)
    sq = [x * x for x in xs]
    mean_sq = sum(sq) / n
    var_sq = sum((y - mean_sq) ** 2 for y in sq) / (n - 1)
    stderr = (var_sq / n) ** 0.5
    if abs(mean_sq - 2 / beta) > 4 * stderr:
        return f"N = 1, beta = {beta}: E x^2 = {mean_sq:.5f} +- {stderr:.5f}, expected {2 / beta}"
    return None


def check_finite_oracle(seed: int, N: int = 12, trials: int = 1000):
    """Monte Carlo means against the exact finite-N moments from the Dunkl oracle."""
    for beta in (1, 2, 4):
        theta = Fraction(beta, 2)
        F = hermite_log_bgf(N, theta)
        res = monte_carlo_moments(N, beta, trials, (2, 4), seed)
        for est in res.estimates:
            exact = float(finite_mixed_moment(F, (est.order,), theta))
            if abs(est.mean - exact) > 4 * est.stderr:
                return f"beta = {beta}, N = {N}, k = {est.order}: {est.mean:.5f} +- {est.stderr:.5f} vs {exact:.5f}"
    return None


def check_dense_oracle(seed: int, N: int = 30, trials: int = 600):
    tri = monte_carlo_moments(N, 2, trials, (2, 4), seed)
    dense = monte_carlo_moments(N, 2, trials, (2, 4), seed, sampler=lambda t: sample_gue_dense(N, seed + 1, t))
    for a, b in zip(tri.estimates, dense.estimates):
        if abs(a.mean - b.mean) > 4 * (a.stderr ** 2 + b.stderr ** 2) ** 0.5:
            return f"k = {a.order}: tridiagonal {a.mean:.5f} vs dense {b.mean:.5f}"
    return None


def build_suite(name: str, seed: int = 0, fault: str | None = None) -> list[tuple[str, Callable[[], str | None]]]:
    rng = random.Random(seed)
    if name == "appendix":
        return [
            ("binomial_identity", lambda: check_binomial(fault=fault == "binomial")),
            ("noncrossing_recursion", lambda: check_nc_recursion(rng)),
            ("residue_formula", lambda: check_residue(rng)),
            ("kreweras_counts", check_kreweras),
            ("catalan_counts", check_catalan),
            ("monomial_overlap_count", check_coeffsum),
        ]
    if name == "operators":
        return [
            ("dunkl_commutativity", lambda: check_commutativity(rng)),
            ("change_operator_closed_form", lambda: check_apply_q_oracle(rng)),
            ("first_block_value", lambda: check_theorem_value(rng)),
            ("iterated_value", lambda: check_finalvalue(rng)),
            ("symmetric_kill_rule", lambda: check_kill_rule(rng)),
            ("moment_evaluators_agree", lambda: check_moment_evaluators(rng)),
        ]
    if name == "ensembles":
        return [
            ("single_eigenvalue_marginal", lambda: check_single_marginal(seed)),
            ("exact_finite_moments", lambda: check_finite_oracle(seed)),
            ("dense_hermitian_agreement", lambda: check_dense_oracle(seed)),
        ]
    raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")


def run_suite(name: str, seed: int = 0, fault: str | None = None) -> list[CheckResult]:
    return [CheckResult(label, check()) for label, check in build_suite(name, seed, fault)]
