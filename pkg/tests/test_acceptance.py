"""Acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line; the lines are printed together in the
pytest terminal summary. Two criteria contain a sub-claim that does not hold
for this model (see the reasons on the xfail markers); those sub-claims are
evaluated as stated and expected to fail, while the remaining parts are
checked by ordinary tests.
"""
import itertools
import random
import time
from fractions import Fraction

import pytest

from dunkl_lln import combinatorics as cb
from dunkl_lln.cli import main
from dunkl_lln.cumulants import finalvalue_rhs, theorem_value_rhs
from dunkl_lln.dunkl import (
    MultivariatePoly,
    _interpolate,
    coefficient_poly_fit_all,
    d_r_constant,
    dunkl_apply,
    finite_mixed_moment,
    leading_order_rhs,
    q_r_constant,
)
from dunkl_lln.ensembles import hermite_log_bgf, hermite_spec, monte_carlo_moments, sample_gue_dense
from dunkl_lln.cumulants import mixed_moment_limit
from dunkl_lln.series import apply_Q_power, iterated_R_constant
from dunkl_lln.suites import random_axial, random_fraction, random_poly

SEED = 20240601


# ---------------------------------------------------------------------------
# 1


def test_criterion_1_catalan_moments(acceptance, capsys):
    start = time.perf_counter()
    bad = []
    for theta in ("1", "1/2", "2"):
        main(["moments", "--spec", "hermite", "--theta", theta, "--max-order", "10"])
        out = capsys.readouterr().out.splitlines()[1:]
        got = [Fraction(line.split(",")[1]) for line in out]
        if got[0::2] != [0] * 5 or got[1::2] != [1, 2, 5, 14, 42]:
            bad.append((theta, got))
    elapsed = time.perf_counter() - start
    ok = acceptance(1, "Catalan moments", not bad, f"theta in 1, 1/2, 2; {elapsed:.2f}s" + (f"; mismatches {bad}" if bad else ""))
    assert ok


# ---------------------------------------------------------------------------
# 2


def test_criterion_2_first_block_value(acceptance):
    rng = random.Random(SEED)
    start = time.perf_counter()
    mismatches = []
    trials = 250
    for t in range(trials):
        k = t % 5 + 1
        theta = Fraction(rng.randint(1, 6), rng.randint(1, 4))
        f = random_axial(rng, 4, 4)
        g = random_axial(rng, 4, 4)
        lhs = apply_Q_power(f, g, k - 1, theta).constant_term()
        rhs = theorem_value_rhs(f, g, k, theta)
        if lhs != rhs:
            mismatches.append((t, k, lhs, rhs))
    elapsed = time.perf_counter() - start
    ok = not mismatches and elapsed < 60
    acceptance(2, "first-block cumulant value", ok, f"{trials} pairs, k <= 5, exact; {elapsed:.2f}s" + (f"; {mismatches[:3]}" if mismatches else ""))
    assert ok


# ---------------------------------------------------------------------------
# 3


def test_criterion_3_iterated_value(acceptance):
    rng = random.Random(SEED + 1)
    shapes = [lam for n in range(1, 6) for lam in cb.partitions_of(n)]
    start = time.perf_counter()
    mismatches = []
    count = 0
    for lam in shapes * 3:
        theta = Fraction(rng.randint(1, 6), rng.randint(1, 4))
        cap = sum(lam)
        fs = [random_axial(rng, cap, 4) for _ in lam]
        g = random_axial(rng, cap, 4)
        lhs = iterated_R_constant(fs, g, lam, theta)
        rhs = finalvalue_rhs(fs, g, lam, theta)
        count += 1
        if lhs != rhs:
            mismatches.append((lam, lhs, rhs))
    elapsed = time.perf_counter() - start
    ok = count >= 50 and not mismatches and elapsed < 120
    acceptance(3, "iterated operator value", ok, f"{count} instances, |lambda| <= 5, exact; {elapsed:.2f}s" + (f"; {mismatches[:3]}" if mismatches else ""))
    assert ok


# ---------------------------------------------------------------------------
# 4


def test_criterion_4_combinatorial_identities(acceptance):
    rng = random.Random(SEED + 2)
    start = time.perf_counter()
    failures = []
    for a in range(13):
        for b in range(13):
            for m in range(a + 1):
                if not cb.binom_identity_check(a, b, m):
                    failures.append(("binomial", a, b, m))
    for k in range(1, 8):
        for _ in range(10):
            a = [random_fraction(rng) for _ in range(k + 1)]
            b = [random_fraction(rng) for _ in range(k + 1)]
            if not cb.nc_recursion_check(k, a, b):
                failures.append(("recursion", k))
    for n in range(1, 9):
        for _ in range(10):
            r = [random_fraction(rng) for _ in range(n)]
            if not cb.nc_generating_check(n, r):
                failures.append(("residue", n))
    for n in range(1, 10):
        counts = {}
        for pi in cb.enumerate_nc(n):
            counts[cb.block_type(pi)] = counts.get(cb.block_type(pi), 0) + 1
        for m in cb.multiplicity_vectors(n):
            if counts.get(m, 0) != cb.kreweras_count(m):
                failures.append(("kreweras", m))
    for k in range(1, 11):
        if len(cb.enumerate_nc(k)) != cb.catalan(k):
            failures.append(("catalan", k))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 60
    acceptance(4, "combinatorial identities", ok, f"binomial a,b <= 12; recursion k <= 7; residue n <= 8; Kreweras n <= 9; Catalan k <= 10; {elapsed:.2f}s" + (f"; {failures[:5]}" if failures else ""))
    assert ok


# ---------------------------------------------------------------------------
# 5


def test_criterion_5_dunkl_commutativity(acceptance):
    rng = random.Random(SEED + 3)
    start = time.perf_counter()
    failures = []
    checked = 0
    for N in range(1, 5):
        for i, j in itertools.combinations(range(1, N + 1), 2):
            for _ in range(100):
                theta = Fraction(rng.randint(1, 6), rng.randint(1, 4))
                P = random_poly(rng, N, 5, terms=rng.randint(1, 8))
                a = dunkl_apply(dunkl_apply(P, i, theta), j, theta)
                b = dunkl_apply(dunkl_apply(P, j, theta), i, theta)
                checked += 1
                if a != b:
                    failures.append((N, i, j))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 60
    acceptance(5, "Dunkl commutativity", ok, f"{checked} polynomial/pair cases over N <= 4; {elapsed:.2f}s")
    assert ok


# ---------------------------------------------------------------------------
# 6

CONVERGENCE_SHAPES = [(2,), (4,), (2, 2)]
_convergence_cache = {}


def convergence_table():
    if not _convergence_cache:
        start = time.perf_counter()
        for lam in CONVERGENCE_SHAPES:
            limit = mixed_moment_limit(hermite_spec(1), lam)
            _convergence_cache[lam] = {
                N: abs(finite_mixed_moment(hermite_log_bgf(N, 1), lam, 1) - limit) for N in range(2, 9)
            }
        _convergence_cache["elapsed"] = time.perf_counter() - start
    return _convergence_cache


def fitted_constant(gaps):
    return max(N * g for N, g in gaps.items())


def strictly_decreasing_from_3(gaps):
    return all(gaps[N + 1] < gaps[N] for N in range(3, 8))


@pytest.mark.xfail(
    strict=True,
    reason="for lambda = (2) at theta = 1 the finite-N value equals the limit for every N, "
    "so the gap is identically zero and cannot be strictly decreasing",
)
def test_criterion_6_finite_n_convergence(acceptance):
    table = convergence_table()
    C = max(fitted_constant(table[lam]) for lam in CONVERGENCE_SHAPES)
    decreasing = {lam: strictly_decreasing_from_3(table[lam]) for lam in CONVERGENCE_SHAPES}
    ok = C <= 10 and all(decreasing.values()) and table["elapsed"] < 600
    detail = (
        f"C = {float(C):.3f} <= 10; strictly decreasing for N >= 3: "
        + ", ".join(f"{lam}: {d}" for lam, d in decreasing.items())
        + f"; {table['elapsed']:.2f}s"
    )
    if not ok:
        detail += "; the (2) gap is exactly 0 for all N (E p_2 = 1 + (1/theta - 1)/N)"
    acceptance(6, "finite-N convergence", ok, detail)
    assert ok


def test_criterion_6_attainable_parts():
    table = convergence_table()
    for lam in CONVERGENCE_SHAPES:
        assert fitted_constant(table[lam]) <= 10
    assert all(g == 0 for g in table[(2,)].values())
    assert strictly_decreasing_from_3(table[(4,)])
    assert strictly_decreasing_from_3(table[(2, 2)])
    assert table["elapsed"] < 600


# ---------------------------------------------------------------------------
# 7

PATTERNS = [(1,), (1, 1), (1, 2), (1, 1, 1), (1, 1, 2), (1, 2, 1), (2, 1, 1), (1, 2, 3)]


def test_criterion_7_remainder_bound(acceptance):
    rng = random.Random(SEED + 4)
    start = time.perf_counter()
    Ns = list(range(3, 11))
    worst = Fraction(0)
    failures = []
    for _ in range(3):
        G = {nu: random_fraction(rng) for nu in cb.partitions_up_to(3) if nu}
        theta = Fraction(rng.randint(1, 6), rng.randint(1, 4))
        for r in PATTERNS:
            k = len(r)
            R = []
            for N in Ns:
                F = MultivariatePoly.from_symmetric({nu: N * a for nu, a in G.items()}, N)
                R.append(d_r_constant(F, r, theta) - q_r_constant(F, r, theta))
            # R(N) is a polynomial in N; fit it exactly and confirm its degree
            coeffs = _interpolate(Ns, R)
            if any(coeffs[k:]):
                failures.append((r, [str(c) for c in coeffs]))
            worst = max(worst, max(N * abs(x) / Fraction(N) ** k for N, x in zip(Ns, R)))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 300
    acceptance(7, "D vs Q remainder", ok, f"remainder has degree <= k-1 in N for all 3 F x {len(PATTERNS)} patterns; fitted constant {float(worst):.3f}; {elapsed:.2f}s" + (f"; {failures[:2]}" if failures else ""))
    assert ok


# ---------------------------------------------------------------------------
# 8


def test_criterion_8_coefficient_polynomials(acceptance):
    start = time.perf_counter()
    theta = Fraction(3, 5)
    failures = []
    checked = 0
    for r in [(1, 1), (1, 2), (1, 1, 1), (1, 1, 2), (1, 2, 1), (2, 1, 1), (1, 2, 3)]:
        fits = coefficient_poly_fit_all(r, range(3, 9), theta)
        rhs = leading_order_rhs(r, theta)
        for p, fit in fits.items():
            checked += 1
            if not fit.exact or fit.degree > fit.degree_bound or fit.leading != rhs.coefficient(p):
                failures.append((r, p, fit.coefficients, rhs.coefficient(p)))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 300
    acceptance(8, "coefficient polynomials in N", ok, f"{checked} (r, p) pairs for k = 2, 3; degree and leading term exact; {elapsed:.2f}s" + (f"; {failures[:2]}" if failures else ""))
    assert ok


# ---------------------------------------------------------------------------
# 9

_mc_cache = {}


def monte_carlo_table():
    if not _mc_cache:
        start = time.perf_counter()
        for beta in (1, 2, 4):
            _mc_cache[beta] = monte_carlo_moments(200, beta, 500, (1, 2, 3, 4), SEED).estimates
        tri = monte_carlo_moments(50, 2, 2000, (2, 4), SEED)
        dense = monte_carlo_moments(50, 2, 2000, (2, 4), SEED, sampler=lambda t: sample_gue_dense(50, SEED + 1, t))
        _mc_cache["dense"] = [
            abs(a.mean - b.mean) <= 4 * (a.stderr ** 2 + b.stderr ** 2) ** 0.5
            for a, b in zip(tri.estimates, dense.estimates)
        ]
        _mc_cache["elapsed"] = time.perf_counter() - start
    return _mc_cache


LIMITS = {1: 0, 2: 1, 3: 0, 4: 2}


def z_scores(estimates):
    return {e.order: (e.mean - LIMITS[e.order]) / e.stderr for e in estimates}


@pytest.mark.xfail(
    strict=True,
    reason="for beta != 2 the finite-N mean of p_2 is 1 + (2/beta - 1)/N exactly; at N = 200 "
    "that bias is about ten standard errors of a 500-trial mean",
)
def test_criterion_9_monte_carlo_lln(acceptance):
    table = monte_carlo_table()
    z = {beta: z_scores(table[beta]) for beta in (1, 2, 4)}
    ok = all(abs(v) <= 4 for zs in z.values() for v in zs.values()) and all(table["dense"])
    ok = ok and table["elapsed"] < 300
    detail = "; ".join(
        f"beta {beta}: " + ", ".join(f"z(p{k}) = {v:+.2f}" for k, v in zs.items()) for beta, zs in z.items()
    )
    detail += f"; dense beta = 2 check {'passes' if all(table['dense']) else 'fails'}; {table['elapsed']:.2f}s"
    acceptance(9, "Monte Carlo LLN", ok, detail)
    assert ok


def test_criterion_9_attainable_parts():
    table = monte_carlo_table()
    assert all(abs(v) <= 4 for v in z_scores(table[2]).values())
    for beta in (1, 4):
        zs = z_scores(table[beta])
        assert abs(zs[1]) <= 4 and abs(zs[3]) <= 4
    assert all(table["dense"])


@pytest.mark.parametrize("beta", [1, 4])
def test_criterion_9_bias_is_the_exact_finite_n_value(beta):
    # against the exact finite-N means the same samples are within tolerance
    theta = Fraction(beta, 2)
    for est in monte_carlo_table()[beta]:
        if est.order == 2:
            exact = 1 + (1 / theta - 1) / 200
            assert abs(est.mean - float(exact)) <= 4 * est.stderr
