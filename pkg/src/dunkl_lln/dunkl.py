"""Exact multivariate polynomials and the Dunkl operator calculus on them.

This is the finite-N side of the engine: everything here works on explicit
polynomials in x_1..x_N with exact coefficients, so it serves as an oracle
for the series calculus and for the limit formulas.

Variable indices in the public API are 1-based.
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Iterable, Mapping, Sequence

from .combinatorics import (
    Partition,
    enumerate_nc,
    equivalent_partition,
    monomials_of,
    partitions_of,
    partitions_up_to,
    perm_count,
    sigma,
)
from .series import AxialSeries, SymmetricSeries

Exponent = tuple[int, ...]


# ---------------------------------------------------------------------------
# Polynomials in the formal symbols c^nu


class FormalPoly:
    """Polynomial with rational coefficients in the symbols c^nu.

    Monomials are keyed by a sorted tuple of partitions (a multiset); the
    empty tuple is the constant monomial.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[Partition, ...], Fraction] | None = None):
        self.terms = {k: Fraction(v) for k, v in (terms or {}).items() if v}

    @classmethod
    def symbol(cls, nu: Partition) -> "FormalPoly":
        return cls({(tuple(nu),): 1})

    @staticmethod
    def key(parts: Iterable[Partition]) -> tuple[Partition, ...]:
        return tuple(sorted((tuple(p) for p in parts), reverse=True))

    def coefficient(self, parts: Iterable[Partition]) -> Fraction:
        return self.terms.get(self.key(parts), Fraction(0))

    def _coerce(self, other) -> "FormalPoly":
        if isinstance(other, FormalPoly):
            return other
        return FormalPoly({(): other})

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return FormalPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return FormalPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, FormalPoly):
            other = Fraction(other)
            return FormalPoly({k: v * other for k, v in self.terms.items()})
        out: dict = defaultdict(Fraction)
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                out[self.key(k1 + k2)] += v1 * v2
        return FormalPoly(out)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, FormalPoly):
            other = self._coerce(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(
            f"{v}*" + "*".join(f"c{list(p)}" for p in k) if k else str(v)
            for k, v in sorted(self.terms.items())
        )


# ---------------------------------------------------------------------------
# Polynomials in x_1..x_N


def _clean(terms: Mapping) -> dict:
    return {k: v for k, v in terms.items() if v}


@dataclass(frozen=True)
class MultivariatePoly:
    var_count: int
    terms: Mapping[Exponent, object]

    def __post_init__(self):
        clean = {}
        for e, v in self.terms.items():
            e = tuple(e)
            if len(e) != self.var_count or any(x < 0 for x in e):
                raise ValueError(f"exponent {e} invalid for {self.var_count} variables")
            if v:
                clean[e] = v if isinstance(v, FormalPoly) else Fraction(v)
        object.__setattr__(self, "terms", clean)

    # constructors

    @classmethod
    def constant(cls, var_count: int, value=1) -> "MultivariatePoly":
        return cls(var_count, {(0,) * var_count: value})

    @classmethod
    def variable(cls, var_count: int, i: int, power: int = 1) -> "MultivariatePoly":
        e = [0] * var_count
        e[i - 1] = power
        return cls(var_count, {tuple(e): 1})

    @classmethod
    def monomial_symmetric(cls, nu: Partition, var_count: int, coeff=1) -> "MultivariatePoly":
        return cls(var_count, {e: coeff for e in monomials_of(tuple(nu), var_count)})

    @classmethod
    def from_symmetric(cls, coeffs: Mapping[Partition, object], var_count: int) -> "MultivariatePoly":
        """sum_nu coeffs[nu] * M_nu(x_1..x_N)."""
        terms: dict = {}
        for nu, c in coeffs.items():
            for e in monomials_of(tuple(nu), var_count):
                terms[e] = terms.get(e, 0) + c
        return cls(var_count, terms)

    # arithmetic

    def __add__(self, other: "MultivariatePoly") -> "MultivariatePoly":
        self._same_ring(other)
        out = dict(self.terms)
        for e, v in other.terms.items():
            out[e] = out.get(e, 0) + v
        return MultivariatePoly(self.var_count, out)

    def __neg__(self):
        return MultivariatePoly(self.var_count, {e: -v for e, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, MultivariatePoly):
            self._same_ring(other)
            return MultivariatePoly(self.var_count, _poly_mul(self.terms, other.terms))
        return MultivariatePoly(self.var_count, {e: v * other for e, v in self.terms.items()})

    __rmul__ = __mul__

    def _same_ring(self, other):
        if other.var_count != self.var_count:
            raise ValueError("polynomials live in different numbers of variables")

    # queries

    def constant_term(self):
        return self.terms.get((0,) * self.var_count, Fraction(0))

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def permute(self, perm: Sequence[int]) -> "MultivariatePoly":
        """Substitute x_k -> x_{perm[k]} (1-based permutation as a sequence)."""
        out = {}
        for e, v in self.terms.items():
            new = [0] * self.var_count
            for k, a in enumerate(e):
                new[perm[k] - 1] = a
            out[tuple(new)] = v
        return MultivariatePoly(self.var_count, out)

    def is_symmetric(self) -> bool:
        """Invariance under (1 2) and the full cycle, which generate S_N."""
        n = self.var_count
        if n < 2:
            return True
        swap = [2, 1] + list(range(3, n + 1))
        cycle = list(range(2, n + 1)) + [1]
        return self.permute(swap) == self and self.permute(cycle) == self

    def derivative(self, i: int) -> "MultivariatePoly":
        return MultivariatePoly(self.var_count, _derivative(self.terms, i - 1))

    def set_zero(self, i: int) -> "MultivariatePoly":
        return MultivariatePoly(
            self.var_count, {e: v for e, v in self.terms.items() if e[i - 1] == 0}
        )

    def symmetric_coeffs(self) -> dict[Partition, object]:
        """Coefficients in the M_nu basis; requires a symmetric polynomial."""
        out = {}
        for e, v in self.terms.items():
            nu = equivalent_partition(e)
            if out.setdefault(nu, v) != v:
                raise ValueError("polynomial is not symmetric")
        return out


def _poly_mul(a: Mapping, b: Mapping, max_degree: int | None = None) -> dict:
    out: dict = {}
    for e1, v1 in a.items():
        d1 = sum(e1)
        for e2, v2 in b.items():
            if max_degree is not None and d1 + sum(e2) > max_degree:
                continue
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, 0) + v1 * v2
    return _clean(out)


def _derivative(terms: Mapping, i: int) -> dict:
    out = {}
    for e, v in terms.items():
        a = e[i]
        if a:
            new = list(e)
            new[i] = a - 1
            out[tuple(new)] = v * a
    return out


def _add_into(acc: dict, e: Exponent, v) -> None:
    acc[e] = acc.get(e, 0) + v


def _divided_switch(terms: Mapping, i: int, j: int, theta: Fraction) -> dict:
    out: dict = {}
    for e, v in terms.items():
        a, b = e[i], e[j]
        if a == b:
            continue
        if a > b:
            lo, n, c = b, a - b, theta * v
        else:
            lo, n, c = a, b - a, -theta * v
        base = list(e)
        for s in range(n):
            base[i] = lo + s
            base[j] = lo + n - 1 - s
            _add_into(out, tuple(base), c)
    return out


def _dunkl(terms: Mapping, i: int, n: int, theta: Fraction) -> dict:
    out = _derivative(terms, i)
    for j in range(n):
        if j != i:
            for e, v in _divided_switch(terms, i, j, theta).items():
                _add_into(out, e, v)
    return _clean(out)


def _shift_down(terms: Mapping, i: int) -> dict:
    out = {}
    for e, v in terms.items():
        if e[i]:
            new = list(e)
            new[i] -= 1
            out[tuple(new)] = v
    return out


def _change(terms: Mapping, i: int, j: int) -> dict:
    out: dict = {}
    for e, v in terms.items():
        if e[i] == 0 and e[j] >= 1:
            new = list(e)
            new[i] = e[j] - 1
            new[j] = 0
            _add_into(out, tuple(new), v)
    return out


def _check_pair(P: MultivariatePoly, i: int, j: int) -> None:
    if i == j:
        raise ValueError("switch and change need distinct indices")
    for k in (i, j):
        if not 1 <= k <= P.var_count:
            raise ValueError(f"index {k} out of range 1..{P.var_count}")


def divided_switch(P: MultivariatePoly, i: int, j: int, theta) -> MultivariatePoly:
    """theta/(x_i - x_j) (1 - s_ij) P, computed by telescoping each monomial."""
    _check_pair(P, i, j)
    return MultivariatePoly(P.var_count, _clean(_divided_switch(P.terms, i - 1, j - 1, Fraction(theta))))


def dunkl_apply(P: MultivariatePoly, i: int, theta) -> MultivariatePoly:
    if not 1 <= i <= P.var_count:
        raise ValueError(f"index {i} out of range 1..{P.var_count}")
    return MultivariatePoly(P.var_count, _dunkl(P.terms, i - 1, P.var_count, Fraction(theta)))


def shift_down(P: MultivariatePoly, i: int) -> MultivariatePoly:
    """x_i^a m -> x_i^(a-1) m, killing monomials free of x_i."""
    return MultivariatePoly(P.var_count, _shift_down(P.terms, i - 1))


def change_apply(P: MultivariatePoly, i: int, j: int) -> MultivariatePoly:
    _check_pair(P, i, j)
    return MultivariatePoly(P.var_count, _change(P.terms, i - 1, j - 1))


def _check_indices(F: MultivariatePoly, r: Sequence[int]) -> None:
    if not r:
        raise ValueError("index list must be nonempty")
    if min(r) < 1 or max(r) > F.var_count:
        raise ValueError(f"indices {tuple(r)} out of range 1..{F.var_count}")


def _prune(terms: dict, max_degree: int) -> dict:
    return {e: v for e, v in terms.items() if sum(e) <= max_degree}


def _d_r_terms(F: MultivariatePoly, r: Sequence[int], theta: Fraction, constant_only: bool) -> dict:
    n = F.var_count
    grads = {i: _derivative(F.terms, i - 1) for i in set(r)}
    h: dict = {(0,) * n: Fraction(1)}
    for step, idx in enumerate(r):
        remaining = len(r) - step - 1
        nxt = _dunkl(h, idx - 1, n, theta)
        cap = remaining if constant_only else None
        for e, v in _poly_mul(grads[idx], h, cap).items():
            _add_into(nxt, e, v)
        h = _clean(nxt)
        if constant_only:
            # every later Dunkl step lowers the degree by exactly one and the
            # multiplications never lower it
            h = _prune(h, remaining)
    return h


def d_r_product(F: MultivariatePoly, r: Sequence[int], theta) -> MultivariatePoly:
    """prod_j (D_{r_j} + d/dx_{r_j} F) applied to 1, the first index acting first."""
    _check_indices(F, r)
    return MultivariatePoly(F.var_count, _d_r_terms(F, r, Fraction(theta), False))


def d_r_constant(F: MultivariatePoly, r: Sequence[int], theta):
    _check_indices(F, r)
    return _d_r_terms(F, r, Fraction(theta), True).get((0,) * F.var_count, Fraction(0))


def _q_r_terms(F: MultivariatePoly, r: Sequence[int], theta: Fraction, constant_only: bool) -> dict:
    n = F.var_count
    grads = {i: _derivative(F.terms, i - 1) for i in set(r)}
    h: dict = {(0,) * n: Fraction(1)}
    for step, idx in enumerate(r):
        i = idx - 1
        remaining = len(r) - step - 1
        nxt: dict = {}
        for e, v in _shift_down(h, i).items():
            _add_into(nxt, e, theta * (n - 1) * v)
        for j in range(n):
            if j != i:
                for e, v in _change(h, i, j).items():
                    _add_into(nxt, e, -theta * v)
        cap = remaining if constant_only else None
        for e, v in _poly_mul(grads[idx], h, cap).items():
            _add_into(nxt, e, v)
        h = _clean(nxt)
        if constant_only:
            h = _prune(h, remaining)
    return h


def q_r_product(F: MultivariatePoly, r: Sequence[int], theta, N: int | None = None) -> MultivariatePoly:
    """prod_j (theta sum_{l != r_j} (d_{r_j} - C_{r_j,l}) + d/dx_{r_j} F) applied to 1."""
    if N is not None and N != F.var_count:
        raise ValueError("N must match the number of variables of F")
    _check_indices(F, r)
    return MultivariatePoly(F.var_count, _q_r_terms(F, r, Fraction(theta), False))


def q_r_constant(F: MultivariatePoly, r: Sequence[int], theta):
    _check_indices(F, r)
    return _q_r_terms(F, r, Fraction(theta), True).get((0,) * F.var_count, Fraction(0))


# ---------------------------------------------------------------------------
# Mixed moments at finite N


def _label_patterns(m: int, n: int):
    """Restricted growth strings of length m with at most n labels, with the
    number of index tuples in [1..n]^m sharing that equality pattern."""
    def grow(prefix, used):
        if len(prefix) == m:
            yield tuple(prefix), used
            return
        for lab in range(1, min(used + 1, n) + 1):
            yield from grow(prefix + [lab], max(used, lab))

    for pattern, used in grow([], 0):
        yield pattern, prod(range(n - used + 1, n + 1))


def mixed_moment_index_lists(lam: Partition, N: int, use_symmetry: bool = True):
    """(index list l, multiplicity) pairs covering I_N(lam)."""
    if use_symmetry:
        tuples = _label_patterns(len(lam), N)
    else:
        tuples = ((t, 1) for t in itertools.product(range(1, N + 1), repeat=len(lam)))
    for labels, mult in tuples:
        yield [i for i, part in zip(labels, lam) for _ in range(part)], mult


def finite_mixed_moment(F: MultivariatePoly, lam: Partition, theta, use_symmetry: bool = True) -> Fraction:
    """N^-(l(lam)+|lam|) sum over I_N(lam) of [1] D_l(F).

    With F the log-BGF of mu_N (truncated at degree |lam|) this is
    E[prod_i p_{lam_i}^N]. `use_symmetry` groups index lists by their
    equality pattern, which is exact because F is symmetric.
    """
    lam = tuple(lam)
    if not lam:
        raise ValueError("lambda must be nonempty")
    if not F.is_symmetric():
        raise ValueError("F must be symmetric")
    if F.constant_term():
        raise ValueError("F must have zero constant term")
    theta = Fraction(theta)
    N = F.var_count
    total = Fraction(0)
    for l, mult in mixed_moment_index_lists(lam, N, use_symmetry):
        total += mult * d_r_constant(F, l, theta)
    return total / Fraction(N) ** (len(lam) + sum(lam))


# ---------------------------------------------------------------------------
# Conversions between explicit polynomials and the series types


def axial_to_poly(s: AxialSeries) -> MultivariatePoly:
    """Expand an axial series (finite N) with its axis as an explicit polynomial."""
    n = s.var_count
    a = s.axis - 1
    terms: dict = {}
    for (d, nu), v in s.coeffs.items():
        for rest in monomials_of(nu, n - 1):
            e = list(rest)
            e.insert(a, d)
            _add_into(terms, tuple(e), v)
    return MultivariatePoly(n, terms)


def poly_to_axial(P: MultivariatePoly, axis: int, degree_cap: int) -> AxialSeries:
    """Collect a polynomial symmetric outside `axis` into axial coefficients up to `degree_cap`."""
    coeffs: dict = {}
    for e, v in P.terms.items():
        if sum(e) > degree_cap:
            continue
        d = e[axis - 1]
        nu = equivalent_partition(e[: axis - 1] + e[axis:])
        if coeffs.setdefault((d, nu), v) != v:
            raise ValueError("polynomial is not symmetric outside the axis")
    return AxialSeries(coeffs, P.var_count, degree_cap, axis)


def symmetric_to_poly(s: SymmetricSeries) -> MultivariatePoly:
    return MultivariatePoly.from_symmetric(s.coeffs, s.var_count)


# ---------------------------------------------------------------------------
# Coefficient polynomials in N


def formal_monomials(k: int) -> list[tuple[Partition, ...]]:
    """All products of c^nu symbols (multisets of nonempty partitions) of total degree k."""
    out = []

    def rec(rest: int, max_item, acc):
        if rest == 0:
            out.append(tuple(acc))
            return
        for size in range(rest, 0, -1):
            for nu in partitions_of(size):
                item = (size, nu)
                if max_item is not None and item > max_item:
                    continue
                rec(rest - size, item, acc + [nu])

    rec(k, None, [])
    return [FormalPoly.key(p) for p in out]


def formal_symmetric_poly(k: int, N: int) -> MultivariatePoly:
    """F = sum over 1 <= |nu| <= k of c^nu M_nu(x_1..x_N) with symbolic c^nu."""
    coeffs = {
        nu: FormalPoly.symbol(nu)
        for nu in partitions_up_to(k, N)
        if nu
    }
    return MultivariatePoly.from_symmetric(coeffs, N)


def formal_d_r_constant(r: Sequence[int], N: int, theta) -> FormalPoly:
    """[1] D_r(F) as a polynomial in the symbols c^nu."""
    F = formal_symmetric_poly(len(r), N)
    value = d_r_constant(F, r, theta)
    return value if isinstance(value, FormalPoly) else FormalPoly({(): value})


def _interpolate(xs: Sequence[int], ys: Sequence[Fraction]) -> list[Fraction]:
    """Power-basis coefficients of the interpolating polynomial (Newton form, exact)."""
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        # poly = poly * (x - xs[i]) + coef[i]
        shifted = [Fraction(0)] + poly[:-1]
        poly = [s - xs[i] * p for s, p in zip(shifted, poly)]
        poly[0] += coef[i]
    return poly


def _eval_poly(coeffs: Sequence[Fraction], x) -> Fraction:
    out = Fraction(0)
    for c in reversed(coeffs):
        out = out * x + c
    return out


@dataclass(frozen=True)
class CoefficientFit:
    target: tuple[Partition, ...]
    indices: tuple[int, ...]
    degree_bound: int
    coefficients: tuple[Fraction, ...]  # power basis, constant first
    residuals: tuple[Fraction, ...]  # at the points not used for the fit

    @property
    def exact(self) -> bool:
        return not any(self.residuals)

    @property
    def degree(self) -> int:
        nz = [i for i, c in enumerate(self.coefficients) if c]
        return max(nz) if nz else -1

    @property
    def leading(self) -> Fraction:
        """Coefficient of N^(k - l(p)), the top power allowed by the order bound."""
        if self.degree_bound < 0:
            return Fraction(0)
        return self.coefficients[self.degree_bound]


def coefficient_poly_fit_all(r: Sequence[int], N_values: Sequence[int], theta) -> dict:
    """Fit f_{p,r}(N) for every p of total degree |r| from exact runs at each N."""
    r = tuple(r)
    k = len(r)
    N_values = sorted(set(N_values))
    if N_values[0] < max(r):
        raise ValueError("every N must be at least max(r)")
    values = {N: formal_d_r_constant(r, N, theta) for N in N_values}
    fits = {}
    for p in formal_monomials(k):
        bound = k - len(p)
        if len(N_values) < bound + 2:
            raise ValueError(f"need at least {bound + 2} values of N to fit {p}")
        ys = [values[N].coefficient(p) for N in N_values]
        used = bound + 1
        coeffs = _interpolate(N_values[:used], ys[:used])
        residuals = tuple(
            ys[t] - _eval_poly(coeffs, N_values[t]) for t in range(used, len(N_values))
        )
        fits[p] = CoefficientFit(p, r, bound, tuple(coeffs), residuals)
    return fits


def coefficient_poly_fit(target: Iterable[Partition], r: Sequence[int], N_values: Sequence[int], theta) -> CoefficientFit:
    """Interpolate the coefficient of prod c^nu in [1] D_r(F) as a polynomial in N.

    A target whose total degree differs from |r| has the zero polynomial.
    """
    key = FormalPoly.key(target)
    k = len(r)
    if sum(sum(nu) for nu in key) != k:
        return CoefficientFit(key, tuple(r), k - len(key), (), ())
    return coefficient_poly_fit_all(r, N_values, theta)[key]


def leading_order_rhs(r: Sequence[int], theta) -> FormalPoly:
    """Product over the parts of sigma(r) of the NC sums with weights built from c^nu."""
    theta = Fraction(theta)
    lam = sigma(r)

    def weight(size: int) -> FormalPoly:
        acc = FormalPoly()
        for nu in partitions_of(size):
            sign = (-1) ** (len(nu) - 1)
            acc = acc + FormalPoly.symbol(nu) * (sign * Fraction(sum(nu) * perm_count(nu), len(nu)))
        return acc * theta ** (size - 1)

    total = FormalPoly({(): 1})
    for part in lam:
        inner = FormalPoly()
        for pi in enumerate_nc(part):
            term = FormalPoly({(): 1})
            for block in pi:
                term = term * weight(len(block))
            inner = inner + term
        total = total * inner
    return total
