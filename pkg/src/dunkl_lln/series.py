"""Truncated formal power series in the monomial symmetric basis.

A `SymmetricSeries` stores c^nu, the coefficient of M_nu(x_1..x_N). An
`AxialSeries` is symmetric in every variable except one distinguished axis
x_i and stores c^{d,nu}, the coefficient of x_i^d M_nu(remaining variables).
Both carry a degree cap: every coefficient of total degree <= cap is known
(absent keys are zero), nothing above the cap is.

The number of variables is either a positive integer or `LIMIT`, the
coefficientwise N -> infinity limit in which partitions of any length are
allowed and the 1/N corrections of the operators vanish.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Union

from .combinatorics import (
    Partition,
    equivalent_partition,
    is_partition,
    join,
    partitions_up_to,
    split_pairs,
)


class _Limit:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "LIMIT"

    def __reduce__(self):
        return (_Limit, ())


LIMIT = _Limit()
VarCount = Union[int, _Limit]


class TruncationError(ValueError):
    """Raised when an operation needs coefficients above an input's degree cap."""


def _check_var_count(n) -> None:
    if n is LIMIT:
        return
    if not isinstance(n, int) or n < 0:
        raise ValueError(f"var_count must be a nonnegative int or LIMIT, got {n!r}")


def _max_len(n: VarCount, offset: int = 0):
    return None if n is LIMIT else n - offset


@dataclass(frozen=True)
class SymmetricSeries:
    coeffs: Mapping[Partition, Fraction]
    var_count: VarCount
    degree_cap: int

    def __post_init__(self):
        _check_var_count(self.var_count)
        clean = {}
        for nu, v in self.coeffs.items():
            nu = tuple(nu)
            if not is_partition(nu):
                raise ValueError(f"{nu} is not a partition")
            if sum(nu) > self.degree_cap:
                raise ValueError(f"key {nu} exceeds degree cap {self.degree_cap}")
            if self.var_count is not LIMIT and len(nu) > self.var_count:
                raise ValueError(f"key {nu} has more parts than {self.var_count} variables")
            v = Fraction(v)
            if v:
                clean[nu] = v
        object.__setattr__(self, "coeffs", clean)

    def coeff(self, nu: Partition) -> Fraction:
        return self.coeffs.get(tuple(nu), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coeff(())

    def truncate(self, cap: int) -> "SymmetricSeries":
        if cap > self.degree_cap:
            raise TruncationError(f"cannot raise cap {self.degree_cap} to {cap}")
        return SymmetricSeries(
            {nu: v for nu, v in self.coeffs.items() if sum(nu) <= cap}, self.var_count, cap
        )

    def to_axial(self, axis: int = 1) -> "AxialSeries":
        """View the series as an element of the axial family: c^{d,nu} = c^{nu+(d)}."""
        if self.var_count is not LIMIT and self.var_count < 1:
            raise ValueError("a series in zero variables has no axis")
        coeffs = {}
        for nu, v in self.coeffs.items():
            # each distinct part can sit on the axis; d = 0 means the axis is absent
            if self.var_count is LIMIT or len(nu) < self.var_count:
                coeffs[(0, nu)] = v
            for d in set(nu):
                rest = list(nu)
                rest.remove(d)
                coeffs[(d, tuple(rest))] = v
        return AxialSeries(coeffs, self.var_count, self.degree_cap, axis=axis)


@dataclass(frozen=True)
class AxialSeries:
    coeffs: Mapping[tuple[int, Partition], Fraction]
    var_count: VarCount
    degree_cap: int
    axis: int = field(default=1)

    def __post_init__(self):
        _check_var_count(self.var_count)
        if self.var_count is not LIMIT and self.var_count < max(self.axis, 1):
            raise ValueError(f"axis {self.axis} out of range for {self.var_count} variables")
        clean = {}
        for (d, nu), v in self.coeffs.items():
            nu = tuple(nu)
            if d < 0 or not is_partition(nu):
                raise ValueError(f"bad key {(d, nu)}")
            if d + sum(nu) > self.degree_cap:
                raise ValueError(f"key {(d, nu)} exceeds degree cap {self.degree_cap}")
            if self.var_count is not LIMIT and len(nu) > self.var_count - 1:
                raise ValueError(f"key {(d, nu)} needs more than {self.var_count} variables")
            v = Fraction(v)
            if v:
                clean[(d, nu)] = v
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def unit(cls, var_count: VarCount, degree_cap: int = 0, axis: int = 1) -> "AxialSeries":
        return cls({(0, ()): 1}, var_count, degree_cap, axis)

    @classmethod
    def zero(cls, var_count: VarCount, degree_cap: int = 0, axis: int = 1) -> "AxialSeries":
        return cls({}, var_count, degree_cap, axis)

    def coeff(self, d: int, nu: Partition) -> Fraction:
        return self.coeffs.get((d, tuple(nu)), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coeff(0, ())

    def truncate(self, cap: int) -> "AxialSeries":
        if cap > self.degree_cap:
            raise TruncationError(f"cannot raise cap {self.degree_cap} to {cap}")
        return AxialSeries(
            {k: v for k, v in self.coeffs.items() if k[0] + sum(k[1]) <= cap},
            self.var_count, cap, self.axis,
        )

    def restrict_axis_zero(self) -> SymmetricSeries:
        """Set the axis variable to zero; the result is symmetric in the others."""
        n = self.var_count if self.var_count is LIMIT else self.var_count - 1
        return SymmetricSeries(
            {nu: v for (d, nu), v in self.coeffs.items() if d == 0}, n, self.degree_cap
        )

    def is_symmetric(self) -> bool:
        """True when the coefficients only depend on nu + (d), i.e. the axis is not special."""
        seen: dict[Partition, Fraction] = {}
        for d in range(self.degree_cap + 1):
            for nu in partitions_up_to(self.degree_cap - d, _max_len(self.var_count, 1)):
                lam = join(nu, d)
                v = self.coeff(d, nu)
                if seen.setdefault(lam, v) != v:
                    return False
        return True


def constant_term(s: SymmetricSeries | AxialSeries) -> Fraction:
    return s.constant_term()


@lru_cache(maxsize=None)
def _split_types(nu: Partition) -> tuple[tuple[Partition, Partition, int], ...]:
    counts = Counter(
        (equivalent_partition(p1), equivalent_partition(p2)) for p1, p2 in split_pairs(nu)
    )
    return tuple((a, b, m) for (a, b), m in counts.items())


def _check_compatible(f: AxialSeries, g: AxialSeries) -> None:
    if f.axis != g.axis:
        raise ValueError(f"axis mismatch: {f.axis} vs {g.axis}")
    if f.var_count is not g.var_count and f.var_count != g.var_count:
        raise ValueError(f"variable count mismatch: {f.var_count} vs {g.var_count}")


def axial_mul(f: AxialSeries, g: AxialSeries, cap: int | None = None) -> AxialSeries:
    """Product of two axial series, truncated at `cap`."""
    _check_compatible(f, g)
    avail = min(f.degree_cap, g.degree_cap)
    cap = avail if cap is None else cap
    if cap > avail:
        raise TruncationError(f"product needs inputs up to degree {cap}, have {avail}")
    out = {}
    for nu in partitions_up_to(cap, _max_len(f.var_count, 1)):
        types = _split_types(nu)
        for d in range(cap - sum(nu) + 1):
            out[(d, nu)] = _convolve(f, g, d, types)
    return AxialSeries(out, f.var_count, cap, f.axis)


def _convolve(f: AxialSeries, g: AxialSeries, d: int, types) -> Fraction:
    total = Fraction(0)
    for a in range(d + 1):
        for nu1, nu2, mult in types:
            x = f.coeffs.get((a, nu1))
            if x is None:
                continue
            y = g.coeffs.get((d - a, nu2))
            if y is not None:
                total += mult * x * y
    return total


def apply_Q(f: AxialSeries, g: AxialSeries, theta, cap: int | None = None) -> AxialSeries:
    """Apply the change operator built from `f` to `g`.

    Finite N uses the exact closed form including the theta/N line; in LIMIT
    mode that line is dropped. The result is known one degree below `g`.
    """
    _check_compatible(f, g)
    theta = Fraction(theta)
    avail = min(f.degree_cap, g.degree_cap - 1)
    cap = avail if cap is None else cap
    if cap < 0 or cap > avail:
        raise TruncationError(
            f"output cap {cap} needs g to degree {cap + 1} and f to degree {cap}; "
            f"have {g.degree_cap} and {f.degree_cap}"
        )
    finite = f.var_count is not LIMIT
    out = {}
    for nu in partitions_up_to(cap, _max_len(f.var_count, 1)):
        types = _split_types(nu)
        length = len(nu)
        for d in range(cap - sum(nu) + 1):
            shifted = g.coeff(d + 1, nu)
            moved = g.coeff(0, join(nu, d + 1))
            val = theta * shifted - theta * moved + _convolve(f, g, d, types)
            if finite:
                val += theta / f.var_count * (-shifted + (length + 1) * moved)
            out[(d, nu)] = val
    return AxialSeries(out, f.var_count, cap, f.axis)


def apply_Q_power(f: AxialSeries, g: AxialSeries, k: int, theta) -> AxialSeries:
    for _ in range(k):
        g = apply_Q(f, g, theta)
    return g


def apply_R(f: AxialSeries, g: AxialSeries, k: int, theta, cap: int | None = None) -> SymmetricSeries:
    """k applications of the change operator of `f` to `g`, then the axis set to 0."""
    if k < 1:
        raise ValueError("k must be positive")
    h = apply_Q_power(f, g, k, theta)
    if cap is not None:
        h = h.truncate(cap)
    return h.restrict_axis_zero()


def axial_from_symmetric_derivative(
    F: SymmetricSeries, scale=1, axis: int = 1, var_count: VarCount | None = None
) -> AxialSeries:
    """scale * dF/dx_axis as an axial series: c^{d,nu} = scale (d+1) c_F^{nu+(d+1)}.

    `var_count` may restrict F to fewer variables (the others set to zero).
    """
    n = F.var_count if var_count is None else var_count
    if F.var_count is not LIMIT and (n is LIMIT or n > F.var_count):
        raise ValueError("cannot extend a finite series to more variables")
    if n is not LIMIT and axis > n:
        raise ValueError("axis out of range")
    scale = Fraction(scale)
    cap = F.degree_cap - 1
    if cap < 0:
        raise TruncationError("derivative of a degree-0 series has no known coefficients")
    out = {}
    for nu in partitions_up_to(cap, _max_len(n, 1)):
        for d in range(cap - sum(nu) + 1):
            v = F.coeff(join(nu, d + 1))
            if v:
                out[(d, nu)] = scale * (d + 1) * v
    return AxialSeries(out, n, cap, axis)


# ---------------------------------------------------------------------------
# Limit data


def _fmt(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text) -> Fraction:
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"rational must be a 'p/q' string, got {text!r}")
    return Fraction(text.strip())


@dataclass(frozen=True)
class CumulantSpec:
    """theta together with the limits c_nu of the scaled log-BGF derivatives."""

    theta: Fraction
    c: Mapping[Partition, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        theta = Fraction(self.theta)
        if theta <= 0:
            raise ValueError("theta must be positive")
        clean = {}
        for nu, v in self.c.items():
            nu = tuple(nu)
            if not nu or not is_partition(nu):
                raise ValueError(f"bad partition key {nu}")
            clean[nu] = Fraction(v)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "c", clean)

    def to_dict(self) -> dict:
        return {
            "theta": _fmt(self.theta),
            "c": [{"partition": list(nu), "value": _fmt(v)} for nu, v in sorted(self.c.items())],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CumulantSpec":
        if not isinstance(data, dict) or "theta" not in data:
            raise ValueError("spec must be an object with a 'theta' field")
        entries = data.get("c", [])
        if not isinstance(entries, list):
            raise ValueError("'c' must be a list")
        c = {}
        for entry in entries:
            nu = tuple(entry["partition"])
            if any(not isinstance(x, int) for x in nu):
                raise ValueError(f"partition {nu} must be a list of integers")
            if nu in c:
                raise ValueError(f"duplicate partition {nu}")
            c[nu] = parse_rational(entry["value"])
        return cls(parse_rational(data["theta"]), c)

    def dumps(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def loads(cls, text: str) -> "CumulantSpec":
        return cls.from_dict(json.loads(text))


def limit_axial_from_spec(spec: CumulantSpec, cap: int) -> AxialSeries:
    """Limiting sequence of the scaled derivative of F_N built from the c_nu."""
    out = {}
    for nu in partitions_up_to(cap):
        for d in range(cap - sum(nu) + 1):
            v = spec.c.get(join(nu, d + 1))
            if v:
                out[(d, nu)] = Fraction((d + 1) * (len(nu) + 1), sum(nu) + d + 1) * v
    return AxialSeries(out, LIMIT, cap)


def iterated_R_constant(f_list, g: AxialSeries, lam, theta) -> Fraction:
    """[1] of R^{lam_m}(f_m) ... R^{lam_1}(f_1) applied to g.

    After each block the result is symmetric, so it is re-read as an axial
    series on the nominal axis before the next block acts.
    """
    lam = tuple(lam)
    if not lam or len(f_list) != len(lam):
        raise ValueError("need one f per part of a nonempty lambda")
    h = g
    for step, (f, part) in enumerate(zip(f_list, lam)):
        if step:
            h = h.to_axial(f.axis)
            if h.var_count is not LIMIT and f.var_count is not LIMIT and f.var_count != h.var_count:
                raise ValueError("f and the running series disagree on the number of variables")
        h = apply_R(f, h, part, theta)
    return h.constant_term()
