"""Free cumulants of limiting sequences and the noncrossing moment formulas."""
from __future__ import annotations

from fractions import Fraction
from math import prod
from typing import Sequence

from .combinatorics import (
    Partition,
    first_block_sum,
    laurent_residue_moment,
    nc_moment,
    partitions_of,
    perm_count,
)
from .series import LIMIT, AxialSeries, CumulantSpec

CumulantSequence = Sequence  # c_1, c_2, ... stored from index 0


def free_cumulant(s: AxialSeries, k: int, theta) -> Fraction:
    """c_k(s) = theta^(k-1) sum over |nu| + d = k-1 of (-1)^l(nu) P(nu) c^{d,nu}."""
    if k < 1:
        raise ValueError("cumulant order must be positive")
    if s.var_count is not LIMIT:
        raise ValueError("free cumulants are defined on limiting (LIMIT) series")
    if s.degree_cap < k - 1:
        raise ValueError(f"order {k} needs the series to degree {k - 1}, have {s.degree_cap}")
    theta = Fraction(theta)
    total = Fraction(0)
    for size in range(k):
        d = k - 1 - size
        for nu in partitions_of(size):
            v = s.coeff(d, nu)
            if v:
                total += (-1) ** len(nu) * perm_count(nu) * v
    return theta ** (k - 1) * total


def free_cumulants(s: AxialSeries, K: int, theta) -> list[Fraction]:
    return [free_cumulant(s, k, theta) for k in range(1, K + 1)]


def _check_length(c: CumulantSequence, k: int) -> None:
    if k < 1:
        raise ValueError("moment order must be positive")
    if len(c) < k:
        raise ValueError(f"need cumulants through order {k}, have {len(c)}")


def moment_from_cumulants(c: CumulantSequence, k: int):
    """Sum over NC(k) of the product of c_|B| over the blocks."""
    _check_length(c, k)
    return nc_moment(k, c)


def moment_via_residue(c: CumulantSequence, k: int) -> Fraction:
    """Same moment read off as a Laurent residue; an independent evaluator."""
    _check_length(c, k)
    return laurent_residue_moment(k, [Fraction(x) for x in c])


def cumulants_from_spec(spec: CumulantSpec, K: int) -> list[Fraction]:
    out = []
    for k in range(1, K + 1):
        total = sum(
            ((-1) ** (len(nu) - 1) * perm_count(nu) * spec.c.get(nu, 0) for nu in partitions_of(k)),
            Fraction(0),
        )
        out.append(spec.theta ** (k - 1) * total)
    return out


def moments_from_spec(spec: CumulantSpec, K: int) -> list[Fraction]:
    """Limit moments m_1..m_K of the empirical measures."""
    c = cumulants_from_spec(spec, K)
    return [moment_from_cumulants(c, k) for k in range(1, K + 1)]


def mixed_moment_limit(spec: CumulantSpec, lam: Partition) -> Fraction:
    lam = tuple(lam)
    if not lam:
        return Fraction(1)
    m = moments_from_spec(spec, max(lam))
    return prod((m[part - 1] for part in lam), start=Fraction(1))


def theorem_value_rhs(f: AxialSeries, g: AxialSeries, k: int, theta) -> Fraction:
    """Sum over NC(k): the block containing 1 carries c(g), the others c(f)."""
    cf = free_cumulants(f, k, theta)
    cg = free_cumulants(g, k, theta)
    return Fraction(first_block_sum(k, cg, cf))


def finalvalue_rhs(f_list: Sequence[AxialSeries], g: AxialSeries, lam: Partition, theta) -> Fraction:
    """NC(lam_1 + 1) sum with g in the first block, times NC(lam_i) sums over f_i."""
    lam = tuple(lam)
    if not lam:
        raise ValueError("lambda must be nonempty")
    if len(f_list) != len(lam):
        raise ValueError("need one f per part of lambda")
    head = theorem_value_rhs(f_list[0], g, lam[0] + 1, theta)
    for f, part in zip(f_list[1:], lam[1:]):
        head *= nc_moment(part, free_cumulants(f, part, theta))
    return head
