"""Partitions, noncrossing partitions and the counting identities built on them.

Partitions are plain tuples of positive integers in weakly decreasing order;
the empty tuple is the empty partition. Noncrossing partitions are tuples of
blocks, each block a sorted tuple, blocks ordered by their minimum.
"""
from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod
from typing import Iterator, Sequence, Tuple

Partition = Tuple[int, ...]
NCPartition = Tuple[Tuple[int, ...], ...]
SplitPair = Tuple[Tuple[int, ...], Tuple[int, ...]]


def equivalent_partition(a: Sequence[int]) -> Partition:
    """Drop the zero entries of `a` and sort the rest in nonincreasing order."""
    if any(x < 0 for x in a):
        raise ValueError(f"negative entry in {tuple(a)}")
    return tuple(sorted((x for x in a if x), reverse=True))


def is_partition(nu: Sequence[int]) -> bool:
    return all(x >= 1 for x in nu) and all(
        nu[t] >= nu[t + 1] for t in range(len(nu) - 1)
    )


def join(nu: Partition, *parts: int) -> Partition:
    """The partition `nu` with extra parts appended (zeros are ignored)."""
    return equivalent_partition(nu + tuple(parts))


def remove_part(nu: Partition, part: int) -> Partition:
    """Remove one copy of `part` from `nu`."""
    i = nu.index(part)
    return nu[:i] + nu[i + 1:]


def perm_count(nu: Sequence[int]) -> int:
    """Number of distinct orderings of the parts of `nu` (1 for the empty partition)."""
    mult = Counter(nu)
    return factorial(len(nu)) // prod(factorial(m) for m in mult.values())


def sigma(indices: Sequence[int]) -> Partition:
    """Partition formed by the multiplicities of the values in `indices`."""
    if not indices:
        raise ValueError("sigma needs a nonempty index list")
    if any(i < 1 for i in indices):
        raise ValueError("indices must be positive")
    counts = Counter(indices)
    return equivalent_partition([counts[d] for d in range(1, max(indices) + 1)])


@lru_cache(maxsize=None)
def partitions_of(n: int) -> tuple[Partition, ...]:
    """All partitions of n, in reverse lexicographic order."""
    if n < 0:
        return ()
    if n == 0:
        return ((),)

    def gen(rest: int, cap: int) -> Iterator[Partition]:
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in gen(rest - first, first):
                yield (first,) + tail

    return tuple(gen(n, n))


def partitions_up_to(n: int, max_length: int | None = None) -> Iterator[Partition]:
    """Partitions of size 0..n, optionally with at most `max_length` parts."""
    for m in range(n + 1):
        for nu in partitions_of(m):
            if max_length is None or len(nu) <= max_length:
                yield nu


def split_pairs(nu: Partition) -> list[SplitPair]:
    """All ways to write `nu` componentwise as a sum of two nonnegative vectors."""
    pairs = []
    for p1 in itertools.product(*(range(a + 1) for a in nu)):
        p2 = tuple(a - b for a, b in zip(nu, p1))
        pairs.append((tuple(p1), p2))
    return pairs


# ---------------------------------------------------------------------------
# Noncrossing partitions


def is_noncrossing(blocks: Sequence[Sequence[int]]) -> bool:
    for b1, b2 in itertools.permutations(blocks, 2):
        for a, b in itertools.combinations(sorted(b1), 2):
            if any(a < c < b for c in b2) and any(d > b for d in b2):
                return False
    return True


def canonical_blocks(blocks) -> NCPartition:
    return tuple(sorted(tuple(sorted(b)) for b in blocks))


def set_partitions(elements: Sequence[int]) -> Iterator[list[list[int]]]:
    """Every set partition of `elements` (brute force, Bell-number many)."""
    if not elements:
        yield []
        return
    first, rest = elements[0], elements[1:]
    for smaller in set_partitions(rest):
        yield [[first]] + smaller
        for i in range(len(smaller)):
            yield smaller[:i] + [[first] + smaller[i]] + smaller[i + 1:]


def enumerate_nc_bruteforce(k: int) -> list[NCPartition]:
    """NC(k) by filtering all set partitions; kept as the reference for `enumerate_nc`."""
    found = {
        canonical_blocks(p)
        for p in set_partitions(list(range(1, k + 1)))
        if is_noncrossing(p)
    }
    return sorted(found)


@lru_cache(maxsize=None)
def _nc_interval(lo: int, hi: int) -> tuple[NCPartition, ...]:
    # noncrossing partitions of {lo, ..., hi}; the empty interval has one (empty) partition
    if lo > hi:
        return ((),)
    out = []
    rest = list(range(lo + 1, hi + 1))
    for r in range(len(rest) + 1):
        for others in itertools.combinations(rest, r):
            block = (lo,) + others
            # the gaps between consecutive members of the block (and after the
            # last one) are filled independently
            bounds = list(block) + [hi + 1]
            gaps = [_nc_interval(bounds[t] + 1, bounds[t + 1] - 1) for t in range(len(block))]
            for fill in itertools.product(*gaps):
                blocks = [block] + [b for part in fill for b in part]
                out.append(canonical_blocks(blocks))
    return tuple(out)


def enumerate_nc(k: int) -> tuple[NCPartition, ...]:
    """All noncrossing partitions of {1, ..., k}."""
    if k < 1:
        raise ValueError("k must be positive")
    return _nc_interval(1, k)


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def block_type(pi: NCPartition) -> tuple[int, ...]:
    """Multiplicity vector (m_1, ..., m_n) of block sizes."""
    n = sum(len(b) for b in pi)
    sizes = Counter(len(b) for b in pi)
    return tuple(sizes[j] for j in range(1, n + 1))


def kreweras_count(m: Sequence[int]) -> int:
    """Number of noncrossing partitions of {1..n} with m_k blocks of size k, n = len(m)."""
    n = len(m)
    if any(x < 0 for x in m):
        raise ValueError("multiplicities must be nonnegative")
    if sum((k + 1) * mk for k, mk in enumerate(m)) != n:
        raise ValueError(f"multiplicities {tuple(m)} do not describe a partition of {n}")
    blocks = sum(m)
    return factorial(n) // (factorial(n - blocks + 1) * prod(factorial(x) for x in m))


def multiplicity_vectors(n: int) -> Iterator[tuple[int, ...]]:
    """All (m_1..m_n) with sum k*m_k = n."""
    for nu in partitions_of(n):
        c = Counter(nu)
        yield tuple(c[k] for k in range(1, n + 1))


# ---------------------------------------------------------------------------
# Identities used by the cumulant calculus


def binom_identity_sides(a: int, b: int, m: int) -> tuple[Fraction, Fraction]:
    if not 0 <= m <= a or b < 0:
        raise ValueError("need 0 <= m <= a and b >= 0")
    lhs = sum(
        (Fraction(comb(a, k) * comb(b, k - m), comb(a + b, k)) * (-1) ** k
         for k in range(m, a + 1)),
        Fraction(0),
    )
    rhs = Fraction((-1) ** m * factorial(a) * factorial(b), factorial(a + b))
    return lhs, rhs


def binom_identity_check(a: int, b: int, m: int) -> bool:
    lhs, rhs = binom_identity_sides(a, b, m)
    return lhs == rhs


def first_block_sum(k: int, first: Sequence, rest: Sequence):
    """Sum over NC(k) of first[|B_1|] * prod over the other blocks of rest[|B|].

    Sequences are 1-indexed by block size: ``first[0]`` is the weight of a size-1 block.
    """
    total = 0
    for pi in enumerate_nc(k):
        term = first[len(pi[0]) - 1]
        for block in pi[1:]:
            term = term * rest[len(block) - 1]
        total = total + term
    return total


def nc_recursion_sides(k: int, a: Sequence, b: Sequence):
    """Both sides of the first-block recursion relating NC(k+1) to NC(k)."""
    if len(a) < k + 1 or len(b) < k + 1:
        raise ValueError("sequences must be defined up to index k+1")
    lhs = first_block_sum(k + 1, b, a)
    rhs = 0
    for pi in enumerate_nc(k):
        s = len(pi[0])
        head = b[s] + sum(a[j - 1] * b[s - j] for j in range(1, s + 1))
        for block in pi[1:]:
            head = head * a[len(block) - 1]
        rhs = rhs + head
    return lhs, rhs


def nc_recursion_check(k: int, a: Sequence, b: Sequence) -> bool:
    lhs, rhs = nc_recursion_sides(k, a, b)
    return lhs == rhs


def nc_moment(n: int, r: Sequence):
    """Sum over NC(n) of the product of r[|B|] (r is 1-indexed: r[0] is r_1)."""
    return first_block_sum(n, r, r)


def laurent_residue_moment(n: int, r: Sequence) -> Fraction:
    """(1/(n+1)) [z^-1] (1/z + sum_j r_j z^(j-1))^(n+1), expanded exactly."""
    if len(r) < n:
        raise ValueError("r must be defined up to index n")
    base = {-1: Fraction(1)}
    for j in range(1, n + 1):
        if r[j - 1]:
            base[j - 1] = base.get(j - 1, Fraction(0)) + Fraction(r[j - 1])
    lo, hi = -(n + 1), n * n
    acc = {0: Fraction(1)}
    for _ in range(n + 1):
        nxt: dict[int, Fraction] = {}
        for e1, v1 in acc.items():
            for e2, v2 in base.items():
                e = e1 + e2
                if lo <= e <= hi:
                    nxt[e] = nxt.get(e, Fraction(0)) + v1 * v2
        acc = nxt
    return acc.get(-1, Fraction(0)) / (n + 1)


def nc_generating_check(n: int, r: Sequence) -> bool:
    return Fraction(nc_moment(n, r)) == laurent_residue_moment(n, r)


# ---------------------------------------------------------------------------
# Product of two monomial symmetric functions, counted monomial by monomial


def monomials_of(nu: Partition, nvars: int) -> set[tuple[int, ...]]:
    """Exponent vectors of the monomials of M_nu in `nvars` variables."""
    if len(nu) > nvars:
        return set()
    counts = Counter(nu)
    counts[0] = nvars - len(nu)
    values = sorted(counts)

    def rec(prefix: list[int]):
        if len(prefix) == nvars:
            yield tuple(prefix)
            return
        for v in values:
            if counts[v]:
                counts[v] -= 1
                prefix.append(v)
                yield from rec(prefix)
                prefix.pop()
                counts[v] += 1

    return set(rec([]))


def coeffsum_sides(nu1: Partition, nu2: Partition, k: int) -> tuple[int, Fraction]:
    """Both sides of the overlap count for M_nu1 * M_nu2.

    Left: over l = l(nu1) + l(nu2) - k variables, count pairs of monomials
    (p1 from M_nu1, p2 from M_nu2) whose product uses every variable; this
    equals sum over nu with l(nu) = l of |T(nu)| P(nu). Right: the closed form.
    """
    l1, l2 = len(nu1), len(nu2)
    if not 0 <= k <= min(l1, l2):
        raise ValueError("need 0 <= k <= min(l(nu1), l(nu2))")
    nvars = l1 + l2 - k
    lhs = 0
    for p1 in monomials_of(nu1, nvars):
        for p2 in monomials_of(nu2, nvars):
            if all(x + y > 0 for x, y in zip(p1, p2)):
                lhs += 1
    rhs = (
        Fraction(comb(l1, k) * comb(l2, k), comb(l1 + l2, k))
        * Fraction(factorial(l1 + l2), factorial(l1) * factorial(l2))
        * perm_count(nu1) * perm_count(nu2)
    )
    return lhs, rhs


def coeffsum_split_side(nu1: Partition, nu2: Partition, k: int) -> int:
    """sum over nu with |nu| = |nu1| + |nu2|, l(nu) = l(nu1) + l(nu2) - k of |T(nu)| P(nu)."""
    length = len(nu1) + len(nu2) - k
    total = 0
    for nu in partitions_of(sum(nu1) + sum(nu2)):
        if len(nu) != length:
            continue
        t = sum(
            1 for p1, p2 in split_pairs(nu)
            if equivalent_partition(p1) == nu1 and equivalent_partition(p2) == nu2
        )
        total += t * perm_count(nu)
    return total
