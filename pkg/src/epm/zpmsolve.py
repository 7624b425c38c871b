"""Exact linear algebra over the residue ring Z/p^m Z.

Z/p^m Z has zero divisors, so textbook Gaussian elimination does not apply:
a pivot cannot in general be scaled to 1.  Every nonzero residue does factor
as ``unit * p^v``, though, which makes minimal-valuation pivoting exact.  The
solver here runs column by column, picks the remaining entry of smallest
p-adic valuation as pivot, normalises it to ``p^v``, and eliminates every
other candidate row (all of which carry valuation >= v in that column, so the
multipliers stay integral).  Whenever a pivot has positive valuation v, the
row ``p^(m-v) * pivot_row`` is fed back in as a fresh candidate: these
"completion" rows are redundant as equations but create the extra pivots that
make bottom-up back-substitution and kernel extraction correct over a ring
with torsion.

Three interchangeable row backends share the same pivot sequence and produce
bit-identical results: arbitrary-precision Python integers (always correct),
numpy uint64 with wraparound for p = 2 and m <= 64, and numpy int64 for odd
prime powers below 2^31.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

__all__ = [
    "PrimePower",
    "ZpmSystem",
    "SolutionSet",
    "OpCounter",
    "InconsistentSystem",
    "EnumerationCapExceeded",
    "DimensionMismatch",
    "valuation",
    "howell_solve",
    "brute_solve",
    "is_solution",
    "BRUTE_FORCE_CAP",
]

#: Default ceiling on the number of candidate vectors brute_solve will walk.
BRUTE_FORCE_CAP = 1 << 24

# Miller-Rabin with this fixed witness set is deterministic below the limit
# (Sorenson & Webster); p values beyond it are rejected rather than guessed at.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_LIMIT = 3_317_044_064_679_887_385_961_981


class InconsistentSystem(Exception):
    """The linear system has no solution over Z/p^m Z."""


class EnumerationCapExceeded(Exception):
    """brute_solve was asked to enumerate more candidates than its cap."""


class DimensionMismatch(ValueError):
    """A candidate vector does not match the system's column count."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for small in _MR_WITNESSES:
        if n == small:
            return True
        if n % small == 0:
            return False
    if n >= _MR_LIMIT:
        raise ValueError(f"cannot certify primality of {n} deterministically")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimePower:
    """The modulus family p^1, ..., p^m for a fixed prime p."""

    p: int
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if not _is_prime(self.p):
            raise ValueError(f"p must be prime, got {self.p}")

    @cached_property
    def modulus(self) -> int:
        """p^m, the largest modulus of the family."""
        return self.p**self.m

    @cached_property
    def row_moduli(self) -> tuple[int, ...]:
        """(p^1, p^2, ..., p^m)."""
        out, q = [], 1
        for _ in range(self.m):
            q *= self.p
            out.append(q)
        return tuple(out)


def valuation(x: int, params: PrimePower) -> int:
    """Largest v <= m with p^v dividing x; m exactly when x is 0 mod p^m."""
    x %= params.modulus
    if x == 0:
        return params.m
    return _val(x, params.p)


def _val(e: int, p: int) -> int:
    # e > 0
    if p == 2:
        return (e & -e).bit_length() - 1
    v = 0
    while e % p == 0:
        e //= p
        v += 1
    return v


class OpCounter:
    """Accumulates the solver's count of multiplications mod p^m.

    The count is deterministic for a fixed input and identical across row
    backends: every row operation is charged by its slice width whether or
    not individual entries happen to be zero.
    """

    __slots__ = ("muls",)

    def __init__(self):
        self.muls = 0

    def add(self, n: int) -> None:
        self.muls += n

    def __repr__(self):
        return f"OpCounter(muls={self.muls})"


@dataclass(frozen=True)
class ZpmSystem:
    """A linear system coeffs . x = rhs over Z/p^m Z, stored canonically."""

    params: PrimePower
    coeffs: tuple[tuple[int, ...], ...]
    rhs: tuple[int, ...]

    def __post_init__(self):
        q = self.params.modulus
        coeffs = tuple(tuple(int(v) % q for v in row) for row in self.coeffs)
        rhs = tuple(int(v) % q for v in self.rhs)
        if not coeffs or not coeffs[0]:
            raise ValueError("system needs at least one row and one column")
        cols = len(coeffs[0])
        if any(len(row) != cols for row in coeffs):
            raise ValueError("ragged coefficient rows")
        if len(rhs) != len(coeffs):
            raise ValueError("rhs length does not match row count")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "rhs", rhs)

    @property
    def rows(self) -> int:
        return len(self.coeffs)

    @property
    def cols(self) -> int:
        return len(self.coeffs[0])


@dataclass(frozen=True)
class SolutionSet:
    """Particular solution plus generators of the homogeneous solutions.

    The full solution set is ``particular + sum t_k * kernel[k]`` over all
    coefficient choices t_k in Z/p^m Z.  Generators are neither minimal nor
    unique; only the spanned set is meaningful.
    """

    params: PrimePower
    particular: tuple[int, ...]
    kernel: tuple[tuple[int, ...], ...]

    def random_solution(self, rng) -> tuple[int, ...]:
        """particular plus a uniformly weighted kernel combination."""
        q = self.params.modulus
        x = list(self.particular)
        for gen in self.kernel:
            w = rng.randrange(q)
            if w:
                x = [(a + w * g) % q for a, g in zip(x, gen)]
        return tuple(x)


# ---------------------------------------------------------------------------
# Row backends.  Rows are stored augmented: c coefficient entries then rhs.
# ---------------------------------------------------------------------------


class _PyRows:
    """Arbitrary-precision rows; the reference backend."""

    def __init__(self, q: int):
        self.q = q

    def make_row(self, values):
        q = self.q
        return [int(v) % q for v in values]

    def entry(self, row, j) -> int:
        return row[j]

    def scale_inplace(self, row, s, start):
        q = self.q
        for j in range(start, len(row)):
            row[j] = row[j] * s % q

    def submul_inplace(self, row, mult, prow, start):
        q = self.q
        for j in range(start, len(row)):
            row[j] = (row[j] - mult * prow[j]) % q

    def scaled_copy(self, row, s, start):
        q = self.q
        out = [0] * len(row)
        for j in range(start, len(row)):
            out[j] = row[j] * s % q
        return out

    def iszero_from(self, row, start) -> bool:
        return all(v == 0 for v in row[start:])

    def dot(self, row, x, start, end) -> int:
        return sum(row[j] * x[j] for j in range(start, end)) % self.q

    def x_zeros(self, n):
        return [0] * n

    def x_set(self, x, j, v):
        x[j] = v

    def x_tuple(self, x):
        return tuple(x)


class _U64Rows:
    """uint64 rows for p = 2, m <= 64: 2^m divides 2^64, so C wraparound
    followed by masking is exact."""

    def __init__(self, q: int):
        self.mask = np.uint64(q - 1)

    def make_row(self, values):
        return np.array(values, dtype=np.uint64)

    def entry(self, row, j) -> int:
        return int(row[j])

    def scale_inplace(self, row, s, start):
        row[start:] = (row[start:] * np.uint64(s)) & self.mask

    def submul_inplace(self, row, mult, prow, start):
        row[start:] = (row[start:] - prow[start:] * np.uint64(mult)) & self.mask

    def scaled_copy(self, row, s, start):
        out = np.zeros(len(row), dtype=np.uint64)
        out[start:] = (row[start:] * np.uint64(s)) & self.mask
        return out

    def iszero_from(self, row, start) -> bool:
        return not row[start:].any()

    def dot(self, row, x, start, end) -> int:
        return int((row[start:end] * x[start:end]).sum(dtype=np.uint64) & self.mask)

    def x_zeros(self, n):
        return np.zeros(n, dtype=np.uint64)

    def x_set(self, x, j, v):
        x[j] = np.uint64(v)

    def x_tuple(self, x):
        return tuple(int(v) for v in x)


class _I64Rows:
    """int64 rows for q <= 2^31: products stay below 2^62."""

    def __init__(self, q: int):
        self.q = q

    def make_row(self, values):
        return np.array(values, dtype=np.int64)

    def entry(self, row, j) -> int:
        return int(row[j])

    def scale_inplace(self, row, s, start):
        row[start:] = (row[start:] * s) % self.q

    def submul_inplace(self, row, mult, prow, start):
        row[start:] = (row[start:] - prow[start:] * mult) % self.q

    def scaled_copy(self, row, s, start):
        out = np.zeros(len(row), dtype=np.int64)
        out[start:] = (row[start:] * s) % self.q
        return out

    def iszero_from(self, row, start) -> bool:
        return not row[start:].any()

    def dot(self, row, x, start, end) -> int:
        return int(((row[start:end] * x[start:end]) % self.q).sum() % self.q)

    def x_zeros(self, n):
        return np.zeros(n, dtype=np.int64)

    def x_set(self, x, j, v):
        x[j] = v

    def x_tuple(self, x):
        return tuple(int(v) for v in x)


def _make_rowops(params: PrimePower, backend):
    q = params.modulus
    if backend == "python":
        return _PyRows(q)
    if backend in (None, "auto", "numpy"):
        if params.p == 2 and params.m <= 64:
            return _U64Rows(q)
        if q <= 2**31:
            return _I64Rows(q)
        if backend == "numpy":
            raise ValueError("modulus too large for the numpy backend")
        return _PyRows(q)
    raise ValueError(f"unknown backend {backend!r}")


def howell_solve(
    system: ZpmSystem,
    *,
    with_kernel: bool = True,
    counter: OpCounter | None = None,
    backend: str | None = None,
) -> SolutionSet:
    """Solve coeffs . x = rhs over Z/p^m Z, or raise InconsistentSystem.

    Returns a SolutionSet whose particular + kernel span exactly the full
    solution set.  Deterministic: pivots are chosen by minimal p-adic
    valuation, earliest candidate row on ties, and the result is identical
    for every backend.  ``with_kernel=False`` skips kernel generation when
    only the particular solution is needed.
    """
    params = system.params
    p, m, q = params.p, params.m, params.modulus
    if counter is None:
        counter = OpCounter()
    ops = _make_rowops(params, backend)
    c = system.cols

    cands = [ops.make_row(list(row) + [b]) for row, b in zip(system.coeffs, system.rhs)]
    pivots = []  # (column, valuation, normalised augmented row)
    for col in range(c):
        best_v = best_i = None
        for i, row in enumerate(cands):
            e = ops.entry(row, col)
            if e == 0:
                continue
            v = _val(e, p)
            if best_v is None or v < best_v:
                best_v, best_i = v, i
                if v == 0:
                    break
        if best_i is None:
            continue
        prow = cands.pop(best_i)
        pv = p**best_v
        unit = ops.entry(prow, col) // pv
        if unit != 1:
            ops.scale_inplace(prow, pow(unit, -1, q), col)
        counter.add(c + 1 - col)
        for row in cands:
            # Zero entries get a zero multiplier rather than a skip: the
            # update pass runs for every candidate row, so the counter
            # reflects the elimination's full cubic operation count.
            ops.submul_inplace(row, ops.entry(row, col) // pv, prow, col)
            counter.add(c + 1 - col)
        pivots.append((col, best_v, prow))
        if best_v > 0:
            comp = ops.scaled_copy(prow, p ** (m - best_v), col)
            counter.add(c + 1 - col)
            if not ops.iszero_from(comp, col + 1):
                cands.append(comp)

    # Leftover candidates have zero coefficients: every column was either
    # pivoted (entry eliminated exactly) or skipped (entries already zero).
    for row in cands:
        if ops.entry(row, c) != 0:
            raise InconsistentSystem("contradictory zero row")

    particular = ops.x_tuple(
        _back_substitute(ops, pivots, c, p, q, counter, use_rhs=True)
    )

    kernel = []
    if with_kernel:
        pivot_cols = {col for col, _, _ in pivots}
        for f in range(c):
            if f in pivot_cols:
                continue
            x = _back_substitute(ops, pivots, c, p, q, counter, seed=(f, 1))
            kernel.append(ops.x_tuple(x))
        for col, v, _ in pivots:
            if v == 0:
                continue
            x = _back_substitute(
                ops, pivots, c, p, q, counter, seed=(col, p ** (m - v))
            )
            kernel.append(ops.x_tuple(x))

    return SolutionSet(params, particular, tuple(kernel))


def _back_substitute(ops, pivots, c, p, q, counter, seed=None, use_rhs=False):
    x = ops.x_zeros(c)
    if seed is not None:
        ops.x_set(x, seed[0], seed[1])
    for col, v, row in reversed(pivots):
        if seed is not None and col == seed[0]:
            continue  # pre-assigned torsion coordinate
        acc = ops.dot(row, x, col + 1, c)
        counter.add(c - col - 1)
        d = (ops.entry(row, c) - acc) % q if use_rhs else (-acc) % q
        if d == 0:
            continue
        pv = p**v
        if d % pv:
            # Completion rows guarantee this never fires on homogeneous runs.
            raise InconsistentSystem(f"no preimage for pivot column {col}")
        ops.x_set(x, col, d // pv)
    return x


def is_solution(system: ZpmSystem, x: Sequence[int]) -> bool:
    """True iff coeffs . x = rhs holds row-wise mod p^m."""
    if len(x) != system.cols:
        raise DimensionMismatch(f"expected {system.cols} entries, got {len(x)}")
    q = system.params.modulus
    return all(
        (sum(a * xi for a, xi in zip(row, x)) - b) % q == 0
        for row, b in zip(system.coeffs, system.rhs)
    )


def brute_solve(system: ZpmSystem, cap: int = BRUTE_FORCE_CAP) -> list[tuple[int, ...]]:
    """Every solution of the system, in lexicographic order, by enumeration.

    Independent of howell_solve on purpose: this is the test oracle.  Raises
    EnumerationCapExceeded when q^cols exceeds ``cap``.
    """
    q = system.params.modulus
    c = system.cols
    total = q**c
    if total > cap:
        raise EnumerationCapExceeded(f"{total} candidates exceed cap {cap}")

    candidates = itertools.product(range(q), repeat=c)
    if q <= 2**31 and c * (q - 1) ** 2 < 2**62:
        coeffs = np.array(system.coeffs, dtype=np.int64)
        rhs = np.array(system.rhs, dtype=np.int64)
        sols = []
        while True:
            batch = list(itertools.islice(candidates, 1 << 16))
            if not batch:
                return sols
            arr = np.array(batch, dtype=np.int64)
            ok = ((arr @ coeffs.T - rhs) % q == 0).all(axis=1)
            sols.extend(tuple(int(v) for v in row) for row in arr[ok])

    return [x for x in candidates if is_solution(system, x)]
