"""Shared fixtures: the hand-checkable 2x2 session over p=5, m=2.

Every value below was verified by direct entry-wise arithmetic against the
row moduli (5, 25); the tests treat them as frozen golden vectors.
"""

from dataclasses import dataclass

import pytest

from epm.ring import CentralPoly, EpmMatrix
from epm.zpmsolve import PrimePower


@dataclass(frozen=True)
class GoldenSession:
    params: PrimePower
    M: EpmMatrix
    X: EpmMatrix
    A1: EpmMatrix
    A2: EpmMatrix
    B1: EpmMatrix
    B2: EpmMatrix
    GA: EpmMatrix
    GB: EpmMatrix
    shared: EpmMatrix
    f1: CentralPoly  # f1(M) == A1
    f2: CentralPoly  # f2(M) == A2
    lam: tuple  # one known solution of the lifted weight system
    # flattened lifted columns of M^i X M^j, row-major over (i, j)
    system_cols: tuple
    system_rhs: tuple


@pytest.fixture(scope="session")
def golden() -> GoldenSession:
    params = PrimePower(5, 2)
    mk = lambda rows: EpmMatrix.validate(params, rows)
    return GoldenSession(
        params=params,
        M=mk([[4, 3], [15, 20]]),
        X=mk([[0, 4], [15, 4]]),
        A1=mk([[1, 3], [15, 17]]),
        A2=mk([[0, 3], [15, 11]]),
        B1=mk([[3, 3], [15, 9]]),
        B2=mk([[3, 0], [0, 18]]),
        GA=mk([[0, 1], [20, 23]]),
        GB=mk([[0, 2], [5, 3]]),
        shared=mk([[0, 1], [15, 21]]),
        f1=CentralPoly(params, (22, 1)),
        f2=CentralPoly(params, (16, 1)),
        lam=(2, 22, 1, 0),
        system_cols=(
            (0, 20, 15, 4),  # lift(X)
            (0, 0, 20, 0),  # lift(X M)
            (0, 15, 0, 15),  # lift(M X)
            (0, 0, 0, 0),  # lift(M X M)
        ),
        system_rhs=(0, 5, 20, 23),
    )


def span_closure(q: int, gens, dim: int) -> set:
    """All Z/qZ-combinations of the generators, by additive closure.

    Deliberately independent of the solver: this is the oracle side of the
    solution-set comparisons.
    """
    zero = (0,) * dim
    seen = {zero}
    frontier = [zero]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = tuple((a + b) % q for a, b in zip(x, g))
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return seen


def spanned_solutions(sol) -> set:
    """Every vector described by a SolutionSet, enumerated via closure."""
    q = sol.params.modulus
    dim = len(sol.particular)
    return {
        tuple((a + b) % q for a, b in zip(sol.particular, h))
        for h in span_closure(q, sol.kernel, dim)
    }
