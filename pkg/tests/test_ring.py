import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from epm.ring import (
    CentralElement,
    CentralPoly,
    EpmMatrix,
    LiftedMatrix,
    NotAMember,
    NotInImage,
    ParamMismatch,
    cayley_hamilton_coeffs,
    central_matrix,
    combination_system,
    lift,
    random_central_poly,
    random_matrix,
    solve_combination,
    unlift,
)
from epm.zpmsolve import PrimePower, howell_solve, is_solution


P52 = PrimePower(5, 2)


# --- membership and validation ----------------------------------------------


def test_validate_accepts_golden_m(golden):
    assert golden.M.rows == ((4, 3), (15, 20))


def test_validate_rejects_subdiagonal_violation():
    with pytest.raises(NotAMember):
        EpmMatrix.validate(P52, [[0, 0], [7, 0]])


def test_validate_reduces_row_wise(golden):
    assert EpmMatrix.validate(P52, [[9, 3], [15, 20]]) == golden.M


def test_validate_rejects_wrong_shape():
    with pytest.raises(NotAMember):
        EpmMatrix.validate(P52, [[1, 2, 3], [4, 5, 6]])


def test_constructor_requires_canonical_entries():
    with pytest.raises(NotAMember):
        EpmMatrix(P52, ((9, 0), (0, 0)))


# --- arithmetic golden values ------------------------------------------------


def test_addition(golden):
    M = golden.M
    zero = EpmMatrix.zero(P52)
    assert M + zero == M
    assert (M + M).rows == ((3, 1), (5, 15))
    assert M + (-M) == zero


def test_multiplication(golden):
    assert (golden.A1 * golden.X * golden.A2) == golden.GA
    assert (golden.M * golden.X).rows == ((0, 3), (0, 15))
    assert EpmMatrix.identity(P52) * golden.M == golden.M
    assert central_matrix(P52, 1) == EpmMatrix.identity(P52)


def test_scalar_action(golden):
    assert golden.M.scale(1) == golden.M
    assert golden.M.scale(0) == EpmMatrix.zero(P52)
    assert (2 * golden.GB).rows == ((0, 4), (10, 6))
    assert golden.GB * 2 == 2 * golden.GB


def test_powers(golden):
    M = golden.M
    assert M**0 == EpmMatrix.identity(P52)
    assert M**1 == M
    assert (M**2).rows == ((1, 2), (10, 20))
    assert M**5 == M * M * M * M * M


def test_param_mismatch():
    other = EpmMatrix.identity(PrimePower(5, 3))
    with pytest.raises(ParamMismatch):
        EpmMatrix.identity(P52) + other
    with pytest.raises(ParamMismatch):
        EpmMatrix.identity(P52) * other


# --- center -------------------------------------------------------------------


def test_central_matrix_examples():
    assert central_matrix(P52, 0) == EpmMatrix.zero(P52)
    assert central_matrix(P52, 1) == EpmMatrix.identity(P52)
    assert central_matrix(P52, 7).rows == ((2, 0), (0, 7))


def test_is_central(golden):
    rng = random.Random(11)
    for z in (0, 1, 7, 24):
        c = central_matrix(P52, z)
        assert c.is_central()
        for _ in range(20):
            assert c.commutes(random_matrix(P52, rng))
    assert not golden.M.is_central()
    assert EpmMatrix.validate(P52, [[1, 0], [0, 6]]).is_central()
    assert not EpmMatrix.validate(P52, [[1, 0], [0, 7]]).is_central()


def test_central_characterisation_matches_commuting_everything():
    # over a tiny ring, compare is_central against literal centrality
    params = PrimePower(2, 2)
    p = params.p
    all_elements = []
    for t11, t12, t21 in itertools.product(range(p), repeat=3):
        for t22 in range(p**2):
            all_elements.append(
                EpmMatrix(params, ((t11, t12), (t21 * p, t22)))
            )
    assert len(all_elements) == 32
    for a in all_elements:
        literally_central = all(a.commutes(b) for b in all_elements)
        assert a.is_central() == literally_central


def test_central_element_wrapper():
    elt = CentralElement(P52, 32)
    assert elt.z == 7
    assert elt.matrix() == central_matrix(P52, 7)
    assert CentralElement.from_matrix(elt.matrix()) == CentralElement(P52, 7)
    with pytest.raises(NotAMember):
        CentralElement.from_matrix(EpmMatrix.validate(P52, [[1, 0], [0, 7]]))


def test_psi_is_a_ring_homomorphism():
    rng = random.Random(3)
    for p, m in [(2, 4), (3, 3), (5, 2)]:
        params = PrimePower(p, m)
        q = params.modulus
        for _ in range(60):
            x, y = rng.randrange(q), rng.randrange(q)
            assert central_matrix(params, x) + central_matrix(params, y) == central_matrix(params, x + y)
            assert central_matrix(params, x) * central_matrix(params, y) == central_matrix(params, x * y % q)


# --- commuting, polynomials, power reduction ----------------------------------


def test_commutes(golden):
    assert not golden.M.commutes(golden.X)
    rng = random.Random(5)
    for _ in range(25):
        z = rng.randrange(25)
        assert golden.M.commutes(central_matrix(P52, z))
    f = random_central_poly(P52, rng, 1)
    assert golden.M.commutes(f.evaluate(golden.M))


def test_central_poly_evaluation(golden):
    assert CentralPoly(P52, (7,)).evaluate(golden.M) == central_matrix(P52, 7)
    assert CentralPoly(P52, (0, 1)).evaluate(golden.M) == golden.M
    assert golden.f1.evaluate(golden.M) == golden.A1
    assert golden.f2.evaluate(golden.M) == golden.A2


def test_central_poly_degree_cap():
    with pytest.raises(ValueError):
        CentralPoly(P52, (1, 2, 3))
    with pytest.raises(ValueError):
        random_central_poly(P52, random.Random(0), 2)


def test_masks_are_expressible_over_identity_and_m(golden):
    # A1 must be a combination of I and M since it was built that way
    coeffs = solve_combination([EpmMatrix.identity(P52), golden.M], golden.A1)
    assert CentralPoly(P52, coeffs).evaluate(golden.M) == golden.A1


def test_cayley_hamilton_golden(golden):
    # enumeration oracle over all coefficient pairs mod 25
    valid = {
        (a0, a1)
        for a0 in range(25)
        for a1 in range(25)
        if CentralPoly(P52, (a0, a1)).evaluate(golden.M) == golden.M**2
    }
    assert (15, 4) in valid
    assert (15, 24) in valid
    assert cayley_hamilton_coeffs(golden.M) in valid


def test_cayley_hamilton_trivial_cases():
    params = PrimePower(3, 3)
    coeffs = cayley_hamilton_coeffs(EpmMatrix.identity(params))
    assert sum(coeffs) % params.modulus == 1
    zero = EpmMatrix.zero(params)
    coeffs = cayley_hamilton_coeffs(zero)
    assert CentralPoly(params, coeffs).evaluate(zero) == zero


@pytest.mark.parametrize("p,m", [(2, 4), (3, 3), (5, 2)])
def test_cayley_hamilton_random(p, m):
    params = PrimePower(p, m)
    rng = random.Random(1000 * p + m)
    for _ in range(60):
        a = random_matrix(params, rng)
        coeffs = cayley_hamilton_coeffs(a)
        assert CentralPoly(params, coeffs).evaluate(a) == a**m


def test_polynomials_in_m_commute(golden):
    rng = random.Random(17)
    for _ in range(40):
        f = random_central_poly(P52, rng, 1)
        g = random_central_poly(P52, rng, 1)
        fm, gm = f.evaluate(golden.M), g.evaluate(golden.M)
        assert fm * gm == gm * fm


# --- the row-scaling lift -----------------------------------------------------


def test_lift_golden_values(golden):
    assert lift(golden.GA).rows == ((0, 5), (20, 23))
    assert lift(golden.X).rows == ((0, 20), (15, 4))
    assert lift(EpmMatrix.identity(P52)).rows == ((5, 0), (0, 1))


def test_unlift_golden(golden):
    assert unlift(LiftedMatrix(P52, ((0, 5), (20, 23)))) == golden.GA


def test_lift_roundtrip_and_rejection():
    rng = random.Random(23)
    for p, m in [(2, 4), (3, 3), (5, 2)]:
        params = PrimePower(p, m)
        for _ in range(50):
            a = random_matrix(params, rng)
            assert unlift(lift(a)) == a
    with pytest.raises(NotInImage):
        LiftedMatrix(P52, ((1, 0), (0, 0)))


def test_lift_is_additive_and_scalar_compatible():
    rng = random.Random(31)
    params = PrimePower(3, 3)
    q = params.modulus
    for _ in range(40):
        a, b = random_matrix(params, rng), random_matrix(params, rng)
        r = rng.randrange(q)
        la, lb = lift(a), lift(b)
        assert lift(a + b).rows == tuple(
            tuple((x + y) % q for x, y in zip(ra, rb))
            for ra, rb in zip(la.rows, lb.rows)
        )
        assert lift(a.scale(r)).rows == tuple(
            tuple(r * x % q for x in row) for row in la.rows
        )


def test_lift_is_not_multiplicative(golden):
    # witness: plain mod-25 product of the lifted matrices differs from the
    # lift of the ring product
    a, b = golden.M, golden.X
    q = golden.params.modulus
    la, lb = lift(a).rows, lift(b).rows
    plain = tuple(
        tuple(sum(la[i][k] * lb[k][j] for k in range(2)) % q for j in range(2))
        for i in range(2)
    )
    assert plain != lift(a * b).rows


# --- sampling -----------------------------------------------------------------


def test_random_matrix_is_reproducible_and_valid():
    params = PrimePower(3, 4)
    a = random_matrix(params, random.Random(42))
    b = random_matrix(params, random.Random(42))
    assert a == b
    rng = random.Random(1)
    for _ in range(200):
        random_matrix(params, rng)  # __post_init__ would reject a bad draw


def test_random_matrix_top_left_entry_is_uniform():
    params = PrimePower(2, 3)
    rng = random.Random(2024)
    zeros = sum(random_matrix(params, rng).rows[0][0] == 0 for _ in range(1000))
    assert abs(zeros / 1000 - 0.5) <= 0.05


def test_random_central_poly_reproducible_and_commuting(golden):
    params = PrimePower(3, 3)
    assert random_central_poly(params, random.Random(9), 2) == random_central_poly(
        params, random.Random(9), 2
    )
    rng = random.Random(10)
    m_mat = random_matrix(params, rng)
    for _ in range(1000):
        f = random_central_poly(params, rng, 2)
        assert f.evaluate(m_mat).commutes(m_mat)


# --- ring laws ----------------------------------------------------------------


@st.composite
def ring_elements(draw):
    p = draw(st.sampled_from([2, 3, 5]))
    m = draw(st.integers(1, 5))
    params = PrimePower(p, m)
    seed = draw(st.integers(0, 2**32))
    rng = random.Random(seed)
    return [random_matrix(params, rng) for _ in range(3)]


@settings(max_examples=150, deadline=None)
@given(ring_elements())
def test_ring_laws(triple):
    a, b, c = triple
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c
    one = EpmMatrix.identity(a.params)
    assert one * a == a * one == a


def test_noncommutativity_witness(golden):
    assert golden.M * golden.X != golden.X * golden.M


@settings(max_examples=100, deadline=None)
@given(ring_elements())
def test_closure(triple):
    a, b, _ = triple
    q = a.params.modulus
    for result in (a + b, a * b, a.scale(q - 1)):
        # re-validation from raw entries must succeed bit-identically
        assert EpmMatrix.validate(a.params, result.rows) == result


# --- combination systems -------------------------------------------------------


def test_combination_system_shape(golden):
    basis = [EpmMatrix.identity(P52), golden.M]
    system = combination_system(basis, golden.A1)
    assert system.rows == 4 and system.cols == 2
    sol = howell_solve(system)
    assert is_solution(system, sol.particular)
