import random

from hypothesis import given, settings, strategies as st

from nefsphere.linalg import (
    complete_to_unimodular,
    det,
    hermite_normal_form,
    identity,
    kernel_basis,
    mat_mul,
    row_rank,
    saturated_perp_basis,
    smith_normal_form,
    solve_rational,
)


def test_snf_identity():
    assert smith_normal_form(identity(3)) == ((1, 1, 1), 3)


def test_snf_diagonal():
    assert smith_normal_form([(2, 0), (0, 4)]) == ((2, 4), 2)


def test_snf_hand_oracle():
    # [[2,4],[6,8]]: row/column reduction by hand gives divisors (2, 4).
    assert smith_normal_form([(2, 4), (6, 8)]) == ((2, 4), 2)


def _random_unimodular(rng, n):
    m = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(6):
        a, b = rng.randrange(n), rng.randrange(n)
        if a != b:
            c = rng.choice([-2, -1, 1, 2])
            for j in range(n):
                m[a][j] += c * m[b][j]
    return tuple(tuple(r) for r in m)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=30, deadline=None)
def test_snf_unimodular_invariance(seed):
    rng = random.Random(seed)
    rows = tuple(tuple(rng.randrange(-5, 6) for _ in range(3))
                 for _ in range(3))
    u = _random_unimodular(rng, 3)
    v = _random_unimodular(rng, 3)
    assert smith_normal_form(rows) == smith_normal_form(mat_mul(mat_mul(u, rows), v))


def test_kernel_basis_examples():
    assert kernel_basis([(1, 1)]) == ((1, -1),)
    assert kernel_basis([(2, 0, 0), (0, 1, 1)]) == ((0, 1, -1),)


def test_saturated_perp_basis_spec_examples():
    # ms = {e1*} in Z^3 -> basis {e2, e3}
    assert saturated_perp_basis([(1, 0, 0)], 3) == ((0, 1, 0), (0, 0, 1))
    assert saturated_perp_basis([(1, 1)], 2) == ((1, -1),)
    assert saturated_perp_basis([(2, 0, 0), (0, 1, 1)], 3) == ((0, 1, -1),)
    assert saturated_perp_basis([], 4) == identity(4)


def test_perp_basis_is_saturated():
    # Stacking any integral kernel vector keeps all divisors 1.
    ms = [(2, 0, 0), (0, 1, 1)]
    basis = saturated_perp_basis(ms, 3)
    for m in ms:
        assert all(sum(a * b for a, b in zip(m, row)) == 0 for row in basis)
    stacked = list(basis) + [(0, 2, -2)]
    divs, rank = smith_normal_form(stacked)
    assert rank == len(basis)
    assert all(d == 1 for d in divs)


def test_hnf_canonical():
    h = hermite_normal_form([(2, 4), (6, 8)])
    assert h == ((2, 0), (0, 4))
    # HNF of the HNF is itself (canonical form).
    assert hermite_normal_form(h) == h


def test_complete_to_unimodular():
    basis = complete_to_unimodular([(0, 1, -1)], 3)
    assert basis[0] == (0, 1, -1)
    assert det(basis) == 1


def test_solve_rational():
    x = solve_rational([(2, 0), (1, 1)], (4, 5))
    assert x == (2, 3)
    assert solve_rational([(1, 1), (2, 2)], (1, 3)) is None


def test_row_rank():
    assert row_rank([(1, 2), (2, 4)]) == 1
    assert row_rank([(1, 0), (0, 1)]) == 2
