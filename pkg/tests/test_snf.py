import random

import pytest
from hypothesis import given, strategies as st

from fusionk.snf import (
    IntegerMatrix,
    cokernel_presentation,
    is_smith_form,
    kernel_basis,
    smith_normal_form,
)
from oracles import invariant_factors


def sparse_matrices(max_dim=8, lo=-9, hi=9):
    @st.composite
    def build(draw):
        m = draw(st.integers(1, max_dim))
        n = draw(st.integers(1, max_dim))
        rows = [
            [draw(st.one_of(st.just(0), st.just(0), st.integers(lo, hi))) for _ in range(n)] for _ in range(m)
        ]
        return IntegerMatrix.from_rows(rows, n)

    return build()


def check_snf(A: IntegerMatrix) -> None:
    res = smith_normal_form(A)
    assert res.U @ A @ res.V == res.D
    assert abs(res.U.det()) == 1
    assert abs(res.V.det()) == 1
    assert res.V @ res.V_inv == IntegerMatrix.identity(A.cols)
    assert is_smith_form(res.D)


class TestSNF:
    def test_identity(self):
        res = smith_normal_form(IntegerMatrix.identity(3))
        assert res.D == IntegerMatrix.identity(3)

    def test_example(self):
        res = smith_normal_form(IntegerMatrix.from_rows([[2, 4], [6, 8]]))
        assert res.diagonal == [2, 4]

    def test_zero(self):
        res = smith_normal_form(IntegerMatrix.zeros(2, 3))
        assert res.rank == 0
        assert res.U == IntegerMatrix.identity(2) and res.V == IntegerMatrix.identity(3)

    def test_empty_rows(self):
        res = smith_normal_form(IntegerMatrix(0, 3))
        assert res.rank == 0 and res.V == IntegerMatrix.identity(3)

    def test_random_200(self):
        rng = random.Random(20261017)
        for _ in range(200):
            m, n = rng.randint(1, 8), rng.randint(1, 8)
            rows = [[rng.randint(-9, 9) if rng.random() < 0.5 else 0 for _ in range(n)] for _ in range(m)]
            check_snf(IntegerMatrix.from_rows(rows, n))

    @given(sparse_matrices())
    def test_properties(self, A):
        check_snf(A)

    @given(sparse_matrices(max_dim=4, lo=-6, hi=6))
    def test_matches_determinantal_divisors(self, A):
        assert smith_normal_form(A).invariant_factors == invariant_factors(A.to_rows())

    def test_large_entries(self):
        big = 2**70
        A = IntegerMatrix.from_rows([[big, 0], [0, 3 * big]])
        assert smith_normal_form(A).diagonal == [big, 3 * big]

    def test_is_smith_form(self):
        assert is_smith_form(IntegerMatrix.from_rows([[1, 0, 0], [0, 2, 0]]))
        assert not is_smith_form(IntegerMatrix.from_rows([[2, 0], [0, 3]]))
        assert not is_smith_form(IntegerMatrix.from_rows([[0, 0], [0, 1]]))
        assert not is_smith_form(IntegerMatrix.from_rows([[1, 1], [0, 1]]))


class TestMatrix:
    def test_det(self):
        assert IntegerMatrix.from_rows([[2, 1], [7, 4]]).det() == 1
        assert IntegerMatrix.from_rows([[0, 1, 2], [3, 4, 5], [6, 7, 8]]).det() == 0
        assert IntegerMatrix.from_rows([[0, 2], [3, 0]]).det() == -6

    def test_ops(self):
        A = IntegerMatrix.from_rows([[1, 2], [3, 4], [5, 6]])
        assert A.T.shape == (2, 3)
        assert A.apply([1, -1]) == [-1, -1, -1]
        assert A.rank() == 2
        with pytest.raises(ValueError):
            A @ A

    def test_no_explicit_zeros(self):
        A = IntegerMatrix(2, 2, {(0, 0): 0, (1, 1): 5})
        assert A.entries == {(1, 1): 5}
        with pytest.raises(IndexError):
            IntegerMatrix(1, 1, {(1, 0): 1})


class TestKernel:
    def test_identity(self):
        assert kernel_basis(IntegerMatrix.identity(3)) == []

    def test_difference(self):
        basis = kernel_basis(IntegerMatrix.from_rows([[1, -1]]))
        assert len(basis) == 1 and basis[0] in ([1, 1], [-1, -1])

    @given(sparse_matrices(max_dim=6))
    def test_kernel_vectors(self, A):
        basis = kernel_basis(A)
        for v in basis:
            assert A.apply(v) == [0] * A.rows
        assert len(basis) == A.cols - smith_normal_form(A).rank
        if basis:
            assert IntegerMatrix.from_rows(basis, A.cols).rank() == len(basis)


class TestCokernel:
    def test_cyclic(self):
        p = cokernel_presentation(IntegerMatrix.from_rows([[2]]))
        assert (p.free_rank, p.torsion) == (0, [2])
        assert p.describe() == "Z/2"

    def test_free(self):
        p = cokernel_presentation(IntegerMatrix.zeros(0, 3))
        assert (p.free_rank, p.torsion) == (3, [])
        assert p.describe() == "Z^3"

    def test_su2_level_one(self):
        # generators e0, e2; relation e2
        p = cokernel_presentation(IntegerMatrix.from_rows([[0, 1]]))
        assert p.free_rank == 1 and not p.torsion
        assert p.coords([1, 0]) in ((1,), (-1,))
        assert p.coords([0, 1]) == (0,)

    def test_trivial_group(self):
        p = cokernel_presentation(IntegerMatrix.from_rows([[1, 0], [0, 1]]))
        assert p.is_trivial() and p.describe() == "0" and p.order() == 1

    @given(sparse_matrices(max_dim=5))
    def test_square_order_is_det(self, A):
        if A.rows != A.cols:
            return
        d = A.det()
        p = cokernel_presentation(A)
        if d:
            assert p.order() == abs(d)
        else:
            assert p.order() is None

    @given(sparse_matrices(max_dim=6))
    def test_coordinates(self, A):
        p = cokernel_presentation(A)
        mods = p.moduli()
        assert all(t > 1 for t in p.torsion)
        assert all(b % a == 0 for a, b in zip(p.torsion, p.torsion[1:]))
        # relations vanish
        for row in A.to_rows():
            assert all(c == 0 for c in p.coords(row))
        # lifts of reduced generators map back to unit vectors
        for k in range(p.width):
            want = tuple(int(i == k) % m if m else int(i == k) for i, m in enumerate(mods))
            assert p.coords(p.lift(k)) == want
        assert len(p.generator_images) == A.cols

    def test_flip_free(self):
        p = cokernel_presentation(IntegerMatrix.from_rows([[1, 1, 0]]))
        q = p.flip_free([True, False])
        v = [0, 0, 1]
        assert [abs(x) for x in p.coords(v)] == [abs(x) for x in q.coords(v)]
        assert p.coords([1, 0, 0])[0] == -q.coords([1, 0, 0])[0]
