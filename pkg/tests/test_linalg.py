import random

import pytest
from hypothesis import given, settings, strategies as st

from zclosure.errors import SingularMatrix
from zclosure.linalg import (
    QMatrix,
    IntMatrix,
    EchelonBasis,
    height,
    matrix_height,
    integer_kernel,
    row_hnf,
)
from zclosure._rat import rat


def qm(rows):
    return QMatrix.from_rows([[rat(e) for e in r] for r in rows])


rationals = st.fractions(
    min_value=-50, max_value=50, max_denominator=20
).map(rat)


def random_matrix(rng, n, max_height=10):
    return QMatrix(
        n,
        n,
        [
            rat(rng.randint(-max_height, max_height), rng.randint(1, max_height))
            for _ in range(n * n)
        ],
    )


def random_invertible(rng, n, max_height=10):
    while True:
        m = random_matrix(rng, n, max_height)
        if m.det():
            return m


class TestHeight:
    def test_paper_definition(self):
        assert height(rat(2, 3)) == 3

    def test_zero_is_one(self):
        assert height(rat(0)) == 1

    def test_negative(self):
        assert height(rat(-7, 2)) == 7

    @given(rationals, rationals)
    def test_submultiplicative(self, p, q):
        assert height(p * q) <= height(p) * height(q)


class TestMatrixHeight:
    def test_identity(self):
        assert matrix_height(QMatrix.identity(2)) == 1

    def test_max_over_entries(self):
        assert matrix_height(qm([["1/2", 3], [0, 1]])) == 3

    def test_example_power_height(self):
        # diag(2^p, 1/2) has height 2^p; p = 5
        assert matrix_height(QMatrix.diagonal([rat(2) ** 5, rat(1, 2)])) == 32

    def test_empty(self):
        assert matrix_height(QMatrix.zero(0, 0)) == 1


class TestInverse:
    def test_identity(self):
        assert QMatrix.identity(3).inverse() == QMatrix.identity(3)

    def test_diagonal(self):
        m = QMatrix.diagonal([rat(2), rat(1, 3)])
        assert m.inverse() == QMatrix.diagonal([rat(1, 2), rat(3)])

    def test_unitriangular(self):
        m = qm([[1, 1], [0, 1]])
        inv = m.inverse()
        assert inv == qm([[1, -1], [0, 1]])
        assert m * inv == QMatrix.identity(2)

    def test_singular_raises(self):
        with pytest.raises(SingularMatrix):
            qm([[1, 2], [2, 4]]).inverse()

    def test_product_inverse_exact(self):
        rng = random.Random(7)
        for _ in range(25):
            n = rng.choice([2, 3])
            a = random_invertible(rng, n)
            b = random_invertible(rng, n)
            ab = a * b
            assert ab * ab.inverse() == QMatrix.identity(n)


class TestRref:
    def test_zero(self):
        red, pivots = QMatrix.zero(2, 2).rref()
        assert red == QMatrix.zero(2, 2)
        assert pivots == []

    def test_identity(self):
        red, pivots = QMatrix.identity(3).rref()
        assert red == QMatrix.identity(3)
        assert pivots == [0, 1, 2]

    def test_rank_one(self):
        red, pivots = qm([[1, 2], [2, 4]]).rref()
        assert red == qm([[1, 2], [0, 0]])
        assert pivots == [0]

    def test_idempotent(self):
        rng = random.Random(11)
        for _ in range(20):
            m = random_matrix(rng, 3)
            red, _ = m.rref()
            again, _ = red.rref()
            assert red == again


class TestKernel:
    def test_identity_trivial(self):
        assert QMatrix.identity(3).kernel_basis() == []

    def test_one_by_two(self):
        (v,) = qm([[2, 3]]).kernel_basis()
        # direct solve: 2a + 3b = 0, basis (3, -2) up to scaling
        assert v[0, 0] * rat(2) + v[1, 0] * rat(3) == 0
        assert v[0, 0] * rat(-2) == v[1, 0] * rat(3)

    def test_zero_matrix_full(self):
        basis = QMatrix.zero(2, 2).kernel_basis()
        assert len(basis) == 2

    def test_products_vanish(self):
        rng = random.Random(3)
        for _ in range(20):
            m = random_matrix(rng, 3)
            for v in m.kernel_basis():
                assert (m * v).is_zero()
            assert len(m.kernel_basis()) == 3 - m.rank()


def im(rows):
    return IntMatrix.from_rows(rows)


class TestIntegerKernel:
    def test_identity_empty(self):
        k = integer_kernel(im([[1, 0], [0, 1]]))
        assert k.rows == 0

    def test_one_by_two(self):
        k = integer_kernel(im([[2, 3]]))
        assert k.row_lists() == [[3, -2]]

    def test_three_columns(self):
        k = integer_kernel(im([[1, 1, 0], [0, 1, 1]]))
        assert k.row_lists() == [[1, -1, 1]]

    def test_saturated(self):
        # stacking any kernel vector on the basis must not enlarge the lattice:
        # the HNF of the stack equals the HNF of the basis
        rng = random.Random(5)
        for _ in range(30):
            m = IntMatrix(
                2, 4, [rng.randint(-6, 6) for _ in range(8)]
            )
            k = integer_kernel(m)
            rows = k.row_lists()
            if not rows:
                continue
            coeffs = [rng.randint(-5, 5) for _ in rows]
            extra = [sum(c * r[j] for c, r in zip(coeffs, rows)) for j in range(4)]
            assert row_hnf(rows + [extra]) == row_hnf(rows)

    def test_kernel_rows_annihilate(self):
        rng = random.Random(9)
        for _ in range(30):
            m = IntMatrix(3, 5, [rng.randint(-9, 9) for _ in range(15)])
            k = integer_kernel(m)
            for r in k.row_lists():
                for i in range(3):
                    assert sum(m[i, j] * r[j] for j in range(5)) == 0
            # rank-nullity over Q bounds the basis size
            q = QMatrix(3, 5, [rat(e) for e in m.entries])
            assert k.rows == 5 - q.rank()


class TestEchelonBasis:
    def test_insert_and_kernel(self):
        basis = EchelonBasis(3)
        assert basis.insert([rat(1), rat(2), rat(3)])
        assert not basis.insert([rat(2), rat(4), rat(6)])
        assert basis.insert([rat(0), rat(1), rat(1)])
        assert len(basis) == 2
        for v in basis.kernel():
            assert sum(a * b for a, b in zip(v, [rat(1), rat(2), rat(3)])) == 0
            assert sum(a * b for a, b in zip(v, [rat(0), rat(1), rat(1)])) == 0
        assert len(basis.kernel()) == 1

    def test_matches_matrix_kernel(self):
        rng = random.Random(13)
        for _ in range(10):
            vectors = [[rat(rng.randint(-4, 4)) for _ in range(5)] for _ in range(3)]
            basis = EchelonBasis(5)
            for v in vectors:
                basis.insert(v)
            mk = QMatrix.from_rows(vectors).kernel_basis()
            ek = basis.kernel()
            assert len(mk) == len(ek)
            span = EchelonBasis(5)
            for v in ek:
                assert span.insert(v)
            for col in mk:
                assert not span.insert([col[i, 0] for i in range(5)])


@settings(max_examples=50)
@given(st.lists(rationals, min_size=4, max_size=4))
def test_two_by_two_inverse_roundtrip(entries):
    m = QMatrix(2, 2, entries)
    if not m.det():
        return
    assert m * m.inverse() == QMatrix.identity(2)
    assert m.inverse().inverse() == m
