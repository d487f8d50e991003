import random

import pytest

from zclosure.errors import NotUnipotent, SingularMatrix, UnsupportedEigenvalues
from zclosure.linalg import QMatrix
from zclosure.poly import Poly, derivative, uni_gcd
from zclosure.structure import (
    char_poly,
    companion_matrix,
    eval_poly_at_matrix,
    is_nilpotent,
    is_semisimple,
    is_unipotent,
    jordan_chevalley,
    min_poly,
    nilpotent_exp,
    nilpotent_log,
    one_parameter,
    rational_eigenvalues,
)
from zclosure._rat import rat


def qm(rows):
    return QMatrix.from_rows([[rat(e) for e in r] for r in rows])


def x():
    return Poly.variable(0, 1)


def random_unipotent(rng, n):
    # exp of a random strictly upper triangular nilpotent
    entries = [
        rat(rng.randint(-3, 3), rng.randint(1, 3)) if j > i else rat(0)
        for i in range(n)
        for j in range(n)
    ]
    return nilpotent_exp(QMatrix(n, n, entries))


def random_invertible(rng, n, max_height=10):
    while True:
        m = QMatrix(
            n,
            n,
            [
                rat(rng.randint(-max_height, max_height), rng.randint(1, max_height))
                for _ in range(n * n)
            ],
        )
        if m.det():
            return m


class TestCharPoly:
    def test_identity(self):
        assert char_poly(QMatrix.identity(2)) == (x() - 1) ** 2

    def test_diagonal(self):
        assert char_poly(QMatrix.diagonal([rat(2), rat(3)])) == (x() - 2) * (x() - 3)

    def test_rotation(self):
        assert char_poly(qm([[0, -1], [1, 0]])) == x() ** 2 + 1

    def test_annihilates(self):
        rng = random.Random(21)
        for _ in range(20):
            g = random_invertible(rng, 3, 5)
            assert eval_poly_at_matrix(char_poly(g), g).is_zero()


class TestMinPoly:
    def test_identity(self):
        assert min_poly(QMatrix.identity(3)) == x() - 1

    def test_jordan_block(self):
        assert min_poly(qm([[2, 1], [0, 2]])) == (x() - 2) ** 2

    def test_repeated_eigenvalue(self):
        g = QMatrix.diagonal([rat(2), rat(2), rat(3)])
        assert min_poly(g) == (x() - 2) * (x() - 3)

    def test_divides_char_and_annihilates(self):
        rng = random.Random(22)
        for _ in range(20):
            g = random_invertible(rng, 3, 5)
            m = min_poly(g)
            assert eval_poly_at_matrix(m, g).is_zero()
            from zclosure.poly import uni_divmod

            assert uni_divmod(char_poly(g), m)[1].is_zero()


class TestPredicates:
    def test_identity_both(self):
        assert is_semisimple(QMatrix.identity(2))
        assert is_unipotent(QMatrix.identity(2))

    def test_jordan_block(self):
        g = qm([[1, 1], [0, 1]])
        assert not is_semisimple(g)
        assert is_unipotent(g)

    def test_rotation_semisimple(self):
        # min poly x^2 + 1 has gcd 1 with its derivative 2x
        g = qm([[0, -1], [1, 0]])
        assert is_semisimple(g)
        m = min_poly(g)
        assert uni_gcd(m, derivative(m)).total_degree() == 0

    def test_nilpotent(self):
        assert is_nilpotent(qm([[0, 1], [0, 0]]))
        assert not is_nilpotent(QMatrix.identity(2))


class TestJordanChevalley:
    def test_semisimple_fixed(self):
        g = QMatrix.diagonal([rat(2), rat(3)])
        d = jordan_chevalley(g)
        assert d.semisimple == g
        assert d.unipotent == QMatrix.identity(2)

    def test_unipotent_fixed(self):
        g = qm([[1, 1], [0, 1]])
        d = jordan_chevalley(g)
        assert d.semisimple == QMatrix.identity(2)
        assert d.unipotent == g

    def test_jordan_block_two(self):
        d = jordan_chevalley(qm([[2, 1], [0, 2]]))
        assert d.semisimple == QMatrix.diagonal([rat(2), rat(2)])
        assert d.unipotent == qm([[1, "1/2"], [0, 1]])

    def test_singular_rejected(self):
        with pytest.raises(SingularMatrix):
            jordan_chevalley(qm([[1, 1], [1, 1]]))

    def test_uniqueness_on_commuting_product(self):
        g_s = QMatrix.diagonal([rat(2), rat(2), rat(5)])
        g_u = qm([[1, 1, 0], [0, 1, 0], [0, 0, 1]])
        assert g_s * g_u == g_u * g_s
        d = jordan_chevalley(g_s * g_u)
        assert d.semisimple == g_s
        assert d.unipotent == g_u

    def test_irrational_spectrum_stays_rational(self):
        # companion of x^2 - 2 times a commuting unipotent: outputs rational
        c = companion_matrix([-2, 0])
        assert char_poly(c) == x() ** 2 - 2
        g = c * nilpotent_exp(qm([[0, 0], [0, 0]]))
        d = jordan_chevalley(g)
        assert d.semisimple == c
        # a genuinely mixed case in dimension 3
        block = QMatrix.from_rows(
            [
                [c[0, 0], c[0, 1], rat(1)],
                [c[1, 0], c[1, 1], rat(0)],
                [rat(0), rat(0), rat(1)],
            ]
        )
        dd = jordan_chevalley(block)
        assert dd.product() == block
        assert dd.semisimple * dd.unipotent == dd.unipotent * dd.semisimple
        assert is_semisimple(dd.semisimple)
        assert is_unipotent(dd.unipotent)

    def test_invariants_random(self):
        rng = random.Random(23)
        for _ in range(40):
            n = rng.choice([2, 3])
            g = random_invertible(rng, n)
            d = jordan_chevalley(g)
            assert d.semisimple * d.unipotent == g
            assert d.semisimple * d.unipotent == d.unipotent * d.semisimple
            assert is_semisimple(d.semisimple)
            assert is_unipotent(d.unipotent)


class TestLogExp:
    def test_log_identity(self):
        assert nilpotent_log(QMatrix.identity(3)).is_zero()

    def test_log_simple(self):
        assert nilpotent_log(qm([[1, 1], [0, 1]])) == qm([[0, 1], [0, 0]])

    def test_log_two_terms(self):
        u = qm([[1, 1, 0], [0, 1, 1], [0, 0, 1]])
        # N - N^2/2 with N = u - 1
        assert nilpotent_log(u) == qm([[0, 1, "-1/2"], [0, 0, 1], [0, 0, 0]])
        assert nilpotent_exp(nilpotent_log(u)) == u

    def test_not_unipotent(self):
        with pytest.raises(NotUnipotent):
            nilpotent_log(QMatrix.diagonal([rat(2), rat(1)]))

    def test_round_trip_random(self):
        rng = random.Random(24)
        for _ in range(40):
            n = rng.choice([2, 3, 4])
            u = random_unipotent(rng, n)
            assert nilpotent_exp(nilpotent_log(u)) == u


class TestOneParameter:
    def test_identity_constant(self):
        phi = one_parameter(QMatrix.identity(2))
        assert phi.evaluate([rat(5)]) == QMatrix.identity(2)
        assert phi.max_degree() == 0

    def test_shear(self):
        phi = one_parameter(qm([[1, 1], [0, 1]]))
        z = Poly.variable(0, 1)
        assert phi[0, 0] == Poly.const(1, 1)
        assert phi[0, 1] == z
        assert phi[1, 0].is_zero()
        assert phi[1, 1] == Poly.const(1, 1)

    def test_half_step(self):
        phi = one_parameter(qm([[1, 2], [0, 1]]))
        assert phi.evaluate([rat(1, 2)]) == qm([[1, 1], [0, 1]])

    def test_endpoints_and_degree(self):
        rng = random.Random(25)
        for _ in range(20):
            n = rng.choice([2, 3, 4])
            u = random_unipotent(rng, n)
            phi = one_parameter(u)
            assert phi.evaluate([rat(0)]) == QMatrix.identity(n)
            assert phi.evaluate([rat(1)]) == u
            assert phi.max_degree() < n

    def test_homomorphism_polynomial_identity(self):
        # Phi(z + w) == Phi(z) Phi(w) coefficient-wise in Q[z, w]
        rng = random.Random(26)
        z2 = Poly.variable(0, 2)
        w2 = Poly.variable(1, 2)
        for _ in range(10):
            n = rng.choice([2, 3])
            u = random_unipotent(rng, n)
            phi = one_parameter(u)
            phi_z = phi.map_variables(2, {0: 0})
            phi_w = phi.map_variables(2, {0: 1})
            product = phi_z * phi_w
            for idx in range(n * n):
                shifted = phi.entries[idx].subs({0: z2 + w2})
                assert shifted == product.entries[idx]


class TestRationalEigenvalues:
    def test_diagonal(self):
        g = QMatrix.diagonal([rat(2) ** 5, rat(1, 2)])
        assert rational_eigenvalues(g) == [rat(1, 2), rat(32)]

    def test_conjugated(self):
        g = qm([[5, -6], [3, -4]])
        assert rational_eigenvalues(g) == [rat(-1), rat(2)]

    def test_multiplicity(self):
        g = QMatrix.diagonal([rat(2), rat(2), rat(3)])
        assert rational_eigenvalues(g) == [rat(2), rat(2), rat(3)]

    def test_irrational_rejected(self):
        with pytest.raises(UnsupportedEigenvalues):
            rational_eigenvalues(qm([[0, -1], [1, 0]]))
        with pytest.raises(UnsupportedEigenvalues):
            rational_eigenvalues(companion_matrix([-2, 0]))
