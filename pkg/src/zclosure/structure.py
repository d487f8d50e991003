"""Matrix structure theory over the rationals.

Characteristic and minimal polynomials, semisimplicity and unipotence
tests, the Jordan-Chevalley decomposition (computed by Newton iteration on
the squarefree part of the characteristic polynomial, entirely in rational
matrix arithmetic), truncated logarithm/exponential of unipotents, and the
polynomial one-parameter subgroup through a unipotent matrix.
"""

import math

from .errors import NotUnipotent, SingularMatrix, UnsupportedEigenvalues
from .linalg import QMatrix, EchelonBasis
from .poly import Poly, derivative, uni_divmod, uni_gcd
from ._rat import RAT, ZERO, ONE, rat

__all__ = [
    "JCDecomposition",
    "PolyMatrix",
    "char_poly",
    "min_poly",
    "is_semisimple",
    "is_unipotent",
    "is_nilpotent",
    "jordan_chevalley",
    "nilpotent_log",
    "nilpotent_exp",
    "one_parameter",
    "eval_poly_at_matrix",
    "rational_eigenvalues",
    "companion_matrix",
]


class JCDecomposition:
    """Commuting factorization g = semisimple * unipotent."""

    __slots__ = ("semisimple", "unipotent")

    def __init__(self, semisimple, unipotent):
        self.semisimple = semisimple
        self.unipotent = unipotent

    def product(self):
        return self.semisimple * self.unipotent

    def __eq__(self, other):
        return (
            isinstance(other, JCDecomposition)
            and self.semisimple == other.semisimple
            and self.unipotent == other.unipotent
        )

    def __repr__(self):
        return f"JCDecomposition(semisimple={self.semisimple!r}, unipotent={self.unipotent!r})"


def char_poly(g: QMatrix) -> Poly:
    """Monic characteristic polynomial det(x*I - g), by Faddeev-LeVerrier."""
    if not g.is_square:
        raise ValueError("characteristic polynomial of a non-square matrix")
    n = g.rows
    coeffs = [ONE]  # x^n downwards
    m = QMatrix.zero(n, n)
    c = ONE
    for k in range(1, n + 1):
        m = g * m + c * QMatrix.identity(n)
        c = -(g * m).trace() / k
        coeffs.append(c)
    return Poly(1, {(n - i,): c for i, c in enumerate(coeffs)})


def min_poly(g: QMatrix) -> Poly:
    """Monic generator of the annihilating ideal of g."""
    if not g.is_square:
        raise ValueError("minimal polynomial of a non-square matrix")
    n = g.rows
    basis = EchelonBasis(n * n)
    powers = [QMatrix.identity(n)]
    basis.insert(list(powers[0].entries))
    while True:
        nxt = powers[-1] * g
        if not basis.insert(list(nxt.entries)):
            break
        powers.append(nxt)
    k = len(powers)
    # solve sum c_i g^i = g^k exactly
    rows = [[p.entries[j] for p in powers] for j in range(n * n)]
    target = (powers[-1] * g).entries
    aug = QMatrix.from_rows([rows[j] + [target[j]] for j in range(n * n)])
    red, pivots = aug.rref()
    sol = [ZERO] * k
    for r, pc in enumerate(pivots):
        if pc < k:
            sol[pc] = red[r, k]
    terms = {(k,): ONE}
    for i, c in enumerate(sol):
        if c:
            terms[(i,)] = -c
    return Poly(1, terms)


def is_semisimple(g: QMatrix) -> bool:
    """Squarefree minimal polynomial; valid over the perfect field Q."""
    m = min_poly(g)
    return uni_gcd(m, derivative(m)).total_degree() == 0


def is_nilpotent(g: QMatrix) -> bool:
    return (g ** g.rows).is_zero()


def is_unipotent(g: QMatrix) -> bool:
    return is_nilpotent(g - QMatrix.identity(g.rows))


def eval_poly_at_matrix(p: Poly, g: QMatrix) -> QMatrix:
    """Horner evaluation of a univariate polynomial at a square matrix."""
    n = g.rows
    coeffs = [ZERO] * (p.total_degree() + 1)
    for (e,), c in p.terms.items():
        coeffs[e] = c
    acc = QMatrix.zero(n, n)
    for c in reversed(coeffs):
        acc = acc * g + c * QMatrix.identity(n)
    return acc


def jordan_chevalley(g: QMatrix) -> JCDecomposition:
    """Unique decomposition g = g_s g_u with g_s semisimple, g_u unipotent.

    Newton iteration a <- a - f(a) f'(a)^{-1} on the squarefree part f of the
    characteristic polynomial; f(g) is nilpotent and f'(a) stays invertible,
    so the iteration converges in at most ceil(log2 n) + 1 steps and never
    leaves rational matrices.
    """
    if not g.is_square:
        raise ValueError("decomposition of a non-square matrix")
    n = g.rows
    if not g.det():
        raise SingularMatrix("Jordan-Chevalley multiplicative form needs det != 0")
    chi = char_poly(g)
    f = uni_divmod(chi, uni_gcd(chi, derivative(chi)))[0]
    fp = derivative(f)
    a = g
    for _ in range(n + 2):
        fa = eval_poly_at_matrix(f, a)
        if fa.is_zero():
            break
        a = a - fa * eval_poly_at_matrix(fp, a).inverse()
    else:
        raise AssertionError("Newton iteration failed to converge")
    g_s = a
    g_u = QMatrix.identity(n) + g_s.inverse() * (g - g_s)
    return JCDecomposition(g_s, g_u)


def nilpotent_log(u: QMatrix) -> QMatrix:
    """log of a unipotent matrix: the series truncates after n - 1 terms."""
    n = u.rows
    nil = u - QMatrix.identity(n)
    if not (nil**n).is_zero():
        raise NotUnipotent("matrix is not unipotent")
    acc = QMatrix.zero(n, n)
    power = QMatrix.identity(n)
    for k in range(1, n):
        power = power * nil
        if power.is_zero():
            break
        acc = acc + power * (rat((-1) ** (k - 1), k))
    return acc


def nilpotent_exp(m: QMatrix) -> QMatrix:
    """exp of a nilpotent matrix, truncated at the nilpotency index."""
    n = m.rows
    if not (m**n).is_zero():
        raise NotUnipotent("matrix is not nilpotent")
    acc = QMatrix.identity(n)
    power = QMatrix.identity(n)
    fact = 1
    for k in range(1, n):
        power = power * m
        if power.is_zero():
            break
        fact *= k
        acc = acc + power * rat(1, fact)
    return acc


class PolyMatrix:
    """Square matrix with polynomial entries (shared arity)."""

    __slots__ = ("n", "arity", "entries")

    def __init__(self, n, arity, entries):
        entries = tuple(entries)
        if len(entries) != n * n:
            raise ValueError("entry count mismatch")
        if any(e.arity != arity for e in entries):
            raise ValueError("entry arity mismatch")
        self.n = n
        self.arity = arity
        self.entries = entries

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.n + j]

    def __eq__(self, other):
        return (
            isinstance(other, PolyMatrix)
            and self.n == other.n
            and self.arity == other.arity
            and self.entries == other.entries
        )

    def __mul__(self, other):
        if self.n != other.n or self.arity != other.arity:
            raise ValueError("shape or arity mismatch")
        n = self.n
        out = []
        for i in range(n):
            for j in range(n):
                s = Poly.zero(self.arity)
                for k in range(n):
                    a = self[i, k]
                    b = other[k, j]
                    if a and b:
                        s = s + a * b
                out.append(s)
        return PolyMatrix(n, self.arity, out)

    def evaluate(self, point) -> QMatrix:
        return QMatrix(self.n, self.n, [e.evaluate(point) for e in self.entries])

    def map_variables(self, new_arity, var_map):
        """Reindex variables: old variable i becomes new variable var_map[i]."""
        out = []
        for e in self.entries:
            terms = {}
            for m, c in e.terms.items():
                mono = [0] * new_arity
                for i, exp in enumerate(m):
                    if exp:
                        mono[var_map[i]] += exp
                terms[tuple(mono)] = c
            out.append(Poly(new_arity, terms))
        return PolyMatrix(self.n, new_arity, out)

    def max_degree(self):
        return max((e.total_degree() for e in self.entries), default=0)

    def __repr__(self):
        return f"PolyMatrix(n={self.n}, arity={self.arity})"


def one_parameter(h: QMatrix) -> PolyMatrix:
    """The polynomial map z -> exp(z log h) through a unipotent h.

    Entries have degree < n, the value at 0 is the identity, the value at 1
    is h, and addition of parameters corresponds to matrix product.
    """
    n = h.rows
    log = nilpotent_log(h)  # raises NotUnipotent
    entries = [Poly.zero(1) for _ in range(n * n)]
    power = QMatrix.identity(n)
    fact = 1
    for k in range(n):
        if k:
            power = power * log
            fact *= k
            if power.is_zero():
                break
        coeff = rat(1, fact)
        for idx, e in enumerate(power.entries):
            if e:
                entries[idx] = entries[idx] + Poly(1, {(k,): coeff * e})
    return PolyMatrix(n, 1, entries)


def rational_eigenvalues(g: QMatrix):
    """Eigenvalues with multiplicity when the spectrum is rational.

    Raises UnsupportedEigenvalues when the characteristic polynomial has an
    irrational root.  Rational candidates come from the integer-cleared
    polynomial via the rational root theorem.
    """
    chi = char_poly(g)
    n = g.rows
    roots = []
    p = chi
    while p.total_degree() > 0:
        root = _some_rational_root(p)
        if root is None:
            raise UnsupportedEigenvalues(
                "matrix has irrational eigenvalues; the exact engine needs a rational spectrum"
            )
        roots.append(root)
        z = Poly.variable(0, 1)
        p = uni_divmod(p, z - Poly.const(1, root))[0]
    roots.sort()
    return roots


def _divisors(n):
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _some_rational_root(p: Poly):
    """A rational root of a univariate rational polynomial, or None."""
    coeffs = {}
    denom_lcm = 1
    for (e,), c in p.terms.items():
        coeffs[e] = c
        d = int(c.denominator)
        denom_lcm = denom_lcm * d // math.gcd(denom_lcm, d)
    ints = {e: int(c * denom_lcm) for e, c in coeffs.items()}
    if not ints:
        return None
    deg = max(ints)
    lead = ints[deg]
    low = min(ints)
    if low > 0:
        return ZERO  # x^low divides p
    const = ints[0]
    for q in _divisors(lead):
        for pnum in _divisors(const):
            for sign in (1, -1):
                cand = rat(sign * pnum, q)
                if p.evaluate([cand]) == 0:
                    return cand
    return None


def companion_matrix(coeffs):
    """Companion matrix of the monic polynomial x^n + c_{n-1} x^{n-1} + ... + c_0."""
    coeffs = [rat(c) for c in coeffs]
    n = len(coeffs)
    entries = []
    for i in range(n):
        for j in range(n):
            if j == n - 1:
                entries.append(-coeffs[i])
            elif i == j + 1:
                entries.append(ONE)
            else:
                entries.append(ZERO)
    return QMatrix(n, n, entries)
