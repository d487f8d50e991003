"""The closure engine.

Matrix groups embed into affine space as (entries, 1/det) points; monomials
of degree up to d evaluated at these points span a finite-dimensional space
on which left multiplication acts linearly.  The engine saturates that span
from the identity by a breadth-first worklist over (basis vector, generator)
pairs; the orthogonal complement of the saturated span is exactly the space
of degree-<= d polynomials vanishing on the generated group.

On top of the fixed point sit the structural closures: binomial ideals for
cyclic semisimple matrices, implicitization of unipotent one-parameter
products, the group-variety certificate, iterative-deepening auto closure,
and Schreier generator enumeration for finite-index subgroups.
"""

import random as _random
from collections import deque
from functools import lru_cache

from .errors import (
    NoStabilization,
    NotSemisimple,
    ResourceLimit,
    SingularMatrix,
)
from .linalg import EchelonBasis, QMatrix
from .poly import (
    DEFAULT_BUDGET,
    GREVLEX,
    Ideal,
    Poly,
    eliminate,
    ideal_equal,
    ideal_member,
    substitute_linear,
)
from .relations import EigenSpec, lattice_to_binomial_ideal, rational_relation_lattice
from .structure import PolyMatrix, is_semisimple, one_parameter, rational_eigenvalues
from ._rat import RAT, ZERO, ONE, rat

__all__ = [
    "GeneratorSet",
    "GLPoint",
    "LiftedBasis",
    "ClosureResult",
    "monomial_basis",
    "gl_embed",
    "monomial_lift",
    "lift_operator",
    "lifted_span",
    "invariants_up_to_degree",
    "restricted_kernel",
    "minimal_restricted_degree",
    "identity_point_ideal",
    "closure_cyclic_semisimple",
    "implicitize",
    "closure_unipotent_product",
    "is_group_variety",
    "auto_closure",
    "schreier_generators",
    "random_words_vanish",
]


class GeneratorSet:
    """Finite set of invertible rational matrices, closed copy with inverses."""

    __slots__ = ("n", "gens", "with_inverses")

    def __init__(self, gens):
        gens = tuple(gens)
        if not gens:
            raise ValueError("need at least one generator")
        n = gens[0].rows
        for g in gens:
            if not g.is_square or g.rows != n:
                raise ValueError("generators must be square of equal size")
            if not g.det():
                raise SingularMatrix("generators must be invertible")
        self.n = n
        self.gens = gens
        seen = {}
        ordered = []
        for g in list(gens) + [g.inverse() for g in gens]:
            if g.entries not in seen:
                seen[g.entries] = True
                ordered.append(g)
        self.with_inverses = tuple(ordered)

    def __repr__(self):
        return f"GeneratorSet(n={self.n}, {len(self.gens)} generators)"


class GLPoint:
    """Point of the (n^2+1)-coordinate model: entries row-major, then 1/det."""

    __slots__ = ("n", "coords")

    def __init__(self, n, coords):
        coords = tuple(rat(c) for c in coords)
        if len(coords) != n * n + 1:
            raise ValueError("coordinate count mismatch")
        self.n = n
        self.coords = coords

    def __eq__(self, other):
        return isinstance(other, GLPoint) and self.n == other.n and self.coords == other.coords

    def __repr__(self):
        return f"GLPoint({', '.join(str(c) for c in self.coords)})"


def gl_embed(g: QMatrix) -> GLPoint:
    det = g.det()
    if not det:
        raise SingularMatrix("cannot embed a singular matrix")
    return GLPoint(g.rows, list(g.entries) + [ONE / det])


@lru_cache(maxsize=None)
def monomial_basis(m: int, d: int):
    """All exponent tuples of m variables with total degree <= d.

    Degree-ascending, grevlex-descending within each degree; the constant
    monomial is first.  This is the coordinate order of every lifted vector.
    """
    by_degree = [[(0,) * m]]
    for _ in range(d):
        prev = by_degree[-1]
        seen = set()
        nxt = []
        for mono in prev:
            for i in range(m):
                bumped = mono[:i] + (mono[i] + 1,) + mono[i + 1 :]
                if bumped not in seen:
                    seen.add(bumped)
                    nxt.append(bumped)
        nxt.sort(key=GREVLEX.key, reverse=True)
        by_degree.append(nxt)
    return tuple(mono for level in by_degree for mono in level)


def monomial_lift(point: GLPoint, d: int):
    """Vector of all monomials of degree <= d evaluated at the point."""
    coords = point.coords
    m = len(coords)
    powers = [[ONE] for _ in range(m)]
    for i, c in enumerate(coords):
        for _ in range(d):
            powers[i].append(powers[i][-1] * c)
    out = []
    for mono in monomial_basis(m, d):
        v = ONE
        for i, e in enumerate(mono):
            if e:
                v *= powers[i][e]
        out.append(v)
    return out


def _linear_forms(g: QMatrix):
    """Embedded coordinates of g·h as linear forms in the coordinates of h."""
    n = g.rows
    m = n * n + 1
    forms = []
    for i in range(n):
        for j in range(n):
            terms = {}
            for k in range(n):
                c = g[i, k]
                if c:
                    mono = [0] * m
                    mono[k * n + j] = 1
                    terms[tuple(mono)] = c
            forms.append(Poly(m, terms))
    det = g.det()
    ymono = [0] * m
    ymono[m - 1] = 1
    forms.append(Poly(m, {tuple(ymono): ONE / det}))
    return forms


def _lift_rows(g: QMatrix, d: int):
    """Sparse rows of the lift operator: row per monomial, (col, coeff) pairs."""
    m = g.rows * g.rows + 1
    basis = monomial_basis(m, d)
    index = {mono: i for i, mono in enumerate(basis)}
    forms = _linear_forms(g)
    power_cache = [[Poly.const(m, 1)] for _ in range(m)]
    for v, form in enumerate(forms):
        for _ in range(d):
            power_cache[v].append(power_cache[v][-1] * form)
    rows = []
    for mono in basis:
        prod = None
        for v, e in enumerate(mono):
            if e:
                p = power_cache[v][e]
                prod = p if prod is None else prod * p
        if prod is None:
            rows.append(((index[mono], ONE),))
        else:
            rows.append(tuple((index[t], c) for t, c in prod.terms.items()))
    return rows


def lift_operator(g: QMatrix, d: int) -> QMatrix:
    """Dense matrix L with monomial_lift(g·h) = L · monomial_lift(h) for all h."""
    if not g.det():
        raise SingularMatrix("lift operator of a singular matrix")
    rows = _lift_rows(g, d)
    size = len(rows)
    entries = [ZERO] * (size * size)
    for r, row in enumerate(rows):
        for c, coeff in row:
            entries[r * size + c] = coeff
    return QMatrix(size, size, entries)


def _apply_rows(rows, vector):
    out = []
    for row in rows:
        s = ZERO
        for c, coeff in row:
            v = vector[c]
            if v:
                s += coeff * v
        out.append(s)
    return out


class LiftedBasis:
    """Saturated span of lifted group elements, with witness words."""

    __slots__ = ("d", "m", "vectors", "words", "echelon")

    def __init__(self, d, m, vectors, words, echelon):
        self.d = d
        self.m = m
        self.vectors = vectors
        self.words = words
        self.echelon = echelon

    @property
    def dimension(self):
        return len(self.vectors)

    def kernel_vectors(self):
        return self.echelon.kernel()


class ClosureResult:
    """Degree-bounded vanishing ideal of a generated group."""

    __slots__ = ("ideal", "degree_used", "certified", "span")

    def __init__(self, ideal, degree_used, certified, span):
        self.ideal = ideal
        self.degree_used = degree_used
        self.certified = certified
        self.span = span

    def __repr__(self):
        return (
            f"ClosureResult(degree={self.degree_used}, span={self.span.dimension}, "
            f"generators={len(self.ideal.generators)}, certified={self.certified})"
        )


def lifted_span(generators: GeneratorSet, d: int, span_cap=None) -> LiftedBasis:
    """Fixed point of the lift operators on the span of the identity lift.

    Breadth-first over (basis vector, generator) pairs in insertion order, so
    the witness words and the resulting basis are reproducible.
    """
    if d < 0:
        raise ValueError("degree must be nonnegative")
    n = generators.n
    m = n * n + 1
    size = len(monomial_basis(m, d))
    cap = size if span_cap is None else min(span_cap, size)
    ops = [_lift_rows(g, d) for g in generators.with_inverses]
    echelon = EchelonBasis(size)
    v0 = monomial_lift(gl_embed(QMatrix.identity(n)), d)
    echelon.insert(v0)
    vectors = [v0]
    words = [()]
    queue = deque((0, gi) for gi in range(len(ops)))
    while queue:
        vi, gi = queue.popleft()
        image = _apply_rows(ops[gi], vectors[vi])
        if echelon.insert(image):
            if len(vectors) + 1 > cap:
                raise ResourceLimit(f"span dimension exceeded the cap {cap}")
            vectors.append(image)
            words.append(words[vi] + (gi,))
            new_index = len(vectors) - 1
            queue.extend((new_index, gj) for gj in range(len(ops)))
    return LiftedBasis(d, m, vectors, words, echelon)


def _vector_to_poly(vector, m, d):
    basis = monomial_basis(m, d)
    return Poly(m, {mono: c for mono, c in zip(basis, vector) if c})


def invariants_up_to_degree(
    generators: GeneratorSet, d: int, degree_dominates=False, span_cap=None
) -> ClosureResult:
    """All polynomials of degree <= d vanishing on the generated group.

    The returned ideal's generators are a basis of the orthogonal complement
    of the saturated span.  certified is "degree-complete" only when the
    caller asserts d dominates the true closure degree.
    """
    if d < 1:
        raise ValueError("degree must be at least 1")
    span = lifted_span(generators, d, span_cap)
    kernel = span.kernel_vectors()
    gens = [_vector_to_poly(v, span.m, d) for v in kernel]
    ideal = Ideal(span.m, gens)
    certified = "degree-complete" if degree_dominates else "heuristic-stable"
    return ClosureResult(ideal, d, certified, span)


def restricted_kernel(span: LiftedBasis, var_indices, max_degree=None):
    """Vanishing polynomials supported on monomials in the given variables.

    Intersects the kernel with the coordinate subspace of monomials using
    only var_indices (and total degree <= max_degree when given).
    """
    basis = monomial_basis(span.m, span.d)
    allowed = set(var_indices)
    cols = [
        i
        for i, mono in enumerate(basis)
        if all(e == 0 or v in allowed for v, e in enumerate(mono))
        and (max_degree is None or sum(mono) <= max_degree)
    ]
    projected = QMatrix.from_rows([[vec[c] for c in cols] for vec in span.vectors])
    out = []
    for col in projected.kernel_basis():
        vec = [ZERO] * len(basis)
        for r, c in enumerate(cols):
            vec[c] = col[r, 0]
        out.append(_vector_to_poly(vec, span.m, span.d))
    return out


def minimal_restricted_degree(span: LiftedBasis, var_indices):
    """Smallest degree of a nonzero vanishing polynomial in the given variables."""
    for deg in range(1, span.d + 1):
        if restricted_kernel(span, var_indices, deg):
            return deg
    return None


def identity_point_ideal(n: int) -> Ideal:
    m = n * n + 1
    gens = []
    for i in range(n):
        for j in range(n):
            var = Poly.variable(i * n + j, m)
            gens.append(var - 1 if i == j else var)
    gens.append(Poly.variable(m - 1, m) - 1)
    return Ideal(m, gens)


def closure_cyclic_semisimple(g: QMatrix) -> Ideal:
    """Vanishing ideal of the closure of the group generated by a single
    rationally diagonalizable matrix.

    Diagonalize g = P a P^{-1}, emit the relation-lattice binomials on the
    diagonal, off-diagonal vanishing, and the inverse-determinant relation,
    then push through the conjugation as a linear change of coordinates.
    """
    if not g.det():
        raise SingularMatrix("need an invertible matrix")
    if not is_semisimple(g):
        raise NotSemisimple("matrix is not semisimple")
    eigen = rational_eigenvalues(g)  # raises UnsupportedEigenvalues
    n = g.rows
    m = n * n + 1
    columns = []
    diag = []
    for value in sorted(set(eigen)):
        for vec in (g - QMatrix.diagonal([value] * n)).kernel_basis():
            columns.append([vec[i, 0] for i in range(n)])
            diag.append(value)
    p = QMatrix(n, n, [columns[j][i] for i in range(n) for j in range(n)])
    p_inv = p.inverse()

    lattice = rational_relation_lattice(EigenSpec(diag))
    binomials = lattice_to_binomial_ideal(lattice)
    gens = []
    for b in binomials.generators:
        gens.append(Poly(m, {_diag_mono(mono, n): c for mono, c in b.terms.items()}))
    for i in range(n):
        for j in range(n):
            if i != j:
                gens.append(Poly.variable(i * n + j, m))
    det_mono = [0] * m
    for i in range(n):
        det_mono[i * n + i] = 1
    det_mono[m - 1] = 1
    gens.append(Poly(m, {tuple(det_mono): ONE, (0,) * m: -ONE}))
    diag_model = Ideal(m, gens)
    return substitute_linear(diag_model, _conjugation_matrix(p, p_inv))


def _diag_mono(mono, n):
    m = n * n + 1
    out = [0] * m
    for i, e in enumerate(mono):
        out[i * n + i] = e
    return tuple(out)


def _conjugation_matrix(p: QMatrix, p_inv: QMatrix) -> QMatrix:
    """Linear map (vec(D), y) -> (vec(P D P^{-1}), y) on the embedded space."""
    n = p.rows
    m = n * n + 1
    cols = []
    for k in range(n):
        for l in range(n):
            unit = QMatrix(
                n, n, [ONE if (i, j) == (k, l) else ZERO for i in range(n) for j in range(n)]
            )
            image = p * unit * p_inv
            cols.append(list(image.entries) + [ZERO])
    cols.append([ZERO] * (n * n) + [ONE])
    entries = [cols[c][r] for r in range(m) for c in range(m)]
    return QMatrix(m, m, entries)


def implicitize(components, num_params: int, budget=DEFAULT_BUDGET) -> Ideal:
    """Ideal of the closure of the image of a polynomial map.

    components: polynomials in num_params variables, one per output
    coordinate.  Eliminates the parameters from <out_i - f_i(params)>.
    """
    k = num_params
    outs = len(components)
    total = k + outs
    gens = []
    for i, f in enumerate(components):
        if f.arity != k:
            raise ValueError("component arity must equal num_params")
        lifted = Poly(total, {mono + (0,) * outs: c for mono, c in f.terms.items()})
        gens.append(Poly.variable(k + i, total) - lifted)
    return eliminate(Ideal(total, gens), k, budget)


def closure_unipotent_product(hs, n=None, budget=DEFAULT_BUDGET) -> Ideal:
    """Closure of { Phi_{h_1}(z_1) ... Phi_{h_l}(z_l) } for unipotent h_i.

    Implicitizes the multi-parameter product of one-parameter subgroups in
    the embedded coordinates; the product has determinant 1, so the last
    coordinate is constant 1.  An empty list (dimension n required) yields
    the ideal of the identity point.
    """
    hs = list(hs)
    if not hs:
        if n is None:
            raise ValueError("an empty product needs the dimension n")
        return identity_point_ideal(n)
    n = hs[0].rows
    ell = len(hs)
    product = None
    for i, h in enumerate(hs):
        phi = one_parameter(h).map_variables(ell, {0: i})  # raises NotUnipotent
        product = phi if product is None else product * phi
    components = list(product.entries) + [Poly.const(ell, 1)]
    return implicitize(components, ell, budget)


def is_group_variety(ideal: Ideal, n: int, budget=DEFAULT_BUDGET) -> bool:
    """Certificate that V(ideal) ∩ GL_n is a subgroup.

    Checks the identity point, closure of the generator polynomials under a
    generic product, and under the adjugate (Cramer) inverse.
    """
    m = n * n + 1
    if ideal.arity != m:
        raise ValueError("ideal must live in n^2+1 variables")
    reduced = ideal.groebner(GREVLEX, budget)
    if not reduced:
        return True
    identity = gl_embed(QMatrix.identity(n)).coords
    for f in reduced:
        if f.evaluate(identity) != 0:
            return False
    base = Ideal(m, reduced)

    # product: two generic copies u (vars 0..m-1) and v (vars m..2m-1)
    double = Ideal(
        2 * m,
        [_shift_poly(f, m, 2 * m, 0) for f in reduced]
        + [_shift_poly(f, m, 2 * m, m) for f in reduced],
    )
    prod_map = {}
    for i in range(n):
        for j in range(n):
            terms = {}
            for k in range(n):
                mono = [0] * (2 * m)
                mono[i * n + k] += 1
                mono[m + k * n + j] += 1
                terms[tuple(mono)] = ONE
            prod_map[i * n + j] = Poly(2 * m, terms)
    ymono = [0] * (2 * m)
    ymono[m - 1] = 1
    ymono[2 * m - 1] = 1
    prod_map[m - 1] = Poly(2 * m, {tuple(ymono): ONE})
    for f in reduced:
        if not ideal_member(f.subs(prod_map), double, budget):
            return False

    # inverse: adjugate times y gives the entries, det gives the new y
    generic = _generic_matrix_polys(n, m)
    inv_map = {}
    yvar = Poly.variable(m - 1, m)
    for i in range(n):
        for j in range(n):
            inv_map[i * n + j] = _adjugate_entry(generic, n, m, i, j) * yvar
    inv_map[m - 1] = _poly_det(generic, n, m)
    for f in reduced:
        if not ideal_member(f.subs(inv_map), base, budget):
            return False
    return True


def _shift_poly(f: Poly, m: int, total: int, offset: int) -> Poly:
    out = {}
    for mono, c in f.terms.items():
        shifted = [0] * total
        for i, e in enumerate(mono):
            shifted[offset + i] = e
        out[tuple(shifted)] = c
    return Poly(total, out)


def _generic_matrix_polys(n, m):
    return [[Poly.variable(i * n + j, m) for j in range(n)] for i in range(n)]


def _poly_det(rows, n, m):
    if n == 1:
        return rows[0][0]
    total = Poly.zero(m)
    for j in range(n):
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        term = rows[0][j] * _poly_det(minor, n - 1, m)
        total = total + term if j % 2 == 0 else total - term
    return total


def _adjugate_entry(generic, n, m, i, j):
    """(i, j) entry of the adjugate: signed (j, i) cofactor."""
    if n == 1:
        return Poly.const(m, 1)
    minor = [
        [generic[r][c] for c in range(n) if c != i] for r in range(n) if r != j
    ]
    det = _poly_det(minor, n - 1, m)
    return det if (i + j) % 2 == 0 else -det


def random_words_vanish(result: ClosureResult, generators: GeneratorSet, rng, count=200, max_len=12):
    """Check that every kernel polynomial vanishes on random words; exact."""
    kernel = result.span.kernel_vectors()
    if not kernel:
        return True
    d = result.degree_used
    for _ in range(count):
        length = rng.randint(0, max_len)
        word = QMatrix.identity(generators.n)
        for _ in range(length):
            word = word * rng.choice(generators.with_inverses)
        lift = monomial_lift(gl_embed(word), d)
        for vec in kernel:
            total = ZERO
            for a, b in zip(vec, lift):
                if a:
                    total += a * b
            if total:
                return False
    return True


def auto_closure(
    generators: GeneratorSet,
    max_d: int,
    budget=DEFAULT_BUDGET,
    span_cap=None,
    rng=None,
    soundness_words=100,
) -> ClosureResult:
    """Iterative deepening until the degree-d ideal stabilizes.

    Stops at the first d with V_d = V_{d+1} (as ideals) whose variety passes
    the group certificate; the certificate is heuristic, which the result's
    certified field records.  The returned ideal is additionally fuzz-checked
    to vanish on random words.
    """
    if max_d < 1:
        raise ValueError("max degree must be at least 1")
    rng = rng or _random.Random(0)
    previous = invariants_up_to_degree(generators, 1, span_cap=span_cap)
    for d in range(1, max_d):
        current = invariants_up_to_degree(generators, d + 1, span_cap=span_cap)
        if ideal_equal(previous.ideal, current.ideal, budget) and is_group_variety(
            previous.ideal, generators.n, budget
        ):
            if not random_words_vanish(
                previous, generators, rng, count=soundness_words
            ):  # pragma: no cover - engine soundness is structural
                raise AssertionError("soundness fuzz failed; engine bug")
            return previous
        previous = current
    raise NoStabilization(f"no stabilization up to degree {max_d}")


def schreier_generators(
    generators: GeneratorSet, member, index_bound: int, length_cap=None, product_cap=200_000
):
    """Generators of a finite-index subgroup via bounded word enumeration.

    Enumerates all products of generators and inverses of length at most
    2*index_bound + 1 (deduplicated), keeping those the membership predicate
    accepts.
    """
    if index_bound < 1:
        raise ValueError("index bound must be at least 1")
    cap = length_cap if length_cap is not None else 2 * index_bound + 1
    identity = QMatrix.identity(generators.n)
    seen = {identity.entries}
    ordered = [identity]
    frontier = [identity]
    for _ in range(cap):
        nxt = []
        for w in frontier:
            for g in generators.with_inverses:
                prod = w * g
                if prod.entries not in seen:
                    seen.add(prod.entries)
                    if len(seen) > product_cap:
                        raise ResourceLimit(
                            f"product enumeration exceeded {product_cap} matrices"
                        )
                    ordered.append(prod)
                    nxt.append(prod)
        frontier = nxt
    return [g for g in ordered if member(g)]
