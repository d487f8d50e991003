"""Affine programs and their strongest polynomial invariants.

A single-location loop with a nondeterministic choice among invertible
affine updates x := A x + b reduces to a matrix group: each update
homogenizes to the (n+1)x(n+1) block matrix [[A, b], [0, 1]], and the
reachable configurations are exactly the group the homogenized updates
generate.  The invariant ideal is the closure ideal specialized to a
symbolic start state: n fresh variables for the initial vector are
adjoined, the matrix action equations are added, and the matrix
coordinates are eliminated.
"""

from .closure import GeneratorSet, invariants_up_to_degree
from .errors import NonInvertibleUpdate
from .linalg import QMatrix
from .poly import DEFAULT_BUDGET, Ideal, Poly, eliminate
from ._rat import ONE, ZERO, rat

__all__ = ["AffineProgram", "affine_to_generators", "strongest_invariant"]


class AffineProgram:
    """num_vars state variables, updates as (A, b) pairs with A invertible."""

    __slots__ = ("num_vars", "updates")

    def __init__(self, num_vars, updates):
        self.num_vars = num_vars
        fixed = []
        for index, (a, b) in enumerate(updates):
            if not isinstance(a, QMatrix):
                a = QMatrix.from_rows(a)
            b = [rat(x) for x in b]
            if a.rows != num_vars or a.cols != num_vars or len(b) != num_vars:
                raise ValueError(f"update {index} has inconsistent shape")
            fixed.append((a, tuple(b)))
        if not fixed:
            raise ValueError("need at least one update")
        self.updates = tuple(fixed)

    def __repr__(self):
        return f"AffineProgram(num_vars={self.num_vars}, {len(self.updates)} updates)"


def homogenize(a: QMatrix, b) -> QMatrix:
    """[[A, b], [0, 1]]: applying it to (state, 1) gives (A state + b, 1)."""
    n = a.rows
    rows = [list(a.row(i)) + [b[i]] for i in range(n)]
    rows.append([ZERO] * n + [ONE])
    return QMatrix.from_rows(rows)


def affine_to_generators(program: AffineProgram) -> GeneratorSet:
    gens = []
    for index, (a, b) in enumerate(program.updates):
        if not a.det():
            raise NonInvertibleUpdate(
                index,
                f"update {index} is not invertible; non-invertible updates need a "
                "semigroup closure, which is outside the group engine",
            )
        gens.append(homogenize(a, b))
    return GeneratorSet(gens)


def strongest_invariant(program: AffineProgram, d: int, budget=DEFAULT_BUDGET) -> Ideal:
    """Polynomials of degree <= d holding along every execution.

    The result lives in 2 num_vars variables: current state first, then the
    adjoined symbolic initial state.  Every generator vanishes whenever the
    current state is reachable from the initial one.
    """
    if d < 1:
        raise ValueError("degree must be at least 1")
    n = program.num_vars
    generators = affine_to_generators(program)
    closure = invariants_up_to_degree(generators, d)
    k = (n + 1) * (n + 1) + 1  # matrix coordinates to eliminate
    total = k + 2 * n  # plus current state and initial state
    gens = []
    for f in closure.ideal.generators:
        gens.append(Poly(total, {mono + (0,) * (2 * n): c for mono, c in f.terms.items()}))
    # current state = upper part of M (initial, 1)
    for i in range(n):
        terms = {}
        mono = [0] * total
        mono[k + i] = 1
        terms[tuple(mono)] = ONE  # x_i
        for j in range(n):
            mono = [0] * total
            mono[i * (n + 1) + j] = 1
            mono[k + n + j] = 1
            terms[tuple(mono)] = -ONE  # -M_ij x0_j
        mono = [0] * total
        mono[i * (n + 1) + n] = 1
        terms[tuple(mono)] = -ONE  # -M_i,n (translation column)
        gens.append(Poly(total, terms))
    return eliminate(Ideal(total, gens), k, budget)


def run_program(program: AffineProgram, start, steps, rng):
    """Execute random updates from a start state; returns the trajectory."""
    state = [rat(x) for x in start]
    trail = [tuple(state)]
    for _ in range(steps):
        a, b = program.updates[rng.randrange(len(program.updates))]
        state = [
            sum((a[i, j] * state[j] for j in range(program.num_vars)), ZERO) + b[i]
            for i in range(program.num_vars)
        ]
        trail.append(tuple(state))
    return trail
