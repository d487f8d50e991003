"""Multivariate polynomials over the rationals.

Monomials are exponent tuples, polynomials are dicts mapping monomials to
nonzero coefficients.  Gröbner bases use Buchberger's algorithm with the
normal selection strategy and both classical pair-pruning criteria; a
configurable budget caps the number of treated S-pairs and the total degree
of intermediate polynomials.
"""

import heapq
from dataclasses import dataclass

from .errors import ResourceLimit
from ._rat import ZERO, ONE, rat

__all__ = [
    "MonomialOrder",
    "GREVLEX",
    "LEX",
    "elimination_order",
    "Poly",
    "GroebnerBudget",
    "Ideal",
    "normal_form",
    "groebner",
    "eliminate",
    "ideal_member",
    "ideal_equal",
    "substitute_linear",
    "uni_divmod",
    "uni_gcd",
    "derivative",
]


def _grevlex_key(mono):
    return (sum(mono), tuple(-e for e in reversed(mono)))


class MonomialOrder:
    """Total, multiplicative, well-founded order on exponent tuples.

    kind is "grevlex", "lex", or "elim"; an elimination order compares the
    first ``block`` exponents (grevlex) before the rest, so eliminating the
    first k variables means keeping basis elements with zero key head.
    """

    __slots__ = ("kind", "block")

    def __init__(self, kind, block=0):
        if kind not in ("grevlex", "lex", "elim"):
            raise ValueError(f"unknown order kind {kind!r}")
        self.kind = kind
        self.block = block

    def key(self, mono):
        if self.kind == "grevlex":
            return _grevlex_key(mono)
        if self.kind == "lex":
            return mono
        k = self.block
        return (_grevlex_key(mono[:k]), _grevlex_key(mono[k:]))

    def __eq__(self, other):
        return (
            isinstance(other, MonomialOrder)
            and self.kind == other.kind
            and self.block == other.block
        )

    def __hash__(self):
        return hash((self.kind, self.block))

    def __repr__(self):
        if self.kind == "elim":
            return f"MonomialOrder('elim', {self.block})"
        return f"MonomialOrder({self.kind!r})"


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def elimination_order(k):
    return MonomialOrder("elim", k)


def _mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _mono_divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _mono_div(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


class Poly:
    """Polynomial in a fixed number of variables; zero coefficients never stored."""

    __slots__ = ("arity", "terms")

    def __init__(self, arity, terms=None):
        self.arity = arity
        clean = {}
        if terms:
            for mono, c in terms.items():
                c = rat(c)
                if c:
                    if len(mono) != arity:
                        raise ValueError("monomial arity mismatch")
                    clean[tuple(mono)] = c
        self.terms = clean

    @classmethod
    def zero(cls, arity):
        return cls(arity)

    @classmethod
    def const(cls, arity, c):
        return cls(arity, {(0,) * arity: rat(c)})

    @classmethod
    def variable(cls, i, arity):
        mono = [0] * arity
        mono[i] = 1
        return cls(arity, {tuple(mono): ONE})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.arity == other.arity and self.terms == other.terms

    def __hash__(self):
        return hash((self.arity, frozenset(self.terms.items())))

    def total_degree(self):
        return max((sum(m) for m in self.terms), default=0)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, ZERO) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return self._wrap(out)

    def __sub__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, ZERO) - c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return self._wrap(out)

    def __radd__(self, other):
        return self.__add__(other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __neg__(self):
        return self._wrap({m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = rat(other)
            if not c:
                return Poly(self.arity)
            return self._wrap({m: c * v for m, v in self.terms.items()})
        if other.arity != self.arity:
            raise ValueError("arity mismatch")
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, ZERO) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return self._wrap(out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.const(self.arity, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.arity != self.arity:
                raise ValueError("arity mismatch")
            return other
        return Poly.const(self.arity, other)

    def _wrap(self, terms):
        p = Poly.__new__(Poly)
        p.arity = self.arity
        p.terms = terms
        return p

    def leading(self, order):
        """(monomial, coefficient) of the leading term; None for zero."""
        if not self.terms:
            return None
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    def monic(self, order):
        lead = self.leading(order)
        if lead is None:
            return self
        _, c = lead
        if c == 1:
            return self
        inv = ONE / c
        return self._wrap({m: v * inv for m, v in self.terms.items()})

    def evaluate(self, point):
        """Exact value at a rational point (sequence of length arity)."""
        point = [rat(x) for x in point]
        total = ZERO
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v *= x**e
            total += v
        return total

    def subs(self, mapping):
        """Substitute polynomials for variables; unmapped variables persist.

        mapping: dict var index -> Poly (all of the same target arity).
        """
        target = None
        for p in mapping.values():
            target = p.arity
            break
        if target is None:
            return self
        if not self.terms:
            return Poly(target)
        cache = {}

        def var_power(i, e):
            if (i, e) not in cache:
                if i in mapping:
                    cache[(i, e)] = mapping[i] ** e
                else:
                    mono = [0] * target
                    mono[i] = e
                    cache[(i, e)] = Poly(target, {tuple(mono): ONE})
            return cache[(i, e)]

        total = Poly(target)
        for m, c in self.terms.items():
            prod = Poly.const(target, c)
            for i, e in enumerate(m):
                if e:
                    prod = prod * var_power(i, e)
            total = total + prod
        return total

    def sorted_terms(self, order=GREVLEX, reverse=True):
        return sorted(self.terms.items(), key=lambda mc: order.key(mc[0]), reverse=reverse)

    def __repr__(self):
        if not self.terms:
            return "Poly(0)"
        bits = []
        for m, c in self.sorted_terms():
            mono = "*".join(
                f"v{i}^{e}" if e > 1 else f"v{i}" for i, e in enumerate(m) if e
            )
            bits.append(f"{c}" + (f"*{mono}" if mono else ""))
        return "Poly(" + " + ".join(bits) + ")"


@dataclass(frozen=True)
class GroebnerBudget:
    """Caps for Buchberger runs; exceeding either raises ResourceLimit."""

    max_pairs: int = 50_000
    max_degree: int = 60


DEFAULT_BUDGET = GroebnerBudget()


def normal_form(f, basis, order=GREVLEX, budget=None):
    """Remainder of f under multivariate division by basis (full tail reduction)."""
    max_degree = budget.max_degree if budget else None
    divisors = [(g.leading(order), g) for g in basis if g]
    p = dict(f.terms)
    remainder = {}
    while p:
        m = max(p, key=order.key)
        c = p.pop(m)
        hit = None
        for (lm, lc), g in divisors:
            if _mono_divides(lm, m):
                hit = (lm, lc, g)
                break
        if hit is None:
            remainder[m] = c
            continue
        lm, lc, g = hit
        q = _mono_div(m, lm)
        factor = c / lc
        if max_degree is not None and sum(q) + g.total_degree() > max_degree:
            raise ResourceLimit(
                f"intermediate degree exceeded {max_degree} during division"
            )
        for gm, gc in g.terms.items():
            if gm == lm:
                continue
            t = _mono_mul(q, gm)
            s = p.get(t, ZERO) - factor * gc
            if s:
                p[t] = s
            else:
                p.pop(t, None)
    out = Poly.__new__(Poly)
    out.arity = f.arity
    out.terms = remainder
    return out


def _s_poly(f, g, order):
    fm, fc = f.leading(order)
    gm, gc = g.leading(order)
    lcm = _mono_lcm(fm, gm)
    mf = Poly(f.arity, {_mono_div(lcm, fm): ONE / fc})
    mg = Poly(g.arity, {_mono_div(lcm, gm): ONE / gc})
    return mf * f - mg * g


def groebner(generators, order=GREVLEX, budget=DEFAULT_BUDGET):
    """Reduced Gröbner basis of the given generators under order.

    Deterministic: normal selection strategy (S-pairs by ascending lcm, ties
    by index), coprime and chain pair pruning, then canonical inter-reduction
    and monic scaling.
    """
    basis = [g for g in generators if g]
    if not basis:
        return []
    arity = basis[0].arity
    if any(g.arity != arity for g in basis):
        raise ValueError("generators must share arity")
    if any(g.total_degree() == 0 for g in basis):
        return [Poly.const(arity, 1)]

    G = list(basis)
    lead = [g.leading(order)[0] for g in G]
    heap = []
    done = set()
    treated = 0

    def push(i, j):
        heapq.heappush(heap, (order.key(_mono_lcm(lead[i], lead[j])), i, j))

    for i in range(len(G)):
        for j in range(i):
            push(i, j)

    def chain_skip(i, j, lcm):
        for k in range(len(G)):
            if k in (i, j):
                continue
            if _mono_divides(lead[k], lcm):
                a = (max(i, k), min(i, k))
                b = (max(j, k), min(j, k))
                if a in done and b in done:
                    return True
        return False

    while heap:
        _, i, j = heapq.heappop(heap)
        if (i, j) in done:
            continue
        done.add((i, j))
        lcm = _mono_lcm(lead[i], lead[j])
        if _mono_mul(lead[i], lead[j]) == lcm:
            continue  # coprime leading monomials reduce to zero
        if chain_skip(i, j, lcm):
            continue
        treated += 1
        if treated > budget.max_pairs:
            raise ResourceLimit(f"S-pair budget {budget.max_pairs} exceeded")
        if sum(lcm) > budget.max_degree:
            raise ResourceLimit(
                f"S-pair degree {sum(lcm)} exceeds budget {budget.max_degree}"
            )
        r = normal_form(_s_poly(G[i], G[j], order), G, order, budget)
        if r:
            G.append(r)
            lead.append(r.leading(order)[0])
            new = len(G) - 1
            for k in range(new):
                push(new, k)

    # minimalize: drop elements whose leading monomial is divisible by another's
    keep = []
    for i, g in enumerate(G):
        if any(
            j != i and _mono_divides(lead[j], lead[i]) and (sum(lead[j]), j) < (sum(lead[i]), i)
            for j in range(len(G))
        ):
            continue
        if any(j != i and lead[j] == lead[i] and j < i for j in range(len(G))):
            continue
        keep.append(i)
    minimal = [G[i] for i in keep]
    # inter-reduce to the unique reduced basis
    reduced = []
    for i, g in enumerate(minimal):
        others = [h for j, h in enumerate(minimal) if j != i]
        r = normal_form(g, others, order, budget)
        if r:
            reduced.append(r.monic(order))
    reduced.sort(key=lambda g: order.key(g.leading(order)[0]))
    return reduced


class Ideal:
    """Ideal given by generators, with cached reduced Gröbner bases per order."""

    __slots__ = ("arity", "generators", "_gb")

    def __init__(self, arity, generators=()):
        self.arity = arity
        gens = []
        for g in generators:
            if not isinstance(g, Poly):
                raise TypeError("generators must be Poly")
            if g.arity != arity:
                raise ValueError("generator arity mismatch")
            if g:
                gens.append(g)
        self.generators = tuple(gens)
        self._gb = {}

    def groebner(self, order=GREVLEX, budget=DEFAULT_BUDGET):
        if order not in self._gb:
            self._gb[order] = tuple(groebner(self.generators, order, budget))
        return list(self._gb[order])

    def is_zero(self):
        return not self.generators

    def __repr__(self):
        return f"Ideal(arity={self.arity}, {len(self.generators)} generators)"


def eliminate(ideal, drop_first_k, budget=DEFAULT_BUDGET):
    """Generators of ideal ∩ K[x_{k+1}, ..] as an Ideal in arity - k variables."""
    k = drop_first_k
    if not 0 <= k < ideal.arity:
        raise ValueError("must keep at least one variable")
    if k == 0:
        return Ideal(ideal.arity, ideal.generators)
    gb = ideal.groebner(elimination_order(k), budget)
    kept = []
    for g in gb:
        if all(not any(m[:k]) for m in g.terms):
            kept.append(Poly(ideal.arity - k, {m[k:]: c for m, c in g.terms.items()}))
    return Ideal(ideal.arity - k, kept)


def ideal_member(f, ideal, budget=DEFAULT_BUDGET):
    if f.arity != ideal.arity:
        raise ValueError("arity mismatch")
    if not f:
        return True
    return not normal_form(f, ideal.groebner(GREVLEX, budget), GREVLEX, budget)


def ideal_equal(a, b, budget=DEFAULT_BUDGET):
    if a.arity != b.arity:
        raise ValueError("arity mismatch")
    return a.groebner(GREVLEX, budget) == b.groebner(GREVLEX, budget)


def substitute_linear(ideal, a_matrix):
    """Ideal of the image of V(ideal) under the coordinate change x -> A x.

    Each generator f becomes f(A^{-1} x); A must be square of size arity.
    """
    if a_matrix.rows != a_matrix.cols or a_matrix.rows != ideal.arity:
        raise ValueError("matrix size must match ideal arity")
    inv = a_matrix.inverse()  # raises SingularMatrix
    m = ideal.arity
    mapping = {}
    for i in range(m):
        terms = {}
        for j in range(m):
            c = inv[i, j]
            if c:
                mono = [0] * m
                mono[j] = 1
                terms[tuple(mono)] = c
        mapping[i] = Poly(m, terms)
    return Ideal(m, [g.subs(mapping) for g in ideal.generators])


# ---------------------------------------------------------------------------
# univariate helpers (arity-1 Poly)


def _uni_coeffs(p):
    d = p.total_degree()
    out = [ZERO] * (d + 1)
    for (e,), c in p.terms.items():
        out[e] = c
    return out


def uni_from_coeffs(coeffs):
    return Poly(1, {(i,): c for i, c in enumerate(coeffs) if c})


def uni_divmod(f, g):
    """Quotient and remainder for univariate f, g with g != 0."""
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    fc, gc = _uni_coeffs(f), _uni_coeffs(g)
    dg = len(gc) - 1
    lead = gc[-1]
    q = [ZERO] * max(0, len(fc) - dg)
    r = list(fc)
    while len(r) - 1 >= dg and any(r):
        while r and not r[-1]:
            r.pop()
        if len(r) - 1 < dg:
            break
        k = len(r) - 1 - dg
        factor = r[-1] / lead
        q[k] = factor
        for i, c in enumerate(gc):
            r[k + i] -= factor * c
    return uni_from_coeffs(q), uni_from_coeffs(r)


def uni_gcd(f, g):
    """Monic gcd of univariate polynomials."""
    a, b = f, g
    while b:
        a, b = b, uni_divmod(a, b)[1]
    if not a:
        return a
    lead = a.terms[max(a.terms)]
    return a * (ONE / lead)


def derivative(f, var=0):
    out = {}
    for m, c in f.terms.items():
        e = m[var]
        if e:
            m2 = list(m)
            m2[var] = e - 1
            out[tuple(m2)] = c * e
    return Poly(f.arity, out)
