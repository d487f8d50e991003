"""Exact representation of astronomically large bound values.

A TowerNumber is an exact positive real: either a rational, or a symbolic
power / factorial / product / sum over other TowerNumbers.  Nodes collapse
to exact rationals whenever the result stays below a configurable bit-length
threshold.  Comparisons first try exact values and structural monotone
reduction (shared subtrees cancel), then fall back to rational interval
bounds of iterated base-2 logarithms at a stored precision.

The module also provides exact rational upper/lower bounds for ln and log2
of rationals, used by the Masser-style formulas.
"""

import math
import sys
from fractions import Fraction

from ._rat import RAT, rat

# exact values legitimately reach hundreds of thousands of digits
if hasattr(sys, "set_int_max_str_digits"):
    if sys.get_int_max_str_digits() < 3_000_000:
        sys.set_int_max_str_digits(3_000_000)

__all__ = [
    "TowerNumber",
    "tower_exact",
    "tower_pow",
    "tower_fact",
    "tower_mul",
    "tower_add",
    "tower_max",
    "tower_cmp",
    "ln_bounds",
    "log2_bounds",
    "DEFAULT_EXACT_BITS",
]

DEFAULT_EXACT_BITS = 10**6

_F = Fraction  # interval endpoints stay in Fraction for exactness bookkeeping


def _frac(x):
    return Fraction(int(x.numerator), int(x.denominator)) if not isinstance(x, Fraction) else x


def _round_down(x: _F, bits: int) -> _F:
    scale = 1 << bits
    return _F(math.floor(x * scale), scale)


def _round_up(x: _F, bits: int) -> _F:
    scale = 1 << bits
    return _F(math.ceil(x * scale), scale)


def _atanh_bounds(u: _F, bits: int):
    """Bounds of atanh(u) for 0 <= u < 1/2, by series with tail majorant."""
    if u == 0:
        return _F(0), _F(0)
    u2 = u * u
    term = u
    total = _F(0)
    k = 0
    tol = _F(1, 1 << (bits + 4))
    while True:
        total += term / (2 * k + 1)
        term *= u2
        k += 1
        # tail <= term/(2k+1) * 1/(1 - u^2)
        tail = term / ((2 * k + 1) * (1 - u2))
        if tail < tol:
            return total, total + tail


_LN2_CACHE = {}


def _ln2_bounds(bits: int):
    if bits not in _LN2_CACHE:
        lo, hi = _atanh_bounds(_F(1, 3), bits + 4)
        _LN2_CACHE[bits] = (2 * lo, 2 * hi)
    return _LN2_CACHE[bits]


def _floor_log2(q: _F) -> int:
    """Largest e with 2^e <= q, for q > 0."""
    e = q.numerator.bit_length() - q.denominator.bit_length()
    if _F(2) ** e > q:
        e -= 1
    if _F(2) ** (e + 1) <= q:
        e += 1
    return e


def ln_bounds(q, bits: int = 64):
    """(lo, hi) Fractions with lo <= ln(q) <= hi, for rational q > 0."""
    q = _frac(_frac_of(q))
    if q <= 0:
        raise ValueError("log of a non-positive value")
    if q == 1:
        return _F(0), _F(0)
    e = _floor_log2(q)
    m = q / _F(2) ** e  # in [1, 2)
    # round the mantissa to dyadic precision before the series
    m_lo = _round_down(m, bits + 8)
    m_hi = _round_up(m, bits + 8)
    a_lo, _ = _atanh_bounds((m_lo - 1) / (m_lo + 1), bits)
    _, a_hi = _atanh_bounds((m_hi - 1) / (m_hi + 1), bits)
    ln2_lo, ln2_hi = _ln2_bounds(bits)
    if e >= 0:
        lo = e * ln2_lo + 2 * a_lo
        hi = e * ln2_hi + 2 * a_hi
    else:
        lo = e * ln2_hi + 2 * a_lo
        hi = e * ln2_lo + 2 * a_hi
    return _round_down(lo, bits), _round_up(hi, bits)


def log2_bounds(q, bits: int = 64):
    """(lo, hi) Fractions with lo <= log2(q) <= hi; exact on powers of two."""
    q = _frac(_frac_of(q))
    if q <= 0:
        raise ValueError("log of a non-positive value")
    e = _floor_log2(q)
    if _F(2) ** e == q:
        return _F(e), _F(e)
    lo, hi = ln_bounds(q, bits + 8)
    ln2_lo, ln2_hi = _ln2_bounds(bits + 8)
    # q > 0, q != power of 2; sign of ln(q) decides which endpoints pair up
    cands = [lo / ln2_lo, lo / ln2_hi, hi / ln2_lo, hi / ln2_hi]
    return _round_down(min(cands), bits), _round_up(max(cands), bits)


def _frac_of(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(int(x.numerator), int(x.denominator))


# ---------------------------------------------------------------------------
# TowerNumber


class TowerNumber:
    """Immutable positive value: exact rational or symbolic tower node.

    kind is one of "exact", "pow", "factorial", "mul", "add".  Use the
    tower_* constructors; they canonicalize and collapse to exact form when
    the result fits in ``exact_bits`` bits.
    """

    __slots__ = ("kind", "value", "base", "exp", "arg", "coeff", "factors", "const", "terms", "_key")

    def __init__(self, kind, **fields):
        object.__setattr__(self, "kind", kind)
        for name in ("value", "base", "exp", "arg", "coeff", "factors", "const", "terms"):
            object.__setattr__(self, name, fields.get(name))
        object.__setattr__(self, "_key", None)

    def __setattr__(self, name, value):
        raise AttributeError("TowerNumber is immutable")

    @property
    def is_exact(self):
        return self.kind == "exact"

    def key(self):
        if self._key is None:
            if self.kind == "exact":
                k = ("e", self.value)
            elif self.kind == "pow":
                k = ("p", self.base.key(), self.exp.key())
            elif self.kind == "factorial":
                k = ("f", self.arg.key())
            elif self.kind == "mul":
                k = ("m", self.coeff, tuple(sorted(f.key() for f in self.factors)))
            else:
                k = ("a", self.const, tuple(sorted(t.key() for t in self.terms)))
            object.__setattr__(self, "_key", k)
        return self._key

    def __eq__(self, other):
        if isinstance(other, int):
            other = tower_exact(other)
        return isinstance(other, TowerNumber) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __lt__(self, other):
        return tower_cmp(self, _coerce(other)) < 0

    def __le__(self, other):
        return tower_cmp(self, _coerce(other)) <= 0

    def __gt__(self, other):
        return tower_cmp(self, _coerce(other)) > 0

    def __ge__(self, other):
        return tower_cmp(self, _coerce(other)) >= 0

    def __mul__(self, other):
        return tower_mul(self, _coerce(other))

    def __rmul__(self, other):
        return tower_mul(_coerce(other), self)

    def __add__(self, other):
        return tower_add(self, _coerce(other))

    def __radd__(self, other):
        return tower_add(_coerce(other), self)

    def __repr__(self):
        return f"TowerNumber({self.pretty()})"

    def pretty(self):
        """Human rendering with the up-arrow power notation."""
        if self.kind == "exact":
            v = self.value
            if v.denominator == 1 and v.numerator.bit_length() > 80:
                return f"~2^{v.numerator.bit_length() - 1}"
            return str(v)

        def wrap(t):
            s = t.pretty()
            return f"({s})" if t.kind in ("mul", "add") or ("↑" in s or "!" in s) else s

        if self.kind == "pow":
            return f"{wrap(self.base)}↑{wrap(self.exp)}"
        if self.kind == "factorial":
            return f"{wrap(self.arg)}!"
        if self.kind == "mul":
            bits = [wrap(f) for f in self.factors]
            if self.coeff != 1:
                bits = [str(self.coeff)] + bits
            return "·".join(bits)
        bits = [t.pretty() for t in self.terms]
        if self.const:
            bits.append(str(self.const))
        return " + ".join(bits)


def _coerce(x):
    if isinstance(x, TowerNumber):
        return x
    return tower_exact(x)


def tower_exact(v):
    v = _frac_of(v if not isinstance(v, str) else Fraction(v))
    if v < 0:
        raise ValueError("TowerNumber values are nonnegative")
    return TowerNumber("exact", value=v)


def _frac_bits(v: Fraction) -> int:
    return max(v.numerator.bit_length(), v.denominator.bit_length())


def _pow_bits_estimate(base: Fraction, exp: Fraction):
    """Upper estimate of the bit length of base**exp; None when unbounded."""
    if exp.denominator != 1:
        return None
    e = exp.numerator
    if e < 0:
        return None
    return e * max(1, _frac_bits(base)) + 1


def tower_pow(base, exp, exact_bits=None):
    base, exp = _coerce(base), _coerce(exp)
    limit = DEFAULT_EXACT_BITS if exact_bits is None else exact_bits
    if exp.is_exact and exp.value == 0:
        return tower_exact(1)
    if exp.is_exact and exp.value == 1:
        return base
    if base.is_exact and base.value == 1:
        return tower_exact(1)
    if base.is_exact and exp.is_exact and exp.value.denominator == 1:
        est = _pow_bits_estimate(base.value, exp.value)
        if est is not None and est <= limit:
            return tower_exact(base.value ** int(exp.value))
    return TowerNumber("pow", base=base, exp=exp)


def tower_fact(arg, exact_bits=None):
    arg = _coerce(arg)
    limit = DEFAULT_EXACT_BITS if exact_bits is None else exact_bits
    if arg.is_exact and arg.value.denominator == 1:
        n = int(arg.value)
        # bit length of n! is about n log2(n/e); cheap upper estimate n*bits(n)
        if n <= 2 or n * n.bit_length() <= limit:
            return tower_exact(math.factorial(n))
    return TowerNumber("factorial", arg=arg)


def tower_mul(*xs, exact_bits=None):
    limit = DEFAULT_EXACT_BITS if exact_bits is None else exact_bits
    coeff = Fraction(1)
    factors = []
    for x in xs:
        x = _coerce(x)
        if x.is_exact:
            coeff *= x.value
        elif x.kind == "mul":
            coeff *= x.coeff
            factors.extend(x.factors)
        else:
            factors.append(x)
    if not factors:
        return tower_exact(coeff)
    factors.sort(key=lambda f: f.key())
    if coeff == 1 and len(factors) == 1:
        return factors[0]
    if coeff <= 0:
        raise ValueError("TowerNumber values are positive")
    return TowerNumber("mul", coeff=coeff, factors=tuple(factors))


def tower_add(*xs, exact_bits=None):
    const = Fraction(0)
    terms = []
    for x in xs:
        x = _coerce(x)
        if x.is_exact:
            const += x.value
        elif x.kind == "add":
            const += x.const
            terms.extend(x.terms)
        else:
            terms.append(x)
    if not terms:
        return tower_exact(const)
    terms.sort(key=lambda t: t.key())
    if const == 0 and len(terms) == 1:
        return terms[0]
    return TowerNumber("add", const=const, terms=tuple(terms))


def tower_max(a, b, bits=128):
    return a if tower_cmp(a, b, bits) >= 0 else b


# ---------------------------------------------------------------------------
# comparison: structural monotone reduction, then leveled log intervals

_FIT_CAP = Fraction(2) ** 256
_NEG_SENTINEL = -(Fraction(2) ** 300)


def tower_cmp(a, b, bits: int = 128) -> int:
    """-1, 0, or 1; 0 means equal or indistinguishable at this precision."""
    a, b = _coerce(a), _coerce(b)
    if a.key() == b.key():
        return 0
    if a.is_exact and b.is_exact:
        return -1 if a.value < b.value else (1 if a.value > b.value else 0)
    structural = _cmp_structural(a, b, bits)
    if structural is not None:
        return structural
    for attempt_bits in (bits, 2 * bits, 4 * bits):
        decided = _cmp_intervals(a, b, attempt_bits)
        if decided is not None:
            return decided
    return 0


def _cmp_structural(a, b, bits):
    # identical operation with one shared operand: descend monotonically
    if a.kind == "pow" and b.kind == "pow":
        if a.base.key() == b.base.key() and _definitely_ge(a.base, 2, bits):
            return tower_cmp(a.exp, b.exp, bits)
        if a.exp.key() == b.exp.key() and _definitely_ge(a.exp, 1, bits):
            return tower_cmp(a.base, b.base, bits)
    if a.kind == "factorial" and b.kind == "factorial":
        return tower_cmp(a.arg, b.arg, bits)
    if a.kind == "mul" or b.kind == "mul":
        ca, fa = _mul_parts(a)
        cb, fb = _mul_parts(b)
        shared = _multiset_intersection(fa, fb)
        if shared:
            # shared factors are positive, so they cancel from both sides
            fa = _multiset_subtract(fa, shared)
            fb = _multiset_subtract(fb, shared)
            return tower_cmp(
                tower_mul(tower_exact(ca), *fa),
                tower_mul(tower_exact(cb), *fb),
                bits,
            )
        if ca == cb and len(fa) == 1 and len(fb) == 1:
            return tower_cmp(fa[0], fb[0], bits)
    if a.kind == "add" or b.kind == "add":
        ca, ta = _add_parts(a)
        cb, tb = _add_parts(b)
        shared = _multiset_intersection(ta, tb)
        if shared:
            # cancel shared terms; shift constants to keep both sides positive
            ta = _multiset_subtract(ta, shared)
            tb = _multiset_subtract(tb, shared)
            base = min(ca, cb) - 1
            return tower_cmp(
                tower_add(tower_exact(ca - base), *ta),
                tower_add(tower_exact(cb - base), *tb),
                bits,
            )
        if ca == cb and len(ta) == 1 and len(tb) == 1:
            return tower_cmp(ta[0], tb[0], bits)
    return None


def _mul_parts(t):
    if t.kind == "mul":
        return t.coeff, list(t.factors)
    if t.is_exact:
        return t.value, []
    return Fraction(1), [t]


def _add_parts(t):
    if t.kind == "add":
        return t.const, list(t.terms)
    if t.is_exact:
        return t.value, []
    return Fraction(0), [t]


def _multiset_intersection(xs, ys):
    out = []
    remaining = list(ys)
    for x in xs:
        for i, y in enumerate(remaining):
            if x.key() == y.key():
                out.append(x)
                del remaining[i]
                break
    return out


def _multiset_subtract(xs, shared):
    out = list(xs)
    for s in shared:
        for i, x in enumerate(out):
            if x.key() == s.key():
                del out[i]
                break
    return out


def _definitely_ge(t, threshold, bits):
    lv = _lval(t, bits)
    if lv is None:
        return False
    k, lo, hi = lv
    if k == 0:
        return lo >= threshold
    return lo >= 1  # any value whose log tower is still >= 1 is huge


# leveled interval: (k, lo, hi) bounds log2^k(value); k = 0 bounds the value


def _lval(t, bits):
    try:
        return _lval_inner(t, bits, depth=0)
    except (OverflowError, ValueError):
        return None


def _lift(lv, bits):
    """Apply one more log2 to a leveled interval."""
    k, lo, hi = lv
    if lo <= 0:
        return (k + 1, _NEG_SENTINEL, log2_bounds(hi, bits)[1] if hi > 0 else _NEG_SENTINEL)
    return (k + 1, log2_bounds(lo, bits)[0], log2_bounds(hi, bits)[1])


def _normalize(lv, bits):
    k, lo, hi = lv
    while hi > _FIT_CAP:
        k, lo, hi = _lift((k, lo, hi), bits)
    return (k, _round_down(lo, bits) if lo > _NEG_SENTINEL else lo, _round_up(hi, bits))


def _lval_inner(t, bits, depth):
    if depth > 12:
        raise ValueError("tower too deep for interval comparison")
    if t.is_exact:
        return _normalize((0, _frac(t.value), _frac(t.value)), bits)
    if t.kind == "pow":
        lb = _lval_inner(t.base, bits, depth + 1)
        le = _lval_inner(t.exp, bits, depth + 1)
        # log2(b^e) = e * log2(b)
        log_b = _log_of_lval(lb, bits)
        prod = _lval_mul(le, log_b, bits, depth)
        return _shift_up(prod, bits)
    if t.kind == "factorial":
        la = _lval_inner(t.arg, bits, depth + 1)
        log_a = _log_of_lval(la, bits)
        # (n/e)^n <= n! <= n^n: log2(n!) in [n (log2 n - log2 e), n log2 n]
        if log_a[0] == 0:
            ln2_lo, ln2_hi = _ln2_bounds(bits)
            log2e_hi = 1 / ln2_lo
            low_mult = (0, log_a[1] - log2e_hi, log_a[2] - log2e_hi)
            if low_mult[1] <= 0:
                raise ValueError("factorial of a small symbolic argument")
        else:
            # log2 n is astronomically large; log2^k(log2 n - 1.45) loses
            # at most 1 at the first level and less further up
            low_mult = (log_a[0], log_a[1] - 1, log_a[2])
        low = _lval_mul(la, low_mult, bits, depth)
        high = _lval_mul(la, log_a, bits, depth)
        merged = _merge_lo_hi(low, high, bits)
        return _shift_up(merged, bits)
    if t.kind == "mul":
        parts = [_log_of_lval(_lval_inner(f, bits, depth + 1), bits) for f in t.factors]
        if t.coeff != 1:
            c = log2_bounds(t.coeff, bits)
            parts.append((0, c[0], c[1]))
        total = parts[0]
        for p in parts[1:]:
            total = _lval_add(total, p, bits)
        return _shift_up(total, bits)
    # add
    parts = [_lval_inner(x, bits, depth + 1) for x in t.terms]
    if t.const:
        parts.append((0, _frac(t.const), _frac(t.const)))
    total = parts[0]
    for p in parts[1:]:
        total = _value_add(total, p, bits)
    return total


def _log_of_lval(lv, bits):
    """Leveled interval of log2(x) given one of x."""
    k, lo, hi = lv
    if k >= 1:
        return (k - 1, lo, hi)
    if lo <= 0:
        raise ValueError("log of a non-positive interval")
    return _normalize((0, log2_bounds(lo, bits)[0], log2_bounds(hi, bits)[1]), bits)


def _shift_up(lv, bits):
    """x -> 2^x at the level bookkeeping: bounds of log2^k(v) become level k+1."""
    k, lo, hi = lv
    if k == 0 and hi <= 256:
        # small exponent: materialize 2^interval at level 0
        return _normalize(
            (0, Fraction(2) ** math.floor(lo), Fraction(2) ** math.ceil(hi)), bits
        )
    return (k + 1, lo, hi)


def _common_level(u, v, bits):
    while u[0] < v[0]:
        u = _lift(u, bits)
    while v[0] < u[0]:
        v = _lift(v, bits)
    return u, v


def _lval_add(u, v, bits):
    """Sum of two leveled intervals interpreted as plain values."""
    u, v = _common_level(u, v, bits)
    k = u[0]
    if k == 0:
        return _normalize((0, u[1] + v[1], u[2] + v[2]), bits)
    big, small = (u, v) if u[1] >= v[1] else (v, u)
    lo = big[1]
    if small[2] <= big[1] - 1:
        # dominated summand: the +1 of x+y <= 2x happens at level 1 and
        # shrinks through each further log; for huge towers it is negligible
        if k >= 3 and big[1] >= 2:
            return (k, lo, big[2] + Fraction(1, 1 << 20))
        if k == 2 and big[1] >= 30:
            return (k, lo, big[2] + Fraction(1, 1 << 20))
    return (k, lo, max(u[2], v[2]) + 1)


def _value_add(u, v, bits):
    return _lval_add(u, v, bits)


def _lval_mul(u, v, bits, depth):
    """Product of two leveled intervals interpreted as plain values."""
    if u[0] == 0 and v[0] == 0:
        cands = [u[1] * v[1], u[1] * v[2], u[2] * v[1], u[2] * v[2]]
        return _normalize((0, min(cands), max(cands)), bits)
    lu = _log_of_lval(u, bits)
    lv = _log_of_lval(v, bits)
    return _shift_up(_lval_add(lu, lv, bits), bits)


def _merge_lo_hi(low, high, bits):
    low2, high2 = _common_level(low, high, bits)
    return (low2[0], low2[1], high2[2])


def _cmp_intervals(a, b, bits):
    la = _lval(a, bits)
    lb = _lval(b, bits)
    if la is None or lb is None:
        return None
    la, lb = _common_level(la, lb, bits)
    if la[2] < lb[1]:
        return -1
    if lb[2] < la[1]:
        return 1
    return None
