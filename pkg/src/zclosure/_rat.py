"""Rational scalar used everywhere: gmpy2.mpq when available, Fraction otherwise.

Both types keep fractions reduced with a positive denominator, expose
``.numerator``/``.denominator``, and print as ``p/q`` (or ``p`` when q = 1),
which is also the JSON wire format.
"""

from fractions import Fraction

try:
    from gmpy2 import mpq as RAT
except ImportError:  # pragma: no cover - exercised only without gmpy2
    RAT = Fraction

ZERO = RAT(0)
ONE = RAT(1)


def rat(x, y=None):
    """Coerce ints, strings like ``p/q``, Fractions, or RAT values to RAT."""
    if y is not None:
        return RAT(x, y)
    if isinstance(x, str):
        return RAT(Fraction(x))
    return RAT(x)


def height(q) -> int:
    """max(|numerator|, denominator) of a reduced fraction; height(0) = 1."""
    return max(abs(int(q.numerator)), int(q.denominator))
