from fractions import Fraction

import pytest

from vermajw.qfield import WeightExpr

MU = [None] + [WeightExpr.symbol(j) for j in range(1, 6)]

# Generic rational evaluation point for numeric oracles.
Q0 = Fraction(3, 7)
T0 = (Fraction(5, 2), Fraction(-4, 3), Fraction(7, 5), Fraction(11, 9))


def qnum(w, q=Q0, ts=T0):
    """[w] evaluated numerically, from its defining quotient; ts[j-1] plays q^{mu_j}."""
    qw = Fraction(q) ** w.offset
    for j, a in w.sym_coeffs.items():
        qw *= Fraction(ts[j - 1]) ** a
    return (qw - 1 / qw) / (q - 1 / q)


@pytest.fixture
def mu():
    return MU
