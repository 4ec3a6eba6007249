"""Independent reference evaluations with sympy, sharing no code with the package."""
import sympy as sp
from sympy import rf


def racah(n, x, a, b, c, d):
    dt = a + b + c - d - 1
    return sum(rf(-n, k) * rf(n + dt, k) * rf(-x, k) * rf(x + d, k)
               / (rf(a, k) * rf(b, k) * rf(c, k) * sp.factorial(k)) for k in range(n + 1))


def qpoch(a, q, k):
    out = sp.Integer(1)
    for j in range(k):
        out *= 1 - a * q**j
    return out


def qracah(n, z, a, b, c, d, q):
    dt = a * b * c / (d * q)
    return sum(qpoch(q**-n, q, k) * qpoch(dt * q**n, q, k) * qpoch(1 / z, q, k)
               * qpoch(d * z, q, k) * q**k
               / (qpoch(a, q, k) * qpoch(b, q, k) * qpoch(c, q, k) * qpoch(q, q, k))
               for k in range(n + 1))


def to_sympy(v):
    return sp.Rational(v.numerator, v.denominator)
