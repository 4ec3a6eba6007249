"""Exact determinants, Casoratians and the auxiliary product varphi_M."""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .lattice import Point, eta, varphi_aux
from .params import ParameterSet

Func = Callable[[Point], Fraction]


def det(matrix: Sequence[Sequence[Fraction]]) -> Fraction:
    """Determinant by fraction-free (Bareiss) elimination with row pivoting."""
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    m = [[Fraction(v) for v in row] for row in matrix]
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) / prev
            m[i][k] = Fraction(0)
        prev = pivot
    return sign * m[n - 1][n - 1]


def casoratian_matrix(funcs: Sequence[Func], x: Point) -> list[list[Fraction]]:
    """Rows j = 0..n-1 hold f_k(x + j)."""
    n = len(funcs)
    return [[f(x + j) for f in funcs] for j in range(n)]


def casoratian(funcs: Sequence[Func], x: Point) -> Fraction:
    """W[f_1..f_n](x) = det(f_k(x + j - 1)); the empty Casoratian is 1."""
    return det(casoratian_matrix(funcs, x))


def casoratian_func(funcs: Sequence[Func]) -> Func:
    funcs = tuple(funcs)
    return lambda x: casoratian(funcs, x)


def scale(g: Func, f: Func) -> Func:
    return lambda x: g(x) * f(x)


def varphi_M(p: ParameterSet, M: int, x: Point) -> Fraction:
    """prod_{j<k<=M} (eta(x+k-1) - eta(x+j-1)) / eta(k-j)."""
    out = Fraction(1)
    for k in range(2, M + 1):
        for j in range(1, k):
            out *= (eta(p, x + (k - 1)) - eta(p, x + (j - 1))) / eta(p, k - j)
    return out


def _delta_shift(p: ParameterSet, k: int) -> ParameterSet:
    # lambda + k*delta without touching N (only eta-type data is read)
    if p.is_q:
        return p.with_lam(*(v * p.q ** k for v in p.lam))
    return p.with_lam(*(v + k for v in p.lam))


def varphi_M_product(p: ParameterSet, M: int, x: Point) -> Fraction:
    """Second form: prod_{j<k} varphi(x+j-1; lambda+(k-j-1)delta)."""
    out = Fraction(1)
    for k in range(2, M + 1):
        for j in range(1, k):
            out *= varphi_aux(_delta_shift(p, k - j - 1), x + (j - 1))
    return out
