"""The original exactly solvable (q-)Racah system on the grid x = 0..N.

Lattice coordinates are ints/Fractions for Racah.  For q-Racah every quantity
is a rational function of ``q**x``; a grid point may be given as an int, and an
off-grid point as :class:`QPoint`, which carries the (rational) value of
``q**x`` directly.  ``QPoint + k`` shifts the coordinate by k, so code that
reads ``f(x + 1)`` works for both families.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Union

import mpmath

from .params import (
    ParameterError,
    ParameterSet,
    d_tilde,
    frac,
    poch,
    poch_multi,
    qpoch,
    qpoch_multi,
    shift,
)


@dataclass(frozen=True)
class QPoint:
    """Lattice coordinate x of a q-Racah system, stored as z = q^x."""

    z: Fraction
    q: Fraction

    def __add__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return QPoint(self.z * self.q ** k, self.q)

    __radd__ = __add__

    def __sub__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return QPoint(self.z * self.q ** -k, self.q)

    def __str__(self):
        return f"q^x={self.z}"


Point = Union[int, Fraction, QPoint]


class SingularPointError(ZeroDivisionError):
    """A rational function was evaluated at a zero of its denominator."""


def qpoint(p: ParameterSet, z) -> QPoint:
    return QPoint(frac(z), p.q)


def zval(p: ParameterSet, x: Point) -> Fraction:
    """q^x for a q-Racah coordinate."""
    if isinstance(x, QPoint):
        if x.q != p.q:
            raise ParameterError("QPoint built for a different base q")
        return x.z
    x = frac(x)
    if x.denominator != 1:
        raise ParameterError("q^x is irrational for non-integer x; pass a QPoint")
    return p.q ** int(x)


def is_origin(p: ParameterSet, x: Point) -> bool:
    if isinstance(x, QPoint):
        return x.z == 1
    return frac(x) == 0


def reflect(p: ParameterSet, x: Point) -> Point:
    """x -> N - x."""
    if isinstance(x, QPoint):
        return QPoint(p.q ** p.N / x.z, p.q)
    return p.N - x


def involution(p: ParameterSet, x: Point) -> Point:
    """x -> -x-d (Racah) or q^x -> q^-x / d (q-Racah)."""
    if p.is_q:
        return QPoint(1 / (p.d * zval(p, x)), p.q)
    return -frac(x) - p.d


def off_grid_points(p: ParameterSet) -> list[Point]:
    if p.is_q:
        return [QPoint(frac(z), p.q) for z in ("1/3", "3/5", "5/7", "9/4", "11/3")]
    return [frac(x) for x in ("1/3", "1/2", "5/7", "9/4", "11/3")]


def _div(num: Fraction, den: Fraction, what: str) -> Fraction:
    if den == 0:
        raise SingularPointError(f"vanishing denominator in {what}")
    return num / den


# -- potentials -------------------------------------------------------------------

@lru_cache(maxsize=None)
def B(p: ParameterSet, x: Point) -> Fraction:
    a, b, c, d = p.lam
    if p.is_q:
        z = zval(p, x)
        num = -(1 - a * z) * (1 - b * z) * (1 - c * z) * (1 - d * z)
        return _div(num, (1 - d * z * z) * (1 - d * p.q * z * z), "B")
    x = frac(x)
    num = -(x + a) * (x + b) * (x + c) * (x + d)
    return _div(num, (2 * x + d) * (2 * x + 1 + d), "B")


@lru_cache(maxsize=None)
def D(p: ParameterSet, x: Point) -> Fraction:
    # D(0) = 0 through its explicit factor x (resp. 1 - q^x), even when the
    # denominator also vanishes there (d = 1, resp. d = q).
    if is_origin(p, x):
        return Fraction(0)
    a, b, c, d = p.lam
    if p.is_q:
        z = zval(p, x)
        q = p.q
        num = -d_tilde(p) * (1 - d * z / a) * (1 - d * z / b) * (1 - d * z / c) * (1 - z)
        return _div(num, (1 - d * z * z / q) * (1 - d * z * z), "D")
    x = frac(x)
    num = -(x + d - a) * (x + d - b) * (x + d - c) * x
    return _div(num, (2 * x - 1 + d) * (2 * x + d), "D")


@dataclass(frozen=True)
class GridFunction:
    """Exact values on x = 0..x_hi."""

    values: tuple[Fraction, ...]

    @property
    def x_hi(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, x: int) -> Fraction:
        if not 0 <= x <= self.x_hi:
            raise IndexError(f"grid index {x} outside 0..{self.x_hi}")
        return self.values[x]

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    @classmethod
    def tabulate(cls, f: Callable[[int], Fraction], x_hi: int) -> "GridFunction":
        return cls(tuple(f(x) for x in range(x_hi + 1)))


def potentials(p: ParameterSet, x_hi: int | None = None) -> tuple[GridFunction, GridFunction]:
    x_hi = p.N if x_hi is None else x_hi
    return (GridFunction.tabulate(lambda x: B(p, x), x_hi),
            GridFunction.tabulate(lambda x: D(p, x), x_hi))


# -- sinusoidal coordinate, energies ----------------------------------------------

def eta(p: ParameterSet, x: Point) -> Fraction:
    if p.is_q:
        z = zval(p, x)
        return (1 / z - 1) * (1 - p.d * z)
    x = frac(x)
    return x * (x + p.d)


def varphi_aux(p: ParameterSet, x: Point) -> Fraction:
    """(eta(x+1) - eta(x)) / eta(1) in closed form."""
    if p.is_q:
        z = zval(p, x)
        return (1 / z - p.d * p.q * z) / (1 - p.d * p.q)
    return (2 * frac(x) + p.d + 1) / (p.d + 1)


def energy(p: ParameterSet, n: int) -> Fraction:
    dt = d_tilde(p)
    if p.is_q:
        q = p.q
        return (q ** -n - 1) * (1 - dt * q ** n)
    return n * (n + dt)


# -- eigenpolynomials -------------------------------------------------------------

@lru_cache(maxsize=None)
def racah_poly(p: ParameterSet, n: int, x: Point) -> Fraction:
    """Terminating 4F3 / 4phi3 sum, normalised to 1 at x = 0."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    a, b, c, d = p.lam
    dt = d_tilde(p)
    total = Fraction(0)
    term = Fraction(1)
    if p.is_q:
        q = p.q
        z = zval(p, x)
        up = (q ** -n, dt * q ** n, 1 / z, d * z)
        down = (a, b, c, q)
        for k in range(n + 1):
            total += term
            num = Fraction(1)
            for u in up:
                num *= 1 - u * q ** k
            den = Fraction(1)
            for w in down:
                den *= 1 - w * q ** k
            if num == 0:
                break
            term = term * num * q / _check_den(den, p, n)
        return total
    x = frac(x)
    up = (-n, n + dt, -x, x + d)
    down = (a, b, c)
    for k in range(n + 1):
        total += term
        num = Fraction(1)
        for u in up:
            num *= u + k
        if num == 0:
            break
        den = Fraction(k + 1)
        for w in down:
            den *= w + k
        term = term * num / _check_den(den, p, n)
    return total


def _check_den(den: Fraction, p: ParameterSet, n: int) -> Fraction:
    if den == 0:
        raise ParameterError(f"degenerate lower parameters for degree {n} at {p.label()}")
    return den


def dual_value(p: ParameterSet, x: int, n: int) -> Fraction:
    """Q_x(E_n) = P_n(eta(x))."""
    return racah_poly(p, n, x)


def apply_difference_op(p: ParameterSet, f: Callable[[Point], Fraction], x: Point) -> Fraction:
    """B(x)(f(x) - f(x+1)) + D(x)(f(x) - f(x-1))."""
    fx = f(x)
    out = B(p, x) * (fx - f(x + 1))
    Dx = D(p, x)
    if Dx:
        out += Dx * (fx - f(x - 1))
    return out


# -- weights and norms -------------------------------------------------------------

def ground_weight_sq_product(p: ParameterSet, x_hi: int | None = None) -> GridFunction:
    """phi_0(x)^2 = prod_{y<x} B(y)/D(y+1)."""
    x_hi = p.N if x_hi is None else x_hi
    vals = [Fraction(1)]
    for y in range(x_hi):
        vals.append(vals[-1] * _div(B(p, y), D(p, y + 1), "phi0^2 product"))
    return GridFunction(tuple(vals))


def ground_weight_sq_closed(p: ParameterSet, x: int) -> Fraction:
    a, b, c, d = p.lam
    if p.is_q:
        q = p.q
        dt = d_tilde(p)
        num = qpoch_multi((a, b, c, d), q, x) * (1 - d * q ** (2 * x))
        den = qpoch_multi((d * q / a, d * q / b, d * q / c, q), q, x) * dt ** x * (1 - d)
        return _div(num, den, "phi0^2")
    num = poch_multi((a, b, c, d), x) * (2 * x + d)
    den = poch_multi((1 + d - a, 1 + d - b, 1 + d - c, 1), x) * d
    return _div(num, den, "phi0^2")


def ground_weight_sq(p: ParameterSet, x_hi: int | None = None) -> GridFunction:
    x_hi = p.N if x_hi is None else x_hi
    return GridFunction.tabulate(lambda x: ground_weight_sq_closed(p, x), x_hi)


def norm_sq(p: ParameterSet, n: int) -> Fraction:
    """d_n^2, so that sum_x phi0^2 P_n P_m = delta_nm / d_n^2."""
    a, b, c, d = p.lam
    dt = d_tilde(p)
    N = p.N
    if p.is_q:
        q = p.q
        first = (qpoch_multi((a, b, c, dt), q, n)
                 / (qpoch_multi((dt * q / a, dt * q / b, dt * q / c, q), q, n) * d ** n)
                 * (1 - dt * q ** (2 * n)) / (1 - dt))
        second = ((-1) ** N * qpoch_multi((d * q / a, d * q / b, d * q / c), q, N)
                  * dt ** N * q ** (N * (N + 1) // 2)
                  / (qpoch(dt * q, q, N) * qpoch(d * q, q, 2 * N)))
        return first * second
    first = (poch_multi((a, b, c, dt), n)
             / poch_multi((1 + dt - a, 1 + dt - b, 1 + dt - c, 1), n)
             * (2 * n + dt) / dt)
    second = ((-1) ** N * poch_multi((1 + d - a, 1 + d - b, 1 + d - c), N)
              / (poch(dt + 1, N) * poch(d + 1, 2 * N)))
    return first * second


def completeness_residuals(p: ParameterSet) -> list[Fraction]:
    """sum_n d_n^2 P_n(x) P_n(y) - delta_xy / phi0(x)^2 for all grid x, y."""
    N = p.N
    w = ground_weight_sq(p)
    dn = [norm_sq(p, n) for n in range(N + 1)]
    P = [[racah_poly(p, n, x) for x in range(N + 1)] for n in range(N + 1)]
    out = []
    for x in range(N + 1):
        for y in range(N + 1):
            s = sum(dn[n] * P[n][x] * P[n][y] for n in range(N + 1))
            out.append(s - (1 / w[x] if x == y else 0))
    return out


def orthonormal_matrix(p: ParameterSet, precision_bits: int = 256):
    """U[n][x] = d_n phi0(x) P_n(x) in floating point; U U^T should be the identity."""
    if not p.validated:
        raise ParameterError(f"{p.label()} is not validated; refusing to take square roots")
    ctx = mpmath.MPContext()
    ctx.prec = precision_bits
    N = p.N
    w = ground_weight_sq(p)
    U = ctx.matrix(N + 1, N + 1)
    for n in range(N + 1):
        dn = ctx.sqrt(mp_from_fraction(ctx, norm_sq(p, n)))
        for x in range(N + 1):
            U[n, x] = dn * ctx.sqrt(mp_from_fraction(ctx, w[x])) * mp_from_fraction(ctx, racah_poly(p, n, x))
    return ctx, U


# -- shift operators ---------------------------------------------------------------

def forward_shift(p: ParameterSet, f: Callable[[Point], Fraction], x: Point) -> Fraction:
    """F(lambda) f = B(0)/varphi(x) (f(x) - f(x+1))."""
    return B(p, 0) / varphi_aux(p, x) * (f(x) - f(x + 1))


def backward_shift(p: ParameterSet, f: Callable[[Point], Fraction], x: Point) -> Fraction:
    """B(lambda) f = (B(x) varphi(x) f(x) - D(x) varphi(x-1) f(x-1)) / B(0)."""
    out = B(p, x) * varphi_aux(p, x) * f(x)
    Dx = D(p, x)
    if Dx:
        out -= Dx * varphi_aux(p, x - 1) * f(x - 1)
    return out / B(p, 0)


def shift_forward(p: ParameterSet, n: int, x: Point) -> tuple[Fraction, Fraction]:
    """(F P_n(x; lambda), E_n P_{n-1}(x; lambda+delta))."""
    up = shift(p, 1)
    lhs = forward_shift(p, lambda y: racah_poly(p, n, y), x)
    return lhs, energy(p, n) * racah_poly(up, n - 1, x)


def shift_backward(p: ParameterSet, n: int, x: Point) -> tuple[Fraction, Fraction]:
    """(B P_{n-1}(x; lambda+delta), P_n(x; lambda))."""
    up = shift(p, 1)
    lhs = backward_shift(p, lambda y: racah_poly(up, n - 1, y), x)
    return lhs, racah_poly(p, n, x)


# -- high-precision Hamiltonian ----------------------------------------------------

@dataclass(frozen=True)
class TridiagonalMatrix:
    diagonal: tuple
    off_diagonal: tuple
    precision_bits: int

    def context(self) -> mpmath.MPContext:
        ctx = mpmath.MPContext()
        ctx.prec = self.precision_bits
        return ctx

    def dense(self, ctx=None):
        ctx = ctx or self.context()
        n = len(self.diagonal)
        m = ctx.matrix(n, n)
        for i, v in enumerate(self.diagonal):
            m[i, i] = v
        for i, v in enumerate(self.off_diagonal):
            m[i, i + 1] = v
            m[i + 1, i] = v
        return m

    def eigenvalues(self) -> list:
        ctx = self.context()
        vals = ctx.eigsy(self.dense(ctx), eigvals_only=True)
        return sorted(vals[i] for i in range(len(self.diagonal)))

    def matvec(self, vec: list) -> list:
        ctx = self.context()
        n = len(self.diagonal)
        out = []
        for i in range(n):
            s = self.diagonal[i] * vec[i]
            if i > 0:
                s += self.off_diagonal[i - 1] * vec[i - 1]
            if i < n - 1:
                s += self.off_diagonal[i] * vec[i + 1]
            out.append(ctx.mpf(s))
        return out


def mp_from_fraction(ctx: mpmath.MPContext, v: Fraction):
    return ctx.mpf(v.numerator) / v.denominator


def jacobi_matrix(Bg: GridFunction, Dg: GridFunction, precision_bits: int = 256) -> TridiagonalMatrix:
    """Symmetric form: diag B+D, off-diagonal -sqrt(B(x) D(x+1))."""
    ctx = mpmath.MPContext()
    ctx.prec = precision_bits
    n = len(Bg)
    diag = tuple(mp_from_fraction(ctx, Bg[x] + Dg[x]) for x in range(n))
    off = []
    for x in range(n - 1):
        prod = Bg[x] * Dg[x + 1]
        if prod < 0:
            raise ParameterError(f"negative B(x)D(x+1) at x={x}; parameters are not admissible")
        off.append(-ctx.sqrt(mp_from_fraction(ctx, prod)))
    return TridiagonalMatrix(diag, tuple(off), precision_bits)


def hamiltonian_matrix(p: ParameterSet, precision_bits: int = 256) -> TridiagonalMatrix:
    if not p.validated:
        raise ParameterError(f"{p.label()} is not validated; refusing to form sqrt entries")
    Bg, Dg = potentials(p)
    return jacobi_matrix(Bg, Dg, precision_bits)
