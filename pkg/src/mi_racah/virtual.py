"""Twisted potentials, virtual energies, virtual polynomials and the ratio nu."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .lattice import (
    B,
    D,
    GridFunction,
    Point,
    energy,
    ground_weight_sq_product,
    racah_poly,
    zval,
)
from .params import ParameterError, ParameterSet, frac, twist, virtual_index_set


class MarginError(ParameterError):
    """A recurrence hit a zero denominator before the requested grid end."""


def alpha(p: ParameterSet) -> Fraction:
    if p.is_q:
        return p.a * p.b / (p.d * p.q)
    return Fraction(1)


def alpha_prime(p: ParameterSet) -> Fraction:
    a, b, c, d = p.lam
    if p.is_q:
        return -(1 - c) * (1 - a * b / (d * p.q))
    return -c * (a + b - d - 1)


def B_prime(p: ParameterSet, x: Point) -> Fraction:
    return B(twist(p), x)


def D_prime(p: ParameterSet, x: Point) -> Fraction:
    return D(twist(p), x)


def twist_relation_residuals(p: ParameterSet) -> tuple[list[Fraction], list[Fraction]]:
    """(B+D - alpha(B'+D') - alpha', B(x)D(x+1) - alpha^2 B'(x)D'(x+1)) on the grid."""
    t = twist(p)
    al, alp = alpha(p), alpha_prime(p)
    diag = [B(p, x) + D(p, x) - al * (B(t, x) + D(t, x)) - alp for x in range(p.N + 1)]
    off = [B(p, x) * D(p, x + 1) - al * al * B(t, x) * D(t, x + 1) for x in range(p.N + 1)]
    return diag, off


def twisted_sign_violations(p: ParameterSet, M: int = 1) -> list[str]:
    """B' > 0 on 0..N+M-1, D' > 0 on 1..N and D'(0) = D'(N+1) = 0."""
    t = twist(p)
    N = p.N
    bad = [f"B'({x}) = {B(t, x)}" for x in range(N + M) if not B(t, x) > 0]
    bad += [f"D'({x}) = {D(t, x)}" for x in range(1, N + 1) if not D(t, x) > 0]
    bad += [f"D'({x}) = {D(t, x)}" for x in (0, N + 1) if D(t, x) != 0]
    return bad


def twisted_potentials(p: ParameterSet, M: int = 1) -> tuple[GridFunction, GridFunction]:
    """B' on 0..N+M and D' on 0..N+1."""
    t = twist(p)
    return (GridFunction.tabulate(lambda x: B(t, x), p.N + M),
            GridFunction.tabulate(lambda x: D(t, x), p.N + 1))


def twisted_energy(p: ParameterSet, v: int) -> Fraction:
    """E'_v = E_v of the twisted system."""
    return energy(twist(p), v)


def virtual_energy(p: ParameterSet, v: int) -> Fraction:
    """Closed form of alpha E'_v + alpha'."""
    a, b, c, d = p.lam
    if p.is_q:
        q = p.q
        return -(1 - c * q ** v) * (1 - a * b / d * q ** (-1 - v))
    return -(c + v) * (a + b - d - 1 - v)


@lru_cache(maxsize=None)
def xi_poly(p: ParameterSet, v: int, x: Point) -> Fraction:
    """Virtual polynomial by its own terminating sum (lower parameters d-a+1, d-b+1, c)."""
    if v < 0:
        raise ValueError("virtual index must be non-negative")
    a, b, c, d = p.lam
    total = Fraction(0)
    term = Fraction(1)
    if p.is_q:
        q = p.q
        z = zval(p, x)
        up = (q ** -v, c * d * q ** (v + 1) / (a * b), 1 / z, d * z)
        down = (d * q / a, d * q / b, c, q)
        for k in range(v + 1):
            total += term
            num = Fraction(1)
            for u in up:
                num *= 1 - u * q ** k
            if num == 0:
                break
            den = Fraction(1)
            for w in down:
                den *= 1 - w * q ** k
            if den == 0:
                raise ParameterError(f"degenerate virtual polynomial v={v} at {p.label()}")
            term = term * num * q / den
        return total
    x = frac(x)
    up = (-v, v - a - b + c + d + 1, -x, x + d)
    down = (d - a + 1, d - b + 1, c)
    for k in range(v + 1):
        total += term
        num = Fraction(1)
        for u in up:
            num *= u + k
        if num == 0:
            break
        den = Fraction(k + 1)
        for w in down:
            den *= w + k
        if den == 0:
            raise ParameterError(f"degenerate virtual polynomial v={v} at {p.label()}")
        term = term * num / den
    return total


def xi_via_twist(p: ParameterSet, v: int, x: Point) -> Fraction:
    return racah_poly(twist(p), v, x)


def xi_grid(p: ParameterSet, v: int, x_hi: int | None = None) -> GridFunction:
    x_hi = p.N + 1 if x_hi is None else x_hi
    return GridFunction.tabulate(lambda x: xi_poly(p, v, x), x_hi)


# -- nu ----------------------------------------------------------------------------

def nu_step(p: ParameterSet, x: int) -> Fraction:
    """nu(x+1)/nu(x) = B(x)/(alpha B'(x)) with the common factors cancelled.

    The cancelled form agrees with the quotient wherever the latter is defined
    and also fixes the value at the removable point x = -1 when d = 1 (resp. q).
    """
    a, b, c, d = p.lam
    if p.is_q:
        z = zval(p, x)
        q = p.q
        num = (1 - a * z) * (1 - b * z)
        den = alpha(p) * (1 - d * q * z / a) * (1 - d * q * z / b)
    else:
        num = (x + a) * (x + b)
        den = (x + d - a + 1) * (x + d - b + 1)
    if den == 0:
        raise MarginError(f"B'({x}) vanishes; nu cannot be continued past x={x}")
    return num / den


@lru_cache(maxsize=None)
def _nu_values(p: ParameterSet, x_hi: int) -> tuple[Fraction, ...]:
    vals = [Fraction(1)]
    for x in range(x_hi):
        vals.append(vals[-1] * nu_step(p, x))
    return tuple(vals)


def nu_grid(p: ParameterSet, x_hi: int) -> GridFunction:
    return GridFunction(_nu_values(p, x_hi))


def nu(p: ParameterSet, x: int) -> Fraction:
    """nu at an integer point; negative points use the backward recurrence."""
    if not isinstance(x, int):
        raise ParameterError("nu is only tabulated at integer points")
    if x >= 0:
        return _nu_values(p, x)[x]
    val = Fraction(1)
    for y in range(-1, x - 1, -1):
        step = nu_step(p, y)
        if step == 0:
            raise MarginError(f"nu is singular at x={y}")
        val /= step
    return val


def nu_backward_check(p: ParameterSet, x_hi: int) -> bool:
    """nu(x-1) = D(x)/(alpha D'(x)) nu(x), checked where D'(x) != 0."""
    g = nu_grid(p, x_hi)
    t = twist(p)
    al = alpha(p)
    for x in range(1, x_hi + 1):
        Dp = D(t, x)
        if Dp == 0:
            continue
        if g[x - 1] != D(p, x) / (al * Dp) * g[x]:
            return False
    return True


def twisted_ground_weight_sq(p: ParameterSet, x_hi: int | None = None) -> GridFunction:
    """phi~0^2 = prod B'(y)/D'(y+1)."""
    return ground_weight_sq_product(twist(p), p.N if x_hi is None else x_hi)


# -- virtual equation -----------------------------------------------------------------

def virtual_residual(p: ParameterSet, v: int, x: Point, truncated: bool = True) -> Fraction:
    """Residual of the polynomial-level twisted equation for xi_v.

    With ``truncated`` the x+1 neighbour is dropped at x = N, matching the
    finite matrix; the residual there is B'(N) xi_v(N+1).
    """
    t = twist(p)
    f = lambda y: xi_poly(p, v, y)
    fx = f(x)
    Bp = B(t, x)
    out = Bp * fx
    if not (truncated and isinstance(x, int) and x == p.N):
        out -= Bp * f(x + 1)
    Dp = D(t, x)
    if Dp:
        out += Dp * (fx - f(x - 1))
    return out - twisted_energy(p, v) * fx


@dataclass(frozen=True)
class VirtualData:
    params: ParameterSet
    alpha: Fraction
    alpha_prime: Fraction
    v_set: tuple[int, ...]
    xi_grids: dict
    nu_grid: GridFunction

    @classmethod
    def build(cls, p: ParameterSet, M: int = 1) -> "VirtualData":
        vs = tuple(virtual_index_set(p))
        return cls(p, alpha(p), alpha_prime(p), vs,
                   {v: xi_grid(p, v) for v in vs}, nu_grid(p, p.N + M))

