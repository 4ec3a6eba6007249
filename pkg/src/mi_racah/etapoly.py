"""Exact polynomials in the sinusoidal coordinate: fitting and root counting."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .lattice import Point, SingularPointError


class NotPolynomialError(ValueError):
    """Hold-out nodes disagree with the interpolant."""


class BoundaryRootError(ValueError):
    """A root sits on an endpoint of the counting interval."""


def _trim(coeffs: list[Fraction]) -> list[Fraction]:
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


@dataclass(frozen=True)
class EtaPolynomial:
    """Coefficients in ascending powers of eta."""

    coeffs: tuple[Fraction, ...]
    declared_degree: int | None = None

    @property
    def degree(self) -> int:
        c = _trim(list(self.coeffs))
        return -1 if c == [0] else len(c) - 1

    @property
    def leading(self) -> Fraction:
        return _trim(list(self.coeffs))[-1]

    def __call__(self, y: Fraction) -> Fraction:
        out = Fraction(0)
        for c in reversed(self.coeffs):
            out = out * y + c
        return out

    def derivative(self) -> "EtaPolynomial":
        return EtaPolynomial(tuple(k * c for k, c in enumerate(self.coeffs))[1:] or (Fraction(0),))


def interpolate(ys: Sequence[Fraction], vals: Sequence[Fraction]) -> list[Fraction]:
    """Monomial coefficients of the interpolant through (ys[i], vals[i]) (Newton form)."""
    n = len(ys)
    if len(set(ys)) != n:
        raise ValueError("interpolation nodes must be distinct")
    dd = list(vals)
    for k in range(1, n):
        for i in range(n - 1, k - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (ys[i] - ys[i - k])
    coeffs = [Fraction(0)] * n
    # Horner-style expansion of the Newton form from the innermost term outwards
    for i in range(n - 1, -1, -1):
        shifted = [Fraction(0)] + coeffs[:-1]
        coeffs = [s - ys[i] * c for s, c in zip(shifted, coeffs)]
        coeffs[0] += dd[i]
    return _trim(coeffs)


def fit_eta_polynomial(func: Callable[[Point], Fraction], eta: Callable[[Point], Fraction],
                       nodes: Iterable[Point], declared_degree: int,
                       holdouts: int = 2) -> EtaPolynomial:
    """Interpolate func as a polynomial in eta and prove it on hold-out nodes.

    Nodes where func is singular, or whose eta value repeats, are skipped.
    The first declared_degree+1 usable nodes fix the interpolant; every further
    usable node (at least ``holdouts`` of them) must match exactly.
    """
    ys, vals = [], []
    for x in nodes:
        try:
            y = eta(x)
            if y in ys:
                continue
            v = func(x)
        except (SingularPointError, ZeroDivisionError):
            continue
        ys.append(y)
        vals.append(v)
    k = declared_degree + 1
    if len(ys) < k + holdouts:
        raise ValueError(f"only {len(ys)} usable nodes for degree {declared_degree} "
                         f"with {holdouts} hold-outs")
    poly = EtaPolynomial(tuple(interpolate(ys[:k], vals[:k])), declared_degree)
    for y, v in zip(ys[k:], vals[k:]):
        r = poly(y) - v
        if r != 0:
            raise NotPolynomialError(f"hold-out residual {r} at eta={y}")
    return poly


# -- Sturm sequences ---------------------------------------------------------------------

def _polyrem(num: list[Fraction], den: list[Fraction]) -> list[Fraction]:
    num = list(num)
    dl = len(den) - 1
    lead = den[-1]
    while len(num) - 1 >= dl and any(num):
        if num[-1] == 0:
            num.pop()
            continue
        f = num[-1] / lead
        off = len(num) - 1 - dl
        for i, c in enumerate(den):
            num[off + i] -= f * c
        num.pop()
    return _trim(num or [Fraction(0)])


def sturm_chain(poly: EtaPolynomial) -> list[list[Fraction]]:
    p0 = _trim(list(poly.coeffs))
    p1 = _trim(list(poly.derivative().coeffs))
    chain = [p0, p1]
    while len(chain[-1]) > 1:
        r = _polyrem(chain[-2], chain[-1])
        if r == [0]:
            break
        chain.append([-c for c in r])
    return chain


def _eval(c: list[Fraction], y: Fraction) -> Fraction:
    out = Fraction(0)
    for a in reversed(c):
        out = out * y + a
    return out


def _sign_changes(chain, y: Fraction) -> int:
    signs = [s for s in ((_eval(c, y) > 0) - (_eval(c, y) < 0) for c in chain) if s]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def count_roots(poly: EtaPolynomial, lo: Fraction, hi: Fraction) -> int:
    """Distinct real roots in the open interval (lo, hi)."""
    if poly.degree <= 0:
        if poly.degree < 0:
            raise ValueError("zero polynomial has infinitely many roots")
        return 0
    for end in (lo, hi):
        if poly(end) == 0:
            raise BoundaryRootError(f"root at interval endpoint {end}")
    chain = sturm_chain(poly)
    return _sign_changes(chain, lo) - _sign_changes(chain, hi)
