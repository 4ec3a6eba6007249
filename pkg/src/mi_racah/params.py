"""Parameter sets of the (q-)Racah systems and the maps acting on them.

All scalars are :class:`fractions.Fraction`.  A Racah set stores the additive
parameters ``(a, b, c, d)``; a q-Racah set stores the multiplicative ones
``(a, b, c, d) = q**lambda`` together with the base ``q``.  Every parameter
map (twist, shifts, mirror) is written directly in the multiplicative form for
q-Racah, so no logarithms or exponent bookkeeping are ever required.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import NamedTuple, Sequence

RACAH = "racah"
QRACAH = "qracah"
FAMILIES = (RACAH, QRACAH)


class ParameterError(ValueError):
    """Raised for inconsistent or out-of-range parameter sets."""


def frac(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction (never floats)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"refusing to convert {type(value).__name__} to an exact scalar")


# -- Pochhammer kernels -------------------------------------------------------

def poch(a, k: int) -> Fraction:
    """Rising factorial (a)_k = a(a+1)...(a+k-1)."""
    a = frac(a)
    out = Fraction(1)
    for j in range(k):
        out *= a + j
    return out


def qpoch(a, q, k: int) -> Fraction:
    """q-shifted factorial (a;q)_k = prod_{j<k} (1 - a q^j)."""
    a, q = frac(a), frac(q)
    out = Fraction(1)
    t = a
    for _ in range(k):
        out *= 1 - t
        t *= q
    return out


def poch_multi(args: Sequence, k: int) -> Fraction:
    out = Fraction(1)
    for a in args:
        out *= poch(a, k)
    return out


def qpoch_multi(args: Sequence, q, k: int) -> Fraction:
    out = Fraction(1)
    for a in args:
        out *= qpoch(a, q, k)
    return out


# -- shift vectors ------------------------------------------------------------

@dataclass(frozen=True)
class ShiftVector:
    """``kind`` is ``"delta"`` = (1,1,1,1) or ``"delta_tilde"`` = (0,0,1,1)."""

    kind: str
    multiple: int = 1

    def __post_init__(self):
        if self.kind not in ("delta", "delta_tilde"):
            raise ValueError(f"unknown shift kind {self.kind!r}")

    @property
    def components(self) -> tuple[int, int, int, int]:
        k = self.multiple
        return (k, k, k, k) if self.kind == "delta" else (0, 0, k, k)


def delta(k: int = 1) -> ShiftVector:
    return ShiftVector("delta", k)


def delta_tilde(k: int = 1) -> ShiftVector:
    return ShiftVector("delta_tilde", k)


# -- parameter sets -------------------------------------------------------------

@dataclass(frozen=True)
class ParameterSet:
    family: str
    N: int
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    q: Fraction | None = None
    validated: bool = False

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterError(f"unknown family {self.family!r}")
        if not isinstance(self.N, int) or self.N < 0:
            raise ParameterError("N must be a non-negative integer")
        for name in "abcd":
            object.__setattr__(self, name, frac(getattr(self, name)))
        if self.family == QRACAH:
            if self.q is None:
                raise ParameterError("q-Racah parameter sets need q")
            q = frac(self.q)
            if not 0 < q < 1:
                raise ParameterError("q must lie in (0, 1)")
            object.__setattr__(self, "q", q)
        elif self.q is not None:
            raise ParameterError("Racah parameter sets take no q")

    # construction ------------------------------------------------------------

    @classmethod
    def racah(cls, N: int, b, c, d) -> "ParameterSet":
        """Racah set with a = -N; marked validated iff the basic ranges hold."""
        p = cls(RACAH, N, Fraction(-N), frac(b), frac(c), frac(d))
        return p.validate()

    @classmethod
    def qracah(cls, N: int, q, b, c, d) -> "ParameterSet":
        """q-Racah set with a = q^-N; marked validated iff the basic ranges hold."""
        q = frac(q)
        p = cls(QRACAH, N, q ** -N, frac(b), frac(c), frac(d), q)
        return p.validate()

    def validate(self) -> "ParameterSet":
        ok = all(diag.passed for diag in base_range_diagnostics(self))
        return replace(self, validated=ok)

    def unvalidated(self) -> "ParameterSet":
        return replace(self, validated=False)

    # conveniences --------------------------------------------------------------

    @property
    def is_q(self) -> bool:
        return self.family == QRACAH

    @property
    def lam(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    @property
    def kappa(self) -> Fraction:
        return 1 / self.q if self.is_q else Fraction(1)

    def with_lam(self, a, b, c, d, N: int | None = None) -> "ParameterSet":
        return replace(self, a=frac(a), b=frac(b), c=frac(c), d=frac(d),
                       N=self.N if N is None else N, validated=False)

    def label(self) -> str:
        vals = ",".join(str(v) for v in self.lam)
        if self.is_q:
            return f"qRacah(N={self.N}, q={self.q}; {vals})"
        return f"Racah(N={self.N}; {vals})"


def d_tilde(p: ParameterSet) -> Fraction:
    if p.is_q:
        return p.a * p.b * p.c / (p.d * p.q)
    return p.a + p.b + p.c - p.d - 1


def twist(p: ParameterSet) -> ParameterSet:
    """(l4-l1+1, l4-l2+1, l3, l4); multiplicatively (dq/a, dq/b, c, d)."""
    if p.is_q:
        if p.a == 0 or p.b == 0:
            raise ParameterError("twist needs nonzero a, b")
        return p.with_lam(p.d * p.q / p.a, p.d * p.q / p.b, p.c, p.d)
    return p.with_lam(p.d - p.a + 1, p.d - p.b + 1, p.c, p.d)


def shift_params(p: ParameterSet, s: ShiftVector) -> ParameterSet:
    """lambda + k*delta or lambda + k*delta_tilde.

    A delta shift moves a = -N to -(N-k), so the grid size follows it.
    """
    comps = s.components
    if p.is_q:
        lam = [x * p.q ** k for x, k in zip(p.lam, comps)]
    else:
        lam = [x + k for x, k in zip(p.lam, comps)]
    N = p.N - s.multiple if s.kind == "delta" else p.N
    if N < 0:
        raise ParameterError(f"shift {s} leaves no lattice (N={N})")
    return p.with_lam(*lam, N=N)


def shift(p: ParameterSet, n_delta: int = 0, n_delta_tilde: int = 0) -> ParameterSet:
    out = p
    if n_delta:
        out = shift_params(out, delta(n_delta))
    if n_delta_tilde:
        out = shift_params(out, delta_tilde(n_delta_tilde))
    return out if (n_delta or n_delta_tilde) else p


def mirror_params(p: ParameterSet) -> ParameterSet:
    """(l1, l1+l3-l4, l1+l2-l4, 2l1-l4); multiplicatively (a, ac/d, ab/d, a^2/d)."""
    a, b, c, d = p.lam
    if p.is_q:
        return p.with_lam(a, a * c / d, a * b / d, a * a / d)
    return p.with_lam(a, a + c - d, a + b - d, 2 * a - d)


# -- ranges ----------------------------------------------------------------------

class Diagnostic(NamedTuple):
    name: str
    passed: bool
    slack: Fraction  # right minus left; positive means satisfied
    text: str


def _lt(name: str, lhs, rhs, text: str) -> Diagnostic:
    slack = frac(rhs) - frac(lhs)
    return Diagnostic(name, slack > 0, slack, text)


def base_range_diagnostics(p: ParameterSet) -> list[Diagnostic]:
    a, b, c, d = p.lam
    if p.is_q:
        q = p.q
        return [
            Diagnostic("a*q^N=1", a * q ** p.N == 1, a * q ** p.N - 1, "a = q^-N"),
            _lt("0<ab", 0, a * b, "0 < ab"),
            _lt("ab<d", a * b, d, "ab < d"),
            _lt("d<1", d, 1, "d < 1"),
            _lt("qd<c", q * d, c, "qd < c"),
            _lt("c<1", c, 1, "c < 1"),
        ]
    return [
        Diagnostic("a=-N", a == -p.N, a + p.N, "a = -N"),
        _lt("0<d", 0, d, "0 < d"),
        _lt("d<a+b", d, a + b, "d < a + b"),
        _lt("0<c", 0, c, "0 < c"),
        _lt("c<1+d", c, 1 + d, "c < 1 + d"),
    ]


def _strict_floor(t: Fraction) -> int:
    """Greatest integer strictly less than t."""
    f = math.floor(t)
    return f - 1 if f == t else f


def _greatest_power_below(q: Fraction, X: Fraction, strict: bool) -> int:
    """Greatest integer k with q^k > X (strict) or q^k >= X, for 0<q<1, X>0.

    Equivalent to the (strict) floor of log_q X, decided with exact comparisons.
    """
    if X <= 0:
        raise ParameterError("power comparison needs a positive argument")
    k = math.floor(math.log(X) / math.log(q))

    def ok(j: int) -> bool:
        v = q ** j
        return v > X if strict else v >= X

    while not ok(k):
        k -= 1
    while ok(k + 1):
        k += 1
    return k


def v_max(p: ParameterSet) -> int:
    """min([l1+l2-l4-1]', [(l1+l2-l3-l4)/2]); may be < 1 (no virtual states)."""
    a, b, c, d = p.lam
    if p.is_q:
        q = p.q
        first = _greatest_power_below(q, a * b / (d * q), strict=True)
        # 2k <= t  <=>  q^(2k) >= q^t ; scan k through q^2
        second = _greatest_power_below(q * q, a * b / (c * d), strict=False)
        return min(first, second)
    first = _strict_floor(a + b - d - 1)
    second = math.floor((a + b - c - d) / 2)
    return min(first, second)


def virtual_index_set(p: ParameterSet) -> list[int]:
    return list(range(1, v_max(p) + 1))


def validate_ranges(p: ParameterSet, M: int) -> list[Diagnostic]:
    """Basic ranges, the deletion-count range for M, and v_max >= 1."""
    out = base_range_diagnostics(p)
    a, b, c, d = p.lam
    if p.is_q:
        out.append(_lt(f"ab<dq^{M}", a * b, d * p.q ** M, f"ab < d q^{M}"))
    else:
        out.append(_lt(f"d+{M}<a+b", d + M, a + b, f"d + {M} < a + b"))
    vm = v_max(p)
    out.append(Diagnostic("v_max>=1", vm >= 1, Fraction(vm - 1),
                          f"v_max = {vm} (virtual index set {{1..{vm}}})"))
    return out


def require_valid(p: ParameterSet, M: int = 1) -> None:
    bad = [dg for dg in validate_ranges(p, M) if not dg.passed]
    if bad:
        names = ", ".join(f"{dg.text} (slack {dg.slack})" for dg in bad)
        raise ParameterError(f"{p.label()} violates: {names}")
