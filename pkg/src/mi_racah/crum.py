"""Stepwise deletion of virtual state vectors.

Everything is kept free of square roots: Casoratians of the virtual
polynomials, of nu and of nu*P_n, ratios of them, and squared weights.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Callable

from .casoratian import casoratian
from .lattice import B, D, GridFunction, Point, energy, norm_sq, racah_poly
from .params import ParameterError, ParameterSet, twist, virtual_index_set
from .virtual import alpha, nu, twisted_ground_weight_sq, virtual_energy, xi_poly


class SignError(ParameterError):
    """A quantity that should have definite sign does not."""


# -- Casoratians with symbolic column keys ------------------------------------------
#
# A column key is ("xi", v), ("nu",) or ("nuP", n).  Keys are hashable, so the
# determinants can be memoised per parameter set and point.

def column(p: ParameterSet, key: tuple) -> Callable[[Point], Fraction]:
    kind = key[0]
    if kind == "xi":
        v = key[1]
        return lambda x: xi_poly(p, v, x)
    if kind == "nu":
        return lambda x: nu(p, x)
    if kind == "nuP":
        n = key[1]
        return lambda x: nu(p, x) * racah_poly(p, n, x)
    raise ValueError(f"unknown column kind {kind!r}")


@lru_cache(maxsize=None)
def W(p: ParameterSet, keys: tuple, x: Point) -> Fraction:
    return casoratian([column(p, k) for k in keys], x)


def xi_keys(indices) -> tuple:
    return tuple(("xi", d) for d in indices)


def W_xi(p: ParameterSet, indices, x: Point) -> Fraction:
    return W(p, xi_keys(indices), x)


def W_xi_nu(p: ParameterSet, indices, x: int) -> Fraction:
    return W(p, xi_keys(indices) + (("nu",),), x)


def W_xi_nuP(p: ParameterSet, indices, n: int, x: int) -> Fraction:
    return W(p, xi_keys(indices) + (("nuP", n),), x)


def W_xi_v(p: ParameterSet, indices, v: int, x: Point) -> Fraction:
    return W(p, xi_keys(indices) + (("xi", v),), x)


def W_via_jacobi(p: ParameterSet, indices, x: Point) -> Fraction:
    """W[xi_1..xi_s] rebuilt from two order-(s-1) Casoratians."""
    s = len(indices)
    if s < 2:
        return W_xi(p, indices, x)
    head = tuple(indices[:-2])
    g = lambda y: W_xi(p, head + (indices[-2],), y)
    h = lambda y: W_xi(p, head + (indices[-1],), y)
    return casoratian([g, h], x) / W_xi(p, head, x + 1)


# -- potentials ----------------------------------------------------------------------

def _alpha_Bp(p: ParameterSet, x: Point) -> Fraction:
    return alpha(p) * B(twist(p), x)


def _alpha_Dp(p: ParameterSet, x: Point) -> Fraction:
    return alpha(p) * D(twist(p), x)


def _ratio(num: Fraction, den: Fraction, what: str) -> Fraction:
    if den == 0:
        raise SignError(f"vanishing Casoratian in {what}")
    return num / den


def hatted_B(p: ParameterSet, indices, x: int) -> Fraction:
    s = len(indices)
    if s == 0:
        raise ValueError("hatted potentials need at least one deleted index")
    prev, cur = tuple(indices[:-1]), tuple(indices)
    return (_alpha_Bp(p, x + s - 1)
            * _ratio(W_xi(p, prev, x), W_xi(p, prev, x + 1), "B-hat")
            * _ratio(W_xi(p, cur, x + 1), W_xi(p, cur, x), "B-hat"))


def hatted_D(p: ParameterSet, indices, x: int) -> Fraction:
    s = len(indices)
    if s == 0:
        raise ValueError("hatted potentials need at least one deleted index")
    Dp = _alpha_Dp(p, x)
    if Dp == 0:
        return Fraction(0)
    prev, cur = tuple(indices[:-1]), tuple(indices)
    return (Dp * _ratio(W_xi(p, prev, x + 1), W_xi(p, prev, x), "D-hat")
            * _ratio(W_xi(p, cur, x - 1), W_xi(p, cur, x), "D-hat"))


def standard_B(p: ParameterSet, indices, x: int) -> Fraction:
    s = len(indices)
    if s == 0:
        return B(p, x)
    Bp = _alpha_Bp(p, x + s)
    if Bp == 0:
        return Fraction(0)
    idx = tuple(indices)
    return (Bp * _ratio(W_xi(p, idx, x), W_xi(p, idx, x + 1), "B_D")
            * _ratio(W_xi_nu(p, idx, x + 1), W_xi_nu(p, idx, x), "B_D"))


def standard_D(p: ParameterSet, indices, x: int) -> Fraction:
    s = len(indices)
    if s == 0:
        return D(p, x)
    Dp = _alpha_Dp(p, x)
    if Dp == 0:
        return Fraction(0)
    idx = tuple(indices)
    return (Dp * _ratio(W_xi(p, idx, x + 1), W_xi(p, idx, x), "D_D")
            * _ratio(W_xi_nu(p, idx, x - 1), W_xi_nu(p, idx, x), "D_D"))


def standard_potentials(p: ParameterSet, indices) -> tuple[GridFunction, GridFunction]:
    idx = tuple(indices)
    return (GridFunction.tabulate(lambda x: standard_B(p, idx, x), p.N),
            GridFunction.tabulate(lambda x: standard_D(p, idx, x), p.N))


def hamiltonian_entries(p: ParameterSet, indices) -> tuple[list, list]:
    """Diagonal and squared off-diagonal of the Hamiltonian after the deletions.

    Uses the product form  A-hat A-hat^dagger + E~_{d_s}  (or the original
    B, D when nothing is deleted).
    """
    idx = tuple(indices)
    N = p.N
    if not idx:
        diag = [B(p, x) + D(p, x) for x in range(N + 1)]
        off = [B(p, x) * D(p, x + 1) for x in range(N)]
        return diag, off
    Et = virtual_energy(p, idx[-1])
    diag = [hatted_B(p, idx, x) + hatted_D(p, idx, x + 1) + Et for x in range(N + 1)]
    off = [hatted_B(p, idx, x + 1) * hatted_D(p, idx, x + 1) for x in range(N)]
    return diag, off


def next_step_entries(p: ParameterSet, indices) -> tuple[list, list]:
    """The same Hamiltonian written as A-hat^dagger A-hat + E~ of the next index."""
    idx = tuple(indices)
    Et = virtual_energy(p, idx[-1])
    diag = [hatted_B(p, idx, x) + hatted_D(p, idx, x) + Et for x in range(p.N + 1)]
    off = [hatted_B(p, idx, x) * hatted_D(p, idx, x + 1) for x in range(p.N)]
    return diag, off


def standard_entries(p: ParameterSet, indices) -> tuple[list, list]:
    idx = tuple(indices)
    diag = [standard_B(p, idx, x) + standard_D(p, idx, x) for x in range(p.N + 1)]
    off = [standard_B(p, idx, x) * standard_D(p, idx, x + 1) for x in range(p.N)]
    return diag, off


def chain_residuals(p: ParameterSet, indices) -> list[Fraction]:
    """Differences between the two factorised forms at every step of the chain."""
    idx = tuple(indices)
    out = []
    for s in range(len(idx)):
        d0, o0 = hamiltonian_entries(p, idx[:s])
        d1, o1 = next_step_entries(p, idx[:s + 1])
        out += [u - v for u, v in zip(d0, d1)] + [u - v for u, v in zip(o0, o1)]
    if idx:
        d0, o0 = hamiltonian_entries(p, idx)
        d1, o1 = standard_entries(p, idx)
        out += [u - v for u, v in zip(d0, d1)] + [u - v for u, v in zip(o0, o1)]
    return out


# -- deformed vectors ------------------------------------------------------------------

def _h_nu(p: ParameterSet, idx: tuple, x: int) -> Fraction:
    return W_xi_nu(p, idx, x)


def similarity_residual(p: ParameterSet, indices, numerator: Callable[[int], Fraction],
                        value: Fraction, x: int) -> Fraction:
    """Residual of the ground-state-similarity form of the deformed equation.

    h = numerator / W[xi.., nu]; returns
    B_s(x)(h(x)-h(x+1)) + D_s(x)(h(x)-h(x-1)) - value*h(x).
    The x+1 term is dropped where B_s(x) = 0 (x = N).
    """
    idx = tuple(indices)
    h = lambda y: _ratio(numerator(y), _h_nu(p, idx, y), "similarity")
    hx = h(x)
    out = -value * hx
    Bs = standard_B(p, idx, x)
    if Bs:
        out += Bs * (hx - h(x + 1))
    Ds = standard_D(p, idx, x)
    if Ds:
        out += Ds * (hx - h(x - 1))
    return out


def eigen_residuals(p: ParameterSet, indices, n: int) -> list[Fraction]:
    idx = tuple(indices)
    num = lambda y: W_xi_nuP(p, idx, n, y)
    return [similarity_residual(p, idx, num, energy(p, n), x) for x in range(p.N + 1)]


def virtual_vector_residuals(p: ParameterSet, indices, v: int) -> list[Fraction]:
    """Zero at x < N and nonzero at x = N for a remaining virtual index v."""
    idx = tuple(indices)
    if v in idx:
        raise ValueError(f"virtual index {v} is already deleted")
    num = lambda y: W_xi_v(p, idx, v, y)
    return [similarity_residual(p, idx, num, virtual_energy(p, v), x) for x in range(p.N + 1)]


def transformed_weight(p: ParameterSet, indices, x: int) -> Fraction:
    """prod_j alpha B'(x+j-1) * phi~0(x)^2 / (W(x) W(x+1)): the squared prefactor."""
    idx = tuple(indices)
    w = twisted_ground_weight_sq(p)[x]
    for j in range(1, len(idx) + 1):
        w *= _alpha_Bp(p, x + j - 1)
    return _ratio(w, W_xi(p, idx, x) * W_xi(p, idx, x + 1), "weight")


def norm_product(p: ParameterSet, indices, n: int) -> Fraction:
    out = 1 / norm_sq(p, n)
    for d in indices:
        out *= energy(p, n) - virtual_energy(p, d)
    return out


def transformed_eigen_polyweight(p: ParameterSet, indices, n: int) -> tuple[GridFunction, Fraction]:
    idx = tuple(indices)
    grid = GridFunction.tabulate(lambda x: W_xi_nuP(p, idx, n, x), p.N)
    return grid, norm_product(p, idx, n)


def norm_residuals(p: ParameterSet, indices) -> list[Fraction]:
    idx = tuple(indices)
    N = p.N
    wt = [transformed_weight(p, idx, x) for x in range(N + 1)]
    cols = [[W_xi_nuP(p, idx, n, x) for x in range(N + 1)] for n in range(N + 1)]
    out = []
    for n in range(N + 1):
        for m in range(N + 1):
            s = sum(wt[x] * cols[n][x] * cols[m][x] for x in range(N + 1))
            out.append(s - (norm_product(p, idx, n) if n == m else 0))
    return out


# -- signs -----------------------------------------------------------------------------

def _sign(v: Fraction) -> int:
    return (v > 0) - (v < 0)


def definite_sign(values) -> int:
    """+1 or -1 if all values share that strict sign, else 0."""
    signs = {_sign(v) for v in values}
    if len(signs) == 1 and 0 not in signs:
        return signs.pop()
    return 0


@dataclass
class SignReport:
    ok: bool = True
    messages: list = field(default_factory=list)

    def require(self, cond: bool, msg: str):
        if not cond:
            self.ok = False
            self.messages.append(msg)


def sign_checks(p: ParameterSet, indices) -> SignReport:
    """Definite signs, positivity of potentials and the sign-propagation rules."""
    idx = tuple(indices)
    N = p.N
    rep = SignReport()
    V = virtual_index_set(p)
    for s in range(1, len(idx) + 1):
        cur, prev = idx[:s], idx[:s - 1]
        sw = definite_sign(W_xi(p, cur, x) for x in range(N + 2))
        rep.require(sw != 0, f"W{cur} changes sign on 0..N+1")
        swn = definite_sign(W_xi_nu(p, cur, x) for x in range(N + 1))
        rep.require(swn != 0, f"W{cur},nu changes sign on 0..N")
        Bh = [hatted_B(p, cur, x) for x in range(N + 1)]
        Dh = [hatted_D(p, cur, x) for x in range(N + 2)]
        rep.require(all(v > 0 for v in Bh), f"B-hat{cur} not positive")
        rep.require(Dh[0] == 0 and Dh[N + 1] == 0 and all(v > 0 for v in Dh[1:N + 1]),
                    f"D-hat{cur} boundary/positivity")
        Bs = [standard_B(p, cur, x) for x in range(N + 1)]
        Ds = [standard_D(p, cur, x) for x in range(N + 1)]
        rep.require(Bs[N] == 0 and all(v > 0 for v in Bs[:N]), f"B_D{cur} boundary/positivity")
        rep.require(Ds[0] == 0 and all(v > 0 for v in Ds[1:]), f"D_D{cur} boundary/positivity")
        # propagation rule for nu
        pred = -_sign(W_xi(p, prev, 0)) * _sign(W_xi(p, cur, 0)) * _sign(W_xi_nu(p, prev, 0))
        rep.require(pred == swn, f"nu sign rule fails at {cur}")
        # propagation rule for the remaining virtual vectors
        for v in V:
            if v in cur:
                continue
            sv = definite_sign(W_xi_v(p, cur, v, x) for x in range(N + 2))
            rep.require(sv != 0, f"W{cur},{v} changes sign on 0..N+1")
            lhs = (W_xi(p, prev, 0) * (virtual_energy(p, cur[-1]) - virtual_energy(p, v))
                   / (W_xi(p, cur, 0) * W_xi_v(p, prev, v, 0)))
            rep.require(_sign(lhs) == sv, f"virtual sign rule fails at {cur},{v}")
    return rep


# -- order independence ----------------------------------------------------------------

def order_independence(p: ParameterSet, indices, n_values=None) -> dict:
    """Compare potentials and eigen Casoratians over all orderings of the index set.

    Returns {"potentials_equal": bool, "signs": {perm: sign}, "residuals": [...]}
    where sign is the global factor relating W[.., nu P_n] to the reference order.
    """
    base = tuple(indices)
    ref_B, ref_D = standard_potentials(p, base)
    n_values = range(p.N + 1) if n_values is None else n_values
    ref_W = {n: [W_xi_nuP(p, base, n, x) for x in range(p.N + 1)] for n in n_values}
    residuals = []
    signs = {}
    equal = True
    for perm in permutations(base):
        Bg, Dg = standard_potentials(p, perm)
        diff = [u - v for u, v in zip(Bg, ref_B)] + [u - v for u, v in zip(Dg, ref_D)]
        residuals += diff
        equal &= not any(diff)
        perm_sign = None
        for n in n_values:
            cur = [W_xi_nuP(p, perm, n, x) for x in range(p.N + 1)]
            for sgn in (1, -1):
                if all(c == sgn * r for c, r in zip(cur, ref_W[n])):
                    break
            else:
                sgn = 0
                residuals += [c - r for c, r in zip(cur, ref_W[n])]
            if perm_sign is None:
                perm_sign = sgn
            elif perm_sign != sgn:
                perm_sign = 0
        signs[perm] = perm_sign
        equal &= perm_sign != 0
    return {"potentials_equal": equal, "signs": signs, "residuals": residuals}


# -- chains ----------------------------------------------------------------------------

@dataclass(frozen=True)
class DeletionChain:
    """Parameters plus the ordered virtual indices deleted so far."""

    params: ParameterSet
    indices: tuple = ()

    def extend(self, d_next: int) -> "DeletionChain":
        if d_next in self.indices:
            raise ParameterError(f"index {d_next} already deleted")
        if d_next not in virtual_index_set(self.params):
            raise ParameterError(f"{d_next} is not a virtual index of {self.params.label()}")
        return DeletionChain(self.params, self.indices + (d_next,))

    def hatted(self) -> tuple[GridFunction, GridFunction]:
        """B-hat on 0..N and D-hat on 0..N+1 of the last step."""
        p, idx = self.params, self.indices
        return (GridFunction.tabulate(lambda x: hatted_B(p, idx, x), p.N),
                GridFunction.tabulate(lambda x: hatted_D(p, idx, x), p.N + 1))

    def potentials(self) -> tuple[GridFunction, GridFunction]:
        return standard_potentials(self.params, self.indices)


def extend_chain(chain: DeletionChain, d_next: int) -> DeletionChain:
    return chain.extend(d_next)
