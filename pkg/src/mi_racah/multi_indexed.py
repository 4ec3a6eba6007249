"""Multi-indexed (q-)Racah polynomials.

The denominator polynomial Xi_D and the polynomials P_{D,n} are evaluated from
determinants, fitted as exact polynomials in eta, and checked against the
deformed systems of :mod:`mi_racah.crum`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .casoratian import det, varphi_M
from .crum import W_xi, W_xi_nuP, standard_potentials
from .etapoly import EtaPolynomial, count_roots, fit_eta_polynomial
from .lattice import (
    B,
    D as D_pot,
    GridFunction,
    Point,
    SingularPointError,
    energy,
    eta,
    ground_weight_sq_closed,
    norm_sq,
    off_grid_points,
    racah_poly,
    reflect,
    varphi_aux,
    zval,
)
from .params import (
    ParameterError,
    ParameterSet,
    frac,
    mirror_params,
    poch,
    poch_multi,
    qpoch,
    qpoch_multi,
    shift,
    v_max,
)
from .virtual import alpha, nu, virtual_energy, xi_poly


@dataclass(frozen=True)
class IndexSet:
    """Deleted virtual levels; kept in the given order (ascending by default)."""

    D: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.D)) != len(self.D):
            raise ParameterError(f"repeated index in {self.D}")
        if any(d < 0 for d in self.D):
            raise ParameterError("indices must be non-negative")

    @classmethod
    def of(cls, D) -> "IndexSet":
        if isinstance(D, IndexSet):
            return D
        return cls(tuple(sorted(int(d) for d in D)))

    @property
    def M(self) -> int:
        return len(self.D)

    @property
    def ell(self) -> int:
        return sum(self.D) - self.M * (self.M - 1) // 2

    def check(self, p: ParameterSet) -> None:
        vm = v_max(p)
        bad = [d for d in self.D if not 1 <= d <= vm]
        if bad:
            raise ParameterError(f"indices {bad} outside the virtual range 1..{vm}")


def _D(D) -> tuple[int, ...]:
    return D.D if isinstance(D, IndexSet) else tuple(D)


# -- constants -----------------------------------------------------------------------------

def _aBp(p: ParameterSet, x: int) -> Fraction:
    from .params import twist
    return alpha(p) * B(twist(p), x)


def C_D(p: ParameterSet, D) -> Fraction:
    D = _D(D)
    M = len(D)
    out = 1 / varphi_M(p, M, 0)
    for k in range(M):
        for j in range(k):
            out *= (virtual_energy(p, D[j]) - virtual_energy(p, D[k])) / _aBp(p, j)
    return out


def d_tilde_sq(p: ParameterSet, D, n: int) -> Fraction:
    D = _D(D)
    M = len(D)
    out = varphi_M(p, M, 0) / varphi_M(p, M + 1, 0)
    En = energy(p, n)
    for j, d in enumerate(D):
        out *= (En - virtual_energy(p, d)) / _aBp(p, j)
    return out


def C_Dn(p: ParameterSet, D, n: int) -> Fraction:
    return (-1) ** len(_D(D)) * C_D(p, D) * d_tilde_sq(p, D, n)


def constants(p: ParameterSet, D, n: int) -> tuple[Fraction, Fraction, Fraction]:
    return C_D(p, D), C_Dn(p, D, n), d_tilde_sq(p, D, n)


# -- evaluation -----------------------------------------------------------------------------

def _require_nonzero(v: Fraction, what: str) -> Fraction:
    if v == 0:
        raise SingularPointError(f"{what} vanishes here; use the fitted polynomial")
    return v


@lru_cache(maxsize=None)
def denominator_poly(p: ParameterSet, D: tuple, x: Point) -> Fraction:
    """Xi-check_D(x) = W[xi_d1..xi_dM](x) / (C_D varphi_M(x))."""
    D = _D(D)
    phi = _require_nonzero(varphi_M(p, len(D), x), "varphi_M")
    return W_xi(p, D, x) / (C_D(p, D) * phi)


def r_factor(p: ParameterSet, M: int, j: int, x: Point) -> Fraction:
    """r_j(x + j - 1) for base point x."""
    a, b, c, d = p.lam
    if p.is_q:
        q = p.q
        z = zval(p, x)
        num = (qpoch_multi((a * z, b * z), q, j - 1)
               * qpoch_multi((d * z * q ** j / a, d * z * q ** j / b), q, M + 1 - j))
        den = ((a * b / (d * q)) ** (j - 1) * z ** M
               * qpoch_multi((d * q / a, d * q / b), q, M))
        return num / den
    x = frac(x)
    num = poch_multi((x + a, x + b), j - 1) * poch_multi((x + d - a + j, x + d - b + j), M + 1 - j)
    return num / poch_multi((d - a + 1, d - b + 1), M)


def mi_det(p: ParameterSet, D, n: int, x: Point) -> Fraction:
    """The raw (M+1)x(M+1) determinant with r_j P_n in the last column."""
    D = _D(D)
    M = len(D)
    rows = []
    for j in range(1, M + 1 + 1):
        xj = x + (j - 1)
        rows.append([xi_poly(p, d, xj) for d in D] + [r_factor(p, M, j, x) * racah_poly(p, n, xj)])
    return det(rows)


@lru_cache(maxsize=None)
def mi_poly(p: ParameterSet, D: tuple, n: int, x: Point) -> Fraction:
    """P-check_{D,n}(x) by the determinant route."""
    D = _D(D)
    phi = _require_nonzero(varphi_M(p, len(D) + 1, x), "varphi_{M+1}")
    return mi_det(p, D, n, x) / (C_Dn(p, D, n) * phi)


def mi_poly_casoratian(p: ParameterSet, D, n: int, x: int) -> Fraction:
    """P-check_{D,n}(x) from W[xi.., nu P_n] and nu at lambda + M delta-tilde (grid x only)."""
    D = _D(D)
    M = len(D)
    phi = _require_nonzero(varphi_M(p, M + 1, x), "varphi_{M+1}")
    return W_xi_nuP(p, D, n, x) / (C_Dn(p, D, n) * phi * nu(shift(p, 0, M), x))


def xi_eta_params(p: ParameterSet, M: int) -> ParameterSet:
    """Parameters whose eta is the natural variable of Xi_D."""
    return shift(p, 0, M - 1) if M > 1 else p


def p_eta_params(p: ParameterSet, M: int) -> ParameterSet:
    return shift(p, 0, M) if M else p


def _fit_nodes(p: ParameterSet, deg: int, extra: int = 2) -> list[Point]:
    return list(range(deg + 1 + extra)) + off_grid_points(p)


def fit_denominator(p: ParameterSet, D) -> EtaPolynomial:
    D = _D(D)
    M = len(D)
    pe = xi_eta_params(p, M)
    ell = sum(D) - M * (M - 1) // 2
    return fit_eta_polynomial(lambda x: denominator_poly(p, D, x), lambda x: eta(pe, x),
                              _fit_nodes(p, ell), ell)


def fit_mi_poly(p: ParameterSet, D, n: int) -> EtaPolynomial:
    D = _D(D)
    M = len(D)
    pe = p_eta_params(p, M)
    deg = sum(D) - M * (M - 1) // 2 + n
    return fit_eta_polynomial(lambda x: mi_poly(p, D, n, x), lambda x: eta(pe, x),
                              _fit_nodes(p, deg), deg)


def mi_poly_any(p: ParameterSet, D, n: int, x: Point) -> Fraction:
    """Determinant route, falling back to the eta-polynomial where it is 0/0."""
    D = _D(D)
    try:
        return mi_poly(p, D, n, x)
    except (SingularPointError, ZeroDivisionError):
        return fit_mi_poly(p, D, n)(eta(p_eta_params(p, len(D)), x))


def denominator_any(p: ParameterSet, D, x: Point) -> Fraction:
    D = _D(D)
    try:
        return denominator_poly(p, D, x)
    except (SingularPointError, ZeroDivisionError):
        return fit_denominator(p, D)(eta(xi_eta_params(p, len(D)), x))


# -- leading coefficients ------------------------------------------------------------------

def leading_coefficients(p: ParameterSet, D, n: int) -> tuple[Fraction, Fraction]:
    D = tuple(sorted(_D(D)))
    M = len(D)
    a, b, c, d = p.lam
    if p.is_q:
        q = p.q
        g = c * d / (a * b)
        cx = Fraction(1)
        for dj in D:
            cx *= qpoch(g * q ** (dj + 1), q, dj)
        for k in range(M):
            for j in range(k):
                cx /= 1 - g * q ** (D[j] + D[k] + 1)
        for j, dj in enumerate(D, start=1):
            low = (c, d * q / a, d * q / b)
            cx *= qpoch_multi(low, q, j - 1) / qpoch_multi(low, q, dj)
        ratio = (qpoch(a * b * c / d * q ** (n - 1), q, n) * qpoch(c, q, M)
                 / qpoch_multi((a, b, c), q, n))
        for dj in D:
            ratio /= 1 - c * q ** (n + dj)
        return cx, cx * ratio
    g = -a - b + c + d
    cx = Fraction(1)
    for dj in D:
        cx *= poch(g + dj + 1, dj)
    for k in range(M):
        for j in range(k):
            cx /= g + D[j] + D[k] + 1
    for j, dj in enumerate(D, start=1):
        low = (c, d - a + 1, d - b + 1)
        cx *= poch_multi(low, j - 1) / poch_multi(low, dj)
    ratio = poch(a + b + c - d + n - 1, n) * poch(c, M) / poch_multi((a, b, c), n)
    for dj in D:
        ratio /= c + n + dj
    return cx, cx * ratio


# -- potentials, weights, orthogonality ---------------------------------------------------

def potentials_from_xi(p: ParameterSet, D) -> tuple[GridFunction, GridFunction]:
    D = _D(D)
    return (GridFunction.tabulate(lambda x: B_D(p, D, x), p.N),
            GridFunction.tabulate(lambda x: D_D(p, D, x), p.N))


def _lam_prime(p: ParameterSet, D) -> ParameterSet:
    return p_eta_params(p, len(_D(D)))


def B_D(p: ParameterSet, D, x: Point) -> Fraction:
    D = _D(D)
    Bx = B(_lam_prime(p, D), x)
    if Bx == 0:
        return Fraction(0)
    up = shift(p, 1)
    return (Bx * denominator_any(p, D, x) / denominator_any(p, D, x + 1)
            * denominator_any(up, D, x + 1) / denominator_any(up, D, x))


def D_D(p: ParameterSet, D, x: Point) -> Fraction:
    D = _D(D)
    Dx = D_pot(_lam_prime(p, D), x)
    if Dx == 0:
        return Fraction(0)
    up = shift(p, 1)
    return (Dx * denominator_any(p, D, x + 1) / denominator_any(p, D, x)
            * denominator_any(up, D, x - 1) / denominator_any(up, D, x))


def psi_sq(p: ParameterSet, D, x: int) -> Fraction:
    D = _D(D)
    Xi = lambda y: denominator_any(p, D, y)
    return Xi(1) * ground_weight_sq_closed(_lam_prime(p, D), x) / (Xi(x) * Xi(x + 1))


def orthogonality_residuals(p: ParameterSet, D) -> list[Fraction]:
    """sum_x psi^2/Xi(1) P_n P_m - delta_nm/(d_n^2 dtilde^2), all n, m."""
    D = _D(D)
    N = p.N
    Xi1 = denominator_any(p, D, 1)
    w = [psi_sq(p, D, x) / Xi1 for x in range(N + 1)]
    P = [[mi_poly_any(p, D, n, x) for x in range(N + 1)] for n in range(N + 1)]
    out = []
    for n in range(N + 1):
        for m in range(N + 1):
            s = sum(w[x] * P[n][x] * P[m][x] for x in range(N + 1))
            if n == m:
                s -= 1 / (norm_sq(p, n) * d_tilde_sq(p, D, n))
            out.append(s)
    return out


# -- shift operators and the similarity-transformed Hamiltonian ----------------------------

def forward_shift_D(p: ParameterSet, D, f, x: Point) -> Fraction:
    D = _D(D)
    lp = _lam_prime(p, D)
    up = shift(p, 1)
    pre = B(lp, 0) / (varphi_aux(lp, x) * denominator_any(p, D, x + 1))
    return pre * (denominator_any(up, D, x + 1) * f(x) - denominator_any(up, D, x) * f(x + 1))


def backward_shift_D(p: ParameterSet, D, f, x: Point) -> Fraction:
    D = _D(D)
    lp = _lam_prime(p, D)
    up = shift(p, 1)
    out = B(lp, x) * denominator_any(p, D, x) * varphi_aux(lp, x) * f(x)
    Dx = D_pot(lp, x)
    if Dx:
        out -= Dx * denominator_any(p, D, x + 1) * varphi_aux(lp, x - 1) * f(x - 1)
    return out / (B(lp, 0) * denominator_any(up, D, x))


def shift_residuals(p: ParameterSet, D, n: int, x: Point) -> tuple[Fraction, Fraction]:
    """(F P_n - E_n P_{n-1}(lambda+delta), B P_{n-1}(lambda+delta) - P_n) at x."""
    D = _D(D)
    up = shift(p, 1)
    Pn = lambda y: mi_poly_any(p, D, n, y)
    Pm = lambda y: mi_poly_any(up, D, n - 1, y)
    fwd = forward_shift_D(p, D, Pn, x) - energy(p, n) * Pm(x)
    bwd = backward_shift_D(p, D, Pm, x) - Pn(x)
    return fwd, bwd


def similarity_coefficients(p: ParameterSet, D, x: Point) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """(B_D, B-bar, D_D, D-bar) so that H~ f = (B_D+D_D) f - B-bar f(x+1) - D-bar f(x-1)."""
    D = _D(D)
    lp = _lam_prime(p, D)
    Xi = lambda y: denominator_any(p, D, y)
    Bx, Dx = B(lp, x), D_pot(lp, x)
    Bbar = Bx * Xi(x) / Xi(x + 1) if Bx else Fraction(0)
    Dbar = Dx * Xi(x + 1) / Xi(x) if Dx else Fraction(0)
    return B_D(p, D, x), Bbar, D_D(p, D, x), Dbar


def similarity_apply(p: ParameterSet, D, f, x: Point) -> Fraction:
    BD, Bbar, DD, Dbar = similarity_coefficients(p, D, x)
    out = (BD + DD) * f(x)
    if Bbar:
        out -= Bbar * f(x + 1)
    if Dbar:
        out -= Dbar * f(x - 1)
    return out


def similarity_matrix(p: ParameterSet, D) -> list[list[Fraction]]:
    N = p.N
    H = [[Fraction(0)] * (N + 1) for _ in range(N + 1)]
    for x in range(N + 1):
        BD, Bbar, DD, Dbar = similarity_coefficients(p, D, x)
        H[x][x] = BD + DD
        if x < N:
            H[x][x + 1] = -Bbar
        if x > 0:
            H[x][x - 1] = -Dbar
    return H


def eigen_residuals(p: ParameterSet, D, n: int, points=None) -> list[Fraction]:
    D = _D(D)
    pts = list(range(p.N + 1)) + list(off_grid_points(p)[:3]) if points is None else points
    f = lambda y: mi_poly_any(p, D, n, y)
    return [similarity_apply(p, D, f, x) - energy(p, n) * f(x) for x in pts]


def charpoly_values(p: ParameterSet, D) -> list[Fraction]:
    H = similarity_matrix(p, D)
    out = []
    for n in range(p.N + 1):
        E = energy(p, n)
        out.append(det([[H[i][j] - (E if i == j else 0) for j in range(len(H))]
                        for i in range(len(H))]))
    return out


# -- shape invariance ----------------------------------------------------------------------

def shape_invariance_residuals(p: ParameterSet, D) -> list[Fraction]:
    """Entrywise A A^dagger = kappa A(l+delta)^dagger A(l+delta) + E_1, squared off-diagonal."""
    D = _D(D)
    N = p.N
    up = shift(p, 1)
    k = p.kappa
    E1 = energy(p, 1)
    Bl = lambda x: B_D(p, D, x)
    Dl = lambda x: D_D(p, D, x)
    Bu = lambda x: B_D(up, D, x)
    Du = lambda x: D_D(up, D, x)
    out = []
    for x in range(N):
        out.append(Bl(x) + Dl(x + 1) - k * (Bu(x) + Du(x)) - E1)
    for x in range(N - 1):
        out.append(Bl(x + 1) * Dl(x + 1) - k * k * Bu(x) * Du(x + 1))
    return out


def crum_agreement_residuals(p: ParameterSet, D) -> list[Fraction]:
    """Xi-form potentials minus the Casoratian (standard-form) potentials."""
    D = _D(D)
    B1, D1 = potentials_from_xi(p, D)
    B2, D2 = standard_potentials(p, D)
    return [u - v for u, v in zip(B1, B2)] + [u - v for u, v in zip(D1, D2)]


# -- zeros -------------------------------------------------------------------------------------

def count_zeros(p: ParameterSet, D, n: int) -> int:
    D = _D(D)
    poly = fit_mi_poly(p, D, n)
    hi = eta(p_eta_params(p, len(D)), p.N)
    return count_roots(poly, Fraction(0), hi)


# -- reductions ----------------------------------------------------------------------------------

def level0_residuals(p: ParameterSet, D_prime_plus1, n: int, points=None) -> list[Fraction]:
    """P_{D u {0},n}(lambda) - P_{D',n}(lambda + delta-tilde), D' = {d-1}.

    ``D_prime_plus1`` lists the nonzero indices of the left side (all >= 2).
    """
    Dl = tuple(D_prime_plus1)
    if any(d < 2 for d in Dl):
        raise ParameterError("nested level-0 reduction is not supported")
    Dr = tuple(d - 1 for d in Dl)
    right = shift(p, 0, 1)
    pts = list(range(p.N + 1)) + off_grid_points(p) if points is None else points
    out = []
    for x in pts:
        out.append(mi_poly(p, Dl + (0,), n, x) - mi_poly(right, Dr, n, x))
    return out


def level0_denominator_residuals(p: ParameterSet, D_prime_plus1, points=None) -> list[Fraction]:
    Dl = tuple(D_prime_plus1)
    Dr = tuple(d - 1 for d in Dl)
    right = shift(p, 0, 1)
    pts = list(range(p.N + 2)) + off_grid_points(p) if points is None else points
    return [denominator_poly(p, Dl + (0,), x) - denominator_poly(right, Dr, x) for x in pts]


def exceptional_xi(p: ParameterSet, ell: int, x: Point) -> Fraction:
    """Virtual polynomial of the one-index exceptional system at parameters p.

    P_ell evaluated at (l4-l1, l4-l2, l3+ell-1, l4+ell-1);
    multiplicatively (d/a, d/b, c q^(ell-1), d q^(ell-1)).
    """
    a, b, c, d = p.lam
    if p.is_q:
        q = p.q
        tw = p.with_lam(d / a, d / b, c * q ** (ell - 1), d * q ** (ell - 1))
    else:
        tw = p.with_lam(d - a, d - b, c + ell - 1, d + ell - 1)
    return racah_poly(tw, ell, x)


def exceptional_params(p: ParameterSet, ell: int) -> ParameterSet:
    """lambda_X with lambda_X + ell*delta - delta-tilde = lambda (lattice size N + ell)."""
    a, b, c, d = p.lam
    if p.is_q:
        q = p.q
        return p.with_lam(a * q ** -ell, b * q ** -ell, c * q ** (1 - ell), d * q ** (1 - ell),
                          N=p.N + ell)
    return p.with_lam(a - ell, b - ell, c - ell + 1, d - ell + 1, N=p.N + ell)


def exceptional_polys(p: ParameterSet, ell: int) -> dict:
    """Eigenvectors of the one-index exceptional difference operator, built only from xi^X.

    The operator uses B(x; lambda_X + ell delta), D(x; lambda_X + ell delta) and
    the ratios of xi^X at lambda_X and lambda_X + delta.  Each eigenvector for
    E_n is obtained by the three-term recurrence from f(0) = 1; the residual of
    the last row certifies E_n as an eigenvalue.
    """
    pX = exceptional_params(p, ell)
    upX = shift(pX, 1)
    base = shift(p, 0, 1)  # lambda_X + ell delta
    xi = lambda y: exceptional_xi(pX, ell, y)
    xi_up = lambda y: exceptional_xi(upX, ell, y)
    N = p.N

    def coeffs(x):
        Bx, Dx = B(base, x), D_pot(base, x)
        Bbar = Bx * xi(x) / xi(x + 1) if Bx else Fraction(0)
        Dbar = Dx * xi(x + 1) / xi(x) if Dx else Fraction(0)
        diag = Bbar * xi_up(x + 1) / xi_up(x) + (Dbar * xi_up(x - 1) / xi_up(x) if Dx else 0)
        return diag, Bbar, Dbar

    table = [coeffs(x) for x in range(N + 1)]
    out = {}
    for n in range(N + 1):
        E = energy(p, n)
        f = [Fraction(1)]
        for x in range(N):
            diag, Bbar, Dbar = table[x]
            prev = f[x - 1] if x > 0 else 0
            f.append(((diag - E) * f[x] - Dbar * prev) / Bbar)
        diag, Bbar, Dbar = table[N]
        last = (diag - E) * f[N] - Dbar * f[N - 1]
        out[n] = (f, last)
    return out


def exceptional_residuals(p: ParameterSet, ell: int) -> list[Fraction]:
    """Xi_{ell} and P_{ell,n} against the independently built exceptional objects."""
    D = (ell,)
    pX = exceptional_params(p, ell)
    pts = list(range(p.N + 2)) + off_grid_points(p)
    out = [denominator_poly(p, D, x) - exceptional_xi(pX, ell, x) for x in pts]
    for n, (f, last) in exceptional_polys(p, ell).items():
        out.append(last)
        out += [mi_poly(p, D, n, x) - f[x] for x in range(p.N + 1)]
    return out


# -- mirror ------------------------------------------------------------------------------------------

def mirror_constant(p: ParameterSet, n: int) -> Fraction:
    """Closed form of P_n(N; lambda)."""
    a, b, c, d = p.lam
    if p.is_q:
        q = p.q
        return (d / a) ** n * qpoch_multi((a * b / d, a * c / d), q, n) / qpoch_multi((b, c), q, n)
    return poch_multi((a + b - d, a + c - d), n) / poch_multi((b, c), n)


class DegenerateMirrorError(ParameterError):
    """The mirrored normalisation vanishes, so the reflected polynomial is undefined."""


def mirror_degenerate(p: ParameterSet, D, n: int) -> bool:
    """True when C_{D,n} or P_{D,n}(N) vanishes at the mirrored parameters.

    The first happens exactly when a virtual energy of the mirrored system
    meets an eigenvalue, i.e. c = v+1-n (resp. c = q^(v+1-n)) for some d_j = v.
    """
    D = _D(D)
    pm = mirror_params(p)
    return C_Dn(pm, D, n) == 0 or mi_poly_any(pm, D, n, p.N) == 0


def mirror_transform(p: ParameterSet, D, n: int, x: Point) -> Fraction:
    """A * P_{D,n}(N - x; mirrored lambda) with A^{-1} = P_{D,n}(N; mirrored lambda)."""
    D = _D(D)
    if mirror_degenerate(p, D, n):
        raise DegenerateMirrorError(f"mirror of D={D}, n={n} is degenerate at {p.label()}")
    pm = mirror_params(p)
    return mi_poly_any(pm, D, n, reflect(p, x)) / mi_poly_any(pm, D, n, p.N)


def mirror_residuals(p: ParameterSet, D, n: int) -> list[Fraction]:
    """Checks of the reflected polynomials.

    M = 0: P_n(N-x; l) = A P_n(x; l_m) with A from its closed form and from
    P_n(N; l).  Any M: both endpoint normalisations, and P_{D,n}(.; l_m)
    solves the similarity-transformed equation of the mirrored system at
    every grid point where its coefficients are finite.
    """
    D = _D(D)
    pm = mirror_params(p)
    N = p.N
    out = []
    if not D:
        A = mirror_constant(p, n)
        out.append(A - racah_poly(p, n, N))
        for x in range(N + 1):
            out.append(racah_poly(p, n, N - x) - A * racah_poly(pm, n, x))
        for x in off_grid_points(p):
            out.append(racah_poly(p, n, reflect(p, x)) - A * racah_poly(pm, n, x))
        return out
    out.append(mirror_transform(p, D, n, 0) - 1)
    f = lambda y: mi_poly_any(pm, D, n, y)
    for x in range(N + 1):
        try:
            r = similarity_apply(pm, D, f, x) - energy(pm, n) * f(x)
        except (SingularPointError, ZeroDivisionError):
            continue
        out.append(r)
    out.append(mirror_transform(p, D, n, N) * mi_poly_any(pm, D, n, N) - 1)
    return out


@dataclass(frozen=True)
class MiSystem:
    params: ParameterSet
    index_set: IndexSet
    xi_grid: GridFunction
    xi_grid_up: GridFunction
    C_D: Fraction
    psi_sq: GridFunction

    @classmethod
    def build(cls, p: ParameterSet, D) -> "MiSystem":
        I = IndexSet.of(D)
        up = shift(p, 1)
        return cls(p, I,
                   GridFunction.tabulate(lambda x: denominator_any(p, I.D, x), p.N + 1),
                   GridFunction.tabulate(lambda x: denominator_any(up, I.D, x), p.N + 1),
                   C_D(p, I.D),
                   GridFunction.tabulate(lambda x: psi_sq(p, I.D, x), p.N))

    def C_Dn(self, n: int) -> Fraction:
        return C_Dn(self.params, self.index_set.D, n)

    def d_tilde_sq(self, n: int) -> Fraction:
        return d_tilde_sq(self.params, self.index_set.D, n)
