"""Run configurations, verification suites and machine-readable reports."""
from __future__ import annotations

import itertools
import json
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import crum
from . import multi_indexed as mi
from .etapoly import BoundaryRootError, NotPolynomialError
from .lattice import (
    SingularPointError,
    apply_difference_op,
    completeness_residuals,
    energy,
    ground_weight_sq,
    jacobi_matrix,
    mp_from_fraction,
    norm_sq,
    off_grid_points,
    orthonormal_matrix,
    potentials,
    racah_poly,
)
from .params import (
    QRACAH,
    RACAH,
    ParameterError,
    ParameterSet,
    frac,
    shift,
    validate_ranges,
    virtual_index_set,
)
from .virtual import (
    twist_relation_residuals,
    twisted_sign_violations,
    virtual_energy,
    virtual_residual,
    xi_poly,
)

SCHEMA = "mi-racah/1"

CHECKS = (
    "range", "original-eigen", "orthogonality", "completeness", "twist-relation",
    "virtual-equation", "chain", "norms", "xi-positivity", "degrees", "leading-coeffs",
    "pd0-identity", "shape-invariance", "shifts", "similarity-eigen", "charpoly",
    "order-independence", "reduction-m1", "reduction-level0", "mirror", "zeros",
    "float-oracle",
)

# checks that do not depend on the index set run once per configuration
GLOBAL_CHECKS = frozenset({"range", "original-eigen", "orthogonality", "completeness",
                           "twist-relation", "virtual-equation", "xi-positivity",
                           "reduction-m1"})

FLOAT_TOLERANCE_EXP = -40
FLOAT_DIGITS = 45


class ConfigError(ValueError):
    pass


def _rat(s) -> Fraction:
    try:
        return frac(s)
    except (ValueError, TypeError, ZeroDivisionError) as e:
        raise ConfigError(f"not an exact rational: {s!r}") from e


def parse_index_set(spec) -> tuple | str:
    """'1,2' or [1, 2] -> (1, 2); 'all' is kept; '' or [] is the empty set."""
    if spec is None:
        return ()
    if isinstance(spec, str):
        spec = spec.strip()
        if spec == "all":
            return "all"
        items = [s for s in spec.split(",") if s.strip()]
    else:
        items = list(spec)
    try:
        D = tuple(sorted(int(v) for v in items))
    except (TypeError, ValueError) as e:
        raise ConfigError(f"bad index set {spec!r}") from e
    if len(set(D)) != len(D) or any(d < 1 for d in D):
        raise ConfigError(f"index set must hold distinct positive integers, got {spec!r}")
    return D


def parse_checks(spec) -> tuple[str, ...]:
    if spec is None or spec == "all" or spec == ["all"]:
        return CHECKS
    names = [s.strip() for s in spec.split(",")] if isinstance(spec, str) else list(spec)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise ConfigError(f"unknown checks {unknown}; choose from {', '.join(CHECKS)}")
    return tuple(n for n in CHECKS if n in names)


@dataclass(frozen=True)
class RunConfig:
    family: str
    N: int
    b: Fraction
    c: Fraction
    d: Fraction
    q: Fraction | None = None
    D: tuple | str = ()
    checks: tuple = CHECKS
    precision_bits: int = 256
    out: str | None = None
    format: str = "json"
    allow_unvalidated: bool = False
    timings: bool = False

    @classmethod
    def from_dict(cls, raw: dict) -> "RunConfig":
        raw = {k.replace("-", "_"): v for k, v in raw.items()}
        known = set(cls.__dataclass_fields__)
        extra = set(raw) - known
        if extra:
            raise ConfigError(f"unknown config keys {sorted(extra)}")
        for key in ("family", "N", "b", "c", "d"):
            if raw.get(key) is None:
                raise ConfigError(f"missing config key {key!r}")
        family = str(raw["family"]).lower()
        if family not in (RACAH, QRACAH):
            raise ConfigError(f"family must be racah or qracah, got {family!r}")
        q = raw.get("q")
        if family == QRACAH and q is None:
            raise ConfigError("qracah needs q")
        if family == RACAH and q is not None:
            raise ConfigError("racah takes no q")
        fmt = raw.get("format") or "json"
        if fmt not in ("json", "csv"):
            raise ConfigError(f"format must be json or csv, got {fmt!r}")
        try:
            N = int(raw["N"])
            bits = int(raw.get("precision_bits") or 256)
        except (TypeError, ValueError) as e:
            raise ConfigError(str(e)) from e
        if N < 0 or bits < 64:
            raise ConfigError("N must be >= 0 and precision_bits >= 64")
        return cls(family, N, _rat(raw["b"]), _rat(raw["c"]), _rat(raw["d"]),
                   None if q is None else _rat(q), parse_index_set(raw.get("D")),
                   parse_checks(raw.get("checks")), bits, raw.get("out"), fmt,
                   bool(raw.get("allow_unvalidated", False)), bool(raw.get("timings", False)))

    def params(self) -> ParameterSet:
        try:
            if self.family == QRACAH:
                return ParameterSet.qracah(self.N, self.q, self.b, self.c, self.d)
            return ParameterSet.racah(self.N, self.b, self.c, self.d)
        except ParameterError as e:
            raise ConfigError(str(e)) from e

    def index_sets(self, p: ParameterSet) -> list[tuple]:
        if self.D == "all":
            V = virtual_index_set(p)
            return [D for M in range(1, len(V) + 1) for D in itertools.combinations(V, M)]
        return [self.D]

    def as_dict(self) -> dict:
        out = {"family": self.family, "N": self.N, "b": str(self.b), "c": str(self.c),
               "d": str(self.d)}
        if self.q is not None:
            out["q"] = str(self.q)
        out["D"] = self.D if self.D == "all" else list(self.D)
        out["checks"] = list(self.checks)
        out["precision_bits"] = self.precision_bits
        out["allow_unvalidated"] = self.allow_unvalidated
        return out


@dataclass
class CheckRecord:
    name: str
    case: str
    status: str
    exact_residuals: list = field(default_factory=list)
    float_residuals: list = field(default_factory=list)
    runtime_ms: float | None = None
    detail: str = ""


@dataclass
class Report:
    config: dict
    params: str
    validated: bool
    records: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.status != "fail" for r in self.records)

    def summary(self) -> dict:
        counts = {"pass": 0, "fail": 0, "skip": 0}
        for r in self.records:
            counts[r.status] += 1
        return counts

    def to_dict(self) -> dict:
        return {"schema": SCHEMA, "config": self.config, "params": self.params,
                "validated": self.validated, "summary": self.summary(),
                "records": [asdict(r) for r in self.records]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


# -- record helpers ----------------------------------------------------------------------

class _Skip(Exception):
    pass


def _exact(residuals, extra_ok: bool = True, detail: str = "") -> tuple:
    res = [str(frac(r)) for r in residuals]
    ok = extra_ok and all(r == "0" for r in res)
    if not ok and all(r == "0" for r in res):
        # the failing condition is not a residual (sign, count, degree); mark it
        res.append("1")
    return ("pass" if ok else "fail"), res, [], detail


def _fmt_float(ctx, v) -> str:
    return ctx.nstr(v, FLOAT_DIGITS, min_fixed=1, max_fixed=0)


def _case(D, n=None, extra="") -> str:
    s = "D=" + (",".join(map(str, D)) if D else "{}")
    if n is not None:
        s += f" n={n}"
    return s + (f" {extra}" if extra else "")


# -- suites --------------------------------------------------------------------------------

def _grid_and_offgrid(p: ParameterSet) -> list:
    return list(range(p.N + 1)) + off_grid_points(p)[:3]


def check_original_eigen(p, D, cfg):
    res = []
    for n in range(p.N + 1):
        f = lambda y, n=n: racah_poly(p, n, y)
        res += [apply_difference_op(p, f, x) - energy(p, n) * f(x) for x in _grid_and_offgrid(p)]
    return _exact(res)


def check_orthogonality(p, D, cfg):
    w = ground_weight_sq(p)
    N = p.N
    res = []
    for n in range(N + 1):
        for m in range(N + 1):
            s = sum(w[x] * racah_poly(p, n, x) * racah_poly(p, m, x) for x in range(N + 1))
            res.append(s - (1 / norm_sq(p, n) if n == m else 0))
    return _exact(res)


def check_completeness(p, D, cfg):
    N = p.N
    exact = completeness_residuals(p)
    diag = [exact[x * (N + 2)] for x in range(N + 1)]
    ctx, U = orthonormal_matrix(p, cfg.precision_bits)
    G = U.T * U
    tol = ctx.mpf(10) ** FLOAT_TOLERANCE_EXP
    floats = [abs(G[x, y]) for x in range(N + 1) for y in range(N + 1) if x != y]
    ok = all(r == 0 for r in diag) and all(v <= tol for v in floats)
    status, res, _, _ = _exact(diag, ok)
    return status, res, [_fmt_float(ctx, v) for v in floats], \
        f"exact off-diagonal residuals all zero: {not any(exact)}"


def check_twist_relation(p, D, cfg):
    diag, off = twist_relation_residuals(p)
    M = max(len(D), 1)
    bad = twisted_sign_violations(p, M)
    return _exact(diag + off, not bad, "; ".join(bad))


def check_virtual_equation(p, D, cfg):
    res = []
    bad = []
    for v in virtual_index_set(p):
        vals = [virtual_residual(p, v, x) for x in range(p.N + 1)]
        res += vals[:-1]
        if vals[-1] == 0:
            bad.append(f"v={v}: boundary residual vanishes")
    return _exact(res, not bad, "; ".join(bad))


def check_xi_positivity(p, D, cfg):
    bad = []
    for v in virtual_index_set(p):
        bad += [f"xi_{v}({x}) = {xi_poly(p, v, x)}" for x in range(p.N + 2)
                if not xi_poly(p, v, x) > 0]
        if not virtual_energy(p, v) < 0:
            bad.append(f"E~_{v} = {virtual_energy(p, v)}")
    if D:
        rep = crum.sign_checks(p, D)
        bad += rep.messages
    return _exact([], not bad, "; ".join(bad))


def check_chain(p, D, cfg):
    return _exact(crum.chain_residuals(p, D))


def check_norms(p, D, cfg):
    return _exact(crum.norm_residuals(p, D) + mi.orthogonality_residuals(p, D))


def check_degrees(p, D, cfg):
    ell = sum(D) - len(D) * (len(D) - 1) // 2
    got = [mi.fit_denominator(p, D).degree]
    want = [ell]
    for n in range(p.N + 1):
        got.append(mi.fit_mi_poly(p, D, n).degree)
        want.append(ell + n)
    return _exact([g - w for g, w in zip(got, want)], detail=f"degrees {got}")


def check_leading(p, D, cfg):
    res = []
    notes = []
    for n in range(p.N + 1):
        cx, cp = mi.leading_coefficients(p, D, n)
        fx, fp = mi.fit_denominator(p, D), mi.fit_mi_poly(p, D, n)
        if cx == 0 or cp == 0:
            notes.append(f"n={n}: closed form vanishes, fitted degrees {fx.degree}, {fp.degree}")
            continue
        if n == 0:
            res.append(fx.leading - cx)
        res.append(fp.leading - cp)
    return _exact(res, detail="; ".join(notes) or f"c_Xi = {mi.leading_coefficients(p, D, 0)[0]}")


def check_pd0(p, D, cfg):
    up = shift(p, 1)
    pts = list(range(p.N + 1)) + off_grid_points(p)
    return _exact([mi.mi_poly_any(p, D, 0, x) - mi.denominator_any(up, D, x) for x in pts])


def check_shape(p, D, cfg):
    if p.N < 1:
        raise _Skip("needs N >= 1")
    return _exact(mi.shape_invariance_residuals(p, D))


def check_shifts(p, D, cfg):
    res = []
    for n in range(1, p.N + 1):
        for x in _grid_and_offgrid(p):
            fwd, bwd = mi.shift_residuals(p, D, n, x)
            res += [fwd, bwd]
    return _exact(res)


def check_similarity(p, D, cfg):
    res = []
    for n in range(p.N + 1):
        res += mi.eigen_residuals(p, D, n)
        res += crum.eigen_residuals(p, D, n)
        if len(D) <= p.N:
            res += [mi.mi_poly(p, D, n, x) - mi.mi_poly_casoratian(p, D, n, x)
                    for x in range(p.N + 1) if mi.varphi_M(p, len(D) + 1, x) != 0]
    res += mi.crum_agreement_residuals(p, D)
    return _exact(res)


def check_charpoly(p, D, cfg):
    return _exact(mi.charpoly_values(p, D))


def check_order(p, D, cfg):
    if len(D) < 2:
        raise _Skip("needs at least two indices")
    info = crum.order_independence(p, D)
    signs = ", ".join(f"{''.join(map(str, k))}:{v:+d}" for k, v in info["signs"].items())
    return _exact(info["residuals"], info["potentials_equal"], f"signs {signs}")


def check_reduction_m1(p, D, cfg):
    res = []
    for ell in virtual_index_set(p):
        res += mi.exceptional_residuals(p, ell)
    return _exact(res, detail=f"ell in {virtual_index_set(p)}")


def check_reduction_level0(p, D, cfg):
    left = tuple(d + 1 for d in D)
    res = []
    for n in range(p.N + 1):
        res += mi.level0_residuals(p, left, n)
    res += mi.level0_denominator_residuals(p, left)
    lhs = "{" + ",".join(map(str, left + (0,))) + "}"
    return _exact(res, detail=f"{lhs} at lambda vs {set(D) or '{}'} at lambda+delta~ "
                               f"({shift(p, 0, 1).label()})")


def check_mirror(p, D, cfg):
    res = []
    skipped = []
    for n in range(p.N + 1):
        res += mi.mirror_residuals(p, (), n)
        if D:
            if mi.mirror_degenerate(p, D, n):
                skipped.append(n)
                continue
            res += mi.mirror_residuals(p, D, n)
    if D and len(skipped) == p.N + 1:
        status, r, f, _ = _exact(res)
        return status, r, f, "M=0 only; D mirror degenerate for all n"
    return _exact(res, detail=f"degenerate n {skipped}" if skipped else "")


def check_float_oracle(p, D, cfg):
    if not p.validated:
        raise _Skip("square roots need validated parameters")
    Bg, Dg = mi.potentials_from_xi(p, D) if D else potentials(p)
    J = jacobi_matrix(Bg, Dg, cfg.precision_bits)
    ctx = J.context()
    ev = J.eigenvalues()
    diffs = [abs(e - mp_from_fraction(ctx, energy(p, n))) for n, e in enumerate(ev)]
    tol = ctx.mpf(10) ** FLOAT_TOLERANCE_EXP
    return ("pass" if all(v <= tol for v in diffs) else "fail"), [], \
        [_fmt_float(ctx, v) for v in diffs], f"tolerance 1e{FLOAT_TOLERANCE_EXP}"


SUITES = {
    "original-eigen": check_original_eigen,
    "orthogonality": check_orthogonality,
    "completeness": check_completeness,
    "twist-relation": check_twist_relation,
    "virtual-equation": check_virtual_equation,
    "chain": check_chain,
    "norms": check_norms,
    "xi-positivity": check_xi_positivity,
    "degrees": check_degrees,
    "leading-coeffs": check_leading,
    "pd0-identity": check_pd0,
    "shape-invariance": check_shape,
    "shifts": check_shifts,
    "similarity-eigen": check_similarity,
    "charpoly": check_charpoly,
    "order-independence": check_order,
    "reduction-m1": check_reduction_m1,
    "reduction-level0": check_reduction_level0,
    "mirror": check_mirror,
    "float-oracle": check_float_oracle,
}


def _zeros_records(p, D, cfg) -> list[CheckRecord]:
    out = []
    for n in range(1, p.N + 1):
        t0 = time.perf_counter()
        try:
            count = mi.count_zeros(p, D, n)
            status, res, _, _ = _exact([count - n], detail="")
            detail = f"{count} zeros in (0, eta(N))"
        except BoundaryRootError as e:
            status, res, detail = "fail", ["1"], f"boundary degeneracy: {e}"
        out.append(CheckRecord("zeros", _case(D, n), status, res, [],
                               _ms(t0, cfg), detail))
    return out


def _ms(t0: float, cfg: RunConfig):
    return round((time.perf_counter() - t0) * 1000, 3) if cfg.timings else None


def _run_one(name: str, p: ParameterSet, D: tuple, cfg: RunConfig) -> list[CheckRecord]:
    if name == "zeros":
        return _zeros_records(p, D, cfg)
    t0 = time.perf_counter()
    case = "global" if name in GLOBAL_CHECKS else _case(D)
    try:
        status, res, flts, detail = SUITES[name](p, D, cfg)
    except _Skip as e:
        status, res, flts, detail = "skip", [], [], str(e)
    except mi.DegenerateMirrorError as e:
        status, res, flts, detail = "skip", [], [], str(e)
    except (SingularPointError, ZeroDivisionError, NotPolynomialError, ParameterError) as e:
        status, res, flts, detail = "fail", ["1"], [], f"{type(e).__name__}: {e}"
    return [CheckRecord(name, case, status, res, flts, _ms(t0, cfg), detail)]


def _range_record(p: ParameterSet, D: tuple, cfg: RunConfig) -> CheckRecord:
    t0 = time.perf_counter()
    diags = validate_ranges(p, max(len(D), 1))
    bad = [dg for dg in diags if not dg.passed]
    vm = len(virtual_index_set(p))
    outside = [d for d in D if d > vm]
    texts = [f"{dg.text} fails (slack {dg.slack})" for dg in bad]
    if outside:
        texts.append(f"indices {outside} exceed v_max = {vm}")
    detail = "; ".join(texts)
    # a strict inequality that fails with slack 0 is marked by 1
    res = [str(dg.slack) if dg.slack else "1" for dg in bad] + ["1"] * bool(outside)
    return CheckRecord("range", _case(D) if len(cfg.index_sets(p)) > 1 else "global",
                       "fail" if detail else "pass", res, [], _ms(t0, cfg),
                       detail or "all ranges hold")


def run(cfg: RunConfig) -> Report:
    """Execute the requested suites; ordering is fixed by CHECKS and the index sets."""
    p = cfg.params()
    report = Report(cfg.as_dict(), p.label(), p.validated)
    index_sets = cfg.index_sets(p) or [()]
    range_recs = [_range_record(p, D, cfg) for D in index_sets]
    if "range" in cfg.checks:
        seen = set()
        for r in range_recs:
            if r.case not in seen:
                report.records.append(r)
                seen.add(r.case)
    blocked = any(r.status == "fail" for r in range_recs) and not cfg.allow_unvalidated
    for name in cfg.checks:
        if name == "range":
            continue
        sets = [()] if name in GLOBAL_CHECKS else index_sets
        for D in sets:
            if blocked:
                case = "global" if name in GLOBAL_CHECKS else _case(D)
                report.records.append(CheckRecord(name, case, "skip", [], [], None,
                                                  "range check failed"))
                continue
            report.records.extend(_run_one(name, p, D, cfg))
    return report


def run_dict(raw: dict) -> dict:
    """Picklable entry point for batch workers."""
    return run(RunConfig.from_dict(raw)).to_dict()
