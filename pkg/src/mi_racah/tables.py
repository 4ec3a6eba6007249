"""Exact tables of the denominator polynomial, the multi-indexed polynomials and the spectrum."""
from __future__ import annotations

import csv
import io
import json

from . import multi_indexed as mi
from .lattice import energy
from .params import ParameterSet
from .verify import SCHEMA, RunConfig

CSV_COLUMNS = ("table", "D", "n", "x", "power", "quantity", "value")


def _dstr(D) -> str:
    return ",".join(map(str, D))


def build_tables(p: ParameterSet, D: tuple) -> dict:
    """Coefficient, grid and spectrum tables for one index set; every value a "p/q" string."""
    M = len(D)
    xi = mi.fit_denominator(p, D)
    polys = [mi.fit_mi_poly(p, D, n) for n in range(p.N + 1)]
    grid = []
    for x in range(p.N + 1):
        row = {"x": x,
               "B_D": str(mi.B_D(p, D, x)),
               "D_D": str(mi.D_D(p, D, x)),
               "psi_sq": str(mi.psi_sq(p, D, x))}
        for n in range(p.N + 1):
            row[f"P_{n}"] = str(mi.mi_poly_any(p, D, n, x))
        grid.append(row)
    return {
        "D": list(D),
        "ell": sum(D) - M * (M - 1) // 2,
        "eta_parameters": {"Xi": mi.xi_eta_params(p, M).label(),
                           "P": mi.p_eta_params(p, M).label()},
        "xi_coefficients": [str(c) for c in xi.coeffs],
        "p_coefficients": [[str(c) for c in P.coeffs] for P in polys],
        "grid": grid,
        "spectrum": [{"n": n, "E_n": str(energy(p, n))} for n in range(p.N + 1)],
    }


def table_document(cfg: RunConfig) -> dict:
    p = cfg.params()
    sets = cfg.index_sets(p) or [()]
    return {"schema": SCHEMA, "config": cfg.as_dict(), "params": p.label(),
            "tables": [build_tables(p, D) for D in sets]}


def to_json(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def to_csv(doc: dict) -> str:
    """Long format: one value per row, see CSV_COLUMNS."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for t in doc["tables"]:
        D = _dstr(t["D"])
        for k, c in enumerate(t["xi_coefficients"]):
            w.writerow(("xi_coeff", D, "", "", k, "Xi", c))
        for n, coeffs in enumerate(t["p_coefficients"]):
            for k, c in enumerate(coeffs):
                w.writerow(("p_coeff", D, n, "", k, "P", c))
        for row in t["grid"]:
            for key, val in row.items():
                if key != "x":
                    n = key[2:] if key.startswith("P_") else ""
                    w.writerow(("grid", D, n, row["x"], "", "P" if n else key, val))
        for row in t["spectrum"]:
            w.writerow(("spectrum", D, row["n"], "", "", "E", row["E_n"]))
    return buf.getvalue()
