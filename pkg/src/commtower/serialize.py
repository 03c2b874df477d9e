"""JSON encoding of all value types.

Deterministic layout: series terms sorted graded-lex, tower entries sorted
by (a+b, a), group-element coefficients sorted by index, rationals as
decimal strings so arbitrary precision survives the round trip.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional

from . import ratmat
from .actions import GLElement, GMinusElement, GPlusElement
from .kp import AMatrixSeries
from .series import CoordinateMap, DomainError, Series, SeriesMatrix, grlex_key
from .tower import Report, Tower, window_cells


class FormatError(ValueError):
    """Input JSON does not match the expected schema."""


def _frac_to_json(c: Fraction) -> dict:
    return {"n": str(c.numerator), "d": str(c.denominator)}


def _frac_from_json(obj) -> Fraction:
    try:
        return Fraction(int(obj["n"]), int(obj["d"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad rational: {obj!r}") from exc


def series_to_json(s: Series) -> dict:
    terms = []
    for mono, c in sorted(s.terms.items(), key=lambda kv: grlex_key(kv[0])):
        entry = {"exp": list(mono)}
        entry.update(_frac_to_json(c))
        terms.append(entry)
    return {"num_vars": s.num_vars, "trunc_degree": s.trunc_degree, "terms": terms}


def series_from_json(obj) -> Series:
    try:
        terms = {tuple(t["exp"]): _frac_from_json(t) for t in obj["terms"]}
        return Series(obj["num_vars"], obj["trunc_degree"], terms)
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad series object: {exc}") from exc


def matrix_to_json(mat: SeriesMatrix) -> dict:
    return {"m": mat.m,
            "entries": [[series_to_json(s) for s in row] for row in mat.entries]}


def matrix_from_json(obj) -> SeriesMatrix:
    try:
        return SeriesMatrix([[series_from_json(s) for s in row]
                             for row in obj["entries"]])
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad matrix object: {exc}") from exc


def rat_matrix_to_json(mat: ratmat.Mat) -> dict:
    return {"m": len(mat), "entries": [[_frac_to_json(c) for c in row] for row in mat]}


def rat_matrix_from_json(obj) -> ratmat.Mat:
    try:
        return ratmat.as_mat([[_frac_from_json(c) for c in row]
                              for row in obj["entries"]])
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError, DomainError) as exc:
        raise FormatError(f"bad rational matrix: {exc}") from exc


def tower_to_json(tower: Tower) -> dict:
    entries = [{"a": a, "b": b, "matrix": matrix_to_json(tower[(a, b)])}
               for a, b in window_cells(tower.window_b)]
    return {"m": tower.m, "num_vars": tower.num_vars,
            "trunc_degree": tower.trunc_degree, "window_B": tower.window_b,
            "entries": entries}


def tower_from_json(obj) -> Tower:
    try:
        entries = {(e["a"], e["b"]): matrix_from_json(e["matrix"])
                   for e in obj["entries"]}
        return Tower(obj["m"], obj["num_vars"], obj["trunc_degree"],
                     obj["window_B"], entries)
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad tower object: {exc}") from exc


def element_to_json(element) -> dict:
    if isinstance(element, GPlusElement):
        kind, coeffs = "gplus", element.coeffs
    elif isinstance(element, GMinusElement):
        kind, coeffs = "gminus", element.coeffs
    elif isinstance(element, GLElement):
        return {"kind": "gl",
                "coeffs": [{"l": 0, "matrix": rat_matrix_to_json(element.matrix)}]}
    else:
        raise TypeError(f"not a group element: {type(element).__name__}")
    return {"kind": kind,
            "coeffs": [{"l": l, "matrix": rat_matrix_to_json(coeffs[l])}
                       for l in sorted(coeffs)]}


def element_from_json(obj):
    try:
        kind = obj["kind"]
        coeffs = {e["l"]: rat_matrix_from_json(e["matrix"]) for e in obj["coeffs"]}
    except FormatError:
        raise
    except (KeyError, TypeError) as exc:
        raise FormatError(f"bad group element: {exc}") from exc
    if kind == "gplus":
        return GPlusElement(coeffs)
    if kind == "gminus":
        return GMinusElement(coeffs)
    if kind == "gl":
        if list(coeffs) != [0]:
            raise FormatError("gl element must have exactly the l=0 coefficient")
        try:
            return GLElement(coeffs[0])
        except DomainError as exc:
            raise FormatError(str(exc)) from exc
    raise FormatError(f"unknown element kind: {kind!r}")


def a_series_to_json(a: AMatrixSeries) -> dict:
    return {"m": a.m, "z_trunc": a.z_trunc,
            "coeffs": [rat_matrix_to_json(c) for c in a.coefficients]}


def a_series_from_json(obj) -> AMatrixSeries:
    try:
        return AMatrixSeries(obj["m"], [rat_matrix_from_json(c) for c in obj["coeffs"]])
    except FormatError:
        raise
    except (KeyError, TypeError, DomainError) as exc:
        raise FormatError(f"bad A(z) object: {exc}") from exc


def coordinate_map_to_json(cmap: CoordinateMap) -> dict:
    return {"num_vars": cmap.num_vars, "trunc_degree": cmap.trunc_degree,
            "components": [series_to_json(c) for c in cmap.components]}


def coordinate_map_from_json(obj) -> CoordinateMap:
    try:
        return CoordinateMap([series_from_json(c) for c in obj["components"]])
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad coordinate map: {exc}") from exc


def report_to_json(report: Report) -> List[dict]:
    return [{"name": c.name, "cell": list(c.cell) if isinstance(c.cell, tuple) else c.cell,
             "status": "pass" if c.ok else "fail", "detail": c.detail}
            for c in report.checks]


def normalization_result_to_json(result) -> dict:
    return {
        "gl": rat_matrix_to_json(result.gl.matrix) if result.gl is not None else None,
        "s_series": [rat_matrix_to_json(c) for c in result.s_series],
        "r_factors": [{"l": l, "matrix": rat_matrix_to_json(mat)}
                      for l, mat in result.r_factors],
        "coordinate_map": coordinate_map_to_json(result.coordinate_map),
        "normalized": tower_to_json(result.normalized),
        "log": report_to_json(result.log),
        "recovered_canonical_form": result.recovered_canonical_form,
    }
