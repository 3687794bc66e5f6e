"""Stable text serialization: CSV tables and the JSON report envelope.

Floats are rendered with %.17g everywhere so that re-parsing reproduces the
exact binary value; this is what makes rerun round-trips bit-exact.
"""
from __future__ import annotations

import json
from typing import Iterable


def fmt(x) -> str:
    """Canonical scalar rendering (17 significant digits for floats)."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return "%.17g" % x
    return str(x)


def _rows(header: str, rows: Iterable[Iterable]) -> str:
    lines = [header]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def indicial_csv(reports, comments: Iterable[str] = ()) -> str:
    """One row per (l, 2mV0) report; fall-to-center rows carry nan columns."""
    out = "".join(f"# {c}\n" for c in comments)
    nan = float("nan")
    rows = []
    for rep in reports:
        if rep.fall_to_center:
            rows.append((rep.l, rep.two_m_V0, nan, nan, nan, False, False, rep.regime))
        else:
            rows.append(
                (rep.l, rep.two_m_V0, rep.P, rep.a_plus, rep.a_minus,
                 rep.minus_l2, rep.minus_bc, rep.regime)
            )
    return out + _rows("l,two_m_V0,P,a_plus,a_minus,minus_l2,minus_bc,regime", rows)


def spectrum_csv(result, comments: Iterable[str] = ()) -> str:
    out = "".join(f"# {c}\n" for c in comments)
    rows = [(lv.n_r, lv.E, lv.match_defect, lv.node_count) for lv in result.levels]
    return out + _rows("n_r,E,match_defect,node_count", rows)


def residual_csv(report, comments: Iterable[str] = ()) -> str:
    out = "".join(f"# {c}\n" for c in comments)
    return out + _rows("a,S", zip(report.radii, report.S_values))


def wavefunction_csv(r, u, comments: Iterable[str] = ()) -> str:
    out = "".join(f"# {c}\n" for c in comments)
    return out + _rows("r,u", zip(r.tolist(), u.tolist()))


def _canonical(obj):
    """Make a structure JSON-clean: arrays to lists, non-finite floats to null."""
    if isinstance(obj, dict):
        return {str(k): _canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_canonical(v) for v in obj]
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        return obj if obj == obj and abs(obj) != float("inf") else None
    if hasattr(obj, "tolist"):
        return _canonical(obj.tolist())
    if hasattr(obj, "item"):
        return _canonical(obj.item())
    return obj


def report_json(config: dict, results: dict, diagnostics: dict) -> str:
    # repr-based float rendering round-trips exactly, so identical runs
    # serialize to identical bytes
    doc = {
        "config": _canonical(config),
        "results": _canonical(results),
        "diagnostics": _canonical(diagnostics),
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"
