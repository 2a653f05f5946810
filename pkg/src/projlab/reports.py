"""Deterministic JSON and CSV serialisation with exact "p/q" scalars.

Round-trips are bit-exact: scalars are written as numerator/denominator
strings and parsed back into the same rationals.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

from .hilbert import Vec
from .subspaces import AlternateResult


def frac_str(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_frac(s: str) -> Fraction:
    return Fraction(s)


def gram_to_json(g: list[list[Fraction]]) -> str:
    return json.dumps([[frac_str(x) for x in row] for row in g],
                      separators=(",", ":")) + "\n"


def gram_from_json(text: str) -> list[list[Fraction]]:
    return [[parse_frac(x) for x in row] for row in json.loads(text)]


def gram_to_csv(g: list[list[Fraction]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in g:
        writer.writerow([frac_str(x) for x in row])
    return buf.getvalue()


def gram_from_csv(text: str) -> list[list[Fraction]]:
    reader = csv.reader(io.StringIO(text))
    return [[parse_frac(x) for x in row] for row in reader if row]


def vec_obj(v: Vec) -> dict:
    return {g.label(): frac_str(c) for g, c in v.by_generator().items()}


def trace_to_json(result: AlternateResult) -> str:
    from .hilbert import norm_sq
    rows = [{"step": i, "coeffs": vec_obj(v), "norm_squared": frac_str(norm_sq(v))}
            for i, v in enumerate(result.trace)]
    payload = {"fixed": result.fixed, "fixed_at_step": result.steps, "trace": rows}
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def report_json(op: str, params: dict, verdict: str, details) -> str:
    payload = {"op": op, "params": params, "verdict": verdict, "details": details}
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def rank_table_csv(rows: list[dict]) -> str:
    """Rank tables with fixed columns (family, N, b, element_tag, rank)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["family", "N", "b", "element_tag", "rank"])
    for row in rows:
        writer.writerow([row["family"], row["N"], row["b"],
                         row["element_tag"], row["rank"]])
    return buf.getvalue()


def table_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()
