"""Verification outcomes and their JSON / TSV renderings."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction


def _num(x):
    if x is None:
        return None
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else str(x)


@dataclass
class Cell:
    """One checked instance: a (m, a) cell of a family, or one n of a pair."""

    order: Fraction
    passed: bool
    first_mismatch_exponent: Fraction | None = None
    m: int | None = None
    a: int | None = None
    n: int | None = None
    lhs_time_ms: float = 0.0
    rhs_time_ms: float = 0.0
    detail: str = ""

    def to_json(self, timings: bool = True) -> dict:
        out = {}
        for key in ("m", "a", "n"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        out["order"] = _num(self.order)
        out["pass"] = self.passed
        out["first_mismatch_exponent"] = _num(self.first_mismatch_exponent)
        if timings:
            out["lhs_time_ms"] = round(self.lhs_time_ms, 3)
            out["rhs_time_ms"] = round(self.rhs_time_ms, 3)
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class Report:
    family: str
    order: Fraction
    cells: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cells)

    def failures(self) -> list:
        return [c for c in self.cells if not c.passed]

    def sorted(self) -> Report:
        key = lambda c: (c.m if c.m is not None else -1, c.a if c.a is not None else -1,
                         c.n if c.n is not None else -1)
        return Report(self.family, self.order, sorted(self.cells, key=key))

    def merge(self, other: Report) -> Report:
        return Report(self.family, self.order, self.cells + other.cells)

    def to_json(self, timings: bool = True) -> dict:
        return {"family": self.family, "order": _num(self.order),
                "cells": [c.to_json(timings) for c in self.cells]}

    def dumps(self, fmt: str = "json", timings: bool = True) -> str:
        if fmt == "json":
            return json.dumps(self.to_json(timings), indent=2) + "\n"
        if fmt == "tsv":
            return self.to_tsv(timings)
        raise ValueError(f"unknown format {fmt!r}")

    def to_tsv(self, timings: bool = True) -> str:
        cols = ["family", "m", "a", "n", "order", "pass", "first_mismatch_exponent"]
        if timings:
            cols += ["lhs_time_ms", "rhs_time_ms"]
        lines = ["\t".join(cols)]
        for c in self.cells:
            row = c.to_json(timings)
            row["family"] = self.family
            lines.append("\t".join("" if row.get(k) is None else str(row[k]).lower() if k == "pass" else str(row[k])
                                   for k in cols))
        return "\n".join(lines) + "\n"
