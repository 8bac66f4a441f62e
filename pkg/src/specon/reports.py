"""Inequality reports and their deterministic JSON/CSV serialization.

Serialization is byte-stable: fixed key order, floats at 17 significant
digits, no computation at emit time.  Non-finite floats are emitted as the
strings "inf", "-inf", "nan" (JSON has no token for them).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

REL_TOL = 1e-12
SCHEMA_VERSION = 1

CSV_HEADER = ["schema_version", "name", "lhs", "rhs", "holds", "slack", "seed", "inputs", "caveats"]


@dataclass
class InequalityReport:
    """One checked inequality lhs <= rhs with provenance.

    ``holds`` allows a 1e-12 relative tolerance on the right side.  A report
    whose caveats start with "vacuous" carries raw numbers for a case where
    the bound is uninformative; such reports never count as failures.
    """

    name: str
    lhs: float
    rhs: float
    inputs: dict = field(default_factory=dict)
    caveats: list = field(default_factory=list)
    seed: int | None = None

    @property
    def holds(self) -> bool:
        return bool(self.lhs <= self.rhs + REL_TOL * abs(self.rhs))

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def vacuous(self) -> bool:
        return any(str(c).startswith("vacuous") for c in self.caveats)

    @property
    def passed(self) -> bool:
        return self.holds or self.vacuous

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "holds": self.holds,
            "slack": self.slack,
            "inputs": self.inputs,
            "caveats": list(self.caveats),
            "seed": self.seed,
        }


def format_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def dumps_stable(obj, indent: int = 0) -> str:
    """JSON with insertion-ordered keys and 17-significant-digit floats."""
    pad = " " * indent
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        out = obj.replace("\\", "\\\\").replace('"', '\\"')
        out = out.replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t")
        return f'"{out}"'
    if isinstance(obj, complex):
        return f"[{format_float(obj.real)}, {format_float(obj.imag)}]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}  {dumps_stable(str(k))}: {dumps_stable(v, indent + 2)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}  {dumps_stable(v, indent + 2)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    try:
        import numpy as np

        if isinstance(obj, np.integer):
            return str(int(obj))
        if isinstance(obj, np.floating):
            return format_float(float(obj))
        if isinstance(obj, np.complexfloating):
            return dumps_stable(complex(obj))
        if isinstance(obj, np.ndarray):
            return dumps_stable(obj.tolist(), indent)
    except ImportError:  # pragma: no cover
        pass
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _csv_cell(value) -> str:
    if isinstance(value, float):
        s = format_float(value).strip('"')
    elif isinstance(value, bool):
        s = "true" if value else "false"
    elif isinstance(value, (dict, list, tuple)):
        s = dumps_stable(value).replace("\n", " ").replace("  ", " ")
        while "  " in s:
            s = s.replace("  ", " ")
    elif value is None:
        s = ""
    else:
        s = str(value)
    if any(ch in s for ch in ',"\n'):
        s = '"' + s.replace('"', '""') + '"'
    return s


def reports_to_json(reports) -> str:
    doc = {"schema_version": SCHEMA_VERSION, "reports": [r.to_dict() for r in reports]}
    return dumps_stable(doc) + "\n"


def reports_to_csv(reports) -> str:
    lines = [",".join(CSV_HEADER)]
    for r in reports:
        d = r.to_dict()
        row = [SCHEMA_VERSION, d["name"], d["lhs"], d["rhs"], d["holds"], d["slack"],
               d["seed"], d["inputs"], d["caveats"]]
        lines.append(",".join(_csv_cell(c) for c in row))
    return "\n".join(lines) + "\n"
