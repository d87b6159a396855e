"""Job configuration and the JSON result document.

Schema (format_version 1)::

    polynomial = [{"coeff": "p/q", "q": int, "t": [int, ...]}, ...]   # sorted by (q, t)
    value      = {"num": polynomial, "den": polynomial}
    block      = {"degree": k, "basis": [[int, ...], ...],
                  "entries": [{"row": r, "col": c, "value": value}, ...]}  # sorted by (row, col)

``t`` always has one exponent per weight symbol in the document.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .qfield import LaurentPoly, RationalFn, encode
from .repspaces import BlockMatrix

FORMAT_VERSION = 1

CHECKS = ("idempotent", "intertwiner", "ef_identity", "oracle", "pascal", "relations", "coassoc")

_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class ConfigError(ValueError):
    pass


@dataclass
class JobConfig:
    weights: list[str]
    max_degree: int
    checks: list[str] = field(default_factory=list)
    specialization: dict[str, int] | None = None
    output_path: str | None = None
    pascal_kmax: int = 30

    def __post_init__(self):
        if len(set(self.weights)) != len(self.weights):
            raise ConfigError("weight names must be unique")
        for w in self.weights:
            if not _NAME.match(w):
                raise ConfigError(f"bad weight name {w!r}")
        if self.max_degree < 0:
            raise ConfigError("max degree must be non-negative")
        if self.pascal_kmax < 1:
            raise ConfigError("pascal range must be positive")
        for c in self.checks:
            if c not in CHECKS:
                raise ConfigError(f"unknown check {c!r}; choose from {', '.join(CHECKS)}")
        if self.specialization:
            extra = set(self.specialization) - set(self.weights)
            if extra:
                raise ConfigError(f"specialization names unknown weights: {', '.join(sorted(extra))}")

    def symbol_index(self, name: str) -> int:
        return self.weights.index(name) + 1

    def assignment(self) -> dict[int, int] | None:
        """Specialization keyed by weight-symbol index."""
        if self.specialization is None:
            return None
        return {self.symbol_index(n): v for n, v in self.specialization.items()}

    def echo(self) -> dict[str, Any]:
        out = {
            "weights": list(self.weights),
            "max_degree": self.max_degree,
            "checks": list(self.checks),
            "specialization": (None if self.specialization is None
                               else {n: self.specialization[n] for n in self.weights
                                     if n in self.specialization}),
        }
        if "pascal" in self.checks:
            out["pascal_kmax"] = self.pascal_kmax
        return out


# ---------------------------------------------------------------------------
# values
# ---------------------------------------------------------------------------


def _coeff_str(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def poly_to_json(p: LaurentPoly, nvars: int) -> list[dict[str, Any]]:
    rows = []
    for exps, c in p.sorted_terms():
        t = list(exps[1:])
        if len(t) > nvars:
            raise ValueError(f"polynomial uses t{len(t)} but the document has {nvars} weights")
        rows.append({"coeff": _coeff_str(c), "q": exps[0], "t": t + [0] * (nvars - len(t))})
    rows.sort(key=lambda r: (r["q"], r["t"]))
    return rows


def poly_from_json(rows: Sequence[Mapping[str, Any]]) -> LaurentPoly:
    return LaurentPoly({encode(int(r["q"]), [int(e) for e in r["t"]]): Fraction(r["coeff"])
                        for r in rows})


def value_to_json(x: RationalFn, nvars: int) -> dict[str, Any]:
    return {"num": poly_to_json(x.num, nvars), "den": poly_to_json(x.den, nvars)}


def value_from_json(obj: Mapping[str, Any]) -> RationalFn:
    return RationalFn(poly_from_json(obj["num"]), poly_from_json(obj["den"]))


# ---------------------------------------------------------------------------
# blocks and documents
# ---------------------------------------------------------------------------


@dataclass
class BlockRecord:
    degree: int
    basis: list[tuple[int, ...]]
    entries: dict[tuple[int, int], RationalFn]

    @classmethod
    def from_block(cls, degree: int, block: BlockMatrix) -> "BlockRecord":
        return cls(degree, [tuple(v) for v in block.src.vectors], dict(block.entries))

    def to_json(self, nvars: int) -> dict[str, Any]:
        return {
            "degree": self.degree,
            "basis": [list(v) for v in self.basis],
            "entries": [{"row": r, "col": c, "value": value_to_json(self.entries[r, c], nvars)}
                        for r, c in sorted(self.entries)],
        }

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "BlockRecord":
        return cls(int(obj["degree"]), [tuple(v) for v in obj["basis"]],
                   {(int(e["row"]), int(e["col"])): value_from_json(e["value"]) for e in obj["entries"]})

    def __eq__(self, other) -> bool:
        if not isinstance(other, BlockRecord):
            return NotImplemented
        return (self.degree == other.degree and self.basis == other.basis
                and self.entries.keys() == other.entries.keys()
                and all(v == other.entries[k] for k, v in self.entries.items()))


@dataclass
class ResultDocument:
    command: str
    config: dict[str, Any]
    blocks: list[BlockRecord] = field(default_factory=list)
    checks: dict[str, dict[str, Any]] = field(default_factory=dict)
    provenance: str | None = None
    timing: dict[str, float] | None = None
    format_version: int = FORMAT_VERSION

    @property
    def nvars(self) -> int:
        return len(self.config.get("weights") or [])

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks.values())

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "format_version": self.format_version,
            "command": self.command,
            "config": self.config,
            "provenance": self.provenance,
            "blocks": [b.to_json(self.nvars) for b in self.blocks],
            "checks": {name: self.checks[name] for name in sorted(self.checks)},
        }
        if self.timing is not None:
            out["timing"] = self.timing
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"

    @classmethod
    def loads(cls, text: str) -> "ResultDocument":
        obj = json.loads(text)
        version = obj.get("format_version")
        if version != FORMAT_VERSION:
            raise ValueError(f"unsupported format_version {version!r}")
        return cls(
            command=obj["command"],
            config=obj["config"],
            blocks=[BlockRecord.from_json(b) for b in obj.get("blocks", [])],
            checks=obj.get("checks", {}),
            provenance=obj.get("provenance"),
            timing=obj.get("timing"),
            format_version=version,
        )


def check_report(violations: Sequence[Mapping[str, Any]]) -> dict[str, Any]:
    return {"passed": not violations, "violations": list(violations)}
