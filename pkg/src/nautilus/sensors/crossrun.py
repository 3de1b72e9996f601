"""Cross-run verification: do independent reproductions support an entry?

Each row pairs a policy's reproduced success rate with its published
reference; the deviation delta = reproduced - reference is computed on
integer tenths so 0.1-granularity arithmetic is exact. No universal
pass/fail is applied to individual rows — every row is retained with its
deviation, and only the entry-level recommendation flips, at k_required
in-band rows. The defaults (band=4.0 points, k_required=3) are local
policy, configurable per call and per entry.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

DEFAULT_BAND = 4.0
DEFAULT_K_REQUIRED = 3


def delta_tenths(reproduced: float, reference: float) -> int:
    """Deviation in integer tenths of a percentage point."""
    return round(reproduced * 10) - round(reference * 10)


def format_delta(value_tenths: int) -> str:
    """Signed one-decimal rendering: +0.3, -2.2, 0.0."""
    if value_tenths == 0:
        return "0.0"
    sign = "+" if value_tenths > 0 else "-"
    magnitude = abs(value_tenths)
    return f"{sign}{magnitude // 10}.{magnitude % 10}"


@dataclass(frozen=True)
class CrossRunRow:
    policy: str
    reproduced: float
    reference: float

    @property
    def delta(self) -> float:
        return delta_tenths(self.reproduced, self.reference) / 10.0

    def to_dict(self) -> dict:
        return {
            "policy": self.policy,
            "reproduced": self.reproduced,
            "reference": self.reference,
            "delta": self.delta,
        }


@dataclass(frozen=True)
class CrossRunReport:
    rows: tuple[CrossRunRow, ...]
    band: float
    k_required: int
    in_band_count: int
    recommendation: str  # "verify" | "keep_unverified"

    def to_dict(self) -> dict:
        return {
            "rows": [row.to_dict() for row in self.rows],
            "band": self.band,
            "k_required": self.k_required,
            "in_band_count": self.in_band_count,
            "recommendation": self.recommendation,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "CrossRunReport":
        rows = tuple(
            CrossRunRow(policy=row["policy"], reproduced=float(row["reproduced"]), reference=float(row["reference"]))
            for row in doc["rows"]
        )
        return cross_run_verify(
            [(row.policy, row.reproduced, row.reference) for row in rows],
            band=float(doc.get("band", DEFAULT_BAND)),
            k_required=int(doc.get("k_required", DEFAULT_K_REQUIRED)),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "CrossRunReport":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def cross_run_verify(
    rows: list,
    band: float = DEFAULT_BAND,
    k_required: int = DEFAULT_K_REQUIRED,
) -> CrossRunReport:
    """rows: CrossRunRow instances or (policy, reproduced, reference) triples."""
    if not rows:
        raise ValueError("rows must be non-empty")
    if not (band > 0):
        raise ValueError(f"band must be positive, got {band}")
    if k_required < 1:
        raise ValueError(f"k_required must be >= 1, got {k_required}")

    parsed = tuple(
        row if isinstance(row, CrossRunRow) else CrossRunRow(policy=row[0], reproduced=row[1], reference=row[2])
        for row in rows
    )
    band_tenths = round(band * 10)
    in_band = sum(1 for row in parsed if abs(delta_tenths(row.reproduced, row.reference)) <= band_tenths)
    recommendation = "verify" if in_band >= k_required else "keep_unverified"
    return CrossRunReport(
        rows=parsed,
        band=band,
        k_required=k_required,
        in_band_count=in_band,
        recommendation=recommendation,
    )
