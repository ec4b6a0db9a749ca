"""Verification records and canonical JSON serialization."""

from __future__ import annotations

import hashlib
import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from importlib import resources

TIMING_FIELDS = ("wall_time",)


def encode(obj):
    """Recursively convert complex numbers to [re, im] and tuples to lists."""
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if hasattr(obj, "item") and callable(obj.item):
        return encode(obj.item())
    return obj


def decode_complex(value) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"complex values are [re, im] pairs, got {value!r}")
        return complex(float(value[0]), float(value[1]))
    return complex(value)


def canonical_json(obj) -> str:
    return json.dumps(encode(obj), sort_keys=True, separators=(",", ":"), allow_nan=True)


def digest(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode("utf-8")).hexdigest()[:16]


@dataclass
class VerificationRecord:
    suite: str
    tag: str
    samples_attempted: int
    samples_accepted: int
    max_residual: float
    tolerance: float
    seed: int
    params_digest: str
    wall_time: float = 0.0
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.samples_accepted > self.samples_attempted:
            raise ValueError("accepted samples cannot exceed attempted samples")

    @property
    def passed(self) -> bool:
        return bool(self.max_residual <= self.tolerance)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "tag": self.tag,
            "samples_attempted": self.samples_attempted,
            "samples_accepted": self.samples_accepted,
            "max_residual": float(self.max_residual),
            "tolerance": float(self.tolerance),
            "pass": self.passed,
            "seed": self.seed,
            "params_digest": self.params_digest,
            "wall_time": float(self.wall_time),
            "details": encode(self.details),
        }


@contextmanager
def timed(holder: dict):
    start = time.perf_counter()
    try:
        yield holder
    finally:
        holder["wall_time"] = time.perf_counter() - start


def report_schema() -> dict:
    text = resources.files("bc1lab").joinpath("schemas/report.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def validate_report(report) -> None:
    import jsonschema

    jsonschema.validate(report, report_schema())


def dump_report(records, path=None) -> str:
    payload = [r.to_dict() if isinstance(r, VerificationRecord) else r for r in records]
    text = json.dumps(payload, sort_keys=True, indent=1) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def strip_timing(report: list) -> list:
    return [{k: v for k, v in rec.items() if k not in TIMING_FIELDS} for rec in report]
