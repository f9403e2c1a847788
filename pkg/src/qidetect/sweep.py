"""Per-point comparison records, parameter sweeps, and their CSV/JSON form."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from . import bounds
from .bounds import ChannelParams, MarginPolicy, RegimeNotApplicable

AXES = ("kappa", "n_b", "modes", "shots")
INT_AXES = ("modes", "shots")
CSV_FIELDS = (
    "kappa",
    "n_b",
    "modes",
    "shots",
    "qi_exponent",
    "qi_status",
    "sp_exponent",
    "sp_status",
    "cs_exponent",
    "hom_exponent",
    "mv_exponent",
    "qi_regime",
    "sp_regime",
)


def fmt(x: float) -> str:
    return format(x, ".17g")


@dataclass(frozen=True)
class RunRecord:
    kappa: float
    n_b: float
    modes: int
    shots: int
    qi_exponent: float | None
    qi_status: str
    sp_exponent: float | None
    sp_status: str
    cs_exponent: float
    hom_exponent: float
    mv_exponent: float
    qi_regime: str
    sp_regime: str

    @property
    def params(self) -> ChannelParams:
        return ChannelParams(self.kappa, self.n_b, self.modes, self.shots)

    def bound(self, system: str) -> float | None:
        exponent = getattr(self, f"{system}_exponent")
        if exponent is None:
            return None
        return bounds.bound_from_exponent(exponent, self.shots)

    def csv_row(self) -> list[str]:
        row = []
        for name in CSV_FIELDS:
            value = getattr(self, name)
            if value is None:
                row.append("")
            elif isinstance(value, str):
                row.append(value)
            elif name in INT_AXES:
                row.append(str(int(value)))
            else:
                row.append(fmt(value))
        return row

    @classmethod
    def from_csv_row(cls, row: dict[str, str]) -> RunRecord:
        values = {}
        for f in fields(cls):
            raw = row[f.name]
            if f.name in INT_AXES:
                values[f.name] = int(raw)
            elif f.name.endswith(("_status", "_regime")):
                values[f.name] = raw
            else:
                values[f.name] = float(raw) if raw != "" else None
        return cls(**values)


def evaluate(params: ChannelParams, margin: MarginPolicy = MarginPolicy()) -> RunRecord:
    """All exponents at one parameter point; inapplicable regime branches are None."""
    out = {}
    for system, fn in (("qi", bounds.qi_bound), ("sp", bounds.sp_bound)):
        try:
            res = fn(params, margin)
            out[system] = (res.exponent_per_shot, "ok", res.regime.label.value)
        except RegimeNotApplicable as exc:
            out[system] = (None, exc.regime.label.value, exc.regime.label.value)
    p_single = bounds.cs_single_shot_error(params.kappa)
    return RunRecord(
        kappa=params.kappa,
        n_b=params.n_b,
        modes=params.modes,
        shots=params.shots,
        qi_exponent=out["qi"][0],
        qi_status=out["qi"][1],
        sp_exponent=out["sp"][0],
        sp_status=out["sp"][1],
        cs_exponent=bounds.cs_bound(params).exponent_per_shot,
        hom_exponent=bounds.homodyne_bound(params).exponent_per_shot,
        mv_exponent=bounds.majority_vote_bound(p_single, params.shots).exponent_per_shot,
        qi_regime=out["qi"][2],
        sp_regime=out["sp"][2],
    )


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    values: tuple
    fixed: ChannelParams

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}, got {self.axis!r}")
        values = tuple(self.values)
        if not values:
            raise ValueError("sweep needs at least one value")
        if self.axis in INT_AXES:
            if any(int(v) != v for v in values):
                raise ValueError(f"{self.axis} values must be integers")
            values = tuple(int(v) for v in values)
        else:
            values = tuple(float(v) for v in values)
        diffs = np.diff(values)
        if len(values) > 1 and not (np.all(diffs > 0) or np.all(diffs < 0)):
            raise ValueError("sweep values must be strictly monotone")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_range(
        cls, axis: str, start: float, stop: float, count: int, spacing: str, fixed: ChannelParams
    ) -> SweepSpec:
        if count < 1:
            raise ValueError("count must be >= 1")
        if spacing == "log":
            if start <= 0 or stop <= 0:
                raise ValueError("log spacing needs positive endpoints")
            values = np.geomspace(start, stop, count)
        elif spacing == "linear":
            values = np.linspace(start, stop, count)
        else:
            raise ValueError(f"spacing must be linear or log, got {spacing!r}")
        if axis in INT_AXES:
            values = np.round(values)
        return cls(axis, tuple(values.tolist()), fixed)

    def points(self) -> list[ChannelParams]:
        return [replace(self.fixed, **{self.axis: v}) for v in self.values]


def run_sweep(spec: SweepSpec, margin: MarginPolicy = MarginPolicy()) -> list[RunRecord]:
    return [evaluate(p, margin) for p in spec.points()]


def render_csv(records: list[RunRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for rec in records:
        writer.writerow(rec.csv_row())
    return buf.getvalue()


def parse_csv(text: str) -> list[RunRecord]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_FIELDS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    return [RunRecord.from_csv_row(row) for row in reader]


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        raise ValueError(f"non-finite value {value!r} in record")
    return value


def render_json(records: list[RunRecord]) -> str:
    rows = [{k: _json_value(v) for k, v in asdict(r).items()} for r in records]
    return json.dumps(rows, indent=2) + "\n"


def parse_json(text: str) -> list[RunRecord]:
    return [RunRecord(**row) for row in json.loads(text)]


def render(records: list[RunRecord], fmt_name: str) -> str:
    if fmt_name == "csv":
        return render_csv(records)
    if fmt_name == "json":
        return render_json(records)
    raise ValueError(f"unknown format {fmt_name!r}")
