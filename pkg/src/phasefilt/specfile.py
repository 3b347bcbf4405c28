"""JSON filter specs, designed-filter documents and scenario files."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, replace
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from .analysis import dc_group_delay, noise_gain_table
from .fir import design_fir
from .harness import FilterPair, Scenario, SystemConfig
from .iir import design_iir

__all__ = [
    "FILTER_SCHEMA",
    "SCENARIO_SCHEMA",
    "FilterSpec",
    "ScenarioSpec",
    "SpecError",
    "bundled_filter",
    "bundled_filter_ids",
    "bundled_scenario",
    "bundled_scenario_names",
    "designed_document",
    "load_design",
    "load_filter_spec",
    "load_scenario",
]

_Q_POLICY = {
    "oneOf": [
        {"enum": ["optimal", "min-cng", "min-q"]},
        {"type": "number"},
        {
            "type": "object",
            "properties": {"explicit": {"type": "number"}},
            "required": ["explicit"],
            "additionalProperties": False,
        },
    ]
}

FILTER_SCHEMA = {
    "type": "object",
    "properties": {
        "id": {"type": "string"},
        "kind": {"enum": ["fir", "iir"]},
        "M": {"type": "integer", "minimum": 1},
        "f_c": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 0.5},
        "K1": {"type": "integer", "minimum": 1},
        "K0": {"type": "integer", "minimum": 0},
        "K_phi": {"type": "integer", "minimum": 1, "maximum": 8},
        "q_policy": _Q_POLICY,
        "basis": {"enum": ["bessel", "origin", "laguerre"]},
        "laguerre_p": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
        "norm": {"enum": ["phase", "mag", "delay"]},
    },
    "required": ["kind", "K1", "K0"],
    "additionalProperties": False,
    "allOf": [
        {"if": {"properties": {"kind": {"const": "fir"}}}, "then": {"required": ["M"]}},
        {
            "if": {
                "properties": {"kind": {"const": "iir"}, "basis": {"const": "laguerre"}},
                "required": ["kind", "basis"],
            },
            "then": {"required": ["laguerre_p"]},
        },
        {
            "if": {
                "properties": {"kind": {"const": "iir"}, "basis": {"const": "bessel"}},
                "required": ["kind"],
            },
            "then": {"required": ["f_c"]},
        },
    ],
}

SCENARIO_SCHEMA = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "triplet": {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3},
        "N": {"type": "integer", "minimum": 3},
        "alpha": {"enum": [0, 1]},
        "beta": {"type": "integer", "minimum": 0},
        "snr_db": {"type": "array", "items": {"type": "number"}, "minItems": 1},
        "snr_range": {
            "type": "object",
            "properties": {"start": {"type": "number"}, "stop": {"type": "number"}, "step": {"type": "number", "exclusiveMinimum": 0}},
            "required": ["start", "stop", "step"],
            "additionalProperties": False,
        },
        "trials": {"type": "integer", "minimum": 1},
        "noise_mode": {"enum": ["complex-gaussian", "complex-uniform", "angle-gaussian"]},
        "seed": {"type": "integer", "minimum": 0},
        "window_start": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
        "amplitude": {"type": "number", "exclusiveMinimum": 0},
        "unwrap_with": {"enum": ["predictor", "estimator"]},
        "filters": {
            "type": "array",
            "minItems": 1,
            "items": {"oneOf": [{"type": "string"}, FILTER_SCHEMA]},
        },
    },
    "required": ["triplet", "alpha", "beta", "filters"],
    "additionalProperties": False,
    "not": {"required": ["snr_db", "snr_range"]},
}


class SpecError(ValueError):
    """A spec or scenario document is malformed or refers to something missing."""


def _validate(doc, schema, what):
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SpecError(f"invalid {what} at {where}: {exc.message}") from None


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: not valid JSON ({exc})") from None


@dataclass(frozen=True)
class FilterSpec:
    """Design request for one low-pass filter.

    For FIR filters any named ``q_policy`` selects the linear-phase delay
    ``(M - 1) / 2``. ``norm`` picks the Bessel cut-off convention.
    """

    kind: str
    K1: int
    K0: int
    M: int | None = None
    f_c: float | None = None
    K_phi: int | None = None
    q_policy: object = "optimal"
    basis: str | None = None
    laguerre_p: float | None = None
    norm: str | None = None
    id: str | None = None

    @classmethod
    def from_dict(cls, doc: dict) -> "FilterSpec":
        _validate(doc, FILTER_SCHEMA, "filter spec")
        return cls(**doc)

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None and not (k == "q_policy" and v == "optimal")}

    @property
    def explicit_q(self):
        q = self.q_policy
        if isinstance(q, dict):
            return float(q["explicit"])
        if isinstance(q, (int, float)):
            return float(q)
        return None

    def predictor(self) -> "FilterSpec":
        """Same design with a one-sample lead."""
        return replace(self, q_policy={"explicit": -1.0})

    def design(self):
        if self.kind == "fir":
            return design_fir(self.M, self.K1, self.K0, self.explicit_q)
        q = self.q_policy if self.explicit_q is None else self.explicit_q
        return design_iir(
            K_phi=self.K_phi or 5,
            f_c=self.f_c,
            K1=self.K1,
            K0=self.K0,
            q=q,
            basis=self.basis or "bessel",
            norm=self.norm or "phase",
            laguerre_p=self.laguerre_p,
        )

    def design_pair(self, pair_id: str | None = None) -> FilterPair:
        """Estimator plus predictor; with ``K1 == 1`` the delay cannot move, so both are the same filter."""
        est = self.design()
        prd = est if self.K1 == 1 else self.predictor().design()
        return FilterPair(pair_id or self.id or "filter", est, prd)


def load_filter_spec(path) -> FilterSpec:
    return FilterSpec.from_dict(_read_json(path))


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, (np.floating, float)):
        return float(x) if math.isfinite(x) else str(x)
    if isinstance(x, np.integer):
        return int(x)
    return x


def designed_document(spec: FilterSpec, filt=None) -> dict:
    """Designed filter with the same diagnostic columns as the design tables."""
    if filt is None:
        filt = spec.design()
    doc = {
        "spec": spec.to_dict(),
        "kind": filt.kind,
        "q": float(filt.q),
        "b": filt.b,
        "a": filt.a,
        "diagnostics": {
            "dc_group_delay": dc_group_delay(filt),
            "v_LPF": noise_gain_table(filt, (0,))[0],
            "v_BPF": noise_gain_table(filt),
        },
    }
    if filt.kind == "iir":
        doc["poles"] = filt.poles
        doc["c"] = filt.c
        extra = {k: v for k, v in filt.diagnostics.items() if k in ("cond_S", "cond_constraints", "imag_residue_b", "imag_residue_h", "stationary_points", "cng_coefficients")}
        doc["diagnostics"].update(extra)
    else:
        doc["interpolating"] = filt.interpolating
    return _jsonable(doc)


def load_design(path_or_doc):
    """Rebuild a filter from a designed-filter document (or a bare spec).

    The filter is re-designed from its embedded spec; stored coefficients are
    checked against the result.
    """
    doc = _read_json(path_or_doc) if not isinstance(path_or_doc, dict) else path_or_doc
    if "spec" not in doc:
        spec = FilterSpec.from_dict(doc)
        return spec, spec.design()
    spec = FilterSpec.from_dict(doc["spec"])
    filt = spec.design()
    if "b" in doc:
        stored = np.asarray(doc["b"], dtype=float)
        if stored.shape != np.shape(filt.b) or not np.allclose(stored, filt.b, rtol=1e-9, atol=1e-15):
            raise SpecError("stored coefficients do not match the embedded spec")
    return spec, filt


def _data_root():
    return resources.files("phasefilt") / "data"


def bundled_filter_ids() -> list[str]:
    root = _data_root() / "filters"
    return sorted(f"{t.name}/{f.name[:-5]}" for t in root.iterdir() if t.is_dir() for f in t.iterdir() if f.name.endswith(".json"))


def bundled_filter(ref: str) -> FilterSpec:
    """Spec for a bundled table row such as ``"table2/D2"``."""
    path = _data_root() / "filters" / f"{ref}.json"
    if not path.is_file():
        raise SpecError(f"no bundled filter {ref!r}")
    return FilterSpec.from_dict(json.loads(path.read_text(encoding="utf-8")))


def bundled_scenario_names() -> list[str]:
    root = _data_root() / "scenarios"
    return sorted(f.name[:-5] for f in root.iterdir() if f.name.endswith(".json"))


@dataclass(frozen=True)
class ScenarioSpec:
    """Parsed scenario document with its filter references resolved to specs."""

    doc: dict
    filters: tuple = field(default=())

    @property
    def name(self) -> str:
        return self.doc.get("name", "")

    def snr_list(self) -> list[float]:
        if "snr_db" in self.doc:
            return [float(s) for s in self.doc["snr_db"]]
        r = self.doc.get("snr_range", {"start": 0, "stop": 20, "step": 1})
        n = int(math.floor((r["stop"] - r["start"]) / r["step"] + 1e-9)) + 1
        return [r["start"] + k * r["step"] for k in range(n)]

    def build(self, trials=None, seed=None, snr_db=None) -> Scenario:
        d = self.doc
        return Scenario(
            triplet=tuple(d["triplet"]),
            config=SystemConfig(d["alpha"], d["beta"]),
            filters=tuple(spec.design_pair(spec.id) for spec in self.filters),
            N=d.get("N", 1000),
            snr_db=tuple(self.snr_list() if snr_db is None else snr_db),
            trials=d.get("trials", 1000) if trials is None else trials,
            noise_mode=d.get("noise_mode", "complex-gaussian"),
            window_start=d.get("window_start", 1.0 / 8.0),
            seed=d.get("seed", 0) if seed is None else seed,
            amplitude=d.get("amplitude", 1.0),
            unwrap_with=d.get("unwrap_with", "predictor"),
            name=self.name,
        )


def _resolve(ref, base: Path | None) -> FilterSpec:
    if isinstance(ref, dict):
        return FilterSpec.from_dict(ref)
    if ref.startswith("bundled:"):
        return bundled_filter(ref[len("bundled:"):])
    path = Path(ref) if base is None else base / ref
    if not path.is_file():
        raise FileNotFoundError(f"filter spec {ref!r} not found (looked for {path})")
    spec = load_filter_spec(path)
    return spec if spec.id else replace(spec, id=path.stem)


def _scenario_from_doc(doc, base) -> ScenarioSpec:
    _validate(doc, SCENARIO_SCHEMA, "scenario")
    return ScenarioSpec(doc, tuple(_resolve(r, base) for r in doc["filters"]))


def load_scenario(path) -> ScenarioSpec:
    path = Path(path)
    return _scenario_from_doc(_read_json(path), path.parent)


def bundled_scenario(name: str) -> ScenarioSpec:
    path = _data_root() / "scenarios" / f"{name}.json"
    if not path.is_file():
        raise SpecError(f"no bundled scenario {name!r}")
    return _scenario_from_doc(json.loads(path.read_text(encoding="utf-8")), None)
