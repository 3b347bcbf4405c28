"""Filter banks used in the published simulation study.

Every FIR filter has ``M = 64``; every recursive filter uses five Bessel
poles. The bundled JSON specs under ``data/filters`` are generated from
these definitions (see :func:`write_bundled`).
"""

from __future__ import annotations

import json
from pathlib import Path

from .specfile import FilterSpec

__all__ = ["SCENARIOS", "TABLES", "table_rows", "write_bundled"]

M = 64


def _fir(id, K1, K0):
    return FilterSpec(kind="fir", K1=K1, K0=K0, M=M, id=id)


def _iir(id, K1, K0, f_c):
    return FilterSpec(kind="iir", K1=K1, K0=K0, f_c=f_c, K_phi=5, id=id)


TABLES = {
    "table1": [_fir(f"{c}1", K1, K0) for c, (K1, K0) in zip("ABCDEFGH", [(k1, k0) for k1 in (1, 2) for k0 in range(4)])],
    "table2": [
        _fir("A2", 2, 0),
        _fir("B2", 2, 1),
        _fir("C2", 2, 2),
        _iir("D2", 2, 3, 1 / M),
        _fir("E2", 3, 0),
        _fir("F2", 3, 1),
        _fir("G2", 3, 2),
        _iir("H2", 3, 3, 1 / M),
    ],
    "table3": [_iir(f"{c}3", 2, 3, s / M) for c, s in zip("ABCDEFG", (0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3))],
    "table4": [_iir(f"{c}4", 3, 3, s / M) for c, s in zip("ABCDEFG", (0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1))],
    "table5": [
        _fir("A5", 1, 0),
        _fir("B5", 3, 1),
        _fir("C5", 3, 2),
        _fir("D5", 3, 3),
        # bandwidths tuned so the noise gain matches the FIR row above
        _iir("E5", 3, 1, 1 / 51.02),
        _iir("F5", 3, 2, 1 / 51.02),
        _iir("G5", 3, 3, 1 / 59.30),
    ],
}

SIGNALS = {1: (0.01, 0.01, 0.01), 2: (0.0, 0.125, 0.25), 3: (0.0, 4.0, 16.0)}
CONFIG_AB = {1: (1, 0), 2: (0, 1), 3: (0, 0)}
MAIN_BANK = {1: "table1", 2: "table2", 3: "table5"}


def _scenario(name, signal, config, table, **extra):
    alpha, beta = CONFIG_AB[config]
    doc = {
        "name": name,
        "triplet": list(SIGNALS[signal]),
        "N": 1000,
        "alpha": alpha,
        "beta": beta,
        "snr_range": {"start": 0, "stop": 20, "step": 1},
        "trials": 1000,
        "noise_mode": "complex-gaussian",
        "seed": 0,
        "window_start": 0.125,
        "filters": [f"bundled:{table}/{spec.id}" for spec in TABLES[table]],
    }
    doc.update(extra)
    return doc


def _all_scenarios():
    out = {}
    for s in (1, 2, 3):
        for c in (1, 2, 3):
            name = f"type{s}-config{c}"
            out[name] = _scenario(name, s, c, MAIN_BANK[s])
    out["type2-config1-table3"] = _scenario("type2-config1-table3", 2, 1, "table3")
    out["type2-config2-table3"] = _scenario("type2-config2-table3", 2, 2, "table3")
    out["type2-config3-table4"] = _scenario("type2-config3-table4", 2, 3, "table4")
    out["type2-config2-estimator-unwrap"] = _scenario(
        "type2-config2-estimator-unwrap", 2, 2, "table2", unwrap_with="estimator"
    )
    out["type2-config1-uniform"] = _scenario("type2-config1-uniform", 2, 1, "table2", noise_mode="complex-uniform")
    out["type2-config1-angle-noise"] = _scenario("type2-config1-angle-noise", 2, 1, "table2", noise_mode="angle-gaussian")
    return out


SCENARIOS = _all_scenarios()


def table_rows(table: str) -> list[FilterSpec]:
    try:
        return list(TABLES[table])
    except KeyError:
        raise KeyError(f"unknown table {table!r}; expected one of {sorted(TABLES)}") from None


def write_bundled(root) -> list[Path]:
    """Write every table row and scenario as JSON under ``root``."""
    root = Path(root)
    written = []
    for table, rows in TABLES.items():
        for spec in rows:
            path = root / "filters" / table / f"{spec.id}.json"
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(json.dumps(spec.to_dict(), indent=2) + "\n", encoding="utf-8")
            written.append(path)
    for name, doc in SCENARIOS.items():
        path = root / "scenarios" / f"{name}.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
        written.append(path)
    return written
