"""Monte Carlo comparison of observed and analytical estimation error.

A scenario fixes the waveform (a frequency triplet), where the differentiator
sits in the processing chain, the filter bank and the SNR sweep. Each trial
draws a random phase offset and noise, runs the estimator/predictor tandem
and measures squared error against the exact analytic phase (or frequency)
evaluated at the output's latency.

Trial ``t`` always uses the generator ``default_rng([seed, t])``: every
filter and every SNR sees the same offsets and the same unit-variance noise,
only scaled differently.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .analysis import expected_variance, noise_gains
from .realization import TandemFilter
from .signals import NOISE_MODES, conjugate_product_angles, snr_to_noise_variance, triplet_to_spec

__all__ = [
    "CONFIGS",
    "FilterPair",
    "Scenario",
    "ScenarioResult",
    "SystemConfig",
    "TrialResult",
    "run_scenario",
    "run_trial",
    "run_trials",
    "threshold_estimate",
]

TWO_PI = 2.0 * math.pi
MAX_BATCH_ROWS = 4096  # trials x SNRs pushed through one tandem run
RESULT_COLUMNS = ("filter_id", "snr_db", "var_sim_db", "var_ana_db", "trials", "unwrap_corrections", "divergent_trials")


@dataclass(frozen=True)
class SystemConfig:
    """Differentiators before (``alpha``) and after (``beta``) the low-pass filter.

    ``alpha`` is realised with conjugate products and is limited to 0 or 1.
    """

    alpha: int = 0
    beta: int = 0

    def __post_init__(self):
        if self.alpha not in (0, 1):
            raise ValueError("alpha must be 0 or 1")
        if self.beta < 0:
            raise ValueError("beta must be non-negative")

    @property
    def K0_tilde(self) -> int:
        return self.alpha + self.beta

    @property
    def quantity(self) -> str:
        return "phase" if self.K0_tilde == 0 else "frequency"


CONFIGS = {1: SystemConfig(1, 0), 2: SystemConfig(0, 1), 3: SystemConfig(0, 0)}


@dataclass(frozen=True, eq=False)
class FilterPair:
    """Estimator and the predictor that unwraps its input."""

    id: str
    estimator: object
    predictor: object

    @property
    def q(self) -> float:
        return float(self.estimator.q)


@dataclass(frozen=True, eq=False)
class Scenario:
    triplet: tuple
    config: SystemConfig
    filters: tuple
    N: int = 1000
    snr_db: tuple = tuple(range(21))
    trials: int = 1000
    noise_mode: str = "complex-gaussian"
    window_start: float = 1.0 / 8.0
    seed: int = 0
    amplitude: float = 1.0
    unwrap_with: str = "predictor"
    name: str = ""

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not 0.0 <= self.window_start < 1.0:
            raise ValueError("window_start must lie in [0, 1)")
        if self.noise_mode not in NOISE_MODES:
            raise ValueError(f"unknown noise mode {self.noise_mode!r}")
        if self.N < 3:
            raise ValueError("N must be at least 3")
        object.__setattr__(self, "filters", tuple(self.filters))
        object.__setattr__(self, "snr_db", tuple(float(s) for s in self.snr_db))

    @property
    def signal(self):
        return triplet_to_spec(self.triplet, self.N)

    @property
    def first_window_sample(self) -> int:
        return math.ceil(self.window_start * (self.N - 1))


@dataclass
class TrialResult:
    """Squared errors over the analysis window, one row per trial."""

    sq_errors: np.ndarray
    sample_index: np.ndarray
    unwrap_corrections: np.ndarray
    divergent: np.ndarray


@dataclass
class ScenarioResult:
    scenario_name: str
    rows: list = field(default_factory=list)

    def by_filter(self) -> dict:
        out: dict = {}
        for r in self.rows:
            out.setdefault(r["filter_id"], []).append(r)
        for rows in out.values():
            rows.sort(key=lambda r: r["snr_db"])
        return out

    def get(self, filter_id: str, snr_db: float) -> dict:
        for r in self.rows:
            if r["filter_id"] == filter_id and r["snr_db"] == snr_db:
                return r
        raise KeyError((filter_id, snr_db))

    def to_csv(self, fh=None, thresholds: dict | None = None):
        """Write one row per (filter, SNR); optional ``threshold`` rows follow."""
        buf = io.StringIO() if fh is None else fh
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(RESULT_COLUMNS)
        for r in self.rows:
            w.writerow([r["filter_id"], _fmt(r["snr_db"]), _fmt(r["var_sim_db"]), _fmt(r["var_ana_db"]),
                        r["trials"], r["unwrap_corrections"], r["divergent_trials"]])
        if thresholds:
            w.writerow([])
            w.writerow(("filter_id", "threshold_db"))
            for fid, th in thresholds.items():
                w.writerow([fid, _fmt(th)])
        return buf.getvalue() if fh is None else None


def _fmt(v) -> str:
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return repr(v)


def _draws(scenario: Scenario, trial_ids):
    """Phase offsets and unit-variance noise for each trial (independent of SNR)."""
    N = scenario.N
    offsets = np.empty(len(trial_ids))
    shape = (N,) if scenario.noise_mode == "angle-gaussian" else (2, N)
    noise = np.empty((len(trial_ids),) + shape)
    for i, t in enumerate(trial_ids):
        rng = np.random.default_rng([scenario.seed, int(t)])
        offsets[i] = rng.uniform(0.0, TWO_PI)
        if scenario.noise_mode == "complex-uniform":
            noise[i] = rng.uniform(-math.sqrt(3.0), math.sqrt(3.0), size=shape)
        else:
            noise[i] = rng.standard_normal(shape)
    return offsets, noise


def _waveform(scenario: Scenario, offsets, noise, snr_db):
    spec = scenario.signal
    n = np.arange(scenario.N, dtype=float)
    theta = spec.phase(n)[None, :] + offsets[:, None]
    A = scenario.amplitude
    sigma = math.sqrt(snr_to_noise_variance(snr_db, A))
    if scenario.noise_mode == "angle-gaussian":
        return theta, A * np.exp(1j * (theta + noise * (sigma / A)))
    return theta, A * np.exp(1j * theta) + sigma * (noise[:, 0] + 1j * noise[:, 1])


def run_trials(scenario: Scenario, pair: FilterPair, snr_db, trial_ids) -> TrialResult:
    """Run a batch of trials for one filter pair.

    ``snr_db`` may be a scalar or a sequence; with a sequence every field of
    the result gains a leading SNR axis. All SNRs share the same draws and
    run through one batched tandem.
    """
    cfg = scenario.config
    scalar = np.ndim(snr_db) == 0
    snrs = [float(snr_db)] if scalar else [float(s) for s in snr_db]
    offsets, noise = _draws(scenario, trial_ids)
    T = len(offsets)
    waves = [_waveform(scenario, offsets, noise, s) for s in snrs]
    theta = waves[0][0]
    x = np.concatenate([w[1] for w in waves])
    offsets_all = np.tile(offsets, len(snrs))
    N = scenario.N

    if cfg.alpha:
        raw = conjugate_product_angles(x)
        true_in = np.tile(np.diff(theta, axis=-1), (len(snrs), 1))
        idx = np.arange(1, N)
    else:
        raw = np.angle(x)
        true_in = np.tile(theta, (len(snrs), 1))
        idx = np.arange(N)

    out = TandemFilter(pair.estimator, pair.predictor, scenario.unwrap_with).run(raw)
    # the unwrapped stream lives on the branch of the first measurement
    branch = TWO_PI * np.round((raw[:, :1] - true_in[:, :1]) / TWO_PI)
    slips = np.round((out.unwrapped - true_in - branch) / TWO_PI)
    corrections = np.count_nonzero(np.diff(slips, axis=-1), axis=-1)

    y = out.estimates
    if cfg.beta:
        y = np.diff(y, n=cfg.beta, axis=-1)
        idx = idx[cfg.beta:]
    delay = pair.q + 0.5 * cfg.K0_tilde
    ref = scenario.signal.derivative(idx - delay, cfg.K0_tilde)[None, :]
    if cfg.K0_tilde == 0:
        ref = ref + offsets_all[:, None]
    if cfg.beta == 0:
        ref = ref + branch

    keep = idx >= scenario.first_window_sample
    with np.errstate(invalid="ignore", over="ignore"):
        err = (y[:, keep] - ref[:, keep]) ** 2
    divergent = ~np.all(np.isfinite(y), axis=-1)

    def shape(a):
        a = a.reshape((len(snrs), T) + a.shape[1:])
        return a[0] if scalar else a

    return TrialResult(
        sq_errors=shape(err),
        sample_index=idx[keep],
        unwrap_corrections=shape(corrections),
        divergent=shape(divergent),
    )


def run_trial(scenario: Scenario, pair: FilterPair, snr_db: float, trial: int) -> np.ndarray:
    """Squared errors over the analysis window for a single trial."""
    return run_trials(scenario, pair, snr_db, [trial]).sq_errors[0]


def _task(args):
    scenario, k, snrs = args
    pair = scenario.filters[k]
    res = run_trials(scenario, pair, list(snrs), range(scenario.trials))
    v_bpf = noise_gains(pair.estimator, scenario.config.K0_tilde)[1]
    rows = []
    for i, snr in enumerate(snrs):
        with np.errstate(invalid="ignore", over="ignore"):
            var = float(np.mean(res.sq_errors[i]))
        ana = expected_variance(v_bpf, snr) if math.isfinite(snr) else 0.0
        with np.errstate(divide="ignore"):
            rows.append({
                "filter_id": pair.id,
                "snr_db": snr,
                "var_sim": var,
                "var_sim_db": float(10.0 * np.log10(var)) if var == var else math.nan,
                "var_ana": ana,
                "var_ana_db": float(10.0 * np.log10(ana)),
                "trials": scenario.trials,
                "unwrap_corrections": int(res.unwrap_corrections[i].sum()),
                "divergent_trials": int(res.divergent[i].sum()),
            })
    return rows


def run_scenario(scenario: Scenario, jobs: int = 1) -> ScenarioResult:
    """Every filter at every SNR; ``jobs > 1`` spreads (filter, SNR-chunk) tasks over processes.

    Results do not depend on ``jobs``: each task regenerates its own trials.
    """
    per_chunk = max(1, MAX_BATCH_ROWS // scenario.trials)
    snrs = scenario.snr_db
    chunks = [snrs[i:i + per_chunk] for i in range(0, len(snrs), per_chunk)]
    tasks = [(scenario, k, c) for k in range(len(scenario.filters)) for c in chunks]
    if jobs and jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_task, tasks))
    else:
        parts = [_task(t) for t in tasks]
    return ScenarioResult(scenario.name, [row for part in parts for row in part])


def threshold_estimate(result: ScenarioResult, margin_db: float = 3.0) -> dict:
    """Lowest SNR from which observed variance stays within ``margin_db`` of analysis.

    Scans each filter's SNRs from the top down and stops at the first failure.
    ``+inf`` means the filter fails even at the highest SNR; ``-inf`` means it
    never fails over the sweep. Rows without a finite analytical variance
    (noise-free runs) carry no information; a filter with only such rows gets
    ``nan``.
    """
    out = {}
    for fid, rows in result.by_filter().items():
        rows = [r for r in rows if math.isfinite(r["var_ana_db"])]
        if not rows:
            out[fid] = math.nan
            continue
        threshold = math.inf
        for r in reversed(rows):
            gap = r["var_sim_db"] - r["var_ana_db"]
            if not gap < margin_db:
                break
            threshold = r["snr_db"]
        else:
            threshold = -math.inf
        out[fid] = threshold
    return out
