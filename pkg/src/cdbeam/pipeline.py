"""Frequency-sweep orchestration: config files, design runs, CSV export.

A design run is described by a single YAML config (schema below), swept
over a frequency grid. Each frequency builds the acceptance/rejection
covariances, dispatches to the requested design mode, and records weights
plus diagnostics; individual frequencies may fail without aborting the
sweep. Exports are plain CSV with LF line endings and repr-formatted
floats, so identical configs and seeds reproduce byte-identical files.

Config schema (YAML, ``schema_version: 1``)::

    schema_version: 1
    mode: grpq                    # grq | grpq | mecd | mscd
    tau_db: 6.0                   # required for mecd/mscd
    tau_clamp: true               # lower tau to the per-frequency cap
    tau_cap_spectrum: effective   # effective | raw cap spectrum
    array:
      speed_of_sound: 343
      transducers:
        - {position: [-0.09, 0, 0], band: [150, "1.6k"],
           sensitivity: 1.1, rolloff_order: 2}
    densities:
      accept:  {kind: vonmises-like, center: [1, 0, 0], concentration: 6}
      reject:  {kind: full-sphere}
      evaluate: ...               # optional; omitted means C = A
    measurement_direction: [1, 0, 0]   # mscd response direction
    frequencies: {start: 60, stop: "20k", points_per_octave: 6}
      # or {start: ..., stop: ..., n_points: 50}, or an explicit list
    penalty:                      # per-transducer (frequency, lambda)
      - [[60, 1], ["1.6k", 1], ["3.2k", 1e-3], ["20k", 1e-3]]
      - ...
    solver: {alpha: 1.0, alpha_w: 1e-2, alpha_lambda: 1e-3, max_iters: 100}
    seed: 0

Frequency-valued numbers accept SI suffixes (k, K, M, G), e.g. ``"1.6k"``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import yaml

from .arrays import (
    ArraySpec,
    DirectionDensity,
    Transducer,
    covariance_from_density,
    density_from_window,
    steering_matrix,
    steering_vector,
)
from .grq import PenaltyWeights, build_penalty, interpolate_lambdas, max_grpq, max_grq
from .linalg import ConvergenceError, NotPositiveDefinite, generalized_eig, symmetrize
from .mecd import (
    DivergenceError,
    InfeasibleTau,
    build_constraint,
    mecd_dm,
    mecd_pa,
)
from .mscd import ConstraintDegenerate, mscd_solve
from .secular import AllPolesOneSign

__all__ = [
    "BenchmarkResult",
    "BenchmarkTrial",
    "ConfigError",
    "DesignConfig",
    "DesignResult",
    "FrequencyRecord",
    "PipelineError",
    "SCHEMA_VERSION",
    "export_beampattern",
    "export_benchmark",
    "export_gdi",
    "export_weights",
    "load_config",
    "parse_config",
    "parse_frequency",
    "run_benchmark",
    "run_design",
]

SCHEMA_VERSION = 1
MODES = ("grq", "grpq", "mecd", "mscd")
DB_FLOOR = -80.0
_CLAMP_MARGIN = 1e-6

_SI_SUFFIXES = {"k": 1e3, "K": 1e3, "M": 1e6, "G": 1e9}

# Per-frequency failures recorded (not raised) during a sweep.
_RECORDED_FAILURES = (
    InfeasibleTau,
    NotPositiveDefinite,
    AllPolesOneSign,
    ConstraintDegenerate,
    ConvergenceError,
    DivergenceError,
)


class ConfigError(Exception):
    """Config file missing, malformed, or inconsistent."""


class PipelineError(Exception):
    """A whole run failed (every frequency, or nothing to export)."""


def parse_frequency(value, where: str = "frequency") -> float:
    """Decimal number in hertz with optional SI suffix (k, K, M, G)."""
    if isinstance(value, bool):
        raise ConfigError(f"{where}: expected a frequency, got a boolean")
    if isinstance(value, (int, float)):
        parsed = float(value)
    elif isinstance(value, str):
        text = value.strip()
        scale = 1.0
        if text and text[-1] in _SI_SUFFIXES:
            scale = _SI_SUFFIXES[text[-1]]
            text = text[:-1]
        try:
            parsed = float(text) * scale
        except ValueError:
            raise ConfigError(f"{where}: cannot parse {value!r} as a frequency") from None
    else:
        raise ConfigError(f"{where}: expected a number or string, got {type(value).__name__}")
    if not math.isfinite(parsed) or parsed <= 0.0:
        raise ConfigError(f"{where}: frequency must be positive and finite, got {value!r}")
    return parsed


@dataclass
class DesignConfig:
    """Validated design description; see the module docstring for the schema."""

    mode: str
    array: ArraySpec
    accept: DirectionDensity
    reject: DirectionDensity
    frequencies: np.ndarray
    evaluate: DirectionDensity | None = None
    tau_db: float | None = None
    tau_clamp: bool = True
    tau_cap_spectrum: str = "effective"
    penalty: list | None = None
    measurement_direction: np.ndarray = field(
        default_factory=lambda: np.array([1.0, 0.0, 0.0])
    )
    alpha: float = 1.0
    alpha_w: float = 1e-2
    alpha_lambda: float = 1e-3
    max_iters: int = 100
    seed: int = 0
    schema_version: int = SCHEMA_VERSION


@dataclass
class FrequencyRecord:
    """One sweep entry: weights and diagnostics at a single frequency.

    ``tau_target_db`` is the directivity target actually enforced (after
    any clamping) for the equality-constrained modes, None otherwise.
    """

    frequency_hz: float
    weights: np.ndarray
    gdi_db: float
    objective: float
    iterations: int
    status: str
    tau_target_db: float | None = None

    @property
    def usable(self) -> bool:
        return not self.status.startswith("failed:")


@dataclass
class DesignResult:
    config: DesignConfig
    records: list[FrequencyRecord]

    @property
    def n_failed(self) -> int:
        return sum(not rec.usable for rec in self.records)


def load_config(path, overrides: dict | None = None) -> DesignConfig:
    """Parse and validate a YAML config file.

    ``overrides`` are top-level key replacements applied before
    validation (how the command line injects --mode/--tau-db/--seed).
    """
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw = yaml.safe_load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"config is not valid YAML: {exc}") from exc
    if overrides:
        if not isinstance(raw, dict):
            raise ConfigError("config: expected a top-level mapping")
        raw = {**raw, **overrides}
    return parse_config(raw)


def _require_keys(section: dict, where: str, required: tuple, optional: tuple) -> None:
    if not isinstance(section, dict):
        raise ConfigError(f"{where}: expected a mapping, got {type(section).__name__}")
    for key in required:
        if key not in section:
            raise ConfigError(f"{where}: missing required key {key!r}")
    unknown = set(section) - set(required) - set(optional)
    if unknown:
        raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")


def _parse_float(section: dict, key: str, where: str, default=None) -> float:
    value = section.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}.{key}: expected a number, got {value!r}")
    return float(value)


def _parse_transducer(raw: dict, where: str) -> Transducer:
    _require_keys(raw, where, ("position", "band"), ("sensitivity", "rolloff_order"))
    position = raw["position"]
    if not isinstance(position, (list, tuple)) or len(position) != 3:
        raise ConfigError(f"{where}.position: expected three coordinates")
    band = raw["band"]
    if not isinstance(band, (list, tuple)) or len(band) != 2:
        raise ConfigError(f"{where}.band: expected [low, high]")
    try:
        return Transducer(
            position=np.array([float(x) for x in position]),
            band_low_hz=parse_frequency(band[0], f"{where}.band[0]"),
            band_high_hz=parse_frequency(band[1], f"{where}.band[1]"),
            sensitivity=_parse_float(raw, "sensitivity", where, 1.0),
            rolloff_order=int(raw.get("rolloff_order", 2)),
        )
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _parse_density(raw: dict, where: str) -> DirectionDensity:
    _require_keys(raw, where, ("kind",), ("center", "concentration", "n_azimuth", "n_elevation"))
    center = raw.get("center", [1.0, 0.0, 0.0])
    if not isinstance(center, (list, tuple)) or len(center) != 3:
        raise ConfigError(f"{where}.center: expected three coordinates")
    try:
        return density_from_window(
            kind=raw["kind"],
            center=np.array([float(x) for x in center]),
            concentration=_parse_float(raw, "concentration", where, 0.0),
            n_azimuth=int(raw.get("n_azimuth", 72)),
            n_elevation=int(raw.get("n_elevation", 19)),
        )
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _parse_frequencies(raw, where: str) -> np.ndarray:
    if isinstance(raw, (list, tuple)):
        if len(raw) == 0:
            raise ConfigError(f"{where}: frequency list is empty")
        freqs = np.array([parse_frequency(x, f"{where}[{i}]") for i, x in enumerate(raw)])
    elif isinstance(raw, dict):
        variants = {"points_per_octave", "n_points"}
        chosen = variants & set(raw)
        if len(chosen) != 1:
            raise ConfigError(f"{where}: give exactly one of {sorted(variants)}")
        _require_keys(raw, where, ("start", "stop"), tuple(variants))
        start = parse_frequency(raw["start"], f"{where}.start")
        stop = parse_frequency(raw["stop"], f"{where}.stop")
        if stop <= start:
            raise ConfigError(f"{where}: stop must exceed start")
        if "n_points" in raw:
            n_points = int(raw["n_points"])
            if n_points < 2:
                raise ConfigError(f"{where}.n_points: need at least 2")
            freqs = np.geomspace(start, stop, n_points)
        else:
            ppo = float(raw["points_per_octave"])
            if ppo <= 0:
                raise ConfigError(f"{where}.points_per_octave: must be positive")
            count = int(math.floor(math.log2(stop / start) * ppo + 1e-9)) + 1
            freqs = start * 2.0 ** (np.arange(count) / ppo)
    else:
        raise ConfigError(f"{where}: expected a list or a start/stop mapping")
    if np.any(np.diff(freqs) <= 0.0):
        raise ConfigError(f"{where}: frequencies must be strictly increasing")
    return freqs


def parse_config(raw) -> DesignConfig:
    """Validate a raw config mapping into a :class:`DesignConfig`."""
    top_required = ("schema_version", "mode", "array", "densities", "frequencies")
    top_optional = (
        "tau_db",
        "tau_clamp",
        "tau_cap_spectrum",
        "penalty",
        "measurement_direction",
        "solver",
        "seed",
    )
    _require_keys(raw if isinstance(raw, dict) else {}, "config", top_required, top_optional)

    if raw["schema_version"] != SCHEMA_VERSION:
        raise ConfigError(
            f"config.schema_version: expected {SCHEMA_VERSION}, got {raw['schema_version']!r}"
        )
    mode = raw["mode"]
    if mode not in MODES:
        raise ConfigError(f"config.mode: expected one of {MODES}, got {mode!r}")

    _require_keys(raw["array"], "config.array", ("transducers",), ("speed_of_sound",))
    transducers_raw = raw["array"]["transducers"]
    if not isinstance(transducers_raw, list) or not transducers_raw:
        raise ConfigError("config.array.transducers: expected a nonempty list")
    transducers = [
        _parse_transducer(t, f"config.array.transducers[{i}]")
        for i, t in enumerate(transducers_raw)
    ]
    try:
        array = ArraySpec(
            transducers=transducers,
            speed_of_sound=_parse_float(raw["array"], "speed_of_sound", "config.array", 343.0),
        )
    except ValueError as exc:
        raise ConfigError(f"config.array: {exc}") from exc

    _require_keys(raw["densities"], "config.densities", ("accept", "reject"), ("evaluate",))
    accept = _parse_density(raw["densities"]["accept"], "config.densities.accept")
    reject = _parse_density(raw["densities"]["reject"], "config.densities.reject")
    evaluate = None
    if "evaluate" in raw["densities"]:
        evaluate = _parse_density(raw["densities"]["evaluate"], "config.densities.evaluate")

    frequencies = _parse_frequencies(raw["frequencies"], "config.frequencies")

    tau_db = None
    if "tau_db" in raw:
        tau_db = _parse_float(raw, "tau_db", "config")
    if mode in ("mecd", "mscd") and tau_db is None:
        raise ConfigError(f"config.tau_db: required for mode {mode!r}")

    tau_cap_spectrum = raw.get("tau_cap_spectrum", "effective")
    if tau_cap_spectrum not in ("effective", "raw"):
        raise ConfigError(
            f"config.tau_cap_spectrum: expected 'effective' or 'raw', got {tau_cap_spectrum!r}"
        )
    tau_clamp = raw.get("tau_clamp", True)
    if not isinstance(tau_clamp, bool):
        raise ConfigError("config.tau_clamp: expected true or false")

    penalty = None
    if "penalty" in raw:
        penalty_raw = raw["penalty"]
        if not isinstance(penalty_raw, list) or len(penalty_raw) != array.n:
            raise ConfigError(
                f"config.penalty: expected one breakpoint list per transducer ({array.n})"
            )
        penalty = []
        for i, points in enumerate(penalty_raw):
            where = f"config.penalty[{i}]"
            if not isinstance(points, list) or not points:
                raise ConfigError(f"{where}: expected a nonempty list of (frequency, lambda) pairs")
            parsed = []
            for j, pair in enumerate(points):
                if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                    raise ConfigError(f"{where}[{j}]: expected a (frequency, lambda) pair")
                freq = parse_frequency(pair[0], f"{where}[{j}][0]")
                lam = pair[1]
                if isinstance(lam, bool) or not isinstance(lam, (int, float)):
                    raise ConfigError(f"{where}[{j}][1]: expected a number, got {lam!r}")
                parsed.append((freq, float(lam)))
            if any(b[0] <= a[0] for a, b in zip(parsed, parsed[1:])):
                raise ConfigError(f"{where}: breakpoint frequencies must be strictly increasing")
            penalty.append(parsed)
        try:
            interpolate_lambdas(penalty, float(frequencies[0]))
        except ValueError as exc:
            raise ConfigError(f"config.penalty: {exc}") from exc
    elif mode == "grpq":
        raise ConfigError("config.penalty: required for mode 'grpq'")

    direction = raw.get("measurement_direction", [1.0, 0.0, 0.0])
    if not isinstance(direction, (list, tuple)) or len(direction) != 3:
        raise ConfigError("config.measurement_direction: expected three coordinates")
    direction = np.array([float(x) for x in direction])
    norm = np.linalg.norm(direction)
    if not np.isfinite(norm) or norm == 0.0:
        raise ConfigError("config.measurement_direction: must be a nonzero vector")
    direction = direction / norm

    solver = raw.get("solver", {})
    _require_keys(solver, "config.solver", (), ("alpha", "alpha_w", "alpha_lambda", "max_iters"))
    alpha = _parse_float(solver, "alpha", "config.solver", 1.0)
    alpha_w = _parse_float(solver, "alpha_w", "config.solver", 1e-2)
    alpha_lambda = _parse_float(solver, "alpha_lambda", "config.solver", 1e-3)
    max_iters = int(solver.get("max_iters", 100))
    if alpha <= 0 or alpha_w < 0 or alpha_lambda < 0 or max_iters < 1:
        raise ConfigError("config.solver: step sizes/iteration budget out of range")

    seed = raw.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ConfigError(f"config.seed: expected an integer, got {seed!r}")

    return DesignConfig(
        mode=mode,
        array=array,
        accept=accept,
        reject=reject,
        evaluate=evaluate,
        frequencies=frequencies,
        tau_db=tau_db,
        tau_clamp=tau_clamp,
        tau_cap_spectrum=tau_cap_spectrum,
        penalty=penalty,
        measurement_direction=direction,
        alpha=alpha,
        alpha_w=alpha_w,
        alpha_lambda=alpha_lambda,
        max_iters=max_iters,
        seed=seed,
    )


def _effective_cap_db(a, r, weights: PenaltyWeights | None, spectrum: str) -> float:
    """Top of the feasible directivity interval, in dB, per the cap rule.

    With a penalty schedule and ``spectrum='effective'`` this is the
    penalized optimum (top generalized eigenvalue of the substituted
    pair); otherwise the plain top generalized eigenvalue of (a, r).
    """
    if weights is not None and spectrum == "effective":
        lam = weights.lambdas
        _, rhat = build_penalty(r, weights)
        pair = generalized_eig(np.outer(lam, lam) * a, rhat, ridge=True)
    else:
        pair = generalized_eig(a, r, ridge=True)
    top = float(pair.values[-1]) * (1.0 - _CLAMP_MARGIN)
    if top <= 0.0:
        return -math.inf
    return 10.0 * math.log10(top)


def run_design(config: DesignConfig) -> DesignResult:
    """Sweep the configured design over its frequency grid.

    Every frequency yields a :class:`FrequencyRecord` whose status is
    ``converged``, ``clamped-tau`` (converged at a lowered directivity
    target), or ``failed:<reason>``. Per-frequency failures never abort
    the sweep.

    Raises
    ------
    PipelineError
        If every frequency fails.
    """
    array = config.array
    n = array.n
    records: list[FrequencyRecord] = []
    for frequency in config.frequencies:
        frequency = float(frequency)
        a = covariance_from_density(array, frequency, config.accept)
        r = covariance_from_density(array, frequency, config.reject)
        weights_lam = (
            interpolate_lambdas(config.penalty, frequency) if config.penalty else None
        )
        try:
            records.append(
                _design_one(config, frequency, a, r, weights_lam)
            )
        except _RECORDED_FAILURES as exc:
            records.append(
                FrequencyRecord(
                    frequency_hz=frequency,
                    weights=np.full(n, np.nan, dtype=np.complex128),
                    gdi_db=float("nan"),
                    objective=float("nan"),
                    iterations=0,
                    status=f"failed:{type(exc).__name__}",
                )
            )
    if all(not rec.usable for rec in records):
        raise PipelineError("every frequency in the sweep failed")
    return DesignResult(config=config, records=records)


def _design_one(
    config: DesignConfig,
    frequency: float,
    a: np.ndarray,
    r: np.ndarray,
    weights_lam: PenaltyWeights | None,
) -> FrequencyRecord:
    mode = config.mode
    if mode == "grq":
        res = max_grq(a, r)
        return FrequencyRecord(frequency, res.weights, res.value_db, res.value, 0, "converged")
    if mode == "grpq":
        res = max_grpq(a, r, weights_lam)
        return FrequencyRecord(frequency, res.weights, res.value_db, res.value, 0, "converged")

    # Equality-constrained modes share the tau cap and constraint assembly.
    tau_db = config.tau_db
    status = "converged"
    if config.tau_clamp:
        cap_db = _effective_cap_db(a, r, weights_lam, config.tau_cap_spectrum)
        if cap_db < tau_db:
            tau_db = cap_db
            status = "clamped-tau"
    constraint = build_constraint(a, r, tau_db, clamp=config.tau_clamp)
    target_db = 10.0 * math.log10(constraint.tau)

    if mode == "mecd":
        evaluate = config.evaluate
        c = covariance_from_density(config.array, frequency, evaluate) if evaluate else a
        res = mecd_pa(c, constraint, alpha=config.alpha, max_iters=config.max_iters)
        if not res.converged:
            status = "failed:max-iterations"
        return FrequencyRecord(
            frequency_hz=frequency,
            weights=res.weights,
            gdi_db=10.0 * math.log10(res.gdi_achieved),
            objective=res.objective,
            iterations=len(res.trace),
            status=status,
            tau_target_db=target_db,
        )

    # mscd
    c_vec = steering_vector(config.array, frequency, config.measurement_direction)
    res = mscd_solve(constraint, c_vec)
    return FrequencyRecord(
        frequency_hz=frequency,
        weights=res.weights,
        gdi_db=10.0 * math.log10(res.gdi_achieved),
        objective=res.norm_sq,
        iterations=0,
        status=status,
        tau_target_db=target_db,
    )


def _fmt(x: float) -> str:
    """Shortest round-trip decimal form; deterministic for equal doubles."""
    return repr(float(x))


def export_weights(result: DesignResult) -> str:
    """Long-form weights CSV: one row per (frequency, transducer).

    Columns: frequency_hz, transducer_index, re, im, magnitude_db,
    phase_deg. Magnitudes are floored at -80 dB; failed frequencies carry
    nan weights.
    """
    lines = ["frequency_hz,transducer_index,re,im,magnitude_db,phase_deg"]
    for rec in result.records:
        for idx, w in enumerate(rec.weights):
            mag = abs(w)
            if math.isnan(mag):
                mag_db = phase = float("nan")
            else:
                mag_db = max(20.0 * math.log10(mag), DB_FLOOR) if mag > 0.0 else DB_FLOOR
                phase = math.degrees(math.atan2(w.imag, w.real))
            lines.append(
                ",".join(
                    (
                        _fmt(rec.frequency_hz),
                        str(idx),
                        _fmt(w.real),
                        _fmt(w.imag),
                        _fmt(mag_db),
                        _fmt(phase),
                    )
                )
            )
    return "\n".join(lines) + "\n"


def export_gdi(result: DesignResult) -> str:
    """Per-frequency summary CSV: directivity, objective, iterations, status."""
    lines = ["frequency_hz,gdi_db,objective,iterations,status"]
    for rec in result.records:
        lines.append(
            ",".join(
                (
                    _fmt(rec.frequency_hz),
                    _fmt(rec.gdi_db),
                    _fmt(rec.objective),
                    str(rec.iterations),
                    rec.status,
                )
            )
        )
    return "\n".join(lines) + "\n"


def export_beampattern(result: DesignResult, resolution_deg: float = 1.0) -> str:
    """Horizontal-plane beam pattern CSV on a uniform azimuth grid.

    Levels are ``20*log10 |w^H d(azimuth)|`` normalized to a 0 dB peak per
    frequency and floored at -80 dB. Failed frequencies are skipped.

    Raises
    ------
    PipelineError
        If the result holds no usable records.
    """
    steps = round(360.0 / resolution_deg)
    if steps < 1 or abs(steps * resolution_deg - 360.0) > 1e-9:
        raise PipelineError(f"resolution {resolution_deg} deg must divide 360")
    azimuths = np.arange(steps) * resolution_deg
    rad = np.radians(azimuths)
    directions = np.stack([np.cos(rad), np.sin(rad), np.zeros_like(rad)], axis=1)

    usable = [rec for rec in result.records if rec.usable]
    if not usable:
        raise PipelineError("no usable records to export")
    lines = ["frequency_hz,azimuth_deg,level_db"]
    for rec in usable:
        steer = steering_matrix(result.config.array, rec.frequency_hz, directions)
        response = np.abs(steer @ rec.weights.conj())
        peak = response.max()
        if peak <= 0.0:
            level = np.full(steps, DB_FLOOR)
        else:
            with np.errstate(divide="ignore"):
                level = 20.0 * np.log10(response / peak)
            level = np.maximum(level, DB_FLOOR)
        for az, lv in zip(azimuths, level):
            lines.append(f"{_fmt(rec.frequency_hz)},{_fmt(az)},{_fmt(lv)}")
    return "\n".join(lines) + "\n"


@dataclass
class BenchmarkTrial:
    """Iteration counts and per-iteration traces for one random instance."""

    trial: int
    pa_iterations: int
    dm_iterations: int
    pa_trace: list[tuple[int, float, float]]
    dm_trace: list[tuple[int, float, float]]


@dataclass
class BenchmarkResult:
    trials: list[BenchmarkTrial]
    residual_target: float

    @property
    def pa_median(self) -> float:
        return float(np.median([t.pa_iterations for t in self.trials]))

    @property
    def dm_median(self) -> float:
        return float(np.median([t.dm_iterations for t in self.trials]))


def _random_psd(n: int, rng: np.random.Generator) -> np.ndarray:
    m = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2 * n)
    return symmetrize(m @ m.conj().T)


def run_benchmark(
    n: int = 8,
    trials: int = 100,
    tau_db: float = 6.0,
    seed: int = 0,
    residual_target: float = 1e-6,
    pa_max_iters: int = 100,
    dm_max_iters: int = 5000,
    max_regenerations: int = 50,
) -> BenchmarkResult:
    """Race the projected-ascent solver against the differential-multiplier
    baseline on random feasible instances.

    Each trial draws Hermitian PSD matrices a, r, c (``m^H m`` with complex
    normal entries) from a per-trial generator split deterministically off
    the seed, regenerating (boundedly) until the directivity target is
    feasible, then measures iterations until the normalized constraint
    residual first reaches ``residual_target``; hitting the iteration cap
    counts as the cap.

    Raises
    ------
    PipelineError
        If a feasible instance cannot be drawn within the retry budget.
    """
    if n < 2 or trials < 1:
        raise ValueError("need n >= 2 and at least one trial")
    children = np.random.SeedSequence(seed).spawn(trials)
    out: list[BenchmarkTrial] = []
    for trial in range(trials):
        rng = np.random.default_rng(children[trial])
        constraint = None
        for _ in range(max_regenerations):
            a = _random_psd(n, rng)
            r = _random_psd(n, rng)
            c = _random_psd(n, rng)
            try:
                constraint = build_constraint(a, r, tau_db)
                break
            except (InfeasibleTau, NotPositiveDefinite):
                continue
        if constraint is None:
            raise PipelineError(
                f"trial {trial}: no feasible instance in {max_regenerations} draws"
            )
        pa = mecd_pa(c, constraint, max_iters=pa_max_iters, residual_target=residual_target)
        dm = mecd_dm(c, constraint, max_iters=dm_max_iters, residual_target=residual_target)
        out.append(
            BenchmarkTrial(
                trial=trial,
                pa_iterations=_iterations_to_target(pa.trace, residual_target, pa_max_iters),
                dm_iterations=_iterations_to_target(dm.trace, residual_target, dm_max_iters),
                pa_trace=pa.trace,
                dm_trace=dm.trace,
            )
        )
    return BenchmarkResult(trials=out, residual_target=residual_target)


def _iterations_to_target(trace, target: float, cap: int) -> int:
    for iteration, _, residual in trace:
        if residual <= target:
            return iteration
    return cap


def export_benchmark(result: BenchmarkResult) -> str:
    """Long-form benchmark CSV: one row per (trial, solver, iteration)."""
    lines = ["trial,solver,iteration,objective,residual"]
    for t in result.trials:
        for solver, trace in (("pa", t.pa_trace), ("dm", t.dm_trace)):
            for iteration, objective, residual in trace:
                lines.append(
                    f"{t.trial},{solver},{iteration},{_fmt(objective)},{_fmt(residual)}"
                )
    return "\n".join(lines) + "\n"
