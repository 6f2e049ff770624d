"""Parameter sweeps, spectrum tables, and peak analysis.

A scan is described by :class:`ScanConfig` (JSON-compatible), runs over
a uniform (or log-spaced) grid of one scan variable, and produces a
:class:`SpectrumTable` whose CSV form carries the full configuration and
the worst linear-solve residual in ``#``-prefixed header lines.  Results
are deterministic: the same configuration yields byte-identical output,
with or without worker processes.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from ._kernels import ACTIVE_BACKEND
from .errors import InputError
from .observables import (
    absorption,
    dispersion,
    fluorescence_modulation,
    fwm_power,
    linear_probe_solver,
    magnetic_dipole,
)
from .probe_response import ProbeSolver
from .steady_state import solve_steady_state
from .system import FieldSpec, TransitionSpec, build_operator_set

SCAN_VARIABLES = ("delta", "bfield", "saturation")
OBSERVABLE_COLUMNS = (
    "absorption",
    "dispersion",
    "fwm_power",
    "fluorescence_mod",
    "mag_dipole_modulus",
    "linear_absorption",
    "incoherent_absorption",
)
MAX_POINTS = 10**6


@dataclass(frozen=True)
class ScanConfig:
    """Everything needed to reproduce one sweep."""

    transition: TransitionSpec
    pump: FieldSpec
    probe: FieldSpec
    bfield: float = 0.0
    delta: float = 0.0  # fixed offset for bfield / saturation scans
    scan_variable: str = "delta"
    lo: float = -0.05
    hi: float = 0.05
    points: int = 501
    log_grid: bool = False
    observables: tuple = ("absorption", "linear_absorption")
    output_path: str | None = None
    workers: int = 1

    def __post_init__(self):
        if self.scan_variable not in SCAN_VARIABLES:
            raise InputError(
                f"scan_variable must be one of {SCAN_VARIABLES}, "
                f"got {self.scan_variable!r}"
            )
        if not self.lo < self.hi:
            raise InputError(f"scan range must satisfy lo < hi, got [{self.lo}, {self.hi}]")
        if not 2 <= self.points <= MAX_POINTS:
            raise InputError(f"points must lie in [2, {MAX_POINTS}], got {self.points}")
        if not self.observables:
            raise InputError("at least one observable must be requested")
        unknown = set(self.observables) - set(OBSERVABLE_COLUMNS)
        if unknown:
            raise InputError(
                f"unknown observables {sorted(unknown)}; "
                f"choose from {OBSERVABLE_COLUMNS}"
            )
        if self.log_grid and self.lo <= 0:
            raise InputError("log-spaced grids need lo > 0")
        if self.workers < 1:
            raise InputError("workers must be >= 1")
        object.__setattr__(self, "observables", tuple(self.observables))

    def grid(self) -> np.ndarray:
        if self.log_grid:
            return np.geomspace(self.lo, self.hi, self.points)
        return np.linspace(self.lo, self.hi, self.points)

    def to_dict(self) -> dict:
        tr = self.transition
        return {
            "transition": {
                "fg": tr.fg,
                "fe": tr.fe,
                "branching": tr.branching,
                "gamma": tr.gamma,
                "beta_g": tr.beta_g,
                "beta_e": tr.beta_e,
            },
            "pump": _field_to_dict(self.pump),
            "probe": _field_to_dict(self.probe),
            "bfield": self.bfield,
            "delta": self.delta,
            "scan": {
                "variable": self.scan_variable,
                "range": [self.lo, self.hi],
                "points": self.points,
                "log": self.log_grid,
            },
            "observables": list(self.observables),
            "output": self.output_path,
            "workers": self.workers,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ScanConfig":
        try:
            tr = data["transition"]
            scan = data.get("scan", {})
            rng = scan.get("range", [-0.05, 0.05])
            return cls(
                transition=TransitionSpec(
                    fg=tr["fg"],
                    fe=tr["fe"],
                    branching=tr.get("branching", 1.0),
                    gamma=tr.get("gamma", 1e-3),
                    beta_g=tr.get("beta_g", 1.0),
                    beta_e=tr.get("beta_e"),
                ),
                pump=_field_from_dict(data.get("pump", {}), default_pol="lin_x"),
                probe=_field_from_dict(data.get("probe", {}), default_pol="lin_y"),
                bfield=float(data.get("bfield", 0.0)),
                delta=float(data.get("delta", 0.0)),
                scan_variable=scan.get("variable", "delta"),
                lo=float(rng[0]),
                hi=float(rng[1]),
                points=int(scan.get("points", 501)),
                log_grid=bool(scan.get("log", False)),
                observables=tuple(
                    data.get("observables", ("absorption", "linear_absorption"))
                ),
                output_path=data.get("output"),
                workers=int(data.get("workers", 1)),
            )
        except KeyError as exc:
            raise InputError(f"config is missing required key {exc}") from exc


def _field_to_dict(fld: FieldSpec) -> dict:
    cart = fld.pol.to_cartesian()
    return {
        "rabi": fld.rabi,
        "polarization": [[c.real, c.imag] for c in cart],
        "detuning": fld.detuning,
    }


def _field_from_dict(data: dict, default_pol: str) -> FieldSpec:
    pol = data.get("polarization", default_pol)
    if isinstance(pol, (list, tuple)):
        comps = []
        for entry in pol:
            if isinstance(entry, (list, tuple)):
                comps.append(complex(entry[0], entry[1]))
            elif isinstance(entry, str):
                comps.append(complex(entry.replace(" ", "")))
            else:
                comps.append(complex(entry))
        pol = tuple(comps)
    return FieldSpec(
        rabi=float(data.get("rabi", 0.0)),
        pol=pol,
        detuning=float(data.get("detuning", 0.0)),
    )


@dataclass
class SpectrumTable:
    """Scan grid plus one column per observable, with provenance metadata."""

    scan_variable: str
    scan_values: np.ndarray
    columns: dict
    metadata: dict = field(default_factory=dict)

    @property
    def max_residual(self) -> float:
        return float(self.metadata.get("max_residual", float("nan")))

    def column(self, name: str) -> np.ndarray:
        try:
            return self.columns[name]
        except KeyError:
            raise InputError(
                f"table has no column {name!r}; available: {list(self.columns)}"
            ) from None

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_csv())

    def to_csv(self) -> str:
        lines = ["# zeemanprobe-spectrum format=1"]
        for key in sorted(self.metadata):
            lines.append(f"# {key}: {_meta_str(self.metadata[key])}")
        names = [self.scan_variable] + list(self.columns)
        lines.append(",".join(names))
        cols = [self.scan_values] + [self.columns[name] for name in self.columns]
        for row in zip(*cols):
            lines.append(",".join(f"{v:.17g}" for v in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def read_csv(cls, path) -> "SpectrumTable":
        metadata = {}
        header = None
        rows = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    body = line[1:].strip()
                    if ":" in body:
                        key, _, value = body.partition(":")
                        metadata[key.strip()] = value.strip()
                    continue
                if header is None:
                    header = [h.strip() for h in line.split(",")]
                    continue
                rows.append([float(v) for v in line.split(",")])
        if header is None or not rows:
            raise InputError(f"{path} does not contain a spectrum table")
        data = np.array(rows)
        columns = {
            name: data[:, i + 1].copy() for i, name in enumerate(header[1:])
        }
        return cls(
            scan_variable=header[0],
            scan_values=data[:, 0].copy(),
            columns=columns,
            metadata=metadata,
        )


def _meta_str(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True)
    return str(value)


class _PointEngine:
    """Evaluates every requested observable at one scan point.

    For delta scans the steady state, the response operators and the
    pump-off reference are assembled once and shared across all points;
    bfield and saturation scans rebuild them per point.
    """

    def __init__(self, cfg: ScanConfig):
        self.cfg = cfg
        self.spec = cfg.transition
        self.max_residual = 0.0
        if cfg.scan_variable == "delta":
            self._static = self._assemble(cfg.pump, cfg.bfield)

    def _assemble(self, pump: FieldSpec, bfield: float):
        cfg = self.cfg
        ops = build_operator_set(self.spec, pump, cfg.probe, bfield=bfield)
        steady = solve_steady_state(ops, self.spec)
        self._track(steady.residual)
        bundle = {"ops": ops, "steady": steady, "solver": ProbeSolver(ops, self.spec, steady)}
        if "incoherent_absorption" in cfg.observables:
            bundle["incoherent"] = ProbeSolver(ops, self.spec, steady, include_pump=False)
        if "linear_absorption" in cfg.observables:
            bundle["linear"] = linear_probe_solver(ops, self.spec, cfg.probe)
        return bundle

    def _track(self, residual: float):
        if residual > self.max_residual:
            self.max_residual = residual

    def evaluate(self, value: float) -> dict:
        cfg = self.cfg
        if cfg.scan_variable == "delta":
            bundle, delta, bfield = self._static, float(value), cfg.bfield
        elif cfg.scan_variable == "bfield":
            bundle = self._assemble(cfg.pump, float(value))
            delta, bfield = cfg.delta, float(value)
        else:  # saturation: S = 2 (rabi)^2
            rabi = float(np.sqrt(value / 2.0))
            pump = FieldSpec(rabi=rabi, pol=cfg.pump.pol, detuning=cfg.pump.detuning)
            bundle = self._assemble(pump, cfg.bfield)
            delta, bfield = cfg.delta, cfg.bfield

        ops, spec = bundle["ops"], self.spec
        pr = bundle["solver"].solve(delta)
        self._track(pr.residual)
        row = {}
        for name in cfg.observables:
            if name == "absorption":
                row[name] = absorption(pr, ops, cfg.probe)
            elif name == "dispersion":
                row[name] = dispersion(pr, ops, cfg.probe)
            elif name == "fwm_power":
                row[name] = fwm_power(pr, ops)
            elif name == "fluorescence_mod":
                row[name] = fluorescence_modulation(pr, spec)
            elif name == "mag_dipole_modulus":
                row[name] = magnetic_dipole(pr, ops, spec)
            elif name == "linear_absorption":
                lin = bundle["linear"].solve(delta)
                self._track(lin.residual)
                row[name] = absorption(lin, ops, cfg.probe)
            elif name == "incoherent_absorption":
                inc = bundle["incoherent"].solve(delta)
                self._track(inc.residual)
                row[name] = absorption(inc, ops, cfg.probe)
        return row


def _scan_chunk(payload: str) -> tuple:
    cfg_data, values = json.loads(payload)
    cfg = ScanConfig.from_dict(cfg_data)
    engine = _PointEngine(cfg)
    rows = [engine.evaluate(v) for v in values]
    columns = {
        name: [row[name] for row in rows] for name in cfg.observables
    }
    return columns, engine.max_residual


def run_scan(cfg: ScanConfig) -> SpectrumTable:
    """Execute the sweep described by ``cfg``."""
    values = cfg.grid()
    if cfg.workers == 1:
        engine = _PointEngine(cfg)
        rows = [engine.evaluate(v) for v in values]
        columns = {
            name: np.array([row[name] for row in rows]) for name in cfg.observables
        }
        max_residual = engine.max_residual
    else:
        chunks = np.array_split(values, cfg.workers)
        payloads = [
            json.dumps((cfg.to_dict(), chunk.tolist())) for chunk in chunks if chunk.size
        ]
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(_scan_chunk, payloads))
        columns = {
            name: np.concatenate([np.asarray(part[0][name]) for part in parts])
            for name in cfg.observables
        }
        max_residual = max(part[1] for part in parts)

    metadata = {
        "version": __version__,
        "kernel_backend": ACTIVE_BACKEND,
        "config": cfg.to_dict(),
        "max_residual": max_residual,
    }
    return SpectrumTable(
        scan_variable=cfg.scan_variable,
        scan_values=values,
        columns=columns,
        metadata=metadata,
    )


@dataclass(frozen=True)
class PeakReport:
    """Location, size and width of one spectral feature."""

    center: float
    height: float
    fwhm: float
    baseline: float

    def to_dict(self) -> dict:
        return {
            "center": self.center,
            "height": self.height,
            "fwhm": self.fwhm,
            "baseline": self.baseline,
        }


def find_peak_and_width(
    table: SpectrumTable, column: str, window: tuple | None = None
) -> PeakReport:
    """Locate the dominant extremum in ``window`` and measure its FWHM.

    The center comes from parabolic interpolation of the three samples
    around the grid extremum; the width from linear interpolation of the
    half-height crossings relative to a local baseline estimated as the
    median of the window-edge samples.  Works for peaks and dips alike.
    """
    x = table.scan_values
    y = table.column(column)
    if window is not None:
        mask = (x >= window[0]) & (x <= window[1])
        if mask.sum() < 5:
            raise InputError("window contains fewer than 5 grid points")
        x, y = x[mask], y[mask]
    n = x.size
    edge = max(1, n // 20)
    baseline = float(np.median(np.concatenate([y[:edge], y[-edge:]])))
    dev = y - baseline
    scale = np.max(np.abs(y)) if np.max(np.abs(y)) > 0 else 1.0
    idx = int(np.argmax(np.abs(dev)))
    if np.abs(dev[idx]) <= 1e-8 * scale:
        raise InputError("no extremum above the numerical noise floor")
    if idx in (0, n - 1):
        raise InputError("extremum sits on the window edge; widen the window")

    # parabolic refinement on the uniform grid
    y0, y1, y2 = dev[idx - 1], dev[idx], dev[idx + 1]
    h = x[idx + 1] - x[idx]
    curvature = y0 - 2.0 * y1 + y2
    shift = 0.0 if curvature == 0 else 0.5 * (y0 - y2) / curvature
    center = float(x[idx] + shift * h)
    height_dev = float(y1 - 0.25 * (y0 - y2) * shift)
    half = 0.5 * height_dev

    sign = 1.0 if height_dev > 0 else -1.0

    def _crossing(direction: int) -> float:
        i = idx
        while 0 <= i + direction < n:
            j = i + direction
            if sign * dev[j] <= sign * half:
                # linear interpolation between the bracketing samples
                frac = (dev[i] - half) / (dev[i] - dev[j])
                return float(x[i] + frac * (x[j] - x[i]))
            i = j
        raise InputError(
            "half-height crossing not found inside the window; widen it"
        )

    left = _crossing(-1)
    right = _crossing(+1)
    return PeakReport(
        center=center,
        height=float(baseline + height_dev),
        fwhm=float(right - left),
        baseline=baseline,
    )
