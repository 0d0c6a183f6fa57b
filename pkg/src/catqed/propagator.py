"""Time evolution by renormalized fourth-order Taylor stepping.

Each step applies |psi'> = sum_{k=0..4} (-i H dt)^k / k! |psi> followed by
renormalization.  The pre-renormalization norm deviation is tracked as a
cheap integration-quality diagnostic.  Monitors are evaluated only on the
sampling grid, never inside the hot loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError, NumericalError, PeakError, TruncationError
from .fileio import atomic_write_text, format_float
from .hilbert import CompositeState, DickeSpace, FockSpace
from .operators import HamiltonianAction, expectation
from .operators import ModelParams

# Chosen so long runs stay responsive: with the default stride rule a run
# yields at most this many samples.
MAX_AUTO_SAMPLES = 5000

DEFAULT_DT = 1e-3


@dataclass(frozen=True)
class PropagationPlan:
    """How far, how finely, and what to record."""

    t_max: float
    dt: float = DEFAULT_DT
    sample_stride: int | None = None
    monitors: tuple[str, ...] = ("qfi_density", "photon_number")

    def __post_init__(self):
        if self.t_max <= 0.0:
            raise ConfigError(f"t_max must be positive, got {self.t_max!r}")
        if self.dt <= 0.0 or self.dt > self.t_max:
            raise ConfigError(f"dt must lie in (0, t_max], got {self.dt!r}")
        if self.sample_stride is not None and self.sample_stride < 1:
            raise ConfigError("sample_stride must be >= 1")

    @property
    def n_steps(self) -> int:
        return max(1, round(self.t_max / self.dt))

    def stride(self) -> int:
        if self.sample_stride is not None:
            return self.sample_stride
        return max(1, math.ceil(self.n_steps / MAX_AUTO_SAMPLES))


@dataclass
class MonitorContext:
    """Everything a monitor may need at one sampling instant."""

    state: CompositeState
    params: ModelParams
    norm_drift: float


MonitorFn = Callable[[MonitorContext], float]

_REGISTRY: dict[str, MonitorFn] = {}


def register_monitor(name: str, fn: MonitorFn) -> None:
    _REGISTRY[name] = fn


def monitor_names() -> tuple[str, ...]:
    return tuple(sorted(_REGISTRY))


def resolve_monitors(names: Sequence[str]) -> list[tuple[str, MonitorFn]]:
    missing = [n for n in names if n not in _REGISTRY]
    if missing:
        raise ConfigError(
            f"unknown monitor(s) {missing}; available: {monitor_names()}")
    return [(n, _REGISTRY[n]) for n in names]


register_monitor("norm_drift", lambda ctx: ctx.norm_drift)
register_monitor("photon_number", lambda ctx: expectation(ctx.state, "photon_number"))
register_monitor("jz", lambda ctx: expectation(ctx.state, "jz"))
register_monitor("jx", lambda ctx: expectation(ctx.state, "jx"))
register_monitor("jy", lambda ctx: expectation(ctx.state, "jy"))
register_monitor("energy", lambda ctx: expectation(ctx.state, "energy", ctx.params))
register_monitor(
    "excitation_number",
    lambda ctx: expectation(ctx.state, "excitation_number", ctx.params))


class _Stepper:
    """Owns the working buffers for one propagation run."""

    def __init__(self, amplitudes: np.ndarray, params: ModelParams,
                 dicke: DickeSpace, fock: FockSpace, dt: float, order: int = 4):
        if order < 1:
            raise ConfigError("Taylor order must be >= 1")
        self.psi = np.array(amplitudes, dtype=np.complex128, order="C")
        self.order = order
        self.action = HamiltonianAction(params, dicke, fock, scale=-1j * dt)
        self._acc = np.empty_like(self.psi)
        self._t1 = np.empty_like(self.psi)
        self._t2 = np.empty_like(self.psi)

    def advance(self) -> float:
        """One renormalized Taylor step; returns |pre-renorm norm - 1|."""
        acc = self._acc
        np.copyto(acc, self.psi)
        src, dst = self.psi, self._t1
        for k in range(1, self.order + 1):
            self.action.apply(src, dst)
            if k > 1:
                dst *= 1.0 / k
            acc += dst
            src, dst = dst, (self._t2 if dst is self._t1 else self._t1)
        nrm2 = np.vdot(acc, acc).real
        if not np.isfinite(nrm2) or nrm2 == 0.0:
            raise NumericalError(f"state norm became {nrm2!r} during stepping")
        nrm = math.sqrt(nrm2)
        acc *= 1.0 / nrm
        self.psi, self._acc = acc, self.psi
        return abs(nrm - 1.0)


@dataclass
class TimeSeries:
    """Sampled scalar monitors along one run."""

    times: np.ndarray
    columns: dict[str, np.ndarray] = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise KeyError(f"no column {name!r}; have {sorted(self.columns)}")
        return self.columns[name]

    def to_csv(self, path: str) -> None:
        names = list(self.columns)
        lines = ["time," + ",".join(names)]
        cols = [self.columns[n] for n in names]
        for i, t in enumerate(self.times):
            row = [format_float(t)] + [format_float(c[i]) for c in cols]
            lines.append(",".join(row))
        atomic_write_text(path, "\n".join(lines) + "\n")


def _check_tail(fock: FockSpace, psi: np.ndarray, t: float) -> float:
    tail = fock.tail_population(psi)
    if tail > fock.tail_tolerance:
        raise TruncationError(
            f"tail population {tail:.3e} exceeds {fock.tail_tolerance:.1e} at "
            f"t = {t:.6g} for n_max = {fock.n_max}; raise the cutoff")
    return tail


def run(initial: CompositeState, params: ModelParams, plan: PropagationPlan,
        extra_monitors: Sequence[tuple[str, MonitorFn]] = ()) -> TimeSeries:
    """Propagate and record the plan's monitors on the sampling grid.

    ``extra_monitors`` supplements the named set with caller-built monitors
    (e.g. measurement-conditioned readout needing its own spec).
    """
    monitors = resolve_monitors(plan.monitors) + list(extra_monitors)
    names = [n for n, _ in monitors]
    if len(set(names)) != len(names):
        raise ConfigError(f"duplicate monitor names in {names}")
    dt = plan.dt
    n_steps = plan.n_steps
    stride = plan.stride()
    stepper = _Stepper(initial.amplitudes, params, initial.dicke, initial.fock, dt)

    times: list[float] = []
    rows: list[list[float]] = []

    def take_sample(step: int, drift: float) -> None:
        t = step * dt
        _check_tail(initial.fock, stepper.psi, t)
        state = CompositeState(stepper.psi, initial.dicke, initial.fock,
                               time=t, copy=True, validate=False)
        ctx = MonitorContext(state=state, params=params, norm_drift=drift)
        times.append(t)
        rows.append([fn(ctx) for _, fn in monitors])

    take_sample(0, 0.0)
    drift_max = 0.0
    for step in range(1, n_steps + 1):
        drift = stepper.advance()
        if drift > drift_max:
            drift_max = drift
        if step % stride == 0 or step == n_steps:
            take_sample(step, drift_max)
            drift_max = 0.0

    data = np.asarray(rows, dtype=float)
    columns = {name: np.ascontiguousarray(data[:, i]) for i, name in enumerate(names)}
    return TimeSeries(times=np.asarray(times, dtype=float), columns=columns)


def snapshots(initial: CompositeState, params: ModelParams, times: Sequence[float],
              dt: float = DEFAULT_DT, order: int = 4) -> list[CompositeState]:
    """States at the requested times (each snapped to the step grid)."""
    if any(t < 0 for t in times):
        raise ConfigError("snapshot times must be nonnegative")
    steps = [round(t / dt) for t in times]
    stepper = _Stepper(initial.amplitudes, params, initial.dicke, initial.fock,
                       dt, order=order)
    captured: dict[int, CompositeState] = {}

    def capture(step: int) -> None:
        t = step * dt
        _check_tail(initial.fock, stepper.psi, t)
        captured[step] = CompositeState(stepper.psi, initial.dicke, initial.fock,
                                        time=t, copy=True, validate=False)

    current = 0
    for target in sorted(set(steps)):
        while current < target:
            stepper.advance()
            current += 1
        capture(target)
    return [captured[s] for s in steps]


def propagate(initial: CompositeState, params: ModelParams, t: float,
              dt: float = DEFAULT_DT) -> CompositeState:
    """Final state at time ``t`` (single-snapshot convenience)."""
    return snapshots(initial, params, [t], dt=dt)[0]


def reference_propagate(initial: CompositeState, params: ModelParams, t: float,
                        dt: float) -> CompositeState:
    """Eighth-order variant used only as a convergence reference in tests."""
    return snapshots(initial, params, [t], dt=dt, order=8)[0]


@dataclass(frozen=True)
class PeakInfo:
    t_peak: float
    peak_value: float
    fwhm: float


def peak_and_fwhm(times: np.ndarray, values: np.ndarray) -> PeakInfo:
    """Locate the global maximum and its full width at half maximum.

    The peak time is the sample argmax; the half-maximum crossings on both
    flanks are linearly interpolated.  Monotone series and boundary maxima
    are rejected since their width is undefined.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if times.shape != values.shape or times.ndim != 1 or times.size < 3:
        raise PeakError("need matching 1-d arrays with at least 3 samples")
    k = int(np.argmax(values))
    if k == 0 or k == values.size - 1:
        raise PeakError(f"maximum at the boundary (index {k}); no interior peak")
    peak = float(values[k])
    half = 0.5 * peak

    def crossing(lo_side: bool) -> float:
        idx = range(k, 0, -1) if lo_side else range(k, values.size - 1)
        for i in idx:
            j = i - 1 if lo_side else i + 1
            if values[j] < half <= values[i]:
                frac = (values[i] - half) / (values[i] - values[j])
                return float(times[i] + frac * (times[j] - times[i]))
        side = "left" if lo_side else "right"
        raise PeakError(f"half maximum never crossed on the {side} flank")

    left = crossing(True)
    right = crossing(False)
    return PeakInfo(t_peak=float(times[k]), peak_value=peak, fwhm=right - left)
