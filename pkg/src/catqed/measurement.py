"""Photon measurements and the conditioned electronic states they prepare.

Parity conditioning projects the Fock index onto even or odd columns.
Quadrature conditioning projects onto an x-eigenstate of

    x_phi = (e^{-i phi} a + e^{i phi} a^dag) / sqrt(2),

either ideally (a single x, yielding a pure conditioned state whose
"probability" is a density) or over a finite window of width delta_x
(yielding a genuinely mixed conditioned state).  The bra components are
<x; phi|n> = e^{-i n phi} psi_n(x) with psi_n the Hermite functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre

from .errors import ImpossibleOutcomeError, QuadratureConvergenceError
from .hilbert import CompositeState, ElectronDensityMatrix

PROBABILITY_FLOOR = 1e-14
WINDOW_RHO_ATOL = 1e-8
MAX_NODE_DOUBLINGS = 6

# Mantissa rescaling bounds for the Hermite recurrence deep in the
# classically forbidden region, where psi_0(x) may underflow outright.
_RESCALE_LIMIT = 1e250
_RESCALE_LOG = math.log(_RESCALE_LIMIT)


class ParityOutcome(Enum):
    """Eigenvalue sectors of the photon parity exp(i pi n)."""

    EVEN = 1
    ODD = -1

    @property
    def offset(self) -> int:
        return 0 if self is ParityOutcome.EVEN else 1

    @property
    def label(self) -> str:
        return "even" if self is ParityOutcome.EVEN else "odd"


@dataclass(frozen=True)
class QuadratureSpec:
    """Where and how sharply the field quadrature is read out.

    ``delta_x = 0`` requests the ideal projector at the single point ``x``.
    With ``phase_tracking`` the local-oscillator phase follows
    phi(t) = pi/2 - omega t, which keeps a rotating coherent branch and the
    vacuum branch equally weighted at x = 0; otherwise ``phi`` is fixed.
    """

    x: float = 0.0
    phi: float = 0.0
    delta_x: float = 0.0
    phase_tracking: bool = False

    def __post_init__(self):
        if self.delta_x < 0.0:
            raise ValueError(f"delta_x must be >= 0, got {self.delta_x!r}")

    def phase_at(self, time: float, omega: float) -> float:
        if self.phase_tracking:
            return 0.5 * math.pi - omega * time
        return self.phi


@dataclass(frozen=True)
class PostselectionResult:
    """Outcome weight plus the conditioned electronic state.

    ``probability`` is a true probability except for ideal quadrature
    conditioning, where it is a probability density (``is_density=True``).
    """

    probability: float
    rho: ElectronDensityMatrix
    outcome: str
    is_density: bool = False


def hermite_functions(x, n_max: int) -> np.ndarray:
    """Oscillator eigenfunctions psi_n(x), n = 0 .. n_max.

    Uses the normalized recurrence
        psi_{n+1} = sqrt(2/(n+1)) x psi_n - sqrt(n/(n+1)) psi_{n-1}
    on rescaled mantissas with a per-point log offset, so deep forbidden
    regions (where psi_0 underflows but high-n values do not) stay exact.
    Scalar x gives shape (n_max + 1,); array x gives (len(x), n_max + 1).
    """
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty((xs.size, n_max + 1), dtype=float)
    log_offset = -0.5 * xs * xs - 0.25 * math.log(math.pi)
    scale = np.exp(log_offset)
    prev = np.zeros_like(xs)
    cur = np.ones_like(xs)
    out[:, 0] = cur * scale
    for n in range(n_max):
        nxt = math.sqrt(2.0 / (n + 1)) * xs * cur - math.sqrt(n / (n + 1.0)) * prev
        big = np.abs(nxt) > _RESCALE_LIMIT
        if big.any():
            nxt[big] *= 1.0 / _RESCALE_LIMIT
            cur[big] *= 1.0 / _RESCALE_LIMIT
            log_offset[big] += _RESCALE_LOG
            scale[big] = np.exp(log_offset[big])
        prev, cur = cur, nxt
        out[:, n + 1] = cur * scale
    if np.ndim(x) == 0:
        return out[0]
    return out


def quadrature_amplitudes(x: float, phi: float, n_max: int) -> np.ndarray:
    """Bra components <x; phi|n> = e^{-i n phi} psi_n(x)."""
    psi = hermite_functions(float(x), n_max)
    n = np.arange(n_max + 1, dtype=float)
    return np.exp(-1j * phi * n) * psi


def parity_probabilities(state: CompositeState) -> tuple[float, float]:
    """(p_even, p_odd); sums to the squared norm of the state."""
    p = state.photon_distribution()
    return float(p[0::2].sum()), float(p[1::2].sum())


def parity_postselect(state: CompositeState, outcome: ParityOutcome) -> PostselectionResult:
    """Condition on a photon-parity readout; errors on impossible outcomes."""
    sub = state.amplitudes[:, outcome.offset::2]
    prob = float(np.sum(sub.real**2 + sub.imag**2))
    if prob < PROBABILITY_FLOOR:
        raise ImpossibleOutcomeError(
            f"parity outcome {outcome.label!r} has probability {prob:.3e}")
    rho = (sub @ sub.conj().T) / prob
    return PostselectionResult(
        probability=prob,
        rho=ElectronDensityMatrix(rho, state.dicke, copy=False, validate=False),
        outcome=outcome.label)


@lru_cache(maxsize=64)
def _legendre_rule(count: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = roots_legendre(count)
    return nodes, weights


def _window_moments(state: CompositeState, center: float, width: float,
                    phi: float, count: int) -> tuple[float, np.ndarray]:
    """Integrate |u(x)><u(x)| over the window with a ``count``-node rule."""
    nodes, weights = _legendre_rule(count)
    xs = center + 0.5 * width * nodes
    ws = 0.5 * width * weights
    psi = hermite_functions(xs, state.fock.n_max)
    n = np.arange(state.fock.dim, dtype=float)
    bra = psi * np.exp(-1j * phi * n)[None, :]
    u = state.amplitudes @ bra.T        # (dim_e, count)
    prob = float(np.einsum("mk,k,mk->", u.conj(), ws, u).real)
    accum = np.einsum("mk,k,lk->ml", u, ws, u.conj())
    return prob, accum


def quadrature_postselect(state: CompositeState, spec: QuadratureSpec,
                          omega: float = 1.0) -> PostselectionResult:
    """Condition on a quadrature readout at the state's own time.

    Ideal (delta_x = 0): pure conditioned state, probability density.
    Finite window: Gauss-Legendre over the window, node count doubled until
    the conditioned matrix is stable to 1e-8 in max-norm.
    """
    phi = spec.phase_at(state.time, omega)
    if spec.delta_x == 0.0:
        v = quadrature_amplitudes(spec.x, phi, state.fock.n_max)
        u = state.amplitudes @ v
        dens = float(np.vdot(u, u).real)
        if dens < PROBABILITY_FLOOR:
            raise ImpossibleOutcomeError(
                f"ideal quadrature at x = {spec.x} has density {dens:.3e}")
        rho = np.outer(u, u.conj()) / dens
        return PostselectionResult(
            probability=dens,
            rho=ElectronDensityMatrix(rho, state.dicke, copy=False, validate=False),
            outcome="quadrature",
            is_density=True)

    count = max(8, math.ceil(10.0 * spec.delta_x * math.sqrt(state.fock.n_max)))
    prob, accum = _window_moments(state, spec.x, spec.delta_x, phi, count)
    if prob < PROBABILITY_FLOOR:
        raise ImpossibleOutcomeError(
            f"window at x = {spec.x} (delta_x = {spec.delta_x}) has "
            f"probability {prob:.3e}")
    rho = accum / prob
    for _ in range(MAX_NODE_DOUBLINGS):
        count *= 2
        prob2, accum2 = _window_moments(state, spec.x, spec.delta_x, phi, count)
        rho2 = accum2 / prob2
        delta = float(np.max(np.abs(rho2 - rho)))
        prob, rho = prob2, rho2
        if delta <= WINDOW_RHO_ATOL:
            return PostselectionResult(
                probability=prob,
                rho=ElectronDensityMatrix(rho, state.dicke, copy=False,
                                          validate=False),
                outcome="quadrature",
                is_density=False)
    raise QuadratureConvergenceError(
        f"window projection not stable to {WINDOW_RHO_ATOL} after "
        f"{MAX_NODE_DOUBLINGS} node doublings (last count {count})")
