"""Derived time-series monitors: metrological content of the spin state,
unconditioned and conditioned on a field measurement.

Conditioned quantities are undefined where the conditioning outcome has
(numerically) zero probability; those samples record NaN rather than
aborting the run.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ImpossibleOutcomeError
from .hilbert import reduce_to_electron
from .measurement import (ParityOutcome, QuadratureSpec, parity_postselect,
                          parity_probabilities, quadrature_postselect)
from .propagator import MonitorContext, register_monitor
from .qfi import qfi_mixed


def _density(ctx: MonitorContext) -> float:
    rho = reduce_to_electron(ctx.state)
    return qfi_mixed(rho).value / ctx.params.n_qubits


def _parity_prob(outcome: ParityOutcome):
    def fn(ctx: MonitorContext) -> float:
        return parity_probabilities(ctx.state)[outcome.offset]
    return fn


def _parity_density(outcome: ParityOutcome):
    def fn(ctx: MonitorContext) -> float:
        try:
            res = parity_postselect(ctx.state, outcome)
        except ImpossibleOutcomeError:
            return math.nan
        return qfi_mixed(res.rho).value / ctx.params.n_qubits
    return fn


register_monitor("qfi_density", _density)
register_monitor("prob_even", _parity_prob(ParityOutcome.EVEN))
register_monitor("prob_odd", _parity_prob(ParityOutcome.ODD))
register_monitor("qfi_density_even", _parity_density(ParityOutcome.EVEN))
register_monitor("qfi_density_odd", _parity_density(ParityOutcome.ODD))


def build_quadrature_monitors(spec: QuadratureSpec):
    """Monitors conditioned on a quadrature readout at the given point.

    Returns [(name, fn), ...] for ``run(..., extra_monitors=...)``:
    ``prob_quad`` is the outcome probability (a density for the sharp
    readout), ``qfi_density_quad`` the conditioned information per qubit.
    """
    def prob(ctx: MonitorContext) -> float:
        try:
            res = quadrature_postselect(ctx.state, spec, omega=ctx.params.omega)
        except ImpossibleOutcomeError:
            return 0.0
        return res.probability

    def density(ctx: MonitorContext) -> float:
        try:
            res = quadrature_postselect(ctx.state, spec, omega=ctx.params.omega)
        except ImpossibleOutcomeError:
            return math.nan
        return qfi_mixed(res.rho).value / ctx.params.n_qubits
    return [("prob_quad", prob), ("qfi_density_quad", density)]


def conditioned_quadrature_series(states, params, spec: QuadratureSpec):
    """Probability and conditioned information for precomputed snapshots."""
    probs = np.empty(len(states))
    dens = np.empty(len(states))
    for k, state in enumerate(states):
        try:
            res = quadrature_postselect(state, spec, omega=params.omega)
        except ImpossibleOutcomeError:
            probs[k] = 0.0
            dens[k] = math.nan
            continue
        probs[k] = res.probability
        dens[k] = qfi_mixed(res.rho).value / params.n_qubits
    return probs, dens
