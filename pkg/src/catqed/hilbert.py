"""Truncated joint Hilbert space: collective Dicke ladder times one Fock mode.

The electronic sector is the maximal-spin (fully symmetric) subspace of N
two-level systems, spanned by |J, m> with J = N/2 and m = -J .. J.  The
photonic sector is a Fock ladder truncated at n_max.  Joint amplitudes are
stored m-major, shape (N + 1, n_max + 1), so photon-operator application is
stride-1 along each row.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, StateValidationError

NORM_ATOL = 1e-10
HERMITICITY_ATOL = 1e-12
TRACE_ATOL = 1e-12
EIGENVALUE_FLOOR = -1e-10

# Columns counted by the truncation-tail diagnostic.
TAIL_WIDTH = 10


@dataclass(frozen=True)
class DickeSpace:
    """Symmetric electronic sector for ``n_qubits`` two-level emitters."""

    n_qubits: int

    def __post_init__(self):
        if not isinstance(self.n_qubits, (int, np.integer)) or self.n_qubits < 1:
            raise DimensionMismatchError(
                f"n_qubits must be a positive integer, got {self.n_qubits!r}")

    @property
    def j(self) -> float:
        return self.n_qubits / 2.0

    @property
    def dim(self) -> int:
        return self.n_qubits + 1

    def m_values(self) -> np.ndarray:
        """Magnetic quantum numbers, index k maps to m = -J + k."""
        return -self.j + np.arange(self.dim, dtype=float)

    def raising_coefficients(self) -> np.ndarray:
        """c[k] = sqrt(J(J+1) - m_k (m_k + 1)) so J+ |m_k> = c[k] |m_{k+1}>."""
        j, m = self.j, self.m_values()[:-1]
        return np.sqrt(j * (j + 1.0) - m * (m + 1.0))


@dataclass(frozen=True)
class FockSpace:
    """Photon-number ladder truncated at ``n_max`` (dimension n_max + 1)."""

    n_max: int
    tail_tolerance: float = 1e-8

    def __post_init__(self):
        if not isinstance(self.n_max, (int, np.integer)) or self.n_max < 1:
            raise DimensionMismatchError(
                f"n_max must be a positive integer, got {self.n_max!r}")
        if not (0.0 < self.tail_tolerance < 1.0):
            raise DimensionMismatchError(
                f"tail_tolerance must lie in (0, 1), got {self.tail_tolerance!r}")

    @property
    def dim(self) -> int:
        return self.n_max + 1

    def tail_population(self, amplitudes: np.ndarray) -> float:
        """Probability weight in the top TAIL_WIDTH + 1 Fock levels."""
        lo = max(0, self.n_max - TAIL_WIDTH)
        tail = amplitudes[..., lo:]
        return float(np.sum(tail.real**2 + tail.imag**2))


class CompositeState:
    """Normalized joint pure state on (Dicke m) x (Fock n).

    Value type: the amplitude array is frozen on construction.  ``time``
    records the evolution time (units of 1/delta) at which the state holds.
    """

    __slots__ = ("amplitudes", "dicke", "fock", "time")

    def __init__(self, amplitudes, dicke: DickeSpace, fock: FockSpace,
                 time: float = 0.0, copy: bool = True, validate: bool = True):
        arr = np.array(amplitudes, dtype=np.complex128, copy=copy, order="C")
        if arr.shape != (dicke.dim, fock.dim):
            raise DimensionMismatchError(
                f"amplitudes shape {arr.shape} does not match "
                f"(dicke.dim, fock.dim) = ({dicke.dim}, {fock.dim})")
        if validate:
            if not np.all(np.isfinite(arr.view(np.float64))):
                raise StateValidationError("non-finite amplitude encountered")
            nrm = np.linalg.norm(arr)
            if abs(nrm - 1.0) > NORM_ATOL:
                raise StateValidationError(
                    f"state norm {nrm!r} deviates from 1 by more than {NORM_ATOL}")
        arr.flags.writeable = False
        object.__setattr__(self, "amplitudes", arr)
        object.__setattr__(self, "dicke", dicke)
        object.__setattr__(self, "fock", fock)
        object.__setattr__(self, "time", float(time))

    def __setattr__(self, name, value):
        raise AttributeError("CompositeState is immutable")

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def tail_population(self) -> float:
        return self.fock.tail_population(self.amplitudes)

    def photon_distribution(self) -> np.ndarray:
        """Marginal photon-number probabilities p(n)."""
        a = self.amplitudes
        return np.sum(a.real**2 + a.imag**2, axis=0)


class ElectronDensityMatrix:
    """Reduced electronic density matrix on the Dicke ladder.

    Construction validates hermiticity, unit trace, and positivity up to
    numerical dust; ``validate=False`` skips the eigenvalue check when the
    caller guarantees the matrix is a Gram form.
    """

    __slots__ = ("matrix", "dicke")

    def __init__(self, matrix, dicke: DickeSpace, copy: bool = True,
                 validate: bool = True):
        rho = np.array(matrix, dtype=np.complex128, copy=copy, order="C")
        if rho.shape != (dicke.dim, dicke.dim):
            raise DimensionMismatchError(
                f"density matrix shape {rho.shape}, expected square dim {dicke.dim}")
        if not np.all(np.isfinite(rho.view(np.float64))):
            raise StateValidationError("non-finite density-matrix entry")
        herm = np.max(np.abs(rho - rho.conj().T))
        if herm > HERMITICITY_ATOL:
            raise StateValidationError(
                f"hermiticity violated by {herm:.3e} (> {HERMITICITY_ATOL})")
        tr = np.trace(rho).real
        if abs(tr - 1.0) > TRACE_ATOL:
            raise StateValidationError(
                f"trace {tr!r} deviates from 1 by more than {TRACE_ATOL}")
        if validate:
            lo = float(np.linalg.eigvalsh(rho)[0])
            if lo < EIGENVALUE_FLOOR:
                raise StateValidationError(
                    f"negative eigenvalue {lo:.3e} below floor {EIGENVALUE_FLOOR}")
        rho.flags.writeable = False
        object.__setattr__(self, "matrix", rho)
        object.__setattr__(self, "dicke", dicke)

    def __setattr__(self, name, value):
        raise AttributeError("ElectronDensityMatrix is immutable")

    def purity(self) -> float:
        return float(np.sum(np.abs(self.matrix) ** 2))


def reduce_to_electron(state: CompositeState) -> ElectronDensityMatrix:
    """Trace out the photon mode: rho[m, m'] = sum_n c[m, n] conj(c[m', n])."""
    c = state.amplitudes
    rho = c @ c.conj().T
    # Gram form is positive semidefinite by construction.
    return ElectronDensityMatrix(rho, state.dicke, copy=False, validate=False)


def product_state(electron: np.ndarray, photon: np.ndarray,
                  dicke: DickeSpace, fock: FockSpace,
                  time: float = 0.0) -> CompositeState:
    """Assemble |electron> x |photon> as a CompositeState (renormalized)."""
    c = np.outer(np.asarray(electron, dtype=np.complex128),
                 np.asarray(photon, dtype=np.complex128))
    nrm = np.linalg.norm(c)
    if nrm == 0.0:
        raise StateValidationError("product of zero vectors")
    c /= nrm
    return CompositeState(c, dicke, fock, time=time, copy=False)
