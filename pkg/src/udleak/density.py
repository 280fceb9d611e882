"""Two-qubit density matrices at second order in the couplings.

Basis ordering is (gg, ge, eg, ee).  The evolved matrix keeps the X shape:
nonzero entries only on the diagonal and anti-diagonal, labelled

        [ a1  0   0   a2 ]
        [ 0   b1  b2  0  ]
        [ 0   c1  c2  0  ]
        [ d1  0   0   d2 ]

with slot a1 carrying the doubly-excited weight gamma^2 after evolution
(the slot identification that makes the initial-matrix corners and the
evolved-element labels consistent at once).

In eternal mode the corrections are all proportional to delta(0); the
matrix returned then holds the *stripped* coefficients (delta(0) -> 1)
and is flagged with delta0_power = 1.  Downstream rate extraction and
closed-vs-numeric comparisons operate on exactly this stripped matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .integrals import IntegralSet
from .model import DetectorPairConfig, InitialState

X_MASK = np.array(
    [
        [1, 0, 0, 1],
        [0, 1, 1, 0],
        [0, 1, 1, 0],
        [1, 0, 0, 1],
    ],
    dtype=bool,
)

PERTURBATIVE_WARN = 0.1
PERTURBATIVE_FAIL = 1.0


class ModeMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Diagnostics:
    hermiticity_residual: float
    trace_residual: float
    min_eigenvalue: float
    perturbative_indicator: float

    @property
    def perturbative_ok(self):
        return self.perturbative_indicator <= PERTURBATIVE_WARN


@dataclass(frozen=True)
class DensityMatrix4:
    matrix: np.ndarray
    delta0_power: int
    diagnostics: Diagnostics


def _diagnose(m, correction_scale):
    herm = linalg.hermiticity_residual(m)
    tr = float(abs(np.trace(m).real - 1.0) + abs(np.trace(m).imag))
    try:
        min_eig = float(linalg.hermitian_eigenvalues(m, tol=max(1e-8, 2 * herm))[0])
    except linalg.NotHermitian:
        min_eig = float("nan")
    return Diagnostics(herm, tr, min_eig, correction_scale)


def initial_density(state: InitialState) -> DensityMatrix4:
    """Rank-one projector of the entangled start state.

    Corners alpha^2, alpha gamma, gamma alpha, gamma^2 with the ee weight
    gamma^2 in the a1 slot (top-left by the ordering note above).
    """
    a, g = state.alpha, state.gamma
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = g * g
    m[0, 3] = g * a
    m[3, 0] = a * g
    m[3, 3] = a * a
    return DensityMatrix4(m, 0, _diagnose(m, 0.0))


def x_elements(state: InitialState, pair: DetectorPairConfig, ints: IntegralSet):
    """The eight X-entries a1..d2 from the second-order element formulas.

    Amplitudes are real by construction; the vacuum-fluctuation entries
    contribute only their real part (the principal-value imaginary part is
    out of scope and never reaches the entanglement measures).
    """
    a, g = state.alpha, state.gamma
    ca2 = pair.coupling_a**2
    cb2 = pair.coupling_b**2
    cab = pair.coupling_a * pair.coupling_b

    e = {k: v.coeff for k, v in ints.entries().items()}
    m_a = e["ReM_A"]
    m_b = e["ReM_B"]
    zeta = e["xi_AB"]
    y = e["Y_AB"]

    a1 = (g * g
          - g * g * (ca2 * e["P''_A"] + cb2 * e["P''_B"])
          - a * g * cab * (np.conj(zeta) + zeta))
    a2 = (g * a
          - a * a * cab * zeta
          - g * g * cab * np.conj(y)
          - a * g * (ca2 * m_a + cb2 * m_b))
    b1 = (a * a * ca2 * e["P_A"]
          + g * g * cb2 * e["P''_B"]
          + a * g * cab * (e["P'_AB"] + np.conj(e["P'_AB"])))
    b2 = (a * g * ca2 * e["Pbar'_A"]
          + a * a * cab * np.conj(e["P*_AB"])
          + g * g * cab * np.conj(e["X_AB"])
          + g * a * cb2 * e["Pbar_B"])
    c1 = (a * g * ca2 * e["Pbar_A"]
          + a * g * cb2 * e["Pbar'_B"]
          + g * g * cab * e["X_AB"]
          + a * a * cab * e["P*_AB"])
    c2 = (g * g * ca2 * e["P''_A"]
          + a * a * cb2 * e["P_B"]
          + g * a * cab * (e["Pbar'_AB"] + np.conj(e["Pbar'_AB"])))
    d1 = (a * g
          - a * g * (ca2 * np.conj(m_a) + cb2 * np.conj(m_b))
          - g * g * cab * y
          - a * a * cab * np.conj(zeta))
    d2 = (a * a
          - a * a * (ca2 * e["P_A"] + cb2 * e["P_B"])
          - a * g * cab * (y + np.conj(y)))
    return a1, a2, b1, b2, c1, c2, d1, d2


def evolved_density(state: InitialState, pair: DetectorPairConfig,
                    ints: IntegralSet) -> DensityMatrix4:
    """Assemble the later-time X-matrix from an integral set.

    The delta0_power pattern of the integral set decides the mode: a
    power-1 set yields the stripped eternal matrix (flagged power 1), a
    power-0 set the finite Gaussian-mode matrix.
    """
    powers = {v.delta0_power for v in ints.entries().values()}
    if not powers <= {0, 1}:
        raise ModeMismatch(f"unexpected delta0 powers {powers}")
    power = 1 if 1 in powers else 0

    a1, a2, b1, b2, c1, c2, d1, d2 = x_elements(state, pair, ints)
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = a1
    m[0, 3] = a2
    m[1, 1] = b1
    m[1, 2] = b2
    m[2, 1] = c1
    m[2, 2] = c2
    m[3, 0] = d1
    m[3, 3] = d2

    base = initial_density(state).matrix
    indicator = float(np.max(np.abs(m - base)))
    return DensityMatrix4(m, power, _diagnose(m, indicator))


def check_x_structure(rho):
    """Largest entry outside the diagonal/anti-diagonal X pattern."""
    m = linalg.as_matrix4(rho.matrix if isinstance(rho, DensityMatrix4) else rho)
    return float(np.max(np.abs(m[~X_MASK]))) if (~X_MASK).any() else 0.0
