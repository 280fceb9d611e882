"""Negativity, concurrence, and their leakage rates.

Every closed form is paired with a fully numeric route through the 4x4
kernel (partial transpose + Jacobi for negativity, the spin-flip
construction for concurrence); reports carry the worst closed-vs-numeric
discrepancy so disagreement is a loud diagnostic, not a silent drift.

Eternal-mode measures are distributional, so only initial values and
per-unit-time rates are reported there; Gaussian mode reports the finite
measures instead.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .density import DensityMatrix4, evolved_density
from .integrals import (IntegralSet, NotDistributional, QuadratureSettings,
                        eternal_integral_set, gaussian_integral_set)
from .model import ETERNAL, ValidatedScenario


class BranchViolation(RuntimeError):
    pass


@dataclass(frozen=True)
class EntanglementReport:
    mode: str
    initial_negativity: float
    initial_concurrence: float
    pt_eigenvalues_closed: tuple
    pt_eigenvalues_numeric: tuple
    wootters_closed: tuple
    wootters_numeric: tuple
    negative_pt_index: int
    shielded: bool
    agreement: float
    max_quad_error: float
    perturbative_indicator: float
    perturbative_ok: bool
    negativity: float | None = None
    concurrence: float | None = None
    negativity_rate: float | None = None
    concurrence_rate: float | None = None


def negativity_numeric(rho: DensityMatrix4):
    """PPT route: sum of |negative eigenvalues| of the partial transpose."""
    pt = linalg.partial_transpose_b(rho.matrix)
    lams = linalg.hermitian_eigenvalues(pt, tol=1e-8)
    neg = float(np.sum(np.abs(lams[lams < 0.0])))
    return neg, tuple(lams)


def concurrence_numeric(rho: DensityMatrix4):
    """Spin-flip route: max{0, l1' - l2' - l3' - l4'}."""
    lams = linalg.wootters_lambdas(rho.matrix, tol=1e-8)
    conc = max(0.0, float(lams[0] - lams[1] - lams[2] - lams[3]))
    return conc, tuple(lams)


def _two_by_two(tr_pair, cross):
    """Eigenvalue pair (s + t)/2 +- sqrt(((s-t)/2)^2 + cross)."""
    s, t = tr_pair
    half = 0.5 * (s + t)
    disc = cmath.sqrt((0.5 * (s - t)) ** 2 + cross)
    return half + disc, half - disc


@dataclass(frozen=True)
class PtEigenvalues:
    exact: tuple       # the 2x2-block closed forms, (l1, l2, l3, l4)
    expanded: tuple    # second-order expansions
    negative_index: int  # which of l1/l2 is the negative one


def pt_eigenvalues_closed(state, pair, ints: IntegralSet) -> PtEigenvalues:
    """Partial-transpose spectrum from the X-block closed forms.

    exact: l_{1,2} = [(b1 + c2) +- sqrt((b1 - c2)^2 + 4 a2 d1)]/2 and the
    analogous (a1, d2, b2, c1) pair.  expanded: keeps the signed product
    alpha gamma in the bracket, so the minus branch (index 2) is negative
    for same-sign amplitudes and the plus branch (index 1) for opposite.
    """
    from .density import x_elements

    a, g = state.alpha, state.gamma
    a1, a2, b1, b2, c1, c2, d1, d2 = x_elements(state, pair, ints)
    hi, lo = _two_by_two((b1, c2), a2 * d1)
    # label the outer pair so that l1 tracks the +(alpha gamma) bracket of
    # the expansion: for opposite-sign amplitudes the roles swap
    l1, l2 = (hi, lo) if a * g >= 0 else (lo, hi)
    l3, l4 = _two_by_two((a1, d2), b2 * c1)
    exact = tuple(float(v.real) for v in (l1, l2, l3, l4))

    ca2 = pair.coupling_a**2
    cb2 = pair.coupling_b**2
    cab = pair.coupling_a * pair.coupling_b
    e = {k: v.coeff for k, v in ints.entries().items()}
    half_sum = 0.5 * float((b1 + c2).real)
    bracket = a * g - float(
        (a * a * cab * e["xi_AB"]
         + g * g * cab * e["Y_AB"]
         + a * g * (ca2 * e["ReM_A"] + cb2 * e["ReM_B"])).real)
    # the inner pair has no displayed expansion (a1 - d2 is itself second
    # order, so the cross term contributes at the same order); keep exact
    expanded = (half_sum + bracket, half_sum - bracket, exact[2], exact[3])

    negative_index = 2 if a * g >= 0 else 1
    return PtEigenvalues(exact=exact, expanded=expanded,
                         negative_index=negative_index)


def wootters_closed_exact(state, pair, ints: IntegralSet):
    """Exact X-state lambda' quadruple from the element formulas.

    l'_{1,2}^2 = [(|a2|^2 + |d1|^2 + 2 a1 d2) +- sqrt((|a2|^2 - |d1|^2)^2
    + 4 a1 d2 (|a2|^2 + |d1|^2 + 2 Re(a2 d1)))] / 2, same shape for the
    inner block with (b1, c2, b2, c1).  Descending order.
    """
    from .density import x_elements

    a1, a2, b1, b2, c1, c2, d1, d2 = x_elements(state, pair, ints)

    def block(p, q, u, v):
        # p, q diagonal (a1, d2), u, v anti-diagonal (a2, d1)
        su = abs(u) ** 2
        sv = abs(v) ** 2
        pq = float((p * q).real)
        tr = su + sv + 2.0 * pq
        disc = math.sqrt(max((su - sv) ** 2
                             + 4.0 * pq * (su + sv + 2.0 * (u * v).real), 0.0))
        hi = max(0.5 * (tr + disc), 0.0)
        lo = max(0.5 * (tr - disc), 0.0)
        return math.sqrt(hi), math.sqrt(lo)

    outer = block(a1, d2, a2, d1)
    inner = block(b1, c2, b2, c1)
    return tuple(sorted(outer + inner, reverse=True))


def concurrence_closed(state, pair, ints: IntegralSet):
    """Second-order closed-form concurrence and lambda' list.

    Uses the branch |X_AB| <= sqrt(P_A'' P_B''); crossing it signals a bug
    in the integral evaluation and raises BranchViolation.
    """
    a, g = state.alpha, state.gamma
    ca2 = pair.coupling_a**2
    cb2 = pair.coupling_b**2
    cab = pair.coupling_a * pair.coupling_b
    e = {k: v.coeff for k, v in ints.entries().items()}
    pdd_a = float(e["P''_A"].real)
    pdd_b = float(e["P''_B"].real)
    m_a = float(e["ReM_A"].real)
    m_b = float(e["ReM_B"].real)
    x_abs = abs(e["X_AB"])
    geo = math.sqrt(max(pdd_a * pdd_b, 0.0))

    scale = max(geo, 1e-300)
    if x_abs > geo * (1.0 + 1e-9) + 1e-12 * scale:
        raise BranchViolation(
            f"|X_AB| = {x_abs:.6e} exceeds sqrt(P_A'' P_B'') = {geo:.6e}"
        )

    l1 = 2.0 * abs(g * a) * (1.0
                             - 0.5 * (ca2 * m_a + cb2 * m_b)
                             - 0.25 * (ca2 * pdd_a + cb2 * pdd_b))
    l2 = 0.0
    l3 = cab * g * g * (geo + x_abs)
    l4 = cab * g * g * (geo - x_abs)
    conc = max(0.0, l1 - l2 - l3 - l4)
    return conc, (l1, l2, l3, l4)


def leakage_rates(state, pair, ints: IntegralSet):
    """Per-unit-time degradation of negativity and concurrence.

    Only meaningful for distributional (eternal) integral sets; the
    stripped deficit coefficients are divided by 2 pi.  Generalized to
    unequal couplings through the unexpanded block eigenvalues, which
    reduces to the identical-coupling deficit when C_A = C_B.
    """
    entries = ints.entries().values()
    if ints.delta0_power != 1:
        if any(v.coeff != 0.0 for v in entries):
            raise NotDistributional(
                "leakage rates need an eternal (delta0_power = 1) integral set"
            )
        return 0.0, 0.0  # at or below threshold every entry vanishes
    a, g = state.alpha, state.gamma
    ca2 = pair.coupling_a**2
    cb2 = pair.coupling_b**2
    cab = pair.coupling_a * pair.coupling_b
    e = {k: v.coeff for k, v in ints.entries().items()}
    pdd_a = float(e["P''_A"].real)
    pdd_b = float(e["P''_B"].real)
    m_a = float(e["ReM_A"].real)
    m_b = float(e["ReM_B"].real)
    ag = abs(a * g)

    deficit_n = (ca2 * (ag * m_a + 0.5 * g * g * pdd_a)
                 + cb2 * (ag * m_b + 0.5 * g * g * pdd_b))
    deficit_c = (ag * (ca2 * (m_a + 0.5 * pdd_a) + cb2 * (m_b + 0.5 * pdd_b))
                 + 2.0 * cab * g * g * math.sqrt(max(pdd_a * pdd_b, 0.0)))
    return deficit_n / (2.0 * math.pi), deficit_c / (2.0 * math.pi)


def analyze(scenario: ValidatedScenario,
            settings: QuadratureSettings | None = None,
            ints: IntegralSet | None = None) -> EntanglementReport:
    """Full pipeline for one scenario: integrals, density, both measures.

    Pass a precomputed integral set to skip the quadrature stage (the
    front end does this so the set can also be serialized)."""
    state = scenario.state
    pair = scenario.pair
    eternal = scenario.switching.kind == ETERNAL

    if ints is None:
        if eternal:
            ints = eternal_integral_set(scenario)
        else:
            ints = gaussian_integral_set(scenario, settings)

    rho = evolved_density(state, pair, ints)
    neg_num, pt_num = negativity_numeric(rho)
    conc_num, w_num = concurrence_numeric(rho)

    pt_closed = pt_eigenvalues_closed(state, pair, ints)
    w_closed = wootters_closed_exact(state, pair, ints)

    agreement = max(
        float(np.max(np.abs(np.sort(np.array(pt_closed.exact)) - np.array(pt_num)))),
        float(np.max(np.abs(np.array(w_closed) - np.array(w_num)))),
    )

    ag = abs(state.alpha * state.gamma)
    report = dict(
        mode=scenario.switching.kind,
        initial_negativity=ag,
        initial_concurrence=2.0 * ag,
        pt_eigenvalues_closed=pt_closed.exact,
        pt_eigenvalues_numeric=pt_num,
        wootters_closed=w_closed,
        wootters_numeric=w_num,
        negative_pt_index=pt_closed.negative_index,
        shielded=(pair.coupling_b == 0.0),
        agreement=agreement,
        max_quad_error=ints.max_err,
        perturbative_indicator=rho.diagnostics.perturbative_indicator,
        perturbative_ok=rho.diagnostics.perturbative_ok,
    )
    if eternal:
        dn, dc = leakage_rates(state, pair, ints)
        report.update(negativity_rate=dn, concurrence_rate=dc)
    else:
        report.update(negativity=neg_num, concurrence=conc_num)
    return EntanglementReport(**report)
