"""Mobility decomposition service.

This module builds harmonic decompositions of a mobility matrix:
the canonical one (one component per pair of phases), the sparse one
(a single component when the matrix is harmonically additive) and
explicit user-provided ones, and checks a decomposition against the
matrix it claims to reproduce.
"""

import itertools
import logging
from typing import List, Optional, Sequence

import numpy as np

from src.models.errors import DimensionMismatchError, NotAdditiveError
from src.models.mobility import (
    HarmonicComponent,
    HarmonicDecomposition,
    MobilitySet,
    ValidationReport,
)
from src.models.solver_params import DecompositionMode

logger = logging.getLogger(__name__)

FIT_TOLERANCE = 1e-9
RECONSTRUCTION_TOLERANCE = 1e-12


def canonical_decomposition(mob: MobilitySet) -> HarmonicDecomposition:
    """One component per unordered pair (k, l).

    The component for (k, l) has coefficient 2 m_kl on phases k and l and
    0 elsewhere, so its only nonzero pair value is m_kl. Zero-mobility
    pairs keep an all-zero component so that P = n(n-1)/2 always.

    Args:
        mob: Mobility set

    Returns:
        Canonical decomposition
    """
    n = mob.n_phases
    components = []
    for k, l, m_kl in mob.upper_pairs():
        coeffs = np.zeros(n)
        coeffs[k] = coeffs[l] = 2.0 * m_kl
        components.append(HarmonicComponent.create(coeffs))
    return HarmonicDecomposition.from_components(components, n, label='canonical')


def _active_phases(matrix: np.ndarray) -> List[int]:
    return [i for i in range(matrix.shape[0]) if np.any(matrix[i] > 0.0)]


def harmonic_fit(mob: MobilitySet) -> HarmonicComponent:
    """Find per-phase coefficients m_i with 1/m_ij = 1/m_i + 1/m_j.

    Phases without any positive mobility get m_i = 0. Among the remaining
    (active) phases every pair must have positive mobility; with two active
    phases the pair value m gives (2m, 2m), otherwise each coefficient comes
    from 1/m_i = (1/m_ij + 1/m_ik - 1/m_jk) / 2, and every triple (j, k)
    must agree.

    Args:
        mob: Mobility set

    Returns:
        The single harmonic component reproducing mob

    Raises:
        NotAdditiveError: On a zero pair between active phases, a negative
            or infinite coefficient, inconsistent triples, or a
            reconstruction mismatch
    """
    m = mob.matrix
    n = mob.n_phases
    active = _active_phases(m)
    coeffs = np.zeros(n)

    for a, b in itertools.combinations(active, 2):
        if m[a, b] <= 0.0:
            raise NotAdditiveError(
                f"zero mobility between phases {a} and {b}, which both have moving interfaces"
            )

    if len(active) == 2:
        a, b = active
        coeffs[a] = coeffs[b] = 2.0 * m[a, b]
    elif len(active) >= 3:
        inverse = np.zeros_like(m)
        for a, b in itertools.permutations(active, 2):
            inverse[a, b] = 1.0 / m[a, b]
        for i in active:
            others = [j for j in active if j != i]
            candidates = [0.5 * (inverse[i, j] + inverse[i, k] - inverse[j, k])
                          for j, k in itertools.combinations(others, 2)]
            first = candidates[0]
            if first <= 0.0:
                kind = 'negative' if first < 0.0 else 'infinite'
                raise NotAdditiveError(f"{kind} coefficient for phase {i}: 1/m_{i} = {first:g}")
            for value in candidates[1:]:
                if abs(value - first) > FIT_TOLERANCE * max(abs(value), abs(first)):
                    raise NotAdditiveError(
                        f"inconsistent triples for phase {i}: 1/m_{i} = {first:g} vs {value:g}"
                    )
            coeffs[i] = 1.0 / first

    component = HarmonicComponent.create(coeffs)
    scale = max(float(np.max(m)), np.finfo(float).tiny)
    error = float(np.max(np.abs(component.pair_values - m)))
    if error > FIT_TOLERANCE * scale:
        raise NotAdditiveError(f"reconstruction mismatch {error:g} exceeds tolerance")
    return component


def sparse_decomposition(mob: MobilitySet) -> HarmonicDecomposition:
    """Single-component decomposition when possible, canonical otherwise.

    Args:
        mob: Mobility set

    Returns:
        P = 1 decomposition labelled 'sparse', or the canonical decomposition
    """
    try:
        component = harmonic_fit(mob)
    except NotAdditiveError as e:
        logger.info("Mobilities are not harmonically additive (%s); using canonical "
                    "decomposition", e.reason)
        return canonical_decomposition(mob)
    return HarmonicDecomposition.from_components([component], mob.n_phases, label='sparse')


def validate(dec: HarmonicDecomposition, mob: MobilitySet) -> ValidationReport:
    """Check that a decomposition reproduces a mobility set.

    Passes when the reconstruction error is at most 1e-12 * max(1, max m_ij)
    and no coefficient is negative.

    Args:
        dec: Decomposition to check
        mob: Target mobility set

    Returns:
        ValidationReport

    Raises:
        DimensionMismatchError: If phase counts differ
    """
    if dec.n_phases != mob.n_phases:
        raise DimensionMismatchError(
            f"Decomposition has {dec.n_phases} phases, mobility set has {mob.n_phases}"
        )
    off_diagonal = ~np.eye(mob.n_phases, dtype=bool)
    error = float(np.max(np.abs(dec.reconstruct() - mob.matrix)[off_diagonal]))
    coefficients = dec.coefficient_matrix()
    most_negative = float(np.min(coefficients)) if coefficients.size else 0.0
    max_negative = max(0.0, -most_negative)

    tolerance = RECONSTRUCTION_TOLERANCE * max(1.0, float(np.max(mob.matrix)))
    reasons = []
    if error > tolerance:
        reasons.append(f"reconstruction error {error:.3e} exceeds {tolerance:.1e}")
    if max_negative > 0.0:
        reasons.append(f"negative coefficient {-max_negative:g}")
    return ValidationReport(
        passed=not reasons,
        max_error=error,
        max_negative=max_negative,
        n_components=dec.size,
        reasons=tuple(reasons),
    )


def explicit_decomposition(mob: MobilitySet,
                           components: Sequence[Sequence[float]]) -> HarmonicDecomposition:
    """Decomposition from user-provided coefficient vectors.

    Args:
        mob: Mobility set the components must reproduce
        components: One coefficient vector m^p per component

    Returns:
        Validated decomposition labelled 'explicit'

    Raises:
        NotAdditiveError: If the components do not reproduce mob
    """
    dec = HarmonicDecomposition.from_components(
        [HarmonicComponent.create(c) for c in components], mob.n_phases, label='explicit'
    )
    report = validate(dec, mob)
    if not report.passed:
        raise NotAdditiveError("explicit decomposition rejected: " + '; '.join(report.reasons))
    return dec


def build_decomposition(mob: MobilitySet, mode: DecompositionMode,
                        components: Optional[Sequence[Sequence[float]]] = None
                        ) -> HarmonicDecomposition:
    """Dispatch on the decomposition mode.

    Args:
        mob: Mobility set
        mode: canonical, sparse or explicit
        components: Coefficient vectors, required for explicit mode

    Returns:
        HarmonicDecomposition
    """
    mode = DecompositionMode(mode)
    if mode is DecompositionMode.CANONICAL:
        dec = canonical_decomposition(mob)
    elif mode is DecompositionMode.SPARSE:
        dec = sparse_decomposition(mob)
    else:
        if not components:
            raise ValueError("Explicit decomposition requires components")
        dec = explicit_decomposition(mob, components)
    logger.info("Mobility decomposition: %s with P=%d, m_star=%s", dec.label, dec.size,
                np.array2string(dec.m_star, precision=6))
    return dec
