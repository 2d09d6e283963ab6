"""Surface tension service: additive split sigma_ij = sigma_i + sigma_j."""

import itertools
import logging
from typing import Sequence

import numpy as np

from src.models.errors import NotAdditiveError
from src.models.mobility import check_symmetric_matrix
from src.models.tension import TensionSet

logger = logging.getLogger(__name__)

SPLIT_TOLERANCE = 1e-9


def split_tensions(sigma_pair: Sequence[Sequence[float]]) -> TensionSet:
    """Compute per-phase tensions from pairwise ones.

    For n >= 3 each sigma_i = (sigma_ij + sigma_ik - sigma_jk) / 2, and every
    triple (j, k) must give the same value. For n = 2 the split is
    under-determined and sigma_1 = sigma_2 = sigma_12 / 2 is used.

    Args:
        sigma_pair: Symmetric nonnegative matrix with zero diagonal

    Returns:
        TensionSet keeping the given pairwise matrix

    Raises:
        NotAdditiveError: On a negative sigma_i, inconsistent triples, or a
            reconstruction mismatch
    """
    matrix = check_symmetric_matrix(np.asarray(sigma_pair, dtype=float), 'tensions', 'tension')
    n = matrix.shape[0]
    phase = np.zeros(n)
    if n == 2:
        phase[:] = 0.5 * matrix[0, 1]
    else:
        for i in range(n):
            others = [j for j in range(n) if j != i]
            candidates = [0.5 * (matrix[i, j] + matrix[i, k] - matrix[j, k])
                          for j, k in itertools.combinations(others, 2)]
            first = candidates[0]
            scale = max(1.0, float(np.max(matrix)))
            if first < -SPLIT_TOLERANCE * scale:
                raise NotAdditiveError(f"negative tension for phase {i}: sigma_{i} = {first:g}")
            for value in candidates[1:]:
                if abs(value - first) > SPLIT_TOLERANCE * max(abs(value), abs(first), 1.0):
                    raise NotAdditiveError(
                        f"inconsistent triples for phase {i}: sigma_{i} = {first:g} vs {value:g}"
                    )
            phase[i] = max(first, 0.0)

    tensions = TensionSet(n_phases=n, sigma_pair=matrix, sigma_phase=phase)
    error = float(np.max(np.abs(tensions.recombine() - matrix)))
    if error > SPLIT_TOLERANCE * max(1.0, float(np.max(matrix))):
        raise NotAdditiveError(f"reconstruction mismatch {error:g}")
    logger.debug("Tension split: %s", phase.tolist())
    return tensions
