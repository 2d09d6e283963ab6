import numpy as np
import pytest

from src.models.errors import ConfigInvalidError, NotAdditiveError
from src.models.tension import TensionSet
from src.services.tension_service import split_tensions


def matrix3(s12, s13, s23):
    return np.array([[0.0, s12, s13], [s12, 0.0, s23], [s13, s23, 0.0]])


def test_equal_tensions_split_in_half():
    tensions = split_tensions(matrix3(1.0, 1.0, 1.0))
    np.testing.assert_allclose(tensions.sigma_phase, [0.5, 0.5, 0.5])


def test_low_tension_pair():
    tensions = split_tensions(matrix3(0.1, 1.0, 1.0))
    np.testing.assert_allclose(tensions.sigma_phase, [0.05, 0.05, 0.95], atol=1e-12)


def test_triangle_violation_is_not_additive():
    with pytest.raises(NotAdditiveError, match='negative tension for phase 0'):
        split_tensions(matrix3(1.0, 1.0, 3.0))


def test_two_phases():
    tensions = split_tensions([[0.0, 3.0], [3.0, 0.0]])
    np.testing.assert_allclose(tensions.sigma_phase, [1.5, 1.5])


def test_four_phases_must_be_consistent():
    sigma = np.ones((4, 4)) - np.eye(4)
    np.testing.assert_allclose(split_tensions(sigma).sigma_phase, [0.5] * 4)
    sigma[2, 3] = sigma[3, 2] = 1.5
    with pytest.raises(NotAdditiveError, match='inconsistent'):
        split_tensions(sigma)


def test_split_reconstructs_pairs():
    sigma = matrix3(0.7, 1.3, 1.1)
    tensions = split_tensions(sigma)
    np.testing.assert_allclose(tensions.recombine(), sigma, rtol=1e-12)


def test_negative_pair_is_a_config_error():
    with pytest.raises(ConfigInvalidError):
        split_tensions(matrix3(-1.0, 1.0, 1.0))


def test_from_phase_is_additive():
    tensions = TensionSet.from_phase([0.2, 0.3, 0.5])
    assert tensions.sigma_pair[0, 2] == pytest.approx(0.7)
    assert tensions.sigma_pair[1, 1] == 0.0
    assert tensions.to_dict()['pairs'][0] == [0, 1, pytest.approx(0.5)]


@pytest.mark.parametrize('perm', [[1, 0, 2], [2, 0, 1], [0, 2, 1]])
def test_split_follows_a_relabeling(perm):
    sigma = matrix3(0.7, 1.3, 1.1)
    relabeled = split_tensions(sigma[np.ix_(perm, perm)])
    np.testing.assert_allclose(relabeled.sigma_phase,
                               split_tensions(sigma).sigma_phase[perm], rtol=1e-12)
