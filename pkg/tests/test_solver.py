import numpy as np
import pytest

from src.models.errors import DimensionMismatchError, NonFiniteFieldError
from src.models.grid import SpectralGrid
from src.models.mobility import MobilitySet
from src.models.phase_state import PhaseState
from src.models.solver_params import SolverParams
from src.models.tension import TensionSet
from src.services import diagnostics_service, mobility_service, solver_service
from src.services.potential_service import profile


@pytest.fixture
def line_grid():
    """Thin 2D box standing in for a line along axis 0."""
    return SpectralGrid(sizes=(128, 4), lengths=(1.0, 4.0 / 128), origin=(-0.5, 0.0))


def constant_state(grid, values):
    fields = np.stack([np.full(grid.sizes, v, dtype=float) for v in values])
    return PhaseState.create(grid, fields)


class TestSolverParams:
    def test_stiffness_and_duration(self):
        p = SolverParams(epsilon=0.1, dt=0.01, alpha=2.0, n_steps=5)
        assert p.stiffness == pytest.approx(200.0)
        assert p.t_end == pytest.approx(0.05)

    @pytest.mark.parametrize('kwargs', [
        {'epsilon': 0.0, 'dt': 0.1},
        {'epsilon': 0.1, 'dt': -1.0},
        {'epsilon': 0.1, 'dt': 0.1, 'alpha': -1.0},
        {'epsilon': 0.1, 'dt': 0.1, 'beta': 0.0},
        {'epsilon': 0.1, 'dt': 0.1, 'n_steps': -1},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            SolverParams(**kwargs)


class TestStep1:
    def test_zero_and_one_are_fixed_points(self, unit_grid, equal_tensions, homogeneous_mobility):
        dec = mobility_service.canonical_decomposition(homogeneous_mobility)
        p = SolverParams(epsilon=0.05, dt=1e-3, alpha=2.0)
        state = constant_state(unit_grid, [0.0, 1.0, 0.0])
        half = solver_service.step1_decoupled(state, equal_tensions, dec, p)
        np.testing.assert_allclose(half.fields, state.fields, atol=1e-14)

    def test_planar_profile_is_nearly_stationary(self, line_grid):
        grid = line_grid
        h = grid.spacing[0]
        epsilon = 3.0 * h
        x = grid.axis_coordinates(0)
        distance = np.abs(x) - 0.25
        u = profile(distance / epsilon)
        fields = np.stack([np.repeat(u[:, None], 4, axis=1), np.repeat(1 - u[:, None], 4, axis=1)])
        state = PhaseState.create(grid, fields)
        mob = MobilitySet.from_pairs(2, [(0, 1, 1.0)])
        dec = mobility_service.canonical_decomposition(mob)
        tensions = TensionSet.from_phase([0.5, 0.5])
        p = SolverParams(epsilon=epsilon, dt=0.25 * h * h)
        half = solver_service.step1_decoupled(state, tensions, dec, p)

        before = diagnostics_service.level_crossing(state.fields[0][:64, 0], x[:64])
        after = diagnostics_service.level_crossing(half.fields[0][:64, 0], x[:64])
        assert abs(after - before) <= 1e-3 * epsilon

    def test_frozen_phase_is_copied(self, circles_state, circles_params, equal_tensions):
        mob = MobilitySet.from_pairs(3, [(0, 1, 0.0), (0, 2, 0.0), (1, 2, 1.0)])
        dec = mobility_service.canonical_decomposition(mob)
        half = solver_service.step1_decoupled(circles_state, equal_tensions, dec, circles_params)
        np.testing.assert_array_equal(half.fields[0], circles_state.fields[0])


class TestStep2:
    def test_no_change_without_motion(self, circles_state, circles_params, circles_decomposition):
        out = solver_service.step2_project(circles_state, circles_state, circles_decomposition,
                                           circles_params)
        np.testing.assert_array_equal(out.fields, circles_state.fields)

    def test_restores_the_partition_sum(self, unit_grid, random_fields, circles_decomposition):
        prev = PhaseState.create(unit_grid, random_fields(unit_grid, 3, seed=1))
        perturbation = np.random.default_rng(2).normal(scale=1e-3, size=prev.fields.shape)
        half = prev.with_fields(prev.fields + perturbation, 0.0, 0)
        p = SolverParams(epsilon=0.05, dt=1e-4)
        out = solver_service.step2_project(half, prev, circles_decomposition, p)
        assert np.max(np.abs(out.total() - prev.total())) <= 1e-12

    def test_frozen_phase_is_bit_exact(self, unit_grid, random_fields):
        mob = MobilitySet.from_pairs(3, [(0, 1, 0.0), (0, 2, 0.0), (1, 2, 1.0)])
        dec = mobility_service.canonical_decomposition(mob)
        prev = PhaseState.create(unit_grid, random_fields(unit_grid, 3, seed=4))
        half = prev.with_fields(prev.fields + 1e-3, 0.0, 0)
        out = solver_service.step2_project(half, prev, dec, SolverParams(epsilon=0.05, dt=1e-4))
        np.testing.assert_array_equal(out.fields[0], half.fields[0])


class TestStep:
    def test_all_zero_mobility_leaves_state_unchanged(self, circles_state, circles_params,
                                                      equal_tensions):
        mob = MobilitySet.from_pairs(3, [])
        dec = mobility_service.canonical_decomposition(mob)
        out = solver_service.step(circles_state, equal_tensions, dec, circles_params)
        np.testing.assert_array_equal(out.fields, circles_state.fields)
        assert out.step == 1
        assert out.time == pytest.approx(circles_params.dt)

    def test_partition_is_preserved(self, circles_state, circles_params, circles_decomposition,
                                    equal_tensions):
        final = solver_service.evolve(circles_state, equal_tensions, circles_decomposition,
                                      circles_params)
        assert diagnostics_service.constraint_error(final) <= 1e-12
        assert final.step == circles_params.n_steps

    def test_stepper_matches_step(self, circles_state, circles_params, circles_decomposition,
                                  equal_tensions):
        stepper = solver_service.Stepper(circles_state.grid, equal_tensions,
                                         circles_decomposition, circles_params)
        direct = solver_service.step(circles_state, equal_tensions, circles_decomposition,
                                     circles_params)
        np.testing.assert_array_equal(stepper.step(circles_state).fields, direct.fields)

    def test_phase_count_mismatch(self, circles_state, circles_params):
        mob = MobilitySet.from_pairs(2, [(0, 1, 1.0)])
        dec = mobility_service.canonical_decomposition(mob)
        with pytest.raises(DimensionMismatchError):
            solver_service.step(circles_state, TensionSet.from_phase([0.5, 0.5]), dec,
                                circles_params)

    def test_sparse_and_canonical_stay_close(self, circles_state, circles_params, equal_tensions,
                                             homogeneous_mobility):
        canonical = mobility_service.canonical_decomposition(homogeneous_mobility)
        sparse = mobility_service.sparse_decomposition(homogeneous_mobility)
        a = solver_service.evolve(circles_state, equal_tensions, canonical, circles_params)
        b = solver_service.evolve(circles_state, equal_tensions, sparse, circles_params)
        for k in range(2):
            assert diagnostics_service.interface_displacement(a, b, k) <= 2

    @pytest.mark.parametrize('perm', [[1, 0, 2], [2, 0, 1], [1, 2, 0]])
    def test_relabeling_phases_relabels_the_result(self, unit_grid, random_fields,
                                                   circles_mobility, perm):
        tensions = TensionSet.from_phase([0.3, 0.5, 0.7])
        params = SolverParams(epsilon=1.5 / 32, dt=0.25 / 32 ** 2, n_steps=5)
        fields = random_fields(unit_grid, 3, seed=3)
        state = PhaseState.create(unit_grid, fields)
        dec = mobility_service.canonical_decomposition(circles_mobility)
        out = solver_service.evolve(state, tensions, dec, params)

        relabeled_mob = MobilitySet.from_matrix(circles_mobility.matrix[np.ix_(perm, perm)])
        relabeled = solver_service.evolve(
            PhaseState.create(unit_grid, fields[perm]),
            TensionSet.from_phase(tensions.sigma_phase[perm]),
            mobility_service.canonical_decomposition(relabeled_mob),
            params,
        )
        np.testing.assert_allclose(relabeled.fields, out.fields[perm], rtol=0.0, atol=1e-13)


class TestEvolve:
    def test_zero_steps_returns_input(self, circles_state, circles_params, circles_decomposition,
                                      equal_tensions):
        calls = []
        hook = solver_service.StepHook(every=5, callback=lambda n, s: calls.append(n))
        final = solver_service.evolve(circles_state, equal_tensions, circles_decomposition,
                                      circles_params.with_steps(0), [hook])
        assert final is circles_state
        assert calls == [0]

    def test_hook_schedule(self, circles_state, circles_params, circles_decomposition,
                           equal_tensions):
        calls = []
        hook = solver_service.StepHook(every=8, callback=lambda n, s: calls.append(n))
        solver_service.evolve(circles_state, equal_tensions, circles_decomposition,
                              circles_params, [hook])
        assert calls == [0, 8, 16, 20]

    def test_snapshot_interval_does_not_change_result(self, circles_state, circles_params,
                                                      circles_decomposition, equal_tensions):
        results = []
        for every in (3, 6):
            hook = solver_service.StepHook(every=every, callback=lambda n, s: None)
            results.append(solver_service.evolve(circles_state, equal_tensions,
                                                 circles_decomposition, circles_params, [hook]))
        np.testing.assert_array_equal(results[0].fields, results[1].fields)

    def test_non_finite_values_abort(self, circles_state, circles_decomposition, equal_tensions):
        bad = circles_state.copy()
        bad.fields[1, 3, 3] = np.nan
        p = SolverParams(epsilon=0.05, dt=1e-4, n_steps=3)
        with pytest.raises(NonFiniteFieldError) as info:
            solver_service.evolve(bad, equal_tensions, circles_decomposition, p)
        assert info.value.step == 1
        assert 0 <= info.value.phase < 3
