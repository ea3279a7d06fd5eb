import numpy as np
import pytest

from cpdyn.chart import ChartPoint, from_chart, select_pivot, to_chart
from cpdyn.flow import (
    FlowSettings,
    _pivot_last,
    _rhs,
    classical_hamiltonian,
    grad_conj,
    hamilton_rhs,
    integrate_classical,
)
from cpdyn.pauli import build_two_qubit_hamiltonian
from cpdyn.quantum import NumericFailure, TimeGrid, evolve_exact_grid

from conftest import random_coords, random_hermitian, random_state
from oracles import fd_grad_conj, quotient_rule_velocity


class TestClassicalHamiltonian:
    def test_identity_operator(self, rng):
        for _ in range(10):
            point = ChartPoint(0, random_coords(rng, 3))
            assert classical_hamiltonian(np.eye(4), point) == pytest.approx(1.0)

    def test_diagonal_coupling_balances_out(self):
        H = build_two_qubit_hamiltonian(2.5, 0, 0, 0, 0)
        point = ChartPoint(3, np.ones(3))
        assert classical_hamiltonian(H, point) == pytest.approx(0.0)

    def test_entangling_term_values(self):
        H = build_two_qubit_hamiltonian(0, 0, 0, 4.0, 0)
        assert classical_hamiltonian(H, ChartPoint(3, np.zeros(3))) == pytest.approx(0.0)
        point = ChartPoint(3, np.array([1.0, 0, 0]))
        assert classical_hamiltonian(H, point) == pytest.approx(-4.0)

    def test_imaginary_leakage_raises(self):
        not_hermitian = np.array([[0, 1j], [1j, 0], ], dtype=complex)
        not_hermitian = np.block(
            [[not_hermitian, np.zeros((2, 2))], [np.zeros((2, 2)), np.zeros((2, 2))]]
        )
        with pytest.raises(ValueError, match="imaginary"):
            classical_hamiltonian(not_hermitian, ChartPoint(3, np.ones(3)))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension mismatch"):
            classical_hamiltonian(np.eye(3), ChartPoint(3, np.ones(3)))


class TestGradConj:
    def test_identity_has_flat_landscape(self, rng):
        for _ in range(10):
            point = ChartPoint(2, random_coords(rng, 4))
            np.testing.assert_allclose(grad_conj(np.eye(5), point), 0, atol=1e-14)

    def test_two_qubit_origin_value(self, rng):
        c1, c2, c3, c4, c5 = rng.uniform(-5, 5, 5)
        H = build_two_qubit_hamiltonian(c1, c2, c3, c4, c5)
        grad = grad_conj(H, ChartPoint(3, np.zeros(3)))
        np.testing.assert_allclose(
            grad, [-c4 - 1j * c5, c2 - 1j * c3, 0.0], atol=1e-12
        )

    def test_matches_finite_differences(self, rng):
        for _ in range(100):
            n = int(rng.integers(2, 6))
            H = random_hermitian(rng, n)
            point = ChartPoint(int(rng.integers(0, n)), random_coords(rng, n - 1))
            analytic = grad_conj(H, point)
            np.testing.assert_allclose(analytic, fd_grad_conj(H, point), atol=1e-6)


class TestHamiltonRhs:
    def test_identity_is_fixed_point(self, rng):
        point = ChartPoint(1, random_coords(rng, 3))
        np.testing.assert_allclose(hamilton_rhs(np.eye(4), point), 0, atol=1e-13)

    def test_zero_hamiltonian(self, rng):
        point = ChartPoint(1, random_coords(rng, 3))
        np.testing.assert_allclose(hamilton_rhs(np.zeros((4, 4)), point), 0, atol=0)

    def test_equals_chart_velocity_of_schrodinger_flow(self, rng):
        # oracle: quotient rule applied to d(psi)/dt = -iH psi
        for _ in range(200):
            n = int(rng.integers(2, 6))
            H = random_hermitian(rng, n)
            psi = random_state(rng, n)
            pivot = select_pivot(psi)
            point = to_chart(psi, pivot)
            expected = quotient_rule_velocity(H, psi, pivot)
            np.testing.assert_allclose(hamilton_rhs(H, point), expected, atol=1e-8)

    def test_integrator_kernel_matches_public_op(self, rng):
        for _ in range(200):
            n = int(rng.integers(2, 9))
            H = random_hermitian(rng, n)
            point = ChartPoint(int(rng.integers(0, n)), random_coords(rng, n - 1))
            A, b = _pivot_last(H, point.pivot)
            np.testing.assert_allclose(
                _rhs(A, b, point.coords),
                hamilton_rhs(H, point),
                rtol=1e-12,
                atol=1e-12,
            )


class TestFlowSettings:
    def test_validation(self):
        with pytest.raises(ValueError):
            FlowSettings(dt=-1.0)
        with pytest.raises(ValueError):
            FlowSettings(switch_threshold=0.0)
        with pytest.raises(ValueError):
            FlowSettings(switch_threshold=1.0)
        with pytest.raises(ValueError):
            FlowSettings(method="leapfrog")


class TestIntegrateClassical:
    def test_zero_hamiltonian_is_constant(self):
        point0 = ChartPoint(3, np.array([1.0, 0.5j, -0.25]))
        traj = integrate_classical(np.zeros((4, 4)), point0, TimeGrid(1.0, 0.01, 10))
        assert traj.n_switches == 0
        np.testing.assert_allclose(traj.coords, np.tile(point0.coords, (11, 1)))
        np.testing.assert_array_equal(traj.pivots, 3)

    def test_carries_reduced_coordinate_count(self, rng):
        for n in (2, 3, 5):
            H = random_hermitian(rng, n)
            psi = random_state(rng, n)
            traj = integrate_classical(
                H, to_chart(psi, select_pivot(psi)), TimeGrid(0.5, 0.01, 10)
            )
            assert traj.coords.shape[1] == n - 1
            assert traj.dimension == n

    def test_diagonal_two_qubit_matches_quantum_chart(self):
        H = build_two_qubit_hamiltonian(1.0, 0, 0, 0, 0)
        psi0 = np.array([0.5, 0.5, 0.5, 0.5])
        grid = TimeGrid(10.0, 1e-3, 100)
        traj = integrate_classical(H, to_chart(psi0, 3), grid)
        quantum = evolve_exact_grid(H, psi0, grid)
        assert traj.n_switches == 0
        for k in range(len(traj.times)):
            expected = to_chart(quantum.states[k], 3)
            np.testing.assert_allclose(
                traj.coords[k], expected.coords, atol=1e-6
            )

    def test_energy_conserved_along_flow(self, rng):
        H = random_hermitian(rng, 4)
        psi = random_state(rng, 4)
        traj = integrate_classical(
            H, to_chart(psi, select_pivot(psi)), TimeGrid(20.0, 1e-3, 500)
        )
        assert np.max(np.abs(traj.energies - traj.energies[0])) < 1e-8

    def test_switches_through_chart_singularity(self):
        # X (x) I rotation drives the initial pivot amplitude through zero
        H = build_two_qubit_hamiltonian(0, 1.0, 0, 0, 0)
        psi0 = np.array([0, 0, 0, 1.0])
        grid = TimeGrid(10.0, 1e-3, 100)
        traj = integrate_classical(H, to_chart(psi0, 3), grid)
        assert traj.n_switches >= 1
        quantum = evolve_exact_grid(H, psi0, grid)
        for k in range(len(traj.times)):
            gap = 1 - abs(np.vdot(quantum.states[k], from_chart(traj.point(k))))
            assert gap < 1e-6
        # the trajectory never lingers in a badly anchored chart
        nfacs = 1 + np.sum(np.abs(traj.coords) ** 2, axis=1)
        assert np.all(1 / np.sqrt(nfacs) > 0.2 * 0.9)

    def test_chart_covariance_of_observables(self, rng):
        # same ray, different admissible starting charts -> same populations
        H = random_hermitian(rng, 4)
        v = np.array([0.9, 1.1, -1.0, 0.95]) + 0.1j * np.arange(4)
        psi = v / np.linalg.norm(v)
        grid = TimeGrid(5.0, 1e-3, 100)
        runs = []
        for pivot in range(4):
            traj = integrate_classical(H, to_chart(psi, pivot), grid)
            pops = np.array(
                [np.abs(from_chart(traj.point(k))) ** 2 for k in range(len(traj.times))]
            )
            runs.append(pops)
        for other in runs[1:]:
            np.testing.assert_allclose(other, runs[0], atol=1e-8)

    def test_substep_override_matches_fine_grid(self):
        H = build_two_qubit_hamiltonian(1.0, 0.7, 0, 0.4, 0)
        psi0 = np.array([0.5, 0.5, 0.5, 0.5])
        coarse = TimeGrid(1.0, 1e-2, 10)
        fine = TimeGrid(1.0, 2e-3, 50)
        sub = integrate_classical(
            H, to_chart(psi0, 3), coarse, FlowSettings(dt=2e-3)
        )
        ref = integrate_classical(H, to_chart(psi0, 3), fine)
        np.testing.assert_allclose(sub.times, ref.times)
        np.testing.assert_allclose(sub.coords, ref.coords, atol=1e-13)

    def test_substep_must_divide_grid_step(self):
        H = build_two_qubit_hamiltonian(1.0, 0, 0, 0, 0)
        point0 = ChartPoint(3, np.ones(3))
        with pytest.raises(ValueError, match="divide"):
            integrate_classical(
                H, point0, TimeGrid(1.0, 1e-2), FlowSettings(dt=3e-3)
            )

    def test_non_finite_aborts(self):
        H = np.diag([1e200, -1e200, 0.0, 0.0])
        point0 = ChartPoint(3, np.array([1.0, 1.0, 1.0]))
        with np.errstate(invalid="ignore", over="ignore"):
            with pytest.raises(NumericFailure):
                integrate_classical(H, point0, TimeGrid(1.0, 0.1))

    def test_rejects_non_hermitian(self):
        H = np.zeros((4, 4))
        H[0, 1] = 1.0
        with pytest.raises(ValueError, match="not Hermitian"):
            integrate_classical(H, ChartPoint(3, np.ones(3)), TimeGrid(1.0, 0.1))
