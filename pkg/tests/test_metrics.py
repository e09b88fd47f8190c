import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from bures_geom.matcore import ValidationError
from bures_geom.metrics import (
    MCFunctionKind,
    bhattacharyya,
    bloch_path_length,
    bures_angle,
    bures_distance,
    fidelity,
    fubini_study,
    hellinger,
    hs_distance,
    hubner_line_element,
    mc_c,
    mc_function,
    monotone_squared_length,
    qubit_line_element,
    qubit_radial_split,
    straight_bloch_path,
    trace_distance,
    uhlmann_arc_path,
)
from bures_geom.states import (
    PAULI,
    maximally_mixed,
    new_density,
    pure_state,
    qubit_from_bloch,
    random_hs_state,
    random_interior_state,
    random_pure,
)

DISTANCES = [trace_distance, hs_distance, bures_distance, bures_angle]
ball = st.tuples(*[st.floats(-1, 1)] * 3).filter(lambda v: sum(c * c for c in v) <= 1)
seeds = st.integers(0, 2**32 - 1)


def qubit_fidelity(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return 0.5 * (1 + a @ b + math.sqrt(max(0, 1 - a @ a)) * math.sqrt(max(0, 1 - b @ b)))


class TestDistanceAxioms:
    @pytest.mark.parametrize("dist", DISTANCES)
    @pytest.mark.parametrize("beta", [1, 2])
    def test_identity(self, rng, dist, beta):
        for n in (1, 2, 4):
            rho = random_hs_state(n, beta, rng)
            assert dist(rho, rho) <= 1e-12

    @pytest.mark.parametrize("dist", DISTANCES)
    @given(seed=seeds)
    def test_symmetric_and_triangle(self, dist, seed):
        rng = np.random.default_rng(seed)
        a, b, c = (random_hs_state(3, 2, rng) for _ in range(3))
        assert dist(a, b) == pytest.approx(dist(b, a), abs=1e-12)
        assert dist(a, c) <= dist(a, b) + dist(b, c) + 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError):
            trace_distance(maximally_mixed(2), maximally_mixed(3))


class TestQubitDistances:
    @given(ball, ball)
    def test_trace_is_bloch_distance(self, a, b):
        d = np.linalg.norm(np.subtract(a, b))
        assert trace_distance(qubit_from_bloch(a), qubit_from_bloch(b)) == pytest.approx(d, abs=1e-12)

    @given(ball, ball)
    def test_hs_is_scaled_bloch_distance(self, a, b):
        d = np.linalg.norm(np.subtract(a, b)) / math.sqrt(2)
        assert hs_distance(qubit_from_bloch(a), qubit_from_bloch(b)) == pytest.approx(d, abs=1e-12)

    @given(ball, ball)
    def test_fidelity_closed_form(self, a, b):
        # sqrt(F) is only sqrt(eps)-conditioned next to the pure boundary
        assert fidelity(qubit_from_bloch(a), qubit_from_bloch(b)) == pytest.approx(qubit_fidelity(a, b), abs=1e-7)

    @given(st.tuples(*[st.floats(-0.57, 0.57)] * 3), st.tuples(*[st.floats(-0.57, 0.57)] * 3))
    def test_fidelity_closed_form_interior(self, a, b):
        assert fidelity(qubit_from_bloch(a), qubit_from_bloch(b)) == pytest.approx(qubit_fidelity(a, b), abs=1e-13)

    def test_anchor_mixed_vs_pure(self):
        rho, pure = maximally_mixed(2), qubit_from_bloch((0, 0, 1))
        assert abs(bures_distance(rho, pure) - math.sqrt(2 - math.sqrt(2))) <= 1e-12
        assert abs(bures_angle(rho, pure) - math.pi / 4) <= 1e-12

    def test_anchor_orthogonal_pure(self):
        up, down = qubit_from_bloch((0, 0, 1)), qubit_from_bloch((0, 0, -1))
        assert abs(bures_distance(up, down) - math.sqrt(2)) <= 1e-12
        assert trace_distance(up, down) == 2


class TestFidelity:
    @given(seed=seeds)
    def test_range_and_bures_bound(self, seed):
        rng = np.random.default_rng(seed)
        a, b = random_hs_state(3, 2, rng), random_hs_state(3, 2, rng)
        f = fidelity(a, b)
        assert 0 <= f <= 1
        # Fuchs-van de Graaf: 1 - sqrt(F) <= T/2 <= sqrt(1 - F)
        t = trace_distance(a, b) / 2
        assert 1 - math.sqrt(f) <= t + 1e-12
        assert t <= math.sqrt(1 - f) + 1e-12

    @given(seed=seeds)
    def test_pure_pair_overlap(self, seed):
        rng = np.random.default_rng(seed)
        psi = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        phi = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        psi, phi = psi / np.linalg.norm(psi), phi / np.linalg.norm(phi)
        f = fidelity(pure_state(psi), pure_state(phi))
        assert f == pytest.approx(abs(np.vdot(psi, phi)) ** 2, abs=1e-12)

    @given(st.lists(st.floats(0.01, 1), min_size=3, max_size=3), st.lists(st.floats(0.01, 1), min_size=3, max_size=3))
    def test_commuting_states_reduce_to_hellinger(self, p, q):
        p, q = np.array(p) / sum(p), np.array(q) / sum(q)
        p, q = p / p.sum(), q / q.sum()
        assume(abs(p.sum() - 1) < 1e-15 and abs(q.sum() - 1) < 1e-15)
        rho, sigma = new_density(np.diag(p)), new_density(np.diag(q))
        assert math.sqrt(fidelity(rho, sigma)) == pytest.approx(bhattacharyya(p, q), abs=1e-12)
        assert bures_distance(rho, sigma) == pytest.approx(hellinger(p, q), abs=1e-7)

    def test_unitary_invariance(self, rng):
        from bures_geom.matcore import haar_random

        a, b = random_hs_state(3, 2, rng), random_hs_state(3, 2, rng)
        u = haar_random(3, 2, rng)
        ua, ub = (new_density(u @ x.mat @ u.conj().T) for x in (a, b))
        assert fidelity(ua, ub) == pytest.approx(fidelity(a, b), abs=1e-12)

    def test_rejects_non_states(self):
        with pytest.raises(ValidationError):
            fidelity(np.eye(2), np.eye(2) * 2.0)


class TestClassical:
    def test_bhattacharyya_identity(self):
        assert bhattacharyya([0.2, 0.8], [0.2, 0.8]) == pytest.approx(1)
        assert hellinger([1, 0], [0, 1]) == pytest.approx(math.sqrt(2))

    def test_validates(self):
        with pytest.raises(ValidationError):
            bhattacharyya([0.5, 0.6], [0.5, 0.5])
        with pytest.raises(ValidationError):
            bhattacharyya([1.5, -0.5], [0.5, 0.5])


class TestFubiniStudy:
    @given(seed=seeds)
    def test_twice_bures_angle_on_pure(self, seed):
        rng = np.random.default_rng(seed)
        a, b = random_pure(3, 2, rng), random_pure(3, 2, rng)
        assert fubini_study(a, b) == pytest.approx(2 * bures_angle(a, b), abs=1e-9)

    def test_orthogonal(self):
        assert fubini_study(pure_state([1, 0]), pure_state([0, 1])) == pytest.approx(math.pi)

    def test_rejects_mixed(self):
        with pytest.raises(ValidationError, match="pure"):
            fubini_study(maximally_mixed(2), pure_state([1, 0]))


def bloch_tangent(dtau):
    return 0.5 * sum(c * p for c, p in zip(dtau, PAULI))


class TestHubner:
    def test_maximally_mixed(self, rng):
        d = PAULI[0] * 0.3 + PAULI[2] * 0.1
        expected = 2 / 4 * np.linalg.norm(d) ** 2  # N/4 * ||d||^2
        assert hubner_line_element(maximally_mixed(2), d) == pytest.approx(expected)

    @given(ball, st.tuples(*[st.floats(-1, 1)] * 3))
    def test_matches_bloch_line_element(self, tau, dtau):
        assume(sum(c * c for c in tau) < 0.98)
        got = hubner_line_element(qubit_from_bloch(tau), bloch_tangent(dtau))
        assert got == pytest.approx(qubit_line_element(tau, dtau), rel=1e-9, abs=1e-14)

    def test_rejects_traced_tangent(self):
        with pytest.raises(ValidationError, match="traceless"):
            hubner_line_element(maximally_mixed(2), np.eye(2))

    def test_unitary_covariance(self, rng):
        from bures_geom.matcore import haar_random

        rho = random_interior_state(3, 2, rng)
        d = PAULI[0]
        d = np.pad(d, ((0, 1), (0, 1)))
        u = haar_random(3, 2, rng)
        rot = new_density(u @ rho.mat @ u.conj().T)
        assert hubner_line_element(rot, u @ d @ u.conj().T) == pytest.approx(hubner_line_element(rho, d))

    def test_pure_state_drops_null_block(self):
        # at a pure state only off-diagonal pure-complement coupling survives
        d = np.array([[0, 1], [1, 0]], dtype=complex)
        assert hubner_line_element(pure_state([1, 0]), d) == pytest.approx(0.5 * 2 / 1)


class TestMonotoneFamily:
    @pytest.mark.parametrize("kind", list(MCFunctionKind))
    def test_fisher_adjusted(self, kind):
        assert mc_function(kind, 1.0) == pytest.approx(1.0)

    def test_max_at_zero(self):
        assert mc_function(MCFunctionKind.MAX, 0.0) == 0.5
        assert mc_function(MCFunctionKind.MIN, 0.0) == 0.0

    @pytest.mark.parametrize("kind", list(MCFunctionKind))
    @given(t=st.floats(1e-3, 1e3))
    def test_self_inversion_symmetry(self, kind, t):
        assert mc_function(kind, t) == pytest.approx(t * mc_function(kind, 1 / t), rel=1e-12)

    @given(t=st.floats(1e-3, 1e3))
    def test_ordering(self, t):
        lo = mc_function(MCFunctionKind.MIN, t)
        mid = mc_function(MCFunctionKind.KUBO_MORI, t)
        hi = mc_function(MCFunctionKind.MAX, t)
        assert lo <= mid * (1 + 1e-12) and mid <= hi * (1 + 1e-12)

    def test_c_is_reciprocal_mean(self):
        assert mc_c(MCFunctionKind.MAX, 0.2, 0.6) == pytest.approx(2 / 0.8)
        assert mc_c(MCFunctionKind.MIN, 0.2, 0.6) == pytest.approx((0.2 + 0.6) / (2 * 0.2 * 0.6))
        assert mc_c(MCFunctionKind.KUBO_MORI, 0.2, 0.6) == pytest.approx(math.log(3) / 0.4)

    def test_domain(self):
        with pytest.raises(ValueError):
            mc_function(MCFunctionKind.MAX, -1)
        with pytest.raises(ValueError):
            mc_c(MCFunctionKind.MAX, 0, 1)

    @given(seed=seeds)
    def test_max_kind_is_four_times_hubner(self, seed):
        rng = np.random.default_rng(seed)
        a = rng.dirichlet(np.ones(3)) * 0.9 + 0.1 / 3
        b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        b = b + b.conj().T
        b -= np.trace(b) / 3 * np.eye(3)
        got = monotone_squared_length(a, b, MCFunctionKind.MAX)
        assert got == pytest.approx(4 * hubner_line_element(np.diag(a), b), rel=1e-12)

    @pytest.mark.parametrize("kind", list(MCFunctionKind))
    @given(r=st.floats(0, 0.99))
    def test_radial_split_matches_monotone_length(self, kind, r):
        a = np.array([(1 + r) / 2, (1 - r) / 2])
        radial, tangential = qubit_radial_split(r, kind)
        assert monotone_squared_length(a, PAULI[2] / 2, kind) == pytest.approx(radial, rel=1e-12)
        assert monotone_squared_length(a, PAULI[0] / 2, kind) == pytest.approx(tangential, rel=1e-12)

    @given(r=st.floats(0, 0.99))
    def test_split_known_forms(self, r):
        assert qubit_radial_split(r, MCFunctionKind.MAX)[1] == pytest.approx(1.0)
        assert qubit_radial_split(r, MCFunctionKind.MIN)[1] == pytest.approx(1 / (1 - r * r))

    def test_split_at_boundary(self):
        assert qubit_radial_split(1, MCFunctionKind.MAX) == (math.inf, 1.0)
        assert qubit_radial_split(1, MCFunctionKind.MIN)[1] == math.inf
        with pytest.raises(ValueError):
            qubit_radial_split(1.5, MCFunctionKind.MAX)


class TestBlochPaths:
    @given(ball, ball)
    def test_arc_length_is_bures_angle(self, a, b):
        assume(sum(c * c for c in a) < 0.999 and sum(c * c for c in b) < 0.999)
        length = bloch_path_length(*uhlmann_arc_path(a, b))
        assert length == pytest.approx(bures_angle(qubit_from_bloch(a), qubit_from_bloch(b)), abs=1e-7)

    @given(ball, ball)
    def test_straight_path_not_shorter(self, a, b):
        assume(sum(c * c for c in a) < 0.9 and sum(c * c for c in b) < 0.9)
        straight = bloch_path_length(*straight_bloch_path(a, b))
        # arccos(sqrt F) resolves angles only down to ~sqrt(eps)
        assert straight >= bures_angle(qubit_from_bloch(a), qubit_from_bloch(b)) - 1e-7

    def test_diameter_is_geodesic(self):
        a, b = np.array([0.3, -0.2, 0.1]), np.array([-0.3, 0.2, -0.1])
        straight = bloch_path_length(*straight_bloch_path(a, b))
        assert straight == pytest.approx(bures_angle(qubit_from_bloch(a), qubit_from_bloch(b)), abs=1e-9)
