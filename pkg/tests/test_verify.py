import numpy as np
import pytest

from bures_geom import verify
from bures_geom.metrics import hs_distance
from bures_geom.states import apply_channel, random_interior_state


class TestSuites:
    @pytest.mark.parametrize("beta", [1, 2])
    def test_volume_identity(self, beta):
        assert all(c.passed for c in verify.check_volume_identity(5, beta))

    def test_constants(self):
        checks = verify.check_constants(3, 1, 100_000, 0)
        assert len(checks) == 6 and all(c.passed for c in checks)

    @pytest.mark.parametrize("n", [2, 3])
    def test_metric(self, n):
        assert all(c.passed for c in verify.check_metric(n, 2, 20, 1))

    def test_monotonicity_real(self):
        checks = verify.check_monotonicity(2, 1, 200, 0)
        assert len(checks) == 2 and all(c.passed for c in checks)

    def test_unknown(self):
        with pytest.raises(ValueError):
            verify.run("nope", 2, 2, None, 0)

    def test_check_line(self):
        assert verify.Check("x", "b", 0.5, True).line() == "[PASS] x: observed 0.5 (band b)"


class TestHubnerFD:
    def test_richardson_beats_one_sided(self, rng):
        rho = random_interior_state(3, 2, rng)
        fd = verify.hubner_finite_difference(rho, verify.random_tangent(3, 2, rng))
        assert fd.richardson_error < fd.fine_error

    def test_tangent_is_traceless_unit(self, rng):
        t = verify.random_tangent(4, 1, rng)
        assert abs(np.trace(t)) < 1e-14
        assert np.linalg.norm(t) == pytest.approx(1)


class TestHSSearch:
    @pytest.mark.parametrize("n", [3, 4])
    def test_finds_increase(self, n):
        ratio, rho, sigma, ch = verify.search_hs_increase(n, np.random.default_rng(n))
        assert ratio > 1
        again = hs_distance(apply_channel(rho, ch), apply_channel(sigma, ch)) / hs_distance(rho, sigma)
        assert again == pytest.approx(ratio)


def test_haar_invariance_residual(rng):
    assert verify.haar_invariance_residual(4, 2, rng) < 1e-13
