import json
import math

import numpy as np
import pytest

from waverate import DyadicGrid, make_family, sample
from waverate.grids import DecayHint, SampledFunction
from waverate.sobolev import (
    CriticalOrder,
    SampledSpectrum,
    SobolevError,
    criterion_sweep,
    critical_order,
    export_critical_json,
    export_sweep_csv,
    family_spectrum,
    fourier_transform,
    hermitian_defect,
    plancherel_defect,
    scaling_criterion,
    wavelet_criterion,
)


@pytest.fixture(scope="module")
def haar():
    return make_family("haar")


@pytest.fixture(scope="module")
def haar_psi_spec(haar):
    return family_spectrum(haar, "psi")


@pytest.fixture(scope="module")
def haar_phi_spec(haar):
    return family_spectrum(haar, "phi")


def box_function():
    g = DyadicGrid(-1.0, 1.0, 10)
    x = g.points()
    v = np.where(np.abs(x) < 0.5, 1.0, 0.0)
    v[np.abs(np.abs(x) - 0.5) < 1e-12] = 0.5  # midpoint at the jumps
    return SampledFunction(g, v)


class TestFourierTransform:
    def test_box_closed_form(self):
        sp = fourier_transform(box_function())
        for xi in (0.0, math.pi, 2 * math.pi):
            want = 1.0 / math.sqrt(2 * math.pi)
            if xi != 0.0:
                want *= math.sin(xi / 2) / (xi / 2)
            assert abs(sp.evaluate(xi)[0] - want) < 1e-4

    def test_plancherel(self):
        assert plancherel_defect(fourier_transform(box_function())) < 1e-4

    def test_hermitian_symmetry(self):
        assert hermitian_defect(fourier_transform(box_function())) < 1e-10

    def test_gaussian_self_transform(self):
        g = DyadicGrid(-16.0, 16.0, 8)
        f = sample(lambda x: np.exp(-(x**2) / 2), g, DecayHint("none"))
        sp = fourier_transform(f)
        xs = np.linspace(-8.0, 8.0, 65)
        assert np.max(np.abs(sp.evaluate(xs) - np.exp(-(xs**2) / 2))) < 1e-6

    def test_haar_wavelet_quadratic_origin(self, haar_psi_spec):
        # |psi^|^2 / xi^2 constant within 2% on [0.01, 0.1]
        xi = np.linspace(0.01, 0.1, 25)
        ratio = np.abs(haar_psi_spec.evaluate(xi)) ** 2 / xi**2
        assert (ratio.max() - ratio.min()) / ratio.mean() < 0.02

    def test_rejects_small_pad_factor(self):
        with pytest.raises(SobolevError):
            fourier_transform(box_function(), pad_factor=2)

    def test_sourceless_spectrum_lacks_resolution(self):
        sp = fourier_transform(box_function())
        bare = SampledSpectrum(xi=sp.xi, values=sp.values, source=None)
        with pytest.raises(SobolevError):
            wavelet_criterion(bare, 1.0)

    def test_rejects_asymmetric_grid(self):
        with pytest.raises(SobolevError):
            SampledSpectrum(xi=np.array([0.0, 1.0, 3.0]), values=np.zeros(3, complex))


class TestWaveletCriterion:
    def test_haar_low_order_finite(self, haar_psi_spec):
        r = wavelet_criterion(haar_psi_spec, 0.5, 1.0)
        assert not r.diverged
        assert np.isfinite(r.value) and r.value > 0

    def test_haar_high_order_diverged(self, haar_psi_spec):
        r = wavelet_criterion(haar_psi_spec, 1.5, 1.0)
        assert r.diverged
        assert r.value == math.inf

    def test_trace_monotone_increasing(self, haar_psi_spec):
        for s in (0.3, 0.8, 1.2, 2.5):
            t = wavelet_criterion(haar_psi_spec, s).refinement_trace
            assert all(b >= a for a, b in zip(t, t[1:]))

    def test_epsilon_independent_verdicts(self, haar_psi_spec):
        for s in (0.5, 1.5):
            verdicts = {
                wavelet_criterion(haar_psi_spec, s, eps).diverged
                for eps in (0.5, 1.0, 2.0)
            }
            assert len(verdicts) == 1

    def test_rejects_bad_parameters(self, haar_psi_spec):
        with pytest.raises(SobolevError):
            wavelet_criterion(haar_psi_spec, -1.0)
        with pytest.raises(SobolevError):
            wavelet_criterion(haar_psi_spec, 1.0, epsilon=0.0)
        with pytest.raises(SobolevError):
            wavelet_criterion(haar_psi_spec, 1.0, n_shells=20)


class TestScalingCriterion:
    def test_haar_verdicts(self, haar_phi_spec):
        fine = scaling_criterion(haar_phi_spec, 0.5)
        assert not fine.diverged
        # (2pi)|phi^|^2 - 1 ~ -xi^2/12 near 0: signed integral negative
        assert fine.signed_value < 0
        assert scaling_criterion(haar_phi_spec, 1.5).diverged

    def test_haar_factor_quadratic_law(self, haar_phi_spec):
        xi = np.array([1e-3, 1e-2, 0.05])
        factor = 2 * np.pi * np.abs(haar_phi_spec.evaluate(xi)) ** 2 - 1
        assert np.max(np.abs(factor / (-(xi**2) / 12.0) - 1.0)) < 0.01

    def test_shannon_identically_zero(self):
        sp = family_spectrum(make_family("shannon"), "phi")
        for s in (0.5, 2.0, 4.0):
            r = scaling_criterion(sp, s)
            assert not r.diverged
            assert abs(r.value) < 1e-12

    def test_epsilon_independent_verdicts(self, haar_phi_spec):
        for s in (0.5, 1.5):
            verdicts = {
                scaling_criterion(haar_phi_spec, s, eps).diverged
                for eps in (0.5, 1.0, 2.0)
            }
            assert len(verdicts) == 1


class TestCriticalOrder:
    @pytest.mark.parametrize(
        "name,param,target,tol",
        [
            ("haar", 0, 1.0, 0.1),
            ("daubechies", 2, 2.0, 0.15),
            ("battle_lemarie", 2, 2.0, 0.15),
        ],
    )
    def test_known_orders(self, name, param, target, tol):
        fam = make_family(name, param) if param else make_family(name)
        co = critical_order(fam)
        assert abs(co.s_star - target) <= tol
        assert co.bracket[1] - co.bracket[0] <= 0.05 + 1e-12

    def test_matches_vanishing_moments(self):
        for spec in [("haar", 0), ("daubechies", 2), ("daubechies", 3), ("battle_lemarie", 2)]:
            fam = make_family(spec[0], spec[1]) if spec[1] else make_family(spec[0])
            co = critical_order(fam)
            assert abs(co.s_star - fam.vanishing_moments) <= 0.15

    def test_wavelet_scaling_agreement(self):
        for spec in [("haar", 0), ("daubechies", 2), ("battle_lemarie", 2)]:
            fam = make_family(spec[0], spec[1]) if spec[1] else make_family(spec[0])
            a = critical_order(fam, criterion="wavelet").s_star
            b = critical_order(fam, criterion="scaling").s_star
            assert abs(a - b) <= 0.15

    def test_shannon_has_no_bracket(self):
        with pytest.raises(SobolevError):
            critical_order(make_family("shannon"))

    def test_bad_criterion_name(self, haar):
        with pytest.raises(SobolevError):
            critical_order(haar, criterion="bogus")

    def test_verdict_monotone_on_sweep(self, haar_psi_spec):
        # finite verdicts must precede diverged ones on a 0.1-spaced sweep
        sweep = criterion_sweep(haar_psi_spec, np.arange(0.1, 2.01, 0.1))
        flags = [r.diverged for r in sweep]
        assert flags == sorted(flags)


class TestExports:
    def test_sweep_csv(self, haar_psi_spec, tmp_path):
        results = criterion_sweep(haar_psi_spec, [0.5, 1.5])
        path = tmp_path / "sweep.csv"
        export_sweep_csv(results, str(path))
        lines = path.read_text().splitlines()
        assert lines[0].startswith("s,epsilon,value,shell_0")
        assert "DIVERGED" in lines[2]
        assert "DIVERGED" not in lines[1]

    def test_critical_json(self, haar, tmp_path):
        co = critical_order(haar)
        path = tmp_path / "co.json"
        export_critical_json(co, str(path))
        doc = json.loads(path.read_text())
        assert doc["family"] == "haar"
        assert doc["bracket"][0] <= doc["s_star"] <= doc["bracket"][1]
