import math

import numpy as np
import pytest

from twogon.coeffs import coeff_table_recursive
from twogon.errors import DomainError
from twogon.series import (
    AlphaParam,
    AsymptoticEstimate,
    LogMode,
    PowerMode,
    TruncatedSeries,
    as_alpha,
    default_schedule,
    evaluate,
    hadamard,
    product_coeff_stream,
    radial_asymptotic,
    series_coeff_stream,
    two_gon_series,
    two_gon_value,
)


def random_series(rng, order):
    re = rng.uniform(-1.0, 1.0, size=order + 1)
    im = rng.uniform(-1.0, 1.0, size=order + 1)
    return TruncatedSeries(re + 1j * im)


class TestAlphaParam:
    def test_validation(self):
        with pytest.raises(ValueError):
            AlphaParam(0.0)
        with pytest.raises(ValueError):
            AlphaParam(1.2)
        with pytest.raises(ValueError):
            AlphaParam(0.5, math.inf)

    def test_phase_wrap(self):
        p = AlphaParam(0.5, 3.0 * math.pi)
        assert p.phase == pytest.approx(math.pi)
        assert AlphaParam(0.5, -math.pi).phase == math.pi  # (-pi, pi] convention

    def test_from_complex(self):
        p = AlphaParam.from_complex(0.5j)
        assert p.modulus == 0.5
        assert p.phase == pytest.approx(math.pi / 2.0)
        assert p.value == pytest.approx(0.5j)

    def test_coercion(self):
        assert as_alpha(0.25) == AlphaParam(0.25)
        assert as_alpha(AlphaParam(0.5, 1.0)) == AlphaParam(0.5, 1.0)
        assert as_alpha(0.3 + 0.0j) == AlphaParam(0.3)


class TestTwoGonSeries:
    def test_real_case_matches_table(self):
        table = coeff_table_recursive(0.37, 24)
        s = two_gon_series(0.37, 24)
        assert np.array_equal(s.coeffs.real, table.values)
        assert np.all(s.coeffs.imag == 0.0)

    def test_rotated_coefficient(self):
        # alpha = i/2: coefficient 3 picks up e^(i 2 (pi/2)) = -1
        s = two_gon_series(0.5j, 8)
        assert s.coeffs[3] == pytest.approx(-0.5, abs=1e-15)

    def test_identity_series(self):
        s = two_gon_series(1.0, 16)
        assert np.all(s.coeffs[1:] == 1.0)

    def test_phase_factorization(self):
        # rotating each factor then convolving equals rotating the product
        rng = np.random.default_rng(3)
        for _ in range(10):
            m1, m2 = rng.uniform(0.2, 1.0, size=2)
            p1, p2 = rng.uniform(-math.pi, math.pi, size=2)
            lhs = hadamard(
                two_gon_series(AlphaParam(m1, p1), 20),
                two_gon_series(AlphaParam(m2, p2), 20),
            )
            k = np.arange(21)
            base = coeff_table_recursive(m1, 20).values * coeff_table_recursive(m2, 20).values
            rhs = base * np.exp(1j * (p1 + p2) * (k - 1))
            assert np.max(np.abs(lhs.coeffs - rhs)) < 1e-14


class TestHadamard:
    def test_identity_element(self):
        rng = np.random.default_rng(5)
        h = random_series(rng, 30)
        ones = two_gon_series(1.0, 30)
        out = hadamard(ones, h)
        # f_1 has zero constant term, so index 0 is annihilated
        assert out.coeffs[0] == 0.0
        assert np.array_equal(out.coeffs[1:], h.coeffs[1:])

    def test_zero_series(self):
        z = TruncatedSeries(np.zeros(8))
        h = two_gon_series(0.6, 12)
        assert np.all(hadamard(h, z).coeffs == 0.0)

    def test_example_product(self):
        out = hadamard(two_gon_series(0.3, 4), two_gon_series(0.4, 4))
        assert out.coeffs[2] == pytest.approx(0.12, rel=1e-15)

    def test_order_is_min(self):
        a = two_gon_series(0.5, 9)
        b = two_gon_series(0.5, 4)
        assert hadamard(a, b).order == 4

    def test_commutative_associative(self):
        rng = np.random.default_rng(9)
        for _ in range(25):
            f = random_series(rng, 16)
            g = random_series(rng, 16)
            h = random_series(rng, 16)
            ab = hadamard(f, g).coeffs
            ba = hadamard(g, f).coeffs
            assert np.allclose(ab, ba, rtol=1e-15, atol=0.0)
            lhs = hadamard(hadamard(f, g), h).coeffs
            rhs = hadamard(f, hadamard(g, h)).coeffs
            assert np.allclose(lhs, rhs, rtol=1e-15, atol=1e-18)


class TestEvaluate:
    def test_at_zero(self):
        s = TruncatedSeries(np.array([2.5, 1.0, 3.0]))
        assert evaluate(s, 0.0) == 2.5

    def test_geometric(self):
        s = two_gon_series(1.0, 100)
        assert evaluate(s, 0.5) == pytest.approx(1.0, abs=1e-15)  # r/(1-r) = 1

    def test_closed_form_deep(self):
        s = two_gon_series(0.5, 2000)
        want = two_gon_value(0.5, 0.9)
        assert evaluate(s, 0.9) == pytest.approx(want, rel=1e-8)

    def test_matches_closed_form_randomly(self):
        rng = np.random.default_rng(21)
        for _ in range(20):
            a = rng.uniform(0.05, 1.0)
            r = rng.uniform(0.0, 0.7)
            n = 500
            s = two_gon_series(a, n)
            tail = r ** (n + 1) / (1.0 - r)  # |g| <= 1
            got = evaluate(s, r)
            assert abs(got - two_gon_value(a, r)) <= tail + 1e-12

    def test_domain(self):
        s = two_gon_series(0.5, 4)
        with pytest.raises(DomainError):
            evaluate(s, 1.0)
        with pytest.raises(DomainError):
            evaluate(s, 1.2j)
        with pytest.raises(DomainError):
            two_gon_value(0.5, 1.0)

    def test_strip_map_value(self):
        assert two_gon_value(0.0, 0.5) == pytest.approx(0.5 * math.log(3.0), rel=1e-15)


class TestStreams:
    def test_stream_matches_tables(self):
        src = product_coeff_stream([0.3, 0.8], chunk_size=7)
        got = np.concatenate(list(src(40)))[:41]
        want = coeff_table_recursive(0.3, 40).values * coeff_table_recursive(0.8, 40).values
        assert np.array_equal(got, want)

    def test_stream_restartable(self):
        src = product_coeff_stream([0.5], chunk_size=16)
        a = np.concatenate(list(src(64)))
        b = np.concatenate(list(src(64)))
        assert np.array_equal(a, b)

    def test_stream_validation(self):
        with pytest.raises(DomainError):
            product_coeff_stream([0.5, 1.5])
        with pytest.raises(ValueError):
            product_coeff_stream([])

    def test_series_stream(self):
        s = TruncatedSeries(np.array([0.0, 1.0, 0.25, 0.5]))
        src = series_coeff_stream(s)
        got = np.concatenate(list(src(3)))
        assert np.array_equal(got, [0.0, 1.0, 0.25, 0.5])
        with pytest.raises(ValueError):
            list(src(9))
        with pytest.raises(ValueError):
            series_coeff_stream(two_gon_series(0.5j, 4))


SHORT = default_schedule(4, 13)


class TestRadialAsymptotic:
    def test_single_power_limit(self):
        est = radial_asymptotic(product_coeff_stream([0.5]), PowerMode(0.5), schedule=SHORT)
        assert est.extrapolated_limit == pytest.approx(math.sqrt(2.0), rel=0.02)

    def test_identity_pair_scaled_equals_r(self):
        est = radial_asymptotic(product_coeff_stream([1.0, 1.0]), PowerMode(1.0), schedule=SHORT)
        for r, v in est.grid:
            assert v == pytest.approx(r, abs=5e-14)

    def test_log_regime(self):
        est = radial_asymptotic(product_coeff_stream([0.5, 0.5]), LogMode(), schedule=SHORT)
        assert est.extrapolated_limit == pytest.approx(2.0 / math.pi, rel=0.05)

    def test_power_overshoot_decays(self):
        # scaling with gamma' > alpha sends the grid values to zero,
        # roughly like (1-r)^(gamma'-alpha) = 2^(-0.2 j) on this schedule
        est = radial_asymptotic(product_coeff_stream([0.5]), PowerMode(0.7), schedule=SHORT)
        vals = [v for _, v in est.grid]
        assert all(x > y for x, y in zip(vals, vals[1:]))
        assert vals[-1] < 0.4 * vals[0]

    def test_power_exact_exponent_stays_positive(self):
        est = radial_asymptotic(product_coeff_stream([0.5]), PowerMode(0.5), schedule=SHORT)
        theory = 2.0 ** (0.5 - 1.0) / 0.5
        assert min(v for _, v in est.grid) >= 0.5 * theory

    def test_schedule_validation(self):
        with pytest.raises(ValueError):
            radial_asymptotic(product_coeff_stream([0.5]), LogMode(), schedule=[(0.5, 100)])
        with pytest.raises(DomainError):
            radial_asymptotic(
                product_coeff_stream([0.5]), LogMode(), schedule=[(0.5, 10), (1.5, 10)]
            )

    def test_estimate_validation(self):
        with pytest.raises(ValueError):
            AsymptoticEstimate(grid=((0.9, 1.0), (0.5, 1.0)), extrapolated_limit=1.0, mode=LogMode())
        with pytest.raises(ValueError):
            AsymptoticEstimate(grid=((0.5, 1.0), (0.9, 1.0)), extrapolated_limit=math.nan, mode=LogMode())

    def test_serialization(self):
        est = radial_asymptotic(product_coeff_stream([1.0, 1.0]), PowerMode(1.0), schedule=SHORT)
        csv = est.to_csv()
        assert csv.splitlines()[0] == "r,scaled_value"
        assert len(csv.strip().splitlines()) == len(SHORT) + 1
        import json

        summary = json.loads(est.summary_json())
        assert summary["mode"] == {"kind": "power", "gamma": 1.0}
        assert summary["limit"] == est.extrapolated_limit


class TestSeriesValidation:
    def test_order_minimum(self):
        with pytest.raises(ValueError):
            TruncatedSeries(np.array([1.0]))

    def test_finite(self):
        with pytest.raises(ValueError):
            TruncatedSeries(np.array([0.0, math.inf]))
