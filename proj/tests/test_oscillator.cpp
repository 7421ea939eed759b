// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "fdpn/oscillator.hpp"
#include "fdpn/rng.hpp"
#include "fdpn/sweep.hpp"

using namespace fdpn;
using Catch::Approx;

namespace {

OscillatorModel wiener_model(double sigma2) {
    // sigma^2 = 4 pi^2 fc^2 C Ts; solve for C at the default numerology.
    OscillatorModel m = free_running_shape();
    m.c_param = sigma2 / (4.0 * kPi * kPi * m.carrier_hz * m.carrier_hz * m.sample_interval_s);
    return m;
}

}  // namespace

TEST_CASE("free-running generator: zero quality parameter gives a silent oscillator") {
    OscillatorModel m = free_running_shape();
    m.c_param = 0.0;
    const PhaseNoiseTrace t = generate_free_running(m, 64, 1);
    for (double p : t.phases) REQUIRE(p == 0.0);
    for (const cplx& j : t.complex_form) REQUIRE(std::abs(j) == Approx(1.0).margin(1e-12));
}

TEST_CASE("free-running generator matches the closed-form autocorrelation") {
    const OscillatorModel m = wiener_model(0.02);
    const int lag = 10, n_paths = 100000;
    cplx acc(0.0, 0.0);
    for (int p = 0; p < n_paths; ++p) {
        const PhaseNoiseTrace t = generate_free_running(m, lag + 1, derive_seed(77, p));
        const double dphi = t.phases[lag] - t.phases[0];
        acc += cplx(std::cos(dphi), std::sin(dphi));
    }
    acc /= static_cast<double>(n_paths);
    REQUIRE(std::abs(acc - cplx(std::exp(-0.1), 0.0)) < 0.003);
    REQUIRE(autocorrelation(m, lag) == Approx(std::exp(-0.1)).epsilon(1e-12));
}

TEST_CASE("generators are deterministic in the seed") {
    const OscillatorModel m = wiener_model(0.01);
    const PhaseNoiseTrace a = generate_free_running(m, 256, 99);
    const PhaseNoiseTrace b = generate_free_running(m, 256, 99);
    REQUIRE(a.phases == b.phases);

    OscillatorModel pll = pll_default_shape();
    pll.pll_components[0].mu_s2 = 1e-22;
    const PhaseNoiseTrace c = generate_pll(pll, 256, 7);
    const PhaseNoiseTrace d = generate_pll(pll, 256, 7);
    REQUIRE(c.phases == d.phases);
}

TEST_CASE("generator kind mismatches are rejected") {
    REQUIRE_THROWS_AS(generate_pll(free_running_shape(), 8, 0), std::invalid_argument);
    REQUIRE_THROWS_AS(generate_free_running(pll_default_shape(), 8, 0), std::invalid_argument);
    OscillatorModel bad = pll_default_shape();
    bad.pll_components[0].mu_s2 = -1.0;
    bad.pll_components[0].v_s2 = 0.0;
    REQUIRE_THROWS_AS(generate_pll(bad, 8, 0), std::invalid_argument);
}

TEST_CASE("pll generator: zero parameters give a silent oscillator") {
    OscillatorModel m = pll_default_shape();
    m.c_param = 0.0;
    m.pll_components[0].mu_s2 = 0.0;
    m.pll_components[0].v_s2 = 0.0;
    const PhaseNoiseTrace t = generate_pll(m, 64, 5);
    for (double p : t.phases) REQUIRE(p == 0.0);
}

TEST_CASE("pll generator matches Ornstein-Uhlenbeck closed form at several lags") {
    OscillatorModel m = pll_default_shape();
    m.c_param = 2e-21;
    m.pll_components[0].mu_s2 = 2.5e-22;
    m.pll_components[0].v_s2 = 2.5e-22;
    const int n = 65, n_paths = 100000;
    std::vector<cplx> acc(3, cplx(0.0, 0.0));
    const int lags[3] = {1, 8, 64};
    for (int p = 0; p < n_paths; ++p) {
        const PhaseNoiseTrace t = generate_pll(m, n, derive_seed(13, p));
        for (int i = 0; i < 3; ++i) {
            const double dphi = t.phases[lags[i]] - t.phases[0];
            acc[i] += cplx(std::cos(dphi), std::sin(dphi));
        }
    }
    for (int i = 0; i < 3; ++i) {
        acc[i] /= static_cast<double>(n_paths);
        const double expected = autocorrelation(m, lags[i]);
        INFO("lag " << lags[i]);
        REQUIRE(std::abs(acc[i] - cplx(expected, 0.0)) < 0.005 * expected);
    }
}

TEST_CASE("pll autocorrelation approaches the memoryless limit at large lambda") {
    OscillatorModel m = pll_default_shape();
    m.c_param = 1e-21;
    m.pll_components[0].mu_s2 = 5e-23;
    m.pll_components[0].v_s2 = 5e-23;
    m.pll_components[0].lambda_hz = 1e12;  // lambda Ts >> 1
    const double fc2 = m.carrier_hz * m.carrier_hz;
    const double limit = std::exp(-0.5 * 4.0 * kPi * kPi * fc2 *
                                  (m.c_param * m.sample_interval_s + 2.0 * 1e-22));
    REQUIRE(autocorrelation(m, 1) == Approx(limit).epsilon(1e-9));
}

TEST_CASE("autocorrelation basics: unity at zero lag, symmetric, decreasing") {
    const OscillatorModel m = wiener_model(0.02);
    REQUIRE(autocorrelation(m, 0) == 1.0);
    REQUIRE(autocorrelation(m, -17) == autocorrelation(m, 17));
    double prev = 1.0;
    for (int lag = 1; lag <= 64; ++lag) {
        const double r = autocorrelation(m, lag);
        REQUIRE(r > 0.0);
        REQUIRE(r < prev);
        prev = r;
    }
}

TEST_CASE("spectral correlation matrix of a noiseless oscillator is a DC delta") {
    OscillatorModel m = free_running_shape();
    m.c_param = 0.0;
    std::vector<int> idx = {0, 1, 2, -3, 4};
    const CMat r = correlation_matrix_freq(m, 8, idx);
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) {
            const double expected = (idx[i] == 0 && idx[j] == 0) ? 1.0 : 0.0;
            REQUIRE(std::abs(r(i, j) - cplx(expected, 0.0)) < 1e-12);
        }
}

TEST_CASE("Parseval: per-bin phase-noise powers sum to one") {
    const OscillatorModel m = wiener_model(1e-3);
    for (int n : {8, 64}) {
        const std::vector<double> diag = ici_profile(m, n);
        double sum = 0.0;
        for (double v : diag) sum += v;
        REQUIRE(sum == Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("spectral diagonal matches a Monte-Carlo DFT coefficient covariance") {
    const int n = 8, n_paths = 100000;
    const OscillatorModel m = wiener_model(0.01);
    const std::vector<double> diag = ici_profile(m, n);
    std::vector<double> mc(n, 0.0);
    for (int p = 0; p < n_paths; ++p) {
        const PhaseNoiseTrace t = generate_free_running(m, n, derive_seed(3, p));
        const PhaseSpectrum spec = phase_spectrum(t.complex_form);
        for (int k = 0; k < n; ++k) mc[k] += std::norm(spec.coefficients[k]);
    }
    for (int k = 0; k < n; ++k) {
        mc[k] /= n_paths;
        INFO("bin " << k);
        REQUIRE(mc[k] == Approx(diag[k]).epsilon(0.01));
    }
}

TEST_CASE("phase spectrum of a unit-modulus trace satisfies Parseval") {
    const OscillatorModel m = wiener_model(0.05);
    const PhaseNoiseTrace t = generate_free_running(m, 64, 11);
    const PhaseSpectrum spec = phase_spectrum(t.complex_form);
    double sum = 0.0;
    for (const cplx& c : spec.coefficients) sum += std::norm(c);
    REQUIRE(sum == Approx(1.0).margin(1e-9));
}

TEST_CASE("time correlation matrix: unit diagonal, known off-diagonal, all-ones limit") {
    const OscillatorModel m = wiener_model(0.02);
    const RMat r = correlation_matrix_time(m, {0, 10});
    REQUIRE(r(0, 0) == 1.0);
    REQUIRE(r(1, 1) == 1.0);
    REQUIRE(r(0, 1) == Approx(std::exp(-0.1)).epsilon(1e-12));
    REQUIRE(r(0, 1) == r(1, 0));

    OscillatorModel silent = free_running_shape();
    silent.c_param = 0.0;
    const RMat ones = correlation_matrix_time(silent, {0, 3, 9});
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) REQUIRE(ones(i, j) == 1.0);
}

TEST_CASE("spectral correlation matrices are Hermitian positive semidefinite") {
    const OscillatorModel m = wiener_model(2e-4);
    std::vector<int> idx;
    for (int d = -8; d <= 8; ++d) idx.push_back(d);
    const CMat r = correlation_matrix_freq(m, 64, idx);
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j)
            REQUIRE(std::abs(r(i, j) - std::conj(r(j, i))) < 1e-15);
    REQUIRE(min_eigenvalue_hermitian(r) >= -1e-10);
}

TEST_CASE("time correlation matrix is positive semidefinite with unit diagonal") {
    OscillatorModel m = pll_default_shape();
    m.pll_components[0].mu_s2 = 1e-22;
    m.pll_components[0].v_s2 = 1e-22;
    std::vector<int> pos;
    for (int i = 0; i < 16; ++i) pos.push_back(4 * i);
    const RMat r = correlation_matrix_time(m, pos);
    CMat rc(pos.size(), pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i) {
        REQUIRE(r(i, i) == 1.0);
        for (std::size_t j = 0; j < pos.size(); ++j) rc(i, j) = r(i, j);
    }
    REQUIRE(min_eigenvalue_hermitian(rc) >= -1e-10);
}

TEST_CASE("residual ICI power: full order empties the sum, zero order totals it") {
    const OscillatorModel m = wiener_model(5e-4);
    // A window covering every non-DC bin leaves nothing (odd size, so the
    // offsets +/- M/2 reach all bins).
    const std::vector<double> diag9 = ici_profile(m, 9);
    REQUIRE(residual_ici_power(diag9, 8) == 0.0);
    const std::vector<double> diag = ici_profile(m, 64);
    REQUIRE(residual_ici_power(diag, 0) == Approx(1.0 - diag[0]).epsilon(1e-9));
    double prev = residual_ici_power(diag, 0);
    for (int order = 2; order <= 62; order += 2) {
        const double r = residual_ici_power(diag, order);
        REQUIRE(r <= prev + 1e-15);
        prev = r;
    }
}

TEST_CASE("calibration hits the requested total ICI power") {
    for (double target : {-50.0, -40.0}) {
        const OscillatorModel m = calibrate_to_ici_target(free_running_shape(), target, 64);
        const double got = lin_to_db(total_ici_power(m, 64));
        REQUIRE(got == Approx(target).margin(0.05));
    }
    const OscillatorModel pll =
        calibrate_to_ici_target(pll_default_shape(), -40.0, 64);
    REQUIRE(lin_to_db(total_ici_power(pll, 64)) == Approx(-40.0).margin(0.05));

    // Lower bracket sanity: zero scale means zero ICI power.
    OscillatorModel zero = free_running_shape();
    zero.c_param = 0.0;
    REQUIRE(total_ici_power(zero, 64) == Approx(0.0).margin(1e-12));
    REQUIRE_THROWS(calibrate_to_ici_target(zero, -50.0, 64));
}

TEST_CASE("combined chain calibration: two independent chains hit the target together") {
    for (OscKind kind : {OscKind::FreeRunning, OscKind::Pll}) {
        const OscillatorModel chain = calibrated_chain_oscillator(kind, -50.0, 64);
        const double got = lin_to_db(total_ici_power(combined(chain, chain), 64));
        REQUIRE(got == Approx(-50.0).margin(0.05));
    }
}

TEST_CASE("pll spectrum is flatter than free-running at equal total ICI power") {
    const OscillatorModel fr = calibrate_to_ici_target(free_running_shape(), -40.0, 64);
    const OscillatorModel pll = calibrate_to_ici_target(pll_default_shape(), -40.0, 64);
    const std::vector<double> dfr = ici_profile(fr, 64);
    const std::vector<double> dpll = ici_profile(pll, 64);
    // Free-running dominates near DC, PLL dominates far out; the crossover exists.
    REQUIRE(dfr[1] > dpll[1]);
    REQUIRE(dpll[16] > dfr[16]);
    bool crossed = false;
    for (int p = 1; p <= 32; ++p)
        if (dpll[p] > dfr[p]) {
            crossed = true;
            break;
        }
    REQUIRE(crossed);
}

TEST_CASE("combined model doubles the exponent parameters") {
    const OscillatorModel chain = calibrated_chain_oscillator(OscKind::FreeRunning, -50.0, 64);
    const OscillatorModel comb = combined(chain, chain);
    REQUIRE(comb.c_param == Approx(2.0 * chain.c_param));
    // Autocorrelation of the sum of independent processes is the product.
    REQUIRE(autocorrelation(comb, 13) ==
            Approx(autocorrelation(chain, 13) * autocorrelation(chain, 13)).epsilon(1e-12));
}
