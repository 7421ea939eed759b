// SPDX-License-Identifier: Apache-2.0
//
// Oscillator phase-noise models for full-duplex link simulation.
//
// Two oscillator types are supported. A free-running oscillator has a
// Wiener phase error: phi_n = phi_{n-1} + alpha_n with alpha_n zero-mean
// Gaussian of variance sigma^2 = 4 pi^2 fc^2 C Ts, which gives
//   E[e^{j(phi_m - phi_n)}] = exp(-sigma^2 |m-n| / 2).
// A PLL-based oscillator adds mean-reverting (Ornstein-Uhlenbeck)
// components on top of the drift, giving
//   E[e^{j dphi}] = exp(-(4 pi^2 fc^2 / 2) (C Ts |m-n|
//                   + 2 sum_i (mu_i + v_i)(1 - e^{-lambda_i Ts |m-n|}))).
// Sample paths are generated so that these second-order statistics hold
// exactly: the OU components use their exact AR(1) discretization.
#ifndef FDPN_OSCILLATOR_HPP
#define FDPN_OSCILLATOR_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "fdpn/common.hpp"
#include "fdpn/fft.hpp"
#include "fdpn/linalg.hpp"
#include "fdpn/rng.hpp"

namespace fdpn {

enum class OscKind { FreeRunning, Pll };

/// One PLL loop component: (mu_i + v_i) sets the stationary phase variance
/// contribution, lambda_i the mean-reversion rate in 1/s.
struct PllComponent {
    double mu_s2 = 0.0;
    double v_s2 = 0.0;
    double lambda_hz = 1.0;
};

struct OscillatorModel {
    OscKind kind = OscKind::FreeRunning;
    double carrier_hz = 2.4e9;
    double sample_interval_s = 5.0e-8;
    double c_param = 0.0;  // oscillator quality parameter C, seconds
    std::vector<PllComponent> pll_components;

    void validate() const {
        require(carrier_hz > 0.0, "oscillator: carrier_hz must be > 0");
        require(sample_interval_s > 0.0, "oscillator: sample_interval_s must be > 0");
        require(c_param >= 0.0, "oscillator: c_param must be >= 0");
        for (const PllComponent& c : pll_components) {
            require(c.lambda_hz > 0.0, "oscillator: lambda_i must be > 0");
            require(c.mu_s2 + c.v_s2 >= 0.0, "oscillator: (mu_i + v_i) must be >= 0");
        }
        require(kind == OscKind::Pll || pll_components.empty(),
                "oscillator: free-running model cannot carry PLL components");
    }

    /// Per-sample Wiener increment variance sigma^2 = 4 pi^2 fc^2 C Ts.
    double wiener_increment_var() const {
        return 4.0 * kPi * kPi * carrier_hz * carrier_hz * c_param * sample_interval_s;
    }

    /// Stationary variance of one OU component, 4 pi^2 fc^2 (mu_i + v_i).
    double ou_stationary_var(const PllComponent& c) const {
        return 4.0 * kPi * kPi * carrier_hz * carrier_hz * (c.mu_s2 + c.v_s2);
    }
};

/// Statistics of the combined process of two independent oscillators
/// (e.g. transmit chain + receive chain). The phase errors add, so the
/// exponent parameters add: C and every (mu_i + v_i) accumulate.
inline OscillatorModel combined(const OscillatorModel& a, const OscillatorModel& b) {
    require(a.carrier_hz == b.carrier_hz && a.sample_interval_s == b.sample_interval_s,
            "combined: oscillators must share carrier and sample interval");
    OscillatorModel out = a;
    out.c_param += b.c_param;
    out.pll_components.insert(out.pll_components.end(), b.pll_components.begin(),
                              b.pll_components.end());
    if (b.kind == OscKind::Pll) out.kind = OscKind::Pll;
    return out;
}

struct PhaseNoiseTrace {
    std::vector<double> phases;      // phi_n, radians
    std::vector<cplx> complex_form;  // e^{j phi_n}
};

/// DFT coefficients of a phase-noise signal, 1/N normalized so that a
/// noiseless trace gives J_0 = 1 and sum_k |J_k|^2 = 1.
struct PhaseSpectrum {
    std::vector<cplx> coefficients;

    /// Coefficient at signed spectral offset d with circular indexing.
    cplx at_offset(int d) const {
        const int n = static_cast<int>(coefficients.size());
        int idx = d % n;
        if (idx < 0) idx += n;
        return coefficients[static_cast<std::size_t>(idx)];
    }
};

inline PhaseSpectrum phase_spectrum(const std::vector<cplx>& unit_modulus_signal) {
    return PhaseSpectrum{spectrum_1n(unit_modulus_signal)};
}

namespace detail {

inline PhaseNoiseTrace finish_trace(std::vector<double> phases) {
    PhaseNoiseTrace t;
    t.complex_form.resize(phases.size());
    for (std::size_t i = 0; i < phases.size(); ++i)
        t.complex_form[i] = cplx(std::cos(phases[i]), std::sin(phases[i]));
    t.phases = std::move(phases);
    return t;
}

}  // namespace detail

/// Wiener phase path, phi_0 = 0. Deterministic given the seed.
inline PhaseNoiseTrace generate_free_running(const OscillatorModel& model, std::size_t n_samples,
                                             std::uint64_t seed) {
    model.validate();
    require(model.kind == OscKind::FreeRunning, "generate_free_running: model kind must be FreeRunning");
    require(n_samples >= 1, "generate_free_running: n_samples must be >= 1");
    const double sd = std::sqrt(model.wiener_increment_var());
    Rng rng(seed);
    std::vector<double> phases(n_samples);
    phases[0] = 0.0;
    for (std::size_t i = 1; i < n_samples; ++i) phases[i] = phases[i - 1] + sd * rng.gaussian();
    return detail::finish_trace(std::move(phases));
}

/// PLL phase path: Wiener drift (phi_0 = 0) plus independent stationary
/// OU components sampled by their exact AR(1) recursion
///   u_n = e^{-lambda Ts} u_{n-1} + sqrt(var (1 - e^{-2 lambda Ts})) w_n.
inline PhaseNoiseTrace generate_pll(const OscillatorModel& model, std::size_t n_samples,
                                    std::uint64_t seed) {
    model.validate();
    require(model.kind == OscKind::Pll, "generate_pll: model kind must be Pll");
    require(n_samples >= 1, "generate_pll: n_samples must be >= 1");
    Rng rng(seed);
    std::vector<double> phases(n_samples, 0.0);
    const double sd = std::sqrt(model.wiener_increment_var());
    double w = 0.0;
    for (std::size_t i = 1; i < n_samples; ++i) {
        w += sd * rng.gaussian();
        phases[i] = w;
    }
    for (const PllComponent& c : model.pll_components) {
        const double var = model.ou_stationary_var(c);
        const double a = std::exp(-c.lambda_hz * model.sample_interval_s);
        const double innov_sd = std::sqrt(var * (1.0 - a * a));
        double u = std::sqrt(var) * rng.gaussian();
        phases[0] += u;
        for (std::size_t i = 1; i < n_samples; ++i) {
            u = a * u + innov_sd * rng.gaussian();
            phases[i] += u;
        }
    }
    return detail::finish_trace(std::move(phases));
}

inline PhaseNoiseTrace generate(const OscillatorModel& model, std::size_t n_samples,
                                std::uint64_t seed) {
    return model.kind == OscKind::FreeRunning ? generate_free_running(model, n_samples, seed)
                                              : generate_pll(model, n_samples, seed);
}

/// E[e^{j(phi_m - phi_n)}] at |m - n| = |lag| samples; value in (0, 1].
inline double autocorrelation(const OscillatorModel& model, long lag) {
    const double d = static_cast<double>(lag < 0 ? -lag : lag);
    double expo = model.wiener_increment_var() * d;
    for (const PllComponent& c : model.pll_components) {
        expo += 2.0 * model.ou_stationary_var(c) *
                (1.0 - std::exp(-c.lambda_hz * model.sample_interval_s * d));
    }
    return std::exp(-0.5 * expo);
}

namespace detail {

/// Full N x N spectral correlation matrix
///   R(p,q) = (1/N^2) sum_m sum_n rho(m-n) e^{-j 2pi (pm - qn)/N},
/// computed as (1/N^2) F C F^H with C the Toeplitz phase correlation
/// matrix, using one transform pass per row and per column.
inline CMat rjj_full(const OscillatorModel& model, int n_fft) {
    const std::size_t n = static_cast<std::size_t>(n_fft);
    std::vector<double> rho(n);
    for (std::size_t t = 0; t < n; ++t) rho[t] = autocorrelation(model, static_cast<long>(t));

    // t(m,q) = sum_n C(m,n) e^{+j 2pi qn/N}
    CMat tmp(n, n);
    std::vector<cplx> row(n);
    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t k = 0; k < n; ++k)
            row[k] = cplx(rho[static_cast<std::size_t>(std::abs(static_cast<long>(m) - static_cast<long>(k)))], 0.0);
        std::vector<cplx> tr = idft(row);
        for (std::size_t q = 0; q < n; ++q) tmp(m, q) = tr[q];
    }
    // R(p,q) = (1/N^2) sum_m e^{-j 2pi pm/N} t(m,q)
    CMat out(n, n);
    std::vector<cplx> col(n);
    const double scale = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
    for (std::size_t q = 0; q < n; ++q) {
        for (std::size_t m = 0; m < n; ++m) col[m] = tmp(m, q);
        std::vector<cplx> tc = dft(col);
        for (std::size_t p = 0; p < n; ++p) out(p, q) = tc[p] * scale;
    }
    return out;
}

inline std::size_t wrap_index(int offset, int n_fft) {
    int idx = offset % n_fft;
    if (idx < 0) idx += n_fft;
    return static_cast<std::size_t>(idx);
}

}  // namespace detail

/// Correlation matrix of the phase-noise DFT coefficients at the given
/// signed spectral offsets; Hermitian positive semidefinite.
inline CMat correlation_matrix_freq(const OscillatorModel& model, int n_fft,
                                    const std::vector<int>& indices) {
    model.validate();
    require(n_fft >= 2, "correlation_matrix_freq: n_fft must be >= 2");
    for (int p : indices)
        require(p > -n_fft / 2 && p <= n_fft / 2,
                "correlation_matrix_freq: index outside (-N/2, N/2]");
    const CMat full = detail::rjj_full(model, n_fft);
    CMat out(indices.size(), indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i)
        for (std::size_t j = 0; j < indices.size(); ++j)
            out(i, j) = full(detail::wrap_index(indices[i], n_fft),
                             detail::wrap_index(indices[j], n_fft));
    return out;
}

/// Per-bin phase-noise power R_JJ(p,p), p = 0 .. N-1 (DC first).
inline std::vector<double> ici_profile(const OscillatorModel& model, int n_fft) {
    model.validate();
    require(n_fft >= 2, "ici_profile: n_fft must be >= 2");
    const CMat full = detail::rjj_full(model, n_fft);
    std::vector<double> diag(static_cast<std::size_t>(n_fft));
    for (std::size_t p = 0; p < diag.size(); ++p) diag[p] = full(p, p).real();
    return diag;
}

/// Time-domain correlation matrix R_jj(m,n) = rho(|pos_m - pos_n|);
/// real, symmetric, unit diagonal.
inline RMat correlation_matrix_time(const OscillatorModel& model,
                                    const std::vector<int>& positions) {
    model.validate();
    for (std::size_t i = 0; i < positions.size(); ++i) {
        require(positions[i] >= 0, "correlation_matrix_time: positions must be nonnegative");
        for (std::size_t j = i + 1; j < positions.size(); ++j)
            require(positions[i] != positions[j], "correlation_matrix_time: positions must be distinct");
    }
    RMat out(positions.size(), positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i)
        for (std::size_t j = 0; j < positions.size(); ++j)
            out(i, j) = autocorrelation(model, static_cast<long>(positions[i]) -
                                                   static_cast<long>(positions[j]));
    return out;
}

/// Residual ICI power beyond estimation order M: the sum of R_JJ(p,p)
/// over bins with signed offset |p| > M/2, always excluding DC (the CPE
/// bin). With M = 0 this is the total ICI power.
inline double residual_ici_power(const std::vector<double>& rjj_diag, int order_m) {
    const int n = static_cast<int>(rjj_diag.size());
    require(order_m >= 0 && order_m % 2 == 0, "residual_ici_power: M must be even and >= 0");
    require(order_m < n, "residual_ici_power: M must be < n_fft");
    double acc = 0.0;
    for (int p = 1; p < n; ++p) {
        const int offset = (p <= n / 2) ? p : p - n;
        if (std::abs(offset) > order_m / 2) acc += rjj_diag[static_cast<std::size_t>(p)];
    }
    return acc;
}

/// Total in-band ICI power 1 - R_JJ(0,0), via the O(N) Toeplitz sum
///   R_JJ(0,0) = (1/N^2) (N + 2 sum_t (N - t) rho(t)).
inline double total_ici_power(const OscillatorModel& model, int n_fft) {
    model.validate();
    require(n_fft >= 2, "total_ici_power: n_fft must be >= 2");
    const double n = static_cast<double>(n_fft);
    double acc = n;
    for (int t = 1; t < n_fft; ++t)
        acc += 2.0 * (n - static_cast<double>(t)) * autocorrelation(model, t);
    return 1.0 - acc / (n * n);
}

/// Scales a shape model (C and every mu_i, v_i by a common factor,
/// lambda_i untouched) so its total in-band ICI power hits the target.
/// Monotone bisection; throws with the search bracket if unreachable.
inline OscillatorModel calibrate_to_ici_target(const OscillatorModel& shape, double target_ici_dbc,
                                               int n_fft) {
    shape.validate();
    require(target_ici_dbc < 0.0, "calibrate_to_ici_target: target must be < 0 dBc");
    const double target = db_to_lin(target_ici_dbc);

    const auto scaled = [&shape](double s) {
        OscillatorModel m = shape;
        m.c_param *= s;
        for (PllComponent& c : m.pll_components) {
            c.mu_s2 *= s;
            c.v_s2 *= s;
        }
        return m;
    };

    double nominal = shape.wiener_increment_var();
    for (const PllComponent& c : shape.pll_components) nominal += shape.ou_stationary_var(c);
    require(nominal > 0.0, "calibrate_to_ici_target: shape has no noise to scale");

    double hi = 1.0;
    int expansions = 0;
    while (total_ici_power(scaled(hi), n_fft) < target) {
        hi *= 4.0;
        if (++expansions > 64)
            throw std::runtime_error("calibrate_to_ici_target: target unreachable, bracket [0, " +
                                     std::to_string(hi) + "]");
    }
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double ici = total_ici_power(scaled(mid), n_fft);
        if (ici < target)
            lo = mid;
        else
            hi = mid;
        if (ici > 0.0 && std::abs(lin_to_db(ici) - target_ici_dbc) < 1e-4) {
            lo = hi = mid;
            break;
        }
    }
    return scaled(0.5 * (lo + hi));
}

/// Free-running shape at WLAN-like numerology; C is a placeholder scale,
/// normally refined by calibrate_to_ici_target.
inline OscillatorModel free_running_shape(double carrier_hz = 2.4e9,
                                          double sample_interval_s = 5.0e-8) {
    OscillatorModel m;
    m.kind = OscKind::FreeRunning;
    m.carrier_hz = carrier_hz;
    m.sample_interval_s = sample_interval_s;
    m.c_param = 1.0e-19;
    return m;
}

/// Single-component PLL shape. The loop bandwidth is placed so the phase
/// PSD corner sits near n_fft/8 subcarrier spacings, i.e.
/// lambda Ts = 2 pi (N/8) / N = pi/4, giving the flat-then-rolloff
/// in-band spectrum characteristic of locked oscillators. The residual
/// reference drift is neglected (C = 0) at frame timescales.
inline OscillatorModel pll_default_shape(double carrier_hz = 2.4e9,
                                         double sample_interval_s = 5.0e-8) {
    OscillatorModel m;
    m.kind = OscKind::Pll;
    m.carrier_hz = carrier_hz;
    m.sample_interval_s = sample_interval_s;
    m.c_param = 0.0;
    PllComponent c;
    c.lambda_hz = (kPi / 4.0) / sample_interval_s;
    // Split (mu + v) evenly; only the sum enters the statistics.
    const double mv = 1.0e-21;
    c.mu_s2 = 0.5 * mv;
    c.v_s2 = 0.5 * mv;
    m.pll_components = {c};
    return m;
}

}  // namespace fdpn

#endif
