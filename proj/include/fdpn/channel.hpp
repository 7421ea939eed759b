// SPDX-License-Identifier: Apache-2.0
//
// Self-interference and signal-of-interest channels, and composition of
// the received baseband signal
//   y_n = [(x^I e^{j phi^tI} * h^I) + (x^S e^{j phi^tS} * h^S)] e^{j phi^r} + z_n.
//
// Channels use an exponential power-delay profile (RMS spread one sample,
// i.e. 50 ns at 20 MHz) with a Rician first tap, standing in for the
// indoor TGn-D profile; the quantities the results depend on are the
// Rician factors and the ISR / P_ICI operating point, not the exact
// cluster tables. Powers are normalized so E[sum |h_l|^2] = 1 and the
// received self-interference power is the unit reference; ISR and SNR
// set the signal-of-interest and noise scales.
#ifndef FDPN_CHANNEL_HPP
#define FDPN_CHANNEL_HPP

#include <cstdint>
#include <vector>

#include "fdpn/common.hpp"
#include "fdpn/ofdm.hpp"
#include "fdpn/oscillator.hpp"
#include "fdpn/rng.hpp"

namespace fdpn {

enum class ChannelKind { SelfInterference, SignalOfInterest };

struct ChannelRealization {
    std::vector<cplx> taps;
    double rician_k_db = 0.0;
    ChannelKind kind = ChannelKind::SelfInterference;

    /// H_k = sum_l h_l e^{-j 2 pi k l / N}
    std::vector<cplx> freq_response(int n_fft) const {
        std::vector<cplx> padded(static_cast<std::size_t>(n_fft), cplx(0.0, 0.0));
        for (std::size_t l = 0; l < taps.size(); ++l) padded[l] = taps[l];
        return dft(padded);
    }
};

/// Draws a tapped-delay-line realization. The scattered field follows an
/// exponential profile q_l with unit RMS spread; tap 0 adds a
/// uniform-phase line-of-sight component whose power is K times tap 0's
/// scattered power. Total expected energy is exactly 1, with the
/// line-of-sight share K q_0 / (1 + K q_0); at K = 30 dB the channel is
/// line-of-sight dominated and close to frequency flat.
inline ChannelRealization realize_channel(ChannelKind kind, double k_factor_db, int n_taps,
                                          std::uint64_t seed) {
    require(n_taps >= 1, "realize_channel: n_taps must be >= 1");
    Rng rng(seed);

    std::vector<double> profile(static_cast<std::size_t>(n_taps));
    double total = 0.0;
    for (int l = 0; l < n_taps; ++l) {
        profile[static_cast<std::size_t>(l)] = std::exp(-static_cast<double>(l));
        total += profile[static_cast<std::size_t>(l)];
    }
    for (double& p : profile) p /= total;

    const double k_lin = db_to_lin(k_factor_db);
    const double scatter_budget = 1.0 / (1.0 + k_lin * profile[0]);
    const double los_power = k_lin * profile[0] * scatter_budget;

    ChannelRealization ch;
    ch.kind = kind;
    ch.rician_k_db = k_factor_db;
    ch.taps.resize(static_cast<std::size_t>(n_taps));

    const double los_mag = std::sqrt(los_power);
    const double los_phase = kTwoPi * rng.uniform();
    const cplx scatter0 = rng.cgaussian() * std::sqrt(profile[0] * scatter_budget);
    ch.taps[0] = cplx(los_mag * std::cos(los_phase), los_mag * std::sin(los_phase)) + scatter0;
    for (int l = 1; l < n_taps; ++l)
        ch.taps[static_cast<std::size_t>(l)] =
            rng.cgaussian() * std::sqrt(profile[static_cast<std::size_t>(l)] * scatter_budget);
    return ch;
}

inline ChannelRealization flat_channel(ChannelKind kind) {
    ChannelRealization ch;
    ch.kind = kind;
    ch.rician_k_db = 300.0;
    ch.taps = {cplx(1.0, 0.0)};
    return ch;
}

struct ScenarioConfig {
    double isr_db = 60.0;
    double snr_db = 20.0;
    double p_ici_dbc = -50.0;
    double passive_suppression_db = 60.0;
    double tx_power_dbm = 20.0;
    double noise_floor_dbm = -90.0;
    OscillatorModel oscillator;  // per-chain model (identical hardware on all chains)
    FrameConfig frame;
    bool flat_si_channel = false;
    // When set, isr_db is derived from the absolute power budget:
    // received SI at tx_power - passive_suppression, SOI at noise_floor + SNR.
    bool absolute_powers = false;
    int si_taps = 8;
    int soi_taps = 8;
    double si_k_db = 30.0;
    double soi_k_db = 3.0;

    void validate() const {
        require(std::isfinite(isr_db) && std::isfinite(snr_db) && std::isfinite(p_ici_dbc),
                "scenario: dB fields must be finite");
        require(passive_suppression_db >= 0.0, "scenario: passive_suppression_db must be >= 0");
        require(si_taps >= 1 && soi_taps >= 1, "scenario: tap counts must be >= 1");
        frame.validate();
        oscillator.validate();
    }

    // Linear powers relative to the received self-interference power (= 1).
    double soi_power() const { return db_to_lin(-isr_db); }
    double noise_power() const { return soi_power() / db_to_lin(snr_db); }

    /// dBm value of the unit reference (self-interference at the receiver).
    double si_power_dbm() const { return tx_power_dbm - passive_suppression_db; }

    /// Applies the absolute power budget to the ISR field.
    void derive_isr_if_absolute() {
        if (absolute_powers) isr_db = si_power_dbm() - (noise_floor_dbm + snr_db);
    }
};

/// The three additive pieces of one received frame, before summation.
/// Keeping them separate lets the harness isolate residual
/// self-interference exactly and lets tests check power bookkeeping.
struct ComposedParts {
    std::vector<cplx> si;     // (x^I e^{j phi^tI} * h^I) e^{j phi^r}
    std::vector<cplx> soi;    // (x^S e^{j phi^tS} * h^S) e^{j phi^r}, ISR-scaled
    std::vector<cplx> noise;  // z

    std::vector<cplx> sum() const {
        std::vector<cplx> y(si.size());
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = si[i] + soi[i] + noise[i];
        return y;
    }
};

namespace detail {

/// Linear convolution truncated to the input length.
inline std::vector<cplx> conv_trunc(const std::vector<cplx>& x, const std::vector<cplx>& h) {
    std::vector<cplx> y(x.size(), cplx(0.0, 0.0));
    for (std::size_t n = 0; n < x.size(); ++n) {
        const std::size_t lmax = std::min(h.size() - 1, n);
        cplx s(0.0, 0.0);
        for (std::size_t l = 0; l <= lmax; ++l) s += h[l] * x[n - l];
        y[n] = s;
    }
    return y;
}

}  // namespace detail

inline ComposedParts compose_parts(const OfdmFrame& x_i, const OfdmFrame& x_s,
                                   const ChannelRealization& h_i, const ChannelRealization& h_s,
                                   const PhaseNoiseTrace& pn_tx_i, const PhaseNoiseTrace& pn_tx_s,
                                   const PhaseNoiseTrace& pn_rx, const ScenarioConfig& scenario,
                                   std::uint64_t noise_seed) {
    scenario.validate();
    const std::size_t len = x_i.time_samples.size();
    require(x_s.time_samples.size() == len, "compose: frame length mismatch");
    require(pn_tx_i.complex_form.size() >= len && pn_tx_s.complex_form.size() >= len &&
                pn_rx.complex_form.size() >= len,
            "compose: phase-noise traces shorter than the frame");
    require(static_cast<int>(h_i.taps.size()) <= scenario.frame.cp_len + 1 &&
                static_cast<int>(h_s.taps.size()) <= scenario.frame.cp_len + 1,
            "compose: channel impulse response longer than the cyclic prefix");

    std::vector<cplx> si_in(len), soi_in(len);
    for (std::size_t n = 0; n < len; ++n) {
        si_in[n] = x_i.time_samples[n] * pn_tx_i.complex_form[n];
        soi_in[n] = x_s.time_samples[n] * pn_tx_s.complex_form[n];
    }
    ComposedParts parts;
    parts.si = detail::conv_trunc(si_in, h_i.taps);
    parts.soi = detail::conv_trunc(soi_in, h_s.taps);

    const double g_s = std::sqrt(scenario.soi_power());
    const double z_sd = std::sqrt(scenario.noise_power());
    Rng rng(noise_seed);
    parts.noise.resize(len);
    for (std::size_t n = 0; n < len; ++n) {
        parts.si[n] *= pn_rx.complex_form[n];
        parts.soi[n] *= g_s * pn_rx.complex_form[n];
        parts.noise[n] = z_sd * rng.cgaussian();
    }
    return parts;
}

/// Received baseband samples per the full signal model.
inline std::vector<cplx> compose_received(const OfdmFrame& x_i, const OfdmFrame& x_s,
                                          const ChannelRealization& h_i,
                                          const ChannelRealization& h_s,
                                          const PhaseNoiseTrace& pn_tx_i,
                                          const PhaseNoiseTrace& pn_tx_s,
                                          const PhaseNoiseTrace& pn_rx,
                                          const ScenarioConfig& scenario,
                                          std::uint64_t noise_seed) {
    return compose_parts(x_i, x_s, h_i, h_s, pn_tx_i, pn_tx_s, pn_rx, scenario, noise_seed).sum();
}

}  // namespace fdpn

#endif
