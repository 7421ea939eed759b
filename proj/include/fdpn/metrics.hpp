// SPDX-License-Identifier: Apache-2.0
//
// Performance metrics and the Monte-Carlo trial harness.
//
// Residual self-interference is isolated exactly: every trial composes
// the received frame twice from identical seeds, once in full and once
// with the signal-of-interest and noise zeroed, and applies the
// subtraction stages with estimates obtained from the full run. Powers
// are aggregated in the linear domain across trials and reported as dB
// of the means; cyclic prefix samples are excluded from all accounting.
#ifndef FDPN_METRICS_HPP
#define FDPN_METRICS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fdpn/canceller.hpp"
#include "fdpn/channel.hpp"
#include "fdpn/common.hpp"
#include "fdpn/estimator.hpp"
#include "fdpn/ofdm.hpp"
#include "fdpn/opcount.hpp"
#include "fdpn/oscillator.hpp"
#include "fdpn/parallel.hpp"
#include "fdpn/rng.hpp"

namespace fdpn {

inline constexpr double kGainCeilingDb = 120.0;

/// Cancellation gain: incoming over residual self-interference power.
/// A vanishing residual reports the configured ceiling and sets the flag.
inline double cancellation_gain(double incoming_si_power, double residual_si_power,
                                bool* ceiling_hit = nullptr) {
    require(incoming_si_power > 0.0, "cancellation_gain: incoming power must be > 0");
    require(residual_si_power >= 0.0, "cancellation_gain: residual power must be >= 0");
    if (ceiling_hit) *ceiling_hit = false;
    if (residual_si_power <= incoming_si_power * 1e-12) {
        if (ceiling_hit) *ceiling_hit = true;
        return kGainCeilingDb;
    }
    return lin_to_db(incoming_si_power / residual_si_power);
}

/// Post-cancellation signal-to-interference-plus-noise ratio.
inline double sinr(double residual_si_power, double soi_power, double noise_power) {
    require(residual_si_power >= 0.0 && soi_power >= 0.0 && noise_power >= 0.0,
            "sinr: powers must be >= 0");
    require(residual_si_power + noise_power > 0.0, "sinr: zero denominator");
    return lin_to_db(soi_power / (residual_si_power + noise_power));
}

struct CancellationReport {
    // Scenario operating point (ISR measured from the composed parts,
    // P_ICI from the combined-oscillator statistics).
    double isr_db = 0.0;
    double p_ici_dbc = 0.0;
    double snr_db = 0.0;

    double gain_db = 0.0;            // incoming SI over residual SI, dB of mean powers
    double gain_after_cpe_db = 0.0;  // same after the CPE stage only
    double gain_stderr_db = 0.0;     // propagated from the residual-power standard error
    bool gain_ceiling_hit = false;

    double sinr_db = 0.0;
    double sinr_half_duplex_db = 0.0;  // = SNR, the no-self-interference bound

    OpCounts ops_per_symbol;  // deterministic per-data-symbol MAC counts
    int n_trials = 0;
    double residual_si_power = 0.0;  // mean, linear, SI reference = 1
    EstimatorDiagnostics diagnostics;
};

namespace detail {

/// Real multiplies spent by the radix-2 unitary transform of length n
/// (twiddle updates included), or by the naive fallback.
inline std::uint64_t fft_macs(int n) {
    if ((n & (n - 1)) == 0) {
        int log2n = 0;
        for (int v = n; v > 1; v >>= 1) ++log2n;
        return static_cast<std::uint64_t>(4 * n * log2n + 2 * n);
    }
    return static_cast<std::uint64_t>(4) * static_cast<std::uint64_t>(n) *
           static_cast<std::uint64_t>(n);
}

struct TrialResult {
    double incoming_si = 0.0;
    double after_cpe_si = 0.0;
    double residual_si = 0.0;
    double soi_power = 0.0;
    OpCounts ops;
    EstimatorDiagnostics diag;
};

struct TrialContext {
    const ScenarioConfig& scenario;
    const EstimatorConfig& est;
    const FreqPnPrior* freq_prior;
    const TimePnPrior* time_prior;
    double total_ici_rel = 0.0;  // combined-process ICI power, SI-relative
};

inline TrialResult run_single_trial(const TrialContext& ctx, std::uint64_t trial_seed) {
    const ScenarioConfig& sc = ctx.scenario;
    const FrameConfig& fc = sc.frame;
    TrialResult res;

    const OfdmFrame frame_i =
        build_frame(fc, random_payload(fc, derive_seed(trial_seed, 0)), derive_seed(trial_seed, 2), 0);
    const OfdmFrame frame_s =
        build_frame(fc, random_payload(fc, derive_seed(trial_seed, 1)), derive_seed(trial_seed, 3), 1);

    const ChannelRealization h_i =
        sc.flat_si_channel ? flat_channel(ChannelKind::SelfInterference)
                           : realize_channel(ChannelKind::SelfInterference, sc.si_k_db, sc.si_taps,
                                             derive_seed(trial_seed, 4));
    const ChannelRealization h_s = realize_channel(
        ChannelKind::SignalOfInterest, sc.soi_k_db, sc.soi_taps, derive_seed(trial_seed, 5));

    const std::size_t len = static_cast<std::size_t>(fc.frame_len());
    const PhaseNoiseTrace pn_i = generate(sc.oscillator, len, derive_seed(trial_seed, 6));
    const PhaseNoiseTrace pn_s = generate(sc.oscillator, len, derive_seed(trial_seed, 7));
    const PhaseNoiseTrace pn_r = generate(sc.oscillator, len, derive_seed(trial_seed, 8));

    const ComposedParts parts =
        compose_parts(frame_i, frame_s, h_i, h_s, pn_i, pn_s, pn_r, sc, derive_seed(trial_seed, 9));
    const std::vector<cplx> y_full = parts.sum();
    const std::vector<cplx>& y_si = parts.si;

    // Receiver-side channel knowledge.
    ChannelEstimate hat_i, hat_s;
    if (ctx.est.use_exact_channel) {
        hat_i = exact_channel_estimate(h_i.freq_response(fc.n_fft));
        std::vector<cplx> hs = h_s.freq_response(fc.n_fft);
        const double g_s = std::sqrt(sc.soi_power());
        for (cplx& v : hs) v *= g_s;
        hat_s = exact_channel_estimate(std::move(hs));
    } else {
        const std::vector<std::vector<cplx>> rx_all = demodulate(y_full, fc);
        std::vector<std::vector<cplx>> rx_train(rx_all.begin(), rx_all.begin() + fc.n_training);
        std::vector<std::vector<cplx>> tx_i_train(frame_i.freq_symbols.begin(),
                                                  frame_i.freq_symbols.begin() + fc.n_training);
        std::vector<std::vector<cplx>> tx_s_train(frame_s.freq_symbols.begin(),
                                                  frame_s.freq_symbols.begin() + fc.n_training);
        auto pair = estimate_channels(rx_train, tx_i_train, tx_s_train);
        hat_i = std::move(pair.first);
        hat_s = std::move(pair.second);
    }

    EstimatorConfig est = ctx.est;
    est.assumed_soi_power = mean_power(hat_s.h_freq);
    est.noise_variance = sc.noise_power();
    if (!est.use_exact_channel) {
        // Training-based channel estimates carry phase-noise ICI and
        // receiver noise averaged over the training block; the resulting
        // per-bin reconstruction error acts as additional white noise on
        // the MMSE observations and the receiver can model it.
        est.noise_variance += (mean_power(hat_i.h_freq) * ctx.total_ici_rel + sc.noise_power()) /
                              static_cast<double>(fc.n_training);
    }

    const cplx one(1.0, 0.0);
    for (int s = 0; s < fc.n_data; ++s) {
        const int row = fc.n_training + s;
        const std::vector<cplx>& x_i = frame_i.freq_symbols[static_cast<std::size_t>(row)];
        std::vector<cplx> a_freq(static_cast<std::size_t>(fc.n_fft));
        for (int k = 0; k < fc.n_fft; ++k)
            a_freq[static_cast<std::size_t>(k)] =
                x_i[static_cast<std::size_t>(k)] * hat_i.h_freq[static_cast<std::size_t>(k)];

        const std::vector<cplx> y_t = symbol_time_samples(y_full, fc, row);
        const std::vector<cplx> y_si_t = symbol_time_samples(y_si, fc, row);
        res.incoming_si += mean_power(y_si_t);
        {
            const std::vector<cplx> soi_t = symbol_time_samples(parts.soi, fc, row);
            res.soi_power += mean_power(soi_t);
        }

        CancellationResult si_stages;
        if (est.domain == EstDomain::FrequencyDomain) {
            const std::vector<cplx> y_f = unitary_dft(y_t);
            const std::vector<cplx> y_si_f = unitary_dft(y_si_t);
            const cplx j0 = est.omit_cpe
                                ? one
                                : estimate_cpe(y_f, x_i, hat_i.h_freq, fc.pilots, &res.ops);
            const std::vector<cplx> b = cancel_cpe(y_f, a_freq, j0, &res.ops);
            std::vector<cplx> b_si = cancel_cpe(y_si_f, a_freq, j0);
            si_stages.power_after_cpe = mean_power(b_si);
            if (est.order_m > 0) {
                const PnSpectrumEstimate jhat =
                    estimate_pn_freq(b, a_freq, *ctx.freq_prior, est, &res.ops, &res.diag);
                si_stages.residual = cancel_ici_freq(b_si, a_freq, jhat);
                cancel_ici_freq(b, a_freq, jhat, &res.ops);
            } else {
                si_stages.residual = std::move(b_si);
            }
        } else {
            const cplx j0 = est.omit_cpe
                                ? one
                                : estimate_cpe(unitary_dft(y_t), x_i, hat_i.h_freq, fc.pilots,
                                               &res.ops);
            std::vector<cplx> a_time = unitary_idft(a_freq);
            res.ops.est_prep += fft_macs(fc.n_fft);
            std::vector<cplx> b_si_t =
                cancel_time(y_si_t, a_time, std::vector<cplx>(y_t.size(), j0));
            si_stages.power_after_cpe = mean_power(b_si_t);
            if (est.order_m > 0) {
                const std::vector<cplx> jhat =
                    estimate_pn_time(y_t, a_time, *ctx.time_prior, est, j0, &res.ops, &res.diag);
                cancel_time(y_t, a_time, jhat, &res.ops);
                si_stages.residual = cancel_time(y_si_t, a_time, jhat);
            } else {
                // CPE-only fallback: jhat_n = J0 everywhere.
                cancel_time(y_t, a_time, std::vector<cplx>(y_t.size(), j0), &res.ops);
                si_stages.residual = std::move(b_si_t);
            }
        }
        si_stages.power_after_ici = mean_power(si_stages.residual);
        res.after_cpe_si += si_stages.power_after_cpe;
        res.residual_si += si_stages.power_after_ici;
    }

    const double inv = 1.0 / static_cast<double>(fc.n_data);
    res.incoming_si *= inv;
    res.after_cpe_si *= inv;
    res.residual_si *= inv;
    res.soi_power *= inv;
    return res;
}

}  // namespace detail

/// Runs n_trials independent frame simulations and aggregates the
/// cancellation metrics. Fully deterministic given the seed, regardless
/// of worker count.
inline CancellationReport run_trials(const ScenarioConfig& scenario, const EstimatorConfig& est_in,
                                     int n_trials, std::uint64_t seed) {
    scenario.validate();
    est_in.validate();
    require(n_trials >= 1, "run_trials: n_trials must be >= 1");

    EstimatorConfig est = est_in;
    const int n = scenario.frame.n_fft;
    const OscillatorModel comb = combined(scenario.oscillator, scenario.oscillator);

    FreqPnPrior freq_prior;
    TimePnPrior time_prior;
    if (est.order_m > 0) {
        if (est.domain == EstDomain::FrequencyDomain) {
            if (est.observation_indices.empty())
                est.observation_indices =
                    default_freq_observations(n, scenario.frame.pilots, est.order_m);
            freq_prior = make_freq_prior(comb, n, est.order_m);
        } else {
            if (est.observation_indices.empty())
                est.observation_indices = default_time_positions(n, est.order_m);
            require(static_cast<int>(est.observation_indices.size()) == est.order_m,
                    "run_trials: time-domain estimation needs exactly M positions");
            time_prior = make_time_prior(comb, n, est.observation_indices);
        }
    }

    detail::TrialContext ctx{scenario, est, &freq_prior, &time_prior, total_ici_power(comb, n)};
    std::vector<detail::TrialResult> results(static_cast<std::size_t>(n_trials));
    std::vector<std::string> failures(static_cast<std::size_t>(n_trials));
    parallel_for(n_trials, [&](int t) {
        try {
            results[static_cast<std::size_t>(t)] =
                detail::run_single_trial(ctx, derive_seed(seed, static_cast<std::uint64_t>(t)));
        } catch (const std::exception& e) {
            throw std::runtime_error("trial " + std::to_string(t) + ": " + e.what());
        }
    });

    CancellationReport rep;
    rep.n_trials = n_trials;
    rep.snr_db = scenario.snr_db;
    rep.sinr_half_duplex_db = scenario.snr_db;
    rep.p_ici_dbc = lin_to_db(total_ici_power(comb, n));

    double mean_in = 0.0, mean_cpe = 0.0, mean_res = 0.0, mean_soi = 0.0;
    std::vector<double> res_per_trial(static_cast<std::size_t>(n_trials));
    for (int t = 0; t < n_trials; ++t) {
        const detail::TrialResult& r = results[static_cast<std::size_t>(t)];
        mean_in += r.incoming_si;
        mean_cpe += r.after_cpe_si;
        mean_res += r.residual_si;
        mean_soi += r.soi_power;
        res_per_trial[static_cast<std::size_t>(t)] = r.residual_si;
        rep.ops_per_symbol += r.ops;
        rep.diagnostics.diagonal_loading_events += r.diag.diagonal_loading_events;
        rep.diagnostics.dropped_time_positions += r.diag.dropped_time_positions;
    }
    const double inv = 1.0 / static_cast<double>(n_trials);
    mean_in *= inv;
    mean_cpe *= inv;
    mean_res *= inv;
    mean_soi *= inv;

    const std::uint64_t sym_count =
        static_cast<std::uint64_t>(n_trials) * static_cast<std::uint64_t>(scenario.frame.n_data);
    rep.ops_per_symbol.cpe /= sym_count;
    rep.ops_per_symbol.est_prep /= sym_count;
    rep.ops_per_symbol.est_solve /= sym_count;
    rep.ops_per_symbol.cancel /= sym_count;

    rep.residual_si_power = mean_res;
    rep.gain_db = cancellation_gain(mean_in, mean_res, &rep.gain_ceiling_hit);
    rep.gain_after_cpe_db = cancellation_gain(mean_in, mean_cpe);
    const double se = std_error(res_per_trial);
    rep.gain_stderr_db = mean_res > 0.0 ? (10.0 / std::log(10.0)) * (se / mean_res) : 0.0;
    rep.isr_db = mean_soi > 0.0 ? lin_to_db(mean_in / mean_soi) : 0.0;
    rep.sinr_db = sinr(mean_res, scenario.soi_power(), scenario.noise_power());
    return rep;
}

}  // namespace fdpn

#endif
