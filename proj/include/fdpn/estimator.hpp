// SPDX-License-Identifier: Apache-2.0
//
// Channel estimation, common-phase-error estimation and the two MMSE
// phase-noise estimators.
//
// Frequency domain: with B_k = Y_k - X_k H_k J_0 and A_k = X_k H_k, the
// observations at bins [l_1..l_p] obey B = A J + eta where column c of A
// holds A_{l_i - d_c} for signed coefficient offsets d_c in
// [M/2 .. 1, -1 .. -M/2]. The estimate is
//   Jhat = R_JJ A^H (A R_JJ A^H + R_eta)^{-1} B,
// R_eta = diag(soi + residual-ICI + sigma_z^2).
//
// Time domain: the pipeline shares the pilot-based CPE stage with the
// frequency technique, and the MMSE stage estimates only the deviation
// around that anchor, never re-deciding the common phase. This mirrors
// the frequency technique's DC exclusion and is what lets the CPE error
// floor persist through the ICI stage. With a = IDFT(X H) per symbol,
// at M equally spaced positions,
//   B_n = y_n - a_n J0hat = a_n d_n + zeta_n,
//   dhat = R_d a^H (a R_d a^H + R_zeta)^{-1} B,
// R_zeta = (soi + sigma_z^2) I with no residual-ICI term, and the
// deviation prior is the position correlation matrix with the constant
// direction projected out:
//   R_d = P C P,  C(m,n) = rho(|pos_m - pos_n|),  P = I - 11^T/M.
// The estimator extends the average-power simplification of R_eta to
// the nominal signal magnitudes (a_n ~ sqrt(Pavg) e^{j arg a_n}), which
// turns the system matrix into the scenario-constant real symmetric
// matrix Pavg R_d + c I. Its eigendecomposition is precomputed once per
// scenario, so the per-symbol solve is two M x M products:
//   dhat = sqrt(Pavg) Q diag(lambda/(Pavg lambda + c)) Q^T (e^{-j arg a} B),
// genuinely O(M^2); this is the symmetric-structure saving the
// complexity ledger measures. A generic dense solve of the same system exists for
// cross-checking and for irregular position sets. The full estimate is
//   jhat = J0hat + interpolate(dhat).
#ifndef FDPN_ESTIMATOR_HPP
#define FDPN_ESTIMATOR_HPP

#include <algorithm>
#include <cstdint>
#include <vector>

#include "fdpn/common.hpp"
#include "fdpn/linalg.hpp"
#include "fdpn/opcount.hpp"
#include "fdpn/oscillator.hpp"

namespace fdpn {

enum class EstDomain { FrequencyDomain, TimeDomain };
enum class SolverPath { Auto, Dense };

struct EstimatorConfig {
    int order_m = 0;
    EstDomain domain = EstDomain::TimeDomain;
    std::vector<int> observation_indices;  // bins (freq) or sample positions (time)
    double assumed_soi_power = 0.0;
    double noise_variance = 0.0;
    bool omit_cpe = false;         // skip per-symbol CPE estimation (PLL option)
    bool use_exact_channel = true; // receiver-side channel knowledge assumption
    SolverPath solver = SolverPath::Auto;

    void validate() const {
        require(order_m >= 0 && order_m % 2 == 0, "estimator: M must be even and >= 0");
        require(assumed_soi_power >= 0.0 && noise_variance >= 0.0,
                "estimator: noise powers must be >= 0");
    }
};

struct ChannelEstimate {
    enum class Source { Exact, FromTraining };
    std::vector<cplx> h_freq;
    Source source = Source::Exact;
};

/// Estimation-path events worth surfacing without failing a trial.
struct EstimatorDiagnostics {
    int diagonal_loading_events = 0;
    int dropped_time_positions = 0;
};

/// Per-subcarrier least-squares channel estimates from the training block,
/// averaged over training symbols. The two transmitters' training
/// sequences must be orthogonal over the block so each estimate rejects
/// the other signal.
inline std::pair<ChannelEstimate, ChannelEstimate> estimate_channels(
    const std::vector<std::vector<cplx>>& rx_training,
    const std::vector<std::vector<cplx>>& tx_i_training,
    const std::vector<std::vector<cplx>>& tx_s_training) {
    const std::size_t n_sym = rx_training.size();
    require(n_sym >= 2 && tx_i_training.size() == n_sym && tx_s_training.size() == n_sym,
            "estimate_channels: training block mismatch");
    const std::size_t n = rx_training[0].size();

    const auto ls_one = [&](const std::vector<std::vector<cplx>>& ref) {
        ChannelEstimate est;
        est.source = ChannelEstimate::Source::FromTraining;
        est.h_freq.assign(n, cplx(0.0, 0.0));
        for (std::size_t k = 0; k < n; ++k) {
            cplx num(0.0, 0.0);
            double den = 0.0;
            for (std::size_t s = 0; s < n_sym; ++s) {
                num += rx_training[s][k] * std::conj(ref[s][k]);
                den += std::norm(ref[s][k]);
            }
            if (den <= 0.0)
                throw std::domain_error("estimate_channels: zero-valued training bin " +
                                        std::to_string(k));
            est.h_freq[k] = num / den;
        }
        return est;
    };
    return {ls_one(tx_i_training), ls_one(tx_s_training)};
}

inline ChannelEstimate exact_channel_estimate(std::vector<cplx> h_freq) {
    ChannelEstimate est;
    est.h_freq = std::move(h_freq);
    est.source = ChannelEstimate::Source::Exact;
    return est;
}

/// LS common-phase-error estimate over the pilot set:
///   J0 = (1/N_u) sum_{k in U} Y_k / (X_k H_k).
/// Pilots whose reference product vanishes are skipped.
inline cplx estimate_cpe(const std::vector<cplx>& y, const std::vector<cplx>& x_i,
                         const std::vector<cplx>& h_i, const std::vector<int>& pilots,
                         OpCounts* ops = nullptr) {
    require(!pilots.empty(), "estimate_cpe: empty pilot set");
    std::uint64_t macs = 0;
    cplx acc(0.0, 0.0);
    int used = 0;
    for (int k : pilots) {
        const std::size_t idx = static_cast<std::size_t>(k);
        const cplx ref = x_i[idx] * h_i[idx];
        macs += 4;
        if (std::norm(ref) < 1e-24) continue;
        acc += y[idx] * std::conj(ref) / std::norm(ref);
        macs += 6;
        ++used;
    }
    if (used == 0) throw std::domain_error("estimate_cpe: all pilot reference products vanish");
    if (ops) ops->cpe += macs;
    return acc / static_cast<double>(used);
}

/// Signed coefficient offsets in the estimation-order window, DC excluded:
/// [M/2, ..., 1, -1, ..., -M/2].
inline std::vector<int> coefficient_offsets(int order_m) {
    std::vector<int> d;
    d.reserve(static_cast<std::size_t>(order_m));
    for (int k = order_m / 2; k >= 1; --k) d.push_back(k);
    for (int k = -1; k >= -order_m / 2; --k) d.push_back(k);
    return d;
}

/// Default frequency-domain observation set: the p data-bearing bins
/// closest to DC (circular distance), where the phase-noise spectrum
/// carries most power.
inline std::vector<int> default_freq_observations(int n_fft, const std::vector<int>& pilots,
                                                  int p) {
    std::vector<int> bins;
    for (int k = 0; k < n_fft; ++k)
        if (std::find(pilots.begin(), pilots.end(), k) == pilots.end()) bins.push_back(k);
    require(static_cast<int>(bins.size()) >= p,
            "default_freq_observations: not enough data bins");
    std::stable_sort(bins.begin(), bins.end(), [n_fft](int a, int b) {
        const int da = std::min(a, n_fft - a), db = std::min(b, n_fft - b);
        return da < db;
    });
    bins.resize(static_cast<std::size_t>(p));
    std::sort(bins.begin(), bins.end());
    return bins;
}

/// Default time-domain observation set: M positions equally spaced over
/// the N useful samples.
inline std::vector<int> default_time_positions(int n_fft, int order_m) {
    std::vector<int> pos(static_cast<std::size_t>(order_m));
    for (int i = 0; i < order_m; ++i)
        pos[static_cast<std::size_t>(i)] =
            static_cast<int>((static_cast<long>(i) * n_fft) / order_m);
    return pos;
}

/// Scenario-level statistics for the frequency-domain estimator.
struct FreqPnPrior {
    int n_fft = 0;
    int order_m = 0;
    std::vector<int> coeff_offsets;
    CMat r_coeff;                  // M x M correlation of the estimated coefficients
    std::vector<double> rjj_diag;  // full per-bin phase-noise power
    double resid_ici_rel = 0.0;    // residual ICI beyond M, relative to SI power
};

inline FreqPnPrior make_freq_prior(const OscillatorModel& combined_model, int n_fft,
                                   int order_m) {
    require(order_m >= 2 && order_m % 2 == 0 && order_m <= n_fft - 2,
            "make_freq_prior: M must be even, >= 2 and <= n_fft - 2");
    FreqPnPrior prior;
    prior.n_fft = n_fft;
    prior.order_m = order_m;
    prior.coeff_offsets = coefficient_offsets(order_m);
    prior.r_coeff = correlation_matrix_freq(combined_model, n_fft, prior.coeff_offsets);
    prior.rjj_diag = ici_profile(combined_model, n_fft);
    prior.resid_ici_rel = residual_ici_power(prior.rjj_diag, order_m);
    return prior;
}

/// Constants-free deviation prior over a position set: P C P with
/// C(m,n) = rho(|pos_m - pos_n|) and P = I - 11^T/M.
inline RMat projected_deviation_prior(const OscillatorModel& combined_model,
                                      const std::vector<int>& positions) {
    const RMat c = correlation_matrix_time(combined_model, positions);
    const std::size_t m = positions.size();
    std::vector<double> row_mean(m, 0.0);
    double total_mean = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) row_mean[i] += c(i, j);
        row_mean[i] /= static_cast<double>(m);
        total_mean += row_mean[i];
    }
    total_mean /= static_cast<double>(m);
    RMat out(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            out(i, j) = c(i, j) - row_mean[i] - row_mean[j] + total_mean;
    return out;
}

/// Scenario-level statistics for the time-domain estimator: the
/// projected deviation prior and its eigendecomposition.
struct TimePnPrior {
    int n_fft = 0;
    int order_m = 0;
    std::vector<int> positions;
    RMat r_dev;                  // P C P over the positions
    SymmetricEigen eigen;        // r_dev = Q diag(lambda) Q^T
    double dev_power = 0.0;      // trace(r_dev)/M, total deviation power scale
};

inline TimePnPrior make_time_prior(const OscillatorModel& combined_model, int n_fft,
                                   std::vector<int> positions) {
    require(!positions.empty(), "make_time_prior: empty position set");
    for (int p : positions)
        require(p >= 0 && p < n_fft, "make_time_prior: position outside the symbol");
    TimePnPrior prior;
    prior.n_fft = n_fft;
    prior.order_m = static_cast<int>(positions.size());
    prior.positions = std::move(positions);
    prior.r_dev = projected_deviation_prior(combined_model, prior.positions);
    prior.eigen = jacobi_eigen_symmetric(prior.r_dev);
    for (std::size_t i = 0; i < prior.positions.size(); ++i) prior.dev_power += prior.r_dev(i, i);
    prior.dev_power /= static_cast<double>(prior.positions.size());
    return prior;
}

/// Phase-noise spectrum estimate: the M estimated coefficients placed at
/// their offsets, zero elsewhere (DC included; the CPE is handled by its
/// own stage).
struct PnSpectrumEstimate {
    PhaseSpectrum spectrum;
    std::vector<int> offsets;
};

inline PnSpectrumEstimate estimate_pn_freq(const std::vector<cplx>& b_full,
                                           const std::vector<cplx>& a_full,
                                           const FreqPnPrior& prior, const EstimatorConfig& cfg,
                                           OpCounts* ops = nullptr,
                                           EstimatorDiagnostics* diag = nullptr) {
    cfg.validate();
    require(cfg.domain == EstDomain::FrequencyDomain, "estimate_pn_freq: config domain mismatch");
    const int n = prior.n_fft;
    const int m = prior.order_m;
    require(static_cast<int>(b_full.size()) == n && static_cast<int>(a_full.size()) == n,
            "estimate_pn_freq: vector length mismatch");
    const std::vector<int>& obs = cfg.observation_indices;
    const int p = static_cast<int>(obs.size());
    require(p >= m, "estimate_pn_freq: observation set shorter than estimation order");
    for (int k : obs) require(k >= 0 && k < n, "estimate_pn_freq: observation bin out of range");

    std::uint64_t solve_macs = 0;

    // gamma^ICI power uses the average |A|^2 as the self-interference scale.
    double a_mean_power = 0.0;
    for (const cplx& a : a_full) a_mean_power += std::norm(a);
    a_mean_power /= static_cast<double>(n);
    const double eta = cfg.assumed_soi_power + a_mean_power * prior.resid_ici_rel +
                       cfg.noise_variance;

    CMat a_mat(static_cast<std::size_t>(p), static_cast<std::size_t>(m));
    for (int i = 0; i < p; ++i)
        for (int c = 0; c < m; ++c) {
            int idx = (obs[static_cast<std::size_t>(i)] - prior.coeff_offsets[static_cast<std::size_t>(c)]) % n;
            if (idx < 0) idx += n;
            a_mat(static_cast<std::size_t>(i), static_cast<std::size_t>(c)) =
                a_full[static_cast<std::size_t>(idx)];
        }

    // T = A R  (p x m)
    CMat t(static_cast<std::size_t>(p), static_cast<std::size_t>(m));
    for (int i = 0; i < p; ++i)
        for (int c = 0; c < m; ++c) {
            cplx s(0.0, 0.0);
            for (int k = 0; k < m; ++k) {
                s += a_mat(static_cast<std::size_t>(i), static_cast<std::size_t>(k)) *
                     prior.r_coeff(static_cast<std::size_t>(k), static_cast<std::size_t>(c));
                solve_macs += 4;
            }
            t(static_cast<std::size_t>(i), static_cast<std::size_t>(c)) = s;
        }
    // S = T A^H + eta I, Hermitian; upper triangle computed, mirrored.
    CMat s_mat(static_cast<std::size_t>(p), static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i)
        for (int j = i; j < p; ++j) {
            cplx s(0.0, 0.0);
            for (int k = 0; k < m; ++k) {
                s += t(static_cast<std::size_t>(i), static_cast<std::size_t>(k)) *
                     std::conj(a_mat(static_cast<std::size_t>(j), static_cast<std::size_t>(k)));
                solve_macs += 4;
            }
            if (i == j) s += eta;
            s_mat(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = s;
            s_mat(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = std::conj(s);
        }

    std::vector<cplx> b_obs(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i)
        b_obs[static_cast<std::size_t>(i)] = b_full[static_cast<std::size_t>(obs[static_cast<std::size_t>(i)])];

    std::vector<cplx> u;
    try {
        CMat chol = s_mat;
        cholesky_hermitian(chol, &solve_macs);
        u = cholesky_solve(chol, b_obs, &solve_macs);
    } catch (const SingularMatrixError&) {
        double tr = 0.0;
        for (int i = 0; i < p; ++i) tr += s_mat(static_cast<std::size_t>(i), static_cast<std::size_t>(i)).real();
        const double eps = tr > 0.0 ? 1e-10 * tr / static_cast<double>(p) : 1e-12;
        for (int i = 0; i < p; ++i) s_mat(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) += eps;
        if (diag) ++diag->diagonal_loading_events;
        CMat chol = s_mat;
        cholesky_hermitian(chol, &solve_macs);
        u = cholesky_solve(chol, b_obs, &solve_macs);
    }

    // Jhat = R (A^H u)
    std::vector<cplx> ahu(static_cast<std::size_t>(m), cplx(0.0, 0.0));
    for (int c = 0; c < m; ++c) {
        cplx s(0.0, 0.0);
        for (int i = 0; i < p; ++i) {
            s += std::conj(a_mat(static_cast<std::size_t>(i), static_cast<std::size_t>(c))) *
                 u[static_cast<std::size_t>(i)];
            solve_macs += 4;
        }
        ahu[static_cast<std::size_t>(c)] = s;
    }
    std::vector<cplx> coeff = matvec(prior.r_coeff, ahu, &solve_macs);

    PnSpectrumEstimate est;
    est.offsets = prior.coeff_offsets;
    est.spectrum.coefficients.assign(static_cast<std::size_t>(n), cplx(0.0, 0.0));
    for (int c = 0; c < m; ++c) {
        int idx = prior.coeff_offsets[static_cast<std::size_t>(c)] % n;
        if (idx < 0) idx += n;
        est.spectrum.coefficients[static_cast<std::size_t>(idx)] = coeff[static_cast<std::size_t>(c)];
    }
    if (ops) ops->est_solve += solve_macs;
    return est;
}

namespace detail {

/// Generic dense solve of the average-magnitude observation model:
/// S = pavg (Theta R Theta^H) + c I, q = S^{-1} B,
/// dhat = sqrt(pavg) R (Theta^H q). Used for verification and for
/// irregular position sets (after drops).
inline std::vector<cplx> time_mmse_dense(const std::vector<cplx>& b_obs,
                                         const std::vector<cplx>& theta, double pavg,
                                         const RMat& r_dev, double c, std::uint64_t* macs,
                                         EstimatorDiagnostics* diag) {
    const std::size_t m = b_obs.size();
    CMat s(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
            const cplx v = ((pavg * r_dev(i, j)) * theta[i]) * std::conj(theta[j]);
            *macs += 7;
            s(i, j) = v;
            s(j, i) = std::conj(v);
        }
    for (std::size_t i = 0; i < m; ++i) s(i, i) += c;

    std::vector<cplx> q;
    try {
        CMat chol = s;
        cholesky_hermitian(chol, macs);
        q = cholesky_solve(chol, b_obs, macs);
    } catch (const SingularMatrixError&) {
        double tr = 0.0;
        for (std::size_t i = 0; i < m; ++i) tr += s(i, i).real();
        const double eps = tr > 0.0 ? 1e-10 * tr / static_cast<double>(m) : 1e-12;
        for (std::size_t i = 0; i < m; ++i) s(i, i) += eps;
        if (diag) ++diag->diagonal_loading_events;
        CMat chol = s;
        cholesky_hermitian(chol, macs);
        q = cholesky_solve(chol, b_obs, macs);
    }
    const double root = std::sqrt(pavg);
    std::vector<cplx> g(m);
    for (std::size_t i = 0; i < m; ++i) {
        g[i] = (root * std::conj(theta[i])) * q[i];
        *macs += 6;
    }
    return matvec(r_dev, g, macs);
}

/// Symmetric-structure fast path: with the scenario-level
/// eigendecomposition R = Q diag(lambda) Q^T, the whole weighting
/// collapses to dhat = Q diag(sqrt(pavg) lambda / (pavg lambda + c)) Q^T w,
/// two real-matrix products on a complex vector.
inline std::vector<cplx> time_mmse_eigen(const std::vector<cplx>& w, const SymmetricEigen& eig,
                                         double pavg, double c, std::uint64_t* macs) {
    const std::size_t m = w.size();
    const double root = std::sqrt(pavg);
    std::vector<cplx> u(m, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < m; ++k) {  // u = Q^T w
        cplx s(0.0, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            s += eig.q(i, k) * w[i];
            *macs += 2;
        }
        u[k] = s;
    }
    for (std::size_t k = 0; k < m; ++k) {
        const double lam = eig.lambda[k] > 0.0 ? eig.lambda[k] : 0.0;
        const double gain = root * lam / (pavg * lam + c);
        u[k] *= gain;
        *macs += 4;
    }
    std::vector<cplx> d(m, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < m; ++i) {  // d = Q u
        cplx s(0.0, 0.0);
        for (std::size_t k = 0; k < m; ++k) {
            s += eig.q(i, k) * u[k];
            *macs += 2;
        }
        d[i] = s;
    }
    return d;
}

}  // namespace detail

/// MMSE time-domain phase-noise estimate over one OFDM symbol: the CPE
/// anchor plus the estimated deviation at the observation positions,
/// linearly interpolated between them, nearest-estimate hold at the
/// edges. With M = 0 the whole symbol falls back to the CPE value.
///
/// Interpolation MACs are charged to the cancellation phase, matching the
/// complexity ledger's split.
inline std::vector<cplx> estimate_pn_time(const std::vector<cplx>& y_sym,
                                          const std::vector<cplx>& a_sym,
                                          const TimePnPrior& prior, const EstimatorConfig& cfg,
                                          cplx cpe, OpCounts* ops = nullptr,
                                          EstimatorDiagnostics* diag = nullptr) {
    cfg.validate();
    require(cfg.domain == EstDomain::TimeDomain, "estimate_pn_time: config domain mismatch");
    const int n = prior.n_fft;
    require(static_cast<int>(y_sym.size()) == n && static_cast<int>(a_sym.size()) == n,
            "estimate_pn_time: vector length mismatch");
    if (cfg.order_m == 0 || prior.dev_power <= 0.0)
        return std::vector<cplx>(static_cast<std::size_t>(n), cpe);

    // Positions where the nominal signal vanishes carry no information
    // about j_n (observation model B = a d + noise with a = 0); drop them.
    double a_rms2 = 0.0;
    for (const cplx& a : a_sym) a_rms2 += std::norm(a);
    a_rms2 /= static_cast<double>(n);
    std::vector<std::size_t> keep;
    keep.reserve(prior.positions.size());
    for (std::size_t i = 0; i < prior.positions.size(); ++i) {
        const cplx a = a_sym[static_cast<std::size_t>(prior.positions[i])];
        if (std::norm(a) > 1e-18 * a_rms2)
            keep.push_back(i);
        else if (diag)
            ++diag->dropped_time_positions;
    }
    if (keep.empty()) return std::vector<cplx>(static_cast<std::size_t>(n), cpe);

    const bool dropped = keep.size() != prior.positions.size();
    const std::size_t m = keep.size();
    std::vector<int> positions(m);
    std::vector<cplx> b_obs(m), theta(m), w(m);
    std::uint64_t prep_macs = 0, solve_macs = 0;
    double pavg = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        positions[i] = prior.positions[keep[i]];
        const cplx a = a_sym[static_cast<std::size_t>(positions[i])];
        b_obs[i] = y_sym[static_cast<std::size_t>(positions[i])] - a * cpe;
        prep_macs += 4;
        const double p = std::norm(a);
        prep_macs += 2;
        pavg += p;
        theta[i] = a / std::sqrt(p);
        w[i] = std::conj(theta[i]) * b_obs[i];
        prep_macs += 4;
    }
    pavg /= static_cast<double>(m);

    const double c = std::max(cfg.assumed_soi_power + cfg.noise_variance, 1e-15);

    std::vector<cplx> d_obs;
    const bool fast = !dropped && cfg.solver == SolverPath::Auto;
    if (fast) {
        d_obs = detail::time_mmse_eigen(w, prior.eigen, pavg, c, &solve_macs);
    } else if (!dropped) {
        d_obs = detail::time_mmse_dense(b_obs, theta, pavg, prior.r_dev, c, &solve_macs, diag);
    } else {
        RMat r(m, m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) r(i, j) = prior.r_dev(keep[i], keep[j]);
        d_obs = detail::time_mmse_dense(b_obs, theta, pavg, r, c, &solve_macs, diag);
    }

    std::vector<cplx> j_obs(m);
    for (std::size_t i = 0; i < m; ++i) j_obs[i] = cpe + d_obs[i];

    // Linear interpolation to the full symbol; edges hold the nearest
    // estimate rather than extrapolate.
    std::uint64_t interp_macs = 0;
    std::vector<cplx> j_full(static_cast<std::size_t>(n));
    for (int t = 0; t < positions[0]; ++t) j_full[static_cast<std::size_t>(t)] = j_obs[0];
    for (std::size_t seg = 0; seg + 1 < m; ++seg) {
        const int t0 = positions[seg], t1 = positions[seg + 1];
        const cplx diff = j_obs[seg + 1] - j_obs[seg];
        const double inv = 1.0 / static_cast<double>(t1 - t0);
        j_full[static_cast<std::size_t>(t0)] = j_obs[seg];
        for (int t = t0 + 1; t < t1; ++t) {
            j_full[static_cast<std::size_t>(t)] =
                j_obs[seg] + (static_cast<double>(t - t0) * inv) * diff;
            interp_macs += 3;
        }
    }
    for (int t = positions[m - 1]; t < n; ++t) j_full[static_cast<std::size_t>(t)] = j_obs[m - 1];

    if (ops) {
        ops->est_prep += prep_macs;
        ops->est_solve += solve_macs;
        ops->cancel += interp_macs;
    }
    return j_full;
}

}  // namespace fdpn

#endif
