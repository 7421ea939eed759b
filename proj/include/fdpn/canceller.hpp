// SPDX-License-Identifier: Apache-2.0
//
// Subtraction stages of the self-interference canceller. These consume
// estimates produced elsewhere and never re-estimate, so tests can inject
// exact values. All operations are linear in the received signal.
#ifndef FDPN_CANCELLER_HPP
#define FDPN_CANCELLER_HPP

#include <vector>

#include "fdpn/common.hpp"
#include "fdpn/estimator.hpp"
#include "fdpn/opcount.hpp"

namespace fdpn {

/// Residual after all subtraction stages plus per-stage residual powers
/// (useful samples only; cyclic prefixes are excluded upstream).
struct CancellationResult {
    std::vector<cplx> residual;
    double power_after_cpe = 0.0;
    double power_after_ici = 0.0;
};

/// B_k = Y_k - A_k J0 with A_k = X_k^I H_k^I: removes the common phase
/// error rotation of the self-interference.
inline std::vector<cplx> cancel_cpe(const std::vector<cplx>& y, const std::vector<cplx>& a,
                                    cplx j0, OpCounts* ops = nullptr) {
    require(y.size() == a.size(), "cancel_cpe: shape mismatch");
    std::uint64_t macs = 0;
    std::vector<cplx> b(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) {
        b[k] = y[k] - a[k] * j0;
        macs += 4;
    }
    if (ops) ops->cancel += macs;
    return b;
}

/// residual_k = B_k - sum_{d != 0} A_{k-d} Jhat_d (circular indexing);
/// only the placed coefficients of the spectrum estimate contribute, so
/// the reconstruction costs O(N M).
inline std::vector<cplx> cancel_ici_freq(const std::vector<cplx>& b, const std::vector<cplx>& a,
                                         const PnSpectrumEstimate& jhat,
                                         OpCounts* ops = nullptr) {
    require(b.size() == a.size(), "cancel_ici_freq: shape mismatch");
    const int n = static_cast<int>(b.size());
    std::uint64_t macs = 0;
    std::vector<cplx> out(b);
    for (int k = 0; k < n; ++k) {
        cplx ici(0.0, 0.0);
        for (int d : jhat.offsets) {
            int idx = (k - d) % n;
            if (idx < 0) idx += n;
            ici += a[static_cast<std::size_t>(idx)] * jhat.spectrum.at_offset(d);
            macs += 4;
        }
        out[static_cast<std::size_t>(k)] -= ici;
    }
    if (ops) ops->cancel += macs;
    return out;
}

/// residual_n = y_n - a_n jhat_n with a = IDFT(X^I H^I): time-domain
/// reconstruction and subtraction, O(N).
inline std::vector<cplx> cancel_time(const std::vector<cplx>& y, const std::vector<cplx>& a,
                                     const std::vector<cplx>& jhat, OpCounts* ops = nullptr) {
    require(y.size() == a.size() && y.size() == jhat.size(), "cancel_time: shape mismatch");
    std::uint64_t macs = 0;
    std::vector<cplx> out(y.size());
    for (std::size_t n = 0; n < y.size(); ++n) {
        out[n] = y[n] - a[n] * jhat[n];
        macs += 4;
    }
    if (ops) ops->cancel += macs;
    return out;
}

}  // namespace fdpn

#endif
