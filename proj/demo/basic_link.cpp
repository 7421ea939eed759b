// SPDX-License-Identifier: Apache-2.0
//
// Minimal usage example: one full-duplex scenario, CPE-only cancellation
// against time-domain ICI suppression at a few estimation orders.

#include <cstdio>

#include "fdpn/fdpn.hpp"

int main() {
    using namespace fdpn;

    ScenarioConfig sc;
    sc.frame = FrameConfig::wlan20mhz();
    sc.p_ici_dbc = -50.0;
    sc.isr_db = 60.0;
    sc.snr_db = 20.0;
    sc.oscillator =
        calibrated_chain_oscillator(OscKind::FreeRunning, sc.p_ici_dbc, sc.frame.n_fft);

    std::printf("free-running oscillator, P_ICI = %.0f dBc, ISR = %.0f dB\n", sc.p_ici_dbc,
                sc.isr_db);
    std::printf("%6s  %10s  %10s  %8s\n", "M", "gain (dB)", "SINR (dB)", "op_est");
    for (int m : {0, 8, 16, 32}) {
        EstimatorConfig est;
        est.domain = EstDomain::TimeDomain;
        est.order_m = m;
        est.use_exact_channel = true;
        const CancellationReport rep = run_trials(sc, est, 100, 42);
        std::printf("%6d  %10.2f  %10.2f  %8llu\n", m, rep.gain_db, rep.sinr_db,
                    static_cast<unsigned long long>(rep.ops_per_symbol.estimation_total()));
    }
    return 0;
}
