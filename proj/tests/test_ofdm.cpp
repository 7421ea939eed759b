// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "fdpn/ofdm.hpp"
#include "fdpn/rng.hpp"

using namespace fdpn;
using Catch::Approx;

TEST_CASE("qam map: all-zero bits land on the documented zero-label point") {
    const std::uint8_t zeros[6] = {0, 0, 0, 0, 0, 0};
    const cplx q4 = qam_map(zeros, 4);
    REQUIRE(q4.real() == Approx(1.0 / std::sqrt(2.0)));
    REQUIRE(q4.imag() == Approx(1.0 / std::sqrt(2.0)));
    const cplx q16 = qam_map(zeros, 16);
    REQUIRE(q16.real() == Approx(3.0 / std::sqrt(10.0)));
    REQUIRE(q16.imag() == Approx(3.0 / std::sqrt(10.0)));
    const cplx q64 = qam_map(zeros, 64);
    REQUIRE(q64.real() == Approx(7.0 / std::sqrt(42.0)));
    REQUIRE(q64.imag() == Approx(7.0 / std::sqrt(42.0)));
}

TEST_CASE("qam constellations have exactly unit average power") {
    for (int order : {4, 16, 64}) {
        const int bits = order == 4 ? 2 : (order == 16 ? 4 : 6);
        double power = 0.0;
        for (int word = 0; word < order; ++word) {
            std::uint8_t b[6] = {0};
            for (int i = 0; i < bits; ++i) b[i] = static_cast<std::uint8_t>((word >> (bits - 1 - i)) & 1);
            power += std::norm(qam_map(b, order));
        }
        REQUIRE(power / order == Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("frame data symbols average to unit power") {
    FrameConfig cfg = FrameConfig::wlan20mhz();
    cfg.qam_order = 16;
    cfg.n_data = 40;
    double power = 0.0;
    int count = 0;
    for (int trial = 0; trial < 30; ++trial) {
        const OfdmFrame f = build_frame(cfg, random_payload(cfg, derive_seed(5, trial)),
                                        derive_seed(6, trial));
        for (int s = 0; s < cfg.n_data; ++s) {
            for (const cplx& v : f.freq_symbols[static_cast<std::size_t>(cfg.n_training + s)]) {
                power += std::norm(v);
                ++count;
            }
        }
    }
    REQUIRE(power / count == Approx(1.0).epsilon(0.01));
}

TEST_CASE("frames are deterministic given seed and payload") {
    const FrameConfig cfg = FrameConfig::wlan20mhz();
    const std::vector<std::uint8_t> bits = random_payload(cfg, 123);
    const OfdmFrame a = build_frame(cfg, bits, 77, 1);
    const OfdmFrame b = build_frame(cfg, bits, 77, 1);
    REQUIRE(a.time_samples == b.time_samples);
}

TEST_CASE("payload overflow is rejected") {
    const FrameConfig cfg = FrameConfig::wlan20mhz();
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(cfg.payload_capacity_bits()) + 1, 0);
    REQUIRE_THROWS_AS(build_frame(cfg, bits, 0), std::invalid_argument);
}

TEST_CASE("impulse spectrum modulates to a constant time signal") {
    std::vector<cplx> spectrum(16, cplx(0.0, 0.0));
    spectrum[0] = cplx(1.0, 0.0);
    const std::vector<cplx> t = modulate({spectrum}, 0);
    for (const cplx& v : t) REQUIRE(std::abs(v - t[0]) < 1e-12);
}

TEST_CASE("modem round trip and Parseval hold across configurations") {
    for (int n : {8, 64}) {
        for (int cp : {0, n / 4}) {
            FrameConfig cfg;
            cfg.n_fft = n;
            cfg.cp_len = cp;
            cfg.pilots = {1, n / 2};
            cfg.n_training = 2;
            cfg.n_data = 3;
            Rng rng(derive_seed(0xabc, static_cast<std::uint64_t>(n * 131 + cp)));
            std::vector<std::vector<cplx>> symbols;
            for (int s = 0; s < 4; ++s) {
                std::vector<cplx> sym(static_cast<std::size_t>(n));
                for (cplx& v : sym) v = rng.cgaussian();
                symbols.push_back(std::move(sym));
            }
            const std::vector<cplx> time = modulate(symbols, cp);
            const std::vector<std::vector<cplx>> back = demodulate(time, cfg);
            REQUIRE(back.size() == symbols.size());
            double freq_power = 0.0, time_power = 0.0;
            for (std::size_t s = 0; s < symbols.size(); ++s) {
                for (std::size_t k = 0; k < symbols[s].size(); ++k) {
                    REQUIRE(std::abs(back[s][k] - symbols[s][k]) < 1e-10);
                    freq_power += std::norm(symbols[s][k]);
                }
            }
            for (int s = 0; s < 4; ++s) {
                const std::vector<cplx> useful = symbol_time_samples(time, cfg, s);
                for (const cplx& v : useful) time_power += std::norm(v);
            }
            REQUIRE(time_power == Approx(freq_power).margin(1e-10));
        }
    }
}

TEST_CASE("frame time samples round-trip to the stored frequency symbols") {
    const FrameConfig cfg = FrameConfig::wlan20mhz();
    const OfdmFrame f = build_frame(cfg, random_payload(cfg, 9), 10);
    const std::vector<std::vector<cplx>> back = demodulate(f.time_samples, cfg);
    for (std::size_t s = 0; s < f.freq_symbols.size(); ++s)
        for (std::size_t k = 0; k < f.freq_symbols[s].size(); ++k)
            REQUIRE(std::abs(back[s][k] - f.freq_symbols[s][k]) < 1e-10);
}

TEST_CASE("training blocks of different roles are orthogonal") {
    for (int n_training : {2, 3, 4, 6}) {
        cplx dot(0.0, 0.0);
        for (int s = 0; s < n_training; ++s)
            dot += training_weight(0, s, n_training) * std::conj(training_weight(1, s, n_training));
        REQUIRE(std::abs(dot) < 1e-12);
    }
}

TEST_CASE("pilot values are unit-modulus BPSK and recorded per data symbol") {
    const FrameConfig cfg = FrameConfig::wlan20mhz();
    const OfdmFrame f = build_frame(cfg, random_payload(cfg, 1), 2);
    REQUIRE(f.pilot_values.size() == static_cast<std::size_t>(cfg.n_data));
    for (int s = 0; s < cfg.n_data; ++s) {
        for (std::size_t p = 0; p < cfg.pilots.size(); ++p) {
            const cplx v = f.pilot_values[static_cast<std::size_t>(s)][p];
            REQUIRE(std::abs(std::abs(v.real()) - 1.0) < 1e-12);
            REQUIRE(v.imag() == 0.0);
            REQUIRE(f.freq_symbols[static_cast<std::size_t>(cfg.n_training + s)]
                                  [static_cast<std::size_t>(cfg.pilots[p])] == v);
        }
    }
}
