// SPDX-License-Identifier: Apache-2.0
//
// OFDM baseband modem: Gray-coded QAM mapping, pilot and training
// insertion, unitary transform pair and cyclic prefix handling.
//
// Bit-to-symbol map (per axis, Gray coded, b0 = first bit):
//   1 bit  (QPSK axis):   0 -> +1,  1 -> -1
//   2 bits (16/64-QAM):   00 -> +3, 01 -> +1, 11 -> -1, 10 -> -3
//   3 bits (64-QAM):      000 +7, 001 +5, 011 +3, 010 +1,
//                         110 -1, 111 -3, 101 -5, 100 -7
// I bits precede Q bits; constellations are scaled to unit average power.
#ifndef FDPN_OFDM_HPP
#define FDPN_OFDM_HPP

#include <cstdint>
#include <vector>

#include "fdpn/common.hpp"
#include "fdpn/fft.hpp"
#include "fdpn/rng.hpp"

namespace fdpn {

struct FrameConfig {
    int n_fft = 64;
    std::vector<int> pilots = {7, 21, 43, 57};  // {-21,-7,+7,+21} around DC, wrapped
    int n_training = 4;
    int n_data = 10;
    int cp_len = 16;
    int qam_order = 4;

    void validate() const {
        require(n_fft >= 2, "frame: n_fft must be >= 2");
        require(cp_len >= 0, "frame: cp_len must be >= 0");
        require(n_training >= 2, "frame: n_training must be >= 2 for orthogonal training");
        require(n_data >= 1, "frame: n_data must be >= 1");
        require(qam_order == 4 || qam_order == 16 || qam_order == 64,
                "frame: qam_order must be 4, 16 or 64");
        for (std::size_t i = 0; i < pilots.size(); ++i) {
            require(pilots[i] >= 0 && pilots[i] < n_fft, "frame: pilot index out of range");
            for (std::size_t j = i + 1; j < pilots.size(); ++j)
                require(pilots[i] != pilots[j], "frame: pilot indices must be distinct");
        }
    }

    bool is_pilot(int k) const {
        for (int p : pilots)
            if (p == k) return true;
        return false;
    }

    int n_symbols() const { return n_training + n_data; }
    int symbol_len() const { return n_fft + cp_len; }
    int frame_len() const { return n_symbols() * symbol_len(); }
    int bits_per_subcarrier() const { return qam_order == 4 ? 2 : (qam_order == 16 ? 4 : 6); }
    int data_bins() const { return n_fft - static_cast<int>(pilots.size()); }
    int payload_capacity_bits() const { return n_data * data_bins() * bits_per_subcarrier(); }

    static FrameConfig wlan20mhz() { return FrameConfig{}; }
};

struct OfdmFrame {
    FrameConfig cfg;
    std::vector<std::vector<cplx>> freq_symbols;   // (n_training + n_data) x N
    std::vector<cplx> time_samples;                // serialized, CP included
    std::vector<std::vector<cplx>> pilot_values;   // per data symbol, aligned with cfg.pilots
};

namespace detail {

inline double gray_axis_level(std::uint32_t bits, int nbits) {
    // Gray decode, then map code 0..L-1 onto +max .. -max in steps of 2.
    std::uint32_t g = bits;
    for (std::uint32_t shift = 1; shift < static_cast<std::uint32_t>(nbits); shift <<= 1)
        g ^= (bits >> shift);
    const int levels = 1 << nbits;
    return static_cast<double>(levels - 1 - 2 * static_cast<int>(g));
}

inline double qam_scale(int order) {
    switch (order) {
        case 4: return std::sqrt(2.0);
        case 16: return std::sqrt(10.0);
        default: return std::sqrt(42.0);
    }
}

}  // namespace detail

/// Maps bits_per_subcarrier() bits to one constellation point.
inline cplx qam_map(const std::uint8_t* bits, int qam_order) {
    const int per_axis = qam_order == 4 ? 1 : (qam_order == 16 ? 2 : 3);
    std::uint32_t bi = 0, bq = 0;
    for (int i = 0; i < per_axis; ++i) bi = (bi << 1) | (bits[i] & 1u);
    for (int i = 0; i < per_axis; ++i) bq = (bq << 1) | (bits[per_axis + i] & 1u);
    const double s = 1.0 / detail::qam_scale(qam_order);
    return cplx(detail::gray_axis_level(bi, per_axis) * s,
                detail::gray_axis_level(bq, per_axis) * s);
}

/// Known full-band BPSK training symbol, fixed for a given FFT size.
inline std::vector<cplx> training_base(int n_fft) {
    Rng rng(derive_seed(0x0fdbba5e00ULL, static_cast<std::uint64_t>(n_fft)));
    std::vector<cplx> t(static_cast<std::size_t>(n_fft));
    for (cplx& v : t) v = (rng.uniform() < 0.5) ? cplx(1.0, 0.0) : cplx(-1.0, 0.0);
    return t;
}

/// Per-symbol weight making different transmitters' training blocks
/// orthogonal over n_training symbols: DFT-matrix columns,
/// w(role, s) = e^{-j 2 pi role s / n_training}.
inline cplx training_weight(int role, int symbol_idx, int n_training) {
    const double ang = -kTwoPi * static_cast<double>(role) * static_cast<double>(symbol_idx) /
                       static_cast<double>(n_training);
    return cplx(std::cos(ang), std::sin(ang));
}

/// Serializes frequency-domain symbols to time domain, prepending a
/// cyclic prefix to each symbol. Unitary IDFT.
inline std::vector<cplx> modulate(const std::vector<std::vector<cplx>>& freq_symbols, int cp_len) {
    require(cp_len >= 0, "modulate: cp_len must be >= 0");
    std::vector<cplx> out;
    for (const auto& sym : freq_symbols) {
        require(!sym.empty(), "modulate: empty symbol");
        require(cp_len <= static_cast<int>(sym.size()), "modulate: cp longer than symbol");
        const std::vector<cplx> t = unitary_idft(sym);
        out.insert(out.end(), t.end() - cp_len, t.end());
        out.insert(out.end(), t.begin(), t.end());
    }
    return out;
}

/// Splits a serialized sample stream into symbols, drops prefixes and
/// returns the unitary DFT of each symbol.
inline std::vector<std::vector<cplx>> demodulate(const std::vector<cplx>& time_samples,
                                                 const FrameConfig& cfg) {
    const int sym_len = cfg.symbol_len();
    require(static_cast<int>(time_samples.size()) % sym_len == 0,
            "demodulate: sample count is not a whole number of symbols");
    const int n_sym = static_cast<int>(time_samples.size()) / sym_len;
    std::vector<std::vector<cplx>> out;
    out.reserve(static_cast<std::size_t>(n_sym));
    for (int s = 0; s < n_sym; ++s) {
        const auto begin = time_samples.begin() + s * sym_len + cfg.cp_len;
        out.push_back(unitary_dft(std::vector<cplx>(begin, begin + cfg.n_fft)));
    }
    return out;
}

/// CP-stripped time samples of one symbol from the serialized stream.
inline std::vector<cplx> symbol_time_samples(const std::vector<cplx>& time_samples,
                                             const FrameConfig& cfg, int symbol_idx) {
    const int sym_len = cfg.symbol_len();
    const int base = symbol_idx * sym_len + cfg.cp_len;
    require(base + cfg.n_fft <= static_cast<int>(time_samples.size()),
            "symbol_time_samples: symbol index out of range");
    return std::vector<cplx>(time_samples.begin() + base, time_samples.begin() + base + cfg.n_fft);
}

/// Builds a transmit frame: n_training known orthogonal training symbols
/// (role selects the orthogonal sign pattern) followed by n_data QAM data
/// symbols with scrambled BPSK pilots. The seed drives pilot scrambling
/// only; payload bits shorter than capacity are zero padded.
inline OfdmFrame build_frame(const FrameConfig& cfg, const std::vector<std::uint8_t>& payload_bits,
                             std::uint64_t seed, int role = 0) {
    cfg.validate();
    require(static_cast<int>(payload_bits.size()) <= cfg.payload_capacity_bits(),
            "build_frame: payload overflow");

    OfdmFrame frame;
    frame.cfg = cfg;
    const std::vector<cplx> base = training_base(cfg.n_fft);
    for (int s = 0; s < cfg.n_training; ++s) {
        std::vector<cplx> sym = base;
        const cplx w = training_weight(role, s, cfg.n_training);
        for (cplx& v : sym) v *= w;
        frame.freq_symbols.push_back(std::move(sym));
    }

    Rng pilot_rng(derive_seed(seed, 0x91105ULL));
    std::size_t bit_pos = 0;
    const int bps = cfg.bits_per_subcarrier();
    std::vector<std::uint8_t> chunk(static_cast<std::size_t>(bps), 0);
    for (int s = 0; s < cfg.n_data; ++s) {
        std::vector<cplx> sym(static_cast<std::size_t>(cfg.n_fft));
        std::vector<cplx> pv;
        pv.reserve(cfg.pilots.size());
        for (int k = 0; k < cfg.n_fft; ++k) {
            if (cfg.is_pilot(k)) continue;
            for (int b = 0; b < bps; ++b) {
                chunk[static_cast<std::size_t>(b)] =
                    bit_pos < payload_bits.size() ? payload_bits[bit_pos] : 0;
                ++bit_pos;
            }
            sym[static_cast<std::size_t>(k)] = qam_map(chunk.data(), cfg.qam_order);
        }
        for (int p : cfg.pilots) {
            const cplx v = (pilot_rng.uniform() < 0.5) ? cplx(1.0, 0.0) : cplx(-1.0, 0.0);
            sym[static_cast<std::size_t>(p)] = v;
            pv.push_back(v);
        }
        frame.freq_symbols.push_back(std::move(sym));
        frame.pilot_values.push_back(std::move(pv));
    }
    frame.time_samples = modulate(frame.freq_symbols, cfg.cp_len);
    return frame;
}

/// Random payload filling the frame exactly.
inline std::vector<std::uint8_t> random_payload(const FrameConfig& cfg, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(cfg.payload_capacity_bits()));
    for (std::uint8_t& b : bits) b = rng.uniform() < 0.5 ? 0 : 1;
    return bits;
}

}  // namespace fdpn

#endif
