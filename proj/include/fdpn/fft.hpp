// SPDX-License-Identifier: Apache-2.0
//
// Discrete Fourier transforms used throughout the library. Three scalings
// appear in the codebase and each has a dedicated entry point:
//   dft / idft           unscaled kernel sums
//   unitary_dft / _idft  1/sqrt(N) each way (OFDM modem, power preserving)
//   spectrum_1n          1/N forward transform (phase-noise spectra, J_0 = 1
//                        for a noiseless unit-modulus signal)
#ifndef FDPN_FFT_HPP
#define FDPN_FFT_HPP

#include <vector>

#include "fdpn/common.hpp"

namespace fdpn {

namespace detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Iterative radix-2 transform, sign = -1 forward / +1 inverse, no scaling.
inline void fft_pow2(std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * kTwoPi / static_cast<double>(len);
        const cplx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = a[i + k];
                const cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

inline std::vector<cplx> dft_naive(const std::vector<cplx>& x, int sign) {
    const std::size_t n = x.size();
    std::vector<cplx> out(n, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t m = 0; m < n; ++m) {
            const double ang = sign * kTwoPi * static_cast<double>(k * m) / static_cast<double>(n);
            out[k] += x[m] * cplx(std::cos(ang), std::sin(ang));
        }
    }
    return out;
}

inline std::vector<cplx> transform(const std::vector<cplx>& x, int sign) {
    if (is_pow2(x.size())) {
        std::vector<cplx> a = x;
        fft_pow2(a, sign);
        return a;
    }
    return dft_naive(x, sign);
}

}  // namespace detail

/// X_k = sum_n x_n e^{-j2pi kn/N}
inline std::vector<cplx> dft(const std::vector<cplx>& x) { return detail::transform(x, -1); }

/// x_n = sum_k X_k e^{+j2pi kn/N}  (unscaled)
inline std::vector<cplx> idft(const std::vector<cplx>& x) { return detail::transform(x, +1); }

inline std::vector<cplx> unitary_dft(const std::vector<cplx>& x) {
    std::vector<cplx> out = dft(x);
    const double s = 1.0 / std::sqrt(static_cast<double>(x.size()));
    for (cplx& v : out) v *= s;
    return out;
}

inline std::vector<cplx> unitary_idft(const std::vector<cplx>& x) {
    std::vector<cplx> out = idft(x);
    const double s = 1.0 / std::sqrt(static_cast<double>(x.size()));
    for (cplx& v : out) v *= s;
    return out;
}

/// Forward transform scaled by 1/N; a constant unit signal maps to a unit DC bin.
inline std::vector<cplx> spectrum_1n(const std::vector<cplx>& x) {
    std::vector<cplx> out = dft(x);
    const double s = 1.0 / static_cast<double>(x.size());
    for (cplx& v : out) v *= s;
    return out;
}

}  // namespace fdpn

#endif
