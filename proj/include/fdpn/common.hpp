// SPDX-License-Identifier: Apache-2.0
#ifndef FDPN_COMMON_HPP
#define FDPN_COMMON_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdpn {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }

inline double lin_to_db(double lin) { return 10.0 * std::log10(lin); }

/// Mean of |v[n]|^2 over the vector (average power per sample).
inline double mean_power(const std::vector<cplx>& v) {
    if (v.empty()) return 0.0;
    double acc = 0.0;
    for (const cplx& s : v) acc += std::norm(s);
    return acc / static_cast<double>(v.size());
}

/// Sum of |v[n]|^2 over the vector.
inline double total_energy(const std::vector<cplx>& v) {
    double acc = 0.0;
    for (const cplx& s : v) acc += std::norm(s);
    return acc;
}

inline double mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / static_cast<double>(v.size());
}

/// Sample standard error of the mean.
inline double std_error(const std::vector<double>& v) {
    const std::size_t n = v.size();
    if (n < 2) return 0.0;
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / (static_cast<double>(n - 1) * static_cast<double>(n)));
}

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

/// Least-squares slope of log(y) against log(x); the fitted power-law exponent.
inline double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    require(x.size() == y.size() && x.size() >= 2, "fit_loglog_slope: need >= 2 points");
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        require(x[i] > 0.0 && y[i] > 0.0, "fit_loglog_slope: positive data required");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    const double mx = mean(lx), my = mean(ly);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace fdpn

#endif
