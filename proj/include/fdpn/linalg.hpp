// SPDX-License-Identifier: Apache-2.0
#ifndef FDPN_LINALG_HPP
#define FDPN_LINALG_HPP

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "fdpn/common.hpp"
#include "fdpn/opcount.hpp"

namespace fdpn {

/// Dense row-major matrix.
template <typename T>
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), d_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t r, std::size_t c) { return d_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return d_[r * cols_ + c]; }

    const std::vector<T>& data() const { return d_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> d_;
};

using CMat = Mat<cplx>;
using RMat = Mat<double>;

class SingularMatrixError : public std::runtime_error {
public:
    explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

/// In-place Cholesky factorization of a Hermitian positive definite matrix;
/// lower triangle of `a` receives L with L L^H = A.
/// Throws SingularMatrixError (with a pivot-based condition estimate) on
/// a non-positive pivot. `macs` counts real multiplies performed.
inline void cholesky_hermitian(CMat& a, std::uint64_t* macs = nullptr) {
    const std::size_t n = a.rows();
    std::uint64_t local = 0;
    double max_piv = 0.0, min_piv = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double diag = a(j, j).real();
        for (std::size_t k = 0; k < j; ++k) {
            diag -= std::norm(a(j, k));
            local += 2;
        }
        if (!(diag > 0.0)) {
            const double cond =
                (min_piv > 0.0 && max_piv > 0.0) ? (max_piv / min_piv) : 0.0;
            throw SingularMatrixError(
                "cholesky: non-positive pivot at row " + std::to_string(j) +
                " (pivot-ratio condition estimate " + std::to_string(cond) + ")");
        }
        const double l = std::sqrt(diag);
        a(j, j) = cplx(l, 0.0);
        max_piv = (j == 0) ? diag : std::max(max_piv, diag);
        min_piv = (j == 0) ? diag : std::min(min_piv, diag);
        for (std::size_t i = j + 1; i < n; ++i) {
            cplx s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) {
                s -= a(i, k) * std::conj(a(j, k));
                local += 4;
            }
            a(i, j) = s / l;
        }
    }
    if (macs) *macs += local;
}

/// Solves A x = b given the Cholesky factor produced by cholesky_hermitian.
inline std::vector<cplx> cholesky_solve(const CMat& l, const std::vector<cplx>& b,
                                        std::uint64_t* macs = nullptr) {
    const std::size_t n = l.rows();
    std::uint64_t local = 0;
    std::vector<cplx> y(b);
    for (std::size_t i = 0; i < n; ++i) {
        cplx s = y[i];
        for (std::size_t k = 0; k < i; ++k) {
            s -= l(i, k) * y[k];
            local += 4;
        }
        y[i] = s / l(i, i).real();
    }
    for (std::size_t ii = n; ii-- > 0;) {
        cplx s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) {
            s -= std::conj(l(k, ii)) * y[k];
            local += 4;
        }
        y[ii] = s / l(ii, ii).real();
    }
    if (macs) *macs += local;
    return y;
}

/// y = A x for a real matrix and complex vector.
inline std::vector<cplx> matvec(const RMat& a, const std::vector<cplx>& x,
                                std::uint64_t* macs = nullptr) {
    require(a.cols() == x.size(), "matvec: dimension mismatch");
    std::vector<cplx> y(a.rows(), cplx(0.0, 0.0));
    std::uint64_t local = 0;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        cplx s(0.0, 0.0);
        for (std::size_t c = 0; c < a.cols(); ++c) {
            s += a(r, c) * x[c];
            local += 2;
        }
        y[r] = s;
    }
    if (macs) *macs += local;
    return y;
}

/// y = A x for complex matrix and vector.
inline std::vector<cplx> matvec(const CMat& a, const std::vector<cplx>& x,
                                std::uint64_t* macs = nullptr) {
    require(a.cols() == x.size(), "matvec: dimension mismatch");
    std::vector<cplx> y(a.rows(), cplx(0.0, 0.0));
    std::uint64_t local = 0;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        cplx s(0.0, 0.0);
        for (std::size_t c = 0; c < a.cols(); ++c) {
            s += a(r, c) * x[c];
            local += 4;
        }
        y[r] = s;
    }
    if (macs) *macs += local;
    return y;
}

/// Eigendecomposition of a real symmetric matrix by cyclic Jacobi
/// rotations: A = Q diag(lambda) Q^T with orthonormal columns in Q.
/// Deterministic; intended for scenario-level precomputation on small
/// matrices.
struct SymmetricEigen {
    RMat q;                      // columns are eigenvectors
    std::vector<double> lambda;  // matching eigenvalues
};

inline SymmetricEigen jacobi_eigen_symmetric(RMat a, int max_sweeps = 100) {
    const std::size_t n = a.rows();
    require(a.cols() == n, "jacobi_eigen_symmetric: matrix must be square");
    RMat q(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) q(i, i) = 1.0;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t r = p + 1; r < n; ++r) off += a(p, r) * a(p, r);
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t r = p + 1; r < n; ++r) {
                if (std::abs(a(p, r)) < 1e-300) continue;
                const double theta = 0.5 * std::atan2(2.0 * a(p, r), a(r, r) - a(p, p));
                const double c = std::cos(theta), s = std::sin(theta);
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akr = a(k, r);
                    a(k, p) = c * akp - s * akr;
                    a(k, r) = s * akp + c * akr;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), ark = a(r, k);
                    a(p, k) = c * apk - s * ark;
                    a(r, k) = s * apk + c * ark;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double qkp = q(k, p), qkr = q(k, r);
                    q(k, p) = c * qkp - s * qkr;
                    q(k, r) = s * qkp + c * qkr;
                }
            }
        }
    }
    SymmetricEigen out;
    out.lambda.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.lambda[i] = a(i, i);
    out.q = std::move(q);
    return out;
}

/// Smallest eigenvalue of a Hermitian matrix via Jacobi sweeps on the
/// real embedding; used by tests and validity checks on small matrices.
inline double min_eigenvalue_hermitian(const CMat& a, int sweeps = 64) {
    const std::size_t n = a.rows();
    // Real symmetric embedding [Re -Im; Im Re]: eigenvalues are those of A,
    // each doubled in multiplicity.
    const std::size_t m = 2 * n;
    RMat s(m, m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            s(i, j) = a(i, j).real();
            s(i + n, j + n) = a(i, j).real();
            s(i, j + n) = -a(i, j).imag();
            s(i + n, j) = a(i, j).imag();
        }
    }
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < m; ++p)
            for (std::size_t q = p + 1; q < m; ++q) off += s(p, q) * s(p, q);
        if (off < 1e-26) break;
        for (std::size_t p = 0; p < m; ++p) {
            for (std::size_t q = p + 1; q < m; ++q) {
                if (std::abs(s(p, q)) < 1e-300) continue;
                const double theta = 0.5 * std::atan2(2.0 * s(p, q), s(q, q) - s(p, p));
                const double c = std::cos(theta), t = std::sin(theta);
                for (std::size_t k = 0; k < m; ++k) {
                    const double skp = s(k, p), skq = s(k, q);
                    s(k, p) = c * skp - t * skq;
                    s(k, q) = t * skp + c * skq;
                }
                for (std::size_t k = 0; k < m; ++k) {
                    const double spk = s(p, k), sqk = s(q, k);
                    s(p, k) = c * spk - t * sqk;
                    s(q, k) = t * spk + c * sqk;
                }
            }
        }
    }
    double mn = s(0, 0);
    for (std::size_t i = 1; i < m; ++i) mn = std::min(mn, s(i, i));
    return mn;
}

}  // namespace fdpn

#endif
