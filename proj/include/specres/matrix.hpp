#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cmath>

#include "specres/errors.hpp"

namespace specres {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Tolerances are relative to problem scale with this absolute floor.
inline constexpr double kAbsFloor = 1e-14;

inline double tol_scale(double rel, double scale) {
    double t = rel * scale;
    return t < kAbsFloor ? kAbsFloor : t;
}

// Inner product: linear in the first argument, conjugate-linear in the
// second, so <xi, eta> = eta^* xi in matrix form.
inline Complex inner(const ComplexVector& xi, const ComplexVector& eta) {
    if (xi.size() != eta.size())
        throw DimensionMismatch("inner: vector sizes differ");
    return (eta.adjoint() * xi)(0, 0);
}

inline bool all_finite(const ComplexMatrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
                return false;
    return true;
}

inline void require_square(const ComplexMatrix& m, const char* what) {
    if (m.rows() != m.cols())
        throw DimensionMismatch(std::string(what) + ": matrix not square");
}

inline void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b,
                             const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch(std::string(what) + ": dimension mismatch");
}

} // namespace specres
