#pragma once

#include <algorithm>
#include <random>
#include <utility>
#include <vector>

#include "specres/matrix.hpp"

namespace specres {

struct HermEigen {
    Eigen::VectorXd eigenvalues;   // ascending
    ComplexMatrix eigenvectors;    // unitary, columns
};

struct SpectrumMultiset {
    std::vector<Complex> eigenvalues; // with algebraic multiplicities

    // Sorted by (real, imag) for comparison and reporting.
    std::vector<Complex> sorted() const {
        auto s = eigenvalues;
        std::sort(s.begin(), s.end(), [](Complex a, Complex b) {
            if (a.real() != b.real()) return a.real() < b.real();
            return a.imag() < b.imag();
        });
        return s;
    }
};

inline ComplexMatrix adjoint(const ComplexMatrix& m) { return m.adjoint(); }

// Largest singular value via the Gram matrix; adequate at these sizes and
// much cheaper than a full SVD inside the axiom loops.
inline double op_norm(const ComplexMatrix& m) {
    if (m.size() == 0) return 0.0;
    ComplexMatrix gram = m.adjoint() * m;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram, Eigen::EigenvaluesOnly);
    double top = es.eigenvalues().tail(1)(0);
    return top > 0.0 ? std::sqrt(top) : 0.0;
}

inline double frob_norm(const ComplexMatrix& m) { return m.norm(); }

inline HermEigen herm_eig(const ComplexMatrix& h) {
    require_square(h, "herm_eig");
    double scale = op_norm(h);
    ComplexMatrix skew = h - h.adjoint();
    if (op_norm(skew) > tol_scale(1e-10, scale))
        throw NotHermitian("herm_eig: input not Hermitian within tolerance");
    ComplexMatrix sym = 0.5 * (h + ComplexMatrix(h.adjoint()));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym);
    if (es.info() != Eigen::Success)
        throw NoConvergence("herm_eig: eigensolver failed");
    return HermEigen{es.eigenvalues(), es.eigenvectors()};
}

inline SpectrumMultiset general_eig(const ComplexMatrix& m) {
    require_square(m, "general_eig");
    Eigen::ComplexEigenSolver<ComplexMatrix> es(m, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw NoConvergence("general_eig: QR iteration did not converge");
    SpectrumMultiset out;
    out.eigenvalues.assign(es.eigenvalues().data(),
                           es.eigenvalues().data() + es.eigenvalues().size());
    return out;
}

// Principal square root of a Hermitian PSD matrix; eigenvalues within
// -1e-10*||H|| of zero are clamped to zero.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& h) {
    HermEigen eig = herm_eig(h);
    double scale = 0.0;
    for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i)
        scale = std::max(scale, std::abs(eig.eigenvalues(i)));
    double clamp = tol_scale(1e-10, scale);
    // eigenvalues at the roundoff floor are snapped to zero before the root:
    // sqrt would otherwise amplify O(eps) noise to O(sqrt(eps)) in the result
    double floor = tol_scale(1e-13, scale);
    Eigen::VectorXd roots(eig.eigenvalues.size());
    for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
        double w = eig.eigenvalues(i);
        if (w < -clamp)
            throw NotPSD("psd_sqrt: negative eigenvalue beyond tolerance");
        roots(i) = w > floor ? std::sqrt(w) : 0.0;
    }
    return eig.eigenvectors * roots.asDiagonal() *
           eig.eigenvectors.adjoint();
}

struct InverseResult {
    ComplexMatrix inverse;
    double condition; // ~ ||M|| * ||M^-1||
};

inline InverseResult inverse(const ComplexMatrix& m) {
    require_square(m, "inverse");
    Eigen::JacobiSVD<ComplexMatrix> svd(
        m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    double smax = s(0);
    double smin = s(s.size() - 1);
    if (smin < 1e-14 * smax || smin == 0.0)
        throw Singular("inverse: matrix singular to working precision");
    Eigen::VectorXd sinv = s.cwiseInverse();
    ComplexMatrix inv = svd.matrixV() * sinv.asDiagonal() *
                        svd.matrixU().adjoint();
    return InverseResult{std::move(inv), smax / smin};
}

inline double condition_estimate(const ComplexMatrix& m) {
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    const auto& s = svd.singularValues();
    double smin = s(s.size() - 1);
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return s(0) / smin;
}

namespace detail {

// Haar unitary: QR of a complex Gaussian matrix with the R diagonal phases
// pushed into Q.
inline ComplexMatrix haar_unitary(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix z(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            z(i, j) = Complex(g(rng), g(rng));
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ();
    ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j) {
        Complex d = r(j, j);
        Complex phase = (std::abs(d) > 0.0) ? d / std::abs(d) : Complex(1, 0);
        q.col(j) *= phase;
    }
    return q;
}

} // namespace detail

// U1 * diag(s) * U2^* with Haar-random factors and singular values
// log-uniform in [1, kappa]; deterministic in the seed.
inline ComplexMatrix random_invertible(std::uint64_t seed, Eigen::Index n,
                                       double kappa) {
    if (kappa < 1.0)
        throw Error("random_invertible: kappa must be >= 1");
    std::mt19937_64 rng(seed);
    ComplexMatrix u1 = detail::haar_unitary(rng, n);
    ComplexMatrix u2 = detail::haar_unitary(rng, n);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::VectorXd s(n);
    double logk = std::log(kappa);
    for (Eigen::Index i = 0; i < n; ++i) s(i) = std::exp(u(rng) * logk);
    if (n >= 2) {
        // pin the extremes so the condition number is exactly kappa
        s(0) = kappa;
        s(n - 1) = 1.0;
    }
    return u1 * s.asDiagonal() * u2.adjoint();
}

} // namespace specres
