#pragma once

#include <vector>

#include "specres/resolution.hpp"

namespace specres {

// B = sum_k lambda_k D_k, the Stieltjes integral of lambda against the
// step family (exact finite sum).
inline ComplexMatrix build_B(const StepResolution& x) {
    ComplexMatrix b = ComplexMatrix::Zero(x.dim, x.dim);
    for (std::size_t k = 0; k < x.jump_count(); ++k)
        b += x.jumps[k] * x.increments[k];
    return b;
}

// T_X = sum_k lambda_k dF_k, built from differences of Gram matrices of
// the partial sums (never from X(Delta)^* X(Delta) — the two differ for
// non-orthogonal increments).
inline ComplexMatrix build_TX(const StepResolution& x) {
    GeneralizedStepResolution gf = F_family(x);
    ComplexMatrix t = ComplexMatrix::Zero(x.dim, x.dim);
    for (std::size_t k = 0; k < gf.jumps.size(); ++k)
        t += gf.jumps[k] * gf.increments[k];
    return t;
}

inline ComplexMatrix build_SX(const StepResolution& x) {
    GeneralizedStepResolution gp = phi_family(x);
    ComplexMatrix s = ComplexMatrix::Zero(x.dim, x.dim);
    for (std::size_t k = 0; k < gp.jumps.size(); ++k)
        s += gp.jumps[k] * gp.increments[k];
    return s;
}

struct OperatorTriple {
    ComplexMatrix B;
    ComplexMatrix T_X;  // Hermitian
    ComplexMatrix S_X;  // Hermitian
};

inline OperatorTriple build_triple(const StepResolution& x) {
    return OperatorTriple{build_B(x), build_TX(x), build_SX(x)};
}

struct QuadraticMoment {
    double value = 0.0;     // sum_k lambda_k^2 <dF_k xi, xi>; can be negative
    bool monotone = false;  // whether the F increments were all PSD
};

inline QuadraticMoment quadratic_moment(const StepResolution& x,
                                        const ComplexVector& xi) {
    GeneralizedStepResolution gf = F_family(x);
    QuadraticMoment out;
    out.monotone = gf.monotone_flag;
    for (std::size_t k = 0; k < gf.jumps.size(); ++k)
        out.value += gf.jumps[k] * gf.jumps[k] *
                     inner(ComplexVector(gf.increments[k] * xi), xi).real();
    return out;
}

// ||B xi||^2 - int lambda^2 d<F xi, xi>; zero for self-adjoint families,
// generally nonzero. Reported signed.
inline double norm_identity_gap(const StepResolution& x, const ComplexVector& xi) {
    ComplexVector bxi = build_B(x) * xi;
    return bxi.squaredNorm() - quadratic_moment(x, xi).value;
}

// Independent algebraic route to the same gap: expand ||B xi||^2 over the
// increments and subtract the F-moment written through partial-sum norms.
inline double norm_identity_gap_oracle(const StepResolution& x,
                                       const ComplexVector& xi) {
    const std::size_t m = x.jump_count();
    std::vector<ComplexVector> dxi(m);
    for (std::size_t k = 0; k < m; ++k) dxi[k] = x.increments[k] * xi;
    double cross = 0.0;
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k)
            if (j != k)
                cross += x.jumps[j] * x.jumps[k] * inner(dxi[k], dxi[j]).real();
    double correction = 0.0;
    double prev = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        double cur = ComplexVector(x.partials[k] * xi).squaredNorm();
        correction += x.jumps[k] * x.jumps[k] * (cur - prev - dxi[k].squaredNorm());
        prev = cur;
    }
    return cross - correction;
}

// sum_k ||D_k eta||^2 / ||eta||^2; <= 1 for orthogonal increments (Bessel)
// but can exceed 1 otherwise. Diagnostic only.
inline double frame_defect(const StepResolution& x, const ComplexVector& eta) {
    double nrm = eta.squaredNorm();
    if (nrm == 0.0) throw ZeroVector("frame_defect: eta = 0");
    double sum = 0.0;
    for (const auto& d : x.increments) sum += ComplexVector(d * eta).squaredNorm();
    return sum / nrm;
}

struct TripleSummary {
    double dist_B_TX = 0.0;
    double dist_B_SX = 0.0;
    double dist_TX_SX = 0.0;
    double comm_B_TX = 0.0;
    double comm_B_SX = 0.0;
    std::vector<Complex> spec_B;
    std::vector<Complex> spec_TX;
    std::vector<Complex> spec_SX;
    double gamma = 0.0;
    double kappa = 0.0;  // condition of the recovered similarity transform
};

inline TripleSummary triple_summary(const StepResolution& x) {
    OperatorTriple t = build_triple(x);
    TripleSummary s;
    s.dist_B_TX = op_norm(ComplexMatrix(t.B - t.T_X));
    s.dist_B_SX = op_norm(ComplexMatrix(t.B - t.S_X));
    s.dist_TX_SX = op_norm(ComplexMatrix(t.T_X - t.S_X));
    s.comm_B_TX = op_norm(ComplexMatrix(t.B * t.T_X - t.T_X * t.B));
    s.comm_B_SX = op_norm(ComplexMatrix(t.B * t.S_X - t.S_X * t.B));
    s.spec_B = general_eig(t.B).sorted();
    s.spec_TX = general_eig(t.T_X).sorted();
    s.spec_SX = general_eig(t.S_X).sorted();
    s.gamma = gamma(x);
    // condition of the recovered transform T = G^{-1/2}, G = sum D_k^* D_k
    ComplexMatrix g = ComplexMatrix::Zero(x.dim, x.dim);
    for (const auto& d : x.increments) g += d.adjoint() * d;
    s.kappa = std::sqrt(condition_estimate(g));
    return s;
}

} // namespace specres
