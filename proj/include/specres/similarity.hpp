#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "specres/operators.hpp"
#include "specres/resolution.hpp"

namespace specres {

// G = sum_k D_k^* D_k. Positive definite whenever X is a genuine step
// resolution: a kernel vector would be annihilated by every increment,
// contradicting sum D_k = I. Satisfies G D_k = D_k^* G.
inline ComplexMatrix metric_from_resolution(const StepResolution& x) {
    ComplexMatrix g = ComplexMatrix::Zero(x.dim, x.dim);
    for (const auto& d : x.increments) g += d.adjoint() * d;
    g = 0.5 * (g + ComplexMatrix(g.adjoint()));
    HermEigen eig = herm_eig(g);
    double scale = std::max(std::abs(eig.eigenvalues(0)),
                            std::abs(eig.eigenvalues(eig.eigenvalues.size() - 1)));
    if (eig.eigenvalues(0) <= 1e-12 * scale)
        throw NotDefinite("metric_from_resolution: metric not positive definite");
    return g;
}

struct SimilarityModel {
    ComplexMatrix T;
    ComplexMatrix T_inv;
    std::vector<ComplexMatrix> E_increments; // Hermitian orthogonal projections
    std::vector<double> jumps;
    ComplexMatrix G; // Hermitian positive definite metric
};

// Mackey orthogonalization, gauge-fixed to the positive transform
// T = G^{-1/2}: E_k = G^{1/2} D_k G^{-1/2} are orthogonal projections and
// X_k = T (sum_{j<=k} E_j) T^{-1} exactly.
inline SimilarityModel orthogonalize(const StepResolution& x) {
    ComplexMatrix g = metric_from_resolution(x);
    ComplexMatrix g_half = psd_sqrt(g);
    ComplexMatrix g_half_inv = inverse(g_half).inverse;
    SimilarityModel model;
    model.G = g;
    model.T = g_half_inv;
    model.T_inv = g_half;
    model.jumps = x.jumps;
    model.E_increments.reserve(x.increments.size());
    for (const auto& d : x.increments) {
        ComplexMatrix e = g_half * d * g_half_inv;
        e = 0.5 * (e + ComplexMatrix(e.adjoint()));
        model.E_increments.push_back(std::move(e));
    }
    return model;
}

inline bool intertwines(const ComplexMatrix& t, const ComplexMatrix& a,
                        const ComplexMatrix& b, double tol) {
    require_square(a, "intertwines");
    require_same_dim(a, b, "intertwines");
    require_same_dim(t, a, "intertwines");
    double resid = op_norm(ComplexMatrix(b * t - t * a));
    double scale = op_norm(b) * op_norm(t) + op_norm(t) * op_norm(a);
    return resid <= tol * scale;
}

struct SpectraCluster {
    Complex center;
    int mult_a = 0;
    int mult_b = 0;
};

struct SpectraMatch {
    double max_pair_distance = 0.0;
    bool multiplicities_agree = true;
    std::vector<SpectraCluster> clusters;
};

inline SpectraMatch spectra_compare(const ComplexMatrix& a, const ComplexMatrix& b,
                                    double cluster_radius_rel = 1e-7) {
    SpectrumMultiset sa = general_eig(a);
    SpectrumMultiset sb = general_eig(b);
    auto va = sa.sorted();
    auto vb = sb.sorted();
    SpectraMatch match;
    for (std::size_t i = 0; i < va.size() && i < vb.size(); ++i)
        match.max_pair_distance = std::max(match.max_pair_distance,
                                           std::abs(va[i] - vb[i]));
    double scale = 0.0;
    for (const auto& z : va) scale = std::max(scale, std::abs(z));
    for (const auto& z : vb) scale = std::max(scale, std::abs(z));
    double radius = std::max(cluster_radius_rel * scale, kAbsFloor);

    // greedy 1-D clustering over the union, sorted by (re, im)
    std::vector<std::pair<Complex, int>> all; // value, which multiset (0/1)
    for (const auto& z : va) all.push_back({z, 0});
    for (const auto& z : vb) all.push_back({z, 1});
    std::sort(all.begin(), all.end(), [](const auto& p, const auto& q) {
        if (p.first.real() != q.first.real()) return p.first.real() < q.first.real();
        return p.first.imag() < q.first.imag();
    });
    std::size_t i = 0;
    while (i < all.size()) {
        SpectraCluster c;
        c.center = all[i].first;
        std::size_t j = i;
        while (j < all.size() && std::abs(all[j].first - c.center) <= radius) {
            (all[j].second == 0 ? c.mult_a : c.mult_b)++;
            ++j;
        }
        if (c.mult_a != c.mult_b) match.multiplicities_agree = false;
        match.clusters.push_back(c);
        i = j;
    }
    return match;
}

struct RoundTripVerdict {
    double residual = 0.0;      // ||B - T A T^-1||
    double bound = 0.0;
    bool pass = false;
    SpectraMatch spectra;       // sigma(B) vs sigma(A)
    double reorth_spectra_distance = 0.0; // sigma(B) vs re-derived A'
};

// Theorem-style round trip: X = T E T^-1, B = int lambda dX equals
// T (sum lambda_k E_k) T^-1 exactly in algebra; the residual is roundoff.
inline RoundTripVerdict theorem319_roundtrip(const std::vector<ComplexMatrix>& e_increments,
                                             const std::vector<double>& jumps,
                                             const ComplexMatrix& t) {
    StepResolution x = from_similarity(e_increments, jumps, t);
    ComplexMatrix b = build_B(x);
    const Eigen::Index n = t.rows();
    ComplexMatrix a = ComplexMatrix::Zero(n, n);
    for (std::size_t k = 0; k < jumps.size(); ++k) a += jumps[k] * e_increments[k];
    InverseResult ti = inverse(t);
    RoundTripVerdict v;
    v.residual = op_norm(ComplexMatrix(b - t * a * ti.inverse));
    double max_abs_jump = 0.0;
    for (double l : jumps) max_abs_jump = std::max(max_abs_jump, std::abs(l));
    v.bound = tol_scale(1e-10, ti.condition * max_abs_jump);
    v.pass = v.residual <= v.bound;
    v.spectra = spectra_compare(b, a);

    // independent recovery: orthogonalize X and rebuild a self-adjoint A'
    SimilarityModel model = orthogonalize(x);
    ComplexMatrix a2 = ComplexMatrix::Zero(n, n);
    for (std::size_t k = 0; k < model.jumps.size(); ++k)
        a2 += model.jumps[k] * model.E_increments[k];
    v.reorth_spectra_distance = spectra_compare(b, a2).max_pair_distance;
    return v;
}

// B2 = T A^{1/2} T^-1 for a resolution on the positive half line; B2^2 = B.
inline ComplexMatrix pseudo_sqrt(const StepResolution& x) {
    for (double l : x.jumps)
        if (l < -1e-12)
            throw NegativeJump("pseudo_sqrt: negative jump");
    SimilarityModel model = orthogonalize(x);
    ComplexMatrix root = ComplexMatrix::Zero(x.dim, x.dim);
    for (std::size_t k = 0; k < model.jumps.size(); ++k)
        root += std::sqrt(std::max(model.jumps[k], 0.0)) * model.E_increments[k];
    return model.T * root * model.T_inv;
}

struct NaimarkDilation {
    Eigen::Index small_dim = 0;
    Eigen::Index big_dim = 0;              // sum of increment ranks
    ComplexMatrix V;                       // big_dim x n isometry
    std::vector<Eigen::Index> block_offsets;
    std::vector<Eigen::Index> block_sizes;

    // orthogonal projection onto block k of the dilated space
    ComplexMatrix block_projection(std::size_t k) const {
        ComplexMatrix p = ComplexMatrix::Zero(big_dim, big_dim);
        for (Eigen::Index i = 0; i < block_sizes[k]; ++i)
            p(block_offsets[k] + i, block_offsets[k] + i) = 1.0;
        return p;
    }

    // V^* E_k V, which must reproduce the k-th increment
    ComplexMatrix compress(std::size_t k) const {
        ComplexMatrix block = V.block(block_offsets[k], 0, block_sizes[k], small_dim);
        return block.adjoint() * block;
    }
};

// Stack rank-trimmed square-root factors of the PSD increments into an
// isometry V; the block projections dilate the POVM.
inline NaimarkDilation naimark_dilate(const GeneralizedStepResolution& gf) {
    if (!gf.monotone_flag)
        throw NotMonotone("naimark_dilate: family has a non-PSD increment");
    const Eigen::Index n = gf.dim;
    std::vector<ComplexMatrix> factors; // r_k x n rows, factor^* factor = dF_k
    std::vector<Eigen::Index> sizes;
    double scale = 0.0;
    for (const auto& df : gf.increments) scale = std::max(scale, op_norm(df));
    for (const auto& df : gf.increments) {
        HermEigen eig = herm_eig(df);
        double clamp = tol_scale(1e-10, scale);
        std::vector<Eigen::Index> keep;
        for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
            if (eig.eigenvalues(i) < -clamp)
                throw NotMonotone("naimark_dilate: increment eigenvalue < -tol");
            if (eig.eigenvalues(i) > clamp) keep.push_back(i);
        }
        ComplexMatrix f(static_cast<Eigen::Index>(keep.size()), n);
        for (std::size_t r = 0; r < keep.size(); ++r)
            f.row(static_cast<Eigen::Index>(r)) =
                std::sqrt(eig.eigenvalues(keep[r])) *
                eig.eigenvectors.col(keep[r]).adjoint();
        sizes.push_back(f.rows());
        factors.push_back(std::move(f));
    }
    NaimarkDilation d;
    d.small_dim = n;
    d.block_sizes = sizes;
    Eigen::Index off = 0;
    for (Eigen::Index s : sizes) {
        d.block_offsets.push_back(off);
        off += s;
    }
    d.big_dim = off;
    d.V.resize(off, n);
    for (std::size_t k = 0; k < factors.size(); ++k)
        d.V.block(d.block_offsets[k], 0, sizes[k], n) = factors[k];
    return d;
}

} // namespace specres
