#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "specres/linalg.hpp"
#include "specres/matrix.hpp"

namespace specres {

// A resolution of the identity with finitely many jumps: strictly
// increasing jump points and idempotent, pairwise-annihilating increments
// summing to the identity. Partial sums X_k are cached; X(lambda) is the
// right-continuous step function through them.
struct StepResolution {
    Eigen::Index dim = 0;
    std::vector<double> jumps;               // strictly increasing
    std::vector<ComplexMatrix> increments;   // D_1 ... D_m
    std::vector<ComplexMatrix> partials;     // X_k = sum_{j<=k} D_j

    std::size_t jump_count() const { return jumps.size(); }
};

struct BiorthogonalSystem {
    Eigen::Index dim = 0;
    ComplexMatrix basis;  // columns phi_k
    ComplexMatrix dual;   // columns psi_k, dual = (basis^-1)^*
    std::vector<Complex> alphas;

    ComplexVector phi(std::size_t k) const { return basis.col(static_cast<Eigen::Index>(k)); }
    ComplexVector psi(std::size_t k) const { return dual.col(static_cast<Eigen::Index>(k)); }

    // rank-one skew projection psi_k phi_k^*
    ComplexMatrix R(std::size_t k) const { return psi(k) * phi(k).adjoint(); }
    ComplexMatrix L(std::size_t k) const { return R(k).adjoint(); }

    ComplexMatrix S() const {
        ComplexMatrix s = ComplexMatrix::Zero(dim, dim);
        for (std::size_t k = 0; k < alphas.size(); ++k) s += alphas[k] * R(k);
        return s;
    }
};

// Increasing family of Hermitian increments from 0 to I, not necessarily
// idempotent; monotone_flag records whether every increment is PSD.
struct GeneralizedStepResolution {
    Eigen::Index dim = 0;
    std::vector<double> jumps;
    std::vector<ComplexMatrix> increments;   // Hermitian
    bool monotone_flag = false;

    ComplexMatrix at(std::size_t k) const {  // partial sum through jump k
        ComplexMatrix f = ComplexMatrix::Zero(dim, dim);
        for (std::size_t j = 0; j <= k; ++j) f += increments[j];
        return f;
    }
};

struct AxiomEntry {
    std::string axiom_id;
    bool holds = false;
    double max_residual = 0.0;
    // witness indices into the jump list, when a residual is localized
    std::optional<std::pair<std::size_t, std::size_t>> witness_pair;
};

struct AxiomReport {
    std::vector<AxiomEntry> entries;
    double gamma = 0.0;

    bool all_hold() const {
        for (const auto& e : entries)
            if (!e.holds) return false;
        return true;
    }
    double max_residual() const {
        double r = 0.0;
        for (const auto& e : entries) r = std::max(r, e.max_residual);
        return r;
    }
    const AxiomEntry* find(const std::string& id) const {
        for (const auto& e : entries)
            if (e.axiom_id == id) return &e;
        return nullptr;
    }
};

namespace detail {

inline void rebuild_partials(StepResolution& x) {
    x.partials.clear();
    x.partials.reserve(x.increments.size());
    ComplexMatrix acc = ComplexMatrix::Zero(x.dim, x.dim);
    for (const auto& d : x.increments) {
        acc += d;
        x.partials.push_back(acc);
    }
}

} // namespace detail

inline StepResolution make_step_resolution(Eigen::Index dim,
                                           std::vector<double> jumps,
                                           std::vector<ComplexMatrix> increments) {
    if (jumps.size() != increments.size() || jumps.empty())
        throw BadSpectralFamily("step resolution: jump/increment count mismatch");
    for (std::size_t k = 1; k < jumps.size(); ++k)
        if (!(jumps[k - 1] < jumps[k]))
            throw BadSpectralFamily("step resolution: jumps not strictly increasing");
    for (const auto& d : increments) {
        if (d.rows() != dim || d.cols() != dim)
            throw DimensionMismatch("step resolution: increment dimension");
        if (!all_finite(d))
            throw BadSpectralFamily("step resolution: non-finite increment entry");
    }
    StepResolution x{dim, std::move(jumps), std::move(increments), {}};
    detail::rebuild_partials(x);
    return x;
}

inline ComplexMatrix evaluate(const StepResolution& x, double lambda) {
    if (lambda < x.jumps.front()) return ComplexMatrix::Zero(x.dim, x.dim);
    std::size_t k = 0;
    while (k + 1 < x.jumps.size() && x.jumps[k + 1] <= lambda) ++k;
    return x.partials[k];
}

// sup over lambda of ||X(lambda)||; attained at a partial sum.
inline double gamma(const StepResolution& x) {
    double g = 0.0;
    for (const auto& p : x.partials) g = std::max(g, op_norm(p));
    return g;
}

inline AxiomReport check_axioms(const StepResolution& x, double tol) {
    AxiomReport rep;
    rep.gamma = gamma(x);
    const std::size_t m = x.jump_count();

    // qs1: gamma finite (always, for a step family); record its value.
    rep.entries.push_back({"qs1", std::isfinite(rep.gamma), 0.0, std::nullopt});

    // qs2: X_j X_k = X_k X_j = X_min(j,k) over all ordered pairs. Residuals
    // use the Frobenius norm, an upper bound on the operator norm, so the
    // stated tolerance is enforced conservatively at O(n^2) per pair.
    AxiomEntry qs2{"qs2", true, 0.0, std::nullopt};
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
            const auto& lo = x.partials[std::min(j, k)];
            double r = frob_norm(ComplexMatrix(x.partials[j] * x.partials[k]) - lo);
            if (r > qs2.max_residual) {
                qs2.max_residual = r;
                qs2.witness_pair = {j, k};
            }
        }
    }
    qs2.holds = qs2.max_residual <= tol;
    rep.entries.push_back(qs2);

    // idempotency of every partial sum (follows from qs2, checked directly)
    AxiomEntry idem{"idempotency", true, 0.0, std::nullopt};
    for (std::size_t k = 0; k < m; ++k) {
        double r = frob_norm(ComplexMatrix(x.partials[k] * x.partials[k]) - x.partials[k]);
        if (r > idem.max_residual) {
            idem.max_residual = r;
            idem.witness_pair = {k, k};
        }
    }
    idem.holds = idem.max_residual <= tol;
    rep.entries.push_back(idem);

    // qs3: boundary values; below the first jump X = 0 structurally, at the
    // top the increments must telescope to the identity.
    AxiomEntry qs3{"qs3", true, 0.0, std::nullopt};
    qs3.max_residual = frob_norm(x.partials.back() - ComplexMatrix::Identity(x.dim, x.dim));
    qs3.holds = qs3.max_residual <= tol;
    rep.entries.push_back(qs3);

    // qs4: right continuity is structural for a step family.
    rep.entries.push_back({"qs4", true, 0.0, std::nullopt});
    return rep;
}

inline StepResolution adjoint_resolution(const StepResolution& x) {
    std::vector<ComplexMatrix> adj;
    adj.reserve(x.increments.size());
    for (const auto& d : x.increments) adj.push_back(d.adjoint());
    return make_step_resolution(x.dim, x.jumps, std::move(adj));
}

inline StepResolution from_similarity(const std::vector<ComplexMatrix>& e_increments,
                                      const std::vector<double>& jumps,
                                      const ComplexMatrix& t) {
    if (e_increments.empty() || e_increments.size() != jumps.size())
        throw BadSpectralFamily("from_similarity: E/jump count mismatch");
    const Eigen::Index n = t.rows();
    require_square(t, "from_similarity");
    ComplexMatrix sum = ComplexMatrix::Zero(n, n);
    for (std::size_t j = 0; j < e_increments.size(); ++j) {
        const auto& ej = e_increments[j];
        if (ej.rows() != n || ej.cols() != n)
            throw DimensionMismatch("from_similarity: E dimension");
        if (frob_norm(ComplexMatrix(ej - ej.adjoint())) > tol_scale(1e-10, 1.0))
            throw BadSpectralFamily("from_similarity: E not Hermitian");
        for (std::size_t k = 0; k < e_increments.size(); ++k) {
            ComplexMatrix prod = ej * e_increments[k];
            ComplexMatrix expect = (j == k) ? ej : ComplexMatrix(ComplexMatrix::Zero(n, n));
            if (frob_norm(ComplexMatrix(prod - expect)) > tol_scale(1e-10, 1.0))
                throw BadSpectralFamily("from_similarity: E not orthogonal projections");
        }
        sum += ej;
    }
    if (frob_norm(ComplexMatrix(sum - ComplexMatrix::Identity(n, n))) > tol_scale(1e-10, 1.0))
        throw BadSpectralFamily("from_similarity: E increments do not sum to I");
    ComplexMatrix t_inv = inverse(t).inverse;
    std::vector<ComplexMatrix> d;
    d.reserve(e_increments.size());
    for (const auto& e : e_increments) d.push_back(t * e * t_inv);
    return make_step_resolution(n, jumps, std::move(d));
}

inline BiorthogonalSystem make_biorthogonal(const ComplexMatrix& basis,
                                            std::vector<Complex> alphas) {
    require_square(basis, "make_biorthogonal");
    if (static_cast<Eigen::Index>(alphas.size()) != basis.cols())
        throw DimensionMismatch("make_biorthogonal: alpha count");
    ComplexMatrix dual = inverse(basis).inverse.adjoint();
    return BiorthogonalSystem{basis.rows(), basis, std::move(dual), std::move(alphas)};
}

inline StepResolution from_biorthogonal(const BiorthogonalSystem& sys,
                                        double tie_tol) {
    std::size_t n = sys.alphas.size();
    double max_abs = 0.0;
    for (const auto& a : sys.alphas) {
        if (std::abs(a.imag()) > 1e-12)
            throw ComplexAlpha("from_biorthogonal: alpha has nonzero imaginary part");
        max_abs = std::max(max_abs, std::abs(a.real()));
    }
    if (tie_tol <= 0.0) tie_tol = tol_scale(1e-9, max_abs);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return sys.alphas[a].real() < sys.alphas[b].real();
    });

    std::vector<double> jumps;
    std::vector<ComplexMatrix> increments;
    std::size_t i = 0;
    while (i < n) {
        double lam = sys.alphas[order[i]].real();
        ComplexMatrix inc = sys.R(order[i]);
        std::size_t j = i + 1;
        while (j < n && sys.alphas[order[j]].real() - lam <= tie_tol) {
            inc += sys.R(order[j]);
            ++j;
        }
        jumps.push_back(lam);
        increments.push_back(inc);
        i = j;
    }
    return make_step_resolution(sys.dim, std::move(jumps), std::move(increments));
}

// F(lambda) = X(lambda)^* X(lambda) as a generalized step family.
inline GeneralizedStepResolution F_family(const StepResolution& x) {
    GeneralizedStepResolution gf;
    gf.dim = x.dim;
    gf.jumps = x.jumps;
    gf.monotone_flag = true;
    ComplexMatrix prev = ComplexMatrix::Zero(x.dim, x.dim);
    for (const auto& p : x.partials) {
        ComplexMatrix f = p.adjoint() * p;
        ComplexMatrix df = f - prev;
        df = 0.5 * (df + ComplexMatrix(df.adjoint()));
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(df, Eigen::EigenvaluesOnly);
        if (es.eigenvalues()(0) < -tol_scale(1e-10, op_norm(df)))
            gf.monotone_flag = false;
        gf.increments.push_back(std::move(df));
        prev = std::move(f);
    }
    return gf;
}

// F_*(lambda) = X(lambda) X(lambda)^*, the Gram family of the adjoint.
inline GeneralizedStepResolution F_star_family(const StepResolution& x) {
    return F_family(adjoint_resolution(x));
}

// Phi(lambda) = F(lambda)^{1/2}; each F(lambda_k) is a Gram matrix, so the
// square roots always exist.
inline GeneralizedStepResolution phi_family(const StepResolution& x) {
    GeneralizedStepResolution gp;
    gp.dim = x.dim;
    gp.jumps = x.jumps;
    gp.monotone_flag = true;
    ComplexMatrix prev = ComplexMatrix::Zero(x.dim, x.dim);
    for (const auto& p : x.partials) {
        ComplexMatrix phi = psd_sqrt(ComplexMatrix(p.adjoint() * p));
        ComplexMatrix dphi = phi - prev;
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(dphi, Eigen::EigenvaluesOnly);
        if (es.eigenvalues()(0) < -tol_scale(1e-10, op_norm(dphi)))
            gp.monotone_flag = false;
        gp.increments.push_back(std::move(dphi));
        prev = std::move(phi);
    }
    return gp;
}

// Residuals of the exact algebraic identities f1, f2 and the three-case
// interval identity; these follow from qs2 alone and must hold to roundoff.
inline AxiomReport lemma_f_residuals(const StepResolution& x) {
    AxiomReport rep;
    rep.gamma = gamma(x);
    const std::size_t m = x.jump_count();
    std::vector<ComplexMatrix> fs;
    fs.reserve(m);
    for (const auto& p : x.partials) fs.push_back(p.adjoint() * p);

    AxiomEntry f1{"f1", true, 0.0, std::nullopt};
    AxiomEntry f2{"f2", true, 0.0, std::nullopt};
    for (std::size_t l = 0; l < m; ++l) {
        for (std::size_t u = l; u < m; ++u) {
            const ComplexMatrix& xu = x.partials[u];
            double r1 = op_norm(ComplexMatrix(xu.adjoint() * fs[l] * xu) - fs[l]);
            double r2a = op_norm(ComplexMatrix(xu.adjoint() * fs[l]) - fs[l]);
            double r2b = op_norm(ComplexMatrix(fs[l] * xu) - fs[l]);
            if (r1 > f1.max_residual) { f1.max_residual = r1; f1.witness_pair = {l, u}; }
            double r2 = std::max(r2a, r2b);
            if (r2 > f2.max_residual) { f2.max_residual = r2; f2.witness_pair = {l, u}; }
        }
    }

    // three-case identity for (X(b)^*-X(a)^*) F(lambda) (X(b)-X(a)); a, b
    // and lambda range over the jump grid plus points below/above it.
    AxiomEntry f3{"f3-interval", true, 0.0, std::nullopt};
    auto x_at = [&](std::ptrdiff_t k) -> ComplexMatrix {
        if (k < 0) return ComplexMatrix::Zero(x.dim, x.dim);
        return x.partials[static_cast<std::size_t>(k)];
    };
    for (std::ptrdiff_t a = -1; a < static_cast<std::ptrdiff_t>(m); ++a) {
        for (std::ptrdiff_t b = a + 1; b < static_cast<std::ptrdiff_t>(m); ++b) {
            ComplexMatrix diff = x_at(b) - x_at(a);
            for (std::size_t l = 0; l < m; ++l) {
                ComplexMatrix lhs = diff.adjoint() * fs[l] * diff;
                ComplexMatrix rhs;
                auto li = static_cast<std::ptrdiff_t>(l);
                if (li <= a) {
                    rhs = ComplexMatrix::Zero(x.dim, x.dim);
                } else if (li < b) {
                    ComplexMatrix mid = x.partials[l] - x_at(a);
                    rhs = mid.adjoint() * mid;
                } else {
                    rhs = diff.adjoint() * diff;
                }
                double r = op_norm(ComplexMatrix(lhs - rhs));
                if (r > f3.max_residual) {
                    f3.max_residual = r;
                    f3.witness_pair = {static_cast<std::size_t>(b), l};
                }
            }
        }
    }

    double tol = tol_scale(1e-9, rep.gamma * rep.gamma * rep.gamma);
    for (auto* e : {&f1, &f2, &f3}) e->holds = e->max_residual <= tol;
    rep.entries = {f1, f2, f3};
    return rep;
}

struct VariationResult {
    double total_variation = 0.0;
    double cs_bound = 0.0; // Cauchy-Schwarz intermediate, exact for steps
};

inline VariationResult variation(const StepResolution& x, const ComplexVector& xi,
                                 const ComplexVector& eta) {
    VariationResult out;
    double sum_xi = 0.0, sum_eta = 0.0;
    for (const auto& d : x.increments) {
        ComplexVector dxi = d * xi;
        ComplexVector deta = d.adjoint() * eta;
        out.total_variation += std::abs(inner(dxi, eta));
        sum_xi += dxi.squaredNorm();
        sum_eta += deta.squaredNorm();
    }
    out.cs_bound = std::sqrt(sum_xi) * std::sqrt(sum_eta);
    return out;
}

// The worked 2x2 family used as a fixed fixture throughout: jumps (1,2),
// D1 = [[1,1],[0,0]], D2 = I - D1.
inline StepResolution canonical_2x2() {
    ComplexMatrix d1(2, 2), d2(2, 2);
    d1 << 1, 1, 0, 0;
    d2 << 0, -1, 0, 1;
    return make_step_resolution(2, {1.0, 2.0}, {d1, d2});
}

} // namespace specres
