#include <doctest.h>

#include "specres/harness.hpp"
#include "specres/operators.hpp"

using namespace specres;

namespace {

ComplexMatrix m2(Complex a, Complex b, Complex c, Complex d) {
    ComplexMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

StepResolution self_adjoint_family() {
    ComplexMatrix e1 = m2(1, 0, 0, 0), e2 = m2(0, 0, 0, 1);
    return from_similarity({e1, e2}, {1.0, 2.0}, ComplexMatrix::Identity(2, 2));
}

} // namespace

TEST_CASE("build_B canonical values") {
    StepResolution sa = self_adjoint_family();
    CHECK(op_norm(ComplexMatrix(build_B(sa) - m2(1, 0, 0, 2))) < 1e-14);

    StepResolution x = canonical_2x2();
    CHECK(op_norm(ComplexMatrix(build_B(x) - m2(1, -1, 0, 2))) < 1e-12);
}

TEST_CASE("sigma(B) is the jump multiset with rank multiplicities") {
    EnsembleConfig cfg;
    cfg.n = 8;
    cfg.m = 3;
    cfg.trials = 30;
    cfg.seed = 17;
    for (std::size_t tr = 1; tr <= cfg.trials; ++tr) {
        Instance inst = generate_instance(cfg, tr);
        std::vector<double> expected;
        for (std::size_t k = 0; k < inst.x.jump_count(); ++k) {
            int rank = static_cast<int>(
                std::lround(inst.x.increments[k].trace().real()));
            for (int r = 0; r < rank; ++r) expected.push_back(inst.x.jumps[k]);
        }
        std::sort(expected.begin(), expected.end());
        auto got = general_eig(build_B(inst.x)).sorted();
        REQUIRE(got.size() == expected.size());
        for (std::size_t i = 0; i < got.size(); ++i)
            CHECK(std::abs(got[i] - Complex(expected[i])) < 1e-8);
    }
}

TEST_CASE("build_TX canonical values") {
    StepResolution sa = self_adjoint_family();
    CHECK(op_norm(ComplexMatrix(build_TX(sa) - build_B(sa))) < 1e-12);

    StepResolution x = canonical_2x2();
    ComplexMatrix tx = build_TX(x);
    CHECK(op_norm(ComplexMatrix(tx - m2(1, -1, -1, 1))) < 1e-12);
    auto spec = general_eig(tx).sorted();
    CHECK(std::abs(spec[0]) < 1e-12);
    CHECK(std::abs(spec[1] - Complex(2)) < 1e-12);
}

TEST_CASE("build_SX canonical values") {
    StepResolution sa = self_adjoint_family();
    CHECK(op_norm(ComplexMatrix(build_SX(sa) - build_B(sa))) < 1e-9);

    StepResolution x = canonical_2x2();
    ComplexMatrix sx = build_SX(x);
    ComplexMatrix expect = 2.0 * ComplexMatrix::Identity(2, 2) -
                           (1.0 / std::sqrt(2.0)) * m2(1, 1, 1, 1);
    CHECK(op_norm(ComplexMatrix(sx - expect)) < 1e-9);
    auto spec = general_eig(sx).sorted();
    CHECK(std::abs(spec[0] - Complex(2 - std::sqrt(2.0))) < 1e-9);
    CHECK(std::abs(spec[1] - Complex(2)) < 1e-9);
}

TEST_CASE("T_X and S_X always Hermitian") {
    EnsembleConfig cfg;
    cfg.n = 6;
    cfg.m = 3;
    cfg.trials = 25;
    cfg.seed = 21;
    for (std::size_t tr = 1; tr <= cfg.trials; ++tr) {
        Instance inst = generate_instance(cfg, tr);
        OperatorTriple t = build_triple(inst.x);
        CHECK(op_norm(ComplexMatrix(t.T_X - t.T_X.adjoint())) < 1e-9);
        CHECK(op_norm(ComplexMatrix(t.S_X - t.S_X.adjoint())) < 1e-9);
    }
}

TEST_CASE("shift covariance and positive scaling") {
    EnsembleConfig cfg;
    cfg.n = 5;
    cfg.m = 3;
    cfg.trials = 10;
    cfg.seed = 4;
    for (std::size_t tr = 1; tr <= cfg.trials; ++tr) {
        Instance inst = generate_instance(cfg, tr);
        const double c = 0.75, s = 2.5;

        std::vector<double> shifted = inst.x.jumps;
        for (double& l : shifted) l += c;
        StepResolution xs =
            make_step_resolution(inst.x.dim, shifted, inst.x.increments);
        ComplexMatrix lhs = build_B(xs);
        ComplexMatrix rhs = build_B(inst.x) +
                            c * ComplexMatrix::Identity(inst.x.dim, inst.x.dim);
        CHECK(op_norm(ComplexMatrix(lhs - rhs)) < 1e-10);

        std::vector<double> scaled = inst.x.jumps;
        for (double& l : scaled) l *= s;
        StepResolution xsc =
            make_step_resolution(inst.x.dim, scaled, inst.x.increments);
        OperatorTriple a = build_triple(inst.x);
        OperatorTriple b = build_triple(xsc);
        CHECK(op_norm(ComplexMatrix(b.B - s * a.B)) < 1e-9);
        CHECK(op_norm(ComplexMatrix(b.T_X - s * a.T_X)) < 1e-9);
        CHECK(op_norm(ComplexMatrix(b.S_X - s * a.S_X)) < 1e-8);
    }
}

TEST_CASE("quadratic_moment canonical values") {
    StepResolution sa = self_adjoint_family();
    ComplexVector xi(2);
    xi << 1, Complex(0, 2);
    QuadraticMoment qm = quadratic_moment(sa, xi);
    CHECK(qm.monotone);
    CHECK(qm.value ==
          doctest::Approx(ComplexVector(build_B(sa) * xi).squaredNorm()).epsilon(1e-12));

    StepResolution x = canonical_2x2();
    ComplexVector ones(2);
    ones << 1, 1;
    qm = quadratic_moment(x, ones);
    CHECK(!qm.monotone);
    CHECK(qm.value == doctest::Approx(-4.0).epsilon(1e-12));

    ComplexVector zero = ComplexVector::Zero(2);
    CHECK(quadratic_moment(x, zero).value == 0.0);
}

TEST_CASE("norm_identity_gap canonical value and oracle") {
    StepResolution x = canonical_2x2();
    ComplexVector ones(2);
    ones << 1, 1;
    double gap = norm_identity_gap(x, ones);
    CHECK(gap == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(norm_identity_gap_oracle(x, ones) == doctest::Approx(gap).epsilon(1e-12));

    StepResolution sa = self_adjoint_family();
    CHECK(std::abs(norm_identity_gap(sa, ones)) < 1e-9);
}

TEST_CASE("norm_identity_gap matches the cross-term oracle on ensembles") {
    EnsembleConfig cfg;
    cfg.n = 7;
    cfg.m = 4;
    cfg.trials = 30;
    cfg.seed = 13;
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g(0.0, 1.0);
    for (std::size_t tr = 1; tr <= cfg.trials; ++tr) {
        Instance inst = generate_instance(cfg, tr);
        for (int r = 0; r < 5; ++r) {
            ComplexVector xi(7);
            for (int i = 0; i < 7; ++i) xi(i) = Complex(g(rng), g(rng));
            double gap = norm_identity_gap(inst.x, xi);
            double oracle = norm_identity_gap_oracle(inst.x, xi);
            CHECK(std::abs(gap - oracle) <=
                  1e-9 * (1 + std::abs(gap)) * xi.squaredNorm());
        }
    }
}

TEST_CASE("gap vanishes along the continuation toward unitary T") {
    auto es = std::vector<ComplexMatrix>{};
    ComplexMatrix e1 = ComplexMatrix::Zero(4, 4), e2 = ComplexMatrix::Zero(4, 4);
    e1(0, 0) = e1(1, 1) = 1.0;
    e2(2, 2) = e2(3, 3) = 1.0;
    ComplexMatrix t = random_invertible(55, 4, 5.0);
    ComplexMatrix eye = ComplexMatrix::Identity(4, 4);
    ComplexVector xi(4);
    xi << 1, -1, Complex(0, 1), 0.5;
    double gap_at_one = 0.0, gap_at_zero = 0.0;
    for (double tt : {1.0, 0.5, 0.1, 0.01, 0.0}) {
        ComplexMatrix ts = eye + tt * (t - eye);
        StepResolution x = from_similarity({e1, e2}, {1.0, 2.0}, ts);
        double gap = std::abs(norm_identity_gap(x, xi));
        if (tt == 1.0) gap_at_one = gap;
        if (tt == 0.0) gap_at_zero = gap;
    }
    CHECK(gap_at_zero < 1e-9); // t = 0 limit is self-adjoint
    CHECK(gap_at_zero <= gap_at_one + 1e-9);
}

TEST_CASE("frame_defect canonical values") {
    StepResolution sa = self_adjoint_family();
    ComplexVector xi(2);
    xi << 1, Complex(1, -1);
    CHECK(frame_defect(sa, xi) <= 1.0 + 1e-12);

    StepResolution x = canonical_2x2();
    ComplexVector e2(2);
    e2 << 0, 1;
    CHECK(frame_defect(x, e2) == doctest::Approx(3.0).epsilon(1e-12));

    ComplexVector zero = ComplexVector::Zero(2);
    CHECK_THROWS_AS(frame_defect(x, zero), ZeroVector);
}

TEST_CASE("triple_summary canonical values") {
    TripleSummary s = triple_summary(canonical_2x2());
    CHECK(s.dist_B_TX == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
    CHECK(s.gamma == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
    CHECK(std::abs(s.spec_TX[0]) < 1e-9);
    CHECK(std::abs(s.spec_TX[1] - Complex(2)) < 1e-9);
    CHECK(std::abs(s.spec_B[0] - Complex(1)) < 1e-9);
    CHECK(std::abs(s.spec_B[1] - Complex(2)) < 1e-9);

    TripleSummary ssa = triple_summary(self_adjoint_family());
    CHECK(ssa.dist_B_TX < 1e-9);
    CHECK(ssa.dist_B_SX < 1e-9);
    CHECK(ssa.dist_TX_SX < 1e-9);
}
