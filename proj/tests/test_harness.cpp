#include <doctest.h>

#include "specres/harness.hpp"

using namespace specres;

namespace {

EnsembleConfig small_cfg(std::uint64_t seed = 12, double kappa = 8.0) {
    EnsembleConfig cfg;
    cfg.n = 4;
    cfg.m = 2;
    cfg.trials = 40;
    cfg.seed = seed;
    cfg.kappa_max = kappa;
    return cfg;
}

} // namespace

TEST_CASE("generate_instance is deterministic and axiom-clean") {
    EnsembleConfig cfg = small_cfg();
    Instance a = generate_instance(cfg, 3);
    Instance b = generate_instance(cfg, 3);
    for (std::size_t k = 0; k < a.x.jump_count(); ++k)
        CHECK(op_norm(ComplexMatrix(a.x.increments[k] - b.x.increments[k])) == 0.0);

    for (std::size_t tr = 1; tr <= 20; ++tr) {
        Instance inst = generate_instance(cfg, tr);
        AxiomReport rep =
            check_axioms(inst.x, tol_scale(1e-10, inst.kappa * inst.kappa));
        CHECK(rep.all_hold());
    }
}

TEST_CASE("biorthogonal construction also passes axioms") {
    EnsembleConfig cfg = small_cfg(5);
    cfg.construction = Construction::Biorthogonal;
    for (std::size_t tr = 1; tr <= 20; ++tr) {
        Instance inst = generate_instance(cfg, tr);
        AxiomReport rep =
            check_axioms(inst.x, tol_scale(1e-9, inst.kappa * inst.kappa));
        CHECK(rep.all_hold());
    }
}

TEST_CASE("claim verdicts match the expected table") {
    EnsembleConfig cfg = small_cfg();
    CHECK(run_claim("qs-axioms", cfg).status == ClaimStatus::Holds);
    CHECK(run_claim("star-closure", cfg).status == ClaimStatus::Holds);
    CHECK(run_claim("f-identities", cfg).status == ClaimStatus::Holds);
    CHECK(run_claim("bv-bound", cfg).status == ClaimStatus::Holds);
    CHECK(run_claim("thm319", cfg).status == ClaimStatus::Holds);
    CHECK(run_claim("cor321", cfg).status == ClaimStatus::Holds);
    CHECK(run_claim("lemma310-scaled", cfg).status == ClaimStatus::HoldsScaled);
    CHECK(run_claim("fs2-scaled", cfg).status == ClaimStatus::HoldsScaled);
    CHECK(run_claim("lemma310-strict", cfg).status == ClaimStatus::Fails);
    CHECK(run_claim("fs2-strict", cfg).status == ClaimStatus::Fails);
    CHECK(run_claim("frame-bound", cfg).status == ClaimStatus::Fails);
    CHECK(run_claim("norm-identity", cfg).status == ClaimStatus::Fails);
    CHECK(run_claim("sqrt-continuity", cfg).status == ClaimStatus::Holds);
    CHECK(run_claim("triple-question", small_cfg(12, 4.0)).status ==
          ClaimStatus::Holds);
    CHECK_THROWS_AS(run_claim("no-such-claim", cfg), UnknownClaim);
}

TEST_CASE("strict claims hold on self-adjoint ensembles") {
    EnsembleConfig cfg = small_cfg(9, 1.0); // unitary transforms only
    // the canonical fixture is gamma > 1, so run random trials only
    for (std::size_t tr = 1; tr <= 30; ++tr) {
        Instance inst = generate_instance(cfg, tr);
        CHECK(gamma(inst.x) <= 1.0 + 1e-9);
        ComplexVector eta = ComplexVector::Random(cfg.n);
        CHECK(frame_defect(inst.x, eta) <= 1.0 + 1e-9);
    }
}

TEST_CASE("FAILS witnesses replay to the recorded residual") {
    EnsembleConfig cfg = small_cfg();
    for (const char* id : {"frame-bound", "norm-identity", "lemma310-strict",
                           "fs2-strict"}) {
        ClaimReport rep = run_claim(id, cfg);
        REQUIRE(rep.status == ClaimStatus::Fails);
        REQUIRE(!rep.counterexample.is_null());
        double recorded = rep.counterexample["residual"].get<double>();
        double replayed = replay_counterexample(id, rep.counterexample);
        if (std::string(id) == "frame-bound") {
            CHECK(replayed == doctest::Approx(recorded).epsilon(1e-12));
            CHECK(replayed == doctest::Approx(3.0).epsilon(1e-9)); // canonical
        } else if (std::string(id) == "norm-identity") {
            CHECK(replayed == doctest::Approx(recorded).epsilon(1e-12));
            CHECK(replayed == doctest::Approx(8.0).epsilon(1e-9)); // canonical
        } else {
            // monotonicity claims record the tolerance-adjusted excess
            CHECK(replayed >= recorded - 1e-9);
        }
        CHECK(rep.counterexample["trial"].get<std::size_t>() == 0);
    }
}

TEST_CASE("reports are byte-identical across reruns") {
    EnsembleConfig cfg = small_cfg(77);
    for (const char* id : {"qs-axioms", "frame-bound", "thm319", "sqrt-continuity"}) {
        std::string a = claim_report_to_json(run_claim(id, cfg)).dump();
        std::string b = claim_report_to_json(run_claim(id, cfg)).dump();
        CHECK(a == b);
    }
}

TEST_CASE("sqrt continuity probe") {
    SqrtContinuityResult r = sqrt_continuity_probe_impl(2.0, 24, 5);
    CHECK(r.pass);
    CHECK(r.empirical_exponent >= 0.45);
    CHECK(r.max_holder_excess <= 0.0);

    // constant path has modulus zero: probe a trivial path directly
    ComplexMatrix k0 = ComplexMatrix::Identity(4, 4);
    CHECK(op_norm(ComplexMatrix(psd_sqrt(k0) - psd_sqrt(k0))) == 0.0);

    // scalar path diag(t,1): exponent 1/2 at t -> 0
    double prev_t = 1.0;
    for (int i = 0; i < 10; ++i) {
        double t = prev_t * 0.25;
        ComplexMatrix a = ComplexMatrix::Identity(2, 2), b = a;
        a(0, 0) = prev_t;
        b(0, 0) = t;
        double d = op_norm(ComplexMatrix(a - b));
        double s = op_norm(ComplexMatrix(psd_sqrt(a) - psd_sqrt(b)));
        CHECK(s <= std::sqrt(d) * (1 + 1e-9));
        prev_t = t;
    }
}

TEST_CASE("triple_explore sweep") {
    EnsembleConfig cfg = small_cfg(3, 6.0);
    cfg.trials = 3;
    std::vector<TripleRow> rows = triple_explore(cfg, 11, 10);
    CHECK(rows.size() == 33);
    for (const auto& r : rows) {
        if (r.t == 0.0) {
            CHECK(r.summary.dist_B_TX <= 1e-9);
            CHECK(r.summary.dist_B_SX <= 1e-9);
            CHECK(r.summary.dist_TX_SX <= 1e-9);
            CHECK(r.gap_max <= 1e-9);
        }
    }
    // canonical row values appear via triple_summary elsewhere; check CSV shape
    std::string csv = triple_rows_to_csv(rows);
    CHECK(csv.find("trial,t,dist_B_TX") == 0);
    std::size_t lines = std::count(csv.begin(), csv.end(), '\n');
    CHECK(lines == rows.size() + 1);
}

TEST_CASE("spearman correlation sanity") {
    std::vector<double> a = {1, 2, 3, 4, 5};
    std::vector<double> b = {2, 4, 6, 8, 10};
    CHECK(spearman_correlation(a, b) == doctest::Approx(1.0));
    std::vector<double> c = {5, 4, 3, 2, 1};
    CHECK(spearman_correlation(a, c) == doctest::Approx(-1.0));
}
