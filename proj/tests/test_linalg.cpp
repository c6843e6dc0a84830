#include <doctest.h>

#include <random>

#include "specres/linalg.hpp"

using namespace specres;

namespace {

ComplexMatrix m2(Complex a, Complex b, Complex c, Complex d) {
    ComplexMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

ComplexMatrix random_psd(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix z(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) z(i, j) = Complex(g(rng), g(rng));
    return z.adjoint() * z;
}

} // namespace

TEST_CASE("adjoint basics") {
    ComplexMatrix id = ComplexMatrix::Identity(2, 2);
    CHECK(op_norm(ComplexMatrix(adjoint(id) - id)) == 0.0);

    ComplexMatrix m = m2(0, Complex(0, 1), 0, 0);
    ComplexMatrix expect = m2(0, 0, Complex(0, -1), 0);
    CHECK(op_norm(ComplexMatrix(adjoint(m) - expect)) == 0.0);
    CHECK(op_norm(ComplexMatrix(adjoint(adjoint(m)) - m)) == 0.0);

    // R = psi phi^* with psi=(1,-1), phi=(1,0): adjoint is phi psi^*
    ComplexVector psi(2), phi(2);
    psi << 1, -1;
    phi << 1, 0;
    ComplexMatrix r = psi * phi.adjoint();
    ComplexMatrix l = phi * psi.adjoint();
    CHECK(op_norm(ComplexMatrix(adjoint(r) - l)) == 0.0);
}

TEST_CASE("op_norm values") {
    CHECK(op_norm(ComplexMatrix::Identity(5, 5)) == doctest::Approx(1.0).epsilon(1e-12));
    // singular values of [[1,1],[0,0]]: M^*M = [[1,1],[1,1]], eigs {2,0}
    CHECK(op_norm(m2(1, 1, 0, 0)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
    CHECK(op_norm(ComplexMatrix::Zero(2, 2)) == 0.0);
}

TEST_CASE("op_norm matches adjoint") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        ComplexMatrix m(6, 6);
        for (int j = 0; j < 6; ++j)
            for (int i = 0; i < 6; ++i) m(i, j) = Complex(g(rng), g(rng));
        CHECK(op_norm(m) == doctest::Approx(op_norm(ComplexMatrix(m.adjoint())))
                                .epsilon(1e-12));
    }
}

TEST_CASE("herm_eig values") {
    ComplexMatrix d = m2(2, 0, 0, 1);
    HermEigen e = herm_eig(d);
    CHECK(e.eigenvalues(0) == doctest::Approx(1.0));
    CHECK(e.eigenvalues(1) == doctest::Approx(2.0));

    // characteristic polynomial lambda^2 - 2 lambda
    e = herm_eig(m2(1, 1, 1, 1));
    CHECK(e.eigenvalues(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(e.eigenvalues(1) == doctest::Approx(2.0));

    // Pauli-Y
    e = herm_eig(m2(0, Complex(0, -1), Complex(0, 1), 0));
    CHECK(e.eigenvalues(0) == doctest::Approx(-1.0));
    CHECK(e.eigenvalues(1) == doctest::Approx(1.0));
}

TEST_CASE("herm_eig invariants: reconstruction and unitarity") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 20; ++t) {
        ComplexMatrix h = random_psd(rng, 8);
        h -= 3.0 * ComplexMatrix::Identity(8, 8);
        HermEigen e = herm_eig(h);
        ComplexMatrix recon = e.eigenvectors *
                              e.eigenvalues.asDiagonal().toDenseMatrix().cast<Complex>() *
                              e.eigenvectors.adjoint();
        CHECK(op_norm(ComplexMatrix(recon - h)) <= 1e-12 * 8 * (1 + op_norm(h)));
        CHECK(op_norm(ComplexMatrix(e.eigenvectors.adjoint() * e.eigenvectors -
                                    ComplexMatrix::Identity(8, 8))) <= 1e-12 * 8);
    }
}

TEST_CASE("herm_eig rejects non-Hermitian input") {
    CHECK_THROWS_AS(herm_eig(m2(0, 1, 0, 0)), NotHermitian);
}

TEST_CASE("general_eig values") {
    SpectrumMultiset s = general_eig(m2(1, -1, 0, 2));
    auto v = s.sorted();
    CHECK(v[0].real() == doctest::Approx(1.0));
    CHECK(v[1].real() == doctest::Approx(2.0));

    s = general_eig(ComplexMatrix::Identity(4, 4));
    CHECK(s.eigenvalues.size() == 4);
    for (auto z : s.eigenvalues) CHECK(std::abs(z - Complex(1, 0)) < 1e-12);

    s = general_eig(m2(0, 1, 0, 0)); // nilpotent
    for (auto z : s.eigenvalues) CHECK(std::abs(z) < 1e-12);
}

TEST_CASE("general_eig agrees with herm_eig on Hermitian input") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        ComplexMatrix h = random_psd(rng, 6);
        HermEigen he = herm_eig(h);
        auto ge = general_eig(h).sorted();
        for (int i = 0; i < 6; ++i) {
            CHECK(std::abs(ge[i].real() - he.eigenvalues(i)) < 1e-8 * (1 + op_norm(h)));
            CHECK(std::abs(ge[i].imag()) < 1e-8 * (1 + op_norm(h)));
        }
    }
}

TEST_CASE("psd_sqrt values") {
    ComplexMatrix id = ComplexMatrix::Identity(3, 3);
    CHECK(op_norm(ComplexMatrix(psd_sqrt(id) - id)) < 1e-12);

    // rank-1 with eigenvalue 2: sqrt scales the projector by sqrt(2)
    ComplexMatrix s = psd_sqrt(m2(1, 1, 1, 1));
    ComplexMatrix expect = (1.0 / std::sqrt(2.0)) * m2(1, 1, 1, 1);
    CHECK(op_norm(ComplexMatrix(s - expect)) < 1e-12);

    CHECK(op_norm(ComplexMatrix(psd_sqrt(m2(4, 0, 0, 0)) - m2(2, 0, 0, 0))) < 1e-12);
}

TEST_CASE("psd_sqrt reconstruction on random PSD matrices") {
    std::mt19937_64 rng(42);
    for (int t = 0; t < 1000; ++t) {
        Eigen::Index n = 2 + (t % 31);
        ComplexMatrix h = random_psd(rng, n);
        ComplexMatrix s = psd_sqrt(h);
        CHECK(op_norm(ComplexMatrix(s - s.adjoint())) < 1e-10 * (1 + op_norm(h)));
        CHECK(op_norm(ComplexMatrix(s * s - h)) <= 1e-9 * (1 + op_norm(h)));
    }
}

TEST_CASE("psd_sqrt rejects indefinite input") {
    CHECK_THROWS_AS(psd_sqrt(m2(1, 0, 0, -1)), NotPSD);
}

TEST_CASE("inverse values") {
    InverseResult r = inverse(ComplexMatrix::Identity(3, 3));
    CHECK(op_norm(ComplexMatrix(r.inverse - ComplexMatrix::Identity(3, 3))) < 1e-12);
    CHECK(r.condition == doctest::Approx(1.0));

    // hand inverse; kappa from singular values (3 +- sqrt 5)/2
    r = inverse(m2(1, 1, 0, 1));
    CHECK(op_norm(ComplexMatrix(r.inverse - m2(1, -1, 0, 1))) < 1e-12);
    CHECK(r.condition ==
          doctest::Approx(std::sqrt((3 + std::sqrt(5.0)) / (3 - std::sqrt(5.0))))
              .epsilon(1e-9));
    CHECK(r.condition == doctest::Approx(2.618).epsilon(1e-3));

    CHECK_THROWS_AS(inverse(m2(1, 1, 1, 1)), Singular);
}

TEST_CASE("inverse residual bound") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 30; ++t) {
        ComplexMatrix m = random_invertible(rng(), 10, 50.0);
        InverseResult r = inverse(m);
        CHECK(op_norm(ComplexMatrix(m * r.inverse - ComplexMatrix::Identity(10, 10))) <=
              1e-10 * r.condition);
    }
}

TEST_CASE("random_invertible") {
    // kappa = 1 gives a unitary
    ComplexMatrix u = random_invertible(123, 6, 1.0);
    CHECK(op_norm(ComplexMatrix(u.adjoint() * u - ComplexMatrix::Identity(6, 6))) < 1e-12);

    // condition in [1, kappa] on draws
    for (std::uint64_t s = 0; s < 100; ++s) {
        ComplexMatrix m = random_invertible(s, 8, 10.0);
        double c = condition_estimate(m);
        CHECK(c >= 1.0);
        CHECK(c <= 10.0001);
    }

    // determinism
    ComplexMatrix a = random_invertible(77, 5, 3.0);
    ComplexMatrix b = random_invertible(77, 5, 3.0);
    CHECK(op_norm(ComplexMatrix(a - b)) == 0.0);
}
