#include <cmath>
#include <complex>
#include <cstdio>

#include <Eigen/LU>

#include "doctest.h"
#include "nodallab/ensembles.hpp"
#include "nodallab/rng.hpp"
#include "nodallab/spectral.hpp"

using namespace nodallab;

TEST_SUITE_BEGIN("spectral");

namespace {

// direct complex solve oracle for <x, (A - z)^{-1} y>
Complex green_by_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& y, Complex z) {
    const long n = a.rows();
    Eigen::MatrixXcd m = a.cast<Complex>();
    m -= z * Eigen::MatrixXcd::Identity(n, n);
    const Eigen::VectorXcd sol = m.fullPivLu().solve(y.cast<Complex>());
    Complex acc(0, 0);
    for (long i = 0; i < n; ++i) acc += x(i) * sol(i);
    return acc;
}

}  // namespace

TEST_CASE("2x2 closed form with sign convention") {
    Eigen::MatrixXd a(2, 2);
    a << 0, 1, 1, 0;
    const Spectrum s = eigendecompose(SymmetricMatrix(a));
    CHECK(s.eigenvalues(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.eigenvalues(1) == doctest::Approx(-1.0).epsilon(1e-14));
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(s.eigenvectors(0, 0) == doctest::Approx(r).epsilon(1e-14));
    CHECK(s.eigenvectors(1, 0) == doctest::Approx(r).epsilon(1e-14));
    // ties resolved to the lowest index, so the second vector is (1,-1)/sqrt(2)
    CHECK(s.eigenvectors(0, 1) == doctest::Approx(r).epsilon(1e-14));
    CHECK(s.eigenvectors(1, 1) == doctest::Approx(-r).epsilon(1e-14));
}

TEST_CASE("path graph P3") {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
    a(0, 1) = a(1, 0) = 1.0;
    a(1, 2) = a(2, 1) = 1.0;
    const Spectrum s = eigendecompose(SymmetricMatrix(a));
    // characteristic polynomial -x^3 + 2x: roots sqrt(2), 0, -sqrt(2)
    CHECK(s.eigenvalues(0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(s.eigenvalues(1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(s.eigenvalues(2) == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("spectrum invariants on random instances") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const AdjacencyMatrix g = sample_gnp(40, 0.4, seed);
        const SymmetricMatrix s(g.entries);
        const Spectrum spec = eigendecompose(s);
        const double norm = s.entries.norm();
        for (int a = 0; a < 40; ++a) {
            const double resid =
                (s.entries * spec.eigenvectors.col(a) - spec.eigenvalues(a) * spec.eigenvectors.col(a))
                    .norm();
            CHECK(resid <= 1e-8 * (1.0 + norm));
            if (a > 0) CHECK(spec.eigenvalues(a - 1) >= spec.eigenvalues(a));
        }
        const Eigen::MatrixXd gram =
            spec.eigenvectors.transpose() * spec.eigenvectors - Eigen::MatrixXd::Identity(40, 40);
        CHECK(gram.cwiseAbs().maxCoeff() <= 1e-10);
        CHECK(std::abs(spec.eigenvalues.sum()) <= 1e-8 * std::max(1.0, norm));  // zero trace
        // determinism of the full decomposition
        const Spectrum again = eigendecompose(s);
        CHECK(again.eigenvalues == spec.eigenvalues);
        CHECK(again.eigenvectors == spec.eigenvectors);
    }
}

TEST_CASE("green quadratic form basics") {
    Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(4, 4);
    const Spectrum s = eigendecompose(SymmetricMatrix(zero));
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(4);
    e1(0) = 1.0;
    const Complex v = green_quadratic_form(s, e1, e1, ComplexPoint(0.0, 1.0));
    CHECK(std::abs(v - Complex(0.0, 1.0)) < 1e-14);  // -1/i = i

    Eigen::VectorXd e2 = Eigen::VectorXd::Zero(4);
    e2(1) = 1.0;
    CHECK(std::abs(green_quadratic_form(s, e1, e2, ComplexPoint(0.3, 0.5))) < 1e-15);
    CHECK_THROWS_AS(ComplexPoint(0.0, 0.0), ConfigError);
}

TEST_CASE("green quadratic form agrees with a direct complex solve") {
    CounterRng rng(31);
    const SymmetricMatrix s = sample_goe(8, 5);
    const Spectrum spec = eigendecompose(s);
    Eigen::VectorXd x(8), y(8);
    for (int i = 0; i < 8; ++i) {
        x(i) = rng.normal();
        y(i) = rng.normal();
    }
    const ComplexPoint z(2.0, 0.01);
    const Complex got = green_quadratic_form(spec, x, y, z);
    const Complex want = green_by_solve(s.entries, x, y, z.z());
    CHECK(std::abs(got - want) <= 1e-10 * std::abs(want));
}

TEST_CASE("stieltjes transform") {
    Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(5, 5);
    const Spectrum s = eigendecompose(SymmetricMatrix(zero));
    const ComplexPoint z(0.4, 0.7);
    CHECK(std::abs(stieltjes(s, z) + 1.0 / z.z()) < 1e-14);  // m = -1/z for A = 0

    // identity m(z) = (1/n) sum_i <e_i, G e_i>
    const SymmetricMatrix g = sample_goe(16, 6);
    const Spectrum gs = eigendecompose(g);
    Complex acc(0, 0);
    for (int i = 0; i < 16; ++i) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(16);
        e(i) = 1.0;
        acc += green_quadratic_form(gs, e, e, z);
    }
    CHECK(std::abs(acc / 16.0 - stieltjes(gs, z)) < 1e-12);
    CHECK(stieltjes(gs, z).imag() > 0.0);
}

TEST_CASE("goe stieltjes approaches the semicircle value") {
    const Spectrum s = eigendecompose(sample_goe(2000, 8));
    const ComplexPoint z(0.0, 0.1);
    CHECK(std::abs(stieltjes(s, z) - semicircle_stieltjes(z)) <= 0.05);
}

TEST_CASE("semicircle density") {
    CHECK(semicircle_density(0.0) == doctest::Approx(1.0 / M_PI).epsilon(1e-15));
    CHECK(semicircle_density(2.0) == 0.0);
    CHECK(semicircle_density(-2.0) == 0.0);
    CHECK(semicircle_density(3.0) == 0.0);
    // quadrature oracle: composite Simpson on [-2,2]
    const int m = 200001;
    const double h = 4.0 / (m - 1);
    double integral = semicircle_density(-2.0) + semicircle_density(2.0);
    for (int i = 1; i < m - 1; ++i)
        integral += (i % 2 == 1 ? 4.0 : 2.0) * semicircle_density(-2.0 + i * h);
    integral *= h / 3.0;
    CHECK(std::abs(integral - 1.0) <= 1e-8);
}

TEST_CASE("semicircle stieltjes branch and self-consistency") {
    // edge limit m_sc -> -1
    CHECK(std::abs(semicircle_stieltjes(Complex(2.0, 1e-12)) + 1.0) < 1e-5);
    // large |z| asymptotic
    const Complex big = semicircle_stieltjes(Complex(0.0, 10.0));
    CHECK(std::abs(big - Complex(0.0, 0.1)) / 0.1 < 0.02);
    // m^2 + z m + 1 = 0 on a grid
    for (int i = 0; i < 1000; ++i) {
        const double E = -3.0 + 6.0 * i / 999.0;
        const double eta = 1e-3 + (1.0 - 1e-3) * ((i * 7) % 1000) / 999.0;
        const Complex z(E, eta);
        const Complex m = semicircle_stieltjes(z);
        CHECK(std::abs(m * m + z * m + 1.0) <= 1e-12);
        CHECK(m.imag() > 0.0);
    }
}

TEST_CASE("classical locations") {
    const Eigen::VectorXd g100 = classical_locations(100);
    CHECK(g100(49) == doctest::Approx(0.0).epsilon(1e-10));  // i = n/2 -> median 0
    const double t1 = 2.0 - g100(0);
    CHECK(t1 >= 0.0995);  // (pi/100)^{2/3}
    CHECK(t1 <= 0.2072);  // (3 pi/100)^{2/3}
    for (int i = 1; i < 100; ++i) CHECK(g100(i - 1) > g100(i));
    for (int i = 1; i <= 100; ++i)
        CHECK(std::abs(semicircle_tail_integral(g100(i - 1)) - i / 100.0) <= 1e-10);
    for (int i = 1; i <= 10; ++i) {
        const double t = 2.0 - g100(i - 1);
        CHECK(t >= std::pow(M_PI * i / 100.0, 2.0 / 3.0));
        CHECK(t <= std::pow(3.0 * M_PI * i / 100.0, 2.0 / 3.0));
    }
}

TEST_CASE("single eigenpair matches the full decomposition") {
    const SymmetricMatrix s = sample_goe(30, 55);
    const Spectrum full = eigendecompose(s);
    for (int alpha : {1, 7, 15, 30}) {
        const Eigenpair p = eigenpair_at(s, alpha);
        CHECK(p.value == doctest::Approx(full.eigenvalues(alpha - 1)).epsilon(1e-12));
        CHECK(std::abs(p.vector.dot(full.eigenvectors.col(alpha - 1))) >= 1.0 - 1e-10);
    }
    CHECK_THROWS_AS(eigenpair_at(s, 0), ConfigError);
    CHECK_THROWS_AS(eigenpair_at(s, 31), ConfigError);
}

TEST_CASE("spectrum file round trip") {
    const SymmetricMatrix s = sample_goe(10, 44);
    const Spectrum spec = eigendecompose(s);
    const std::string path = "/tmp/nodallab_spec_test.bin";
    save_spectrum(path, spec, 44, "goe");
    const SpectrumFile f = load_spectrum(path);
    CHECK(f.seed == 44);
    CHECK(f.ensemble == "goe");
    CHECK(f.spectrum.eigenvalues == spec.eigenvalues);
    CHECK(f.spectrum.eigenvectors == spec.eigenvectors);
    std::remove(path.c_str());
}

TEST_SUITE_END();
