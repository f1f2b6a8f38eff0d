#include <cmath>
#include <sstream>

#include "doctest.h"
#include "nodallab/ensembles.hpp"
#include "nodallab/matrix_market.hpp"

using namespace nodallab;

TEST_SUITE_BEGIN("ensembles");

TEST_CASE("gnp extremes") {
    const AdjacencyMatrix full = sample_gnp(3, 1.0, 1);
    CHECK(full.edge_count() == 3);  // complete K3
    const AdjacencyMatrix empty = sample_gnp(3, 0.0, 1);
    CHECK(empty.edge_count() == 0);
    CHECK(empty.entries.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gnp edge count matches the binomial oracle") {
    // Bin(499500, 0.5): mean 249750, sigma = sqrt(124875); 5-sigma window
    const AdjacencyMatrix a = sample_gnp(1000, 0.5, 42);
    const long e = a.edge_count();
    CHECK(e >= 247983);
    CHECK(e <= 251517);
    CHECK(static_cast<long>(a.edge_list().size()) == e);
}

TEST_CASE("gnp invariants and determinism") {
    const AdjacencyMatrix a = sample_gnp(60, 0.3, 7);
    const AdjacencyMatrix b = sample_gnp(60, 0.3, 7);
    CHECK(a.entries == b.entries);
    CHECK(a.entries.diagonal().cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.entries - a.entries.transpose()).cwiseAbs().maxCoeff() == 0.0);
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) CHECK((a.entries(i, j) == 0.0 || a.entries(i, j) == 1.0));
    CHECK_THROWS_AS(sample_gnp(1, 0.5, 0), ConfigError);
    CHECK_THROWS_AS(sample_gnp(10, 1.5, 0), ConfigError);
}

TEST_CASE("normalized shift, hand-evaluated 2x2") {
    AdjacencyMatrix a;
    a.n = 2;
    a.entries.setZero(2, 2);
    a.entries(0, 1) = a.entries(1, 0) = 1.0;
    const NormalizedPair np = normalize_shifted(a, 0.5);
    const double s2 = std::sqrt(2.0);
    CHECK(np.tilde_a.entries(0, 0) == doctest::Approx(-1.0 / s2).epsilon(1e-15));
    CHECK(np.tilde_a.entries(0, 1) == doctest::Approx(s2).epsilon(1e-15));
    CHECK(np.tilde_a.entries(1, 1) == doctest::Approx(-1.0 / s2).epsilon(1e-15));
    // centered form: zero diagonal, off-diagonal 1/sqrt(2) for a present edge
    CHECK(np.centered.entries(0, 0) == 0.0);
    CHECK(np.centered.entries(1, 1) == 0.0);
    CHECK(np.centered.entries(0, 1) == doctest::Approx(1.0 / s2).epsilon(1e-15));
    CHECK_THROWS_AS(normalize_shifted(a, 0.0), ConfigError);
}

TEST_CASE("centered entry law moments") {
    // mean 0, variance 1/n within 5 sigma of Monte Carlo error
    const int n = 500;
    const double p = 0.3;
    const SymmetricMatrix h = sample_centered_wigner(n, p, 11);
    CHECK(h.entries.diagonal().cwiseAbs().maxCoeff() == 0.0);
    double s = 0.0, s2 = 0.0;
    long cnt = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            s += h.entries(i, j);
            s2 += h.entries(i, j) * h.entries(i, j);
            ++cnt;
        }
    const double mean = s / cnt;
    const double var = s2 / cnt - mean * mean;
    // var of single entry = 1/n; sd of the mean = 1/sqrt(n*cnt)
    CHECK(std::abs(mean) < 5.0 / std::sqrt(double(n) * cnt));
    CHECK(std::abs(var - 1.0 / n) < 5.0 * 3.0 / (std::sqrt(double(cnt)) * n));
}

TEST_CASE("goe determinism and variances") {
    const SymmetricMatrix a = sample_goe(100, 5);
    const SymmetricMatrix b = sample_goe(100, 5);
    CHECK(a.entries == b.entries);
    const int n = 2000;
    const SymmetricMatrix g = sample_goe(n, 17);
    double off2 = 0.0;
    long cnt = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            off2 += g.entries(i, j) * g.entries(i, j);
            ++cnt;
        }
    CHECK(off2 / cnt == doctest::Approx(1.0 / n).epsilon(0.05));
    double d2 = 0.0;
    for (int i = 0; i < n; ++i) d2 += g.entries(i, i) * g.entries(i, i);
    CHECK(d2 / n == doctest::Approx(2.0 / n).epsilon(0.15));
}

TEST_CASE("block decomposition round trip") {
    const BlockDecomposition id4 = block_decompose(SymmetricMatrix(Eigen::MatrixXd::Identity(4, 4)));
    CHECK(id4.D == Eigen::Matrix2d::Identity());
    CHECK(id4.W.cwiseAbs().maxCoeff() == 0.0);
    CHECK(id4.B == Eigen::MatrixXd::Identity(2, 2));

    const SymmetricMatrix s = sample_goe(6, 23);
    const BlockDecomposition bd = block_decompose(s);
    CHECK(bd.reassemble().entries == s.entries);  // bit-exact partition identity
    CHECK_THROWS_AS(block_decompose(SymmetricMatrix(Eigen::MatrixXd::Identity(3, 3))), ConfigError);
}

TEST_CASE("lindeberg path endpoints") {
    const int n = 40;
    SymmetricMatrix base = sample_goe(n, 3);
    Eigen::MatrixXd zd = base.entries;
    zd.diagonal().setZero();
    base = SymmetricMatrix(std::move(zd));
    const Eigen::MatrixXd inc = lindeberg_increments(n, 9);

    CHECK(lindeberg_matrix(base, inc, 0, 0).entries == base.entries);  // W_{0,0} = base
    for (int beta : {0, 5, n - 1})
        CHECK(lindeberg_matrix(base, inc, beta, n).entries ==
              lindeberg_matrix(base, inc, beta + 1, 0).entries);  // W_{b,n} = W_{b+1,0}
    CHECK_THROWS_AS(lindeberg_matrix(base, inc, -1, 0), ConfigError);
    CHECK_THROWS_AS(lindeberg_matrix(base, inc, 0, n + 1), ConfigError);
    SymmetricMatrix bad = sample_goe(n, 4);
    CHECK_THROWS_AS(lindeberg_matrix(bad, inc, 0, 0), DataError);
}

TEST_CASE("lindeberg full-diagonal variance") {
    const int n = 400;
    SymmetricMatrix base(Eigen::MatrixXd::Zero(n, n));
    const Eigen::MatrixXd inc = lindeberg_increments(n, 77);
    const SymmetricMatrix w = lindeberg_matrix(base, inc, n, 0);
    double v = 0.0;
    for (int i = 0; i < n; ++i) v += w.entries(i, i) * w.entries(i, i);
    CHECK(v / n == doctest::Approx(2.0 / n).epsilon(0.3));  // sum of n draws, var 2/n^2
}

TEST_CASE("matrix market round trips exactly") {
    const AdjacencyMatrix a = sample_gnp(25, 0.4, 99);
    std::stringstream sa;
    write_matrix_market(sa, a);
    const AdjacencyMatrix a2 = read_adjacency_matrix_market(sa);
    CHECK(a2.entries == a.entries);

    const SymmetricMatrix s = sample_goe(12, 100);
    std::stringstream ss;
    write_matrix_market(ss, s);
    const SymmetricMatrix s2 = read_symmetric_matrix_market(ss);
    CHECK(s2.entries == s.entries);
}

TEST_SUITE_END();
