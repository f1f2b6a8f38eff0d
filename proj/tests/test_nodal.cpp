#include <cmath>

#include "doctest.h"
#include "nodallab/ensembles.hpp"
#include "nodallab/nodal.hpp"
#include "nodallab/rng.hpp"
#include "nodallab/spectral.hpp"

using namespace nodallab;

TEST_SUITE_BEGIN("nodal");

namespace {

// brute-force oracle: average of sign(v_k v_l) over all distinct pairs of
// nonzero-sign vertices, as an exact integer pair
std::pair<long long, long long> pair_sign_brute(const std::vector<int>& signs) {
    long long num = 0, den = 0;
    const int n = static_cast<int>(signs.size());
    for (int k = 0; k < n; ++k)
        for (int l = k + 1; l < n; ++l) {
            if (signs[k] == 0 || signs[l] == 0) continue;
            num += signs[k] * signs[l];
            ++den;
        }
    return {num, den};
}

AdjacencyMatrix path3() {
    AdjacencyMatrix a;
    a.n = 3;
    a.entries = Eigen::MatrixXd::Zero(3, 3);
    a.entries(0, 1) = a.entries(1, 0) = 1.0;
    a.entries(1, 2) = a.entries(2, 1) = 1.0;
    return a;
}

}  // namespace

TEST_CASE("sign vector") {
    Eigen::Vector3d v(1.0, 1.0, 1.0);
    v /= std::sqrt(3.0);
    CHECK(sign_vector(v) == std::vector<int>{1, 1, 1});
    Eigen::Vector3d w(1.0, 0.0, -1.0);
    w /= std::sqrt(2.0);
    CHECK(sign_vector(w, 1e-12) == std::vector<int>{1, 0, -1});
    Eigen::Vector3d bad(1.0, std::nan(""), 0.0);
    CHECK_THROWS_AS(sign_vector(bad), DataError);
}

TEST_CASE("nodal domains on small graphs") {
    // connected graph, all-positive vector -> one domain
    const AdjacencyMatrix p3 = path3();
    Eigen::Vector3d pos(1.0, 2.0, 1.0);
    pos.normalize();
    const NodalDecomposition one = nodal_domains(p3, pos);
    CHECK(one.domain_count() == 1);
    CHECK(one.p_size == 3);
    CHECK(verify_decomposition(p3, one));

    // P3 eigenvector (1, -sqrt 2, 1)/2 of lambda = -sqrt 2: three domains
    Eigen::Vector3d mid(0.5, -std::sqrt(2.0) / 2.0, 0.5);
    const NodalDecomposition three = nodal_domains(p3, mid);
    CHECK(three.domain_count() == 3);
    CHECK(three.p_size == 2);
    CHECK(three.n_size == 1);
    CHECK(verify_decomposition(p3, three));

    // C4 with alternating signs: four singletons
    AdjacencyMatrix c4;
    c4.n = 4;
    c4.entries = Eigen::MatrixXd::Zero(4, 4);
    for (int i = 0; i < 4; ++i) {
        c4.entries(i, (i + 1) % 4) = 1.0;
        c4.entries((i + 1) % 4, i) = 1.0;
    }
    Eigen::Vector4d alt(0.5, -0.5, 0.5, -0.5);
    const NodalDecomposition four = nodal_domains(c4, alt);
    CHECK(four.domain_count() == 4);
    for (const auto& d : four.domains) CHECK(d.size() == 1);
    CHECK(verify_decomposition(c4, four));

    Eigen::VectorXd wrong(5);
    CHECK_THROWS_AS(nodal_domains(c4, wrong), DataError);
}

TEST_CASE("count and balance") {
    NodalDecomposition dec;
    dec.p_size = 5;
    dec.n_size = 5;
    CHECK(count_and_balance(dec).balance == doctest::Approx(0.5));
    dec.p_size = 10;
    dec.n_size = 0;
    CHECK(count_and_balance(dec).balance == doctest::Approx(1.0));
}

TEST_CASE("pair sign expectation exact values") {
    NodalDecomposition dec;
    dec.p_size = 1;
    dec.n_size = 1;
    const ExactRational r = pair_sign_expectation(dec);
    CHECK(r.num == -1);
    CHECK(r.den == 1);

    dec.p_size = 3;
    dec.n_size = 1;
    const ExactRational r2 = pair_sign_expectation(dec);  // (3 + 0 - 3)/6 = 0
    CHECK(r2.num == 0);

    dec.p_size = 12;
    dec.n_size = 0;
    const ExactRational r3 = pair_sign_expectation(dec);
    CHECK(r3.num == 1);
    CHECK(r3.den == 1);
}

TEST_CASE("pair sign expectation equals brute force enumeration") {
    CounterRng rng(55);
    for (int n : {2, 3, 17, 100, 200}) {
        NodalDecomposition dec;
        dec.signs.resize(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            const double u = rng.uniform();
            dec.signs[static_cast<size_t>(i)] = u < 0.45 ? 1 : (u < 0.9 ? -1 : 0);
        }
        dec.p_size = dec.n_size = dec.zero_count = 0;
        for (int s : dec.signs) {
            if (s > 0) ++dec.p_size;
            else if (s < 0) ++dec.n_size;
            else ++dec.zero_count;
        }
        if (dec.p_size + dec.n_size < 2) continue;
        const ExactRational got = pair_sign_expectation(dec);
        const auto [num, den] = pair_sign_brute(dec.signs);
        CHECK(got.num * den == num * got.den);  // exact rational equality
        CHECK(got.zero_flagged == (dec.zero_count > 0));
    }
}

TEST_CASE("sign sum") {
    Eigen::Vector4d v(0.5, 0.5, -0.5, -0.5);
    CHECK(sign_sum(v) == 0);
    Eigen::Vector3d w(0.1, 0.2, 0.3);
    CHECK(sign_sum(w) == 3);
}

TEST_CASE("sign sum squared identity") {
    // sign_sum^2 = n + sum_{i != j} sign(v_i v_j) when no zero signs
    CounterRng rng(77);
    for (int n : {5, 23, 50}) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v(i) = rng.normal();
        const std::vector<int> s = sign_vector(v);
        long long cross = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) cross += s[i] * s[j];
        const long ss = sign_sum(v);
        CHECK(ss * ss == n + cross);
    }
}

TEST_CASE("leading eigenvector of a connected sample has one domain") {
    const AdjacencyMatrix a = sample_gnp(40, 0.5, 12);
    // connectivity: one BFS from vertex 0 must reach everyone
    Eigen::VectorXd flat = Eigen::VectorXd::Ones(40);
    const NodalDecomposition probe = nodal_domains(a, flat / flat.norm());
    REQUIRE(probe.domain_count() == 1);  // graph connected
    const Spectrum spec = eigendecompose(SymmetricMatrix(a.entries));
    const NodalDecomposition lead = nodal_domains(a, spec.eigenvectors.col(0));
    CHECK(lead.domain_count() == 1);  // Perron-Frobenius
}

TEST_CASE("domains never span graph components") {
    // two disjoint triangles, all-positive vector: two domains
    AdjacencyMatrix a;
    a.n = 6;
    a.entries = Eigen::MatrixXd::Zero(6, 6);
    for (int base : {0, 3})
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                a.entries(base + i, base + j) = 1.0;
                a.entries(base + j, base + i) = 1.0;
            }
    Eigen::VectorXd v = Eigen::VectorXd::Ones(6).normalized();
    const NodalDecomposition dec = nodal_domains(a, v);
    CHECK(dec.domain_count() == 2);
    CHECK(verify_decomposition(a, dec));
}

TEST_CASE("bulk eigenvectors of gnp have no zero coordinates") {
    // 20 trials at n = 200: every bulk eigenvector free of zero signs
    long zero_free = 0, total = 0;
    for (std::uint64_t t = 0; t < 20; ++t) {
        const AdjacencyMatrix a = sample_gnp(200, 0.5, 1000 + t);
        const Spectrum spec = eigendecompose(SymmetricMatrix(a.entries));
        for (int alpha : {60, 100, 140}) {
            const NodalDecomposition dec = nodal_domains(a, spec.eigenvectors.col(alpha - 1));
            ++total;
            if (dec.zero_count == 0) ++zero_free;
        }
    }
    CHECK(static_cast<double>(zero_free) / total >= 0.99);
}

TEST_CASE("json serialization shape") {
    const AdjacencyMatrix p3 = path3();
    Eigen::Vector3d mid(0.5, -std::sqrt(2.0) / 2.0, 0.5);
    const std::string js = nodal_to_json(nodal_domains(p3, mid));
    CHECK(js.find("\"p_size\":2") != std::string::npos);
    CHECK(js.find("\"n_size\":1") != std::string::npos);
    CHECK(js.find("\"zero_count\":0") != std::string::npos);
}

TEST_SUITE_END();
