#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "nodallab/ensembles.hpp"

namespace nodallab {

// Vertices split by eigenvector sign; `domains` lists the connected
// components of constant nonzero sign. Vertices with sign 0 are reported
// separately and belong to no domain.
struct NodalDecomposition {
    std::vector<int> signs;                  // -1, 0, +1 per vertex
    std::vector<std::vector<int>> domains;   // sorted vertex lists
    long p_size = 0;
    long n_size = 0;
    long zero_count = 0;

    long domain_count() const { return static_cast<long>(domains.size()); }
};

struct ExactRational {
    long long num = 0;
    long long den = 1;
    bool zero_flagged = false;  // computed over nonzero-sign pairs only

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

inline constexpr double kDefaultZeroTol = 1e-12;

// sign(v_i), with |v_i| <= zero_tol * max_j |v_j| mapped to 0.
std::vector<int> sign_vector(const Eigen::VectorXd& v, double zero_tol = kDefaultZeroTol);

NodalDecomposition nodal_domains(const AdjacencyMatrix& a, const Eigen::VectorXd& v,
                                 double zero_tol = kDefaultZeroTol);

struct BalanceSummary {
    long domain_count = 0;
    double balance = 0.0;  // max(|P|, |N|)/n
};
BalanceSummary count_and_balance(const NodalDecomposition& dec);

// E sign(v(k) v(l)) over a uniform random distinct pair, exactly:
// [C(|P|,2) + C(|N|,2) - |P||N|] / C(n,2). With zero-sign vertices present
// the pair set shrinks to nonzero-sign vertices and the result is flagged.
ExactRational pair_sign_expectation(const NodalDecomposition& dec);

long sign_sum(const Eigen::VectorXd& v, double zero_tol = kDefaultZeroTol);

std::string nodal_to_json(const NodalDecomposition& dec);

// Re-traversal that independently verifies every domain is connected and
// sign-constant, and that domains partition the nonzero-sign vertices.
bool verify_decomposition(const AdjacencyMatrix& a, const NodalDecomposition& dec);

}  // namespace nodallab
