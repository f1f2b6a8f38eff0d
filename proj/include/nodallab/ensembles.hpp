#pragma once
#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nodallab/common.hpp"
#include "nodallab/rng.hpp"

namespace nodallab {

// Symmetric 0/1 matrix with zero diagonal.
struct AdjacencyMatrix {
    int n = 0;
    Eigen::MatrixXd entries;

    std::vector<std::pair<int, int>> edge_list() const;
    long edge_count() const;
};

// Dense symmetric storage; construction mirrors the upper triangle so
// entries(i,j) == entries(j,i) holds bit-exactly.
struct SymmetricMatrix {
    int n = 0;
    Eigen::MatrixXd entries;

    SymmetricMatrix() = default;
    explicit SymmetricMatrix(Eigen::MatrixXd m);
};

// [[D, W^T], [W, B]] with D the leading 2x2 principal block.
struct BlockDecomposition {
    Eigen::Matrix2d D;
    Eigen::MatrixXd W;  // (n-2) x 2
    Eigen::MatrixXd B;  // (n-2) x (n-2)

    SymmetricMatrix reassemble() const;
};

struct EnsembleConfig {
    int n = 0;
    double p = 0.5;
    std::uint64_t seed = 0;
    std::string ensemble = "gnp";  // gnp | goe | lindeberg
};

// A~_p together with the centered zero-diagonal form H; both share the
// eigenvectors of the adjacency matrix up to the rank-one shift.
struct NormalizedPair {
    SymmetricMatrix tilde_a;    // A/sqrt(p(1-p)n) - sqrt(p/((1-p)n)) I
    SymmetricMatrix centered;   // H: zero diagonal, entries +sqrt((1-p)/p)/sqrt(n) or -sqrt(p/(1-p))/sqrt(n)
};

AdjacencyMatrix sample_gnp(int n, double p, std::uint64_t seed);

NormalizedPair normalize_shifted(const AdjacencyMatrix& a, double p);

SymmetricMatrix sample_goe(int n, std::uint64_t seed);

// Zero-diagonal matrix with the two-point entry law of the centered form H.
SymmetricMatrix sample_centered_wigner(int n, double p, std::uint64_t seed);

BlockDecomposition block_decompose(const SymmetricMatrix& s);

// Diagonal-swap interpolation family: off-diagonal entries follow `base`
// (zero diagonal required); diagonal entry i is sum_{j<=beta} inc(j-1,i)
// plus inc(beta,i) when i <= gamma. Endpoints: (0,0) is base itself and
// (beta,n) equals (beta+1,0).
SymmetricMatrix lindeberg_matrix(const SymmetricMatrix& base, const Eigen::MatrixXd& increments,
                                 int beta, int gamma);

// Gaussian draws with variance 2/n^2, shape (n+1) x n, for the family above.
Eigen::MatrixXd lindeberg_increments(int n, std::uint64_t seed);

// Entry values of the two-point law (3-style normalization): returns
// {+sqrt((1-p)/p)/sqrt(n), -sqrt(p/(1-p))/sqrt(n)}.
std::pair<double, double> centered_entry_values(int n, double p);

}  // namespace nodallab
