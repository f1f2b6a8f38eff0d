#include "nodallab/ensembles.hpp"

#include <cmath>

namespace nodallab {

std::vector<std::pair<int, int>> AdjacencyMatrix::edge_list() const {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (entries(i, j) != 0.0) edges.emplace_back(i, j);
    return edges;
}

long AdjacencyMatrix::edge_count() const {
    long c = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (entries(i, j) != 0.0) ++c;
    return c;
}

SymmetricMatrix::SymmetricMatrix(Eigen::MatrixXd m) {
    if (m.rows() != m.cols()) throw DataError("SymmetricMatrix: input is not square");
    n = static_cast<int>(m.rows());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) m(j, i) = m(i, j);
    entries = std::move(m);
}

SymmetricMatrix BlockDecomposition::reassemble() const {
    const int m = static_cast<int>(B.rows()) + 2;
    Eigen::MatrixXd full(m, m);
    full.topLeftCorner(2, 2) = D;
    full.topRightCorner(2, m - 2) = W.transpose();
    full.bottomLeftCorner(m - 2, 2) = W;
    full.bottomRightCorner(m - 2, m - 2) = B;
    return SymmetricMatrix(std::move(full));
}

AdjacencyMatrix sample_gnp(int n, double p, std::uint64_t seed) {
    if (n < 2) throw ConfigError("sample_gnp: n must be at least 2");
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("sample_gnp: p must lie in [0,1]");
    CounterRng rng(CounterRng::derive(seed, 0x6770));  // tag 'gp'
    AdjacencyMatrix a;
    a.n = n;
    a.entries = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.bernoulli(p)) {
                a.entries(i, j) = 1.0;
                a.entries(j, i) = 1.0;
            }
    return a;
}

NormalizedPair normalize_shifted(const AdjacencyMatrix& a, double p) {
    if (!(p > 0.0 && p < 1.0)) throw ConfigError("normalize_shifted: p must lie in (0,1)");
    const int n = a.n;
    const double scale = 1.0 / std::sqrt(p * (1.0 - p) * n);
    const double diag_shift = std::sqrt(p / ((1.0 - p) * n));

    Eigen::MatrixXd ta = scale * a.entries;
    ta.diagonal().array() -= diag_shift;

    // Centered form built entrywise from the two-point law so the diagonal is
    // exactly zero: entry = scale*A_ij - sqrt(p/(1-p))/sqrt(n) off-diagonal.
    const auto [hi, lo] = centered_entry_values(n, p);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double v = a.entries(i, j) != 0.0 ? hi : lo;
            h(i, j) = v;
            h(j, i) = v;
        }
    NormalizedPair out;
    out.tilde_a = SymmetricMatrix(std::move(ta));
    out.centered = SymmetricMatrix(std::move(h));
    return out;
}

std::pair<double, double> centered_entry_values(int n, double p) {
    const double rootn = std::sqrt(static_cast<double>(n));
    return {std::sqrt((1.0 - p) / p) / rootn, -std::sqrt(p / (1.0 - p)) / rootn};
}

SymmetricMatrix sample_goe(int n, std::uint64_t seed) {
    if (n < 2) throw ConfigError("sample_goe: n must be at least 2");
    CounterRng rng(CounterRng::derive(seed, 0x676f));  // tag 'go'
    Eigen::MatrixXd m(n, n);
    const double off = 1.0 / std::sqrt(static_cast<double>(n));
    const double diag = std::sqrt(2.0 / n);
    for (int i = 0; i < n; ++i) {
        m(i, i) = diag * rng.normal();
        for (int j = i + 1; j < n; ++j) m(i, j) = off * rng.normal();
    }
    return SymmetricMatrix(std::move(m));
}

SymmetricMatrix sample_centered_wigner(int n, double p, std::uint64_t seed) {
    if (n < 2) throw ConfigError("sample_centered_wigner: n must be at least 2");
    if (!(p > 0.0 && p < 1.0)) throw ConfigError("sample_centered_wigner: p must lie in (0,1)");
    CounterRng rng(CounterRng::derive(seed, 0x6377));  // tag 'cw'
    const auto [hi, lo] = centered_entry_values(n, p);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) m(i, j) = rng.bernoulli(p) ? hi : lo;
    return SymmetricMatrix(std::move(m));
}

BlockDecomposition block_decompose(const SymmetricMatrix& s) {
    if (s.n < 4) throw ConfigError("block_decompose: need n >= 4");
    BlockDecomposition b;
    b.D = s.entries.topLeftCorner(2, 2);
    b.W = s.entries.bottomLeftCorner(s.n - 2, 2);
    b.B = s.entries.bottomRightCorner(s.n - 2, s.n - 2);
    return b;
}

Eigen::MatrixXd lindeberg_increments(int n, std::uint64_t seed) {
    CounterRng rng(CounterRng::derive(seed, 0x6c69));  // tag 'li'
    Eigen::MatrixXd inc(n + 1, n);
    const double sd = std::sqrt(2.0) / n;
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i < n; ++i) inc(j, i) = sd * rng.normal();
    return inc;
}

SymmetricMatrix lindeberg_matrix(const SymmetricMatrix& base, const Eigen::MatrixXd& increments,
                                 int beta, int gamma) {
    const int n = base.n;
    if (base.entries.diagonal().cwiseAbs().maxCoeff() != 0.0)
        throw DataError("lindeberg_matrix: base must have zero diagonal");
    if (beta < 0 || beta > n || gamma < 0 || gamma > n)
        throw ConfigError("lindeberg_matrix: index out of range");
    if (increments.rows() < n + 1 || increments.cols() < n)
        throw ConfigError("lindeberg_matrix: increments must be (n+1) x n");
    Eigen::MatrixXd m = base.entries;
    for (int i = 0; i < n; ++i) {
        double d = 0.0;
        for (int j = 0; j < beta; ++j) d += increments(j, i);
        if (i < gamma) d += increments(beta, i);
        m(i, i) = d;
    }
    return SymmetricMatrix(std::move(m));
}

}  // namespace nodallab
