#include "nodallab/nodal.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "json.hpp"

namespace nodallab {

std::vector<int> sign_vector(const Eigen::VectorXd& v, double zero_tol) {
    const long n = v.size();
    double maxabs = 0.0;
    for (long i = 0; i < n; ++i) {
        if (!std::isfinite(v(i))) throw DataError("sign_vector: non-finite entry");
        maxabs = std::max(maxabs, std::abs(v(i)));
    }
    const double cut = zero_tol * maxabs;
    std::vector<int> s(static_cast<size_t>(n));
    for (long i = 0; i < n; ++i) {
        if (std::abs(v(i)) <= cut)
            s[i] = 0;
        else
            s[i] = v(i) > 0.0 ? 1 : -1;
    }
    return s;
}

NodalDecomposition nodal_domains(const AdjacencyMatrix& a, const Eigen::VectorXd& v,
                                 double zero_tol) {
    if (v.size() != a.n) throw DataError("nodal_domains: dimension mismatch");
    NodalDecomposition dec;
    dec.signs = sign_vector(v, zero_tol);
    const int n = a.n;
    for (int i = 0; i < n; ++i) {
        if (dec.signs[i] > 0) ++dec.p_size;
        else if (dec.signs[i] < 0) ++dec.n_size;
        else ++dec.zero_count;
    }
    // Iterative BFS restricted to same-sign neighbors.
    std::vector<char> seen(static_cast<size_t>(n), 0);
    std::deque<int> queue;
    for (int start = 0; start < n; ++start) {
        if (seen[start] || dec.signs[start] == 0) continue;
        const int s = dec.signs[start];
        std::vector<int> comp;
        seen[start] = 1;
        queue.push_back(start);
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop_front();
            comp.push_back(u);
            for (int w = 0; w < n; ++w) {
                if (!seen[w] && dec.signs[w] == s && a.entries(u, w) != 0.0) {
                    seen[w] = 1;
                    queue.push_back(w);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        dec.domains.push_back(std::move(comp));
    }
    return dec;
}

BalanceSummary count_and_balance(const NodalDecomposition& dec) {
    BalanceSummary out;
    out.domain_count = dec.domain_count();
    const long n = dec.p_size + dec.n_size + dec.zero_count;
    out.balance = n > 0 ? static_cast<double>(std::max(dec.p_size, dec.n_size)) / n : 0.0;
    return out;
}

ExactRational pair_sign_expectation(const NodalDecomposition& dec) {
    const long long P = dec.p_size;
    const long long N = dec.n_size;
    const long long m = P + N;  // nonzero-sign vertices
    if (P + N + dec.zero_count < 2) throw ConfigError("pair_sign_expectation: need n >= 2");
    if (m < 2) throw ConfigError("pair_sign_expectation: fewer than 2 nonzero-sign vertices");
    ExactRational r;
    r.num = P * (P - 1) / 2 + N * (N - 1) / 2 - P * N;
    r.den = m * (m - 1) / 2;
    r.zero_flagged = dec.zero_count > 0;
    const long long g = std::gcd(std::llabs(r.num), r.den);
    if (g > 1) {
        r.num /= g;
        r.den /= g;
    }
    return r;
}

long sign_sum(const Eigen::VectorXd& v, double zero_tol) {
    long acc = 0;
    for (int s : sign_vector(v, zero_tol)) acc += s;
    return acc;
}

std::string nodal_to_json(const NodalDecomposition& dec) {
    nlohmann::json j;
    j["signs"] = dec.signs;
    j["domains"] = dec.domains;
    j["p_size"] = dec.p_size;
    j["n_size"] = dec.n_size;
    j["zero_count"] = dec.zero_count;
    return j.dump();
}

bool verify_decomposition(const AdjacencyMatrix& a, const NodalDecomposition& dec) {
    const int n = a.n;
    std::vector<int> owner(static_cast<size_t>(n), -1);
    for (size_t d = 0; d < dec.domains.size(); ++d) {
        const auto& comp = dec.domains[d];
        if (comp.empty()) return false;
        const int s = dec.signs[static_cast<size_t>(comp[0])];
        if (s == 0) return false;
        for (int v : comp) {
            if (dec.signs[static_cast<size_t>(v)] != s) return false;
            if (owner[static_cast<size_t>(v)] != -1) return false;
            owner[static_cast<size_t>(v)] = static_cast<int>(d);
        }
        // connectivity within the domain by fresh traversal
        std::vector<char> seen(comp.size(), 0);
        std::deque<size_t> q;
        seen[0] = 1;
        q.push_back(0);
        size_t reached = 1;
        while (!q.empty()) {
            const size_t u = q.front();
            q.pop_front();
            for (size_t w = 0; w < comp.size(); ++w)
                if (!seen[w] && a.entries(comp[u], comp[w]) != 0.0) {
                    seen[w] = 1;
                    ++reached;
                    q.push_back(w);
                }
        }
        if (reached != comp.size()) return false;
    }
    for (int v = 0; v < n; ++v)
        if (dec.signs[static_cast<size_t>(v)] != 0 && owner[static_cast<size_t>(v)] == -1)
            return false;
    // maximality: any edge between same-sign vertices stays inside one domain
    for (int v = 0; v < n; ++v)
        for (int w = v + 1; w < n; ++w)
            if (a.entries(v, w) != 0.0 && dec.signs[static_cast<size_t>(v)] != 0 &&
                dec.signs[static_cast<size_t>(v)] == dec.signs[static_cast<size_t>(w)] &&
                owner[static_cast<size_t>(v)] != owner[static_cast<size_t>(w)])
                return false;
    return true;
}

}  // namespace nodallab
