#include "nodallab/greenlaw.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "nodallab/rng.hpp"

namespace nodallab {

Eigen::MatrixXcd resolvent_rank_one_expand(const Eigen::MatrixXcd& r, double h, int order,
                                           int pivot) {
    if (order < 1) throw ConfigError("resolvent_rank_one_expand: order must be >= 1");
    const long n = r.rows();
    if (pivot < 0 || pivot >= n) throw ConfigError("resolvent_rank_one_expand: pivot out of range");
    // geometric factor sum_{l<=k} (-h R_pp)^l
    const Complex rpp = r(pivot, pivot);
    Complex geom(0.0, 0.0), term(1.0, 0.0);
    for (int l = 0; l <= order; ++l) {
        geom += term;
        term *= -h * rpp;
    }
    Eigen::MatrixXcd s = r;
    s.noalias() -= (h * geom) * (r.col(pivot) * r.row(pivot));
    return s;
}

double test_function_eval(TestFunction f, double x) {
    switch (f) {
        case TestFunction::Logistic:
            return 1.0 / (1.0 + std::exp(-x));
        case TestFunction::GaussianBump:
            return std::exp(-x * x / 8.0);
        case TestFunction::SplineCap: {
            // C^2 cubic-spline cap of [0, 4] onto [0, 1], clamped outside
            const double t = std::clamp(x / 4.0, 0.0, 1.0);
            return t * t * (3.0 - 2.0 * t);
        }
    }
    return 0.0;
}

namespace {

double im_stieltjes(const Eigen::VectorXd& ev, double e, double eta) {
    double acc = 0.0;
    for (long i = 0; i < ev.size(); ++i) {
        const double d = ev(i) - e;
        acc += eta / (d * d + eta * eta);
    }
    return acc / static_cast<double>(ev.size());
}

double simpson(const Eigen::VectorXd& ev, double e1, double e2, double eta, int points) {
    if (points < 3) points = 3;
    if (points % 2 == 0) ++points;
    const double h = (e2 - e1) / (points - 1);
    double acc = im_stieltjes(ev, e1, eta) + im_stieltjes(ev, e2, eta);
    for (int i = 1; i < points - 1; ++i)
        acc += (i % 2 == 1 ? 4.0 : 2.0) * im_stieltjes(ev, e1 + i * h, eta);
    return acc * h / 3.0;
}

}  // namespace

ImIntegral im_stieltjes_integral(const Eigen::VectorXd& eigenvalues, double e1, double e2,
                                 double eta, int points) {
    ImIntegral out;
    out.value = simpson(eigenvalues, e1, e2, eta, points);
    out.refined = simpson(eigenvalues, e1, e2, eta, 10 * points + 1);
    return out;
}

double comparison_statistic(const Eigen::VectorXd& eigenvalues, double e1, double e2, double eta,
                            TestFunction f, int integral_points) {
    const double integral =
        simpson(eigenvalues, e1, e2, eta, integral_points) * static_cast<double>(eigenvalues.size());
    return test_function_eval(f, integral);
}

SweepResult interpolation_local_law_sweep(const SymmetricMatrix& base,
                                          const Eigen::MatrixXd& increments,
                                          const SweepParams& params) {
    const int n = base.n;
    std::vector<int> gammas = params.gamma_checkpoints;
    if (gammas.empty()) gammas = {0, n / 4, n / 2, 3 * n / 4, n};
    const double eta = std::pow(double(n), -2.0 / 3.0 - 2.0 * params.eps);
    const double win = std::pow(double(n), -2.0 / 3.0 + params.eps);
    std::vector<int> dir_idx;
    for (int j = 0; j < std::min(n, params.directions); ++j)
        dir_idx.push_back(static_cast<int>(static_cast<long>(j) * n /
                                           std::min(n, params.directions)));

    SweepResult out;
    for (int beta = 0; beta <= n; ++beta) {
        for (int gamma : gammas) {
            if (beta == n && gamma > 0) continue;  // path ends at (n, 0)
            CounterRng probe(CounterRng::derive(
                params.grid_seed, static_cast<std::uint64_t>(beta) * (n + 1) + gamma));
            std::vector<double> grid;
            for (int i = 0; i < params.grid_points; ++i)
                grid.push_back(2.0 - win + 2.0 * win * probe.uniform());
            const SymmetricMatrix w = lindeberg_matrix(base, increments, beta, gamma);
            const Spectrum spec = eigendecompose(w);
            // overlaps of the chosen basis directions
            const int m = static_cast<int>(dir_idx.size());
            Eigen::MatrixXd O(n, m);
            for (int j = 0; j < m; ++j) O.col(j) = spec.eigenvectors.row(dir_idx[j]).transpose();
            double best = 0.0;
            for (double E : grid) {
                const Complex z(E, eta);
                const Complex msc = semicircle_stieltjes(z);
                Eigen::MatrixXcd scaled(n, m);
                for (int a = 0; a < n; ++a) {
                    const Complex d = 1.0 / (spec.eigenvalues(a) - z);
                    for (int j = 0; j < m; ++j) scaled(a, j) = O(a, j) * d;
                }
                const Eigen::MatrixXcd quad = O.transpose().cast<Complex>() * scaled;
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j) {
                        const Complex target = i == j ? msc : Complex(0.0, 0.0);
                        best = std::max(best, std::abs(quad(i, j) - target));
                    }
            }
            out.rows.push_back({beta, gamma, best});
            out.max_residual = std::max(out.max_residual, best);
        }
    }
    return out;
}

LindebergGap lindeberg_gap(const ComparisonConfig& cfg, int n, const EnsembleSampler& ensemble_a,
                           const EnsembleSampler& ensemble_b, long trials, std::uint64_t seed,
                           int workers) {
    if (trials < 2) throw ConfigError("lindeberg_gap: need at least 2 trials");
    const double win = std::pow(double(n), -2.0 / 3.0 + cfg.eps);
    const double eta = std::pow(double(n), -2.0 / 3.0 - cfg.eps);
    const double e1 = 2.0 - win, e2 = 2.0 + win;

    std::vector<double> va(static_cast<size_t>(trials)), vb(static_cast<size_t>(trials));
    std::atomic<long> next{0};
    auto worker = [&] {
        for (;;) {
            const long t = next.fetch_add(1);
            if (t >= trials) return;
            const std::uint64_t ts = CounterRng::derive(seed, static_cast<std::uint64_t>(t));
            const Eigen::VectorXd ea = eigenvalues_only(ensemble_a(ts));
            const Eigen::VectorXd eb = eigenvalues_only(ensemble_b(ts));
            va[static_cast<size_t>(t)] =
                comparison_statistic(ea, e1, e2, eta, cfg.f, cfg.integral_points);
            vb[static_cast<size_t>(t)] =
                comparison_statistic(eb, e1, e2, eta, cfg.f, cfg.integral_points);
        }
    };
    std::vector<std::thread> pool;
    for (int k = 1; k < workers; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    LindebergGap out;
    double sa = 0.0, sb = 0.0;
    for (double v : va) sa += v;
    for (double v : vb) sb += v;
    out.mean_a = sa / static_cast<double>(trials);
    out.mean_b = sb / static_cast<double>(trials);
    out.gap = std::abs(out.mean_a - out.mean_b);
    double qa = 0.0, qb = 0.0;
    for (double v : va) qa += (v - out.mean_a) * (v - out.mean_a);
    for (double v : vb) qb += (v - out.mean_b) * (v - out.mean_b);
    const double denom = static_cast<double>(trials) * (static_cast<double>(trials) - 1.0);
    out.std_err = std::sqrt(qa / denom + qb / denom);
    return out;
}

std::string sweep_csv(const SweepResult& r, int n) {
    std::ostringstream os;
    os.precision(17);
    os << "n,beta,gamma,residual\n";
    for (const auto& row : r.rows)
        os << n << "," << row.beta << "," << row.gamma << "," << row.residual << "\n";
    return os.str();
}

std::string sweep_summary_json(const SweepResult& r, int n, const SweepParams& params) {
    nlohmann::json j;
    j["n"] = n;
    j["eps"] = params.eps;
    j["grid_points"] = params.grid_points;
    j["directions"] = params.directions;
    j["path_points"] = r.rows.size();
    j["max_residual"] = r.max_residual;
    return j.dump();
}

}  // namespace nodallab
