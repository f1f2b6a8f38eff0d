#include "nodallab/deloc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "nodallab/rng.hpp"

namespace nodallab {

double polylog_factor(int n) {
    const double L = std::log(static_cast<double>(n));
    return std::pow(L, std::log(L));
}

Eigen::VectorXd linf_deloc(const Spectrum& spec) {
    const int n = spec.n();
    Eigen::VectorXd out(n);
    const double rootn = std::sqrt(static_cast<double>(n));
    for (int a = 0; a < n; ++a) out(a) = rootn * spec.eigenvectors.col(a).cwiseAbs().maxCoeff();
    return out;
}

double no_gaps_mass(const Eigen::VectorXd& v, double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0)) throw ConfigError("no_gaps_mass: fraction in (0,1]");
    const long n = v.size();
    const long k = static_cast<long>(std::ceil(fraction * static_cast<double>(n)));
    std::vector<double> sq(static_cast<size_t>(n));
    for (long i = 0; i < n; ++i) sq[static_cast<size_t>(i)] = v(i) * v(i);
    std::nth_element(sq.begin(), sq.begin() + (k - 1), sq.end());
    double acc = 0.0;
    for (long i = 0; i < k; ++i) acc += sq[static_cast<size_t>(i)];
    // nth_element leaves [0,k) as the k smallest, unordered
    return acc;
}

double isotropic_overlap(const Spectrum& spec, const Eigen::VectorXd& l) {
    if (l.size() != spec.n()) throw DataError("isotropic_overlap: dimension mismatch");
    if (std::abs(l.norm() - 1.0) > 1e-8) throw DataError("isotropic_overlap: l must be unit norm");
    const Eigen::VectorXd ov = spec.eigenvectors.transpose() * l;
    return static_cast<double>(spec.n()) * ov.cwiseAbs2().maxCoeff();
}

Eigen::VectorXd rigidity_residuals(const Spectrum& spec) {
    return rigidity_residuals(spec, classical_locations(spec.n()));
}

Eigen::VectorXd rigidity_residuals(const Spectrum& spec, const Eigen::VectorXd& gamma) {
    const int n = spec.n();
    if (gamma.size() != n) throw DataError("rigidity_residuals: gamma size mismatch");
    Eigen::VectorXd out(n);
    const double n23 = std::pow(static_cast<double>(n), 2.0 / 3.0);
    for (int a = 1; a <= n; ++a) {
        const double idx = static_cast<double>(std::min(a, n - a + 1));
        out(a - 1) = std::abs(spec.eigenvalues(a - 1) - gamma(a - 1)) * std::cbrt(idx) * n23;
    }
    return out;
}

double level_repulsion_min_gap(const Spectrum& spec, double window_halfwidth, double center) {
    if (!(window_halfwidth > 0.0)) throw ConfigError("level_repulsion_min_gap: w > 0 required");
    const double lo = center - window_halfwidth, hi = center + window_halfwidth;
    double prev = std::numeric_limits<double>::quiet_NaN();
    double best = std::numeric_limits<double>::infinity();
    int count = 0;
    // eigenvalues are non-increasing
    for (int a = 0; a < spec.n(); ++a) {
        const double v = spec.eigenvalues(a);
        if (v < lo) break;
        if (v > hi) continue;
        ++count;
        if (count > 1) best = std::min(best, prev - v);
        prev = v;
    }
    return count < 2 ? std::numeric_limits<double>::infinity() : best;
}

double isotropic_law_residual(const Spectrum& spec, const std::vector<double>& grid,
                              const std::vector<Eigen::VectorXd>& directions, double eta) {
    if (!(eta > 0.0)) throw ConfigError("isotropic_law_residual: eta > 0 required");
    const int n = spec.n();
    const int m = static_cast<int>(directions.size());
    Eigen::MatrixXd O(n, m);   // overlaps <v_a, x_j>
    Eigen::MatrixXd X(n, m);
    for (int j = 0; j < m; ++j) {
        if (directions[static_cast<size_t>(j)].size() != n)
            throw DataError("isotropic_law_residual: direction dimension mismatch");
        X.col(j) = directions[static_cast<size_t>(j)];
    }
    O = spec.eigenvectors.transpose() * X;
    const Eigen::MatrixXd ip = X.transpose() * X;  // <x,y> terms
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
            for (int j = 0; j < m; ++j)
                best = std::max(best, std::abs(quad(i, j) - ip(i, j) * msc));
    }
    return best;
}

TypicalityReport typicality_check(const SymmetricMatrix& s, const DelocParams& params,
                                  int minor_samples, std::uint64_t minor_seed) {
    const int n = s.n;
    const double phi = polylog_factor(n);
    const Spectrum spec = eigendecompose(s);
    const double eta = default_eta(n, params.eps_lr);

    TypicalityReport rep;
    rep.rigidity_residuals.resize(static_cast<size_t>(n));
    const Eigen::VectorXd rr = rigidity_residuals(spec);
    Eigen::VectorXd::Map(rep.rigidity_residuals.data(), n) = rr;
    rep.rigidity_max = rr.maxCoeff();
    rep.linf_max = linf_deloc(spec).maxCoeff();
    const Eigen::VectorXd l = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));
    rep.isotropic_overlap = isotropic_overlap(spec, l);
    rep.min_edge_gap =
        level_repulsion_min_gap(spec, params.lr_window_mult * std::pow(double(n), -2.0 / 3.0));

    // isotropic law on the edge window with subsampled basis directions + l
    const double win = std::pow(double(n), -2.0 / 3.0 + 3.0 * params.eps_lr);
    std::vector<double> grid;
    for (int i = 0; i < params.iso_grid_points; ++i)
        grid.push_back(2.0 - win + 2.0 * win * i / std::max(1, params.iso_grid_points - 1));
    std::vector<Eigen::VectorXd> dirs;
    const int nd = std::min(n, params.iso_max_directions);
    for (int j = 0; j < nd; ++j) {
        const int idx = static_cast<int>(static_cast<long>(j) * n / nd);
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
        e(idx) = 1.0;
        dirs.push_back(std::move(e));
    }
    dirs.push_back(l);
    rep.isotropic_law_residual = isotropic_law_residual(spec, grid, dirs, eta);

    rep.thr_isotropic_law = 3.0 * std::pow(double(n), -1.0 / 3.0 + 3.0 * params.iso_law_eps);
    rep.thr_rigidity = std::pow(phi, params.c_re);
    rep.thr_linf = std::pow(phi, params.c_linf);
    rep.thr_iso_overlap = std::pow(double(n), params.iso_overlap_eps);
    rep.thr_level_repulsion = std::pow(double(n), -2.0 / 3.0 - params.lr_gap_eps);
    rep.pass_isotropic_law = rep.isotropic_law_residual < rep.thr_isotropic_law;
    rep.pass_rigidity = rep.rigidity_max <= rep.thr_rigidity;
    rep.pass_linf = rep.linf_max <= rep.thr_linf;
    rep.pass_iso_overlap = rep.isotropic_overlap < rep.thr_iso_overlap;
    rep.pass_level_repulsion = rep.min_edge_gap >= rep.thr_level_repulsion;

    // optional: sampled principal minors; each minor eigenvalue in the edge
    // window must sit within phi^C/n below some parent eigenvalue
    if (minor_samples > 0) {
        CounterRng rng(CounterRng::derive(minor_seed, 0x6d69));
        double worst = 0.0;
        const double lo = 2.0 - params.lr_window_mult * std::pow(double(n), -2.0 / 3.0);
        const double hi = 2.0 + params.lr_window_mult * std::pow(double(n), -2.0 / 3.0);
        for (int t = 0; t < minor_samples; ++t) {
            const int k = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n));
            Eigen::MatrixXd minor(n - 1, n - 1);
            for (int i = 0, ii = 0; i < n; ++i) {
                if (i == k) continue;
                for (int j = 0, jj = 0; j < n; ++j) {
                    if (j == k) continue;
                    minor(ii, jj) = s.entries(i, j);
                    ++jj;
                }
                ++ii;
            }
            const Eigen::VectorXd mu = eigenvalues_only(SymmetricMatrix(minor));
            for (int a = 0; a < mu.size(); ++a) {
                if (mu(a) < lo || mu(a) > hi) continue;
                // deficit: how far the nearest parent eigenvalue above mu is
                double deficit = std::numeric_limits<double>::infinity();
                for (int b = 0; b < n; ++b)
                    if (spec.eigenvalues(b) >= mu(a) - 1e-14)
                        deficit = std::min(deficit, spec.eigenvalues(b) - mu(a));
                worst = std::max(worst, deficit);
            }
        }
        rep.minor_interlace_max = worst;
    }
    return rep;
}

std::string typicality_to_json(const TypicalityReport& rep, int n, const DelocParams& params) {
    nlohmann::json j;
    j["n"] = n;
    j["isotropic_law_residual"] = rep.isotropic_law_residual;
    j["rigidity_max"] = rep.rigidity_max;
    j["linf_max"] = rep.linf_max;
    j["isotropic_overlap"] = rep.isotropic_overlap;
    j["min_edge_gap"] = std::isinf(rep.min_edge_gap) ? -1.0 : rep.min_edge_gap;
    if (rep.minor_interlace_max) j["minor_interlace_max"] = *rep.minor_interlace_max;
    j["thresholds"] = {{"isotropic_law", rep.thr_isotropic_law},
                       {"rigidity", rep.thr_rigidity},
                       {"linf", rep.thr_linf},
                       {"iso_overlap", rep.thr_iso_overlap},
                       {"level_repulsion", rep.thr_level_repulsion}};
    j["params"] = {{"eps_lr", params.eps_lr},       {"rho", params.rho},
                   {"c_re", params.c_re},           {"c_linf", params.c_linf},
                   {"iso_overlap_eps", params.iso_overlap_eps},
                   {"iso_law_eps", params.iso_law_eps},
                   {"lr_window_mult", params.lr_window_mult},
                   {"lr_gap_eps", params.lr_gap_eps}};
    j["flags"] = {{"isotropic_law", rep.pass_isotropic_law},
                  {"rigidity", rep.pass_rigidity},
                  {"linf", rep.pass_linf},
                  {"iso_overlap", rep.pass_iso_overlap},
                  {"level_repulsion", rep.pass_level_repulsion},
                  {"all", rep.all_pass()}};
    return j.dump();
}

std::string typicality_csv_header() {
    return "iso_law_residual,rigidity_max,linf_max,iso_overlap,min_edge_gap,all_pass";
}

std::string typicality_csv_row(const TypicalityReport& rep) {
    std::ostringstream os;
    os.precision(17);
    os << rep.isotropic_law_residual << "," << rep.rigidity_max << "," << rep.linf_max << ","
       << rep.isotropic_overlap << "," << rep.min_edge_gap << "," << (rep.all_pass() ? 1 : 0);
    return os.str();
}

}  // namespace nodallab
