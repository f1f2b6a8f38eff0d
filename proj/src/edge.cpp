#include "nodallab/edge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "nodallab/rng.hpp"

namespace nodallab {

namespace {

constexpr double kPoleGuard = 1e-12;
constexpr double kUntouchedTol = 1e-10;

// Eigenvalues of a symmetric 2x2 [[a,b],[b,c]].
void eig2(const Eigen::Matrix2d& t, double& hi, double& lo) {
    const double mean = 0.5 * (t(0, 0) + t(1, 1));
    const double rad = std::hypot(0.5 * (t(0, 0) - t(1, 1)), t(0, 1));
    hi = mean + rad;
    lo = mean - rad;
}

double branch(const DetectionSystem& sys, double E, bool upper) {
    double hi, lo;
    eig2(detection_matrix(sys, E), hi, lo);
    return upper ? hi : lo;
}

// Strictly increasing branch on an interval free of poles of G.
bool bisect_branch(const DetectionSystem& sys, double lo, double hi, bool upper, double& root) {
    double flo = branch(sys, lo, upper);
    double fhi = branch(sys, hi, upper);
    if (!std::isfinite(flo) || !std::isfinite(fhi)) return false;
    if (!(flo < 0.0 && fhi > 0.0)) return false;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double fm = branch(sys, mid, upper);
        if (fm < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    root = 0.5 * (lo + hi);
    return true;
}

}  // namespace

DetectionSystem make_detection_system(const SymmetricMatrix& s) {
    DetectionSystem sys;
    sys.blocks = block_decompose(s);
    sys.b_spectrum = eigendecompose(SymmetricMatrix(sys.blocks.B));
    sys.w1 = sys.blocks.W.col(0);
    sys.w2 = sys.blocks.W.col(1);
    sys.d11 = sys.blocks.D(0, 0);
    sys.d12 = sys.blocks.D(0, 1);
    sys.d22 = sys.blocks.D(1, 1);
    sys.overlaps = sys.b_spectrum.eigenvectors.transpose() * sys.blocks.W;
    return sys;
}

Eigen::Matrix2d detection_matrix(const DetectionSystem& sys, double E) {
    const int n = sys.b_dim();
    double g11 = 0.0, g12 = 0.0, g22 = 0.0;
    for (int a = 0; a < n; ++a) {
        const double d = sys.b_spectrum.eigenvalues(a) - E;
        if (std::abs(d) <= kPoleGuard)
            throw SingularityError("detection_matrix: E within guard band of an eigenvalue of B");
        const double o1 = sys.overlaps(a, 0), o2 = sys.overlaps(a, 1);
        g11 += o1 * o1 / d;
        g12 += o1 * o2 / d;
        g22 += o2 * o2 / d;
    }
    Eigen::Matrix2d t;
    t(0, 0) = g11 - sys.d11 + E;
    t(0, 1) = g12 - sys.d12;
    t(1, 0) = t(0, 1);
    t(1, 1) = g22 - sys.d22 + E;
    return t;
}

DetectionRoots detection_roots(const DetectionSystem& sys, double lo, double hi) {
    if (!(lo < hi)) throw ConfigError("detection_roots: empty window");
    const int n = sys.b_dim();
    DetectionRoots out;
    // breakpoints: window edges plus the eigenvalues of B inside
    std::vector<double> brk{lo};
    for (int a = n - 1; a >= 0; --a) {  // ascending
        const double mu = sys.b_spectrum.eigenvalues(a);
        if (mu > lo && mu < hi) brk.push_back(mu);
        if (mu > lo - kUntouchedTol && mu < hi + kUntouchedTol &&
            sys.overlaps.row(a).norm() <= kUntouchedTol)
            out.untouched.push_back(mu);
    }
    brk.push_back(hi);
    for (size_t k = 0; k + 1 < brk.size(); ++k) {
        double a = brk[k], b = brk[k + 1];
        if (k > 0) a += 2.0 * kPoleGuard;               // interior left endpoint is a pole
        if (k + 2 < brk.size()) b -= 2.0 * kPoleGuard;  // interior right endpoint is a pole
        if (!(a < b)) continue;
        double root;
        for (bool upper : {false, true}) {
            if (bisect_branch(sys, a, b, upper, root))
                out.roots.push_back(root);
            else if (!std::isfinite(branch(sys, a, upper)) ||
                     !std::isfinite(branch(sys, b, upper)))
                ++out.warnings;
        }
    }
    std::sort(out.roots.begin(), out.roots.end(), std::greater<double>());
    std::sort(out.untouched.begin(), out.untouched.end(), std::greater<double>());
    return out;
}

Eigen::VectorXd reconstruct_eigenvector(const DetectionSystem& sys, double lambda) {
    const Eigen::Matrix2d t = detection_matrix(sys, lambda);
    const double scale = std::max({std::abs(t(0, 0)), std::abs(t(0, 1)), std::abs(t(1, 1)), 1.0});
    const Eigen::Vector2d cand1(t(0, 1), -t(0, 0));  // orthogonal to row 1
    const Eigen::Vector2d cand2(t(1, 1), -t(0, 1));  // orthogonal to row 2
    Eigen::Vector2d q = cand1.norm() >= cand2.norm() ? cand1 : cand2;
    if (q.norm() <= 1e-10 * scale)
        throw MultiplicityError("reconstruct_eigenvector: 2-dimensional null space");
    const int n = sys.b_dim();
    Eigen::VectorXd tail = Eigen::VectorXd::Zero(n);
    for (int a = 0; a < n; ++a) {
        const double d = sys.b_spectrum.eigenvalues(a) - lambda;
        const double coef = (sys.overlaps(a, 0) * q(0) + sys.overlaps(a, 1) * q(1)) / d;
        tail -= coef * sys.b_spectrum.eigenvectors.col(a);
    }
    Eigen::VectorXd v(n + 2);
    v(0) = q(0);
    v(1) = q(1);
    v.tail(n) = tail;
    v.normalize();
    // deterministic orientation, as in Spectrum
    int arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    return v;
}

int sign_formula(const DetectionSystem& sys, double E) {
    const Eigen::Matrix2d t = detection_matrix(sys, E);
    const double num = t(0, 0);  // w1' G w1 - d11 + E
    const double den = t(0, 1);  // w1' G w2 - d12
    if (std::abs(den) <= 1e-12)
        throw DegenerateSignError("sign_formula: denominator below tolerance");
    return -num / den >= 0.0 ? 1 : -1;
}

Eigen::VectorXd secular_eigenvalues(const SecularProblem& prob) {
    if (!(prob.c > 0.0)) throw ConfigError("secular_eigenvalues: c must be positive");
    const int n = prob.m_spectrum.n();
    if (prob.l.size() != n) throw DataError("secular_eigenvalues: l dimension mismatch");
    const Eigen::VectorXd& nu = prob.m_spectrum.eigenvalues;
    const Eigen::VectorXd ov = prob.m_spectrum.eigenvectors.transpose() * prob.l;
    const Eigen::VectorXd ov2 = ov.cwiseAbs2();
    const double inv_c = 1.0 / prob.c;

    auto secular = [&](double mu) {
        double acc = inv_c;
        for (int a = 0; a < n; ++a) acc += ov2(a) / (nu(a) - mu);
        return acc;  // increasing in mu between poles
    };

    Eigen::VectorXd out(n);
    constexpr double kEps = std::numeric_limits<double>::epsilon();
    for (int j = 0; j < n; ++j) {
        const double slot_lo = nu(j);
        const double slot_hi = j == 0 ? nu(0) + prob.c * prob.l.squaredNorm() + 1.0 : nu(j - 1);
        const double span = std::max(slot_hi - slot_lo, 1e-300);
        // bracket offset: clear of the poles by several ulps even when the
        // slot is much narrower than the eigenvalue magnitudes
        const double off =
            std::max(1e-15 * span, 4.0 * kEps * (std::abs(slot_lo) + std::abs(slot_hi) + 1.0));
        double lo = slot_lo + off;
        double hi = slot_hi - (j == 0 ? 0.0 : off);
        double root;
        if (!(lo < hi)) {
            root = slot_lo;  // degenerate slot (tied eigenvalues)
        } else {
            double flo = secular(lo), fhi = secular(hi);
            if (flo >= 0.0)
                root = slot_lo;  // no pole below: nu_j persists
            else if (fhi <= 0.0)
                root = slot_hi;  // no pole above: nu_{j-1} persists here
            else {
                for (int it = 0; it < 200; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (mid == lo || mid == hi) break;
                    if (secular(mid) < 0.0)
                        lo = mid;
                    else
                        hi = mid;
                }
                root = 0.5 * (lo + hi);
            }
        }
        out(j) = std::min(std::max(root, slot_lo), slot_hi);  // exact interlacing
    }
    return out;
}

StickingReport sticking_report(const SecularProblem& prob, int beta) {
    const int n = prob.m_spectrum.n();
    if (beta < 1 || beta >= n) throw ConfigError("sticking_report: beta out of range");
    const Eigen::VectorXd mu = secular_eigenvalues(prob);
    const Eigen::VectorXd ov = prob.m_spectrum.eigenvectors.transpose() * prob.l;
    StickingReport rep;
    rep.gap = prob.m_spectrum.eigenvalues(beta - 1) - mu(beta);  // nu_beta - mu_{beta+1}
    if (rep.gap > 0.0) {
        rep.overlap_ratio = ov(beta - 1) * ov(beta - 1) / rep.gap;
        rep.ratio_defined = true;
    }
    return rep;
}

namespace {

double wgw_residual_impl(const Eigen::VectorXd& mu, const Eigen::VectorXd& oi,
                         const Eigen::VectorXd& oj, bool same_vector, double E) {
    const long n = mu.size();
    long aE = 0;
    double best = std::numeric_limits<double>::infinity();
    for (long a = 0; a < n; ++a) {
        const double d = std::abs(mu(a) - E);
        if (d < best) {
            best = d;
            aE = a;
        }
    }
    if (best <= 1e-14) throw SingularityError("wgw_residual: E coincides with an eigenvalue of B");
    double quad = 0.0;
    for (long a = 0; a < n; ++a) quad += oi(a) * oj(a) / (mu(a) - E);
    const double delta = same_vector ? 1.0 : 0.0;
    return quad + delta - oi(aE) * oj(aE) / (mu(aE) - E);
}

}  // namespace

double wgw_residual(const DetectionSystem& sys, double E, int i, int j) {
    if (i < 1 || i > 2 || j < 1 || j > 2) throw ConfigError("wgw_residual: i, j in {1,2}");
    return wgw_residual_impl(sys.b_spectrum.eigenvalues, sys.overlaps.col(i - 1),
                             sys.overlaps.col(j - 1), i == j, E);
}

double wgw_residual(const Spectrum& b_spec, const Eigen::VectorXd& wi, const Eigen::VectorXd& wj,
                    bool same_vector, double E) {
    if (wi.size() != b_spec.n() || wj.size() != b_spec.n())
        throw DataError("wgw_residual: dimension mismatch");
    const Eigen::VectorXd oi = b_spec.eigenvectors.transpose() * wi;
    const Eigen::VectorXd oj = b_spec.eigenvectors.transpose() * wj;
    return wgw_residual_impl(b_spec.eigenvalues, oi, oj, same_vector, E);
}

namespace {

SignProbability sign_counts(const Spectrum& b_spec, int alpha, long trials, std::uint64_t seed,
                            double p, bool product) {
    const int n = b_spec.n();
    if (alpha < 1 || alpha > n) throw ConfigError("pair_sign_probability: alpha out of range");
    if (trials < 1) throw ConfigError("pair_sign_probability: trials must be positive");
    const auto [hi, lo] = centered_entry_values(n, p);
    const Eigen::VectorXd u = b_spec.eigenvectors.col(alpha - 1);
    CounterRng base(CounterRng::derive(seed, 0x7367));
    long pos = 0;
    double acc = 0.0;
    for (long t = 0; t < trials; ++t) {
        CounterRng rng = base.substream(static_cast<std::uint64_t>(t));
        double s1 = 0.0;
        for (int k = 0; k < n; ++k) s1 += (rng.bernoulli(p) ? hi : lo) * u(k);
        if (!product) {
            if (s1 > 0.0) ++pos;
            continue;
        }
        double s2 = 0.0;
        for (int k = 0; k < n; ++k) s2 += (rng.bernoulli(p) ? hi : lo) * u(k);
        acc += s1 * s2 > 0.0 ? 1.0 : (s1 * s2 < 0.0 ? -1.0 : 0.0);
    }
    SignProbability out;
    out.trials = trials;
    if (!product) {
        out.p_hat = static_cast<double>(pos) / static_cast<double>(trials);
        out.std_err = std::sqrt(std::max(out.p_hat * (1.0 - out.p_hat), 1e-12) /
                                static_cast<double>(trials));
    } else {
        out.p_hat = acc / static_cast<double>(trials);
        out.std_err = 1.0 / std::sqrt(static_cast<double>(trials));
    }
    return out;
}

}  // namespace

SignProbability pair_sign_probability(const Spectrum& b_spec, int alpha, long trials,
                                      std::uint64_t seed, double p) {
    return sign_counts(b_spec, alpha, trials, seed, p, false);
}

SignProbability pair_sign_product_mean(const Spectrum& b_spec, int alpha, long trials,
                                       std::uint64_t seed, double p) {
    return sign_counts(b_spec, alpha, trials, seed, p, true);
}

std::string detection_report_json(const DetectionRoots& r) {
    nlohmann::json j;
    j["roots"] = r.roots;
    j["untouched"] = r.untouched;
    j["warnings"] = r.warnings;
    return j.dump();
}

}  // namespace nodallab
