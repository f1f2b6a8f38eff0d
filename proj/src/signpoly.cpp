#include "nodallab/signpoly.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "json.hpp"

namespace nodallab {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kBasisScale = 8.0;  // basis is (x/kBasisScale)^{2k+1}

// 20-point Gauss-Legendre nodes/weights on [-1,1].
void gauss_legendre_20(Eigen::VectorXd& x, Eigen::VectorXd& w) {
    static const double nodes[10] = {
        0.0765265211334973337546404, 0.2277858511416450780804962, 0.3737060887154195606725482,
        0.5108670019508270980043641, 0.6360536807265150254528367, 0.7463319064601507926143051,
        0.8391169718222188233945291, 0.9122344282513259058677524, 0.9639719272779137912676661,
        0.9931285991850949247861224};
    static const double weights[10] = {
        0.1527533871307258506980843, 0.1491729864726037467878287, 0.1420961093183820513292983,
        0.1316886384491766268984945, 0.1181945319615184173123774, 0.1019301198172404350367501,
        0.0832767415767047487247581, 0.0626720483341090635695065, 0.0406014298003869413310400,
        0.0176140071391521183118620};
    x.resize(20);
    w.resize(20);
    for (int i = 0; i < 10; ++i) {
        x(2 * i) = -nodes[i];
        x(2 * i + 1) = nodes[i];
        w(2 * i) = weights[i];
        w(2 * i + 1) = weights[i];
    }
}

struct Gl20 {
    Eigen::VectorXd x, w;
};

const Gl20& gl20() {
    static const Gl20 rule = [] {
        Gl20 r;
        gauss_legendre_20(r.x, r.w);
        return r;
    }();
    return rule;
}

void append_panel(std::vector<double>& xs, std::vector<double>& ws, double lo, double hi) {
    const Gl20& g = gl20();
    const double c = 0.5 * (hi + lo), h = 0.5 * (hi - lo);
    for (int i = 0; i < 20; ++i) {
        xs.push_back(c + h * g.x(i));
        ws.push_back(h * g.w(i));
    }
}

long double upper_gamma_rec(int k) {
    // Gamma(k+1, 1) by upward recurrence from Gamma(1,1) = e^{-1}.
    long double g = std::exp((long double)-1.0);
    for (int a = 1; a <= k; ++a) g = a * g + std::exp((long double)-1.0);
    return g;
}

long double lower_gamma_half_rec(int m, long double x) {
    // gamma(m + 1/2, x) upward from gamma(1/2, x) = sqrt(pi) erf(sqrt(x)).
    long double g = std::sqrt((long double)kPi) * std::erf(std::sqrt(x));
    long double xpow = std::sqrt(x);  // x^{1/2}
    const long double ex = std::exp(-x);
    for (int a = 0; a < m; ++a) {
        // gamma(s+1,x) = s gamma(s,x) - x^s e^{-x}, s = a + 1/2
        g = (a + 0.5L) * g - xpow * ex;
        xpow *= x;
    }
    return g;
}

}  // namespace

double WeightPair::s(double x) const {
    const double a = std::abs(x);
    return a <= tail_start ? a * a / 4.0 + 1.0 : a;
}

double WeightPair::psi(double x) const { return std::exp(-s(x) / 2.0) / kPi; }

WeightPair default_weights() { return WeightPair{}; }

Fn1 smoothed_sign(double r) {
    if (!(r > 0.0)) throw ConfigError("smoothed_sign: r must be positive");
    Fn1 h;
    h.value = [r](double x) {
        if (x >= r) return 1.0;
        if (x <= -r) return -1.0;
        const double t = x / r;
        return ((3.0 / 8.0 * t * t - 5.0 / 4.0) * t * t + 15.0 / 8.0) * t;
    };
    h.deriv = [r](double x) {
        if (std::abs(x) >= r) return 0.0;
        const double t = x / r;
        const double u = 1.0 - t * t;
        return 15.0 / 8.0 * u * u / r;
    };
    return h;
}

QuadRule h_norm_rule(double grade, double x_max) {
    std::vector<double> xs, ws;
    // interior [0, 2]: panels graded toward 0 to resolve the sign transition
    std::vector<double> edges{0.0};
    double e = grade;
    while (e < 2.0) {
        edges.push_back(e);
        e *= 1.6;
    }
    edges.push_back(2.0);
    for (size_t i = 0; i + 1 < edges.size(); ++i) append_panel(xs, ws, edges[i], edges[i + 1]);
    // tail [2, x_max]: geometric panels
    double lo = 2.0;
    while (lo < x_max) {
        const double hi = std::min(lo * 1.35, x_max);
        append_panel(xs, ws, lo, hi);
        lo = hi;
    }
    // mirror to the negative axis
    QuadRule rule;
    const long m = static_cast<long>(xs.size());
    rule.x.resize(2 * m);
    rule.w.resize(2 * m);
    for (long i = 0; i < m; ++i) {
        rule.x(i) = -xs[static_cast<size_t>(m - 1 - i)];
        rule.w(i) = ws[static_cast<size_t>(m - 1 - i)];
        rule.x(m + i) = xs[static_cast<size_t>(i)];
        rule.w(m + i) = ws[static_cast<size_t>(i)];
    }
    return rule;
}

double sobolev_inner(const Fn1& f, const Fn1& g, const WeightPair& w, const QuadRule& rule) {
    double acc = 0.0;
    for (long i = 0; i < rule.x.size(); ++i) {
        const double x = rule.x(i);
        acc += rule.w(i) * (f.value(x) * g.value(x) * w.eta(x) + f.deriv(x) * g.deriv(x) * w.psi(x));
    }
    return acc;
}

double eta_moment(int k) {
    if (k < 0) throw ConfigError("eta_moment: negative power");
    if (k % 2 == 1) return 0.0;
    // 2/pi * [ e^{-1/2} * 8^{k/2} * sqrt(2)/2 * ... interior + tail ]
    // interior: int_0^2 x^k e^{-x^2/8} dx = 8^{k/2} sqrt(2) gamma((k+1)/2, 1/2) / ... see below
    // substitution u = x^2/8 gives: = (1/2) * 8^{(k+1)/2} * u^{(k-1)/2} e^{-u} du integrated,
    // i.e. (8^{(k+1)/2}/2) * gamma((k+1)/2, 1/2); with k even, (k+1)/2 = k/2 + 1/2.
    const long double interior =
        0.5L * std::pow((long double)8.0, (k + 1) / 2.0L) * lower_gamma_half_rec(k / 2, 0.5L);
    const long double tail = std::pow((long double)2.0, k + 1.0L) * upper_gamma_rec(k);
    const long double total =
        2.0L / kPi * (std::exp((long double)-0.5) * interior + tail);
    return static_cast<double>(total);
}

double SignPolynomial::eval(double x) const {
    // Horner in the scaled variable keeps high-degree evaluation stable.
    const double t = x / kBasisScale;
    const double t2 = t * t;
    double acc = 0.0;
    for (auto it = odd_coeffs.rbegin(); it != odd_coeffs.rend(); ++it) acc = acc * t2 + *it;
    return acc * t;
}

double SignPolynomial::eval_deriv(double x) const {
    const double t = x / kBasisScale;
    const double t2 = t * t;
    double acc = 0.0;
    int k = static_cast<int>(odd_coeffs.size()) - 1;
    for (auto it = odd_coeffs.rbegin(); it != odd_coeffs.rend(); ++it, --k)
        acc = acc * t2 + (2 * k + 1) * *it;
    return acc / kBasisScale;
}

Fn1 SignPolynomial::as_fn() const {
    const SignPolynomial copy = *this;
    return Fn1{[copy](double x) { return copy.eval(x); },
               [copy](double x) { return copy.eval_deriv(x); }};
}

SignPolynomial project_odd(const Fn1& h, int degree, const WeightPair& w, double r, double sup_R) {
    if (degree < 1 || degree % 2 == 0) throw ConfigError("project_odd: degree must be odd, >= 1");
    const int m = (degree + 1) / 2;  // number of odd basis functions
    const QuadRule rule = h_norm_rule(std::min(0.025, r / 4.0), 80.0 + 6.0 * degree);
    const long nq = rule.x.size();

    // attempt the Gram route first; fall back to QR when ill-conditioned
    Eigen::VectorXd coeffs(m);
    bool solved = false;
    {
        Eigen::MatrixXd gram(m, m);
        for (int a = 0; a < m; ++a)
            for (int b = a; b < m; ++b) {
                const int ka = 2 * a + 1, kb = 2 * b + 1;
                const double v = eta_moment(ka + kb) +
                                 static_cast<double>(ka) * kb * eta_moment(ka + kb - 2);
                gram(a, b) = v;
                gram(b, a) = v;
            }
        Eigen::VectorXd d = gram.diagonal().cwiseSqrt();
        Eigen::MatrixXd gn = gram.array() / (d * d.transpose()).array();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gn);
        const double cond = es.eigenvalues()(m - 1) / std::max(es.eigenvalues()(0), 1e-300);
        if (es.eigenvalues()(0) > 0.0 && cond < 1e12) {
            Eigen::VectorXd rhs(m);
            for (int a = 0; a < m; ++a) {
                const int ka = 2 * a + 1;
                double acc = 0.0;
                for (long i = 0; i < nq; ++i) {
                    const double x = rule.x(i), t = x / kBasisScale;
                    acc += rule.w(i) * (h.value(x) * std::pow(t, ka) * w.eta(x) +
                                        h.deriv(x) * ka * std::pow(t, ka - 1) / kBasisScale *
                                            w.psi(x));
                }
                rhs(a) = acc;
            }
            // gram is in x-monomials; rescale to the t-basis used for rhs
            Eigen::VectorXd sc(m);
            for (int a = 0; a < m; ++a) sc(a) = std::pow(kBasisScale, -(2 * a + 1));
            Eigen::MatrixXd gram_t = gram.array() * (sc * sc.transpose()).array();
            coeffs = gram_t.ldlt().solve(rhs);
            solved = true;
        }
    }
    if (!solved) {
        // rows: sqrt(w eta) phi_k(x) stacked with sqrt(w psi) phi_k'(x)
        Eigen::MatrixXd A(2 * nq, m);
        Eigen::VectorXd b(2 * nq);
        for (long i = 0; i < nq; ++i) {
            const double x = rule.x(i), t = x / kBasisScale;
            const double sv = std::sqrt(rule.w(i) * w.eta(x));
            const double sd = std::sqrt(rule.w(i) * w.psi(x));
            double tp = t;  // t^{2k+1}
            for (int a = 0; a < m; ++a) {
                const int k = 2 * a + 1;
                A(i, a) = sv * tp;
                A(nq + i, a) = sd * k * (t == 0.0 ? (k == 1 ? 1.0 : 0.0) : tp / t) / kBasisScale;
                tp *= t * t;
            }
            b(i) = sv * h.value(x);
            b(nq + i) = sd * h.deriv(x);
        }
        Eigen::VectorXd colnorm = A.colwise().norm();
        for (int a = 0; a < m; ++a) A.col(a) /= colnorm(a);
        coeffs = A.colPivHouseholderQr().solve(b);
        coeffs.array() /= colnorm.array();
    }

    SignPolynomial q;
    q.degree = degree;
    q.r = r;
    q.sup_R = sup_R;
    q.odd_coeffs.assign(coeffs.data(), coeffs.data() + m);

    // errors: sobolev via the same rule, sup on a dense grid, L2(mu) via GH
    const Fn1 qf = q.as_fn();
    double sob2 = 0.0;
    for (long i = 0; i < nq; ++i) {
        const double x = rule.x(i);
        const double dv = h.value(x) - qf.value(x);
        const double dd = h.deriv(x) - qf.deriv(x);
        sob2 += rule.w(i) * (dv * dv * w.eta(x) + dd * dd * w.psi(x));
    }
    q.errors.sobolev = std::sqrt(std::max(0.0, sob2));
    double sup = 0.0;
    for (int i = 0; i <= 20000; ++i) {
        const double x = r + (sup_R - r) * i / 20000.0;
        sup = std::max(sup, std::abs(h.value(x) - qf.value(x)));
        sup = std::max(sup, std::abs(h.value(-x) - qf.value(-x)));
    }
    q.errors.sup = sup;
    q.errors.l2mu = std::sqrt(std::max(
        0.0, gauss_product_expectation(
                 [&](double x) { const double d = h.value(x) - qf.value(x); return d * d; }, 128)));
    return q;
}

void gauss_hermite(int order, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(order, order);
    for (int i = 1; i < order; ++i) {
        const double b = std::sqrt(i / 2.0);
        jac(i, i - 1) = b;
        jac(i - 1, i) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
    nodes = es.eigenvalues();
    weights.resize(order);
    const double mu0 = std::sqrt(kPi);
    for (int i = 0; i < order; ++i) {
        const double v0 = es.eigenvectors()(0, i);
        weights(i) = mu0 * v0 * v0;
    }
}

double gauss_product_expectation(const std::function<double(double)>& f, int order) {
    Eigen::VectorXd x, w;
    gauss_hermite(order, x, w);
    // g1 g2 = 2 t1 t2 under the e^{-t^2} weight
    double acc = 0.0;
    for (int i = 0; i < order; ++i) {
        double inner = 0.0;
        for (int j = 0; j < order; ++j) inner += w(j) * f(2.0 * x(i) * x(j));
        acc += w(i) * inner;
    }
    return acc / kPi;
}

double gauss_product_expectation_poly(const std::function<double(double)>& f, int poly_degree,
                                      int order) {
    if (order < poly_degree + 4)
        throw ConfigError("gauss_product_expectation: quadrature order insufficient for degree");
    return gauss_product_expectation(f, order);
}

bool holder_bound_check(const Fn1& f, double f_hnorm, double a, double b, double M,
                        const WeightPair& w) {
    if (!(a <= b && -M <= a && b <= M)) throw ConfigError("holder_bound_check: need [a,b] in [-M,M]");
    const double lhs = std::abs(f.value(b) - f.value(a));
    const double min_psi = w.psi(M);  // psi decreases in |x|
    const double max_psi = w.psi(0.0);
    const double rhs = (1.0 / min_psi) * f_hnorm * std::sqrt(max_psi) * std::sqrt(b - a);
    return lhs <= rhs + 1e-12;
}

std::string signpoly_to_json(const SignPolynomial& q) {
    nlohmann::json j;
    // coefficients reported in the plain monomial basis of x
    std::vector<double> xc(q.odd_coeffs.size());
    for (size_t a = 0; a < q.odd_coeffs.size(); ++a)
        xc[a] = q.odd_coeffs[a] * std::pow(kBasisScale, -(2.0 * static_cast<double>(a) + 1.0));
    j["coefficients_odd"] = xc;
    j["basis_scale"] = kBasisScale;
    j["scaled_coefficients"] = q.odd_coeffs;
    j["degree"] = q.degree;
    j["r"] = q.r;
    j["errors"] = {{"sobolev", q.errors.sobolev}, {"sup", q.errors.sup}, {"l2mu", q.errors.l2mu}};
    return j.dump();
}

}  // namespace nodallab
