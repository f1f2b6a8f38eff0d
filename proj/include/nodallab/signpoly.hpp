#pragma once
#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "nodallab/common.hpp"

namespace nodallab {

// Even positive weights; for x >= 2 both equal (1/pi) e^{-x/2}. The interior
// bridge is s(x) = x^2/4 + 1, which matches value and first derivative at
// x = 2, so psi is C^1. We take eta = psi.
struct WeightPair {
    double tail_start = 2.0;

    double s(double x) const;
    double psi(double x) const;
    double eta(double x) const { return psi(x); }
};

WeightPair default_weights();

// A function together with its derivative, as used by the H inner product.
struct Fn1 {
    std::function<double(double)> value;
    std::function<double(double)> deriv;
};

// Odd C^1 function with h(x) = sign(x) for |x| >= r; odd quintic inside,
// matching h(r) = 1, h'(r) = 0, h''(r) = 0.
Fn1 smoothed_sign(double r);

// Quadrature rule for integrals over R of weighted integrands appearing in
// the H norm: graded panels toward the origin (resolution `grade`) plus a
// geometric tail out to `x_max`.
struct QuadRule {
    Eigen::VectorXd x;
    Eigen::VectorXd w;
};
QuadRule h_norm_rule(double grade = 0.025, double x_max = 700.0);

// <f,g>_H = int f g eta + int f' g' psi, by quadrature.
double sobolev_inner(const Fn1& f, const Fn1& g, const WeightPair& w,
                     const QuadRule& rule = h_norm_rule());

// Moments of the default weight, int x^k eta(x) dx over R, via the
// incomplete-gamma closed form (exact up to long double rounding).
double eta_moment(int k);

struct SignPolyErrors {
    double sobolev = 0.0;  // ||h - Q||_H
    double sup = 0.0;      // max |h - Q| on [-R,-r] u [r,R]
    double l2mu = 0.0;     // L2 distance under mu, the law of g1*g2
};

struct SignPolynomial {
    std::vector<double> odd_coeffs;  // coefficients of x, x^3, ..., x^{2m+1}
    int degree = 1;                  // 2m+1
    double r = 0.0;                  // flat radius of the target h
    double sup_R = 10.0;             // outer radius used for the sup error
    SignPolyErrors errors;

    double eval(double x) const;
    double eval_deriv(double x) const;
    Fn1 as_fn() const;
};

// Least-squares projection of h onto span{x, x^3, ..., x^degree} in the H
// inner product. Solved through a Gram factorization when the (normalized)
// Gram matrix is well conditioned, otherwise through an orthogonal-basis QR
// of the quadrature design matrix.
SignPolynomial project_odd(const Fn1& h, int degree, const WeightPair& w, double r,
                           double sup_R = 10.0);

// E f(g1 g2) for independent standard normals, by tensor Gauss-Hermite
// quadrature of the given order.
double gauss_product_expectation(const std::function<double(double)>& f, int order = 96);

// Same, with the order requirement checked against a known polynomial degree.
double gauss_product_expectation_poly(const std::function<double(double)>& f, int poly_degree,
                                      int order = 96);

// Checks |f(b)-f(a)| <= (min psi)^{-1} ||f||_H (max psi)^{1/2} (b-a)^{1/2}
// on [-M, M].
bool holder_bound_check(const Fn1& f, double f_hnorm, double a, double b, double M,
                        const WeightPair& w);

std::string signpoly_to_json(const SignPolynomial& q);

// Gauss-Hermite nodes/weights for weight e^{-t^2} (Golub-Welsch).
void gauss_hermite(int order, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

}  // namespace nodallab
