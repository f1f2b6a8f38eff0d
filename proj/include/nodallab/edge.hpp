#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "nodallab/spectral.hpp"

namespace nodallab {

// The 2+n block system: full matrix [[D, W^T],[W, B]] with B eigendecomposed
// and the coupling overlaps <w_i, u_a> cached.
struct DetectionSystem {
    BlockDecomposition blocks;
    Spectrum b_spectrum;
    Eigen::VectorXd w1, w2;
    double d11 = 0.0, d12 = 0.0, d22 = 0.0;
    Eigen::MatrixXd overlaps;  // n x 2, row a = (<w1,u_a>, <w2,u_a>)

    int b_dim() const { return b_spectrum.n(); }
};

DetectionSystem make_detection_system(const SymmetricMatrix& s);

// W^T G(E) W - D + E I_2 via spectral sums; E must stay clear of the
// eigenvalues of B.
Eigen::Matrix2d detection_matrix(const DetectionSystem& sys, double E);

struct DetectionRoots {
    std::vector<double> roots;      // det(...) = 0, descending
    std::vector<double> untouched;  // eigenvalues of B with vanishing coupling
    int warnings = 0;               // intervals with non-finite branch values
};

// Roots of det(W^T G(lambda) W - D + lambda I_2) inside [lo, hi]. The two
// eigenvalue branches of the detection matrix are strictly increasing
// between consecutive eigenvalues of B, so each branch is bisected on each
// interval; guard bands of 1e-12 are kept around the poles.
DetectionRoots detection_roots(const DetectionSystem& sys, double lo, double hi);

// [q; -G(lambda) W q] for q spanning the null space of the 2x2 system,
// normalized, sign convention as in Spectrum.
Eigen::VectorXd reconstruct_eigenvector(const DetectionSystem& sys, double lambda);

// s(E) = sign(-(w1' G w1 - d11 + E)/(w1' G w2 - d12)); throws
// DegenerateSignError when the denominator is below 1e-12 in magnitude.
int sign_formula(const DetectionSystem& sys, double E);

// B = M + c l l^T with c > 0 and l near-unit.
struct SecularProblem {
    Spectrum m_spectrum;
    Eigen::VectorXd l;
    double c = 0.0;
};

// All n eigenvalues of M + c l l^T through the secular equation
// sum_a <l,v_a>^2/(nu_a - mu) = -1/c, one bisection per interlacing slot;
// interlacing with the unperturbed spectrum holds exactly.
Eigen::VectorXd secular_eigenvalues(const SecularProblem& prob);

struct StickingReport {
    double gap = 0.0;            // nu_beta - mu_{beta+1}
    double overlap_ratio = 0.0;  // <l, v_beta>^2 / gap
    bool ratio_defined = false;
};

// beta is 1-indexed into the edge window.
StickingReport sticking_report(const SecularProblem& prob, int beta);

// w_i^T G(E) w_j + delta_ij - <w_i,u_aE><w_j,u_aE>/(mu_aE - E), the
// concentration-formula residual; i, j in {1, 2}.
double wgw_residual(const DetectionSystem& sys, double E, int i, int j);

// Same residual for a free-standing (B, w_i, w_j) triple.
double wgw_residual(const Spectrum& b_spec, const Eigen::VectorXd& wi, const Eigen::VectorXd& wj,
                    bool same_vector, double E);

struct SignProbability {
    double p_hat = 0.0;
    double std_err = 0.0;
    long trials = 0;
};

// Empirical P(<w~, u_alpha> > 0) with w~ resampled from the centered
// two-point entry law with edge probability p; alpha is 1-indexed.
SignProbability pair_sign_probability(const Spectrum& b_spec, int alpha, long trials,
                                      std::uint64_t seed, double p);

// Empirical E sign(<w~1,u_alpha><w~2,u_alpha>) for independent resamples.
SignProbability pair_sign_product_mean(const Spectrum& b_spec, int alpha, long trials,
                                       std::uint64_t seed, double p);

std::string detection_report_json(const DetectionRoots& r);

}  // namespace nodallab
