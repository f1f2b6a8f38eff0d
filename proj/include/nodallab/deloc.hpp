#pragma once
#include <optional>
#include <string>
#include <vector>

#include "nodallab/spectral.hpp"

namespace nodallab {

// phi_n = (log n)^{log log n}, natural logs.
double polylog_factor(int n);

// Thresholds for the typicality conditions. The paper leaves the constants
// unspecified; defaults come from the recorded calibration run at n = 1000
// (calibration/typicality_calibration.json).
struct DelocParams {
    double eps_lr = 0.05;        // sets eta = n^{-2/3-2 eps_lr}
    double rho = 1.0;            // edge window exponent family
    double c_re = 3.0;           // rigidity allowance phi_n^{c_re}
    double c_linf = 1.0;         // l-infinity allowance phi_n^{c_linf}
    double iso_overlap_eps = 0.45;  // overlap flag: max n<v,l>^2 < n^{iso_overlap_eps}
    double iso_law_eps = 0.10;      // law flag: residual < 3 n^{-1/3+3 iso_law_eps}
    double lr_window_mult = 3.0;    // level-repulsion window halfwidth, units n^{-2/3}
    double lr_gap_eps = 0.10;       // gap flag: min gap >= n^{-2/3-lr_gap_eps}
    int iso_grid_points = 64;
    int iso_max_directions = 32;
};

struct TypicalityReport {
    double isotropic_law_residual = 0.0;
    std::vector<double> rigidity_residuals;
    double rigidity_max = 0.0;
    double linf_max = 0.0;          // max_a sqrt(n) ||v_a||_inf
    double isotropic_overlap = 0.0; // max_a n <v_a, l>^2
    double min_edge_gap = 0.0;      // +inf encoded as infinity()
    std::optional<double> minor_interlace_max;  // max over sampled minors of lambda - mu deficit

    bool pass_isotropic_law = false;
    bool pass_rigidity = false;
    bool pass_linf = false;
    bool pass_iso_overlap = false;
    bool pass_level_repulsion = false;
    bool all_pass() const {
        return pass_isotropic_law && pass_rigidity && pass_linf && pass_iso_overlap &&
               pass_level_repulsion;
    }

    // thresholds echoed for the report
    double thr_isotropic_law = 0.0, thr_rigidity = 0.0, thr_linf = 0.0, thr_iso_overlap = 0.0,
           thr_level_repulsion = 0.0;
};

// sqrt(n) ||v_a||_inf for every eigenvector.
Eigen::VectorXd linf_deloc(const Spectrum& spec);

// Smallest mass sum_{i in S} v_i^2 over vertex sets of size ceil(fraction*n):
// the sum of the smallest squared coordinates.
double no_gaps_mass(const Eigen::VectorXd& v, double fraction);

// max_a n <v_a, l>^2 for a unit direction l.
double isotropic_overlap(const Spectrum& spec, const Eigen::VectorXd& l);

// |lambda_a - gamma_a| min(a, n-a+1)^{1/3} n^{2/3} per eigenvalue.
Eigen::VectorXd rigidity_residuals(const Spectrum& spec);
Eigen::VectorXd rigidity_residuals(const Spectrum& spec, const Eigen::VectorXd& gamma);

// Smallest gap between distinct eigenvalues inside [center-w, center+w];
// +infinity when the window holds fewer than two eigenvalues.
double level_repulsion_min_gap(const Spectrum& spec, double window_halfwidth,
                               double center = 2.0);

// max over the energy grid and direction pairs of
// |<x, G(E+i eta) y> - <x,y> m_sc(E+i eta)|.
double isotropic_law_residual(const Spectrum& spec, const std::vector<double>& grid,
                              const std::vector<Eigen::VectorXd>& directions, double eta);

TypicalityReport typicality_check(const SymmetricMatrix& s, const DelocParams& params = {},
                                  int minor_samples = 0, std::uint64_t minor_seed = 0);

std::string typicality_to_json(const TypicalityReport& rep, int n, const DelocParams& params);
std::string typicality_csv_row(const TypicalityReport& rep);
std::string typicality_csv_header();

}  // namespace nodallab
