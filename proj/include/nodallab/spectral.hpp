#pragma once
#include <complex>
#include <string>

#include "nodallab/ensembles.hpp"

namespace nodallab {

using Complex = std::complex<double>;

// Eigenvalues non-increasing, columns of `eigenvectors` aligned with them.
// Sign convention: in each eigenvector the entry of largest magnitude is
// positive (ties resolved to the lowest index), so the decomposition is a
// pure function of the matrix.
struct Spectrum {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;

    int n() const { return static_cast<int>(eigenvalues.size()); }
};

// z = E + i*eta with eta > 0.
struct ComplexPoint {
    double E = 0.0;
    double eta = 0.0;

    ComplexPoint(double energy, double imag) : E(energy), eta(imag) {
        if (!(eta > 0.0)) throw ConfigError("ComplexPoint: eta must be positive");
    }
    Complex z() const { return {E, eta}; }
};

// Working scale eta = n^{-2/3 - 2*eps_lr}.
double default_eta(int n, double eps_lr = 0.05);

Spectrum eigendecompose(const SymmetricMatrix& s);

// Eigenvalues only (non-increasing); cheaper when vectors are not needed.
Eigen::VectorXd eigenvalues_only(const SymmetricMatrix& s);

// Single eigenpair by 1-indexed position in the non-increasing order, far
// cheaper than the full decomposition; same sign convention as Spectrum.
struct Eigenpair {
    double value = 0.0;
    Eigen::VectorXd vector;
};
Eigenpair eigenpair_at(const SymmetricMatrix& s, int alpha);

// <x, (A - z)^{-1} y> via the spectral sum.
Complex green_quadratic_form(const Spectrum& spec, const Eigen::VectorXd& x,
                             const Eigen::VectorXd& y, const ComplexPoint& z);

// m(z) = (1/n) sum 1/(lambda_i - z).
Complex stieltjes(const Spectrum& spec, const ComplexPoint& z);

// rho_sc(x) = (1/2pi) sqrt((4 - x^2)_+).
double semicircle_density(double x);

// m_sc(z) = (-z + sqrt(z^2-4))/2, branch with m_sc(z) -> -1/z at infinity.
Complex semicircle_stieltjes(const ComplexPoint& z);
Complex semicircle_stieltjes(Complex z);

// N(x) = int_x^2 rho_sc, closed form.
double semicircle_tail_integral(double x);

// gamma_1 > ... > gamma_n with int_{gamma_i}^2 rho_sc = i/n.
Eigen::VectorXd classical_locations(int n);

// Columnar binary snapshot of a Spectrum (header: n, seed, ensemble tag).
void save_spectrum(const std::string& path, const Spectrum& spec, std::uint64_t seed,
                   const std::string& ensemble);
struct SpectrumFile {
    Spectrum spectrum;
    std::uint64_t seed = 0;
    std::string ensemble;
};
SpectrumFile load_spectrum(const std::string& path);

}  // namespace nodallab
