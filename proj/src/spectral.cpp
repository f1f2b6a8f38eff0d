#include "nodallab/spectral.hpp"

#include <lapacke.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

// Trial-level parallelism only: the BLAS backend must stay single-threaded
// for determinism and to avoid oversubscribing the worker pool.
extern "C" void openblas_set_num_threads(int) __attribute__((weak));

namespace nodallab {

namespace {

const bool kBlasPinned = [] {
    if (openblas_set_num_threads) openblas_set_num_threads(1);
    return true;
}();

constexpr double kPi = 3.141592653589793238462643383279502884;

std::string matrix_digest(const Eigen::MatrixXd& m) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "n=%ld trace=%.17g fro=%.17g", static_cast<long>(m.rows()),
                  m.trace(), m.norm());
    return buf;
}

void apply_sign_convention(Eigen::MatrixXd& vecs) {
    for (int c = 0; c < vecs.cols(); ++c) {
        int arg = 0;
        double best = -1.0;
        for (int r = 0; r < vecs.rows(); ++r) {
            const double a = std::abs(vecs(r, c));
            if (a > best) {
                best = a;
                arg = r;
            }
        }
        if (vecs(arg, c) < 0.0) vecs.col(c) = -vecs.col(c);
    }
}

}  // namespace

double default_eta(int n, double eps_lr) {
    return std::pow(static_cast<double>(n), -2.0 / 3.0 - 2.0 * eps_lr);
}

Spectrum eigendecompose(const SymmetricMatrix& s) {
    const int n = s.n;
    Eigen::MatrixXd a = s.entries;  // column-major, overwritten with vectors
    Eigen::VectorXd w(n);
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(), n, w.data());
    if (info != 0)
        throw NumericError("eigendecompose: dsyevd failed (info=" + std::to_string(info) + ", " +
                           matrix_digest(s.entries) + ")");
    // LAPACK returns ascending order; flip to non-increasing.
    Spectrum spec;
    spec.eigenvalues = w.reverse();
    spec.eigenvectors = a.rowwise().reverse();
    apply_sign_convention(spec.eigenvectors);
    return spec;
}

Eigen::VectorXd eigenvalues_only(const SymmetricMatrix& s) {
    const int n = s.n;
    Eigen::MatrixXd a = s.entries;
    Eigen::VectorXd w(n);
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, a.data(), n, w.data());
    if (info != 0)
        throw NumericError("eigenvalues_only: dsyevd failed (info=" + std::to_string(info) + ", " +
                           matrix_digest(s.entries) + ")");
    return w.reverse();
}

Eigenpair eigenpair_at(const SymmetricMatrix& s, int alpha) {
    const int n = s.n;
    if (alpha < 1 || alpha > n) throw ConfigError("eigenpair_at: index out of range");
    Eigen::MatrixXd a = s.entries;
    Eigen::VectorXd w(n), z(n);
    Eigen::VectorXi isuppz(2);
    lapack_int found = 0;
    const lapack_int il = n - alpha + 1;  // ascending position of the alpha-th largest
    const lapack_int info =
        LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, a.data(), n, 0.0, 0.0, il, il, 0.0,
                       &found, w.data(), z.data(), n, isuppz.data());
    if (info != 0 || found != 1)
        throw NumericError("eigenpair_at: dsyevr failed (info=" + std::to_string(info) + ", " +
                           matrix_digest(s.entries) + ")");
    Eigenpair out;
    out.value = w(0);
    out.vector = z;
    int arg = 0;
    out.vector.cwiseAbs().maxCoeff(&arg);
    if (out.vector(arg) < 0.0) out.vector = -out.vector;
    return out;
}

Complex green_quadratic_form(const Spectrum& spec, const Eigen::VectorXd& x,
                             const Eigen::VectorXd& y, const ComplexPoint& z) {
    if (x.size() != spec.n() || y.size() != spec.n())
        throw DataError("green_quadratic_form: dimension mismatch");
    const Eigen::VectorXd ox = spec.eigenvectors.transpose() * x;
    const Eigen::VectorXd oy = spec.eigenvectors.transpose() * y;
    const Complex zz = z.z();
    Complex acc(0.0, 0.0);
    for (int a = 0; a < spec.n(); ++a) acc += ox(a) * oy(a) / (spec.eigenvalues(a) - zz);
    return acc;
}

Complex stieltjes(const Spectrum& spec, const ComplexPoint& z) {
    const Complex zz = z.z();
    Complex acc(0.0, 0.0);
    for (int a = 0; a < spec.n(); ++a) acc += 1.0 / (spec.eigenvalues(a) - zz);
    return acc / static_cast<double>(spec.n());
}

double semicircle_density(double x) {
    const double t = 4.0 - x * x;
    return t > 0.0 ? std::sqrt(t) / (2.0 * kPi) : 0.0;
}

Complex semicircle_stieltjes(Complex z) {
    if (!(z.imag() > 0.0)) throw ConfigError("semicircle_stieltjes: need Im z > 0");
    // sqrt(z-2)*sqrt(z+2) with principal square roots puts the branch cut on
    // [-2,2] and behaves like z at infinity.
    const Complex s = std::sqrt(z - 2.0) * std::sqrt(z + 2.0);
    return (-z + s) / 2.0;
}

Complex semicircle_stieltjes(const ComplexPoint& z) { return semicircle_stieltjes(z.z()); }

double semicircle_tail_integral(double x) {
    if (x <= -2.0) return 1.0;
    if (x >= 2.0) return 0.0;
    return 0.5 - x * std::sqrt(4.0 - x * x) / (4.0 * kPi) - std::asin(x / 2.0) / kPi;
}

Eigen::VectorXd classical_locations(int n) {
    if (n < 2) throw ConfigError("classical_locations: n must be at least 2");
    Eigen::VectorXd g(n);
    for (int i = 1; i <= n; ++i) {
        const double target = static_cast<double>(i) / n;
        double lo = -2.0, hi = 2.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (semicircle_tail_integral(mid) > target)
                lo = mid;
            else
                hi = mid;
        }
        g(i - 1) = 0.5 * (lo + hi);
    }
    return g;
}

void save_spectrum(const std::string& path, const Spectrum& spec, std::uint64_t seed,
                   const std::string& ensemble) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open for write: " + path);
    const char magic[8] = {'N', 'L', 'S', 'P', 'E', 'C', '0', '1'};
    f.write(magic, 8);
    const std::uint64_t n = static_cast<std::uint64_t>(spec.n());
    const std::uint64_t tag_len = ensemble.size();
    f.write(reinterpret_cast<const char*>(&n), 8);
    f.write(reinterpret_cast<const char*>(&seed), 8);
    f.write(reinterpret_cast<const char*>(&tag_len), 8);
    f.write(ensemble.data(), static_cast<std::streamsize>(tag_len));
    f.write(reinterpret_cast<const char*>(spec.eigenvalues.data()),
            static_cast<std::streamsize>(sizeof(double) * n));
    f.write(reinterpret_cast<const char*>(spec.eigenvectors.data()),
            static_cast<std::streamsize>(sizeof(double) * n * n));
    if (!f) throw DataError("write failed: " + path);
}

SpectrumFile load_spectrum(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open for read: " + path);
    char magic[8];
    f.read(magic, 8);
    if (!f || std::string(magic, 8) != "NLSPEC01") throw DataError("bad spectrum file: " + path);
    std::uint64_t n = 0, seed = 0, tag_len = 0;
    f.read(reinterpret_cast<char*>(&n), 8);
    f.read(reinterpret_cast<char*>(&seed), 8);
    f.read(reinterpret_cast<char*>(&tag_len), 8);
    if (!f || n == 0 || n > (1u << 20) || tag_len > 64) throw DataError("bad spectrum header");
    SpectrumFile out;
    out.seed = seed;
    out.ensemble.resize(tag_len);
    f.read(out.ensemble.data(), static_cast<std::streamsize>(tag_len));
    out.spectrum.eigenvalues.resize(static_cast<long>(n));
    out.spectrum.eigenvectors.resize(static_cast<long>(n), static_cast<long>(n));
    f.read(reinterpret_cast<char*>(out.spectrum.eigenvalues.data()),
           static_cast<std::streamsize>(sizeof(double) * n));
    f.read(reinterpret_cast<char*>(out.spectrum.eigenvectors.data()),
           static_cast<std::streamsize>(sizeof(double) * n * n));
    if (!f) throw DataError("truncated spectrum file: " + path);
    return out;
}

}  // namespace nodallab
