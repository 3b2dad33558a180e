// Dense complex linear algebra used by every other module: Hermitian
// eigensolves, PSD tests, pseudo-inverse and square roots, and the matrix
// builders (matrix units, shifts, Kronecker products) plus seeded random
// generation.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "mrange/error.hpp"

namespace mrange {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

struct Tolerances {
    double psd_eps = 1e-9;       // relative: min_eig >= -psd_eps * (1 + |H|)
    double rank_rel = 1e-10;     // singular values below rank_rel * sigma_max are zero
    double fixpoint_eps = 1e-12;
    double feas_eps = 1e-7;
    int grid_angles = 720;

    void validate() const;
};

// Process-wide default. Set once at startup (the CLI does this); reads are
// otherwise unsynchronized.
const Tolerances& default_tolerances();
void set_default_tolerances(const Tolerances& tol);

struct EigResult {
    RVec eigenvalues;  // ascending
    CMat eigenvectors; // columns orthonormal
};

struct PsdResult {
    bool psd = false;
    double min_eig = 0.0;
};

void require_square(const CMat& m, const char* what);
void require_finite(const CMat& m, const char* what);

CMat identity(int n);
CMat adjoint(const CMat& m);
// (M + M*) / 2
CMat hermitian_part(const CMat& m);

EigResult herm_eig(const CMat& h);
PsdResult psd_check(const CMat& h, const Tolerances& tol = default_tolerances());
CMat pinv(const CMat& m, const Tolerances& tol = default_tolerances());
CMat sqrt_psd(const CMat& h, const Tolerances& tol = default_tolerances());
// Projection onto the PSD cone in Frobenius norm (negative eigenvalues clipped).
CMat psd_projection(const CMat& h);

double op_norm(const CMat& m);
RVec singular_values(const CMat& m);
// Numerical rank with the rank_rel threshold.
int numerical_rank(const CMat& m, const Tolerances& tol = default_tolerances());

CMat kron(const CMat& a, const CMat& b);
CMat direct_sum(std::span<const CMat> blocks);
// E_kj in M_n, zero-based indices: the matrix with a single 1 at (k, j).
CMat matrix_unit(int n, int k, int j);
// Unilateral shift S_n = sum_k E_{k+1,k}.
CMat shift(int n);
CMat matrix_power(const CMat& m, int p);

// SplitMix64 (Steele, Lea, Flood 2014). Gaussians come from Box-Muller so
// that sample streams are reproducible across platforms and languages.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();
    // Uniform in [0, 1) with 53 random bits.
    double uniform();
    double gaussian();
    cplx complex_gaussian();

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Independent stream for sample `index` of a run seeded with `base`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

CMat random_gaussian(int rows, int cols, SplitMix64& rng);
CMat random_hermitian(int n, SplitMix64& rng);
// n x m matrix with V*V = I_m: thin QR of a seeded complex Gaussian matrix.
CMat random_isometry(int n, int m, std::uint64_t seed);
CMat random_unitary(int n, std::uint64_t seed);

}  // namespace mrange
