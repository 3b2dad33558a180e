// Trigonometric polynomials, Fejer-Riesz factorization, Toeplitz positivity
// and atomic measures on the circle reproducing given moments.
//
// Moment convention: a_k = sum_j w_j e^{i k theta_j}, and the Toeplitz matrix
// has entry (r, c) = a_{r-c} with a_{-k} = conj(a_k). Block Toeplitz matrices
// use the same layout with d x d blocks, which is a permutation of
// A_0 kron I + 2 Re sum_k A_k kron S^k.
#pragma once

#include <vector>

#include "mrange/feasibility.hpp"

namespace mrange {

struct TrigPoly {
    std::vector<cplx> coeffs;  // a_0 .. a_N, a_0 real

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    // a_0 + 2 Re sum_k a_k e^{i k theta}
    double eval(double theta) const;
};

struct FejerRiesz {
    std::vector<cplx> p;            // p_0 .. p_N, tau = |p|^2 on the circle
    std::vector<cplx> inner_roots;  // roots of z^N tau(z) inside the disk
    double scale = 0.0;             // c = |a_N / prod z_k|^{1/2}
    double grid_error = 0.0;        // max |tau - |p|^2| on the verification grid
};

FejerRiesz fejer_riesz(const TrigPoly& tau, const Tolerances& tol = default_tolerances());
cplx poly_eval(const std::vector<cplx>& p, cplx z);

CMat toeplitz_assemble(const std::vector<cplx>& a);
CMat block_toeplitz_assemble(const std::vector<CMat>& blocks);
PsdResult toeplitz_psd(const std::vector<cplx>& a, const Tolerances& tol = default_tolerances());
PsdResult block_toeplitz_psd(const std::vector<CMat>& blocks, const Tolerances& tol = default_tolerances());

struct AtomicMeasure {
    std::vector<double> nodes;    // angles in [0, 2pi)
    std::vector<double> weights;  // >= 0
    double residual = 0.0;        // max_k |moment_k - a_k|
};

struct BlockMeasure {
    std::vector<double> nodes;
    std::vector<CMat> weights;  // PSD d x d
    double residual = 0.0;
    int iterations = 0;
};

// Nonnegative least squares (Lawson-Hanson) on `grid` equispaced nodes;
// grid <= 0 selects 8 n.
AtomicMeasure measure_from_toeplitz(const std::vector<cplx>& a, int grid = 0,
                                    const Tolerances& tol = default_tolerances());
BlockMeasure block_measure_from_toeplitz(const std::vector<CMat>& blocks, int grid = 0,
                                         const Tolerances& tol = default_tolerances());

std::vector<cplx> toeplitz_from_measure(const AtomicMeasure& mu, int n);
std::vector<CMat> toeplitz_from_measure(const BlockMeasure& mu, int n);

// min |Ax - b| over x >= 0.
RVec nnls(const Eigen::MatrixXd& a, const RVec& b, int max_iter = 0);

}  // namespace mrange
