// Dilations: Halmos unitary of a contraction, Ando's unitary 2-dilation
// U = S^* W^2 truncated to block indices -M..M, the bilateral shift model of
// E_21, finite positive-definite-function tests, and nilpotent dilations
// N = S_n kron I_r with an isometry V and V^* N^j V = T^j.
#pragma once

#include <map>
#include <utility>
#include <vector>

#include "mrange/feasibility.hpp"

namespace mrange {

// [[C, (I - CC^*)^{1/2}], [(I - C^*C)^{1/2}, -C^*]]
CMat halmos_unitary(const CMat& c, const Tolerances& tol = default_tolerances());

// Block operator on C^d tensor l^2({-M..M}). Stored blocks satisfy
// |col - row| <= 2. The truncation is completed by a single identity block
// from index M to index -M (`wrap`), which keeps the dense matrix unitary and
// cannot reach the (0, 0) corner of U^n for n <= M/2 - 1.
class WindowedOperator {
public:
    WindowedOperator(int block_dim, int window);

    int block_dim() const { return d_; }
    int window() const { return m_; }
    void set(int row, int col, const CMat& block);
    const std::map<std::pair<int, int>, CMat>& blocks() const { return blocks_; }
    bool wrap = false;

    int band_width() const;
    int dense_index(int k) const { return (k + m_) * d_; }
    CMat dense() const;
    // (U^p)_{0,0} for p = 0..max_power.
    std::vector<CMat> corner_powers(int max_power) const;
    // Largest p with a guaranteed window-independent corner: floor(M/2) - 1.
    int exact_powers() const { return m_ / 2 - 1; }

private:
    int d_;
    int m_;
    std::map<std::pair<int, int>, CMat> blocks_;
};

// U = S^* W^2 for the contraction C; (U^n)_{0,0} = T^n / 2 when
// T = 2 (I - C^*C)^{1/2} C.
WindowedOperator two_dilation_from_contraction(const CMat& c, int window, const Tolerances& tol = default_tolerances());
WindowedOperator two_dilation(const CMat& t, int window, const Tolerances& tol = default_tolerances());

struct BilateralReport {
    CMat compression;      // P_H U |_H in the basis (e_0, e_1)
    CMat compression_sq;   // P_H U^2 |_H
    int nonzero_entries = 0;
    cplx value{0.0, 0.0};
    bool is_e21 = false;   // entry at row e_1, column e_0
    bool is_e12 = false;
    bool square_vanishes = false;
};

BilateralReport bilateral_e21_model(int window);

struct PdResult {
    bool positive = false;
    double min_eig = 0.0;
};

// Blocks T(0) = I, T(1), ..., T(N); the Gram matrix has block (t, s) equal to
// T(t - s) with T(-k) = T(k)^*.
CMat pd_gram(const std::vector<CMat>& blocks);
PdResult pd_function_check(const std::vector<CMat>& blocks, const Tolerances& tol = default_tolerances());

struct NilpotentMargin {
    double margin = 0.0;  // min_theta lambda_min(I + 2 Re sum_{k<n} e^{ik theta} T^k)
    double angle = 0.0;
    bool holds = false;
};

NilpotentMargin nilpotent_condition(const CMat& t, int n, int grid, const Tolerances& tol = default_tolerances());

struct NilpotentDilation {
    int order = 0;
    CMat n_op;  // S_n kron I_r
    CMat v;     // (n r) x m isometry
    int r = 0;
    double isometry_residual = 0.0;
    double compression_residual = 0.0;  // max_j |V^* N^j V - T^j|
    double margin = 0.0;
    int iterations = 0;
};

NilpotentDilation nilpotent_dilation(const CMat& t, int n, const Tolerances& tol = default_tolerances());

}  // namespace mrange
