// Numerical range W(T) = {<T xi, xi> : |xi| = 1} and numerical radius
// w(T) = sup |W(T)|, computed through the support function
//   f(theta) = lambda_max(Re(e^{i theta} T)),   w(T) = max_theta f(theta).
#pragma once

#include <array>
#include <vector>

#include "mrange/linalg.hpp"

namespace mrange {

struct RadiusResult {
    double radius = 0.0;
    double argmax_angle = 0.0;
};

// lambda_max(Re(e^{i theta} T)).
double support_value(const CMat& t, double theta);

// Grid of max(grid_angles, 64 * dim) angles, then golden-section refinement.
RadiusResult numerical_radius(const CMat& t, const Tolerances& tol = default_tolerances());
double num_radius(const CMat& t, const Tolerances& tol = default_tolerances());

// K support points <T v, v>, v the top eigenvector of Re(e^{-i theta_k} T).
std::vector<cplx> range_boundary(const CMat& t, int k);

struct RadiusReport {
    double radius = 0.0;
    double argmax_angle = 0.0;
    // [0] w <= 1; [1] I + Re(lambda T) >= 0; [2] Re(lambda T) <= I for |lambda| = 1;
    // [3] Re(z T) <= I for sampled |z| < 1.
    std::array<bool, 4> conditions{};
    // min over the angle grid of lambda_min(I - Re(e^{i theta} T)), i.e. 1 - w up to grid error.
    double worst_margin = 0.0;
    // All four conditions agree with (w <= 1), or w lies within the 1e-6 band around 1.
    bool consistent = false;
};

RadiusReport radius_characterizations(const CMat& t, const Tolerances& tol = default_tolerances());

// Radii used to sample the open disk for condition [3].
std::vector<double> disk_sample_radii();

}  // namespace mrange
