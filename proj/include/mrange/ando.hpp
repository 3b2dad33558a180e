// Ando's description of the numerical radius. For w(T) <= 1 the largest
// Hermitian X with
//     [ I - X   T^*/2 ]
//     [ T/2     X     ]  >= 0
// is the fixed point of X = I - (1/4) T^* X^+ T reached from X_0 = I, and it
// yields the factorization T = (I + Y)^{1/2} Z (I - Y)^{1/2} with Y = 2X - I
// and the contraction C with T = 2 (I - C^*C)^{1/2} C.
#pragma once

#include <optional>
#include <string>

#include "mrange/cpmaps.hpp"

namespace mrange {

struct AndoX {
    CMat x;
    int iterations = 0;
    double fixed_point_residual = 0.0;
    double lmi_min_eig = 0.0;
};

// check_radius = false skips the num_radius precondition; a radius above 1
// is then detected from the iteration itself (loss of monotonicity or of the
// LMI) and still reported as RadiusTooLarge.
AndoX ando_x(const CMat& t, const Tolerances& tol = default_tolerances(), bool check_radius = true);

struct AndoResiduals {
    double lmi_min_eig = 0.0;
    double fixed_point = 0.0;
    double reconstruct_max = 0.0;  // |(I+Y)^{1/2} Z (I-Y)^{1/2} - T|
    double reconstruct_min = 0.0;  // same with Y_min, Z_min
    double reconstruct_c = 0.0;    // |2 (I - C^*C)^{1/2} C - T|
    double z_norm = 0.0;
    double z_isometry = 0.0;       // on range(I - Y_max)
    double y_order = 0.0;          // lambda_min(Y_max - Y_min)
};

struct AndoDecomposition {
    CMat x;
    CMat y_max;
    CMat y_min;
    CMat z;
    CMat z_min;
    CMat c;
    int iterations = 0;
    AndoResiduals residuals;
    bool verified = false;
};

AndoDecomposition ando_decompose(const CMat& t, const Tolerances& tol = default_tolerances(),
                                 bool check_radius = true);

struct LmiResult {
    bool holds = false;
    std::optional<CMat> a;  // [[A, T^*], [T, I - A]] >= 0, 0 <= A <= I
    double block_min_eig = 0.0;
    // When the test fails: the angle and value of lambda_max(Re(e^{i theta} T)) > 1/2.
    double certificate_angle = 0.0;
    double certificate_value = 0.0;
};

// Decides w(T) <= 1/2 by building A = I - X(2T) and checking the block matrix.
LmiResult radius_lmi(const CMat& t, const Tolerances& tol = default_tolerances());

CMat lmi_block(const CMat& a, const CMat& t);

// The ucp map on M_2 with phi(E_11) = A, phi(E_12) = T^*, phi(E_21) = T,
// phi(E_22) = I - A.
MapOnUnits ucp_from_e21(const CMat& t, const Tolerances& tol = default_tolerances());

}  // namespace mrange
