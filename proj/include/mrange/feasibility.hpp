// Find Hermitian PSD blocks X_1, ..., X_B satisfying complex affine
// constraints sum_t c_t X_{b_t}(r_t, s_t) = target. A single block of size nm
// is a Choi matrix; many small blocks model a product cone (discrete
// measures, witness families).
//
// Dykstra-corrected alternating projections between the PSD cone and the
// affine subspace. Infeasibility is never concluded from the iteration; only a
// caller-supplied analytic certificate can produce Infeasible.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mrange/cpmaps.hpp"

namespace mrange {

struct FeasibilityTerm {
    int block = 0;
    int row = 0;
    int col = 0;
    cplx coeff{1.0, 0.0};
};

struct AffineConstraint {
    std::vector<FeasibilityTerm> terms;
    cplx target{0.0, 0.0};
};

struct Certificate {
    double value = 0.0;  // negative means the problem cannot be feasible
    std::string description;
};

struct FeasibilityProblem {
    std::vector<int> block_sizes;
    std::vector<AffineConstraint> constraints;
    std::optional<Certificate> certificate;
};

enum class FeasibilityStatus { Feasible, Undetermined, Infeasible };

std::string_view status_name(FeasibilityStatus s);

struct FeasibilityOutcome {
    FeasibilityStatus status = FeasibilityStatus::Undetermined;
    std::vector<CMat> blocks;
    double residual = 0.0;         // max(affine residual, negative part of min_eig)
    double affine_residual = 0.0;  // max |lhs - target| over constraints
    double min_eig = 0.0;
    int iterations = 0;
    std::string certificate;
};

FeasibilityProblem choi_problem(int n, int m);
FeasibilityProblem product_problem(int count, int d);

// phi(E_ij) = value, one constraint per entry.
void constrain_map_value(FeasibilityProblem& p, int n, int m, int i, int j, const CMat& value);
// sum_i phi(E_ii) = I_m
void constrain_unital(FeasibilityProblem& p, int n, int m);
// sum_k weights[k] X_k = target for a product problem.
void constrain_weighted_sum(FeasibilityProblem& p, const std::vector<cplx>& weights, const CMat& target);

FeasibilityOutcome solve_feasibility(const FeasibilityProblem& p, const Tolerances& tol = default_tolerances(),
                                     int max_iter = 20000);

ChoiMat choi_from_outcome(int n, int m, const FeasibilityOutcome& out);

}  // namespace mrange
