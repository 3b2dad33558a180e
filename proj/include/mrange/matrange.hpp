// Matricial ranges W_n(T) = {phi(T) : phi ucp into M_n} for the cases where
// they are known: E_21 (the w <= 1/2 ball), the unilateral shift (the norm
// ball) and normal operators (C*-convex hulls of the spectrum); plus spatial
// sampling, the Smith-Ward compression, operator-system norm probes and the
// nine-way equivalence check for w(T) <= 1.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mrange/cpmaps.hpp"

namespace mrange {

struct MembershipVerdict {
    bool member = false;
    double margin = 0.0;      // >= 0 for members, < 0 otherwise
    bool unverified = false;  // solver was inconclusive; verdict is conservative
    std::optional<MapOnUnits> witness_map;
    std::vector<CMat> witness_weights;
    double witness_residual = 0.0;
    std::string note;
};

MembershipVerdict member_e21(const CMat& x, const Tolerances& tol = default_tolerances());
MembershipVerdict member_shift_ball(const CMat& x, int nodes = 64, const Tolerances& tol = default_tolerances());
MembershipVerdict member_normal(const std::vector<cplx>& spectrum, const CMat& x,
                                const Tolerances& tol = default_tolerances());

std::vector<CMat> spatial_samples(const CMat& t, int n, int count, std::uint64_t seed);

struct SmithWard {
    double nu_lower = 0.0;
    CMat compression;
    CMat basis;  // dim x n isometry spanning H_0
};

SmithWard smith_ward_nu(const CMat& t, int n);

struct ProbeRecord {
    double norm_s = 0.0;
    double norm_t = 0.0;
    double gap = 0.0;
};

struct ProbeReport {
    int samples = 0;
    double max_gap = 0.0;
    int argmax = -1;
    std::vector<ProbeRecord> records;
};

// |A kron I + B kron S| vs |A kron I + B kron T| for one pair (A, B).
ProbeRecord probe_pair(const CMat& s, const CMat& t, const CMat& a, const CMat& b);
ProbeReport opsys_probe(const CMat& s, const CMat& t, int n, int samples, std::uint64_t seed);

struct EquivalenceReport {
    double radius = 0.0;
    std::array<bool, 9> conditions{};
    std::array<std::string, 9> notes{};
    bool all_agree = false;
};

// Evaluates the nine equivalent forms of w(T) <= 1; throws BoundaryBand when
// |w - 1| <= 1e-2.
EquivalenceReport equivalence_suite(const CMat& t, const Tolerances& tol = default_tolerances());

}  // namespace mrange
