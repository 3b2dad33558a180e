#include "mrange/matrange.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mrange/ando.hpp"
#include "mrange/angular.hpp"
#include "mrange/dilation.hpp"
#include "mrange/feasibility.hpp"
#include "mrange/numrange.hpp"

namespace mrange {

namespace {

constexpr int kSuiteWindow = 16;
constexpr int kSuitePowers = 7;

// Solves sum_j H_j = I, sum_j lambda_j H_j = X over PSD H_j.
FeasibilityOutcome solve_weights(const std::vector<cplx>& points, const CMat& x, std::optional<Certificate> cert,
                                 const Tolerances& tol) {
    const int d = static_cast<int>(x.rows());
    const int k = static_cast<int>(points.size());
    FeasibilityProblem p = product_problem(k, d);
    constrain_weighted_sum(p, std::vector<cplx>(static_cast<std::size_t>(k), 1.0), CMat::Identity(d, d));
    constrain_weighted_sum(p, points, x);
    p.certificate = std::move(cert);
    return solve_feasibility(p, tol);
}

double weights_residual(const std::vector<cplx>& points, const CMat& x, const std::vector<CMat>& h) {
    const Eigen::Index d = x.rows();
    CMat sum = CMat::Zero(d, d), moment = CMat::Zero(d, d);
    for (std::size_t j = 0; j < h.size(); ++j) {
        sum += h[j];
        moment += points[j] * h[j];
    }
    return std::max((sum - CMat::Identity(d, d)).cwiseAbs().maxCoeff(), (moment - x).cwiseAbs().maxCoeff());
}

}  // namespace

MembershipVerdict member_e21(const CMat& x, const Tolerances& tol) {
    require_square(x, "member_e21 input");
    MembershipVerdict v;
    const double w = num_radius(x, tol);
    v.member = w <= 0.5 + tol.psd_eps;
    // members inside the tolerance band report a zero margin
    v.margin = v.member ? std::max(0.0, 0.5 - w) : 0.5 - w;
    if (v.member) {
        v.witness_map = ucp_from_e21(x, tol);
        const PsdResult cp = is_cp(*v.witness_map, tol);
        v.witness_residual = std::max({0.0, -cp.min_eig, v.witness_map->unital_defect(),
                                       (v.witness_map->at(1, 0) - x).norm()});
        if (!cp.psd) {
            v.unverified = true;
            v.note = "witness Choi min eigenvalue " + std::to_string(cp.min_eig);
        }
    }
    return v;
}

MembershipVerdict member_shift_ball(const CMat& x, int nodes, const Tolerances& tol) {
    require_square(x, "member_shift_ball input");
    if (nodes < 3) throw Error(ErrorKind::BadArgument, "need at least 3 nodes");
    MembershipVerdict v;
    const double norm = op_norm(x);
    v.member = norm <= 1.0 + tol.psd_eps;
    v.margin = v.member ? std::max(0.0, 1.0 - norm) : 1.0 - norm;
    if (!v.member || norm > 0.95) return v;

    // Unitary surrogate of the shift: diag of the nodes-th roots of unity.
    std::vector<cplx> roots(static_cast<std::size_t>(nodes));
    for (int j = 0; j < nodes; ++j) roots[static_cast<std::size_t>(j)] = std::polar(1.0, 2.0 * std::numbers::pi * j / nodes);
    const FeasibilityOutcome out = solve_weights(roots, x, std::nullopt, tol);
    if (out.status == FeasibilityStatus::Feasible) {
        v.witness_weights = out.blocks;
        v.witness_residual = weights_residual(roots, x, out.blocks);
    } else {
        v.unverified = true;
        v.witness_residual = out.residual;
        v.note = "SolverUndetermined: witness residual " + std::to_string(out.residual);
    }
    return v;
}

MembershipVerdict member_normal(const std::vector<cplx>& spectrum, const CMat& x, const Tolerances& tol) {
    require_square(x, "member_normal input");
    if (spectrum.empty()) throw Error(ErrorKind::BadArgument, "spectrum must be nonempty");

    // X = sum lambda_j H_j forces Re(e^{i theta} X) <= max_j Re(e^{i theta} lambda_j) I.
    auto excess = [&](double theta) {
        double h = -std::numeric_limits<double>::infinity();
        for (const cplx& l : spectrum) h = std::max(h, (std::polar(1.0, theta) * l).real());
        return support_value(x, theta) - h;
    };
    const AngularOptimum worst = maximize_on_circle(excess, std::max(tol.grid_angles, 64 * static_cast<int>(x.rows())));
    Certificate cert{-worst.value, "W(X) leaves conv(spectrum) at angle " + std::to_string(worst.angle)};

    MembershipVerdict v;
    const FeasibilityOutcome out = solve_weights(spectrum, x, cert, tol);
    switch (out.status) {
        case FeasibilityStatus::Feasible:
            v.member = true;
            v.margin = std::max(0.0, -worst.value);
            v.witness_weights = out.blocks;
            v.witness_residual = weights_residual(spectrum, x, out.blocks);
            break;
        case FeasibilityStatus::Infeasible:
            v.margin = -worst.value;
            v.note = "Infeasible: " + out.certificate;
            break;
        case FeasibilityStatus::Undetermined:
            v.unverified = true;
            v.margin = -out.residual;
            v.witness_residual = out.residual;
            v.note = "Undetermined: residual " + std::to_string(out.residual);
            break;
    }
    return v;
}

std::vector<CMat> spatial_samples(const CMat& t, int n, int count, std::uint64_t seed) {
    require_square(t, "spatial_samples input");
    if (n < 1 || n > t.rows()) throw Error(ErrorKind::BadShape, "compression size must be in 1..dim(T)");
    if (count < 0) throw Error(ErrorKind::BadArgument, "negative sample count");
    std::vector<CMat> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const CMat v = random_isometry(static_cast<int>(t.rows()), n, derive_seed(seed, static_cast<std::uint64_t>(i)));
        out.push_back(v.adjoint() * t * v);
    }
    return out;
}

SmithWard smith_ward_nu(const CMat& t, int n) {
    require_square(t, "smith_ward input");
    const int dim = static_cast<int>(t.rows());
    if (n < 2 || n > dim) throw Error(ErrorKind::BadShape, "need 2 <= n <= dim(T)");
    Eigen::JacobiSVD<CMat> svd(t, Eigen::ComputeFullV);
    const CVec xi = svd.matrixV().col(0);

    std::vector<CVec> basis{xi};
    auto add = [&](CVec v) {
        for (const CVec& b : basis) v -= b.dot(v) * b;
        const double len = v.norm();
        if (len > 1e-10) basis.push_back(v / len);
    };
    add(t * xi);
    for (int k = 0; k < dim && static_cast<int>(basis.size()) < n; ++k) add(CVec::Unit(dim, k));

    SmithWard out;
    out.basis = CMat(dim, n);
    for (int k = 0; k < n; ++k) out.basis.col(k) = basis[static_cast<std::size_t>(k)];
    out.compression = out.basis.adjoint() * t * out.basis;
    out.nu_lower = op_norm(out.compression);
    return out;
}

ProbeRecord probe_pair(const CMat& s, const CMat& t, const CMat& a, const CMat& b) {
    require_square(s, "probe S");
    require_square(t, "probe T");
    const int ds = static_cast<int>(s.rows()), dt = static_cast<int>(t.rows());
    ProbeRecord r;
    r.norm_s = op_norm(kron(a, identity(ds)) + kron(b, s));
    r.norm_t = op_norm(kron(a, identity(dt)) + kron(b, t));
    r.gap = std::abs(r.norm_s - r.norm_t);
    return r;
}

ProbeReport opsys_probe(const CMat& s, const CMat& t, int n, int samples, std::uint64_t seed) {
    if (n < 1 || samples < 0) throw Error(ErrorKind::BadArgument, "probe needs n >= 1 and samples >= 0");
    ProbeReport rep;
    rep.samples = samples;
    for (int i = 0; i < samples; ++i) {
        SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        const CMat a = random_gaussian(n, n, rng);
        const CMat b = random_gaussian(n, n, rng);
        rep.records.push_back(probe_pair(s, t, a, b));
        if (rep.records.back().gap > rep.max_gap || rep.argmax < 0) {
            rep.max_gap = rep.records.back().gap;
            rep.argmax = i;
        }
    }
    return rep;
}

EquivalenceReport equivalence_suite(const CMat& t, const Tolerances& tol) {
    require_square(t, "equivalence_suite input");
    EquivalenceReport rep;
    rep.radius = num_radius(t, tol);
    if (std::abs(rep.radius - 1.0) <= 1e-2) {
        throw Error(ErrorKind::BoundaryBand, "w(T) = " + std::to_string(rep.radius) + " is within 1e-2 of 1");
    }
    const Eigen::Index d = t.rows();
    auto guarded = [&](int idx, auto&& body) {
        try {
            rep.conditions[static_cast<std::size_t>(idx)] = body();
        } catch (const Error& e) {
            rep.conditions[static_cast<std::size_t>(idx)] = false;
            rep.notes[static_cast<std::size_t>(idx)] = std::string(e.name());
        }
    };

    // (1) w(T) <= 1
    rep.conditions[0] = rep.radius <= 1.0;
    // (2) Re(lambda T) <= I on the circle
    guarded(1, [&] { return radius_characterizations(t, tol).conditions[2]; });
    // (3) unitary 2-dilation: (U^n)_{00} = T^n / 2
    guarded(2, [&] {
        const AndoDecomposition dec = ando_decompose(t, tol, false);
        const WindowedOperator u = two_dilation_from_contraction(dec.c, kSuiteWindow, tol);
        const std::vector<CMat> corners = u.corner_powers(kSuitePowers);
        CMat p = CMat::Identity(d, d);
        double err = 0.0;
        for (int k = 1; k <= kSuitePowers; ++k) {
            p = p * t;
            err = std::max(err, op_norm(corners[static_cast<std::size_t>(k)] - 0.5 * p));
        }
        rep.notes[2] = "max corner error " + std::to_string(err);
        return err <= 1e-9;
    });
    // (4) I + Re(lambda T) >= 0, the n = 2 nilpotent condition on T/2
    guarded(3, [&] { return nilpotent_condition(0.5 * t, 2, tol.grid_angles, tol).holds; });
    // (5) ucp phi on M_2 with phi(S_2) = T/2, via its nilpotent dilation
    guarded(4, [&] {
        const NilpotentDilation nd = nilpotent_dilation(0.5 * t, 2, tol);
        return nd.compression_residual <= 1e-7;
    });
    // (6) T = (I + Y)^{1/2} Z (I - Y)^{1/2}
    guarded(5, [&] { return ando_decompose(t, tol, false).verified; });
    // (7) the 2x2 LMI, evaluated at the scale where it characterizes w <= 1
    guarded(6, [&] { return radius_lmi(0.5 * t, tol).holds; });
    // (8) T = 2 (I - C^*C)^{1/2} C with C a contraction
    guarded(7, [&] {
        const AndoDecomposition dec = ando_decompose(t, tol, false);
        return dec.residuals.reconstruct_c <= 1e-8 && op_norm(dec.c) <= 1.0 + 1e-8;
    });
    // (9) T/2 in W(E_21)
    guarded(8, [&] {
        const MapOnUnits phi = ucp_from_e21(0.5 * t, tol);
        return is_cp(phi, tol).psd && phi.unital_defect() <= 1e-9;
    });

    const bool first = rep.conditions[0];
    rep.all_agree = std::all_of(rep.conditions.begin(), rep.conditions.end(), [&](bool c) { return c == first; });
    return rep;
}

}  // namespace mrange
