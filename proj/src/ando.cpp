#include "mrange/ando.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mrange/numrange.hpp"

namespace mrange {

namespace {

constexpr int kMaxDoubling = 200;
constexpr int kMaxPolish = 10000;
constexpr double kRangeEps = 1e-6;
constexpr double kFixedPointEps = 1e-8;

double lambda_min(const CMat& h) { return herm_eig(h).eigenvalues(0); }

bool nonnegative(const CMat& h, double eps) { return lambda_min(h) >= -eps; }

CMat step_map(const CMat& t, const CMat& x, const Tolerances& tol) {
    const Eigen::Index n = t.rows();
    return hermitian_part(CMat::Identity(n, n) - 0.25 * t.adjoint() * pinv(x, tol) * t);
}

[[noreturn]] void too_large(const std::string& why) {
    throw Error(ErrorKind::RadiusTooLarge, "numerical radius exceeds 1 (" + why + ")");
}

}  // namespace

CMat lmi_block(const CMat& a, const CMat& t) {
    const Eigen::Index n = t.rows();
    CMat block(2 * n, 2 * n);
    block << a, t.adjoint(), t, CMat::Identity(n, n) - a;
    return block;
}

AndoX ando_x(const CMat& t_in, const Tolerances& tol, bool check_radius) {
    require_square(t_in, "ando input");
    require_finite(t_in, "ando input");
    // Inputs accepted within the 1e-9 band above w = 1 are pulled back onto
    // the boundary; otherwise X would need slightly negative eigenvalues.
    CMat t = t_in;
    if (check_radius) {
        const double w = num_radius(t_in, tol);
        if (w > 1.0 + 1e-9) too_large("w = " + std::to_string(w));
        if (w > 1.0) t /= w;
    }
    const Eigen::Index n = t.rows();
    const CMat id = CMat::Identity(n, n);
    const double scale = 1.0 + op_norm(t);
    const double mono_eps = tol.psd_eps * scale;

    // Doubling: with A_0 = T/2, Q_0 = I, P_0 = 0 and M = (Q - P)^+,
    //   A' = A M A,  Q' = Q - A^* M A,  P' = P + A M A^*,
    // Q_k equals X_{2^k - 1} of the plain fixed-point sequence. The plain
    // sequence only converges like 1/k when w(T) = 1; this samples it
    // geometrically.
    CMat a = 0.5 * t;
    CMat q = id;
    CMat p = CMat::Zero(n, n);
    int iterations = 0;
    for (int step = 0; step < kMaxDoubling; ++step) {
        const CMat m = pinv(q - p, tol);
        const CMat am = a * m;
        const CMat q_next = hermitian_part(q - a.adjoint() * m * a);
        const CMat p_next = hermitian_part(p + am * a.adjoint());
        const CMat a_next = am * a;
        ++iterations;
        if (!nonnegative(q - q_next, mono_eps) || !nonnegative(q_next, mono_eps)) too_large("iteration not monotone");
        const double change = (q_next - q).norm();
        q = q_next;
        p = p_next;
        a = a_next;
        if (change <= tol.fixpoint_eps * scale) break;
    }

    CMat x = q;
    bool converged = false;
    for (int k = 0; k < kMaxPolish && !converged; ++k) {
        const CMat next = step_map(t, x, tol);
        ++iterations;
        if (!nonnegative(x - next, mono_eps) || !nonnegative(next, mono_eps)) too_large("iteration not monotone");
        converged = (next - x).norm() <= tol.fixpoint_eps;
        x = next;
    }

    AndoX out;
    out.x = x;
    out.iterations = iterations;
    out.fixed_point_residual = (x - step_map(t, x, tol)).norm();

    const double range_defect = op_norm((id - x * pinv(x, tol)) * t);
    if (range_defect > kRangeEps) {
        throw Error(ErrorKind::RangeViolation, "T is not mapped into range(X): defect " + std::to_string(range_defect));
    }
    const CMat block = lmi_block(id - x, 0.5 * t);
    const PsdResult lmi = psd_check(block, tol);
    out.lmi_min_eig = lmi.min_eig;
    if (!lmi.psd) too_large("LMI fails with min eigenvalue " + std::to_string(lmi.min_eig));
    // An unconverged polish is still accepted when the fixed-point equation holds.
    if (out.fixed_point_residual > kFixedPointEps) {
        throw Error(ErrorKind::NoConvergence, "fixed point residual " + std::to_string(out.fixed_point_residual) +
                                                  " after " + std::to_string(iterations) + " steps");
    }
    return out;
}

namespace {

struct Factor {
    CMat x;
    CMat z;
    int iterations;
    double lmi_min_eig;
    double fixed_point;
};

// Z = X^{-1/2} (T/2) (I - X)^{-1/2} on the relevant ranges, zero elsewhere.
Factor factor(const CMat& t, const Tolerances& tol, bool check_radius) {
    const AndoX ax = ando_x(t, tol, check_radius);
    const Eigen::Index n = t.rows();
    const CMat root_x = sqrt_psd(ax.x, tol);
    const CMat root_c = sqrt_psd(CMat::Identity(n, n) - ax.x, tol);
    return {ax.x, pinv(root_x, tol) * (0.5 * t) * pinv(root_c, tol), ax.iterations, ax.lmi_min_eig,
            ax.fixed_point_residual};
}

}  // namespace

AndoDecomposition ando_decompose(const CMat& t, const Tolerances& tol, bool check_radius) {
    const Factor f = factor(t, tol, check_radius);
    const Factor g = factor(t.adjoint(), tol, check_radius);
    const Eigen::Index n = t.rows();
    const CMat id = CMat::Identity(n, n);

    AndoDecomposition d;
    d.x = f.x;
    d.y_max = 2.0 * f.x - id;
    d.y_min = id - 2.0 * g.x;
    d.z = f.z;
    d.z_min = g.z.adjoint();
    d.c = f.z * sqrt_psd(id - f.x, tol);
    d.iterations = f.iterations;

    AndoResiduals& r = d.residuals;
    r.lmi_min_eig = f.lmi_min_eig;
    r.fixed_point = f.fixed_point;
    r.reconstruct_max = op_norm(sqrt_psd(id + d.y_max, tol) * d.z * sqrt_psd(id - d.y_max, tol) - t);
    r.reconstruct_min = op_norm(sqrt_psd(id + d.y_min, tol) * d.z_min * sqrt_psd(id - d.y_min, tol) - t);
    r.reconstruct_c = op_norm(2.0 * sqrt_psd(id - d.c.adjoint() * d.c, tol) * d.c - t);
    r.z_norm = op_norm(d.z);

    const CMat gap = id - d.y_max;
    const EigResult eig = herm_eig(gap);
    const double cut = tol.rank_rel * std::max(1.0, eig.eigenvalues.cwiseAbs().maxCoeff());
    double iso = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        if (eig.eigenvalues(k) <= cut) continue;
        const CVec v = gap * eig.eigenvectors.col(k);
        iso = std::max(iso, std::abs((d.z * v).norm() - v.norm()));
    }
    r.z_isometry = iso;
    r.y_order = lambda_min(d.y_max - d.y_min);

    d.verified = r.fixed_point <= kFixedPointEps && r.reconstruct_max <= 1e-8 && r.reconstruct_min <= 1e-8 &&
                 r.reconstruct_c <= 1e-8 && r.z_norm <= 1.0 + 1e-8 && r.z_isometry <= 1e-7 &&
                 r.y_order >= -tol.psd_eps * 3.0;
    return d;
}

LmiResult radius_lmi(const CMat& t, const Tolerances& tol) {
    require_square(t, "radius_lmi input");
    const Eigen::Index n = t.rows();
    LmiResult r;
    try {
        // X(2T) is the largest X with [[I - X, T^*], [T, X]] >= 0, so A = I - X(2T)
        // is the smallest admissible A.
        const AndoX ax = ando_x(2.0 * t, tol, false);
        const CMat a = CMat::Identity(n, n) - ax.x;
        const PsdResult psd = psd_check(lmi_block(a, t), tol);
        r.block_min_eig = psd.min_eig;
        if (psd.psd) {
            r.holds = true;
            r.a = a;
            return r;
        }
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::RadiusTooLarge && e.kind() != ErrorKind::RangeViolation &&
            e.kind() != ErrorKind::NoConvergence) {
            throw;
        }
    }
    const RadiusResult w = numerical_radius(t, tol);
    r.certificate_angle = w.argmax_angle;
    r.certificate_value = w.radius;
    return r;
}

MapOnUnits ucp_from_e21(const CMat& t, const Tolerances& tol) {
    require_square(t, "ucp_from_e21 input");
    const double w = num_radius(t, tol);
    if (w > 0.5 + 1e-9) throw Error(ErrorKind::RadiusTooLarge, "w(T) = " + std::to_string(w) + " exceeds 1/2");
    const LmiResult lmi = radius_lmi(t, tol);
    if (!lmi.holds) throw Error(ErrorKind::RadiusTooLarge, "LMI construction failed at w(T) = " + std::to_string(w));
    const Eigen::Index n = t.rows();
    const CMat& a = *lmi.a;
    return MapOnUnits(2, static_cast<int>(n), {a, t.adjoint(), t, CMat::Identity(n, n) - a});
}

}  // namespace mrange
