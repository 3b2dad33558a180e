#include "mrange/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace mrange {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kVerifyGrid = 4096;
constexpr double kPositivityFloor = 1e-8;
constexpr double kCircleBand = 1e-6;

std::vector<double> equispaced(int g) {
    std::vector<double> nodes(static_cast<std::size_t>(g));
    for (int j = 0; j < g; ++j) nodes[static_cast<std::size_t>(j)] = kTwoPi * j / g;
    return nodes;
}

void require_real_head(const std::vector<cplx>& a) {
    if (a.empty()) throw Error(ErrorKind::BadShape, "need at least a_0");
    if (std::abs(a.front().imag()) > 1e-12 * (1.0 + std::abs(a.front()))) {
        throw Error(ErrorKind::NotHermitian, "a_0 must be real");
    }
}

// Polynomial value and derivative by Horner; coefficients low to high.
std::pair<cplx, cplx> horner(const std::vector<cplx>& c, cplx z) {
    cplx v = 0.0, dv = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        dv = dv * z + v;
        v = v * z + *it;
    }
    return {v, dv};
}

// Roots of sum c_j z^j from the companion matrix; c.back() must be nonzero.
std::vector<cplx> companion_roots(const std::vector<cplx>& c) {
    const int deg = static_cast<int>(c.size()) - 1;
    if (deg <= 0) return {};
    CMat companion = CMat::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -c[static_cast<std::size_t>(i)] / c.back();
    Eigen::ComplexEigenSolver<CMat> es(companion, false);
    return {es.eigenvalues().data(), es.eigenvalues().data() + deg};
}

// Damped Gauss-Newton on the supported nodes: angles move freely, weights
// are u^2 so they stay nonnegative. Grid fitting alone cannot reach moments
// whose measure has atoms off the grid (every singular Toeplitz matrix).
void refine_nodes(const std::vector<cplx>& a, AtomicMeasure& mu, double target) {
    const int n = static_cast<int>(a.size());
    const int s = static_cast<int>(mu.nodes.size());
    if (s == 0) return;
    RVec theta(s), u(s);
    for (int j = 0; j < s; ++j) {
        theta(j) = mu.nodes[static_cast<std::size_t>(j)];
        u(j) = std::sqrt(mu.weights[static_cast<std::size_t>(j)]);
    }
    auto residual = [&](const RVec& th, const RVec& uu) {
        RVec r(2 * n);
        for (int k = 0; k < n; ++k) {
            cplx m = -a[static_cast<std::size_t>(k)];
            for (int j = 0; j < s; ++j) m += uu(j) * uu(j) * std::polar(1.0, k * th(j));
            r(2 * k) = m.real();
            r(2 * k + 1) = m.imag();
        }
        return r;
    };
    RVec r = residual(theta, u);
    double lambda = 1e-6;
    for (int it = 0; it < 200 && r.lpNorm<Eigen::Infinity>() > target; ++it) {
        Eigen::MatrixXd jac(2 * n, 2 * s);
        for (int k = 0; k < n; ++k) {
            for (int j = 0; j < s; ++j) {
                const cplx e = std::polar(1.0, k * theta(j));
                const cplx dth = cplx(0.0, k) * u(j) * u(j) * e;
                const cplx du = 2.0 * u(j) * e;
                jac(2 * k, j) = dth.real();
                jac(2 * k + 1, j) = dth.imag();
                jac(2 * k, s + j) = du.real();
                jac(2 * k + 1, s + j) = du.imag();
            }
        }
        bool improved = false;
        for (int tries = 0; tries < 30 && !improved; ++tries) {
            // (J^T J + lambda I) step = -J^T r
            const Eigen::MatrixXd h = jac.transpose() * jac + lambda * Eigen::MatrixXd::Identity(2 * s, 2 * s);
            const RVec step = h.ldlt().solve(-jac.transpose() * r);
            const RVec th = theta + step.head(s);
            const RVec uu = u + step.tail(s);
            const RVec rn = residual(th, uu);
            if (rn.norm() < r.norm()) {
                theta = th;
                u = uu;
                r = rn;
                lambda = std::max(lambda * 0.1, 1e-15);
                improved = true;
            } else {
                lambda *= 10.0;
            }
        }
        if (!improved) break;
    }
    AtomicMeasure out;
    for (int j = 0; j < s; ++j) {
        const double w = u(j) * u(j);
        if (w < 1e-14) continue;
        double th = std::fmod(theta(j), kTwoPi);
        if (th < 0.0) th += kTwoPi;
        out.nodes.push_back(th);
        out.weights.push_back(w);
    }
    mu.nodes = std::move(out.nodes);
    mu.weights = std::move(out.weights);
}

}  // namespace

double TrigPoly::eval(double theta) const {
    if (coeffs.empty()) return 0.0;
    double v = coeffs.front().real();
    for (std::size_t k = 1; k < coeffs.size(); ++k) {
        v += 2.0 * (coeffs[k] * std::polar(1.0, static_cast<double>(k) * theta)).real();
    }
    return v;
}

cplx poly_eval(const std::vector<cplx>& p, cplx z) { return horner(p, z).first; }

FejerRiesz fejer_riesz(const TrigPoly& tau_in, const Tolerances&) {
    require_real_head(tau_in.coeffs);
    TrigPoly tau = tau_in;
    double top = 0.0;
    for (const cplx& a : tau.coeffs) top = std::max(top, std::abs(a));
    while (tau.coeffs.size() > 1 && std::abs(tau.coeffs.back()) <= 1e-12 * top) tau.coeffs.pop_back();
    const int n = tau.degree();

    double tau_min = std::numeric_limits<double>::infinity(), tau_max = 0.0;
    for (int j = 0; j < kVerifyGrid; ++j) {
        const double v = tau.eval(kTwoPi * j / kVerifyGrid);
        tau_min = std::min(tau_min, v);
        tau_max = std::max(tau_max, v);
    }
    if (tau_min <= kPositivityFloor) {
        throw Error(ErrorKind::NotStrictlyPositive, "min of tau on the grid is " + std::to_string(tau_min));
    }

    FejerRiesz out;
    if (n == 0) {
        out.scale = std::sqrt(tau.coeffs.front().real());
        out.p = {out.scale};
    } else {
        // g(z) = z^N tau(z), coefficient of z^j is a_{j-N}.
        std::vector<cplx> g(static_cast<std::size_t>(2 * n + 1));
        for (int j = 0; j <= 2 * n; ++j) {
            const int k = j - n;
            g[static_cast<std::size_t>(j)] =
                k >= 0 ? tau.coeffs[static_cast<std::size_t>(k)] : std::conj(tau.coeffs[static_cast<std::size_t>(-k)]);
        }
        g[static_cast<std::size_t>(n)] = tau.coeffs.front().real();
        const cplx lead = g.back();
        std::vector<cplx> roots;
        for (cplx z : companion_roots(g)) {
            for (int it = 0; it < 3; ++it) {
                const auto [v, dv] = horner(g, z);
                if (std::abs(dv) == 0.0) break;
                const cplx next = z - v / dv;
                if (std::abs(horner(g, next).first) >= std::abs(v)) break;
                z = next;
            }
            if (std::abs(std::abs(z) - 1.0) < kCircleBand) {
                throw Error(ErrorKind::RootPairingFailed, "root at distance " +
                                                              std::to_string(std::abs(std::abs(z) - 1.0)) +
                                                              " from the unit circle");
            }
            if (std::abs(z) < 1.0) roots.push_back(z);
        }
        if (static_cast<int>(roots.size()) != n) {
            throw Error(ErrorKind::RootPairingFailed, "found " + std::to_string(roots.size()) + " roots inside, expected " +
                                                          std::to_string(n));
        }
        cplx prod = 1.0;
        for (const cplx& z : roots) prod *= z;
        if (std::abs(prod) == 0.0) throw Error(ErrorKind::RootPairingFailed, "zero root after trimming");
        out.scale = std::sqrt(std::abs(lead / prod));
        std::vector<cplx> p{out.scale};
        for (const cplx& z : roots) {
            std::vector<cplx> next(p.size() + 1, 0.0);
            for (std::size_t i = 0; i < p.size(); ++i) {
                next[i + 1] += p[i];
                next[i] -= z * p[i];
            }
            p = std::move(next);
        }
        out.p = std::move(p);
        out.inner_roots = std::move(roots);
    }

    double err = 0.0;
    for (int j = 0; j < kVerifyGrid; ++j) {
        const double theta = kTwoPi * j / kVerifyGrid;
        err = std::max(err, std::abs(tau.eval(theta) - std::norm(poly_eval(out.p, std::polar(1.0, theta)))));
    }
    out.grid_error = err;
    if (err > 1e-7 * (1.0 + tau_max)) {
        throw Error(ErrorKind::RootPairingFailed, "factor does not reproduce tau: grid error " + std::to_string(err));
    }
    return out;
}

CMat toeplitz_assemble(const std::vector<cplx>& a) {
    require_real_head(a);
    const int n = static_cast<int>(a.size());
    CMat t(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            t(r, c) = r >= c ? a[static_cast<std::size_t>(r - c)] : std::conj(a[static_cast<std::size_t>(c - r)]);
        }
    }
    for (int r = 0; r < n; ++r) t(r, r) = a.front().real();
    return t;
}

CMat block_toeplitz_assemble(const std::vector<CMat>& blocks) {
    if (blocks.empty()) throw Error(ErrorKind::BadShape, "need at least A_0");
    const Eigen::Index d = blocks.front().rows();
    for (const CMat& b : blocks) {
        if (b.rows() != d || b.cols() != d) throw Error(ErrorKind::ShapeMismatch, "blocks differ in size");
    }
    if ((blocks.front() - blocks.front().adjoint()).norm() > 1e-12 * (1.0 + blocks.front().norm())) {
        throw Error(ErrorKind::NotHermitian, "A_0 must be Hermitian");
    }
    const Eigen::Index n = static_cast<Eigen::Index>(blocks.size());
    CMat t(n * d, n * d);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            const CMat& b = blocks[static_cast<std::size_t>(std::abs(r - c))];
            t.block(r * d, c * d, d, d) = r >= c ? b : CMat(b.adjoint());
        }
    }
    for (Eigen::Index r = 0; r < n; ++r) t.block(r * d, r * d, d, d) = hermitian_part(blocks.front());
    return t;
}

PsdResult toeplitz_psd(const std::vector<cplx>& a, const Tolerances& tol) { return psd_check(toeplitz_assemble(a), tol); }

PsdResult block_toeplitz_psd(const std::vector<CMat>& blocks, const Tolerances& tol) {
    return psd_check(block_toeplitz_assemble(blocks), tol);
}

RVec nnls(const Eigen::MatrixXd& a, const RVec& b, int max_iter) {
    const Eigen::Index cols = a.cols();
    if (a.rows() != b.size()) throw Error(ErrorKind::ShapeMismatch, "nnls: A and b disagree");
    if (max_iter <= 0) max_iter = 3 * static_cast<int>(cols) + 30;
    const double eps = 10.0 * std::numeric_limits<double>::epsilon() * a.norm() *
                       static_cast<double>(std::max(a.rows(), cols));
    RVec x = RVec::Zero(cols);
    std::vector<bool> passive(static_cast<std::size_t>(cols), false);

    auto solve_passive = [&]() {
        std::vector<Eigen::Index> idx;
        for (Eigen::Index j = 0; j < cols; ++j) {
            if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
        }
        Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(idx.size()));
        for (std::size_t k = 0; k < idx.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
        const RVec s_sub = sub.colPivHouseholderQr().solve(b);
        RVec s = RVec::Zero(cols);
        for (std::size_t k = 0; k < idx.size(); ++k) s(idx[k]) = s_sub(static_cast<Eigen::Index>(k));
        return s;
    };

    RVec w = a.transpose() * (b - a * x);
    for (int outer = 0; outer < max_iter; ++outer) {
        Eigen::Index best = -1;
        double best_w = eps;
        for (Eigen::Index j = 0; j < cols; ++j) {
            if (!passive[static_cast<std::size_t>(j)] && w(j) > best_w) {
                best_w = w(j);
                best = j;
            }
        }
        if (best < 0) break;
        passive[static_cast<std::size_t>(best)] = true;
        for (int inner = 0; inner <= static_cast<int>(cols); ++inner) {
            const RVec s = solve_passive();
            double alpha = 1.0;
            bool feasible = true;
            for (Eigen::Index j = 0; j < cols; ++j) {
                if (passive[static_cast<std::size_t>(j)] && s(j) <= 0.0) {
                    feasible = false;
                    alpha = std::min(alpha, x(j) / (x(j) - s(j)));
                }
            }
            if (feasible) {
                x = s;
                break;
            }
            x += alpha * (s - x);
            for (Eigen::Index j = 0; j < cols; ++j) {
                if (passive[static_cast<std::size_t>(j)] && x(j) <= eps) {
                    passive[static_cast<std::size_t>(j)] = false;
                    x(j) = 0.0;
                }
            }
        }
        w = a.transpose() * (b - a * x);
    }
    return x;
}

namespace {

// Nonnegative fit of the moments on fixed nodes, then node refinement.
AtomicMeasure fit_on_nodes(const std::vector<cplx>& a, const std::vector<double>& nodes, double scale) {
    const int n = static_cast<int>(a.size());
    const int g = static_cast<int>(nodes.size());
    Eigen::MatrixXd m(2 * n, g);
    RVec rhs(2 * n);
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < g; ++j) {
            const cplx e = std::polar(1.0, k * nodes[static_cast<std::size_t>(j)]);
            m(2 * k, j) = e.real();
            m(2 * k + 1, j) = e.imag();
        }
        rhs(2 * k) = a[static_cast<std::size_t>(k)].real();
        rhs(2 * k + 1) = k == 0 ? 0.0 : a[static_cast<std::size_t>(k)].imag();
    }
    const RVec w = nnls(m, rhs);
    AtomicMeasure mu;
    for (int j = 0; j < g; ++j) {
        if (w(j) >= 1e-10) {
            mu.nodes.push_back(nodes[static_cast<std::size_t>(j)]);
            mu.weights.push_back(w(j));
        }
    }
    auto moment_residual = [&]() {
        const std::vector<cplx> moments = toeplitz_from_measure(mu, n);
        double res = 0.0;
        for (int k = 0; k < n; ++k) res = std::max(res, std::abs(moments[static_cast<std::size_t>(k)] - a[static_cast<std::size_t>(k)]));
        return res;
    };
    mu.residual = moment_residual();
    if (mu.residual > 1e-12 * (1.0 + scale)) {
        refine_nodes(a, mu, 1e-13 * (1.0 + scale));
        mu.residual = moment_residual();
    }
    return mu;
}

// Candidate atoms of a singular Toeplitz matrix: with entry (r, c) = a_{r-c}
// every atom e^{i theta} satisfies sum_r v_r e^{-i r theta} = 0 for a kernel
// vector v, so the atoms sit at minus the arguments of the polynomial's roots.
std::vector<double> kernel_nodes(const std::vector<cplx>& a) {
    const EigResult e = herm_eig(toeplitz_assemble(a));
    std::vector<cplx> v(e.eigenvectors.col(0).data(), e.eigenvectors.col(0).data() + e.eigenvectors.rows());
    while (v.size() > 1 && std::abs(v.back()) <= 1e-12) v.pop_back();
    std::vector<double> nodes;
    for (const cplx& z : companion_roots(v)) {
        double th = std::fmod(-std::arg(z), kTwoPi);
        if (th < 0.0) th += kTwoPi;
        nodes.push_back(th);
    }
    return nodes;
}

}  // namespace

AtomicMeasure measure_from_toeplitz(const std::vector<cplx>& a, int grid, const Tolerances& tol) {
    const PsdResult psd = toeplitz_psd(a, tol);
    if (!psd.psd) throw Error(ErrorKind::NotPSD, "Toeplitz matrix has eigenvalue " + std::to_string(psd.min_eig));
    const int n = static_cast<int>(a.size());
    const int g = grid > 0 ? grid : 8 * n;
    double scale = 0.0;
    for (const cplx& v : a) scale = std::max(scale, std::abs(v));
    const double limit = 1e-6 * (1.0 + scale);

    AtomicMeasure mu = fit_on_nodes(a, equispaced(g), scale);
    if (mu.residual > 1e-10 * (1.0 + scale) && n > 1) {
        // grid nodes miss atoms of (near-)singular matrices; seed with the kernel roots too
        std::vector<double> nodes = equispaced(g);
        const std::vector<double> extra = kernel_nodes(a);
        nodes.insert(nodes.end(), extra.begin(), extra.end());
        AtomicMeasure alt = fit_on_nodes(a, nodes, scale);
        if (alt.residual < mu.residual) mu = std::move(alt);
    }
    if (mu.residual > limit) {
        throw Error(ErrorKind::MomentResidualTooLarge,
                    "moment residual " + std::to_string(mu.residual) + " on " + std::to_string(g) + " nodes");
    }
    return mu;
}

BlockMeasure block_measure_from_toeplitz(const std::vector<CMat>& blocks, int grid, const Tolerances& tol) {
    const PsdResult psd = block_toeplitz_psd(blocks, tol);
    if (!psd.psd) throw Error(ErrorKind::NotPSD, "block Toeplitz matrix has eigenvalue " + std::to_string(psd.min_eig));
    const int n = static_cast<int>(blocks.size());
    const int d = static_cast<int>(blocks.front().rows());
    const int g = grid > 0 ? grid : 8 * n;
    const std::vector<double> nodes = equispaced(g);

    FeasibilityProblem p = product_problem(g, d);
    for (int k = 0; k < n; ++k) {
        std::vector<cplx> weights(static_cast<std::size_t>(g));
        for (int j = 0; j < g; ++j) weights[static_cast<std::size_t>(j)] = std::polar(1.0, k * nodes[static_cast<std::size_t>(j)]);
        constrain_weighted_sum(p, weights, k == 0 ? hermitian_part(blocks.front()) : blocks[static_cast<std::size_t>(k)]);
    }
    const FeasibilityOutcome out = solve_feasibility(p, tol);
    if (out.status != FeasibilityStatus::Feasible) {
        throw Error(ErrorKind::SolverUndetermined, "moment feasibility residual " + std::to_string(out.residual) +
                                                       " after " + std::to_string(out.iterations) + " iterations");
    }
    BlockMeasure mu;
    mu.nodes = nodes;
    mu.weights = out.blocks;
    mu.residual = out.residual;
    mu.iterations = out.iterations;
    return mu;
}

std::vector<cplx> toeplitz_from_measure(const AtomicMeasure& mu, int n) {
    if (mu.nodes.size() != mu.weights.size()) throw Error(ErrorKind::ShapeMismatch, "nodes and weights differ in count");
    std::vector<cplx> a(static_cast<std::size_t>(n), 0.0);
    for (std::size_t j = 0; j < mu.nodes.size(); ++j) {
        if (mu.weights[j] < 0.0) throw Error(ErrorKind::NotPSD, "negative weight in measure");
        for (int k = 0; k < n; ++k) a[static_cast<std::size_t>(k)] += mu.weights[j] * std::polar(1.0, k * mu.nodes[j]);
    }
    if (n > 0) a.front() = a.front().real();
    return a;
}

std::vector<CMat> toeplitz_from_measure(const BlockMeasure& mu, int n) {
    if (mu.nodes.size() != mu.weights.size() || mu.weights.empty()) {
        throw Error(ErrorKind::ShapeMismatch, "nodes and weights differ in count");
    }
    const Eigen::Index d = mu.weights.front().rows();
    std::vector<CMat> a(static_cast<std::size_t>(n), CMat::Zero(d, d));
    for (std::size_t j = 0; j < mu.nodes.size(); ++j) {
        for (int k = 0; k < n; ++k) a[static_cast<std::size_t>(k)] += std::polar(1.0, k * mu.nodes[j]) * mu.weights[j];
    }
    if (n > 0) a.front() = hermitian_part(a.front());
    return a;
}

}  // namespace mrange
