#include "mrange/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mrange/ando.hpp"
#include "mrange/angular.hpp"

namespace mrange {

namespace {

// (I - A^*A)^{1/2}; contractions only, tiny negative eigenvalues are clipped.
CMat defect(const CMat& a) {
    const Eigen::Index n = a.cols();
    return sqrt_psd(psd_projection(CMat::Identity(n, n) - a.adjoint() * a));
}

void require_contraction(const CMat& c) {
    const double norm = op_norm(c);
    if (norm > 1.0 + 1e-9) throw Error(ErrorKind::NotContraction, "operator norm " + std::to_string(norm));
}

}  // namespace

CMat halmos_unitary(const CMat& c, const Tolerances&) {
    require_square(c, "halmos_unitary input");
    require_contraction(c);
    const Eigen::Index d = c.rows();
    CMat u(2 * d, 2 * d);
    u << c, defect(c.adjoint()), defect(c), -c.adjoint();
    return u;
}

WindowedOperator::WindowedOperator(int block_dim, int window) : d_(block_dim), m_(window) {
    if (block_dim <= 0 || window < 0) throw Error(ErrorKind::BadShape, "bad window dimensions");
}

void WindowedOperator::set(int row, int col, const CMat& block) {
    if (std::abs(row) > m_ || std::abs(col) > m_) throw Error(ErrorKind::BadShape, "block index outside window");
    if (block.rows() != d_ || block.cols() != d_) throw Error(ErrorKind::ShapeMismatch, "block has wrong size");
    blocks_[{row, col}] = block;
}

int WindowedOperator::band_width() const {
    int w = 0;
    for (const auto& [key, block] : blocks_) w = std::max(w, std::abs(key.second - key.first));
    return w;
}

CMat WindowedOperator::dense() const {
    const int size = (2 * m_ + 1) * d_;
    CMat out = CMat::Zero(size, size);
    for (const auto& [key, block] : blocks_) out.block(dense_index(key.first), dense_index(key.second), d_, d_) = block;
    if (wrap) out.block(dense_index(-m_), dense_index(m_), d_, d_) += CMat::Identity(d_, d_);
    return out;
}

std::vector<CMat> WindowedOperator::corner_powers(int max_power) const {
    const CMat u = dense();
    const int z = dense_index(0);
    std::vector<CMat> out;
    // Only the block column through index 0 is needed: U^p restricted to it.
    CMat col = CMat::Zero(u.rows(), d_);
    col.block(z, 0, d_, d_) = CMat::Identity(d_, d_);
    for (int p = 0; p <= max_power; ++p) {
        out.push_back(col.block(z, 0, d_, d_));
        col = u * col;
    }
    return out;
}

WindowedOperator two_dilation_from_contraction(const CMat& c, int window, const Tolerances&) {
    require_square(c, "two_dilation contraction");
    require_contraction(c);
    if (window < 4) throw Error(ErrorKind::WindowTooSmall, "window must be at least 4, got " + std::to_string(window));
    const int d = static_cast<int>(c.rows());
    const CMat id = CMat::Identity(d, d);
    const CMat dc = defect(c);             // (I - C^*C)^{1/2}
    const CMat dcs = defect(c.adjoint());  // (I - CC^*)^{1/2}
    const CMat cs = c.adjoint();

    WindowedOperator u(d, window);
    for (int k = 2; k <= window; ++k) u.set(k, k - 1, id);
    for (int k = -2; k >= -window + 1; --k) u.set(k, k - 1, id);
    u.set(1, 0, dc);
    u.set(1, -1, -cs);
    u.set(-1, 0, c * c);
    u.set(-1, -1, c * dcs);
    u.set(-1, -2, dcs);
    u.set(0, 0, dc * c);
    u.set(0, -1, dc * dcs);
    u.set(0, -2, -cs);
    u.wrap = true;
    return u;
}

WindowedOperator two_dilation(const CMat& t, int window, const Tolerances& tol) {
    if (window < 4) throw Error(ErrorKind::WindowTooSmall, "window must be at least 4, got " + std::to_string(window));
    const AndoDecomposition dec = ando_decompose(t, tol);
    return two_dilation_from_contraction(dec.c, window, tol);
}

BilateralReport bilateral_e21_model(int window) {
    if (window < 3) throw Error(ErrorKind::WindowTooSmall, "bilateral model needs M >= 3");
    const int size = 2 * window + 1;
    CMat u = CMat::Zero(size, size);
    // U e_k = e_{k+1}, closed up at the edge.
    for (int k = -window; k < window; ++k) u(k + 1 + window, k + window) = 1.0;
    u(0, size - 1) = 1.0;
    const CMat u2 = u * u;

    BilateralReport r;
    r.compression = u.block(window, window, 2, 2);
    r.compression_sq = u2.block(window, window, 2, 2);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            if (std::abs(r.compression(i, j)) > 0.0) {
                ++r.nonzero_entries;
                r.value = r.compression(i, j);
            }
        }
    }
    r.is_e21 = (r.compression - matrix_unit(2, 1, 0)).norm() == 0.0;
    r.is_e12 = (r.compression - matrix_unit(2, 0, 1)).norm() == 0.0;
    r.square_vanishes = r.compression_sq.norm() == 0.0;
    return r;
}

CMat pd_gram(const std::vector<CMat>& blocks) {
    if (blocks.empty()) throw Error(ErrorKind::BadShape, "positive-definite test needs T(0)");
    const Eigen::Index d = blocks.front().rows();
    for (const CMat& b : blocks) {
        if (b.rows() != d || b.cols() != d) throw Error(ErrorKind::ShapeMismatch, "blocks differ in size");
    }
    if ((blocks.front() - CMat::Identity(d, d)).norm() > 1e-12) {
        throw Error(ErrorKind::BadArgument, "T(0) must be the identity");
    }
    const Eigen::Index count = static_cast<Eigen::Index>(blocks.size());
    CMat g(count * d, count * d);
    for (Eigen::Index t = 0; t < count; ++t) {
        for (Eigen::Index s = 0; s < count; ++s) {
            const CMat& b = blocks[static_cast<std::size_t>(std::abs(t - s))];
            g.block(t * d, s * d, d, d) = t >= s ? b : CMat(b.adjoint());
        }
    }
    return g;
}

PdResult pd_function_check(const std::vector<CMat>& blocks, const Tolerances& tol) {
    const PsdResult r = psd_check(pd_gram(blocks), tol);
    return {r.psd, r.min_eig};
}

NilpotentMargin nilpotent_condition(const CMat& t, int n, int grid, const Tolerances& tol) {
    require_square(t, "nilpotent_condition input");
    if (n < 2) throw Error(ErrorKind::BadArgument, "nilpotent order must be at least 2");
    const int dim = static_cast<int>(t.rows());
    std::vector<CMat> powers;
    CMat p = t;
    for (int k = 1; k < n; ++k) {
        powers.push_back(p);
        p = p * t;
    }
    auto f = [&](double theta) {
        CMat h = CMat::Identity(dim, dim);
        for (int k = 1; k < n; ++k) {
            const CMat term = std::polar(1.0, k * theta) * powers[static_cast<std::size_t>(k - 1)];
            h += term + term.adjoint();
        }
        return herm_eig(h).eigenvalues(0);
    };
    const AngularOptimum best = minimize_on_circle(f, std::max(grid, 64 * n * dim));
    return {best.value, best.angle, best.value >= -tol.psd_eps};
}

NilpotentDilation nilpotent_dilation(const CMat& t, int n, const Tolerances& tol) {
    const NilpotentMargin cond = nilpotent_condition(t, n, tol.grid_angles, tol);
    if (!cond.holds) {
        throw Error(ErrorKind::ConditionFails, "min_theta lambda_min = " + std::to_string(cond.margin) +
                                                   " at theta = " + std::to_string(cond.angle));
    }
    const int m = static_cast<int>(t.rows());
    FeasibilityProblem prob = choi_problem(n, m);
    constrain_unital(prob, n, m);
    CMat tj = CMat::Identity(m, m);
    for (int j = 1; j < n; ++j) {
        tj = tj * t;
        const CMat tj_adj = tj.adjoint();
        // phi(S^j) = sum_k phi(E_{k+j,k}) = T^j and its adjoint
        for (int a = 0; a < m; ++a) {
            for (int b = 0; b < m; ++b) {
                AffineConstraint fwd, bwd;
                for (int k = 0; k + j < n; ++k) {
                    fwd.terms.push_back({0, (k + j) * m + a, k * m + b, 1.0});
                    bwd.terms.push_back({0, k * m + a, (k + j) * m + b, 1.0});
                }
                fwd.target = tj(a, b);
                bwd.target = tj_adj(a, b);
                prob.constraints.push_back(std::move(fwd));
                prob.constraints.push_back(std::move(bwd));
            }
        }
    }
    const FeasibilityOutcome out = solve_feasibility(prob, tol);
    if (out.status != FeasibilityStatus::Feasible) {
        throw Error(ErrorKind::SolverUndetermined, "feasibility residual " + std::to_string(out.residual) + " after " +
                                                       std::to_string(out.iterations) + " iterations");
    }
    const MapOnUnits phi = unital_normalize(map_from_choi(choi_from_outcome(n, m, out)), tol);
    const StinespringForm sf = stinespring(phi, tol);

    NilpotentDilation res;
    res.order = n;
    res.r = sf.r;
    res.v = sf.v;
    res.n_op = kron(shift(n), identity(sf.r));
    res.margin = cond.margin;
    res.iterations = out.iterations;
    res.isometry_residual = (sf.v.adjoint() * sf.v - CMat::Identity(m, m)).norm();
    double worst = 0.0;
    CMat np = CMat::Identity(res.n_op.rows(), res.n_op.cols());
    tj = CMat::Identity(m, m);
    for (int j = 0; j < n; ++j) {
        worst = std::max(worst, op_norm(sf.v.adjoint() * np * sf.v - tj));
        np = np * res.n_op;
        tj = tj * t;
    }
    res.compression_residual = worst;
    if (res.isometry_residual > 1e-10 || worst > 1e-8) {
        throw Error(ErrorKind::SolverUndetermined, "dilation check failed: isometry " +
                                                       std::to_string(res.isometry_residual) + ", compression " +
                                                       std::to_string(worst));
    }
    return res;
}

}  // namespace mrange
