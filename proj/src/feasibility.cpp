#include "mrange/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace mrange {

namespace {

using RMat = Eigen::MatrixXd;

// Hermitian d x d <-> R^{d^2}: diagonal entries, then sqrt2 Re and sqrt2 Im of
// the strict upper triangle. The map is an isometry for the Frobenius norm,
// so Euclidean projections in R^N are Frobenius projections of the blocks.
struct Layout {
    std::vector<int> sizes;
    std::vector<int> offsets;
    int dim = 0;

    explicit Layout(const std::vector<int>& s) : sizes(s) {
        for (int d : sizes) {
            if (d <= 0) throw Error(ErrorKind::BadShape, "block sizes must be positive");
            offsets.push_back(dim);
            dim += d * d;
        }
    }

    // Coordinates (index, complex weight) whose combination gives X_b(r, c).
    void entry(int b, int r, int c, std::vector<std::pair<int, cplx>>& out) const {
        out.clear();
        const int d = sizes[static_cast<std::size_t>(b)];
        const int base = offsets[static_cast<std::size_t>(b)];
        if (r == c) {
            out.emplace_back(base + r, 1.0);
            return;
        }
        const double s = 1.0 / std::numbers::sqrt2;
        const int i = std::min(r, c), j = std::max(r, c);
        const int k = upper_index(d, i, j);
        out.emplace_back(base + d + 2 * k, s);
        out.emplace_back(base + d + 2 * k + 1, r < c ? cplx(0.0, s) : cplx(0.0, -s));
    }

    static int upper_index(int d, int i, int j) { return i * d - i * (i + 1) / 2 + (j - i - 1); }

    CMat unpack(int b, const RVec& x) const {
        const int d = sizes[static_cast<std::size_t>(b)];
        const int base = offsets[static_cast<std::size_t>(b)];
        const double s = 1.0 / std::numbers::sqrt2;
        CMat m(d, d);
        for (int i = 0; i < d; ++i) m(i, i) = x(base + i);
        for (int i = 0; i < d; ++i) {
            for (int j = i + 1; j < d; ++j) {
                const int k = upper_index(d, i, j);
                const cplx z(s * x(base + d + 2 * k), s * x(base + d + 2 * k + 1));
                m(i, j) = z;
                m(j, i) = std::conj(z);
            }
        }
        return m;
    }

    void pack(int b, const CMat& m, RVec& x) const {
        const int d = sizes[static_cast<std::size_t>(b)];
        const int base = offsets[static_cast<std::size_t>(b)];
        const double r2 = std::numbers::sqrt2;
        for (int i = 0; i < d; ++i) x(base + i) = m(i, i).real();
        for (int i = 0; i < d; ++i) {
            for (int j = i + 1; j < d; ++j) {
                const int k = upper_index(d, i, j);
                // average the two triangles so that slightly non-Hermitian input is symmetrized
                const cplx z = 0.5 * (m(i, j) + std::conj(m(j, i)));
                x(base + d + 2 * k) = r2 * z.real();
                x(base + d + 2 * k + 1) = r2 * z.imag();
            }
        }
    }
};

void check_term(const Layout& layout, const FeasibilityTerm& t) {
    if (t.block < 0 || t.block >= static_cast<int>(layout.sizes.size())) {
        throw Error(ErrorKind::BadShape, "constraint refers to a missing block");
    }
    const int d = layout.sizes[static_cast<std::size_t>(t.block)];
    if (t.row < 0 || t.row >= d || t.col < 0 || t.col >= d) {
        throw Error(ErrorKind::BadShape, "constraint entry outside its block");
    }
}

}  // namespace

std::string_view status_name(FeasibilityStatus s) {
    switch (s) {
        case FeasibilityStatus::Feasible: return "Feasible";
        case FeasibilityStatus::Undetermined: return "Undetermined";
        case FeasibilityStatus::Infeasible: return "Infeasible";
    }
    return "Unknown";
}

FeasibilityProblem choi_problem(int n, int m) {
    if (n <= 0 || m <= 0) throw Error(ErrorKind::BadShape, "choi_problem dimensions must be positive");
    FeasibilityProblem p;
    p.block_sizes = {n * m};
    return p;
}

FeasibilityProblem product_problem(int count, int d) {
    if (count <= 0 || d <= 0) throw Error(ErrorKind::BadShape, "product_problem dimensions must be positive");
    FeasibilityProblem p;
    p.block_sizes.assign(static_cast<std::size_t>(count), d);
    return p;
}

void constrain_map_value(FeasibilityProblem& p, int n, int m, int i, int j, const CMat& value) {
    if (value.rows() != m || value.cols() != m) throw Error(ErrorKind::ShapeMismatch, "prescribed value is not m x m");
    if (i < 0 || i >= n || j < 0 || j >= n) throw Error(ErrorKind::BadShape, "matrix unit index out of range");
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            p.constraints.push_back({{{0, i * m + a, j * m + b, 1.0}}, value(a, b)});
        }
    }
}

void constrain_unital(FeasibilityProblem& p, int n, int m) {
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            AffineConstraint c;
            for (int i = 0; i < n; ++i) c.terms.push_back({0, i * m + a, i * m + b, 1.0});
            c.target = a == b ? 1.0 : 0.0;
            p.constraints.push_back(std::move(c));
        }
    }
}

void constrain_weighted_sum(FeasibilityProblem& p, const std::vector<cplx>& weights, const CMat& target) {
    if (weights.size() != p.block_sizes.size()) throw Error(ErrorKind::ShapeMismatch, "one weight per block expected");
    const Eigen::Index d = target.rows();
    if (target.cols() != d) throw Error(ErrorKind::NonSquare, "weighted-sum target must be square");
    for (int s : p.block_sizes) {
        if (s != d) throw Error(ErrorKind::ShapeMismatch, "weighted-sum target size differs from block size");
    }
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = 0; b < d; ++b) {
            AffineConstraint c;
            for (std::size_t k = 0; k < weights.size(); ++k) {
                if (weights[k] == cplx(0.0)) continue;
                c.terms.push_back({static_cast<int>(k), static_cast<int>(a), static_cast<int>(b), weights[k]});
            }
            c.target = target(a, b);
            p.constraints.push_back(std::move(c));
        }
    }
}

FeasibilityOutcome solve_feasibility(const FeasibilityProblem& p, const Tolerances& tol, int max_iter) {
    tol.validate();
    const Layout layout(p.block_sizes);
    if (layout.sizes.empty()) throw Error(ErrorKind::BadShape, "feasibility problem has no blocks");

    FeasibilityOutcome out;
    if (p.certificate && p.certificate->value < -10.0 * tol.psd_eps) {
        out.status = FeasibilityStatus::Infeasible;
        out.certificate = p.certificate->description + " (value " + std::to_string(p.certificate->value) + ")";
        return out;
    }

    // Each complex constraint contributes a real and an imaginary row.
    const int rows = 2 * static_cast<int>(p.constraints.size());
    RMat a = RMat::Zero(std::max(rows, 1), layout.dim);
    RVec rhs = RVec::Zero(std::max(rows, 1));
    std::vector<std::pair<int, cplx>> coords;
    for (std::size_t k = 0; k < p.constraints.size(); ++k) {
        const AffineConstraint& c = p.constraints[k];
        for (const FeasibilityTerm& t : c.terms) {
            check_term(layout, t);
            layout.entry(t.block, t.row, t.col, coords);
            for (const auto& [idx, w] : coords) {
                const cplx v = t.coeff * w;
                a(2 * static_cast<Eigen::Index>(k), idx) += v.real();
                a(2 * static_cast<Eigen::Index>(k) + 1, idx) += v.imag();
            }
        }
        rhs(2 * static_cast<Eigen::Index>(k)) = c.target.real();
        rhs(2 * static_cast<Eigen::Index>(k) + 1) = c.target.imag();
    }

    // Affine set {x : A x = b} = x0 + null(A); projection x -> x - V V^T (x - x0)
    // with V spanning the row space.
    // JacobiSVD: BDCSVD in Eigen 3.4.0 mis-deflates the repeated singular
    // values that moment constraints on roots of unity produce.
    Eigen::JacobiSVD<RMat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVec& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    int rank = 0;
    while (rank < sv.size() && sv(rank) > tol.rank_rel * std::max(smax, 1.0)) ++rank;
    const RMat v = svd.matrixV().leftCols(rank);
    RVec x0 = RVec::Zero(layout.dim);
    if (rank > 0) {
        x0 = v * (sv.head(rank).cwiseInverse().asDiagonal() * (svd.matrixU().leftCols(rank).transpose() * rhs));
    }
    const double inconsistency = (a * x0 - rhs).norm();
    if (inconsistency > 1e-9 * (1.0 + rhs.norm())) {
        throw Error(ErrorKind::InconsistentAffine,
                    "affine constraints have least-squares residual " + std::to_string(inconsistency));
    }
    auto project_affine = [&](const RVec& x) -> RVec {
        if (rank == 0) return x;
        const RVec dx = x - x0;
        return x - v * (v.transpose() * dx);
    };
    auto project_psd = [&](const RVec& x) -> RVec {
        RVec y(layout.dim);
        for (int b = 0; b < static_cast<int>(layout.sizes.size()); ++b) layout.pack(b, psd_projection(layout.unpack(b, x)), y);
        return y;
    };

    const double stop = 0.01 * tol.feas_eps;
    RVec x = x0;
    RVec corr = RVec::Zero(layout.dim);
    RVec psd_point = project_psd(x);
    int iter = 0;
    double gap = (x - psd_point).norm();
    while (gap > stop && iter < max_iter) {
        const RVec y = x + corr;
        psd_point = project_psd(y);
        corr = y - psd_point;
        x = project_affine(psd_point);
        gap = (x - psd_point).norm();
        ++iter;
    }

    out.iterations = iter;
    out.blocks.reserve(layout.sizes.size());
    double min_eig = std::numeric_limits<double>::infinity();
    for (int b = 0; b < static_cast<int>(layout.sizes.size()); ++b) {
        out.blocks.push_back(layout.unpack(b, psd_point));
        min_eig = std::min(min_eig, herm_eig(out.blocks.back()).eigenvalues(0));
    }
    double affine = 0.0;
    for (const AffineConstraint& c : p.constraints) {
        cplx lhs = 0.0;
        for (const FeasibilityTerm& t : c.terms) lhs += t.coeff * out.blocks[static_cast<std::size_t>(t.block)](t.row, t.col);
        affine = std::max(affine, std::abs(lhs - c.target));
    }
    out.min_eig = min_eig;
    out.affine_residual = affine;
    out.residual = std::max(affine, std::max(0.0, -min_eig));
    out.status = out.residual <= tol.feas_eps ? FeasibilityStatus::Feasible : FeasibilityStatus::Undetermined;
    return out;
}

ChoiMat choi_from_outcome(int n, int m, const FeasibilityOutcome& out) {
    if (out.blocks.size() != 1 || out.blocks.front().rows() != n * m) {
        throw Error(ErrorKind::ShapeMismatch, "outcome does not hold a single nm x nm Choi block");
    }
    return {n, m, out.blocks.front()};
}

}  // namespace mrange
