#include "mrange/cpmaps.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mrange {

MapOnUnits::MapOnUnits(int n, int m) : n_(n), m_(m) {
    if (n <= 0 || m <= 0) throw Error(ErrorKind::BadShape, "map dimensions must be positive");
    values_.assign(static_cast<std::size_t>(n * n), CMat::Zero(m, m));
}

MapOnUnits::MapOnUnits(int n, int m, std::vector<CMat> values) : n_(n), m_(m), values_(std::move(values)) {
    if (n <= 0 || m <= 0) throw Error(ErrorKind::BadShape, "map dimensions must be positive");
    if (values_.size() != static_cast<std::size_t>(n * n)) {
        throw Error(ErrorKind::ShapeMismatch, "expected n*n values on matrix units");
    }
    for (const CMat& v : values_) {
        if (v.rows() != m || v.cols() != m) throw Error(ErrorKind::ShapeMismatch, "value on a matrix unit is not m x m");
        require_finite(v, "map value");
    }
}

MapOnUnits MapOnUnits::identity(int n) {
    return from_action(n, n, [](const CMat& x) { return x; });
}

MapOnUnits MapOnUnits::transpose(int n) {
    return from_action(n, n, [](const CMat& x) { return CMat(x.transpose()); });
}

MapOnUnits MapOnUnits::from_action(int n, int m, const std::function<CMat(const CMat&)>& action) {
    MapOnUnits map(n, m);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            CMat v = action(matrix_unit(n, i, j));
            if (v.rows() != m || v.cols() != m) throw Error(ErrorKind::ShapeMismatch, "action returned wrong shape");
            map.at(i, j) = std::move(v);
        }
    }
    return map;
}

double MapOnUnits::unital_defect() const {
    CMat sum = CMat::Zero(m_, m_);
    for (int i = 0; i < n_; ++i) sum += at(i, i);
    return (sum - CMat::Identity(m_, m_)).norm();
}

double MapOnUnits::selfadjoint_defect() const {
    double worst = 0.0;
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) worst = std::max(worst, (at(j, i) - at(i, j).adjoint()).cwiseAbs().maxCoeff());
    }
    return worst;
}

ChoiMat choi(const MapOnUnits& map) {
    const int n = map.n(), m = map.m();
    ChoiMat c{n, m, CMat::Zero(n * m, n * m)};
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) c.block.block(i * m, j * m, m, m) = map.at(i, j);
    }
    return c;
}

MapOnUnits map_from_choi(const ChoiMat& c) {
    if (c.n <= 0 || c.m <= 0 || c.block.rows() != c.n * c.m || c.block.cols() != c.n * c.m) {
        throw Error(ErrorKind::ShapeMismatch, "Choi block size does not match (n, m)");
    }
    MapOnUnits map(c.n, c.m);
    for (int i = 0; i < c.n; ++i) {
        for (int j = 0; j < c.n; ++j) map.at(i, j) = c.block_at(i, j);
    }
    return map;
}

PsdResult is_cp(const MapOnUnits& map, const Tolerances& tol) { return psd_check(choi(map).block, tol); }

KrausSet kraus_from_choi(const ChoiMat& c, const Tolerances& tol) {
    const EigResult eig = herm_eig(c.block);
    const double top = eig.eigenvalues.cwiseAbs().maxCoeff();
    if (eig.eigenvalues(0) < -tol.psd_eps * (1.0 + top)) {
        throw Error(ErrorKind::NotPSD, "Choi matrix has eigenvalue " + std::to_string(eig.eigenvalues(0)));
    }
    KrausSet out;
    const double cut = tol.rank_rel * top;
    for (Eigen::Index k = eig.eigenvalues.size() - 1; k >= 0; --k) {
        const double lambda = eig.eigenvalues(k);
        if (lambda <= cut) break;
        const CVec v = std::sqrt(lambda) * eig.eigenvectors.col(k);
        CMat op(c.m, c.n);
        for (int i = 0; i < c.n; ++i) {
            for (int a = 0; a < c.m; ++a) op(a, i) = v(i * c.m + a);
        }
        out.operators.push_back(std::move(op));
    }
    return out;
}

MapOnUnits map_from_kraus(const KrausSet& kraus, int n) {
    if (kraus.operators.empty()) throw Error(ErrorKind::BadShape, "empty Kraus set");
    const int m = static_cast<int>(kraus.operators.front().rows());
    return MapOnUnits::from_action(n, m, [&](const CMat& x) {
        CMat y = CMat::Zero(m, m);
        for (const CMat& k : kraus.operators) {
            if (k.rows() != m || k.cols() != n) throw Error(ErrorKind::ShapeMismatch, "Kraus operator shape");
            y += k * x * k.adjoint();
        }
        return y;
    });
}

StinespringForm stinespring(const MapOnUnits& map, const Tolerances& tol) {
    const ChoiMat c = choi(map);
    const PsdResult cp = psd_check(c.block, tol);
    if (!cp.psd) throw Error(ErrorKind::NotCP, "Choi min eigenvalue " + std::to_string(cp.min_eig));
    const double defect = map.unital_defect();
    if (defect > 1e-9 * (1.0 + map.m())) {
        throw Error(ErrorKind::NotUnital, "phi(I) - I has norm " + std::to_string(defect));
    }
    const KrausSet kraus = kraus_from_choi(c, tol);
    const int n = map.n(), m = map.m();
    const int r = static_cast<int>(kraus.operators.size());
    StinespringForm form{CMat::Zero(n * r, m), r, n};
    for (int l = 0; l < r; ++l) {
        const CMat& k = kraus.operators[static_cast<std::size_t>(l)];
        for (int i = 0; i < n; ++i) {
            for (int a = 0; a < m; ++a) form.v(i * r + l, a) = std::conj(k(a, i));
        }
    }
    return form;
}

CMat stinespring_apply(const StinespringForm& form, const CMat& x) {
    if (x.rows() != form.n || x.cols() != form.n) throw Error(ErrorKind::ShapeMismatch, "argument is not n x n");
    return form.v.adjoint() * kron(x, identity(form.r)) * form.v;
}

CMat apply(const MapOnUnits& map, const CMat& x) {
    if (x.rows() != map.n() || x.cols() != map.n()) {
        throw Error(ErrorKind::ShapeMismatch, "apply: argument must be " + std::to_string(map.n()) + " square");
    }
    CMat y = CMat::Zero(map.m(), map.m());
    for (int i = 0; i < map.n(); ++i) {
        for (int j = 0; j < map.n(); ++j) {
            if (x(i, j) != cplx(0.0)) y += x(i, j) * map.at(i, j);
        }
    }
    return y;
}

CMat amplify(const MapOnUnits& map, int k, const CMat& a) {
    const int n = map.n(), m = map.m();
    if (k <= 0 || a.rows() != k * n || a.cols() != k * n) throw Error(ErrorKind::ShapeMismatch, "amplify: bad shape");
    CMat out(k * m, k * m);
    for (int r = 0; r < k; ++r) {
        for (int c = 0; c < k; ++c) out.block(r * m, c * m, m, m) = mrange::apply(map, a.block(r * n, c * n, n, n));
    }
    return out;
}

CMat cstar_convex(std::span<const CMat> xs, std::span<const CMat> as) {
    if (xs.empty() || xs.size() != as.size()) throw Error(ErrorKind::ShapeMismatch, "need equally many X_k and A_k");
    const Eigen::Index m = as.front().cols();
    CMat partition = CMat::Zero(m, m);
    CMat out = CMat::Zero(m, m);
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const CMat& x = xs[k];
        const CMat& a = as[k];
        if (a.cols() != m || x.rows() != x.cols() || x.cols() != a.rows()) {
            throw Error(ErrorKind::ShapeMismatch, "cstar_convex: incompatible shapes");
        }
        partition += a.adjoint() * a;
        out += a.adjoint() * x * a;
    }
    if ((partition - CMat::Identity(m, m)).norm() > 1e-9 * (1.0 + static_cast<double>(m))) {
        throw Error(ErrorKind::NotPartitionOfIdentity, "sum A_k^* A_k differs from I");
    }
    return out;
}

MapOnUnits unital_normalize(const MapOnUnits& map, const Tolerances& tol) {
    CMat unit = CMat::Zero(map.m(), map.m());
    for (int i = 0; i < map.n(); ++i) unit += map.at(i, i);
    const EigResult eig = herm_eig(unit);
    if (eig.eigenvalues(0) <= tol.rank_rel * std::max(1.0, eig.eigenvalues.maxCoeff())) {
        throw Error(ErrorKind::NotUnital, "phi(I) is singular; cannot normalize");
    }
    const RVec inv_root = eig.eigenvalues.cwiseSqrt().cwiseInverse();
    const CMat g = eig.eigenvectors * inv_root.asDiagonal() * eig.eigenvectors.adjoint();
    MapOnUnits out(map.n(), map.m());
    for (int i = 0; i < map.n(); ++i) {
        for (int j = 0; j < map.n(); ++j) out.at(i, j) = g * map.at(i, j) * g;
    }
    return out;
}

}  // namespace mrange
