#include "mrange/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace mrange {

std::string_view error_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NonSquare: return "NonSquare";
        case ErrorKind::NotHermitian: return "NotHermitian";
        case ErrorKind::NotPSD: return "NotPSD";
        case ErrorKind::BadShape: return "BadShape";
        case ErrorKind::ShapeMismatch: return "ShapeMismatch";
        case ErrorKind::NotCP: return "NotCP";
        case ErrorKind::NotUnital: return "NotUnital";
        case ErrorKind::InconsistentAffine: return "InconsistentAffine";
        case ErrorKind::NotPartitionOfIdentity: return "NotPartitionOfIdentity";
        case ErrorKind::RadiusTooLarge: return "RadiusTooLarge";
        case ErrorKind::RangeViolation: return "RangeViolation";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::NotContraction: return "NotContraction";
        case ErrorKind::WindowTooSmall: return "WindowTooSmall";
        case ErrorKind::ConditionFails: return "ConditionFails";
        case ErrorKind::SolverUndetermined: return "SolverUndetermined";
        case ErrorKind::NotStrictlyPositive: return "NotStrictlyPositive";
        case ErrorKind::RootPairingFailed: return "RootPairingFailed";
        case ErrorKind::MomentResidualTooLarge: return "MomentResidualTooLarge";
        case ErrorKind::BoundaryBand: return "BoundaryBand";
        case ErrorKind::BadArgument: return "BadArgument";
        case ErrorKind::BadJson: return "BadJson";
        case ErrorKind::UnknownCommand: return "UnknownCommand";
    }
    return "Unknown";
}

namespace {

Tolerances& mutable_defaults() {
    static Tolerances tol;
    return tol;
}

}  // namespace

void Tolerances::validate() const {
    if (!(psd_eps > 0) || !(rank_rel > 0) || !(fixpoint_eps > 0) || !(feas_eps > 0) || grid_angles <= 0) {
        throw Error(ErrorKind::BadArgument, "tolerances must be strictly positive");
    }
}

const Tolerances& default_tolerances() { return mutable_defaults(); }

void set_default_tolerances(const Tolerances& tol) {
    tol.validate();
    mutable_defaults() = tol;
}

void require_square(const CMat& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw Error(ErrorKind::NonSquare, std::string(what) + " must be square and nonempty, got " +
                                              std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
}

void require_finite(const CMat& m, const char* what) {
    if (!m.allFinite()) throw Error(ErrorKind::BadArgument, std::string(what) + " has non-finite entries");
}

CMat identity(int n) { return CMat::Identity(n, n); }

CMat adjoint(const CMat& m) { return m.adjoint(); }

CMat hermitian_part(const CMat& m) { return (m + m.adjoint()) * 0.5; }

EigResult herm_eig(const CMat& h) {
    require_square(h, "herm_eig input");
    const double scale = 1.0 + h.norm();
    const double asym = (h - h.adjoint()).norm();
    if (asym > 1e-8 * scale) {
        throw Error(ErrorKind::NotHermitian, "asymmetry " + std::to_string(asym) + " exceeds threshold");
    }
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(h));
    if (es.info() != Eigen::Success) throw Error(ErrorKind::NoConvergence, "Hermitian eigensolver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

PsdResult psd_check(const CMat& h, const Tolerances& tol) {
    const EigResult eig = herm_eig(h);
    const double min_eig = eig.eigenvalues(0);
    const double spectral = eig.eigenvalues.cwiseAbs().maxCoeff();
    return {min_eig >= -tol.psd_eps * (1.0 + spectral), min_eig};
}

RVec singular_values(const CMat& m) {
    if (m.size() == 0) return RVec();
    Eigen::JacobiSVD<CMat> svd(m);
    return svd.singularValues();
}

double op_norm(const CMat& m) {
    if (m.size() == 0) return 0.0;
    return singular_values(m)(0);
}

int numerical_rank(const CMat& m, const Tolerances& tol) {
    const RVec s = singular_values(m);
    if (s.size() == 0 || s(0) == 0.0) return 0;
    return static_cast<int>((s.array() > tol.rank_rel * s(0)).count());
}

CMat pinv(const CMat& m, const Tolerances& tol) {
    CMat out = CMat::Zero(m.cols(), m.rows());
    if (m.size() == 0) return out;
    Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVec& s = svd.singularValues();
    if (s(0) == 0.0) return out;
    const double cut = tol.rank_rel * s(0);
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        if (s(k) > cut) out += svd.matrixV().col(k) * (1.0 / s(k)) * svd.matrixU().col(k).adjoint();
    }
    return out;
}

CMat sqrt_psd(const CMat& h, const Tolerances& tol) {
    const EigResult eig = herm_eig(h);
    const double spectral = eig.eigenvalues.cwiseAbs().maxCoeff();
    if (eig.eigenvalues(0) < -tol.psd_eps * (1.0 + spectral)) {
        throw Error(ErrorKind::NotPSD, "min eigenvalue " + std::to_string(eig.eigenvalues(0)));
    }
    const RVec root = eig.eigenvalues.cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors * root.asDiagonal() * eig.eigenvectors.adjoint();
}

CMat psd_projection(const CMat& h) {
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(h));
    const RVec clipped = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().adjoint();
}

CMat kron(const CMat& a, const CMat& b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

CMat direct_sum(std::span<const CMat> blocks) {
    Eigen::Index rows = 0, cols = 0;
    for (const CMat& b : blocks) {
        rows += b.rows();
        cols += b.cols();
    }
    CMat out = CMat::Zero(rows, cols);
    Eigen::Index r = 0, c = 0;
    for (const CMat& b : blocks) {
        out.block(r, c, b.rows(), b.cols()) = b;
        r += b.rows();
        c += b.cols();
    }
    return out;
}

CMat matrix_unit(int n, int k, int j) {
    if (n <= 0 || k < 0 || j < 0 || k >= n || j >= n) {
        throw Error(ErrorKind::BadShape, "matrix unit index out of range");
    }
    CMat e = CMat::Zero(n, n);
    e(k, j) = 1.0;
    return e;
}

CMat shift(int n) {
    if (n <= 0) throw Error(ErrorKind::BadShape, "shift order must be positive");
    CMat s = CMat::Zero(n, n);
    for (int k = 0; k + 1 < n; ++k) s(k + 1, k) = 1.0;
    return s;
}

CMat matrix_power(const CMat& m, int p) {
    require_square(m, "matrix_power input");
    if (p < 0) throw Error(ErrorKind::BadArgument, "negative power");
    CMat out = identity(static_cast<int>(m.rows()));
    for (int k = 0; k < p; ++k) out = out * m;
    return out;
}

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double SplitMix64::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

cplx SplitMix64::complex_gaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    SplitMix64 mix(base ^ (index * 0xD1B54A32D192ED03ULL + 0x632BE59BD9B4E019ULL));
    return mix.next();
}

CMat random_gaussian(int rows, int cols, SplitMix64& rng) {
    CMat out(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) out(i, j) = rng.complex_gaussian();
    }
    return out;
}

CMat random_hermitian(int n, SplitMix64& rng) { return hermitian_part(random_gaussian(n, n, rng)); }

CMat random_isometry(int n, int m, std::uint64_t seed) {
    if (n <= 0 || m <= 0 || m > n) {
        throw Error(ErrorKind::BadShape, "random_isometry needs 0 < m <= n, got n=" + std::to_string(n) +
                                             " m=" + std::to_string(m));
    }
    SplitMix64 rng(seed);
    const CMat g = random_gaussian(n, m, rng);
    Eigen::HouseholderQR<CMat> qr(g);
    CMat q = qr.householderQ() * CMat::Identity(n, m);
    const CMat r = qr.matrixQR().topLeftCorner(m, m).triangularView<Eigen::Upper>();
    // Fix the column phases so the distribution is Haar.
    for (int k = 0; k < m; ++k) {
        const double a = std::abs(r(k, k));
        if (a > 0) q.col(k) *= r(k, k) / a;
    }
    return q;
}

CMat random_unitary(int n, std::uint64_t seed) { return random_isometry(n, n, seed); }

}  // namespace mrange
