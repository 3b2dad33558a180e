#include "mrange/numrange.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mrange/angular.hpp"

namespace mrange {

namespace {

constexpr double kBand = 1e-6;

RVec rotated_real_part_eigenvalues(const CMat& t, double theta) {
    const cplx phase = std::polar(1.0, theta);
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(phase * t), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

int angle_grid(const CMat& t, const Tolerances& tol) {
    return std::max(tol.grid_angles, 64 * static_cast<int>(t.rows()));
}

bool below_identity(double lambda_max, const Tolerances& tol) {
    // I - H >= 0 with the relative PSD threshold of psd_check.
    const double min_eig = 1.0 - lambda_max;
    return min_eig >= -tol.psd_eps * (1.0 + std::abs(min_eig) + std::abs(lambda_max));
}

}  // namespace

double support_value(const CMat& t, double theta) {
    const RVec ev = rotated_real_part_eigenvalues(t, theta);
    return ev(ev.size() - 1);
}

RadiusResult numerical_radius(const CMat& t, const Tolerances& tol) {
    require_square(t, "num_radius input");
    const AngularOptimum best =
        maximize_on_circle([&](double theta) { return support_value(t, theta); }, angle_grid(t, tol));
    // w >= 0 always; the support function of the zero matrix is 0.
    return {std::max(best.value, 0.0), best.angle};
}

double num_radius(const CMat& t, const Tolerances& tol) { return numerical_radius(t, tol).radius; }

std::vector<cplx> range_boundary(const CMat& t, int k) {
    require_square(t, "range_boundary input");
    if (k < 3) throw Error(ErrorKind::BadArgument, "range_boundary needs K >= 3");
    std::vector<cplx> points;
    points.reserve(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
        const double theta = 2.0 * std::numbers::pi * j / k;
        Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(std::polar(1.0, -theta) * t));
        const CVec v = es.eigenvectors().col(t.rows() - 1);
        points.push_back(v.dot(t * v));
    }
    return points;
}

std::vector<double> disk_sample_radii() {
    std::vector<double> radii;
    for (int k = 1; k <= 9; ++k) radii.push_back(0.1 * k);
    for (int k = 2; k <= 8; ++k) radii.push_back(1.0 - std::pow(10.0, -k));
    return radii;
}

RadiusReport radius_characterizations(const CMat& t, const Tolerances& tol) {
    require_square(t, "radius_characterizations input");
    RadiusReport report;
    const RadiusResult r = numerical_radius(t, tol);
    report.radius = r.radius;
    report.argmax_angle = r.argmax_angle;

    const int grid = angle_grid(t, tol);
    std::vector<double> angles;
    angles.reserve(static_cast<std::size_t>(grid) + 2);
    for (int k = 0; k < grid; ++k) angles.push_back(2.0 * std::numbers::pi * k / grid);
    angles.push_back(r.argmax_angle);
    angles.push_back(r.argmax_angle + std::numbers::pi);

    const std::vector<double> radii = disk_sample_radii();
    bool cond2 = true, cond3 = true, cond4 = true;
    double worst = std::numeric_limits<double>::infinity();
    for (double theta : angles) {
        const RVec ev = rotated_real_part_eigenvalues(t, theta);
        const double lo = ev(0);
        const double hi = ev(ev.size() - 1);
        // I + H >= 0  <=>  -H <= I
        cond2 = cond2 && below_identity(-lo, tol);
        cond3 = cond3 && below_identity(hi, tol);
        for (double rad : radii) cond4 = cond4 && below_identity(rad * hi, tol);
        worst = std::min(worst, 1.0 - hi);
    }
    report.conditions = {r.radius <= 1.0 + tol.psd_eps, cond2, cond3, cond4};
    report.worst_margin = worst;

    const bool expected = r.radius <= 1.0;
    const bool in_band = std::abs(r.radius - 1.0) <= kBand;
    report.consistent = in_band || std::all_of(report.conditions.begin(), report.conditions.end(),
                                               [&](bool c) { return c == expected; });
    return report;
}

}  // namespace mrange
