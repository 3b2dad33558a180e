#include "mrange/angular.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "mrange/error.hpp"

namespace mrange {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kRefinedCells = 3;

double wrap(double angle) {
    double a = std::fmod(angle, kTwoPi);
    if (a < 0) a += kTwoPi;
    return a;
}

AngularOptimum golden_max(const std::function<double(double)>& f, double lo, double hi, double eps) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > eps) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? AngularOptimum{fc, c} : AngularOptimum{fd, d};
}

}  // namespace

AngularOptimum maximize_on_circle(const std::function<double(double)>& f, int grid, double bracket_eps) {
    if (grid < 3) throw Error(ErrorKind::BadArgument, "angular grid needs at least 3 points");
    const double h = kTwoPi / grid;
    std::vector<double> values(static_cast<std::size_t>(grid));
    for (int k = 0; k < grid; ++k) values[static_cast<std::size_t>(k)] = f(k * h);

    std::vector<int> order(static_cast<std::size_t>(grid));
    for (int k = 0; k < grid; ++k) order[static_cast<std::size_t>(k)] = k;
    const int cells = std::min(kRefinedCells, grid);
    std::partial_sort(order.begin(), order.begin() + cells, order.end(),
                      [&](int a, int b) { return values[static_cast<std::size_t>(a)] > values[static_cast<std::size_t>(b)]; });

    AngularOptimum best{values[static_cast<std::size_t>(order[0])], order[0] * h};
    for (int c = 0; c < cells; ++c) {
        const double centre = order[static_cast<std::size_t>(c)] * h;
        AngularOptimum local = golden_max(f, centre - h, centre + h, bracket_eps);
        if (local.value > best.value) best = local;
    }
    best.angle = wrap(best.angle);
    return best;
}

AngularOptimum minimize_on_circle(const std::function<double(double)>& f, int grid, double bracket_eps) {
    AngularOptimum r = maximize_on_circle([&](double t) { return -f(t); }, grid, bracket_eps);
    r.value = -r.value;
    return r;
}

}  // namespace mrange
