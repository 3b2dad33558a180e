// Shared test utilities. Random inputs here come from std::mt19937_64 so the
// tests do not depend on the library's own generator.
#pragma once

#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "mrange/linalg.hpp"

namespace testutil {

using mrange::CMat;
using mrange::cplx;

inline double max_abs(const CMat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline CMat gaussian(int rows, int cols, std::mt19937_64& gen) {
    std::normal_distribution<double> nd(0.0, 1.0);
    CMat m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) m(r, c) = cplx(nd(gen), nd(gen));
    }
    return m;
}

inline CMat hermitian(int n, std::mt19937_64& gen) {
    const CMat g = gaussian(n, n, gen);
    return 0.5 * (g + g.adjoint());
}

inline CMat unitary(int n, std::mt19937_64& gen) {
    Eigen::HouseholderQR<CMat> qr(gaussian(n, n, gen));
    return qr.householderQ() * CMat::Identity(n, n);
}

// Independent numerical radius: a very fine angle grid of the top eigenvalue of
// Re(e^{i theta} T), followed by parabolic interpolation at the best sample.
inline double radius_oracle(const CMat& t, int grid = 20000) {
    auto f = [&](double th) {
        const CMat h = 0.5 * (std::polar(1.0, th) * t + std::polar(1.0, -th) * t.adjoint());
        Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
        return es.eigenvalues().maxCoeff();
    };
    double best = -1e300, best_th = 0.0;
    const double h = 2.0 * M_PI / grid;
    for (int k = 0; k < grid; ++k) {
        const double v = f(k * h);
        if (v > best) {
            best = v;
            best_th = k * h;
        }
    }
    // ternary search in the neighbouring cells
    double lo = best_th - h, hi = best_th + h;
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        if (f(m1) < f(m2)) lo = m1; else hi = m2;
    }
    return std::max({best, f(0.5 * (lo + hi)), 0.0});
}

// Rescale T so that its numerical radius is `target`.
inline CMat with_radius(const CMat& t, double target) { return t * (target / radius_oracle(t, 4000)); }

}  // namespace testutil
