#pragma once

#include <functional>

namespace mrange {

struct AngularOptimum {
    double value = 0.0;
    double angle = 0.0;  // in [0, 2pi)
};

// Global maximum of a 2pi-periodic function: dense grid of `grid` angles,
// then golden-section refinement around the best few grid cells until the
// bracket is narrower than `bracket_eps`.
AngularOptimum maximize_on_circle(const std::function<double(double)>& f, int grid, double bracket_eps = 1e-12);
AngularOptimum minimize_on_circle(const std::function<double(double)>& f, int grid, double bracket_eps = 1e-12);

}  // namespace mrange
