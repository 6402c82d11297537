#pragma once

#include <functional>
#include <vector>

#include "llsc/common.hpp"

namespace llsc {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
};

/// Adaptive Gauss-Kronrod 7-15 integration of f over [a, b].
/// Throws AccuracyError if the interval budget is exhausted before
/// the requested tolerance is met. breakpoints (interior to [a,b]) seed the
/// initial subdivision so narrow features are not missed.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-9, double abs_tol = 0.0, int max_intervals = 8000,
                     const std::vector<double>& breakpoints = {});

/// Integral of f over (0, inf) via the substitution gamma = scale * u / (1 - u).
QuadResult integrate_semi_infinite(const std::function<double(double)>& f, double scale,
                                   double rel_tol = 1e-9, double abs_tol = 0.0,
                                   int max_intervals = 8000);

} // namespace llsc
