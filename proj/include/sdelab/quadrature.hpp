#pragma once

#include <cstddef>
#include <functional>

namespace sdelab {

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    std::size_t subdivisions = 0;
    bool converged = false;
};

/// Globally adaptive 15-point Gauss-Kronrod integration of f over [a, b].
///
/// Repeatedly bisects the interval with the largest error estimate until the
/// summed estimate drops below `abs_tol` or `max_subdivisions` is reached.
QuadratureResult integrate_gk15(const std::function<double(double)>& f, double a, double b,
                                double abs_tol = 1e-12, std::size_t max_subdivisions = 10000);

}  // namespace sdelab
