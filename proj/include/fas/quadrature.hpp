#pragma once

#include <cstddef>
#include <functional>

namespace fas {

struct QuadratureSettings {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_subdivisions = 200;

    void validate() const;
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    int subdivisions = 0;
    std::size_t evaluations = 0;
};

/// Globally adaptive 21-point Gauss-Kronrod integration of f over [lo, hi].
///
/// The interval with the largest error estimate is bisected until the summed
/// estimate satisfies max(abs_tol, rel_tol * |I|). Throws ConvergenceError
/// when max_subdivisions is reached first.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double lo,
                                    double hi, const QuadratureSettings& settings = {});

}  // namespace fas
