#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fas/analysis.hpp"

namespace fas {

/// Goodness of fit 1 - ||P - P_hat||^2 / ||P - mean(P)||^2 (1 is a perfect fit).
/// Throws DomainError on length mismatch or a constant reference.
double nmse(std::span<const double> reference, std::span<const double> candidate);

/// Curve overload; both curves must share the same gamma_bar grid exactly.
double nmse(const OpCurve& reference, const OpCurve& candidate);

/// nmse of log10 values, which weighs the deep tail like the high-SNR end of a
/// log-scale plot. All values must be positive.
double nmse_log10(std::span<const double> reference, std::span<const double> candidate);

/// One (threshold, average SNR) evaluation point, both linear.
struct SnrPoint {
    double gamma_th = 1.0;
    double gamma_bar = 1.0;
};

/// Fixed threshold, average SNR from start_db to stop_db inclusive.
std::vector<SnrPoint> db_grid(double gamma_th_db, double start_db, double stop_db, double step_db);

struct BenchmarkRecord {
    std::string label;
    double asymptotic_seconds = 0.0;
    double approx_seconds = 0.0;
    double exact_seconds = 0.0;
    /// 100 (1 - t_approx / t_exact).
    double time_reduction_percent = 0.0;
    /// NMSE of approx against exact over the grid.
    double nmse = 0.0;
    /// Same on log10 values; NaN if either curve underflows to 0 somewhere.
    double nmse_log10 = 0.0;
    std::size_t peak_alloc_bytes = 0;
    /// FNV-1a digest of the inputs each method consumed, ordered
    /// {asymptotic, approx, exact}.
    std::array<std::uint64_t, 3> input_checksums{};
};

/// Times the three methods on the same grid. Each method's full grid sweep is
/// repeated and the median wall time kept. Single-threaded by construction.
BenchmarkRecord benchmark_methods(const FasConfig& cfg, const CorrelationProfile& prof,
                                  std::span<const SnrPoint> grid, int repetitions,
                                  std::string label = {}, const QuadratureSettings& quad = {});

/// Least-squares slope of log10(y) against log10(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace fas
