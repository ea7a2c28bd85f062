#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "fas/correlation.hpp"
#include "fas/quadrature.hpp"

namespace fas {

/// N-port fluid antenna under Nakagami-m fading.
struct FasConfig {
    int ports = 1;
    double size_wavelengths = 1.0;
    int m = 1;
    /// Per-port Nakagami spread parameter; omega[k]^2 is the average channel power.
    std::vector<double> omega;

    /// All ports share the same omega.
    static FasConfig uniform(int ports, double size_wavelengths, int m, double omega = 1.0);

    void validate() const;
};

/// Gamma distribution fitted to the small-argument behavior of the FAS gain CDF.
struct GammaFit {
    double alpha = 1.0;
    double beta = 1.0;
    double log_beta = 0.0;
    /// exp(log_a0); may be +inf or 0 for extreme configurations, log_a0 is authoritative.
    double a0 = 1.0;
    double log_a0 = 0.0;
};

enum class Method { Exact, ClosedFormA2, GammaApprox, Asymptotic, Mrc, MonteCarlo };

const char* to_string(Method method);

struct OpPoint {
    double gamma_bar_db = 0.0;
    double op = 0.0;
};

struct OpCurve {
    Method method = Method::Exact;
    FasConfig config;
    std::vector<OpPoint> points;
    /// Set when any point exceeds 1 (possible only for Asymptotic).
    bool exceeds_one = false;

    std::vector<double> values() const;
    void validate() const;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// SNR threshold quoted in dB converted to a linear power ratio.
double snr_threshold_linear(double gamma_th_db);

/// Throws DomainError unless prof describes the same number of ports as cfg.
void check_compatible(const FasConfig& cfg, const CorrelationProfile& prof);

/// Outage probability by adaptive quadrature over the reference-port envelope r:
///
///   P = int_0^sqrt(gth/gbar) f_1(r) prod_{k>=2} [1 - Q_m(a_k(r), b_k)] dr
///
/// with f_1 the Nakagami-m envelope density of port 1. The product is
/// accumulated as a sum of logarithms.
double exact_op(const FasConfig& cfg, const CorrelationProfile& prof, double gamma_th,
                double gamma_bar, const QuadratureSettings& quad = {});

/// Same as exact_op but also returns the quadrature diagnostics.
QuadratureResult exact_op_detailed(const FasConfig& cfg, const CorrelationProfile& prof,
                                   double gamma_th, double gamma_bar,
                                   const QuadratureSettings& quad = {});

/// Closed form obtained by replacing each 1 - Q_m factor with its
/// small-argument leading term and integrating. Only meaningful for small
/// gamma_th / gamma_bar; the raw value is returned and may exceed 1.
double closed_form_op(const FasConfig& cfg, const CorrelationProfile& prof, double gamma_th,
                      double gamma_bar);

/// ln a0, where F(x) ~ a0 x^{mN} as x -> 0 for the selected-port gain.
double log_a0_coefficient(const FasConfig& cfg, const CorrelationProfile& prof);

/// a0 itself; throws OverflowError (carrying ln a0) if it is not representable.
double a0_coefficient(const FasConfig& cfg, const CorrelationProfile& prof);

GammaFit gamma_fit(const FasConfig& cfg, const CorrelationProfile& prof);

/// P(alpha, gth / (beta gbar)).
double approx_op(const GammaFit& fit, double gamma_th, double gamma_bar);

/// Leading term (gth / (beta gbar))^alpha / (alpha Gamma(alpha)); unclamped.
double asymptotic_op(const GammaFit& fit, double gamma_th, double gamma_bar);

/// L-branch MRC over i.i.d. Nakagami-m branches.
double mrc_op(int branches, int m, double omega, double gamma_th, double gamma_bar);

struct CurveOptions {
    QuadratureSettings quad;
    int mrc_branches = 2;
    /// 0 selects the hardware concurrency.
    unsigned threads = 1;
};

/// Evaluates one analytical method on an increasing grid of average SNRs (dB).
/// Points are computed independently; the result does not depend on threads.
OpCurve evaluate_curve(Method method, const FasConfig& cfg, const CorrelationProfile& prof,
                       double gamma_th, std::span<const double> gamma_bar_db,
                       const CurveOptions& options = {});

}  // namespace fas
